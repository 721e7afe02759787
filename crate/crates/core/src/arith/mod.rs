//! Exact arithmetic: rationals, sparse multivariate polynomials and truncated
//! multivariate power series, all generic over a coefficient ring.

mod coeff;
mod mpoly;
mod parse;
mod series;

pub use coeff::{format_rational, parse_rational, rat, ratio, Coeff, Rational};
pub use mpoly::{Alphabet, MPoly, Monomial, TermJson};
pub use parse::parse_qpoly;
pub use series::{determinant, DetEntry, TruncSeries};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("constant term is not an invertible scalar")]
    NonUnitConstant,
    #[error("exp requires a series with zero constant term")]
    NonZeroConstant,
    #[error("log requires a series with constant term 1")]
    LogConstant,
    #[error("monomial exponent {exp} of `{var}` exceeds truncation bound {bound}")]
    BeyondTruncation { var: String, exp: u32, bound: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exact division left a nonzero remainder")]
    InexactDivision,
}
