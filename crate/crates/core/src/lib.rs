pub mod arith;
pub mod bosonic;
pub mod fermionic;
pub mod genfun;
pub mod harness;
pub mod partitions;
pub mod symfun;

pub use arith::{Alphabet, ArithError, Coeff, MPoly, Monomial, Rational, TruncSeries};
pub use bosonic::{ring, Ring, RingContext, SchurCombo};
pub use fermionic::{CliffordWord, ExtVec};
pub use genfun::{extract_action, main_series, Bounds, Conventions, GenSeries, Params};
pub use harness::{b24_report, verify, SweepConfig, VerifyReport};
pub use partitions::{Partition, RectBound, Width};

pub type QPoly = MPoly<Rational>;
pub type QSeries = TruncSeries<Rational>;
pub type BPoly = MPoly<SchurCombo>;
pub type BSeries = TruncSeries<SchurCombo>;
