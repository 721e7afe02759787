use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{rat, ArithError, Alphabet, Coeff, MPoly, Monomial, Rational};

/// Truncated multivariate power series.
///
/// Variables listed in `bounds` are series variables truncated at the given
/// exponent; every other variable of the body is a polynomial parameter.
#[derive(Clone)]
pub struct TruncSeries<C> {
    body: MPoly<C>,
    bounds: BTreeMap<String, u32>,
}

impl<C: Coeff> PartialEq for TruncSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.bounds == other.bounds && self.body == other.body
    }
}

impl<C: Coeff> TruncSeries<C> {
    pub fn new(body: MPoly<C>, bounds: &[(&str, u32)]) -> Self {
        let bounds: BTreeMap<String, u32> =
            bounds.iter().map(|&(v, b)| (v.to_string(), b)).collect();
        Self::from_parts(body, bounds)
    }

    pub fn from_parts(body: MPoly<C>, bounds: BTreeMap<String, u32>) -> Self {
        let vars = body.alphabet().union(&Alphabet::new(bounds.keys().cloned()));
        let body = body.to_alphabet(&vars).expect("alphabet only grows");
        let bv = bound_vec(&vars, &bounds);
        TruncSeries {
            body: body.truncated(&bv),
            bounds,
        }
    }

    pub fn body(&self) -> &MPoly<C> {
        &self.body
    }

    pub fn into_body(self) -> MPoly<C> {
        self.body
    }

    pub fn bounds(&self) -> &BTreeMap<String, u32> {
        &self.bounds
    }

    pub fn bound(&self, var: &str) -> Option<u32> {
        self.bounds.get(var).copied()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.body.alphabet()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn zero_like(&self) -> Self {
        TruncSeries {
            body: MPoly::zero(self.body.alphabet()),
            bounds: self.bounds.clone(),
        }
    }

    pub fn one_like(&self) -> Self {
        TruncSeries {
            body: MPoly::one(self.body.alphabet()),
            bounds: self.bounds.clone(),
        }
    }

    /// Same body re-truncated at tighter bounds.
    pub fn retruncate(&self, bounds: &[(&str, u32)]) -> Self {
        let mut b = self.bounds.clone();
        for &(v, e) in bounds {
            let e = b.get(v).map_or(e, |&old| old.min(e));
            b.insert(v.to_string(), e);
        }
        Self::from_parts(self.body.clone(), b)
    }

    fn merged_bounds(&self, other: &Self) -> BTreeMap<String, u32> {
        let mut b = self.bounds.clone();
        for (v, &e) in &other.bounds {
            let e = b.get(v).map_or(e, |&old| old.min(e));
            b.insert(v.clone(), e);
        }
        b
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        Self::from_parts(self.body.add_ref(&other.body), self.merged_bounds(other))
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        Self::from_parts(self.body.sub_ref(&other.body), self.merged_bounds(other))
    }

    pub fn neg_ref(&self) -> Self {
        TruncSeries {
            body: self.body.neg_ref(),
            bounds: self.bounds.clone(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        TruncSeries {
            body: self.body.scale(q),
            bounds: self.bounds.clone(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let bounds = self.merged_bounds(other);
        let vars = self
            .body
            .alphabet()
            .union(other.body.alphabet())
            .union(&Alphabet::new(bounds.keys().cloned()));
        let a = self.body.to_alphabet(&vars).expect("alphabet only grows");
        let b = other.body.to_alphabet(&vars).expect("alphabet only grows");
        let bv = bound_vec(&vars, &bounds);
        TruncSeries {
            body: a.mul_bounded(&b, Some(&bv)),
            bounds,
        }
    }

    /// Multiplies by a polynomial, truncating to this series' bounds.
    pub fn mul_poly(&self, p: &MPoly<C>) -> Self {
        self.mul_ref(&TruncSeries::from_parts(p.clone(), self.bounds.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = self.one_like();
        for _ in 0..k {
            out = out.mul_ref(self);
        }
        out
    }

    /// Splits off the part with every bounded variable at exponent zero.
    fn split_constant(&self) -> (MPoly<C>, Self) {
        let idx: Vec<usize> = self
            .bounds
            .keys()
            .filter_map(|v| self.body.alphabet().index(v))
            .collect();
        let is_const = |m: &Monomial| idx.iter().all(|&i| m.exp(i) == 0);
        let c = self.body.filter_terms(|m, _| is_const(m));
        let rest = self.body.filter_terms(|m, _| !is_const(m));
        (
            c,
            TruncSeries {
                body: rest,
                bounds: self.bounds.clone(),
            },
        )
    }

    /// Scalar value of the constant part, if it is a scalar.
    fn scalar_constant(&self) -> (Option<Rational>, Self) {
        let (c, rest) = self.split_constant();
        let scalar = if c.is_zero() {
            Some(Rational::zero())
        } else if c.len() == 1 {
            let (m, v) = c.terms().iter().next().expect("one term");
            if m.is_one() {
                v.as_rational()
            } else {
                None
            }
        } else {
            None
        };
        (scalar, rest)
    }

    /// Sums `coeffs[k] * u^k` for a nilpotent `u` until the powers vanish.
    fn nilpotent_sum(u: &Self, coeff: impl Fn(u32) -> Rational) -> Self {
        let mut out = u.one_like().scale(&coeff(0));
        let mut power = u.one_like();
        let mut k = 0;
        loop {
            power = power.mul_ref(u);
            k += 1;
            if power.is_zero() {
                return out;
            }
            let c = coeff(k);
            if !c.is_zero() {
                out = out.add_ref(&power.scale(&c));
            }
            assert!(
                k <= 1 + u.bounds.values().map(|&b| b as u64).sum::<u64>() as u32,
                "series part is not nilpotent; every term must involve a bounded variable"
            );
        }
    }

    /// Multiplicative inverse; the constant part must be a nonzero scalar.
    pub fn inverse(&self) -> Result<Self, ArithError> {
        let (c, rest) = self.scalar_constant();
        let c = c.filter(|c| !c.is_zero()).ok_or(ArithError::NonUnitConstant)?;
        let cinv = c.recip();
        let u = rest.scale(&cinv);
        // 1/(c(1+u)) = c^{-1} sum (-u)^k
        let s = Self::nilpotent_sum(&u, |k| if k % 2 == 0 { rat(1) } else { rat(-1) });
        Ok(s.scale(&cinv))
    }

    pub fn exp(&self) -> Result<Self, ArithError> {
        let (c, u) = self.scalar_constant();
        if c.is_none_or(|c| !c.is_zero()) {
            return Err(ArithError::NonZeroConstant);
        }
        Ok(Self::nilpotent_sum(&u, |k| factorial(k).recip()))
    }

    pub fn log(&self) -> Result<Self, ArithError> {
        let (c, u) = self.scalar_constant();
        if c.is_none_or(|c| !c.is_one()) {
            return Err(ArithError::LogConstant);
        }
        Ok(Self::nilpotent_sum(&u, |k| {
            if k == 0 {
                Rational::zero()
            } else if k % 2 == 1 {
                Rational::new(1.into(), (k as i64).into())
            } else {
                Rational::new((-1).into(), (k as i64).into())
            }
        }))
    }

    /// Coefficient of a partial monomial in the series variables, as a
    /// polynomial in the remaining variables.
    pub fn coefficient(&self, exps: &[(&str, u32)]) -> Result<MPoly<C>, ArithError> {
        for &(v, e) in exps {
            if let Some(&b) = self.bounds.get(v) {
                if e > b {
                    return Err(ArithError::BeyondTruncation {
                        var: v.to_string(),
                        exp: e,
                        bound: b,
                    });
                }
            }
        }
        // every series variable not mentioned is taken at exponent 0
        let mut full: Vec<(&str, u32)> = exps.to_vec();
        for v in self.bounds.keys() {
            if !exps.iter().any(|(n, _)| n == v) {
                full.push((v.as_str(), 0));
            }
        }
        self.body.coefficient_in(&full)
    }
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * rat(i))
}

fn bound_vec(vars: &Alphabet, bounds: &BTreeMap<String, u32>) -> Vec<Option<u32>> {
    vars.names().iter().map(|v| bounds.get(v).copied()).collect()
}

impl<C: Coeff> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries({} ; {:?})", self.body, self.bounds)
    }
}

impl<C: Coeff> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(", self.body)?;
        for (i, (v, b)) in self.bounds.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}^{}", b + 1)?;
        }
        write!(f, ")")
    }
}

/// Ring elements usable as determinant entries. Products keep row order, so
/// the wedge algebra is handled correctly.
pub trait DetEntry: Clone {
    fn det_zero(&self) -> Self;
    fn det_is_zero(&self) -> bool;
    fn det_add(&self, other: &Self) -> Self;
    fn det_neg(&self) -> Self;
    fn det_mul(&self, other: &Self) -> Self;
}

impl<C: Coeff> DetEntry for C {
    fn det_zero(&self) -> Self {
        C::zero()
    }
    fn det_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn det_add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_assign_ref(other);
        s
    }
    fn det_neg(&self) -> Self {
        -self.clone()
    }
    fn det_mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
}

impl<C: Coeff> DetEntry for MPoly<C> {
    fn det_zero(&self) -> Self {
        MPoly::zero(self.alphabet())
    }
    fn det_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn det_add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn det_neg(&self) -> Self {
        self.neg_ref()
    }
    fn det_mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
}

impl<C: Coeff> DetEntry for TruncSeries<C> {
    fn det_zero(&self) -> Self {
        self.zero_like()
    }
    fn det_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn det_add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn det_neg(&self) -> Self {
        self.neg_ref()
    }
    fn det_mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
}

/// Determinant of a square matrix by row-wise Laplace expansion over column
/// subsets: `sum_sigma sgn(sigma) m[0][sigma 0] * ... * m[k-1][sigma(k-1)]`.
///
/// `one` is the value of the empty product.
pub fn determinant<T: DetEntry>(m: &[Vec<T>], one: &T) -> T {
    let k = m.len();
    assert!(m.iter().all(|row| row.len() == k), "matrix is not square");
    assert!(k < 32, "matrix too large");
    let mut layer: BTreeMap<u32, T> = BTreeMap::new();
    layer.insert(0, one.clone());
    for row in m {
        let mut next: BTreeMap<u32, T> = BTreeMap::new();
        for (&mask, partial) in &layer {
            for (c, entry) in row.iter().enumerate() {
                if mask & (1 << c) != 0 || entry.det_is_zero() {
                    continue;
                }
                let inversions = (mask >> (c + 1)).count_ones();
                let mut term = partial.det_mul(entry);
                if term.det_is_zero() {
                    continue;
                }
                if inversions % 2 == 1 {
                    term = term.det_neg();
                }
                let key = mask | (1 << c);
                let merged = match next.remove(&key) {
                    Some(old) => old.det_add(&term),
                    None => term,
                };
                next.insert(key, merged);
            }
        }
        layer = next;
    }
    layer
        .remove(&((1u64 << k) as u32).wrapping_sub(1))
        .unwrap_or_else(|| one.det_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_qpoly, ratio};

    fn s(p: &str, bounds: &[(&str, u32)]) -> TruncSeries<Rational> {
        TruncSeries::new(parse_qpoly(p).unwrap(), bounds)
    }

    #[test]
    fn geometric_inverse() {
        let inv = s("1 - c1*z", &[("z", 3)]).inverse().unwrap();
        assert_eq!(inv, s("1 + c1*z + c1^2*z^2 + c1^3*z^3", &[("z", 3)]));
    }

    #[test]
    fn segre_inverse() {
        let inv = s("1 - c1*z + c2*z^2", &[("z", 3)]).inverse().unwrap();
        let want = s(
            "1 + c1*z + (c1^2 - c2)*z^2 + (c1^3 - 2*c1*c2)*z^3",
            &[("z", 3)],
        );
        assert_eq!(inv, want);
        assert!(s("c1*z", &[("z", 2)]).inverse().is_err());
        assert_eq!(s("1", &[]).inverse().unwrap(), s("1", &[]));
        assert_eq!(s("2", &[("z", 1)]).inverse().unwrap().body().coefficient(&[]).unwrap(), ratio(1, 2));
    }

    #[test]
    fn exp_and_log() {
        let e = s("z", &[("z", 3)]).exp().unwrap();
        assert_eq!(e, s("1 + z + 1/2*z^2 + 1/6*z^3", &[("z", 3)]));
        let l = s("1 + S1*z + S2*z^2", &[("z", 2)]).log().unwrap();
        assert_eq!(l, s("S1*z + (S2 - 1/2*S1^2)*z^2", &[("z", 2)]));
        let one_plus = s("1 + S1*z", &[("z", 4)]);
        assert_eq!(one_plus.log().unwrap().exp().unwrap(), one_plus);
        assert!(s("1 + z", &[("z", 2)]).exp().is_err());
        assert!(s("2 + z", &[("z", 2)]).log().is_err());
    }

    #[test]
    fn coefficient_respects_bounds() {
        let a = s("1 + c1*z + c1^2*z^2", &[("z", 2)]);
        assert_eq!(a.coefficient(&[("z", 2)]).unwrap(), parse_qpoly("c1^2").unwrap());
        assert!(matches!(
            a.coefficient(&[("z", 3)]),
            Err(ArithError::BeyondTruncation { .. })
        ));
    }

    #[test]
    fn small_determinants() {
        let m: Vec<Vec<Rational>> = vec![
            vec![rat(2), rat(0), rat(1)],
            vec![rat(1), rat(3), rat(2)],
            vec![rat(1), rat(1), rat(1)],
        ];
        assert_eq!(determinant(&m, &rat(1)), rat(0));
        let e: Vec<Vec<Rational>> = vec![];
        assert_eq!(determinant(&e, &rat(1)), rat(1));
        let p = |x: &str| parse_qpoly(x).unwrap();
        let m = vec![vec![p("a"), p("b")], vec![p("c"), p("d")]];
        assert_eq!(determinant(&m, &p("1")), p("a*d - b*c"));
    }
}
