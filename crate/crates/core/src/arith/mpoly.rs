use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{BuildHasherDefault, Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{format_rational, parse_rational, ArithError, Coeff, Rational};

/// Ordered list of distinct variable names shared by polynomials.
#[derive(Clone)]
pub struct Alphabet(Arc<Vec<String>>);

impl Alphabet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, a) in names.iter().enumerate() {
            assert!(
                !names[..i].contains(a),
                "duplicate variable `{a}` in alphabet"
            );
        }
        Alphabet(Arc::new(names))
    }

    pub fn empty() -> Self {
        Alphabet(Arc::new(Vec::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index(name).is_some()
    }

    /// `self` followed by the variables of `other` not already present.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        if self == other || other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let mut names = self.0.as_ref().clone();
        for v in other.names() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        if names.len() == self.len() {
            self.clone()
        } else {
            Alphabet(Arc::new(names))
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector aligned with an [`Alphabet`]; absent variables have exponent 0.
///
/// Graded lexicographic order: total degree ascending, then within a degree
/// larger exponents of earlier variables come first (so `x^2 < x*y < y^2`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 10]>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(SmallVec::from_elem(0, len))
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn set(&mut self, i: usize, e: u32) {
        self.0[i] = e;
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn within(&self, bounds: &[Option<u32>]) -> bool {
        self.0
            .iter()
            .zip(bounds)
            .all(|(&e, b)| b.is_none_or(|b| e <= b))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Default)]
pub(crate) struct FxHasher(u64);

impl Hasher for FxHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u32(&mut self, i: u32) {
        self.write_u64(i as u64);
    }

    fn write_usize(&mut self, i: usize) {
        self.write_u64(i as u64);
    }

    fn write_u64(&mut self, i: u64) {
        self.0 = (self.0.rotate_left(5) ^ i).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }
}

pub(crate) type FxMap<K, V> = HashMap<K, V, BuildHasherDefault<FxHasher>>;

/// Sparse multivariate polynomial with coefficients in `C`.
///
/// Invariant: no stored coefficient is zero, and every monomial has the
/// length of the alphabet.
#[derive(Clone)]
pub struct MPoly<C> {
    vars: Alphabet,
    terms: BTreeMap<Monomial, C>,
}

/// One term of the JSON form of a polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: BTreeMap<String, u32>,
    pub coeff: String,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(vars: &Alphabet) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Alphabet, c: C) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(vars: &Alphabet) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn from_rational(vars: &Alphabet, q: Rational) -> Self {
        Self::constant(vars, C::from_rational(q))
    }

    pub fn var(vars: &Alphabet, name: &str) -> Result<Self, ArithError> {
        Self::monomial(vars, &[(name, 1)], C::one())
    }

    /// `c * x1^e1 * x2^e2 ...`
    pub fn monomial(vars: &Alphabet, exps: &[(&str, u32)], c: C) -> Result<Self, ArithError> {
        let m = Self::monomial_key(vars, exps)?;
        let mut p = Self::zero(vars);
        p.add_term(m, c);
        Ok(p)
    }

    pub(crate) fn monomial_key(vars: &Alphabet, exps: &[(&str, u32)]) -> Result<Monomial, ArithError> {
        let mut m = Monomial::one(vars.len());
        for &(name, e) in exps {
            let i = vars
                .index(name)
                .ok_or_else(|| ArithError::UnknownVariable(name.to_string()))?;
            m.set(i, m.exp(i) + e);
        }
        Ok(m)
    }

    pub fn from_terms<I>(vars: &Alphabet, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "monomial does not match alphabet");
            p.add_term(m, c);
        }
        p
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.vars.index(name) {
            Some(i) => self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Adds `c * m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                old.add_assign_ref(&c);
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn coeff_of(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of a fully specified monomial (unlisted variables have exponent 0).
    pub fn coefficient(&self, exps: &[(&str, u32)]) -> Result<C, ArithError> {
        for &(name, e) in exps {
            if e > 0 && !self.vars.contains(name) {
                return Ok(C::zero());
            }
        }
        let exps: Vec<(&str, u32)> = exps
            .iter()
            .copied()
            .filter(|(n, _)| self.vars.contains(n))
            .collect();
        Ok(self.coeff_of(&Self::monomial_key(&self.vars, &exps)?))
    }

    /// Coefficient of the given partial monomial, as a polynomial in the
    /// remaining variables.
    pub fn coefficient_in(&self, exps: &[(&str, u32)]) -> Result<MPoly<C>, ArithError> {
        let mut idx = Vec::new();
        for &(name, e) in exps {
            match self.vars.index(name) {
                Some(i) => idx.push((i, e)),
                None if e == 0 => {}
                None => return Ok(Self::zero(&self.vars)),
            }
        }
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if idx.iter().all(|&(i, e)| m.exp(i) == e) {
                let mut m2 = m.clone();
                for &(i, _) in &idx {
                    m2.set(i, 0);
                }
                out.add_term(m2, c.clone());
            }
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a larger (or reordered) alphabet.
    pub fn to_alphabet(&self, target: &Alphabet) -> Result<Self, ArithError> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match target.index(name) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|m| m.exp(i) > 0) {
                        return Err(ArithError::UnknownVariable(name.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = Monomial::one(target.len());
            for (i, j) in map.iter().enumerate() {
                if let Some(j) = j {
                    m2.set(*j, m.exp(i));
                }
            }
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    pub(crate) fn unify<'a>(a: &'a Self, b: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        if a.vars == b.vars {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let u = a.vars.union(&b.vars);
        let lift = |p: &'a Self| -> Cow<'a, Self> {
            if p.vars == u {
                Cow::Borrowed(p)
            } else {
                Cow::Owned(p.to_alphabet(&u).expect("union alphabet contains all variables"))
            }
        };
        (lift(a), lift(b))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let mut out = a.into_owned();
        for (m, c) in &b.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(q))).collect(),
        }
    }

    /// Multiplies every coefficient by `c` on the right.
    pub fn mul_coeff(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.mul_ref(c));
        }
        out
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.mul_bounded(other, None)
    }

    /// Product keeping only monomials inside `bounds` (aligned with the
    /// union alphabet, `None` = unbounded).
    pub(crate) fn mul_bounded(&self, other: &Self, bounds: Option<&[Option<u32>]>) -> Self {
        let (a, b) = Self::unify(self, other);
        let vars = a.vars.clone();
        if a.is_zero() || b.is_zero() {
            return Self::zero(&vars);
        }
        let mut acc: FxMap<Monomial, C> = FxMap::default();
        for (ma, ca) in &a.terms {
            if let Some(bd) = bounds {
                if !ma.within(bd) {
                    continue;
                }
            }
            for (mb, cb) in &b.terms {
                let m = ma.product(mb);
                if let Some(bd) = bounds {
                    if !m.within(bd) {
                        continue;
                    }
                }
                let c = ca.mul_ref(cb);
                if c.is_zero() {
                    continue;
                }
                match acc.get_mut(&m) {
                    Some(old) => old.add_assign_ref(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        MPoly {
            vars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..k {
            out = out.mul_ref(self);
        }
        out
    }

    /// Drops monomials outside `bounds` (aligned with this alphabet).
    pub(crate) fn truncated(&self, bounds: &[Option<u32>]) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.within(bounds))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial, &C) -> bool) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Replaces the variable `name` by the polynomial `value`.
    pub fn substitute(&self, name: &str, value: &Self) -> Self {
        let Some(i) = self.vars.index(name) else {
            return self.clone();
        };
        let mut by_exp: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.set(i, 0);
            by_exp
                .entry(m.exp(i))
                .or_insert_with(|| Self::zero(&self.vars))
                .add_term(m2, c.clone());
        }
        let mut out = Self::zero(&self.vars);
        let mut power = Self::one(&self.vars);
        let mut e = 0;
        for (k, part) in by_exp {
            while e < k {
                power = power.mul_ref(value);
                e += 1;
            }
            out = out.add_ref(&part.mul_ref(&power));
        }
        out
    }

    /// Exchanges two variables.
    pub fn swap_vars(&self, a: &str, b: &str) -> Result<Self, ArithError> {
        let ia = self
            .vars
            .index(a)
            .ok_or_else(|| ArithError::UnknownVariable(a.to_string()))?;
        let ib = self
            .vars
            .index(b)
            .ok_or_else(|| ArithError::UnknownVariable(b.to_string()))?;
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.0.swap(ia, ib);
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Exact quotient by `(x_hi - x_lo)`, by synthetic division in `x_hi`.
    pub fn div_by_difference(&self, hi: &str, lo: &str) -> Result<Self, ArithError> {
        let ih = self
            .vars
            .index(hi)
            .ok_or_else(|| ArithError::UnknownVariable(hi.to_string()))?;
        let mut parts: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.set(ih, 0);
            parts
                .entry(m.exp(ih))
                .or_insert_with(|| Self::zero(&self.vars))
                .add_term(m2, c.clone());
        }
        let Some(&top) = parts.keys().next_back() else {
            return Ok(self.clone());
        };
        let x_lo = Self::var(&self.vars, lo)?;
        let mut quotient = Self::zero(&self.vars);
        // carry = q_{e-1} = P_e + x_lo * q_e, walking e downwards
        let mut carry = Self::zero(&self.vars);
        for e in (0..=top).rev() {
            let pe = parts.remove(&e).unwrap_or_else(|| Self::zero(&self.vars));
            let next = pe.add_ref(&x_lo.mul_ref(&carry));
            if e == 0 {
                if !next.is_zero() {
                    return Err(ArithError::InexactDivision);
                }
                break;
            }
            for (m, c) in &next.terms {
                let mut m2 = m.clone();
                m2.set(ih, e - 1);
                quotient.add_term(m2, c.clone());
            }
            carry = next;
        }
        Ok(quotient)
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                exponents: self
                    .vars
                    .names()
                    .iter()
                    .zip(m.exps())
                    .filter(|(_, &e)| e > 0)
                    .map(|(n, &e)| (n.clone(), e))
                    .collect(),
                coeff: c.to_string(),
            })
            .collect()
    }

    fn write_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, &e) in self.vars.names().iter().zip(m.exps()) {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

impl MPoly<Rational> {
    pub fn from_json(vars: &Alphabet, terms: &[TermJson]) -> Result<Self, ArithError> {
        let mut p = Self::zero(vars);
        for t in terms {
            let exps: Vec<(&str, u32)> = t.exponents.iter().map(|(n, &e)| (n.as_str(), e)).collect();
            let m = Self::monomial_key(vars, &exps)?;
            p.add_term(m, parse_rational(&t.coeff)?);
        }
        Ok(p)
    }
}

impl<C: Coeff> PartialEq for MPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = Self::unify(self, other);
        a.terms == b.terms
    }
}

impl<C: Coeff> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl<C: Coeff> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            match c.as_rational() {
                Some(q) => {
                    let neg = q < Rational::zero();
                    let mag = if neg { -q } else { q };
                    match (k, neg) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    if m.is_one() {
                        write!(f, "{}", format_rational(&mag))?;
                    } else {
                        if !mag.is_one() {
                            write!(f, "{}*", format_rational(&mag))?;
                        }
                        self.write_monomial(m, f)?;
                    }
                }
                None => {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    if m.is_one() {
                        write!(f, "({c})")?;
                    } else {
                        write!(f, "({c})*")?;
                        self.write_monomial(m, f)?;
                    }
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<C: Coeff> $tr<&MPoly<C>> for &MPoly<C> {
            type Output = MPoly<C>;
            fn $method(self, rhs: &MPoly<C>) -> MPoly<C> {
                self.$inner(rhs)
            }
        }

        impl<C: Coeff> $tr for MPoly<C> {
            type Output = MPoly<C>;
            fn $method(self, rhs: MPoly<C>) -> MPoly<C> {
                (&self).$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl<C: Coeff> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        self.neg_ref()
    }
}

impl<C: Coeff> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        self.neg_ref()
    }
}
