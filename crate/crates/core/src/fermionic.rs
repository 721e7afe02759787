//! The exterior algebra of `V_n = Q[X]/(X^n)`: wedge, contraction, Clifford
//! words and their action, the trace representation, `σ₊`/`σ̄₊`, and the
//! identification `⋀^r V_n ≅ B_{r,n}`.
//!
//! Throughout, `n: Option<u32>` is the dimension bound with `None` for `n = ∞`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use crate::arith::{format_rational, rat, Alphabet, Coeff, MPoly, Monomial, Rational, TruncSeries};
use crate::bosonic::{ring, BosonicError, SchurCombo};
use crate::partitions::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FermionicError {
    #[error("expected a homogeneous vector of degree {expected}, found degree {found}")]
    NotHomogeneous { expected: u32, found: u32 },
    #[error("cannot parse Clifford word: {0}")]
    Parse(String),
    #[error(transparent)]
    Ring(#[from] BosonicError),
}

fn below(i: u32, n: Option<u32>) -> bool {
    n.is_none_or(|n| i < n)
}

/// `X^{a_1} ∧ ... ∧ X^{a_d}` with `a_1 > ... > a_d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtMonomial(SmallVec<[u32; 8]>);

impl ExtMonomial {
    pub fn empty() -> Self {
        ExtMonomial(SmallVec::new())
    }

    /// Sorts `exps` into decreasing order; returns the permutation sign, or
    /// `None` if an exponent repeats.
    pub fn normalize(exps: &[u32]) -> Option<(i32, ExtMonomial)> {
        let mut v: SmallVec<[u32; 8]> = SmallVec::from_slice(exps);
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] < v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && v[j - 1] == v[j] {
                return None;
            }
        }
        Some((sign, ExtMonomial(v)))
    }

    /// `X^r(λ)`: exponents `a_i = λ_i + r - i`.
    pub fn from_partition(la: &Partition, r: u32) -> Option<ExtMonomial> {
        let parts = la.padded(r as usize)?;
        Some(ExtMonomial(
            parts
                .iter()
                .enumerate()
                .map(|(i, &l)| l + r - 1 - i as u32)
                .collect(),
        ))
    }

    /// Inverse of [`ExtMonomial::from_partition`]: `λ_i = a_i - (d - i)`.
    pub fn to_partition(&self) -> Partition {
        let d = self.0.len() as u32;
        let parts: Vec<u32> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &a)| a - (d - 1 - i as u32))
            .collect();
        Partition::new(&parts).expect("strictly decreasing exponents give a partition")
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }
}

impl fmt::Debug for ExtMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{:?}", self.0.as_slice())
    }
}

/// Element of `⋀ V_n`. Carries no `n`: operators that create new factors take
/// the bound explicitly, everything else preserves it.
#[derive(Clone, PartialEq, Default)]
pub struct ExtVec {
    terms: BTreeMap<ExtMonomial, Rational>,
}

impl ExtVec {
    pub fn scalar(q: Rational) -> Self {
        let mut v = ExtVec::default();
        v.add_term(ExtMonomial::empty(), q);
        v
    }

    /// `X^{e_1} ∧ ... ∧ X^{e_d}` in any order, normalized.
    pub fn wedge_of(exps: &[u32], n: Option<u32>) -> Self {
        let mut v = ExtVec::default();
        if exps.iter().any(|&e| !below(e, n)) {
            return v;
        }
        if let Some((sign, m)) = ExtMonomial::normalize(exps) {
            v.add_term(m, rat(sign as i64));
        }
        v
    }

    /// `X^i` (zero when `i >= n`).
    pub fn x(i: u32, n: Option<u32>) -> Self {
        Self::wedge_of(&[i], n)
    }

    /// `X^r(λ)`.
    pub fn basis(la: &Partition, r: u32) -> Self {
        let mut v = ExtVec::default();
        if let Some(m) = ExtMonomial::from_partition(la, r) {
            v.add_term(m, Rational::one());
        }
        v
    }

    pub fn terms(&self) -> &BTreeMap<ExtMonomial, Rational> {
        &self.terms
    }

    pub fn coeff(&self, m: &ExtMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: ExtMonomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                *c += q;
                if c.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, q);
            }
        }
    }

    fn add_scaled(&mut self, other: &ExtVec, q: &Rational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * q);
        }
    }

    pub fn scale_by(&self, q: &Rational) -> Self {
        let mut out = ExtVec::default();
        out.add_scaled(self, q);
        out
    }

    pub fn max_index(&self) -> Option<u32> {
        self.terms.keys().filter_map(|m| m.0.first().copied()).max()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn wedge(&self, other: &ExtVec) -> ExtVec {
        let mut out = ExtVec::default();
        let mut buf: Vec<u32> = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                buf.clear();
                buf.extend_from_slice(&a.0);
                buf.extend_from_slice(&b.0);
                if let Some((sign, m)) = ExtMonomial::normalize(&buf) {
                    let c = ca * cb;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// `α ⌟ (v_1 ∧ ... ∧ v_d) = Σ_p (-1)^{p-1} α(v_p) v_1 ∧ ... v̂_p ... ∧ v_d`.
    pub fn contract(&self, alpha: &Covector) -> ExtVec {
        let mut out = ExtVec::default();
        for (m, c) in &self.terms {
            for (p, &a) in m.0.iter().enumerate() {
                let val = alpha.eval(a);
                if val.is_zero() {
                    continue;
                }
                let mut rest = m.0.clone();
                rest.remove(p);
                let q = c * val;
                out.add_term(ExtMonomial(rest), if p % 2 == 1 { -q } else { q });
            }
        }
        out
    }

    /// `∂^j ⌟ self`.
    pub fn contract_index(&self, j: u32) -> ExtVec {
        let mut out = ExtVec::default();
        for (m, c) in &self.terms {
            if let Some(p) = m.0.iter().position(|&a| a == j) {
                let mut rest = m.0.clone();
                rest.remove(p);
                out.add_term(ExtMonomial(rest), if p % 2 == 1 { -c.clone() } else { c.clone() });
            }
        }
        out
    }
}

impl fmt::Debug for ExtVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtVec({self})")
    }
}

impl fmt::Display for ExtVec {
    /// `1*X[3,1] - 2*X[2,0]`, highest exponents first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}*X[", format_rational(&mag))?;
            for (i, a) in m.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Zero for ExtVec {
    fn zero() -> Self {
        ExtVec::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for ExtVec {
    fn one() -> Self {
        ExtVec::scalar(Rational::one())
    }
}

impl Add for ExtVec {
    type Output = ExtVec;
    fn add(mut self, rhs: ExtVec) -> ExtVec {
        self.add_scaled(&rhs, &Rational::one());
        self
    }
}

impl Sub for ExtVec {
    type Output = ExtVec;
    fn sub(mut self, rhs: ExtVec) -> ExtVec {
        self.add_scaled(&rhs, &rat(-1));
        self
    }
}

impl Neg for ExtVec {
    type Output = ExtVec;
    fn neg(self) -> ExtVec {
        self.scale_by(&rat(-1))
    }
}

impl Mul for ExtVec {
    type Output = ExtVec;
    fn mul(self, rhs: ExtVec) -> ExtVec {
        self.wedge(&rhs)
    }
}

impl Coeff for ExtVec {
    fn from_rational(q: Rational) -> Self {
        ExtVec::scalar(q)
    }
    fn scale(&self, q: &Rational) -> Self {
        self.scale_by(q)
    }
    fn as_rational(&self) -> Option<Rational> {
        if self.terms.keys().all(|m| m.degree() == 0) {
            Some(self.coeff(&ExtMonomial::empty()))
        } else {
            None
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.wedge(other)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        self.add_scaled(other, &Rational::one());
    }
}

/// Linear form `Σ_j c_j ∂^j`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Covector {
    coeffs: BTreeMap<u32, Rational>,
}

impl Covector {
    pub fn d(j: u32) -> Self {
        Covector {
            coeffs: [(j, Rational::one())].into(),
        }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, Rational)>>(it: I) -> Self {
        Covector {
            coeffs: it.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// `α(X^i)`.
    pub fn eval(&self, i: u32) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)
    }
}

/// One letter of a raw Clifford word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Creation `X^i` (wedge).
    X(u32),
    /// Annihilation `∂^j` (contraction).
    D(u32),
}

/// Arbitrary product of letters, acting rightmost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RawWord(pub Vec<Letter>);

impl FromStr for RawWord {
    type Err = FermionicError;

    /// `X:2 D:3` (letters separated by whitespace).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            let (kind, idx) = tok
                .split_once(':')
                .ok_or_else(|| FermionicError::Parse(format!("bad letter `{tok}`")))?;
            let i: u32 = idx
                .parse()
                .map_err(|_| FermionicError::Parse(format!("bad index in `{tok}`")))?;
            out.push(match kind {
                "X" | "x" => Letter::X(i),
                "D" | "d" => Letter::D(i),
                _ => return Err(FermionicError::Parse(format!("bad letter `{tok}`"))),
            });
        }
        Ok(RawWord(out))
    }
}

impl fmt::Display for RawWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            match l {
                Letter::X(i) => write!(f, "X:{i}")?,
                Letter::D(j) => write!(f, "D:{j}")?,
            }
        }
        Ok(())
    }
}

impl RawWord {
    /// Applies the letters one at a time, rightmost first.
    pub fn act_letters(&self, u: &ExtVec, n: Option<u32>) -> ExtVec {
        let mut cur = u.clone();
        for l in self.0.iter().rev() {
            cur = match *l {
                Letter::X(i) => ExtVec::x(i, n).wedge(&cur),
                Letter::D(j) => cur.contract_index(j),
            };
        }
        cur
    }
}

/// `X^{i_1} ... X^{i_h} ∂^{j_1} ... ∂^{j_k}`: all creations left of all
/// annihilations, indices in the given order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CliffordWord {
    pub creations: Vec<u32>,
    pub annihilations: Vec<u32>,
}

impl CliffordWord {
    pub fn new(creations: &[u32], annihilations: &[u32]) -> Self {
        CliffordWord {
            creations: creations.to_vec(),
            annihilations: annihilations.to_vec(),
        }
    }

    pub fn h(&self) -> u32 {
        self.creations.len() as u32
    }

    pub fn k(&self) -> u32 {
        self.annihilations.len() as u32
    }

    pub fn to_raw(&self) -> RawWord {
        RawWord(
            self.creations
                .iter()
                .map(|&i| Letter::X(i))
                .chain(self.annihilations.iter().map(|&j| Letter::D(j)))
                .collect(),
        )
    }

    /// Canonical normal form: creations strictly decreasing, annihilations
    /// strictly increasing.
    pub fn is_canonical(&self) -> bool {
        self.creations.windows(2).all(|w| w[0] > w[1])
            && self.annihilations.windows(2).all(|w| w[0] < w[1])
    }
}

impl FromStr for CliffordWord {
    type Err = FermionicError;

    /// Same text form as [`RawWord`]; creations must precede annihilations.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw: RawWord = s.parse()?;
        let mut w = CliffordWord::default();
        for l in raw.0 {
            match l {
                Letter::X(i) if w.annihilations.is_empty() => w.creations.push(i),
                Letter::X(_) => {
                    return Err(FermionicError::Parse(format!(
                        "`{s}` is not in normal form; creations must come first"
                    )))
                }
                Letter::D(j) => w.annihilations.push(j),
            }
        }
        Ok(w)
    }
}

impl fmt::Display for CliffordWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_raw())
    }
}

/// Rewrites a raw word as a signed sum of canonical normal-form words using
/// `X^i ∂^j + ∂^j X^i = δ_ij`, `X^i X^j = -X^j X^i`, `∂^i ∂^j = -∂^j ∂^i`.
pub fn normal_order(w: &RawWord) -> Vec<(Rational, CliffordWord)> {
    let mut acc: BTreeMap<CliffordWord, i64> = BTreeMap::new();
    let mut stack: Vec<(i64, Vec<Letter>)> = vec![(1, w.0.clone())];
    while let Some((c, letters)) = stack.pop() {
        // first annihilation immediately followed by a creation
        let pos = letters
            .windows(2)
            .position(|p| matches!(p, [Letter::D(_), Letter::X(_)]));
        match pos {
            Some(p) => {
                let (Letter::D(j), Letter::X(i)) = (letters[p], letters[p + 1]) else {
                    unreachable!()
                };
                let mut swapped = letters.clone();
                swapped.swap(p, p + 1);
                stack.push((-c, swapped));
                if i == j {
                    let mut dropped = letters.clone();
                    dropped.drain(p..p + 2);
                    stack.push((c, dropped));
                }
            }
            None => {
                let xs: Vec<u32> = letters
                    .iter()
                    .filter_map(|l| if let Letter::X(i) = l { Some(*i) } else { None })
                    .collect();
                let ds: Vec<u32> = letters
                    .iter()
                    .filter_map(|l| if let Letter::D(j) = l { Some(*j) } else { None })
                    .collect();
                let Some((sx, mx)) = ExtMonomial::normalize(&xs) else { continue };
                let mut ds_rev = ds.clone();
                ds_rev.reverse();
                // increasing order of ds = reverse of decreasing order
                let Some((sd, md)) = ExtMonomial::normalize(&ds_rev) else { continue };
                let mut inc = md.0.to_vec();
                inc.reverse();
                let word = CliffordWord {
                    creations: mx.0.to_vec(),
                    annihilations: inc,
                };
                *acc.entry(word).or_insert(0) += c * (sx * sd) as i64;
            }
        }
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(w, c)| (rat(c), w))
        .collect()
}

/// Order in which the contractions of a word are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ContractionOrder {
    /// `∂^{j_1} ⌟ (... ⌟ (∂^{j_k} ⌟ u))`: composition of operators.
    #[default]
    RightmostFirst,
    /// `∂^{j_k} ⌟ (... ⌟ (∂^{j_1} ⌟ u))`.
    LeftmostFirst,
}

/// `X^{i_1} ∧ ... ∧ X^{i_h} ∧ (∂^J ⌟ u)`.
pub fn clifford_act(w: &CliffordWord, u: &ExtVec, n: Option<u32>, order: ContractionOrder) -> ExtVec {
    let mut cur = u.clone();
    let apply = |cur: &mut ExtVec, j: u32| *cur = cur.contract_index(j);
    match order {
        ContractionOrder::RightmostFirst => w.annihilations.iter().rev().for_each(|&j| apply(&mut cur, j)),
        ContractionOrder::LeftmostFirst => w.annihilations.iter().for_each(|&j| apply(&mut cur, j)),
    }
    if cur.is_zero() {
        return cur;
    }
    ExtVec::wedge_of(&w.creations, n).wedge(&cur)
}

/// Action of a raw word, defined through its normal ordering.
pub fn act_raw(w: &RawWord, u: &ExtVec, n: Option<u32>) -> ExtVec {
    let mut out = ExtVec::default();
    for (c, nw) in normal_order(w) {
        out.add_scaled(&clifford_act(&nw, u, n, ContractionOrder::RightmostFirst), &c);
    }
    out
}

/// `tr(E_ij)`: the derivation of `⋀ V_n` extending `X^a ↦ δ_{ja} X^i`.
pub fn trace_action(i: u32, j: u32, u: &ExtVec, n: Option<u32>) -> ExtVec {
    let mut out = ExtVec::default();
    if !below(i, n) {
        return out;
    }
    for (m, c) in &u.terms {
        for (p, &a) in m.0.iter().enumerate() {
            if a != j {
                continue;
            }
            let mut e = m.0.to_vec();
            e[p] = i;
            if let Some((sign, mm)) = ExtMonomial::normalize(&e) {
                out.add_term(mm, if sign < 0 { -c.clone() } else { c.clone() });
            }
        }
    }
    out
}

/// Coefficient of `z^i` in `σ₊(z) u`: every factor `X^a` spread to
/// `Σ_e X^{a+e} z^e`, wedge-multiplicatively.
pub fn sigma_plus_coeff(i: u32, u: &ExtVec, n: Option<u32>) -> ExtVec {
    let mut out = ExtVec::default();
    for (m, c) in &u.terms {
        let d = m.0.len();
        if d == 0 {
            if i == 0 {
                out.add_term(m.clone(), c.clone());
            }
            continue;
        }
        let mut shifted: Vec<u32> = m.0.to_vec();
        fn go(
            p: usize,
            left: u32,
            base: &[u32],
            cur: &mut Vec<u32>,
            n: Option<u32>,
            c: &Rational,
            out: &mut ExtVec,
        ) {
            if p + 1 == base.len() {
                cur[p] = base[p] + left;
                if below(cur[p], n) {
                    if let Some((sign, mm)) = ExtMonomial::normalize(cur) {
                        out.add_term(mm, if sign < 0 { -c.clone() } else { c.clone() });
                    }
                }
                cur[p] = base[p];
                return;
            }
            for e in 0..=left {
                cur[p] = base[p] + e;
                if !below(cur[p], n) {
                    break;
                }
                go(p + 1, left - e, base, cur, n, c, out);
            }
            cur[p] = base[p];
        }
        go(0, i, &m.0, &mut shifted, n, c, &mut out);
    }
    out
}

/// Action of a polynomial in `S1, S2, ...` through `S_i ↦ [z^i] σ₊(z)`.
pub fn polynomial_action(p: &crate::QPoly, u: &ExtVec, n: Option<u32>) -> ExtVec {
    let idx: Vec<u32> = p
        .alphabet()
        .names()
        .iter()
        .map(|s| s.strip_prefix('S').and_then(|i| i.parse().ok()).expect("variables S1, S2, ..."))
        .collect();
    let mut out = ExtVec::default();
    for (m, c) in p.terms() {
        let mut cur = u.clone();
        for (pos, &i) in idx.iter().enumerate() {
            for _ in 0..m.exp(pos) {
                cur = sigma_plus_coeff(i, &cur, n);
            }
        }
        out.add_scaled(&cur, c);
    }
    out
}

/// Coefficient of `z^i` in `σ̄₊(z) u`, with `σ̄₊(z) X^a = X^a - X^{a+1} z`.
pub fn sigma_plus_bar_coeff(i: u32, u: &ExtVec, n: Option<u32>) -> ExtVec {
    let mut out = ExtVec::default();
    for (m, c) in &u.terms {
        let d = m.0.len();
        if i as usize > d {
            continue;
        }
        let sign = if i % 2 == 1 { -c.clone() } else { c.clone() };
        for mask in 0u32..(1 << d) {
            if mask.count_ones() != i {
                continue;
            }
            let e: Vec<u32> = m
                .0
                .iter()
                .enumerate()
                .map(|(p, &a)| a + ((mask >> p) & 1))
                .collect();
            if e.iter().any(|&a| !below(a, n)) {
                continue;
            }
            if let Some((s, mm)) = ExtMonomial::normalize(&e) {
                out.add_term(mm, if s < 0 { -sign.clone() } else { sign.clone() });
            }
        }
    }
    out
}

fn apply_per_variable(
    u: &TruncSeries<ExtVec>,
    var: &str,
    bound: u32,
    n: Option<u32>,
    coeff: fn(u32, &ExtVec, Option<u32>) -> ExtVec,
) -> TruncSeries<ExtVec> {
    let vars = u.alphabet().union(&Alphabet::new([var]));
    let body = u.body().to_alphabet(&vars).expect("superset");
    let vi = vars.index(var).expect("present");
    let mut out = MPoly::zero(&vars);
    for (m, c) in body.terms() {
        for i in 0..=bound.saturating_sub(m.exp(vi)) {
            let img = coeff(i, c, n);
            if img.is_zero() {
                continue;
            }
            let mut e = m.exps().to_vec();
            e[vi] += i;
            out.add_term(Monomial::from_exps(&e), img);
        }
    }
    let mut bounds = u.bounds().clone();
    bounds.insert(var.to_string(), bound);
    TruncSeries::from_parts(out, bounds)
}

/// `σ₊(t_1) ⋯ σ₊(t_r) u`, each variable truncated at `bound`.
pub fn sigma_plus(vars: &[String], u: &ExtVec, n: Option<u32>, bound: u32) -> TruncSeries<ExtVec> {
    let mut cur = TruncSeries::new(MPoly::constant(&Alphabet::empty(), u.clone()), &[]);
    for v in vars.iter().rev() {
        cur = apply_per_variable(&cur, v, bound, n, sigma_plus_coeff);
    }
    cur
}

/// `σ̄₊(t_1) ⋯ σ̄₊(t_r) u`.
pub fn sigma_plus_bar(vars: &[String], u: &ExtVec, n: Option<u32>, bound: u32) -> TruncSeries<ExtVec> {
    let mut cur = TruncSeries::new(MPoly::constant(&Alphabet::empty(), u.clone()), &[]);
    for v in vars.iter().rev() {
        cur = apply_per_variable(&cur, v, bound, n, sigma_plus_bar_coeff);
    }
    cur
}

/// Applies an ExtVec map coefficientwise to a series.
pub fn map_series(u: &TruncSeries<ExtVec>, f: impl Fn(&ExtVec) -> ExtVec) -> TruncSeries<ExtVec> {
    TruncSeries::from_parts(u.body().map_coeffs(f), u.bounds().clone())
}

/// `σ̄₊(z)` applied to every coefficient of a series.
pub fn sigma_plus_bar_series(u: &TruncSeries<ExtVec>, var: &str, n: Option<u32>, bound: u32) -> TruncSeries<ExtVec> {
    apply_per_variable(u, var, bound, n, sigma_plus_bar_coeff)
}

/// `X(z) = Σ_{i<n} X^i z^i`, truncated at `bound`.
pub fn x_of(var: &str, n: Option<u32>, bound: u32) -> TruncSeries<ExtVec> {
    let vars = Alphabet::new([var]);
    let mut p = MPoly::zero(&vars);
    for i in 0..=bound {
        if below(i, n) {
            p.add_term(Monomial::from_exps(&[i]), ExtVec::x(i, n));
        }
    }
    TruncSeries::new(p, &[(var, bound)])
}

/// `∂(v) ⌟ u = Σ_{j<n} v^j ∂^j ⌟ u`, applied to every coefficient.
pub fn contract_series(u: &TruncSeries<ExtVec>, var: &str, bound: u32) -> TruncSeries<ExtVec> {
    let vars = u.alphabet().union(&Alphabet::new([var]));
    let body = u.body().to_alphabet(&vars).expect("superset");
    let vi = vars.index(var).expect("present");
    let mut out = MPoly::zero(&vars);
    for (m, c) in body.terms() {
        let top = c.max_index().unwrap_or(0);
        for j in 0..=top.min(bound.saturating_sub(m.exp(vi))) {
            let img = c.contract_index(j);
            if img.is_zero() {
                continue;
            }
            let mut e = m.exps().to_vec();
            e[vi] += j;
            out.add_term(Monomial::from_exps(&e), img);
        }
    }
    let mut bounds = u.bounds().clone();
    bounds.insert(var.to_string(), bound);
    TruncSeries::from_parts(out, bounds)
}

/// Relabels `X^r(λ) ↦ S_λ` in `B_{r,n}`.
pub fn to_bosonic(u: &ExtVec, r: u32, n: Option<u32>) -> Result<SchurCombo, FermionicError> {
    let g = ring(r, n)?;
    if let Some(m) = u.terms.keys().find(|m| m.degree() != r) {
        return Err(FermionicError::NotHomogeneous {
            expected: r,
            found: m.degree(),
        });
    }
    Ok(SchurCombo::reduce(
        u.terms.iter().map(|(m, c)| (m.to_partition(), c.clone())),
        &g,
    ))
}

/// Relabels `S_λ ↦ X^r(λ)`.
pub fn from_bosonic(x: &SchurCombo) -> ExtVec {
    let r = x.ring().map_or(0, |g| g.r());
    let mut out = ExtVec::default();
    for (la, c) in x.coeffs() {
        if let Some(m) = ExtMonomial::from_partition(la, r) {
            out.add_term(m, c.clone());
        }
    }
    out
}

/// `X^I ∂^J ⋆ S_λ` computed directly on `⋀^r V_n`, as an element of
/// `B_{r+h-k,n}` (zero, without a ring, when `r + h < k`).
pub fn star_action_oracle(w: &CliffordWord, la: &Partition, r: u32, n: Option<u32>) -> SchurCombo {
    star_action_with(w, la, r, n, ContractionOrder::RightmostFirst)
}

pub fn star_action_with(
    w: &CliffordWord,
    la: &Partition,
    r: u32,
    n: Option<u32>,
    order: ContractionOrder,
) -> SchurCombo {
    let m = r as i64 + w.h() as i64 - w.k() as i64;
    if m < 0 || n.is_some_and(|n| m > n as i64) {
        return SchurCombo::zero();
    }
    if n.is_some_and(|n| la.len() > r as usize || la.first() + r > n) {
        return SchurCombo::zero_in(&ring(m as u32, n).expect("m <= n"));
    }
    let u = ExtVec::basis(la, r);
    let img = clifford_act(w, &u, n, order);
    to_bosonic(&img, m as u32, n).expect("word action has degree r + h - k")
}

/// Generalised Laplace expansion of the `(k+1)`-row determinant with scalar
/// rows `a[0..k]` over the vector row `v`:
/// `Σ_{|S|=k} ε(S) det(a[·][S]) · ∧_{p∉S} v_p`, `ε(S) = (-1)^{Σ (s_i - i)}`.
pub fn multirow_determinant(a: &[Vec<crate::QPoly>], v: &[ExtVec], one: &crate::QPoly) -> MPoly<ExtVec> {
    let k = a.len();
    let d = v.len();
    let vars = one.alphabet().clone();
    let mut out: MPoly<ExtVec> = MPoly::zero(&vars);
    if k > d {
        return out;
    }
    for mask in 0u32..(1 << d) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let cols: Vec<usize> = (0..d).filter(|p| mask >> p & 1 == 1).collect();
        let shift: usize = cols.iter().enumerate().map(|(i, &s)| s - i).sum();
        let minor: Vec<Vec<crate::QPoly>> = a
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        let det = crate::arith::determinant(&minor, one);
        let mut rest = ExtVec::one();
        for (p, vp) in v.iter().enumerate() {
            if mask >> p & 1 == 0 {
                rest = rest.wedge(vp);
            }
        }
        if shift % 2 == 1 {
            rest = -rest;
        }
        let term = det.map_coeffs(|c| rest.scale_by(c));
        out = out.add_ref(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs(e: &[u32]) -> ExtVec {
        ExtVec::wedge_of(e, None)
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert!(xs(&[1]).wedge(&xs(&[1])).is_zero());
        assert_eq!(xs(&[0]).wedge(&xs(&[1])), -xs(&[1, 0]));
        assert_eq!(xs(&[2, 0]).wedge(&xs(&[1])), xs(&[2, 1, 0]).scale_by(&rat(-1)));
        assert_eq!(ExtVec::x(4, Some(4)), ExtVec::zero());
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(xs(&[1, 0]).contract(&Covector::d(0)), -xs(&[1]));
        assert!(xs(&[1, 0]).contract(&Covector::d(2)).is_zero());
        assert_eq!(xs(&[1]).contract(&Covector::d(1)), ExtVec::one());
        let alpha = Covector::from_coeffs([(0, rat(2)), (1, rat(3))]);
        assert_eq!(xs(&[1, 0]).contract(&alpha), xs(&[0]).scale_by(&rat(3)) - xs(&[1]).scale_by(&rat(2)));
    }

    #[test]
    fn normal_ordering_examples() {
        let w: RawWord = "D:2 X:2".parse().unwrap();
        let want = vec![(rat(1), CliffordWord::default()), (rat(-1), CliffordWord::new(&[2], &[2]))];
        let mut got = normal_order(&w);
        got.sort_by(|a, b| a.1.cmp(&b.1));
        assert_eq!(got, want);
        assert!(normal_order(&"X:1 X:1".parse().unwrap()).is_empty());
        assert_eq!(
            normal_order(&"D:3 X:2".parse().unwrap()),
            vec![(rat(-1), CliffordWord::new(&[2], &[3]))]
        );
        let canon: RawWord = "X:3 X:1 D:0 D:2".parse().unwrap();
        assert_eq!(
            normal_order(&canon),
            vec![(rat(1), CliffordWord::new(&[3, 1], &[0, 2]))]
        );
    }

    #[test]
    fn word_action_examples() {
        let w = CliffordWord::new(&[2], &[3]);
        assert_eq!(clifford_act(&w, &xs(&[3]), Some(4), Default::default()), xs(&[2]));
        assert!(clifford_act(&w, &xs(&[2]), Some(4), Default::default()).is_zero());
        let u = xs(&[3, 1]) - xs(&[2, 0]);
        assert_eq!(clifford_act(&CliffordWord::default(), &u, Some(4), Default::default()), u);
        assert_eq!(u.to_string(), "1*X[3,1] - 1*X[2,0]");
        assert_eq!(w.to_string(), "X:2 D:3");
        assert!("D:1 X:2".parse::<CliffordWord>().is_err());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_action(1, 0, &xs(&[0]), None), xs(&[1]));
        assert!(trace_action(1, 0, &xs(&[1, 0]), None).is_zero());
        assert_eq!(trace_action(2, 1, &xs(&[1, 0]), None), xs(&[2, 0]));
    }

    #[test]
    fn sigma_examples() {
        let z = vec!["z".to_string()];
        let s = sigma_plus(&z, &xs(&[0]), Some(5), 6);
        assert_eq!(s, x_of("z", Some(5), 6));
        let b = sigma_plus_bar(&z, &xs(&[2]), None, 3);
        for i in 0..=3 {
            let c = b.coefficient(&[("z", i)]).unwrap();
            let c = c.coeff_of(&Monomial::one(c.alphabet().len()));
            let want = match i {
                0 => xs(&[2]),
                1 => -xs(&[3]),
                _ => ExtVec::zero(),
            };
            assert_eq!(c, want);
        }
        let u = xs(&[1, 0]);
        let round = sigma_plus_bar_series(&sigma_plus(&z, &u, None, 5), "z", None, 5);
        assert_eq!(round, TruncSeries::new(MPoly::constant(&Alphabet::new(["z"]), u), &[("z", 5)]));
    }

    #[test]
    fn bosonic_relabeling() {
        assert_eq!(to_bosonic(&xs(&[1, 0]), 2, Some(4)).unwrap().to_string(), "1*S[]");
        assert_eq!(to_bosonic(&xs(&[3, 1]), 2, Some(4)).unwrap().to_string(), "1*S[2,1]");
        let g = ring(2, Some(4)).unwrap();
        let x = SchurCombo::basis(&g, &p("[2,1]")).scale(&rat(5));
        assert_eq!(from_bosonic(&x), xs(&[3, 1]).scale_by(&rat(5)));
        assert!(to_bosonic(&xs(&[1]), 2, Some(4)).is_err());
    }

    #[test]
    fn oracle_examples() {
        let w = CliffordWord::new(&[2], &[3]);
        for n in 4..=6 {
            let g = ring(1, Some(n)).unwrap();
            assert_eq!(star_action_oracle(&w, &p("[3]"), 1, Some(n)), SchurCombo::s(&g, 2));
            assert!(star_action_oracle(&w, &p("[4]"), 1, Some(n)).is_zero());
        }
        let g = ring(2, Some(4)).unwrap();
        assert_eq!(
            star_action_oracle(&CliffordWord::default(), &p("[2,1]"), 2, Some(4)),
            SchurCombo::basis(&g, &p("[2,1]"))
        );
        assert!(star_action_oracle(&CliffordWord::new(&[], &[0, 1]), &p("[]"), 1, Some(4)).is_zero());
    }

    /// Every monomial of `⋀ V_n` of degree at most `dmax`.
    fn all_monomials(n: u32, dmax: u32) -> Vec<ExtVec> {
        (0u32..(1 << n))
            .filter(|m| m.count_ones() <= dmax)
            .map(|m| {
                let e: Vec<u32> = (0..n).rev().filter(|i| m >> i & 1 == 1).collect();
                xs(&e)
            })
            .collect()
    }

    #[test]
    fn contraction_is_an_antiderivation() {
        let basis = all_monomials(6, 3);
        for j in 0..6 {
            let alpha = Covector::d(j);
            for u in &basis {
                let du = u.terms().keys().next().map_or(0, |m| m.degree());
                for v in &basis {
                    let lhs = u.wedge(v).contract(&alpha);
                    let mut rhs = u.contract(&alpha).wedge(v);
                    let tail = u.wedge(&v.contract(&alpha));
                    rhs = if du % 2 == 0 { rhs + tail } else { rhs - tail };
                    assert_eq!(lhs, rhs, "{u} {v} d{j}");
                }
            }
        }
    }

    #[test]
    fn clifford_relations_hold() {
        let n = Some(6);
        let basis = all_monomials(6, 4);
        for i in 0..6 {
            for j in 0..6 {
                for u in &basis {
                    let a = RawWord(vec![Letter::X(i), Letter::D(j)]).act_letters(u, n);
                    let b = RawWord(vec![Letter::D(j), Letter::X(i)]).act_letters(u, n);
                    let want = if i == j { u.clone() } else { ExtVec::zero() };
                    assert_eq!(a + b, want);
                    let xx = RawWord(vec![Letter::X(i), Letter::X(j)]).act_letters(u, n)
                        + RawWord(vec![Letter::X(j), Letter::X(i)]).act_letters(u, n);
                    assert!(xx.is_zero());
                    let dd = RawWord(vec![Letter::D(i), Letter::D(j)]).act_letters(u, n)
                        + RawWord(vec![Letter::D(j), Letter::D(i)]).act_letters(u, n);
                    assert!(dd.is_zero());
                }
            }
        }
    }

    #[test]
    fn normal_ordering_preserves_action() {
        let n = Some(5);
        let basis = all_monomials(5, 3);
        let words = [
            "D:1 X:1 D:2 X:0",
            "D:0 D:1 X:1 X:0",
            "X:3 D:3 X:3 D:2",
            "D:4 X:2 D:2 X:4 X:1",
            "D:2 D:0 X:0 X:2",
        ];
        for w in words {
            let raw: RawWord = w.parse().unwrap();
            assert!(normal_order(&raw).iter().all(|(_, nw)| nw.is_canonical()));
            for u in &basis {
                assert_eq!(act_raw(&raw, u, n), raw.act_letters(u, n), "{w} on {u}");
            }
        }
    }

    #[test]
    fn contraction_order_is_observable() {
        let u = xs(&[2, 1, 0]);
        let w = CliffordWord::new(&[], &[0, 1]);
        let a = clifford_act(&w, &u, None, ContractionOrder::RightmostFirst);
        let b = clifford_act(&w, &u, None, ContractionOrder::LeftmostFirst);
        assert_eq!(a, -b);
        assert_eq!(a, RawWord(vec![Letter::D(0), Letter::D(1)]).act_letters(&u, None));
    }

    #[test]
    fn trace_matches_clifford_word() {
        let n = Some(6);
        for u in all_monomials(6, 4) {
            for i in 0..6 {
                for j in 0..6 {
                    let w = CliffordWord::new(&[i], &[j]);
                    assert_eq!(trace_action(i, j, &u, n), clifford_act(&w, &u, n, Default::default()));
                }
            }
        }
    }

    #[test]
    fn trace_is_a_lie_homomorphism() {
        let n = Some(5);
        let basis = all_monomials(5, 3);
        let idx: Vec<(u32, u32)> = (0..5).flat_map(|i| (0..5).map(move |j| (i, j))).collect();
        for &(i, j) in &idx {
            for &(k, l) in &idx {
                for u in &basis {
                    let lhs = trace_action(i, j, &trace_action(k, l, u, n), n)
                        - trace_action(k, l, &trace_action(i, j, u, n), n);
                    let mut rhs = ExtVec::zero();
                    if j == k {
                        rhs = rhs + trace_action(i, l, u, n);
                    }
                    if l == i {
                        rhs = rhs - trace_action(k, j, u, n);
                    }
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn wedge_of_generating_vectors_is_alternant_times_schur_sum() {
        use crate::partitions::{enumerate_partitions, RectBound};
        use crate::symfun::{alternant, schur, SymContext};
        for (r, n) in [(1u32, 4u32), (2, 4), (2, 5), (3, 5)] {
            let ctx = SymContext::new("t", r as usize);
            let mut lhs = TruncSeries::new(MPoly::constant(&Alphabet::empty(), ExtVec::one()), &[]);
            for v in ctx.names() {
                lhs = lhs.mul_ref(&x_of(v, Some(n), n - 1));
            }
            let a = alternant(&ctx);
            let mut rhs: MPoly<ExtVec> = MPoly::zero(ctx.alphabet());
            for la in enumerate_partitions(RectBound::finite(r, n - r)) {
                let x = ExtVec::basis(&la, r);
                rhs = rhs.add_ref(&a.mul_ref(&schur(&la, &ctx)).map_coeffs(|c| x.scale_by(c)));
            }
            let bounds: Vec<(&str, u32)> = ctx.names().iter().map(|v| (v.as_str(), n - 1)).collect();
            assert_eq!(lhs, TruncSeries::new(rhs, &bounds), "r={r} n={n}");
        }
    }

    #[test]
    fn jacobi_trudi_acts_as_schur_class() {
        use crate::bosonic::jacobi_trudi;
        for (r, n) in [(1u32, 4u32), (2, 4), (2, 5), (3, 6)] {
            let g = ring(r, Some(n)).unwrap();
            let vac = ExtVec::basis(&Partition::empty(), r);
            for la in g.basis() {
                let got = polynomial_action(&jacobi_trudi(&la, r), &vac, Some(n));
                assert_eq!(got, ExtVec::basis(&la, r), "{la} in r={r} n={n}");
            }
        }
    }

    #[test]
    fn pieri_agrees_with_fermionic_action() {
        for n in 1..=6u32 {
            for r in 0..=n {
                let g = ring(r, Some(n)).unwrap();
                for la in g.basis() {
                    let x = SchurCombo::basis(&g, &la);
                    for i in 0..=n {
                        let ferm = sigma_plus_coeff(i, &ExtVec::basis(&la, r), Some(n));
                        assert_eq!(to_bosonic(&ferm, r, Some(n)).unwrap(), x.mul_s(i), "S{i}*{la}");
                    }
                }
            }
        }
    }

    #[test]
    fn multirow_determinant_is_iterated_contraction() {
        for exps in [vec![3u32, 1, 0], vec![4, 2, 1, 0], vec![2, 0]] {
            for k in 1..=exps.len().min(3) {
                let names: Vec<String> = (1..=k).map(|i| format!("v{i}")).collect();
                let vars = Alphabet::new(names.clone());
                let rows: Vec<Vec<crate::QPoly>> = names
                    .iter()
                    .map(|v| {
                        exps.iter()
                            .map(|&a| MPoly::monomial(&vars, &[(v.as_str(), a)], Rational::one()).unwrap())
                            .collect()
                    })
                    .collect();
                let vs: Vec<ExtVec> = exps.iter().map(|&a| xs(&[a])).collect();
                let det = multirow_determinant(&rows, &vs, &MPoly::one(&vars));
                // v1 innermost
                let top = exps[0];
                let mut cur = TruncSeries::new(MPoly::constant(&Alphabet::empty(), xs(&exps)), &[]);
                for v in &names {
                    cur = contract_series(&cur, v, top);
                }
                let bounds: Vec<(&str, u32)> = names.iter().map(|v| (v.as_str(), top)).collect();
                assert_eq!(TruncSeries::new(det, &bounds), cur, "{exps:?} k={k}");
            }
        }
    }
}
