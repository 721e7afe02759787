//! The rings `B_{r,n}` (and `B_r` for `n = ∞`) in the Schur basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    determinant, format_rational, parse_rational, rat, Alphabet, Coeff, MPoly, Rational, TruncSeries,
};
use crate::partitions::{enumerate_by_weight, enumerate_partitions, Partition, RectBound, Width};
use crate::symfun::{power_sum, schur, SymContext};
use crate::{BSeries, QPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BosonicError {
    #[error("invalid ring: r = {r} exceeds n = {n}")]
    InvalidRing { r: u32, n: u32 },
    #[error("ring mismatch: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("cannot parse Schur combination: {0}")]
    Parse(String),
}

/// `B_{r,n}`, or `B_r` when `n` is `None` (infinite width).
///
/// Holds caches for basis products; obtain shared instances from [`ring`].
pub struct RingContext {
    r: u32,
    n: Option<u32>,
    products: Mutex<HashMap<(Partition, Partition), Arc<BTreeMap<Partition, Rational>>>>,
    jt: Mutex<HashMap<Partition, Arc<Vec<(Vec<u32>, Rational)>>>>,
}

pub type Ring = Arc<RingContext>;

/// Shared ring instance for `(r, n)`; `n = None` is the infinite case.
pub fn ring(r: u32, n: Option<u32>) -> Result<Ring, BosonicError> {
    if let Some(n) = n {
        if r > n {
            return Err(BosonicError::InvalidRing { r, n });
        }
    }
    static REGISTRY: OnceLock<Mutex<HashMap<(u32, Option<u32>), Ring>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(Default::default);
    let mut reg = reg.lock().expect("registry poisoned");
    Ok(reg
        .entry((r, n))
        .or_insert_with(|| {
            Arc::new(RingContext {
                r,
                n,
                products: Mutex::new(HashMap::new()),
                jt: Mutex::new(HashMap::new()),
            })
        })
        .clone())
}

impl RingContext {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> Option<u32> {
        self.n
    }

    pub fn width(&self) -> Width {
        match self.n {
            Some(n) => Width::Finite(n - self.r),
            None => Width::Infinite,
        }
    }

    pub fn rect(&self) -> RectBound {
        RectBound::new(self.r, self.width())
    }

    pub fn contains(&self, la: &Partition) -> bool {
        self.rect().contains(la)
    }

    /// Schur basis `P_{r,n}`; panics for infinite width.
    pub fn basis(&self) -> Vec<Partition> {
        enumerate_partitions(self.rect())
    }

    /// Basis elements of degree `d` (works for infinite width too).
    pub fn basis_of_degree(&self, d: u32) -> Vec<Partition> {
        enumerate_by_weight(self.r, d)
            .into_iter()
            .filter(|la| self.contains(la))
            .collect()
    }

    pub fn label(&self) -> String {
        match self.n {
            Some(n) => format!("B_{{{},{}}}", self.r, n),
            None => format!("B_{{{},inf}}", self.r),
        }
    }

    fn same(&self, other: &RingContext) -> bool {
        self.r == other.r && self.n == other.n
    }

    /// `S_i · Σ c_μ S_μ` by the Pieri rule, dropping partitions outside the ring.
    fn pieri(&self, i: u32, x: &BTreeMap<Partition, Rational>) -> BTreeMap<Partition, Rational> {
        let mut out: BTreeMap<Partition, Rational> = BTreeMap::new();
        for (mu, c) in x {
            for nu in mu.horizontal_strips(i, self.r as usize, self.rect().max_first()) {
                if self.contains(&nu) {
                    add_into(&mut out, nu, c);
                }
            }
        }
        out
    }

    /// Jacobi–Trudi expansion of `S_λ` as signed monomials in `S_1, S_2, ...`
    /// (each monomial a multiset of indices).
    fn jt_terms(&self, la: &Partition) -> Arc<Vec<(Vec<u32>, Rational)>> {
        if let Some(v) = self.jt.lock().expect("cache poisoned").get(la) {
            return v.clone();
        }
        let p = jacobi_trudi(la, self.r);
        let terms: Vec<(Vec<u32>, Rational)> = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut idx = Vec::new();
                for (name, &e) in p.alphabet().names().iter().zip(m.exps()) {
                    let i: u32 = name[1..].parse().expect("S-variable");
                    idx.extend(std::iter::repeat_n(i, e as usize));
                }
                (idx, c.clone())
            })
            .collect();
        let terms = Arc::new(terms);
        self.jt
            .lock()
            .expect("cache poisoned")
            .insert(la.clone(), terms.clone());
        terms
    }

    fn mul_basis(&self, a: &Partition, b: &Partition) -> Arc<BTreeMap<Partition, Rational>> {
        let key = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        if let Some(v) = self.products.lock().expect("cache poisoned").get(&key) {
            return v.clone();
        }
        // expand the smaller-length factor, apply it to the other by Pieri
        let (small, big) = if key.0.len() <= key.1.len() {
            (&key.0, &key.1)
        } else {
            (&key.1, &key.0)
        };
        let mut out = BTreeMap::new();
        let start: BTreeMap<Partition, Rational> = [(big.clone(), Rational::one())].into();
        for (idx, c) in self.jt_terms(small).iter() {
            let mut cur = start.clone();
            for &i in idx {
                cur = self.pieri(i, &cur);
                if cur.is_empty() {
                    break;
                }
            }
            for (nu, d) in cur {
                add_into(&mut out, nu, &(d * c));
            }
        }
        let out = Arc::new(out);
        self.products
            .lock()
            .expect("cache poisoned")
            .insert(key, out.clone());
        out
    }
}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn add_into(map: &mut BTreeMap<Partition, Rational>, key: Partition, c: &Rational) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, c.clone());
        }
    }
}

/// `S_λ = det(S_{λ_j - j + i})_{1≤i,j≤r}` as a polynomial in `S1, S2, ...`
/// (`S0 = 1`, negative indices zero).
pub fn jacobi_trudi(la: &Partition, r: u32) -> QPoly {
    let r = (r as usize).max(la.len());
    let top = la.first() + r as u32;
    let vars = Alphabet::new((1..=top).map(|i| format!("S{i}")));
    let s = |k: i64| -> QPoly {
        if k < 0 {
            MPoly::zero(&vars)
        } else if k == 0 {
            MPoly::one(&vars)
        } else {
            MPoly::var(&vars, &format!("S{k}")).expect("in alphabet")
        }
    };
    let rows: Vec<Vec<QPoly>> = (1..=r)
        .map(|i| {
            (1..=r)
                .map(|j| s(la.part(j) as i64 - j as i64 + i as i64))
                .collect()
        })
        .collect();
    let det = determinant(&rows, &MPoly::one(&vars));
    // drop unused trailing variables for a tidy alphabet
    let used: Vec<String> = vars
        .names()
        .iter()
        .filter(|v| det.degree_in(v) > 0)
        .cloned()
        .collect();
    det.to_alphabet(&Alphabet::new(used)).expect("only unused variables dropped")
}

/// Element of `B_{r,n}` in the Schur basis.
///
/// Scalars may omit the ring; any other element carries it.
#[derive(Clone)]
pub struct SchurCombo {
    ring: Option<Ring>,
    coeffs: BTreeMap<Partition, Rational>,
}

impl SchurCombo {
    pub fn zero_in(ring: &Ring) -> Self {
        SchurCombo {
            ring: Some(ring.clone()),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(ring: Option<&Ring>, q: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !q.is_zero() {
            coeffs.insert(Partition::empty(), q);
        }
        SchurCombo {
            ring: ring.cloned(),
            coeffs,
        }
    }

    /// The basis class `S_λ` (zero if λ lies outside the ring).
    pub fn basis(ring: &Ring, la: &Partition) -> Self {
        Self::reduce([(la.clone(), Rational::one())], ring)
    }

    /// `S_i = S_(i)`; `S_0 = 1`.
    pub fn s(ring: &Ring, i: u32) -> Self {
        Self::basis(ring, &Partition::single(i))
    }

    /// Projection of a raw combination: classes outside `P_{r,n}` vanish.
    pub fn reduce<I>(raw: I, ring: &Ring) -> Self
    where
        I: IntoIterator<Item = (Partition, Rational)>,
    {
        let mut coeffs = BTreeMap::new();
        for (la, c) in raw {
            if ring.contains(&la) {
                add_into(&mut coeffs, la, &c);
            }
        }
        SchurCombo {
            ring: Some(ring.clone()),
            coeffs,
        }
    }

    /// Attaches `ring` to a ring-less scalar or zero.
    pub fn with_ring(mut self, ring: &Ring) -> Self {
        match &self.ring {
            Some(g) if !g.same(ring) && !self.is_scalar() => panic!("element already lives in {}", g.label()),
            _ => self.ring = Some(ring.clone()),
        }
        self
    }

    pub fn ring(&self) -> Option<&Ring> {
        self.ring.as_ref()
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, la: &Partition) -> Rational {
        self.coeffs.get(la).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degrees `|λ|` occurring with nonzero coefficient.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.coeffs.keys().map(Partition::weight).collect();
        d.dedup();
        d
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.coeffs.keys().all(|la| la.weight() == d)
    }

    fn is_scalar(&self) -> bool {
        self.coeffs.keys().all(Partition::is_empty)
    }

    fn join_ring(&self, other: &Self) -> Result<Option<Ring>, BosonicError> {
        match (&self.ring, &other.ring) {
            (Some(a), Some(b)) if !a.same(b) => {
                if self.is_scalar() || other.is_scalar() {
                    Ok(Some(if self.is_scalar() { b.clone() } else { a.clone() }))
                } else {
                    Err(BosonicError::ContextMismatch(a.label(), b.label()))
                }
            }
            (Some(a), _) => Ok(Some(a.clone())),
            (None, b) => Ok(b.clone()),
        }
    }

    /// Product in the Schur basis (Pieri applied along Jacobi–Trudi).
    pub fn multiply(&self, other: &Self) -> Result<Self, BosonicError> {
        let ring = self.join_ring(other)?;
        if self.is_scalar() || other.is_scalar() {
            let (s, x) = if self.is_scalar() { (self, other) } else { (other, self) };
            let q = s.coeff(&Partition::empty());
            let mut out = x.scale_by(&q);
            out.ring = ring;
            return Ok(out);
        }
        let ring = ring.expect("non-scalars carry a ring");
        let mut coeffs = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let cab = ca * cb;
                for (nu, d) in ring.mul_basis(a, b).iter() {
                    add_into(&mut coeffs, nu.clone(), &(d * &cab));
                }
            }
        }
        Ok(SchurCombo {
            ring: Some(ring),
            coeffs,
        })
    }

    /// `S_i · self` by one Pieri step.
    pub fn mul_s(&self, i: u32) -> Self {
        let ring = self.ring.clone().expect("mul_s needs a ring");
        SchurCombo {
            coeffs: ring.pieri(i, &self.coeffs),
            ring: Some(ring),
        }
    }

    fn scale_by(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return SchurCombo {
                ring: self.ring.clone(),
                coeffs: BTreeMap::new(),
            };
        }
        SchurCombo {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * q)).collect(),
        }
    }

    /// Text form such as `1*S[2,1] + -3/2*S[1]`, with the ring supplied.
    pub fn parse(s: &str, ring: &Ring) -> Result<Self, BosonicError> {
        let bad = |m: &str| BosonicError::Parse(format!("{m} in `{s}`"));
        let t = s.trim();
        if t == "0" || t.is_empty() {
            return Ok(Self::zero_in(ring));
        }
        let chars: Vec<char> = t.chars().collect();
        let mut i = 0;
        let mut raw = Vec::new();
        let skip_ws = |i: &mut usize| {
            while *i < chars.len() && chars[*i].is_whitespace() {
                *i += 1;
            }
        };
        let mut first = true;
        while i < chars.len() {
            skip_ws(&mut i);
            let mut neg = false;
            let mut saw_sep = first;
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-' || chars[i].is_whitespace()) {
                if chars[i] == '-' {
                    neg = !neg;
                }
                if chars[i] != ' ' {
                    saw_sep = true;
                }
                i += 1;
            }
            if !saw_sep {
                return Err(bad("missing `+` between terms"));
            }
            first = false;
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            let mut c = if num.is_empty() {
                Rational::one()
            } else {
                parse_rational(&num).map_err(|_| bad("bad coefficient"))?
            };
            skip_ws(&mut i);
            let mut la = Partition::empty();
            let has_star = i < chars.len() && chars[i] == '*';
            if has_star {
                i += 1;
                skip_ws(&mut i);
            }
            if i < chars.len() && chars[i] == 'S' {
                i += 1;
                let open = i;
                while i < chars.len() && chars[i] != ']' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(bad("unterminated `[`"));
                }
                i += 1;
                let text: String = chars[open..i].iter().collect();
                la = text.parse().map_err(|_| bad("bad partition"))?;
            } else if has_star || num.is_empty() {
                return Err(bad("expected `S[...]`"));
            }
            if neg {
                c = -c;
            }
            raw.push((la, c));
        }
        Ok(Self::reduce(raw, ring))
    }

    pub fn to_json(&self) -> Vec<SchurTermJson> {
        self.coeffs
            .iter()
            .rev()
            .map(|(la, c)| SchurTermJson {
                lambda: la.parts().to_vec(),
                coeff: format_rational(c),
            })
            .collect()
    }

    pub fn from_json(terms: &[SchurTermJson], ring: &Ring) -> Result<Self, BosonicError> {
        let mut raw = Vec::new();
        for t in terms {
            let la = Partition::new(&t.lambda).map_err(|e| BosonicError::Parse(e.to_string()))?;
            let c = parse_rational(&t.coeff).map_err(|e| BosonicError::Parse(e.to_string()))?;
            raw.push((la, c));
        }
        Ok(Self::reduce(raw, ring))
    }
}

/// JSON mirror of one Schur-basis term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurTermJson {
    pub lambda: Vec<u32>,
    pub coeff: String,
}

impl PartialEq for SchurCombo {
    fn eq(&self, other: &Self) -> bool {
        if self.coeffs != other.coeffs {
            return false;
        }
        match (&self.ring, &other.ring) {
            (Some(a), Some(b)) => a.same(b) || self.is_scalar(),
            _ => true,
        }
    }
}

impl fmt::Debug for SchurCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ring {
            Some(r) => write!(f, "{} in {}", self, r.label()),
            None => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for SchurCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (la, c)) in self.coeffs.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*S{}", format_rational(c), la)?;
        }
        Ok(())
    }
}

impl Zero for SchurCombo {
    fn zero() -> Self {
        SchurCombo {
            ring: None,
            coeffs: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for SchurCombo {
    fn one() -> Self {
        SchurCombo::scalar(None, Rational::one())
    }
}

impl Add for SchurCombo {
    type Output = SchurCombo;
    fn add(mut self, rhs: SchurCombo) -> SchurCombo {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for SchurCombo {
    type Output = SchurCombo;
    fn sub(mut self, rhs: SchurCombo) -> SchurCombo {
        self.add_assign_ref(&-rhs);
        self
    }
}

impl Neg for SchurCombo {
    type Output = SchurCombo;
    fn neg(self) -> SchurCombo {
        SchurCombo {
            ring: self.ring,
            coeffs: self.coeffs.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Mul for SchurCombo {
    type Output = SchurCombo;
    fn mul(self, rhs: SchurCombo) -> SchurCombo {
        self.mul_ref(&rhs)
    }
}

impl Coeff for SchurCombo {
    fn from_rational(q: Rational) -> Self {
        SchurCombo::scalar(None, q)
    }

    fn scale(&self, q: &Rational) -> Self {
        self.scale_by(q)
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.is_scalar() {
            Some(self.coeff(&Partition::empty()))
        } else {
            None
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.multiply(other).expect("ring mismatch in product")
    }

    fn add_assign_ref(&mut self, other: &Self) {
        self.ring = self.join_ring(other).expect("ring mismatch in sum");
        for (la, c) in &other.coeffs {
            add_into(&mut self.coeffs, la.clone(), c);
        }
    }
}

/// `S_{r,n}(z) = 1 + S_1 z + ... + S_{n-r} z^{n-r}` truncated at `zbound`,
/// with the `S_j` as basis classes.
pub fn segre_series(ring: &Ring, var: &str, zbound: u32) -> BSeries {
    let vars = Alphabet::new([var]);
    let top = match ring.width() {
        Width::Finite(w) => w.min(zbound),
        Width::Infinite => zbound,
    };
    let top = if ring.r() == 0 { 0 } else { top };
    let mut p = MPoly::zero(&vars);
    for j in 0..=top {
        let m = MPoly::<SchurCombo>::monomial_key(&vars, &[(var, j)]).expect("own variable");
        p.add_term(m, SchurCombo::s(ring, j));
    }
    TruncSeries::new(p, &[(var, zbound)])
}

/// `c_r(z) = 1 - c_1 z + c_2 z^2 - ... + (-1)^r c_r z^r` over `c1..cr, z`.
pub fn chern_polynomial(r: u32, var: &str) -> QPoly {
    let vars = Alphabet::new((1..=r).map(|i| format!("c{i}")).chain([var.to_string()]));
    let mut p = MPoly::one(&vars);
    for i in 1..=r {
        let c = format!("c{i}");
        let sign = if i % 2 == 0 { 1 } else { -1 };
        p = p.add_ref(&MPoly::monomial(&vars, &[(c.as_str(), 1), (var, i)], rat(sign)).expect("own"));
    }
    p
}

/// `1 / c_r(z)` in Chern variables, truncated at `zbound`.
pub fn segre_chern(r: u32, var: &str, zbound: u32) -> crate::QSeries {
    TruncSeries::new(chern_polynomial(r, var), &[(var, zbound)])
        .inverse()
        .expect("constant term 1")
}

/// The Segre class `S_j` as a polynomial in `c1..cr`.
pub fn segre_class_chern(r: u32, j: u32) -> QPoly {
    let s = segre_chern(r, "z", j);
    let cs = Alphabet::new((1..=r).map(|i| format!("c{i}")));
    s.coefficient(&[("z", j)])
        .expect("within bound")
        .to_alphabet(&cs)
        .expect("z eliminated")
}

/// `x_1, x_2, ...` with `exp(Σ x_i z^i) = S_{r,n}(z)`.
#[derive(Clone, Debug)]
pub struct XSeries {
    pub ring: Ring,
    /// `xs[i - 1] = x_i`.
    pub xs: Vec<SchurCombo>,
}

impl XSeries {
    pub fn x(&self, i: u32) -> &SchurCombo {
        &self.xs[i as usize - 1]
    }
}

pub fn x_series(ring: &Ring, bound: u32) -> XSeries {
    assert!(bound >= 1, "x_series needs bound >= 1");
    let log = segre_series(ring, "z", bound).log().expect("constant term 1");
    let xs = (1..=bound)
        .map(|i| {
            let c = log.coefficient(&[("z", i)]).expect("within bound");
            let c = c.coeff_of(&crate::arith::Monomial::one(c.alphabet().len()));
            let mut c = c;
            if c.ring.is_none() {
                c.ring = Some(ring.clone());
            }
            c
        })
        .collect();
    XSeries {
        ring: ring.clone(),
        xs,
    }
}

/// How [`schur_expansion`] computes `Σ_λ S_λ s_λ(vars)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionRoute {
    /// Sum over the basis with bialternant Schur polynomials.
    Enumeration,
    /// `exp(Σ_i x_i p_i(vars))`.
    Exponential,
    /// `Π_u S_{r,n}(u)` over the variables.
    Product,
}

/// `Σ_{|λ| ≤ degbound} S_λ s_λ(vars)`; per-variable bound `degbound` and
/// total degree at most `degbound`.
pub fn schur_expansion(ring: &Ring, vars: &SymContext, degbound: u32, route: ExpansionRoute) -> BSeries {
    let alphabet = vars.alphabet().clone();
    let bounds: Vec<(&str, u32)> = vars.names().iter().map(|v| (v.as_str(), degbound)).collect();
    let total_cap = |s: BSeries| -> BSeries {
        let body = s.body().filter_terms(|m, _| m.degree() <= degbound);
        TruncSeries::new(body, &bounds)
    };
    match route {
        ExpansionRoute::Enumeration => {
            let mut body = MPoly::<SchurCombo>::zero(&alphabet);
            for d in 0..=degbound {
                for la in ring.basis_of_degree(d) {
                    let s = schur(&la, vars);
                    let b = SchurCombo::basis(ring, &la);
                    body = body.add_ref(&s.map_coeffs(|q| b.scale(q)));
                }
            }
            TruncSeries::new(body, &bounds)
        }
        ExpansionRoute::Exponential => {
            if degbound == 0 || vars.r() == 0 {
                return TruncSeries::new(MPoly::one(&alphabet), &bounds);
            }
            let xs = x_series(ring, degbound);
            let mut arg = MPoly::<SchurCombo>::zero(&alphabet);
            for i in 1..=degbound {
                let x = xs.x(i);
                arg = arg.add_ref(&power_sum(i, vars).map_coeffs(|q| x.scale(q)));
            }
            let arg = total_cap(TruncSeries::new(arg, &bounds));
            total_cap(exp_total(&arg, degbound))
        }
        ExpansionRoute::Product => {
            let mut acc = TruncSeries::new(MPoly::one(&alphabet), &bounds);
            for v in vars.names() {
                let s = segre_series(ring, v, degbound);
                acc = total_cap(acc.mul_ref(&s));
            }
            total_cap(acc)
        }
    }
}

/// exp with the total degree capped at each step.
fn exp_total(u: &BSeries, cap: u32) -> BSeries {
    let mut out = u.one_like();
    let mut power = u.one_like();
    let mut fact = Rational::one();
    for k in 1..=cap {
        power = power.mul_ref(u);
        let body = power.body().filter_terms(|m, _| m.degree() <= cap);
        power = TruncSeries::from_parts(body, power.bounds().clone());
        if power.is_zero() {
            break;
        }
        fact *= rat(k as i64);
        out = out.add_ref(&power.scale(&fact.recip()));
    }
    out
}

/// `S_λ` as a polynomial in `c1..cr` (Jacobi–Trudi, then Segre classes);
/// no reduction modulo the ideal.
pub fn to_chern(x: &SchurCombo) -> QPoly {
    let r = x.ring().map_or(0, |g| g.r());
    let cs = Alphabet::new((1..=r).map(|i| format!("c{i}")));
    let mut out = MPoly::zero(&cs);
    for (la, c) in x.coeffs() {
        let jt = jacobi_trudi(la, r);
        let vars = jt.alphabet().union(&cs);
        let mut p = jt.to_alphabet(&vars).expect("superset");
        for name in jt.alphabet().names() {
            let j: u32 = name[1..].parse().expect("S-variable");
            let sj = segre_class_chern(r, j).to_alphabet(&vars).expect("superset");
            p = p.substitute(name, &sj);
        }
        let p = p.to_alphabet(&cs).expect("S eliminated");
        out = out.add_ref(&p.scale(c));
    }
    out
}

/// Generators `S_{n-r+1}, ..., S_n` of the ideal `I_{r,n}` in Chern variables.
pub fn chern_relations(ring: &Ring) -> Vec<QPoly> {
    let Some(n) = ring.n() else {
        return Vec::new();
    };
    let r = ring.r();
    (n - r + 1..=n).map(|j| segre_class_chern(r, j)).collect()
}

/// Evaluates a polynomial whose variables `c1, c2, ...` and `S1, S2, ...`
/// stand for Chern and Segre classes of `ring` (`c_i = S_{(1^i)}`); any other
/// variable is kept, giving a polynomial with class coefficients.
pub fn evaluate_classes(p: &QPoly, ring: &Ring) -> crate::BPoly {
    let names = p.alphabet().names();
    let class_of = |name: &str| -> Option<SchurCombo> {
        let (kind, idx) = name.split_at(1);
        let i: u32 = idx.parse().ok()?;
        match kind {
            "S" => Some(SchurCombo::s(ring, i)),
            "c" => {
                let ones = vec![1; i as usize];
                let la = Partition::new(&ones).expect("constant parts");
                Some(SchurCombo::basis(ring, &la))
            }
            _ => None,
        }
    };
    let classes: Vec<Option<SchurCombo>> = names.iter().map(|n| class_of(n)).collect();
    let kept = Alphabet::new(
        names
            .iter()
            .zip(&classes)
            .filter(|(_, c)| c.is_none())
            .map(|(n, _)| n.clone()),
    );
    let mut out = crate::BPoly::zero(&kept);
    for (m, q) in p.terms() {
        let mut coeff = SchurCombo::scalar(Some(ring), q.clone());
        let mut exps = Vec::with_capacity(kept.len());
        for (idx, cls) in classes.iter().enumerate() {
            match cls {
                Some(c) => {
                    for _ in 0..m.exp(idx) {
                        coeff = coeff.mul_ref(c);
                    }
                }
                None => exps.push(m.exp(idx)),
            }
        }
        out.add_term(crate::arith::Monomial::from_exps(&exps), coeff);
    }
    out
}

impl SchurCombo {
    /// Like [`to_chern`], as a method.
    pub fn to_chern(&self) -> QPoly {
        to_chern(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_qpoly, ratio};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn b(ring: &Ring, s: &str) -> SchurCombo {
        SchurCombo::parse(s, ring).unwrap()
    }

    #[test]
    fn jacobi_trudi_examples() {
        assert_eq!(jacobi_trudi(&p("[1]"), 2), parse_qpoly("S1").unwrap());
        assert_eq!(jacobi_trudi(&p("[2,1]"), 2), parse_qpoly("S1*S2 - S3").unwrap());
        assert_eq!(jacobi_trudi(&p("[]"), 3), parse_qpoly("1").unwrap());
    }

    #[test]
    fn products_in_b24() {
        let g = ring(2, Some(4)).unwrap();
        let s1 = SchurCombo::s(&g, 1);
        assert_eq!(s1.multiply(&s1).unwrap(), b(&g, "S[2] + S[1,1]"));
        assert_eq!(SchurCombo::one().multiply(&s1).unwrap(), s1);
        assert!(s1.multiply(&SchurCombo::basis(&g, &p("[2,2]"))).unwrap().is_zero());
        let other = ring(2, Some(5)).unwrap();
        assert!(s1.multiply(&SchurCombo::s(&other, 1)).is_err());
    }

    #[test]
    fn reduction() {
        let g = ring(2, Some(4)).unwrap();
        assert!(SchurCombo::reduce([(p("[3]"), rat(1))], &g).is_zero());
        assert_eq!(
            SchurCombo::reduce([(p("[2,2]"), rat(5))], &g).coeff(&p("[2,2]")),
            rat(5)
        );
        let inf = ring(2, None).unwrap();
        assert!(SchurCombo::reduce([(p("[1,1,1]"), rat(1))], &inf).is_zero());
    }

    #[test]
    fn dimensions() {
        for n in 0..=8 {
            for r in 0..=n {
                let g = ring(r, Some(n)).unwrap();
                assert_eq!(g.basis().len() as u64, crate::partitions::binomial(n as u64, r as u64));
            }
        }
        assert!(ring(3, Some(2)).is_err());
    }

    #[test]
    fn text_and_json_forms() {
        let g = ring(2, Some(4)).unwrap();
        let x = b(&g, "1*S[2,1] + -3/2*S[1]");
        assert_eq!(x.to_string(), "1*S[2,1] + -3/2*S[1]");
        assert_eq!(x.coeff(&p("[1]")), ratio(-3, 2));
        assert_eq!(b(&g, "S[2] - 2*S[1,1] + 3"), b(&g, "1*S[2] + -2*S[1,1] + 3*S[]"));
        assert_eq!(SchurCombo::from_json(&x.to_json(), &g).unwrap(), x);
        assert!(SchurCombo::parse("S[2] S[1]", &g).is_err());
        assert!(SchurCombo::parse("2*", &g).is_err());
    }

    #[test]
    fn segre_examples() {
        let g = ring(1, Some(4)).unwrap();
        let s = segre_series(&g, "z", 6);
        assert_eq!(s.body().len(), 4);
        for j in 0..=3 {
            assert_eq!(segre_class_chern(1, j), parse_qpoly(&format!("c1^{j}")).unwrap());
        }
        let want = parse_qpoly("1 + c1*z + (c1^2 - c2)*z^2 + (c1^3 - 2*c1*c2)*z^3").unwrap();
        assert_eq!(segre_chern(2, "z", 3).body(), &want);
        let g0 = ring(0, Some(3)).unwrap();
        assert_eq!(segre_series(&g0, "z", 3).body().len(), 1);
    }

    #[test]
    fn x_series_examples() {
        let g = ring(2, Some(5)).unwrap();
        let xs = x_series(&g, 3);
        assert_eq!(xs.x(1), &SchurCombo::s(&g, 1));
        assert_eq!(xs.x(2), &b(&g, "1/2*S[2] + -1/2*S[1,1]"));
        let g0 = ring(0, Some(4)).unwrap();
        assert!(x_series(&g0, 3).xs.iter().all(Zero::is_zero));
    }

    #[test]
    fn expansion_routes_agree() {
        for n in 1..=6u32 {
            for r in 0..=n.min(3) {
                let g = ring(r, Some(n)).unwrap();
                let t = SymContext::new("t", r as usize);
                let e = schur_expansion(&g, &t, 6, ExpansionRoute::Enumeration);
                let x = schur_expansion(&g, &t, 6, ExpansionRoute::Exponential);
                let pr = schur_expansion(&g, &t, 6, ExpansionRoute::Product);
                assert_eq!(e, x, "r={r} n={n}");
                assert_eq!(e, pr, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn expansion_small_case() {
        let g = ring(2, Some(4)).unwrap();
        let t = SymContext::new("t", 2);
        let e = schur_expansion(&g, &t, 2, ExpansionRoute::Enumeration);
        let c = |exps: &[(&str, u32)]| {
            let m = e.coefficient(exps).unwrap();
            m.coeff_of(&crate::arith::Monomial::one(m.alphabet().len()))
        };
        assert_eq!(c(&[("t1", 1)]), b(&g, "S[1]"));
        assert_eq!(c(&[("t1", 1), ("t2", 1)]), b(&g, "S[2] + S[1,1]"));
        assert_eq!(c(&[("t2", 2)]), b(&g, "S[2]"));
        let g1 = ring(1, Some(2)).unwrap();
        let t1 = SymContext::new("t", 1);
        let e1 = schur_expansion(&g1, &t1, 1, ExpansionRoute::Product);
        assert_eq!(e1.body().len(), 2);
    }

    #[test]
    fn chern_presentation() {
        let g = ring(2, Some(4)).unwrap();
        assert_eq!(to_chern(&b(&g, "S[1]")), parse_qpoly("c1").unwrap());
        assert_eq!(to_chern(&b(&g, "S[2]")), parse_qpoly("c1^2 - c2").unwrap());
        assert_eq!(to_chern(&b(&g, "S[1,1]")), parse_qpoly("c2").unwrap());
        let rel = chern_relations(&g);
        assert_eq!(rel[0], parse_qpoly("c1^3 - 2*c1*c2").unwrap());
        assert_eq!(rel[1], parse_qpoly("c1^4 - 3*c1^2*c2 + c2^2").unwrap());
    }

    #[test]
    fn class_evaluation() {
        let g = ring(2, Some(4)).unwrap();
        let q = parse_qpoly("c1^4 - 2*c1^2*c2 + c2^2").unwrap();
        let v = evaluate_classes(&q, &g);
        assert_eq!(v.coeff_of(&crate::arith::Monomial::one(0)), b(&g, "S[2,2]"));
        let q = parse_qpoly("S1^2 - S2 + c2*t1").unwrap();
        let v = evaluate_classes(&q, &g);
        assert_eq!(v.alphabet().names(), ["t1".to_string()]);
        assert_eq!(v.coefficient(&[]).unwrap(), b(&g, "S[1,1]"));
        assert_eq!(v.coefficient(&[("t1", 1)]).unwrap(), b(&g, "S[1,1]"));
    }

    #[test]
    fn jacobi_trudi_gives_basis_class() {
        for n in 1..=6u32 {
            for r in 0..=n {
                let g = ring(r, Some(n)).unwrap();
                for la in g.basis() {
                    let jt = jacobi_trudi(&la, r);
                    let mut acc = SchurCombo::zero_in(&g);
                    for (m, c) in jt.terms() {
                        let mut term = SchurCombo::scalar(Some(&g), c.clone());
                        for (name, &e) in jt.alphabet().names().iter().zip(m.exps()) {
                            let i: u32 = name[1..].parse().unwrap();
                            for _ in 0..e {
                                term = term.mul_s(i);
                            }
                        }
                        acc.add_assign_ref(&term);
                    }
                    assert_eq!(acc, SchurCombo::basis(&g, &la), "{la} r={r} n={n}");
                }
            }
        }
    }
}
