//! The generating series of the Clifford action on `B_{r,n}`: the polynomials
//! `𝕊_j`, the determinant `𝔻_{(r,h,k),n}`, assembly of the series and
//! coefficient extraction.
//!
//! Variables are `z1..zh`, `v1..vk` with `v_i = w_i^{-1}`, and `t1..tr`.
//! The series `G` satisfies: the coefficient of `z^I v^J t^{λ+δ}` in
//! `a(z) a(t) G` is `X^I ∂^J ⋆ S_λ` (`a` the alternant, `δ` the staircase).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{determinant, rat, ArithError, Coeff, MPoly, Monomial, Rational, TruncSeries};
use crate::bosonic::{ring, schur_expansion, segre_series, BosonicError, ExpansionRoute, SchurTermJson};
use crate::fermionic::{contract_series, sigma_plus, ExtVec};
use crate::partitions::{enumerate_by_weight, Partition};
use crate::symfun::{elementary, power_sum, schur, y_poly, SymContext};
use crate::{Alphabet, BPoly, BSeries, QPoly, QSeries, Ring, SchurCombo};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error(transparent)]
    Ring(#[from] BosonicError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("positive power of {0} survived assembly")]
    PositiveW(String),
}

/// `(r, h, k, n)`; `n = None` is the `n = ∞` mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub r: u32,
    pub h: u32,
    pub k: u32,
    #[serde(with = "n_serde")]
    pub n: Option<u32>,
}

mod n_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &Option<u32>, s: S) -> Result<S::Ok, S::Error> {
        match n {
            Some(n) => s.serialize_u32(*n),
            None => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u32>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum N {
            Num(u32),
            Text(String),
        }
        match N::deserialize(d)? {
            N::Num(n) => Ok(Some(n)),
            N::Text(t) if t == "inf" => Ok(None),
            N::Text(t) => Err(serde::de::Error::custom(format!("bad n `{t}`"))),
        }
    }
}

impl Params {
    pub fn new(r: u32, h: u32, k: u32, n: Option<u32>) -> Self {
        Params { r, h, k, n }
    }

    /// `m = r + h - k`, the rank of the target ring.
    pub fn m(&self) -> i64 {
        self.r as i64 + self.h as i64 - self.k as i64
    }

    /// `B_{m,n}`, or `None` when every action vanishes (`m < 0`, `m > n`,
    /// or `h > n`).
    pub fn target(&self) -> Result<Option<Ring>, GenError> {
        if let Some(n) = self.n {
            if self.r > n {
                return Err(GenError::Invalid(format!("r = {} exceeds n = {n}", self.r)));
            }
            if self.m() > n as i64 || self.h > n {
                return Ok(None);
            }
        }
        if self.m() < 0 {
            return Ok(None);
        }
        Ok(Some(ring(self.m() as u32, self.n)?))
    }

    pub fn z_names(&self) -> Vec<String> {
        (1..=self.h).map(|i| format!("z{i}")).collect()
    }

    pub fn v_names(&self) -> Vec<String> {
        (1..=self.k).map(|i| format!("v{i}")).collect()
    }

    fn w_names(&self) -> Vec<String> {
        (1..=self.k).map(|i| format!("W{i}")).collect()
    }

    pub fn t_names(&self) -> Vec<String> {
        (1..=self.r).map(|i| format!("t{i}")).collect()
    }

    /// `z.., v.., t..` in this order.
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(
            self.z_names()
                .into_iter()
                .chain(self.v_names())
                .chain(self.t_names()),
        )
    }
}

/// Per-variable truncation degrees for the `z`, `w^{-1}` and `t` groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub z: u32,
    pub w: u32,
    pub t: u32,
}

impl Bounds {
    pub fn new(z: u32, w: u32, t: u32) -> Self {
        Bounds { z, w, t }
    }

    /// The box containing the whole series for finite `n`.
    pub fn exact(p: &Params) -> Option<Bounds> {
        let n = p.n?;
        Some(Bounds {
            z: n.saturating_sub(p.h),
            w: n.saturating_sub(1),
            t: n.saturating_sub(p.r),
        })
    }

    pub fn grown(&self, d: u32) -> Bounds {
        Bounds::new(self.z + d, self.w + d, self.t + d)
    }

    /// Bound of every variable of `p`'s alphabet.
    pub fn list(&self, p: &Params) -> Vec<(String, u32)> {
        p.z_names()
            .into_iter()
            .map(|v| (v, self.z))
            .chain(p.v_names().into_iter().map(|v| (v, self.w)))
            .chain(p.t_names().into_iter().map(|v| (v, self.t)))
            .collect()
    }
}

/// Overall sign of the series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignRule {
    /// `(-1)^{hk + k(k-1)/2}`.
    Resolved,
    /// `(-1)^h`.
    AsPrinted,
}

/// Form of the exponential factor tying `t` to the `w`s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coupling {
    /// `Π_i exp(Σ_l p_l(t) v_i^l / l)`.
    PerVariable,
    /// `exp(Σ_l p_l(t) (v_1 ⋯ v_k)^l / l)`.
    Product,
}

/// The single table of sign and coupling conventions used by assembly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub sign: SignRule,
    pub coupling: Coupling,
    /// Extra global sign; only useful as a negative control.
    pub negate: bool,
}

impl Conventions {
    pub const RESOLVED: Conventions = Conventions {
        sign: SignRule::Resolved,
        coupling: Coupling::PerVariable,
        negate: false,
    };

    pub const AS_PRINTED: Conventions = Conventions {
        sign: SignRule::AsPrinted,
        coupling: Coupling::Product,
        negate: false,
    };

    pub fn negated(self) -> Self {
        Conventions {
            negate: !self.negate,
            ..self
        }
    }

    pub fn sign(&self, p: &Params) -> i64 {
        let e = match self.sign {
            SignRule::Resolved => p.h * p.k + p.k * p.k.saturating_sub(1) / 2,
            SignRule::AsPrinted => p.h,
        };
        let s = if e % 2 == 0 { 1 } else { -1 };
        if self.negate {
            -s
        } else {
            s
        }
    }
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions::RESOLVED
    }
}

/// `𝕊_j(vars) = Σ_a (-1)^a e_a(vars) S_{j+a}` in `ring` (`S_{<0} = 0`).
pub fn sbb_poly(j: i64, vars: &SymContext, ring: &Ring) -> BPoly {
    let mut out = BPoly::zero(vars.alphabet());
    for a in 0..=vars.r() as i64 {
        if j + a < 0 {
            continue;
        }
        let s = SchurCombo::s(ring, (j + a) as u32);
        if s.is_zero() {
            continue;
        }
        let s = if a % 2 == 1 { -s } else { s };
        out = out.add_ref(&elementary(a as u32, vars).map_coeffs(|q| s.scale(q)));
    }
    out
}

fn lift(p: &QPoly, vars: &Alphabet) -> BPoly {
    p.to_alphabet(&p.alphabet().union(vars))
        .expect("superset")
        .to_alphabet(vars)
        .expect("all variables known")
        .map_coeffs(|q| SchurCombo::from_rational(q.clone()))
}

/// The `(r+h) × (r+h)` matrix of `𝔻_{(r,h,k),n}` as displayed, over
/// `z.., v.., W.., t..` with `W_i = w_i` and `v_i = w_i^{-1}`.
///
/// Columns `1..h` carry `𝕊(t)`, columns `h+1..h+r` carry `𝕊(z)`. The first
/// `k` rows are `(0, ..., 0, w^{a-1}(1 - y_{n-r+a}(t; w^{-1}) w^{-(n-r+a)}))`;
/// row `k + i` is `𝕊_{h-c-m+i}(t)` in column `c`, `𝕊_{r-a-m+i}(z)` in column
/// `h + a`.
pub fn d_matrix(p: &Params, target: &Ring) -> Vec<Vec<BPoly>> {
    let (r, h, k) = (p.r as i64, p.h as i64, p.k as i64);
    let m = p.m();
    let vars = Alphabet::new(
        p.z_names()
            .into_iter()
            .chain(p.v_names())
            .chain(p.w_names())
            .chain(p.t_names()),
    );
    let tctx = SymContext::new("t", p.r as usize);
    let zctx = SymContext::new("z", p.h as usize);
    let size = (r + h) as usize;
    let mut rows = Vec::with_capacity(size);
    for (v, w) in p.v_names().iter().zip(p.w_names()) {
        let mut row = vec![BPoly::zero(&vars); size];
        for a in 1..=r {
            let wpow = BPoly::monomial(&vars, &[(w.as_str(), (a - 1) as u32)], SchurCombo::one()).expect("own");
            let entry = match p.n {
                Some(n) => {
                    let e = (n as i64 - r + a) as u32;
                    let y = y_poly(e, &tctx, v);
                    let y = y.to_alphabet(&y.alphabet().union(&vars)).expect("superset");
                    let vpow = MPoly::monomial(y.alphabet(), &[(v.as_str(), e)], Rational::one()).expect("own");
                    let one = QPoly::one(y.alphabet());
                    lift(&one.sub_ref(&y.mul_ref(&vpow)), &vars)
                }
                None => BPoly::one(&vars),
            };
            row[(h + a - 1) as usize] = entry.mul_ref(&wpow);
        }
        rows.push(row);
    }
    for i in 1..=m {
        let mut row = Vec::with_capacity(size);
        for c in 1..=h {
            row.push(sbb_poly(h - c - m + i, &tctx, target).to_alphabet(&vars).expect("superset"));
        }
        for a in 1..=r {
            row.push(sbb_poly(r - a - m + i, &zctx, target).to_alphabet(&vars).expect("superset"));
        }
        rows.push(row);
    }
    debug_assert_eq!(rows.len() as i64, k + m);
    rows
}

/// Multiplies the first `k` rows by `w_i^{1-r}` and cancels `w_i w_i^{-1}`;
/// fails if a positive power of some `w_i` is left.
pub fn clear_w(mat: &[Vec<BPoly>], p: &Params) -> Result<Vec<Vec<BPoly>>, GenError> {
    let target = p.alphabet();
    let mut out = Vec::with_capacity(mat.len());
    for (idx, row) in mat.iter().enumerate() {
        let mut new_row = Vec::with_capacity(row.len());
        for entry in row {
            let vars = entry.alphabet().clone();
            let mut e = BPoly::zero(&vars);
            for (mono, c) in entry.terms() {
                let mut ex = mono.exps().to_vec();
                if idx < p.k as usize {
                    let vi = vars.index(&format!("v{}", idx + 1)).expect("v present");
                    let wi = vars.index(&format!("W{}", idx + 1)).expect("W present");
                    ex[vi] += p.r.saturating_sub(1);
                    let cancel = ex[vi].min(ex[wi]);
                    ex[vi] -= cancel;
                    ex[wi] -= cancel;
                    if ex[wi] > 0 {
                        return Err(GenError::PositiveW(format!("w{}", idx + 1)));
                    }
                }
                e.add_term(Monomial::from_exps(&ex), c.clone());
            }
            new_row.push(e.to_alphabet(&target).map_err(|_| GenError::PositiveW("w".into()))?);
        }
        out.push(new_row);
    }
    Ok(out)
}

/// `Π_i w_i^{1-r} · 𝔻_{(r,h,k),n}` truncated to `bounds`.
pub fn build_d(p: &Params, bounds: &Bounds) -> Result<BSeries, GenError> {
    let alphabet = p.alphabet();
    let blist = bounds.list(p);
    let bref: Vec<(&str, u32)> = blist.iter().map(|(v, b)| (v.as_str(), *b)).collect();
    let Some(target) = p.target()? else {
        return Ok(TruncSeries::new(BPoly::zero(&alphabet), &bref));
    };
    let mat = clear_w(&d_matrix(p, &target), p)?;
    let entries: Vec<Vec<BSeries>> = mat
        .into_iter()
        .map(|row| row.into_iter().map(|e| TruncSeries::new(e, &bref)).collect())
        .collect();
    let one = TruncSeries::new(BPoly::one(&alphabet), &bref);
    Ok(determinant(&entries, &one))
}

/// The exponential factor in `t` and `v`, truncated to `bounds`.
pub fn coupling_factor(p: &Params, bounds: &Bounds, coupling: Coupling) -> QSeries {
    let alphabet = p.alphabet();
    let blist = bounds.list(p);
    let bref: Vec<(&str, u32)> = blist.iter().map(|(v, b)| (v.as_str(), *b)).collect();
    let one = TruncSeries::new(QPoly::one(&alphabet), &bref);
    if p.r == 0 || p.k == 0 {
        return one;
    }
    let tctx = SymContext::new("t", p.r as usize);
    let top = bounds.w.min(bounds.t);
    let arg_for = |vs: &[String]| -> QSeries {
        let mut arg = QPoly::zero(&alphabet);
        for l in 1..=top {
            let exps: Vec<(&str, u32)> = vs.iter().map(|v| (v.as_str(), l)).collect();
            let vl = QPoly::monomial(&alphabet, &exps, rat(1) / rat(l as i64)).expect("own");
            let pl = power_sum(l, &tctx).to_alphabet(&alphabet).expect("superset");
            arg = arg.add_ref(&pl.mul_ref(&vl));
        }
        TruncSeries::new(arg, &bref).exp().expect("no constant term")
    };
    match coupling {
        Coupling::PerVariable => p
            .v_names()
            .iter()
            .fold(one, |acc, v| acc.mul_ref(&arg_for(std::slice::from_ref(v)))),
        Coupling::Product => arg_for(&p.v_names()),
    }
}

/// Truncated generating series with its parameters.
#[derive(Clone, Debug)]
pub struct GenSeries {
    pub params: Params,
    pub bounds: Bounds,
    /// `B_{r+h-k,n}`, absent when the series is identically zero.
    pub target: Option<Ring>,
    /// Over the alphabet `z.., v.., t..`.
    pub series: BSeries,
}

impl PartialEq for GenSeries {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.bounds == other.bounds && self.series == other.series
    }
}

/// Assembles `G = ± coupling · Σ_μ S_μ s_μ(z,t) · Π w_i^{1-r} 𝔻`.
pub fn main_series(p: &Params, bounds: Option<Bounds>, conv: &Conventions) -> Result<GenSeries, GenError> {
    let bounds = match bounds.or_else(|| Bounds::exact(p)) {
        Some(b) => b,
        None => return Err(GenError::Invalid("n = ∞ needs explicit bounds".into())),
    };
    let alphabet = p.alphabet();
    let blist = bounds.list(p);
    let bref: Vec<(&str, u32)> = blist.iter().map(|(v, b)| (v.as_str(), *b)).collect();
    let target = p.target()?;
    let Some(ring) = target.clone() else {
        return Ok(GenSeries {
            params: *p,
            bounds,
            target,
            series: TruncSeries::new(BPoly::zero(&alphabet), &bref),
        });
    };
    if p.h == 0 && p.k == 0 {
        let tctx = SymContext::new("t", p.r as usize);
        let s = schur_expansion(&ring, &tctx, bounds.t * p.r, ExpansionRoute::Product);
        let mut series = TruncSeries::new(s.into_body().to_alphabet(&alphabet)?, &bref);
        if conv.negate {
            series = series.neg_ref();
        }
        return Ok(GenSeries {
            params: *p,
            bounds,
            target,
            series,
        });
    }
    let d = build_d(p, &bounds)?;
    let mut cauchy = TruncSeries::new(BPoly::one(&alphabet), &bref);
    for (v, b) in p
        .z_names()
        .iter()
        .map(|v| (v, bounds.z))
        .chain(p.t_names().iter().map(|v| (v, bounds.t)))
    {
        cauchy = cauchy.mul_ref(&segre_series(&ring, v, b));
    }
    let e = coupling_factor(p, &bounds, conv.coupling);
    let e = TruncSeries::from_parts(
        e.body().map_coeffs(|q| SchurCombo::from_rational(q.clone())),
        e.bounds().clone(),
    );
    let g = cauchy.mul_ref(&d).mul_ref(&e).scale(&rat(conv.sign(p)));
    let series = TruncSeries::new(g.into_body().to_alphabet(&alphabet)?, &bref);
    Ok(GenSeries {
        params: *p,
        bounds,
        target,
        series,
    })
}

/// Degree of `X^I ∂^J ⋆ S_λ` in `B_{r+h-k,n}`:
/// `|λ| + |I| - |J| + r(r-1)/2 - m(m-1)/2`.
pub fn action_degree(p: &Params, i: &[u32], j: &[u32], la: &Partition) -> i64 {
    let (r, m) = (p.r as i64, p.m());
    la.weight() as i64 + i.iter().sum::<u32>() as i64 - j.iter().sum::<u32>() as i64 + r * (r - 1) / 2
        - m * (m - 1) / 2
}

/// Permutations of `0..n` with their signs.
fn signed_permutations(n: usize) -> Vec<(Vec<u32>, i64)> {
    fn go(cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<(Vec<u32>, i64)>) {
        let n = used.len();
        if cur.len() == n {
            let inv = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| cur[i] > cur[j])
                .count();
            out.push((cur.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x as u32);
                go(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl GenSeries {
    /// Coefficient of `z^a v^b t^c`. Past the bounds this is zero when the
    /// bounds contain the exact box, and an error otherwise.
    pub fn coefficient(&self, a: &[u32], b: &[u32], c: &[u32]) -> Result<SchurCombo, GenError> {
        let exact = Bounds::exact(&self.params);
        let checks = [(a, self.bounds.z, exact.map(|e| e.z)), (b, self.bounds.w, exact.map(|e| e.w)), (c, self.bounds.t, exact.map(|e| e.t))];
        for (exps, bound, box_bound) in checks {
            if let Some(&e) = exps.iter().find(|&&e| e > bound) {
                return match box_bound {
                    Some(bb) if bound >= bb => Ok(SchurCombo::zero()),
                    _ => Err(ArithError::BeyondTruncation {
                        var: "series".into(),
                        exp: e,
                        bound,
                    }
                    .into()),
                };
            }
        }
        let ex: Vec<u32> = a.iter().chain(b).chain(c).copied().collect();
        Ok(self.series.body().coeff_of(&Monomial::from_exps(&ex)))
    }

    /// The coefficient of `s_λ(t)` in the coefficient of `z^a v^b`.
    fn schur_t_coefficient(&self, a: &[u32], b: &[u32], la: &Partition) -> Result<SchurCombo, GenError> {
        let r = self.params.r as usize;
        let Some(lp) = la.padded(r) else {
            return Ok(SchurCombo::zero());
        };
        let mut out = SchurCombo::zero();
        for (tau, sg) in signed_permutations(r) {
            let c: Option<Vec<u32>> = (0..r)
                .map(|j| {
                    let want = lp[j] + (r - 1 - j) as u32;
                    want.checked_sub(r as u32 - 1 - tau[j])
                })
                .collect();
            let Some(c) = c else { continue };
            let g = self.coefficient(a, b, &c)?;
            out.add_assign_ref(&g.scale(&rat(sg)));
        }
        Ok(out)
    }
}

fn check_strict(xs: &[u32], len: u32, what: &str) -> Result<(), GenError> {
    if xs.len() != len as usize {
        return Err(GenError::Invalid(format!("{what} must have {len} entries, got {xs:?}")));
    }
    if xs.windows(2).any(|w| w[0] <= w[1]) {
        return Err(GenError::Invalid(format!("{what} must be strictly decreasing, got {xs:?}")));
    }
    Ok(())
}

/// `X^I ∂^J ⋆ S_λ` read off the series: the coefficient of
/// `z^I v^J t^{λ+δ}` in `a(z) a(t) G`.
pub fn extract_action(gs: &GenSeries, i: &[u32], j: &[u32], la: &Partition) -> Result<SchurCombo, GenError> {
    let p = &gs.params;
    check_strict(i, p.h, "I")?;
    check_strict(j, p.k, "J")?;
    if la.len() > p.r as usize {
        return Err(GenError::Invalid(format!("{la} has more than r = {} parts", p.r)));
    }
    if let Some(n) = p.n {
        if i.iter().chain(j).any(|&x| x >= n) {
            return Err(GenError::Invalid(format!("indices of ({i:?}, {j:?}) must be below n = {n}")));
        }
    }
    let Some(target) = gs.target.as_ref() else {
        return Ok(SchurCombo::zero());
    };
    if p.n.is_some_and(|n| la.first() > n - p.r) {
        return Ok(SchurCombo::zero_in(target));
    }
    let h = p.h as usize;
    let mut out = SchurCombo::zero();
    for (sigma, sg) in signed_permutations(h) {
        let a: Option<Vec<u32>> = (0..h).map(|q| i[q].checked_sub(h as u32 - 1 - sigma[q])).collect();
        let Some(a) = a else { continue };
        let c = gs.schur_t_coefficient(&a, j, la)?;
        out.add_assign_ref(&c.scale(&rat(sg)));
    }
    Ok(out.with_ring(target))
}

#[derive(Serialize, Deserialize)]
struct GenTermJson {
    z: Vec<u32>,
    w: Vec<u32>,
    lambda: Partition,
    value: Vec<SchurTermJson>,
}

#[derive(Serialize, Deserialize)]
struct GenSeriesJson {
    params: Params,
    bounds: Bounds,
    coefficients: Vec<GenTermJson>,
}

impl GenSeries {
    /// Terms `(z-exponents, v-exponents, λ, value)` in the `s_λ(t)` basis.
    ///
    /// For finite `n` with bounds containing the exact box this is the whole
    /// series; otherwise only the `λ` with `λ_1 + r - 1 ≤` the t-bound.
    pub fn schur_terms(&self) -> Vec<(Vec<u32>, Vec<u32>, Partition, SchurCombo)> {
        let (h, k, r) = (self.params.h as usize, self.params.k as usize, self.params.r);
        let mut groups: BTreeMap<(Vec<u32>, Vec<u32>), ()> = BTreeMap::new();
        for m in self.series.body().terms().keys() {
            let e = m.exps();
            groups.insert((e[..h].to_vec(), e[h..h + k].to_vec()), ());
        }
        let readable = (self.bounds.t + 1).saturating_sub(r);
        let max_first = match (self.params.n, Bounds::exact(&self.params)) {
            (Some(n), Some(e)) if self.bounds.t >= e.t => n - r,
            (Some(n), _) => (n - r).min(readable),
            _ => readable,
        };
        let mut out = Vec::new();
        for (a, b) in groups.into_keys() {
            for w in 0..=r * max_first {
                for la in enumerate_by_weight(r, w) {
                    if la.first() > max_first {
                        continue;
                    }
                    let c = self
                        .schur_t_coefficient(&a, &b, &la)
                        .expect("within bounds");
                    if !c.is_zero() {
                        out.push((a.clone(), b.clone(), la, c));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coefficients = self
            .schur_terms()
            .into_iter()
            .map(|(z, w, lambda, v)| GenTermJson {
                z,
                w,
                lambda,
                value: v.to_json(),
            })
            .collect();
        serde_json::to_value(GenSeriesJson {
            params: self.params,
            bounds: self.bounds,
            coefficients,
        })
        .expect("plain data")
    }

    /// Rebuilds the series as `Σ value · z^a v^b s_λ(t)`.
    pub fn from_json(v: &serde_json::Value) -> Result<GenSeries, GenError> {
        let raw: GenSeriesJson =
            serde_json::from_value(v.clone()).map_err(|e| GenError::Invalid(e.to_string()))?;
        let p = raw.params;
        let target = p.target()?;
        let alphabet = p.alphabet();
        let blist = raw.bounds.list(&p);
        let bref: Vec<(&str, u32)> = blist.iter().map(|(v, b)| (v.as_str(), *b)).collect();
        let tctx = SymContext::new("t", p.r as usize);
        let mut body = BPoly::zero(&alphabet);
        for term in raw.coefficients {
            let ring = target
                .as_ref()
                .ok_or_else(|| GenError::Invalid("nonzero term in a zero series".into()))?;
            let value = SchurCombo::from_json(&term.value, ring)?;
            if term.z.len() != p.h as usize || term.w.len() != p.k as usize {
                return Err(GenError::Invalid("exponent vector of wrong length".into()));
            }
            let s = schur(&term.lambda, &tctx).to_alphabet(&alphabet)?;
            let names: Vec<String> = p.z_names().into_iter().chain(p.v_names()).collect();
            let exps: Vec<(&str, u32)> = names
                .iter()
                .map(String::as_str)
                .zip(term.z.iter().chain(&term.w).copied())
                .collect();
            let mono = QPoly::monomial(&alphabet, &exps, Rational::one())?;
            body = body.add_ref(&s.mul_ref(&mono).map_coeffs(|q| value.scale(q)));
        }
        Ok(GenSeries {
            params: p,
            bounds: raw.bounds,
            target,
            series: TruncSeries::new(body, &bref),
        })
    }
}

impl fmt::Display for GenSeries {
    /// One line per `z^a w^{-b} s_λ(t)` term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.schur_terms();
        if terms.is_empty() {
            return writeln!(f, "0");
        }
        for (a, b, la, v) in terms {
            let mut parts = Vec::new();
            for (q, e) in a.iter().enumerate() {
                if *e > 0 {
                    parts.push(format!("z{}^{e}", q + 1));
                }
            }
            for (q, e) in b.iter().enumerate() {
                if *e > 0 {
                    parts.push(format!("w{}^-{e}", q + 1));
                }
            }
            parts.push(format!("s{la}(t)"));
            writeln!(f, "{}: {v}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl GenSeries {
    /// Coefficientwise equality of the Schur expansions, ignoring which ring
    /// the coefficients live in (used to compare finite `n` with `n = ∞`).
    pub fn agrees_with(&self, other: &GenSeries) -> bool {
        let (a, b) = (self.series.body(), other.series.body());
        a.alphabet().names() == b.alphabet().names()
            && a.len() == b.len()
            && a.terms().iter().all(|(m, c)| b.coeff_of(m).coeffs() == c.coeffs())
    }
}

/// Smallest `n` for which the finite-`n` series agrees with the `n = ∞` one
/// inside `bounds`: no `y`-term reaches the `w`-bound and every Schur class
/// of the reachable degrees fits in the rectangle.
pub fn stable_n(r: u32, h: u32, k: u32, bounds: &Bounds) -> u32 {
    let m = (r + h).saturating_sub(k);
    (m + h * bounds.z + r * bounds.t).max(bounds.w + r)
}

/// Both sides of `σ₊(z)X^h(0) ∧ σ₊(t)X^r(0) = Π_{i,j}(z_i - t_j) σ₊(z,t)X^{h+r}(0)`.
pub struct WedgeCheck {
    pub left: TruncSeries<ExtVec>,
    pub right: TruncSeries<ExtVec>,
}

impl WedgeCheck {
    pub fn difference(&self) -> TruncSeries<ExtVec> {
        self.left.sub_ref(&self.right)
    }
}

/// Left side through the fermionic `σ₊`; right side from bialternant Schur
/// polynomials. Each variable is truncated at `bound`.
pub fn cauchy_wedge(h: u32, r: u32, n: Option<u32>, bound: u32) -> WedgeCheck {
    let zs: Vec<String> = (1..=h).map(|i| format!("z{i}")).collect();
    let ts: Vec<String> = (1..=r).map(|i| format!("t{i}")).collect();
    let all = SymContext::from_names(zs.iter().chain(&ts).cloned());
    let bref: Vec<(&str, u32)> = all.names().iter().map(|v| (v.as_str(), bound)).collect();
    let vac = |d: u32| ExtVec::basis(&Partition::empty(), d);
    let left = sigma_plus(&zs, &vac(h), n, bound).mul_ref(&sigma_plus(&ts, &vac(r), n, bound));
    let left = TruncSeries::new(left.into_body().to_alphabet(all.alphabet()).expect("same"), &bref);

    let d = h + r;
    // truncated s_λ with λ_1 past the bound still reach into the box
    let top_first = match n {
        Some(n) if d > n => return WedgeCheck {
            right: left.zero_like(),
            left,
        },
        Some(n) => n - d,
        None => d * bound,
    };
    let mut sum: MPoly<ExtVec> = MPoly::zero(all.alphabet());
    for w in 0..=(d * top_first).min(d * bound) {
        for la in enumerate_by_weight(d, w) {
            if la.first() > top_first {
                continue;
            }
            let x = ExtVec::basis(&la, d);
            sum = sum.add_ref(&schur(&la, &all).map_coeffs(|q| x.scale(q)));
        }
    }
    let mut factor = QPoly::one(all.alphabet());
    for z in &zs {
        for t in &ts {
            let diff = QPoly::var(all.alphabet(), z)
                .expect("own")
                .sub_ref(&QPoly::var(all.alphabet(), t).expect("own"));
            factor = factor.mul_ref(&diff);
        }
    }
    let right = TruncSeries::new(sum, &bref).mul_ref(&TruncSeries::new(
        factor.map_coeffs(|q| ExtVec::scalar(q.clone())),
        &bref,
    ));
    WedgeCheck { left, right }
}

/// Both sides of the `h = 0, k = r` case: iterated contraction
/// `∂(v_1)⌟ ⋯ ∂(v_r)⌟ σ₊(t)X^r(0)` against `(-1)^{r(r-1)/2}` times the
/// determinant of the cleared top rows times the coupling factor.
pub struct ContractionCheck {
    pub left: QSeries,
    pub right: QSeries,
}

pub fn contraction_det(r: u32, n: Option<u32>, bound: u32) -> ContractionCheck {
    let p = Params::new(r, 0, r, n);
    let bounds = Bounds::new(0, bound, bound);
    let alphabet = p.alphabet();
    let blist = bounds.list(&p);
    let bref: Vec<(&str, u32)> = blist.iter().map(|(v, b)| (v.as_str(), *b)).collect();

    let vac = ExtVec::basis(&Partition::empty(), r);
    let mut cur = sigma_plus(&p.t_names(), &vac, n, bound);
    for v in p.v_names().iter().rev() {
        cur = contract_series(&cur, v, bound);
    }
    let body = cur
        .body()
        .map_coeffs(|c| c.coeff(&crate::fermionic::ExtMonomial::empty()));
    let left = TruncSeries::new(body.to_alphabet(&alphabet).expect("same variables"), &bref);

    let tctx = SymContext::new("t", r as usize);
    let rows: Vec<Vec<QSeries>> = p
        .v_names()
        .iter()
        .map(|v| {
            (1..=r)
                .map(|a| {
                    let lead = QPoly::monomial(&alphabet, &[(v.as_str(), r - a)], Rational::one()).expect("own");
                    let entry = match n {
                        Some(n) => {
                            let e = n - r + a;
                            let y = y_poly(e, &tctx, v).to_alphabet(&alphabet).expect("superset");
                            let ve = QPoly::monomial(&alphabet, &[(v.as_str(), e)], Rational::one()).expect("own");
                            lead.mul_ref(&QPoly::one(&alphabet).sub_ref(&y.mul_ref(&ve)))
                        }
                        None => lead,
                    };
                    TruncSeries::new(entry, &bref)
                })
                .collect()
        })
        .collect();
    let det = determinant(&rows, &TruncSeries::new(QPoly::one(&alphabet), &bref));
    let sign = if (r * r.saturating_sub(1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let right = det
        .mul_ref(&coupling_factor(&p, &bounds, Coupling::PerVariable))
        .scale(&rat(sign));
    ContractionCheck { left, right }
}
