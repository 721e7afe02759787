//! Symmetric polynomials in a finite alphabet: e, h, p, Schur, and the
//! polynomials `U_{j,m}` and `y_m` attached to truncated complete sums.

use num_traits::One;

use crate::arith::{determinant, rat, Alphabet, MPoly, Monomial, Rational};
use crate::partitions::Partition;
use crate::QPoly;

/// A finite ordered set of symmetric variables.
#[derive(Clone, Debug, PartialEq)]
pub struct SymContext {
    alphabet: Alphabet,
}

impl SymContext {
    /// `prefix1, ..., prefix{r}`.
    pub fn new(prefix: &str, r: usize) -> Self {
        SymContext {
            alphabet: Alphabet::new((1..=r).map(|i| format!("{prefix}{i}"))),
        }
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SymContext {
            alphabet: Alphabet::new(names),
        }
    }

    /// Concatenation of two variable sets (e.g. `(z, t)`).
    pub fn join(&self, other: &SymContext) -> Self {
        SymContext::from_names(self.names().iter().chain(other.names()).cloned())
    }

    pub fn r(&self) -> usize {
        self.alphabet.len()
    }

    pub fn names(&self) -> &[String] {
        self.alphabet.names()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn one(&self) -> QPoly {
        MPoly::one(&self.alphabet)
    }

    fn var(&self, i: usize) -> QPoly {
        MPoly::var(&self.alphabet, &self.names()[i]).expect("own variable")
    }
}

pub fn elementary(k: u32, ctx: &SymContext) -> QPoly {
    let r = ctx.r();
    let mut out = MPoly::zero(ctx.alphabet());
    if k as usize > r {
        return out;
    }
    // all k-subsets
    fn go(start: usize, left: u32, r: usize, exps: &mut Vec<u32>, out: &mut QPoly) {
        if left == 0 {
            out.add_term(Monomial::from_exps(exps), Rational::one());
            return;
        }
        for i in start..r {
            exps[i] = 1;
            go(i + 1, left - 1, r, exps, out);
            exps[i] = 0;
        }
    }
    go(0, k, r, &mut vec![0; r], &mut out);
    out
}

pub fn complete(k: u32, ctx: &SymContext) -> QPoly {
    let r = ctx.r();
    let mut out = MPoly::zero(ctx.alphabet());
    if r == 0 {
        return if k == 0 { ctx.one() } else { out };
    }
    // all exponent vectors of total degree k
    fn go(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut QPoly) {
        if i + 1 == exps.len() {
            exps[i] = left;
            out.add_term(Monomial::from_exps(exps), Rational::one());
            exps[i] = 0;
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            go(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    go(0, k, &mut vec![0; r], &mut out);
    out
}

/// `p_k = t_1^k + ... + t_r^k`, for `k >= 1`.
pub fn power_sum(k: u32, ctx: &SymContext) -> QPoly {
    assert!(k >= 1, "power sums start at p_1");
    let mut out = MPoly::zero(ctx.alphabet());
    for i in 0..ctx.r() {
        let mut e = vec![0; ctx.r()];
        e[i] = k;
        out.add_term(Monomial::from_exps(&e), Rational::one());
    }
    out
}

/// `prod_{i<j} (t_j - t_i)`.
pub fn vandermonde(ctx: &SymContext) -> QPoly {
    let mut out = ctx.one();
    for j in 0..ctx.r() {
        for i in 0..j {
            out = out.mul_ref(&ctx.var(j).sub_ref(&ctx.var(i)));
        }
    }
    out
}

/// `det(t_i^{r-j}) = prod_{i<j} (t_i - t_j)`, the alternant of the staircase.
///
/// Differs from [`vandermonde`] by `(-1)^{r(r-1)/2}`; this is the factor in
/// `X(t_1)∧...∧X(t_r) = alternant · Σ_λ s_λ(t) X^r(λ)`.
pub fn alternant(ctx: &SymContext) -> QPoly {
    let v = vandermonde(ctx);
    let r = ctx.r();
    if (r * r.saturating_sub(1) / 2) % 2 == 1 {
        v.neg_ref()
    } else {
        v
    }
}

/// `det(t_i^{λ_j + r - j})`.
fn shifted_alternant(la: &[u32], ctx: &SymContext) -> QPoly {
    let r = ctx.r();
    let rows: Vec<Vec<QPoly>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let e = la[j] + (r - 1 - j) as u32;
                    MPoly::monomial(ctx.alphabet(), &[(ctx.names()[i].as_str(), e)], Rational::one())
                        .expect("own variable")
                })
                .collect()
        })
        .collect();
    determinant(&rows, &ctx.one())
}

/// Schur polynomial via the bialternant, divided out exactly.
///
/// Zero when `ℓ(λ) > r`.
pub fn schur(la: &Partition, ctx: &SymContext) -> QPoly {
    let r = ctx.r();
    let Some(parts) = la.padded(r) else {
        return MPoly::zero(ctx.alphabet());
    };
    let mut q = shifted_alternant(&parts, ctx);
    for i in 0..r {
        for j in i + 1..r {
            q = q
                .div_by_difference(&ctx.names()[i], &ctx.names()[j])
                .expect("bialternant division must be exact");
        }
    }
    q
}

/// `det(h_{λ_i - i + j})`, the Jacobi–Trudi form of the Schur polynomial.
pub fn schur_jacobi_trudi(la: &Partition, ctx: &SymContext) -> QPoly {
    let l = la.len();
    let h = |k: i64| -> QPoly {
        if k < 0 {
            MPoly::zero(ctx.alphabet())
        } else {
            complete(k as u32, ctx)
        }
    };
    let rows: Vec<Vec<QPoly>> = (1..=l)
        .map(|i| {
            (1..=l)
                .map(|j| h(la.part(i) as i64 - i as i64 + j as i64))
                .collect()
        })
        .collect();
    determinant(&rows, &ctx.one())
}

/// `U_{j,m} = Σ_{a=0}^{min(j,r)} (-1)^a e_a h_{m+j-a}`: coefficient of
/// `ζ^j` in `E_r(ζ) · Σ_{i≥m} h_i ζ^{i-m}`.
pub fn u_poly(j: u32, m: u32, ctx: &SymContext) -> QPoly {
    let mut out = MPoly::zero(ctx.alphabet());
    for a in 0..=j.min(ctx.r() as u32) {
        let term = elementary(a, ctx).mul_ref(&complete(m + j - a, ctx));
        out = if a % 2 == 0 {
            out.add_ref(&term)
        } else {
            out.sub_ref(&term)
        };
    }
    out
}

/// `y_m = U_{0,m} + U_{1,m} ζ + ... + U_{r-1,m} ζ^{r-1}`, over the alphabet
/// of `ctx` extended by `zeta`.
pub fn y_poly(m: u32, ctx: &SymContext, zeta: &str) -> QPoly {
    let vars = ctx.alphabet().union(&Alphabet::new([zeta]));
    let mut out = MPoly::zero(&vars);
    for j in 0..ctx.r() as u32 {
        let z = MPoly::monomial(&vars, &[(zeta, j)], Rational::one()).expect("zeta present");
        let u = u_poly(j, m, ctx).to_alphabet(&vars).expect("superset");
        out = out.add_ref(&u.mul_ref(&z));
    }
    out
}

/// `E_r(ζ) = prod (1 - t_i ζ) = Σ (-1)^i e_i ζ^i`.
pub fn e_series(ctx: &SymContext, zeta: &str) -> QPoly {
    let vars = ctx.alphabet().union(&Alphabet::new([zeta]));
    let mut out = MPoly::zero(&vars);
    for i in 0..=ctx.r() as u32 {
        let z = MPoly::monomial(&vars, &[(zeta, i)], rat(if i % 2 == 0 { 1 } else { -1 }))
            .expect("zeta present");
        let e = elementary(i, ctx).to_alphabet(&vars).expect("superset");
        out = out.add_ref(&e.mul_ref(&z));
    }
    out
}

/// `Σ_{j=0}^{d} h_j ζ^j`.
pub fn h_sum(d: u32, ctx: &SymContext, zeta: &str) -> QPoly {
    let vars = ctx.alphabet().union(&Alphabet::new([zeta]));
    let mut out = MPoly::zero(&vars);
    for j in 0..=d {
        let z = MPoly::monomial(&vars, &[(zeta, j)], Rational::one()).expect("zeta present");
        out = out.add_ref(&complete(j, ctx).to_alphabet(&vars).expect("superset").mul_ref(&z));
    }
    out
}

/// True when `p` is unchanged by every adjacent transposition of `ctx`.
pub fn is_symmetric(p: &QPoly, ctx: &SymContext) -> bool {
    let names = ctx.names();
    (1..names.len()).all(|i| {
        let p2 = p.to_alphabet(&p.alphabet().union(ctx.alphabet())).expect("superset");
        p2.swap_vars(&names[i - 1], &names[i]).expect("present") == p2
    }) || p.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_qpoly, TruncSeries};
    use crate::partitions::enumerate_by_weight;

    fn q(s: &str) -> QPoly {
        parse_qpoly(s).unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn basic_families() {
        let t = SymContext::new("t", 2);
        assert_eq!(elementary(1, &t), q("t1 + t2"));
        assert_eq!(elementary(3, &t), MPoly::zero(t.alphabet()));
        assert_eq!(complete(2, &t), q("t1^2 + t1*t2 + t2^2"));
        assert_eq!(power_sum(2, &t), q("t1^2 + t2^2"));
        assert_eq!(complete(0, &t), q("1"));
        assert_eq!(elementary(0, &t), q("1"));
    }

    #[test]
    fn vandermonde_signs() {
        assert_eq!(vandermonde(&SymContext::new("t", 1)), q("1"));
        assert_eq!(vandermonde(&SymContext::new("t", 2)), q("t2 - t1"));
        assert_eq!(
            vandermonde(&SymContext::new("t", 3)),
            q("(t2 - t1)*(t3 - t1)*(t3 - t2)")
        );
        assert_eq!(alternant(&SymContext::new("t", 2)), q("t1 - t2"));
        assert_eq!(alternant(&SymContext::new("t", 3)), vandermonde(&SymContext::new("t", 3)).neg_ref());
    }

    #[test]
    fn schur_examples() {
        let t = SymContext::new("t", 2);
        assert_eq!(schur(&p("[]"), &t), q("1"));
        assert_eq!(schur(&p("[1,1]"), &t), q("t1*t2"));
        assert_eq!(schur(&p("[2,1]"), &t), q("t1^2*t2 + t1*t2^2"));
        assert!(schur(&p("[1,1,1]"), &t).is_zero());
    }

    #[test]
    fn bialternant_matches_jacobi_trudi() {
        for r in 0..=4 {
            let t = SymContext::new("t", r);
            for w in 0..=6 {
                for la in enumerate_by_weight(r as u32, w) {
                    assert_eq!(schur(&la, &t), schur_jacobi_trudi(&la, &t), "{la} r={r}");
                }
            }
        }
    }

    #[test]
    fn newton_generating_identity() {
        for r in 0..=4 {
            let t = SymContext::new("t", r);
            let bound = 8;
            let vars = t.alphabet().union(&Alphabet::new(["zeta"]));
            let mut sum = MPoly::zero(&vars);
            for i in 1..=bound {
                let z = MPoly::monomial(&vars, &[("zeta", i)], Rational::new(1.into(), (i as i64).into())).unwrap();
                sum = sum.add_ref(&power_sum(i, &t).to_alphabet(&vars).unwrap().mul_ref(&z));
            }
            let e = TruncSeries::new(sum, &[("zeta", bound)]).exp().unwrap();
            let h = TruncSeries::new(h_sum(bound, &t, "zeta"), &[("zeta", bound)]);
            assert_eq!(e, h, "r={r}");
            let prod = h.mul_poly(&e_series(&t, "zeta"));
            assert_eq!(prod.body(), &MPoly::one(prod.alphabet()), "E*H r={r}");
        }
    }

    #[test]
    fn u_polynomials() {
        for r in 0..=4 {
            let t = SymContext::new("t", r);
            for m in 0..=6 {
                assert_eq!(u_poly(0, m, &t), complete(m, &t));
                if r >= 1 {
                    assert_eq!(
                        u_poly(1, m, &t),
                        complete(m + 1, &t).sub_ref(&elementary(1, &t).mul_ref(&complete(m, &t)))
                    );
                }
                for j in 0..=3 {
                    if r == 0 && j == 0 && m == 0 {
                        // E_0 = H_0 = 1, so U_{0,0} = h_0 = 1
                        assert_eq!(u_poly(0, 0, &t), q("1"));
                        continue;
                    }
                    assert!(u_poly(r as u32 + j, m, &t).is_zero(), "r={r} j={j} m={m}");
                }
            }
        }
    }

    #[test]
    fn y_identity() {
        for r in 0..=4 {
            let t = SymContext::new("t", r);
            for m in 0..=6u32 {
                if r == 0 && m == 0 {
                    // y_0 is an empty sum while the left side needs y_0 = 1
                    continue;
                }
                let y = y_poly(m, &t, "zeta");
                let vars = y.alphabet().clone();
                let lhs = if m == 0 {
                    MPoly::zero(&vars)
                } else {
                    h_sum(m - 1, &t, "zeta").to_alphabet(&vars).unwrap()
                };
                let lhs = lhs.mul_ref(&e_series(&t, "zeta").to_alphabet(&vars).unwrap());
                let zm = MPoly::monomial(&vars, &[("zeta", m)], Rational::one()).unwrap();
                let rhs = MPoly::one(&vars).sub_ref(&y.mul_ref(&zm));
                assert_eq!(lhs, rhs, "r={r} m={m}");
            }
        }
        let t1 = SymContext::new("t", 1);
        assert_eq!(y_poly(4, &t1, "v"), q("t1^4"));
        assert_eq!(y_poly(0, &SymContext::new("t", 2), "zeta"), q("1"));
        let t2 = SymContext::new("t", 2);
        let h1 = complete(1, &t2);
        let want = h1.add_ref(&complete(2, &t2).sub_ref(&elementary(1, &t2).mul_ref(&h1)).mul_ref(&q("zeta")));
        assert_eq!(y_poly(1, &t2, "zeta"), want);
    }

    #[test]
    fn schur_polys_are_symmetric() {
        let t = SymContext::new("t", 3);
        for la in enumerate_by_weight(3, 4) {
            assert!(is_symmetric(&schur(&la, &t), &t));
        }
        assert!(!is_symmetric(&q("t1"), &SymContext::new("t", 2)));
    }
}
