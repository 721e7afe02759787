use bfc::arith::{ratio, rat};
use bfc::fermionic::{clifford_act, ContractionOrder};
use bfc::{ring, Alphabet, CliffordWord, Coeff, ExtVec, Monomial, Partition, QPoly, QSeries, SchurCombo};
use num_traits::{One, Zero};
use proptest::prelude::*;

const N: u32 = 7;

fn qpoly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -4i64..=4, 1i64..=3), 0..6).prop_map(|terms| {
        let vars = Alphabet::new(["x", "y", "z"]);
        let mut p = QPoly::zero(&vars);
        for ((a, b, c), n, d) in terms {
            p.add_term(Monomial::from_exps(&[a, b, c]), ratio(n, d));
        }
        p
    })
}

fn series(constant: i64) -> impl Strategy<Value = QSeries> {
    (qpoly(), 1u32..4).prop_map(move |(p, b)| {
        let vars = p.alphabet().clone();
        let mut body = QPoly::zero(&vars);
        for (m, c) in p.terms() {
            if !m.is_one() {
                body.add_term(m.clone(), c.clone());
            }
        }
        body.add_term(Monomial::one(3), rat(constant));
        QSeries::new(body, &[("x", b), ("y", b), ("z", b)])
    })
}

/// Homogeneous element of degree `d` of `⋀ V_N`.
fn ext(d: usize) -> impl Strategy<Value = ExtVec> {
    prop::collection::vec((prop::collection::btree_set(0..N, d), -3i64..=3), 1..4).prop_map(|terms| {
        terms.into_iter().fold(ExtVec::zero(), |acc, (s, c)| {
            let e: Vec<u32> = s.into_iter().collect();
            acc + ExtVec::wedge_of(&e, Some(N)).scale_by(&rat(c))
        })
    })
}

fn schur_element() -> impl Strategy<Value = SchurCombo> {
    let g = ring(2, Some(5)).unwrap();
    let basis = g.basis();
    prop::collection::vec((0..basis.len(), -3i64..=3), 0..4).prop_map(move |terms| {
        terms.into_iter().fold(SchurCombo::zero(), |acc, (i, c)| {
            acc + SchurCombo::basis(&g, &basis[i]).scale(&rat(c))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn polynomial_ring_axioms(a in qpoly(), b in qpoly(), c in qpoly()) {
        prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert!(a.sub_ref(&a).is_zero());
        prop_assert_eq!(a.mul_ref(&QPoly::one(a.alphabet())), a.clone());
    }

    #[test]
    fn polynomial_text_round_trip(a in qpoly()) {
        let back = bfc::arith::parse_qpoly(&a.to_string()).unwrap();
        prop_assert_eq!(back.to_alphabet(a.alphabet()).unwrap(), a);
    }

    #[test]
    fn exp_log_round_trips(s in series(1), u in series(0)) {
        prop_assert_eq!(s.log().unwrap().exp().unwrap(), s);
        prop_assert_eq!(u.exp().unwrap().log().unwrap(), u);
    }

    #[test]
    fn exp_is_a_homomorphism(a in series(0), b in series(0)) {
        let b = b.retruncate(&[("x", 3), ("y", 3), ("z", 3)]);
        let a = a.retruncate(&[("x", 3), ("y", 3), ("z", 3)]);
        prop_assert_eq!(a.add_ref(&b).exp().unwrap(), a.exp().unwrap().mul_ref(&b.exp().unwrap()));
    }

    #[test]
    fn inverse_is_two_sided(s in series(3)) {
        let i = s.inverse().unwrap();
        prop_assert_eq!(i.mul_ref(&s), s.one_like());
        prop_assert_eq!(s.mul_ref(&i), s.one_like());
    }

    #[test]
    fn wedge_is_graded_commutative(
        (d, e, a, b) in (0usize..3, 0usize..3).prop_flat_map(|(d, e)| (Just(d), Just(e), ext(d), ext(e)))
    ) {
        let ba = b.wedge(&a);
        let sign = if d * e % 2 == 1 { -ba } else { ba };
        prop_assert_eq!(a.wedge(&b), sign);
    }

    #[test]
    fn contraction_is_an_antiderivation(a in ext(2), b in ext(1), j in 0..N) {
        let lhs = a.wedge(&b).contract_index(j);
        let rhs = a.contract_index(j).wedge(&b) + a.wedge(&b.contract_index(j));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn clifford_relations_hold(u in ext(2), i in 0..N, j in 0..N) {
        let act = |c: &[u32], a: &[u32], v: &ExtVec| {
            clifford_act(&CliffordWord::new(c, a), v, Some(N), ContractionOrder::RightmostFirst)
        };
        let xd = act(&[i], &[j], &u);
        let dx = act(&[i], &[], &u).contract_index(j);
        let delta = if i == j { u.clone() } else { ExtVec::zero() };
        prop_assert_eq!(xd + dx, delta);
        prop_assert!(act(&[i, i], &[], &u).is_zero());
        prop_assert!(act(&[], &[j, j], &u).is_zero());
    }

    #[test]
    fn schur_ring_is_commutative_and_associative(a in schur_element(), b in schur_element(), c in schur_element()) {
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b + a * c);
    }

    #[test]
    fn pieri_products_commute(la in prop::sample::select(ring(3, Some(6)).unwrap().basis()), i in 0u32..4, j in 0u32..4) {
        let g = ring(3, Some(6)).unwrap();
        let x = SchurCombo::basis(&g, &la);
        prop_assert_eq!(x.mul_s(i).mul_s(j), x.mul_s(j).mul_s(i));
        let one = SchurCombo::basis(&g, &Partition::empty());
        prop_assert_eq!(one.mul_s(i) * x.clone(), x.mul_s(i));
    }
}

#[test]
fn scalar_one_is_unit() {
    let g = ring(2, Some(4)).unwrap();
    let x = SchurCombo::basis(&g, &Partition::new(&[2, 1]).unwrap());
    assert_eq!(SchurCombo::one() * x.clone(), x);
}
