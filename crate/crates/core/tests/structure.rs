use etheta_core::freudenthal::{rank_one_with_trace, FreudenthalElement};
use etheta_core::jordan::{det3, JordanElement};
use etheta_core::octonion::{cox_norm, oct_mul, Octonion};
use etheta_core::Scalar;
use proptest::prelude::*;

fn small() -> impl Strategy<Value = i64> {
    -3i64..=3
}

fn octonion() -> impl Strategy<Value = Octonion> {
    proptest::array::uniform8(-2i64..=2).prop_map(Octonion::from_ints)
}

/// Octonions from the Coxeter order, including half-integral ones.
fn coxeter_octonion() -> impl Strategy<Value = Octonion> {
    proptest::array::uniform8(-2i64..=2).prop_map(|c| Octonion::from_coxeter_ints(&c))
}

fn jordan() -> impl Strategy<Value = JordanElement> {
    (proptest::array::uniform3(small()), proptest::array::uniform3(coxeter_octonion()))
        .prop_map(|(c, a)| JordanElement::new(c.map(Scalar::from_int), a))
}

fn freudenthal() -> impl Strategy<Value = FreudenthalElement> {
    (small(), jordan(), jordan(), small())
        .prop_map(|(a, b, c, d)| FreudenthalElement::new(a.into(), b, c, d.into()))
}

fn levi_matrix() -> impl Strategy<Value = [[Scalar; 3]; 3]> {
    proptest::array::uniform3(proptest::array::uniform3(small()))
        .prop_map(|m| m.map(|r| r.map(Scalar::from_int)))
        .prop_filter("invertible", |m| !det3(m).is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_multiplicative(x in octonion(), y in octonion()) {
        prop_assert_eq!(oct_mul(&x, &y).norm(), &x.norm() * &y.norm());
    }

    #[test]
    fn octonions_are_alternative(x in octonion(), y in octonion()) {
        prop_assert_eq!(oct_mul(&oct_mul(&x, &x), &y), oct_mul(&x, &oct_mul(&x, &y)));
        prop_assert_eq!(oct_mul(&oct_mul(&y, &x), &x), oct_mul(&y, &oct_mul(&x, &x)));
    }

    #[test]
    fn coxeter_norm_agrees(c in proptest::array::uniform8(-2i64..=2)) {
        prop_assert_eq!(Octonion::from_coxeter_ints(&c).norm(), Scalar::from_int(cox_norm(&c)));
    }

    #[test]
    fn adjoint_identity(x in jordan()) {
        prop_assert_eq!(x.sharp().sharp(), x.scale(&x.norm()));
    }

    #[test]
    fn pairing_with_adjoint(x in jordan()) {
        prop_assert_eq!(x.trace_pair(&x.sharp()), &Scalar::from_int(3) * &x.norm());
    }

    #[test]
    fn cross_is_polarized_sharp(x in jordan(), y in jordan()) {
        let s = &x + &y;
        prop_assert_eq!(s.sharp(), &(&x.sharp() + &y.sharp()) + &x.cross(&y));
    }

    #[test]
    fn levi_scales_norm(x in jordan(), n in levi_matrix()) {
        let d = det3(&n);
        let dinv2 = (&d * &d).inv().unwrap();
        prop_assert_eq!(x.sp6_levi_act(&n).unwrap().norm(), &dinv2 * &x.norm());
    }

    #[test]
    fn unipotents_preserve_invariants(w in freudenthal(), v in freudenthal(), g in jordan(), dual in any::<bool>()) {
        let act = |u: &FreudenthalElement| if dual { u.n_g_dual(&g) } else { u.n_g(&g) };
        let (gw, gv) = (act(&w), act(&v));
        prop_assert_eq!(gw.symplectic(&gv), w.symplectic(&v));
        prop_assert_eq!(gw.quartic(), w.quartic());
    }

    #[test]
    fn flip_preserves_invariants(w in freudenthal(), v in freudenthal()) {
        prop_assert_eq!(w.flip().symplectic(&v.flip()), w.symplectic(&v));
        prop_assert_eq!(w.flip().quartic(), w.quartic());
        prop_assert_eq!(w.flip().flip(), w.scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn rank_one_orbit(z in jordan(), g in jordan(), h in jordan()) {
        let w = FreudenthalElement::r1(&z);
        prop_assert!(w.is_rank_at_most_one());
        prop_assert!(w.quartic().is_zero());
        let moved = w.n_g(&g).n_g_dual(&h).flip();
        prop_assert!(moved.is_rank_at_most_one());
        prop_assert!(moved.quartic().is_zero());
    }

    #[test]
    fn symplectic_is_alternating(w in freudenthal(), v in freudenthal()) {
        prop_assert!(w.symplectic(&w).is_zero());
        prop_assert_eq!(v.symplectic(&w), -w.symplectic(&v));
    }
}

#[test]
fn rank_one_trace_two_elements_are_rank_one() {
    let els = rank_one_with_trace(2);
    assert!(!els.is_empty());
    for x in &els {
        let e = x.to_exact();
        assert!(e.is_rank_at_most_one());
        assert!(e.sharp().is_zero());
        assert_eq!(e.trace(), Scalar::from_int(2));
    }
}
