use diffeo_core::frontend::{parse_form, print_form};
use diffeo_core::presentation::Chart;
use diffeo_core::scalars::{rat, ConstantSystem};
use diffeo_core::verify::{random_affine, random_form};
use diffeo_core::{Scalar, ScalarExponent, TrigForm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn constants() -> ConstantSystem {
    ConstantSystem::new(["a"]).unwrap()
}

fn exponent() -> impl Strategy<Value = ScalarExponent> {
    (-6i64..=6, 1i64..=6, -2i64..=2).prop_map(|(n, d, m)| {
        ScalarExponent::rational(rat(n, d)).add(&ScalarExponent::constant("a").scale(&rat(m, 1)))
    })
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Scalar::ratio(n, d)),
        (-5i64..=5, 1i64..=8).prop_map(|(n, d)| Scalar::phase(&ScalarExponent::rational(rat(n, d)))),
        exponent().prop_map(|e| Scalar::phase(&e)),
        (0u32..=2).prop_map(|k| Scalar::pi().pow(k)),
        Just(Scalar::i()),
        Just(Scalar::constant("a")),
    ]
}

fn scalar_expr() -> impl Strategy<Value = Scalar> {
    (scalar(), scalar(), scalar()).prop_map(|(x, y, z)| &(&x * &y) + &z)
}

fn form(seed: u64, dim: usize, degree: usize) -> TrigForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_form(&mut rng, dim, degree, 3, &constants())
}

fn chart(dim: usize) -> Chart {
    Chart {
        name: "U".into(),
        dim,
        vars: ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect(),
        bounds: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalars_form_a_commutative_ring(x in scalar_expr(), y in scalar_expr(), z in scalar_expr()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn nonzero_scalars_invert(x in scalar_expr()) {
        prop_assume!(!x.is_zero());
        let inv = x.inv().unwrap();
        prop_assert!((&x * &inv).is_one());
    }

    #[test]
    fn conjugation_is_an_involutive_ring_map(x in scalar_expr(), y in scalar_expr()) {
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
    }

    #[test]
    fn phases_multiply_by_adding_exponents(p in exponent(), q in exponent()) {
        prop_assert_eq!(&Scalar::phase(&p) * &Scalar::phase(&q), Scalar::phase(&p.add(&q)));
        prop_assert!((&Scalar::phase(&p) * &Scalar::phase(&p.neg())).is_one());
    }

    #[test]
    fn d_squares_to_zero(seed in any::<u64>(), dim in 1usize..=3, degree in 0usize..=2) {
        let w = form(seed, dim, degree.min(dim));
        prop_assert!(w.d().d().is_zero());
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), p in 0usize..=1, q in 0usize..=1) {
        let (w, m) = (form(seed, 2, p), form(seed ^ 0x5eed, 2, q));
        let lhs = w.wedge(&m).unwrap().d();
        let sign = if p % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let rhs = w.d().wedge(&m).unwrap().add(&w.wedge(&m.d()).unwrap().scale(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), p in 0usize..=2, q in 0usize..=1) {
        let (w, m) = (form(seed, 3, p), form(seed.rotate_left(7), 3, q));
        let swapped = m.wedge(&w).unwrap();
        let expected = if (p * q) % 2 == 0 { swapped } else { swapped.neg() };
        prop_assert_eq!(w.wedge(&m).unwrap(), expected);
    }

    #[test]
    fn pullback_commutes_with_d_and_wedge(seed in any::<u64>(), p in 0usize..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_affine(&mut rng, 2, 2, &constants());
        let (w, m) = (form(seed, 2, p), form(!seed, 2, 1 - p));
        prop_assert_eq!(w.d().pullback(&h).unwrap(), w.pullback(&h).unwrap().d());
        prop_assert_eq!(
            w.wedge(&m).unwrap().pullback(&h).unwrap(),
            w.pullback(&h).unwrap().wedge(&m.pullback(&h).unwrap()).unwrap()
        );
    }

    #[test]
    fn forms_survive_print_and_parse(seed in any::<u64>(), dim in 1usize..=3, degree in 0usize..=2) {
        let c = chart(dim);
        let w = form(seed, dim, degree.min(dim));
        let text = print_form(&w, &c.vars);
        prop_assert_eq!(parse_form(&text, &c, &constants()).unwrap(), w);
    }
}
