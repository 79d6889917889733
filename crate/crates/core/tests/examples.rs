use diffeo_core::products::{cup_absolute, cup_length, Ring};
use diffeo_core::report::BUNDLED;
use diffeo_core::verify::oracle_betti;
use diffeo_core::{parse_presentation, Cochain, Presentation, Scalar, Truncation};
use proptest::prelude::*;

fn bundled(name: &str) -> Presentation {
    let src = BUNDLED.iter().find(|(n, _)| *n == name).expect("bundled example").1;
    parse_presentation(src).unwrap()
}

fn ring(name: &str) -> Ring {
    let p = bundled(name);
    Ring::new(&p, &Truncation::default_for(&p)).unwrap()
}

#[test]
fn betti_numbers_of_the_corpus() {
    let expected: [(&str, &[usize]); 5] = [
        ("circle", &[1, 1]),
        ("torus2", &[1, 2, 1]),
        ("line", &[1, 0]),
        ("line_two_charts", &[1, 0]),
        ("two_circles", &[2, 2]),
    ];
    for (name, betti) in expected {
        assert_eq!(ring(name).betti(), betti, "{name}");
    }
}

#[test]
fn engine_agrees_with_the_oracle() {
    let mut compared = 0;
    for (name, src) in BUNDLED {
        let p = parse_presentation(src).unwrap();
        let t = Truncation::default_for(&p);
        if let Some(oracle) = oracle_betti(&p, &t) {
            let engine = Ring::new(&p, &t).unwrap().betti();
            assert_eq!(engine, oracle, "{name}");
            compared += 1;
        }
    }
    assert!(compared >= 4, "oracle covered only {compared} examples");
}

#[test]
fn euler_characteristic_matches_betti() {
    for (name, _) in BUNDLED {
        let r = ring(name);
        let alternating: i64 = r
            .betti()
            .iter()
            .enumerate()
            .map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        assert_eq!(r.complex.euler_characteristic(), alternating, "{name}");
    }
}

#[test]
fn torus2_ring_structure() {
    let r = ring("torus2");
    let (x, y) = (r.rep(1, 0), r.rep(1, 1));
    assert!(cup_absolute(&r, &x, &x).unwrap().is_exact());
    assert!(cup_absolute(&r, &y, &y).unwrap().is_exact());
    let xy = cup_absolute(&r, &x, &y).unwrap();
    let yx = cup_absolute(&r, &y, &x).unwrap();
    assert!(!xy.is_exact());
    assert_eq!(xy.coords, yx.coords.iter().map(|c| -c.clone()).collect::<Vec<_>>());
    assert_eq!(cup_length(&r).unwrap().length, 2);
}

fn coords(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(a, b)| Scalar::ratio(a, b)), n)
}

/// A cochain of degree `r` from small integer weights on the basis of every block.
fn cochain(r: &Ring, degree: usize, weights: &[i64]) -> Cochain {
    let c = &r.complex;
    let mut z = c.zero_cochain(degree);
    let mut w = weights.iter().cycle();
    for (class, block) in c.blocks().iter().enumerate() {
        for j in 0..block.dim(degree) {
            let s = Scalar::from_int(*w.next().unwrap());
            z = z.add(&c.cochain(degree, &c.unit(degree, class, j)).scale(&s));
        }
    }
    z
}

thread_local! {
    static TORUS2: Ring = ring("torus2");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classes_ignore_coboundaries(a in coords(2), w in prop::collection::vec(-3i64..=3, 1..8)) {
        let r = TORUS2.with(Ring::clone);
        let z = r.combination(1, &a);
        let shifted = z.add(&r.complex.d_cochain(&cochain(&r, 0, &w)).unwrap());
        prop_assert_eq!(r.classify(&shifted).unwrap().coords, a);
    }

    #[test]
    fn cup_is_bilinear_on_classes(a in coords(2), b in coords(2), c in coords(2)) {
        let r = TORUS2.with(Ring::clone);
        let (x, y, z) = (r.combination(1, &a), r.combination(1, &b), r.combination(1, &c));
        let sum = cup_absolute(&r, &x.add(&y), &z).unwrap().coords;
        let parts: Vec<Scalar> = cup_absolute(&r, &x, &z)
            .unwrap()
            .coords
            .iter()
            .zip(cup_absolute(&r, &y, &z).unwrap().coords.iter())
            .map(|(p, q)| p + q)
            .collect();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn cup_of_degree_one_classes_is_a_determinant(a in coords(2), b in coords(2)) {
        let r = TORUS2.with(Ring::clone);
        let xy = cup_absolute(&r, &r.combination(1, &a), &r.combination(1, &b)).unwrap().coords;
        let unit = cup_absolute(&r, &r.rep(1, 0), &r.rep(1, 1)).unwrap().coords;
        let det = &(&a[0] * &b[1]) - &(&a[1] * &b[0]);
        prop_assert_eq!(xy, unit.iter().map(|u| &det * u).collect::<Vec<_>>());
    }
}
