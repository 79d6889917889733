use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diffeo_bench::{example, with_freq};
use diffeo_core::products::{cup_length, lift, Ring};
use diffeo_core::report::BUNDLED;
use diffeo_core::{parse_form, parse_presentation, print_presentation, ComplexKind, CochainComplex};
use std::hint::black_box;

fn circle_by_window(c: &mut Criterion) {
    let (p, _) = example("circle");
    let mut group = c.benchmark_group("circle cohomology");
    for n in [2, 4, 8] {
        let t = with_freq(&p, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| Ring::new(black_box(&p), t).unwrap())
        });
    }
    group.finish();
}

fn rings(c: &mut Criterion) {
    for name in ["torus", "torus2", "two_circles"] {
        let (p, t) = example(name);
        c.bench_function(&format!("ring {name}"), |b| b.iter(|| Ring::new(black_box(&p), &t).unwrap()));
    }
    let (p, t) = example("torus2");
    let ring = Ring::new(&p, &t).unwrap();
    c.bench_function("cup length torus2", |b| b.iter(|| cup_length(black_box(&ring)).unwrap()));
}

fn bott_tu(c: &mut Criterion) {
    let (p, t) = example("circle");
    let chart = p.chart("Uplus").unwrap().clone();
    let theta = parse_form("cos(2*pi*t)", &chart, &p.constants).unwrap();
    c.bench_function("lift circle", |b| {
        b.iter(|| lift(&p, &t, "Uplus", "Uminus", black_box(&theta)).unwrap())
    });
    c.bench_function("complex global circle", |b| {
        b.iter(|| CochainComplex::build(black_box(&p), ComplexKind::GlobalOmega, &t).unwrap())
    });
}

fn frontend(c: &mut Criterion) {
    c.bench_function("parse and print corpus", |b| {
        b.iter(|| {
            for (_, src) in BUNDLED {
                black_box(print_presentation(&parse_presentation(src).unwrap()));
            }
        })
    });
}

criterion_group!(benches, circle_by_window, rings, bott_tu, frontend);
criterion_main!(benches);
