use conformal_detour::cone::random_slice_form;
use conformal_detour::operators::{build_l, SliceOperator};
use conformal_detour::sphere::sphere_audit_suite;
use conformal_detour::{Mono, MultiPoly, Rational, Signature};
use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly(seed: i64) -> MultiPoly {
    let terms = (0..12)
        .map(|i| {
            let e: Vec<u8> = (0..6).map(|v| ((i * 7 + v * 3 + seed) % 4) as u8).collect();
            (Mono::from_exps(&e), Rational::new(i - 5, 1 + i % 3))
        })
        .collect();
    MultiPoly::from_terms(terms)
}

fn arithmetic(c: &mut Criterion) {
    let (p, q) = (poly(1), poly(2));
    c.bench_function("poly/mul-12x12", |b| b.iter(|| black_box(&p).mul(black_box(&q))));
    let pq = p.mul(&q);
    c.bench_function("poly/div-exact", |b| b.iter(|| black_box(&pq).div_exact(black_box(&q))));
}

fn operators(c: &mut Criterion) {
    let sig = Signature::riemannian(4);
    c.bench_function("build/maxwell-n4", |b| b.iter(|| build_l(black_box(&sig), 1, 1).unwrap()));
    c.bench_function("build/gjms-n4", |b| b.iter(|| build_l(black_box(&sig), 0, 2).unwrap()));
    let gjms = build_l(&sig, 0, 2).unwrap();
    let u = random_slice_form(&sig, 0, 0, 5, &mut ChaCha8Rng::seed_from_u64(1));
    c.bench_function("apply/gjms-n4", |b| b.iter(|| gjms.apply(black_box(&u))));
    let dd = SliceOperator::codiff(&sig, 2, 0).compose(&SliceOperator::d(&sig, 1, 0));
    c.bench_function("compose/maxwell-squared", |b| b.iter(|| dd.compose(black_box(&dd))));
}

fn sphere(c: &mut Criterion) {
    c.bench_function("sphere-audit/4..12", |b| b.iter(|| sphere_audit_suite(black_box(&[4, 6, 8, 10, 12]))));
}

criterion_group!(benches, arithmetic, operators, sphere);
criterion_main!(benches);
