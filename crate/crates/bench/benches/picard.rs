use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quadpic::cechtower::tower_phi;
use quadpic::phi::phi_affine;
use quadpic::qform::pfister_real;
use quadpic::{ExtensionLattice, PicContext, QuadraticForm};
use quadpic_bench::real_forms;

fn lattice_construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("generic_splitting");
    for (dim, depth) in [(8, 3), (12, 3), (16, 4)] {
        let forms = real_forms(dim);
        g.bench_with_input(BenchmarkId::from_parameter(format!("dim{dim}-depth{depth}")), &forms, |b, f| {
            b.iter(|| ExtensionLattice::real_generic_splitting(black_box(f), depth).unwrap())
        });
    }
    g.finish();
}

fn twist_oracles(c: &mut Criterion) {
    let forms = real_forms(12);
    let l = ExtensionLattice::real_generic_splitting(&forms, 3).unwrap();
    let q = QuadraticForm::real(7, 4).unwrap();
    let exts: Vec<_> = l.extensions().cloned().collect();
    c.bench_function("phi_affine/all-extensions", |b| {
        b.iter(|| {
            exts.iter().for_each(|e| {
                black_box(phi_affine(black_box(&q), e, &l).unwrap());
            })
        })
    });
    c.bench_function("tower_phi/all-extensions", |b| {
        b.iter(|| {
            exts.iter().for_each(|e| {
                black_box(tower_phi(black_box(&q), e, &l).unwrap());
            })
        })
    });
}

fn determinants(c: &mut Criterion) {
    let mut forms = real_forms(10);
    forms.extend((1..=4).map(|r| pfister_real(r).unwrap()));
    let ctx = PicContext::new(ExtensionLattice::real_generic_splitting(&forms, 3).unwrap()).unwrap();
    let q = QuadraticForm::real(6, 4).unwrap().quadric();
    c.bench_function("det/fingerprint", |b| {
        b.iter(|| ctx.fingerprint(&ctx.det(black_box(&q), None).unwrap()).unwrap())
    });
    c.bench_function("det/normal_form", |b| {
        b.iter(|| ctx.normal_form(&ctx.det(black_box(&q), None).unwrap()).unwrap())
    });
    let x = ctx.det(&QuadraticForm::real(8, 0).unwrap().quadric(), None).unwrap();
    c.bench_function("basis_real/det(8,0)", |b| b.iter(|| ctx.basis_real(black_box(&x), 4).unwrap()));
}

fn independence(c: &mut Criterion) {
    let qs: Vec<_> = [1, 2, 4, 8].iter().map(|&m| QuadraticForm::real(0, m).unwrap()).collect();
    let ctx = PicContext::new(ExtensionLattice::real_generic_splitting(&qs, 2).unwrap()).unwrap();
    c.bench_function("independent/pfister-family", |b| b.iter(|| ctx.independent(black_box(&qs)).unwrap()));
}

fn validation(c: &mut Criterion) {
    let real = ExtensionLattice::real_generic_splitting(&real_forms(16), 4).unwrap();
    c.bench_function("validate/real-dim16-depth4", |b| b.iter(|| real.validate()));
    let doc = ExtensionLattice::real_generic_splitting(&real_forms(8), 3).unwrap().to_declared_document();
    c.bench_function("validate/declared-dim8-depth3", |b| {
        b.iter(|| ExtensionLattice::from_document(black_box(doc.clone())).unwrap().validate())
    });
}

criterion_group!(benches, lattice_construction, twist_oracles, determinants, independence, validation);
criterion_main!(benches);
