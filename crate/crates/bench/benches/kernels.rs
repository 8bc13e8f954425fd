use criterion::{black_box, criterion_group, criterion_main, Criterion};

use csa_core::arrangement::build_csg;
use csa_core::factorization::inductive_factorization_search;
use csa_core::formality::lc_basis_certify;
use csa_core::freeness::inductive_freeness_search;
use csa_core::graphs::parse_family;
use csa_core::regions::chambers;
use csa_core::{Arrangement, Budget, IntersectionLattice};

fn csg(spec: &str) -> Arrangement {
    build_csg(&parse_family(spec).unwrap()).unwrap()
}

fn lattice(c: &mut Criterion) {
    for spec in ["C:5", "T:5,1", "K:5"] {
        let a = csg(spec);
        c.bench_function(&format!("lattice {spec}"), |b| b.iter(|| IntersectionLattice::new(black_box(&a)).unwrap()));
    }
}

fn regions(c: &mut Criterion) {
    let budget = Budget::default();
    for spec in ["P:4", "C:4"] {
        let a = csg(spec);
        c.bench_function(&format!("chambers {spec}"), |b| b.iter(|| chambers(black_box(&a), &budget).unwrap()));
    }
}

fn searches(c: &mut Criterion) {
    let budget = Budget::default();
    let a = csg("T:3,1");
    c.bench_function("inductive freeness T:3,1", |b| b.iter(|| inductive_freeness_search(black_box(&a), &budget).unwrap()));
    c.bench_function("inductive factorization T:3,1", |b| b.iter(|| inductive_factorization_search(black_box(&a), &budget).unwrap()));
    let k = csg("K:6");
    c.bench_function("lc basis K:6", |b| b.iter(|| lc_basis_certify(black_box(&k), &budget).unwrap()));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = lattice, regions, searches
}
criterion_main!(kernels);
