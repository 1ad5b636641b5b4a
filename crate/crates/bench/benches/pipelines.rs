use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use eulergraph::homology::smith_normal_form;
use eulergraph::orientations::{enumerate_acyclic_orientations, euler_class};
use eulergraph::taut::{find_taut_structures, lackenby_classes};
use eulergraph::{FanSide, IntMatrix, TautStructure, Triangulation};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::path::PathBuf;

fn load(name: &str) -> Triangulation {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    Triangulation::parse(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    let mut rng = StdRng::seed_from_u64(7);
    for n in [8usize, 16, 32] {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_i64_rows(&rows, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| smith_normal_form(black_box(m))));
    }
    group.finish();
}

fn homology(c: &mut Criterion) {
    let tri = load("closed5_threevertex.tri");
    c.bench_function("dual_homology/closed5_threevertex", |b| {
        b.iter(|| {
            let complex = black_box(&tri).dual_chain_complex();
            (0..=3).map(|k| complex.homology(k).unwrap().group()).collect::<Vec<_>>()
        })
    });
}

fn orientations(c: &mut Criterion) {
    let tri = load("closed5_threevertex.tri");
    c.bench_function("acyclic_enumeration/closed5_threevertex", |b| {
        b.iter(|| enumerate_acyclic_orientations(black_box(&tri), None).unwrap().count())
    });
    let first = enumerate_acyclic_orientations(&tri, Some(1)).unwrap().next().unwrap();
    c.bench_function("euler_class/closed5_threevertex", |b| b.iter(|| euler_class(black_box(&tri), &first)));
}

fn taut(c: &mut Criterion) {
    let tri = load("twocusp5.tri");
    c.bench_function("taut_search/twocusp5", |b| b.iter(|| find_taut_structures(black_box(&tri)).unwrap().count()));
    let fig8 = load("fig8.tri");
    let ts = TautStructure::parse("taut 01 23").unwrap();
    c.bench_function("lackenby/fig8", |b| {
        b.iter(|| lackenby_classes(black_box(&fig8), &ts, FanSide::Default).unwrap())
    });
}

criterion_group!(benches, snf, homology, orientations, taut);
criterion_main!(benches);
