use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use k3scroll::classify::{fixture_dir, regenerate_tables};
use k3scroll::clifford::clifford_index;
use k3scroll::cohomology::K3Config;
use k3scroll::lattice::{DivisorClass, Lattice};
use k3scroll::par;
use k3scroll::resolution::bvector_case;

fn sweep() -> usize {
    let mut pairs = Vec::new();
    for g in 3..=10i64 {
        for d in 2..=(g - 1) / 2 + 2 {
            pairs.push((g, d));
        }
    }
    par::map(&pairs, |&(g, d)| {
        let lat = Lattice::from_gram(vec![vec![2 * g - 2, d], vec![d, 0]]).unwrap();
        let cfg = K3Config::new(lat, DivisorClass(vec![1, 0]), Vec::new()).unwrap();
        clifford_index(&cfg).unwrap().c
    })
    .len()
}

fn modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("modes");
    group.sample_size(10);
    for (name, seq) in [("parallel", false), ("sequential", true)] {
        group.bench_with_input(BenchmarkId::new("existence_sweep", name), &seq, |b, &seq| {
            par::set_sequential(seq);
            b.iter(|| black_box(sweep()));
        });
        group.bench_with_input(BenchmarkId::new("bvectors_cg3p", name), &seq, |b, &seq| {
            par::set_sequential(seq);
            let case = bvector_case("cg3p").unwrap();
            b.iter(|| black_box(case.run(None).unwrap().vectors.len()));
        });
        group.bench_with_input(BenchmarkId::new("classify_g5_g7", name), &seq, |b, &seq| {
            par::set_sequential(seq);
            let dir = fixture_dir();
            b.iter(|| black_box(regenerate_tables(5..=7, &dir).unwrap().ok()));
        });
    }
    par::set_sequential(false);
    group.finish();
}

criterion_group!(benches, modes);
criterion_main!(benches);
