//! Benchmarks for the two execution modes.  The measured functions dispatch
//! through the same public API in both builds; the active mode is part of
//! each benchmark id, so
//!
//! ```text
//! cargo bench
//! cargo bench --no-default-features
//! ```
//!
//! produce directly comparable entries (`.../parallel` vs `.../sequential`).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use destab::matrix::identity;
use destab::optimize::{family_max, FamilyPair};
use destab::oracle::lattice_max;
use destab::{presets, Character};

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

/// Brute-force lattice scan over the radius-`r` Gram ball in rank 3.
fn bench_oracle_scan(c: &mut Criterion) {
    let gram = identity(3);
    let a = vec![Character::ints(&[1, -1, 0]), Character::ints(&[0, 1, -1])];
    let b = vec![Character::ints(&[2, 1, -3]), Character::ints(&[1, 2, -3])];
    let mut group = c.benchmark_group("oracle_scan");
    for radius in [4u64, 8] {
        group.bench_with_input(
            BenchmarkId::new(format!("radius_{radius}"), MODE),
            &radius,
            |bench, &radius| {
                bench.iter(|| {
                    lattice_max(&a, &b, &gram, radius, 10_000_000).expect("scan fits budget")
                });
            },
        );
    }
    group.finish();
}

/// Exact family solve over all six Weyl frames of the rank-two datum.
fn bench_family_solve(c: &mut Criterion) {
    let d = presets::a2_gl3();
    let group_w = d.weyl_group(100).expect("small Weyl group");
    let base_a = vec![Character::ints(&[1, -1, 0]), Character::ints(&[0, 1, -1])];
    let base_b: Vec<Character> = group_w
        .iter()
        .map(|w| w.act_char(&Character::ints(&[2, -1, 0])))
        .collect();
    let mut pairs = Vec::new();
    let mut idents = Vec::new();
    for (i, w) in group_w.iter().enumerate() {
        pairs.push(FamilyPair {
            index: i,
            a: base_a.iter().map(|x| w.act_char(x)).collect(),
            b: base_b.iter().map(|x| w.act_char(x)).collect(),
        });
        idents.push(Some(w.clone()));
    }
    let mut group = c.benchmark_group("family_solve");
    group.bench_function(BenchmarkId::new("six_frames", MODE), |bench| {
        bench.iter(|| family_max(&d, &pairs, &idents).expect("solvable family"));
    });
    group.finish();
}

criterion_group!(benches, bench_oracle_scan, bench_family_solve);
criterion_main!(benches);
