//! Oracle verification of candidate torsion matrices, sequential against data-parallel.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sesqui::attacks::{gen_instance, GenSpec, IsogenyOracle, Variant};
use sesqui::linalg::{self, Mat2};
use sesqui::par;

/// Invertible matrices mod `m`, the full search space a candidate filter prunes.
fn invertible_matrices(m: u64, limit: usize) -> Vec<Mat2> {
    let m = m as i64;
    let mut out = Vec::new();
    for k in 0..m.pow(4) {
        let mt = [[k % m, (k / m) % m], [(k / m / m) % m, (k / m / m / m) % m]];
        if linalg::inverse(&mt, m as u64).is_some() {
            out.push(mt);
        }
        if out.len() == limit {
            break;
        }
    }
    out
}

fn oracle_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_batch");
    group.sample_size(10);
    for degree in [2u64, 6] {
        let spec = GenSpec { family: "gaussian(541)".parse().unwrap(), degree, variant: Variant::Norm, m: None };
        let inst = gen_instance(&spec, 1).unwrap().instance;
        let oracle = IsogenyOracle::new(inst.basis(), inst.curve2(), inst.degree, inst.m()).unwrap();
        let mats = invertible_matrices(inst.m(), 64);
        let check = |mt: &Mat2| {
            let o2 = &inst.orient2;
            oracle.check((&o2.point(linalg::column(mt, 0)), &o2.point(linalg::column(mt, 1)))).map(|v| v.accepted().is_some())
        };
        group.bench_with_input(BenchmarkId::new("sequential", degree), &mats, |b, mats| b.iter(|| par::map_seq(mats, check)));
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", degree), &mats, |b, mats| b.iter(|| par::map_par(mats, check)));
    }
    group.finish();
}

criterion_group!(benches, oracle_batch);
criterion_main!(benches);
