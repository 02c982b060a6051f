//! Naive versus Gray-code subset enumeration.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::RngCore;
use serde::Serialize;

use polarization::polarize::{
    polarize_subset_sum, polarize_subset_sum_counted, polarize_subset_sum_gray, polarize_subset_sum_gray_counted,
};
use polarization::sampling::{self, derive_seed};
use polarization::symtensor::random_sparse;
use polarization::{Field, Rational, Vector};

use crate::CliError;

pub const MAX_BENCH_ORDER: usize = 20;
pub const MAX_REPETITIONS: usize = 100;
const TENSOR_TERMS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub naive_ns: Vec<u64>,
    pub gray_ns: Vec<u64>,
    pub naive_median_ns: u64,
    pub gray_median_ns: u64,
    pub equal: bool,
    pub naive_vector_ops: usize,
    pub gray_vector_ops: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub master_seed: u64,
    pub d: usize,
    pub repetitions: usize,
    pub rows: Vec<BenchRow>,
}

fn median(xs: &[u64]) -> u64 {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v[v.len() / 2]
}

fn nanos(d: Duration) -> u64 {
    d.as_nanos() as u64
}

/// A sparse integer tensor with small integer arguments: cheap diagonal
/// evaluations, so timings show the enumeration cost.
pub fn bench_instance(n: usize, d: usize, seed: u64) -> (polarization::SymMultiMap<Rational>, Vec<Vector<Rational>>) {
    let u = random_sparse::<Rational>(n, d, TENSOR_TERMS, 4, seed);
    let mut rng = sampling::rng(seed ^ 0x5EED);
    let xs = (0..n)
        .map(|_| Vector::new((0..d).map(|_| Rational::from_i64((rng.next_u64() % 7) as i64 - 3)).collect()))
        .collect();
    (u, xs)
}

pub fn bench(n_min: usize, n_max: usize, d: usize, repetitions: usize, seed: u64) -> Result<BenchReport, CliError> {
    if n_min == 0 || n_min > n_max || n_max > MAX_BENCH_ORDER {
        return Err(CliError::Usage(format!("bench needs 1 <= n-min <= n-max <= {MAX_BENCH_ORDER}")));
    }
    if d == 0 || d > crate::verify::MAX_VERIFY_DIM {
        return Err(CliError::Usage(format!("bench needs 1 <= d <= {}", crate::verify::MAX_VERIFY_DIM)));
    }
    if repetitions == 0 || repetitions > MAX_REPETITIONS {
        return Err(CliError::Usage(format!("bench needs 1 <= repetitions <= {MAX_REPETITIONS}")));
    }
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let (u, xs) = bench_instance(n, d, derive_seed(seed, n as u64));
        let diag = u.diagonal();
        let (naive, naive_stats) = polarize_subset_sum_counted(&diag, &xs)?;
        let (gray, gray_stats) = polarize_subset_sum_gray_counted(&diag, &xs)?;
        let mut equal = naive == gray;
        let (mut naive_ns, mut gray_ns) = (Vec::new(), Vec::new());
        for _ in 0..repetitions {
            let start = Instant::now();
            let a = polarize_subset_sum(&diag, &xs)?;
            naive_ns.push(nanos(start.elapsed()));
            let start = Instant::now();
            let b = polarize_subset_sum_gray(&diag, &xs)?;
            gray_ns.push(nanos(start.elapsed()));
            equal &= a == naive && b == naive;
        }
        rows.push(BenchRow {
            n,
            naive_median_ns: median(&naive_ns),
            gray_median_ns: median(&gray_ns),
            naive_ns,
            gray_ns,
            equal,
            naive_vector_ops: naive_stats.vector_ops,
            gray_vector_ops: gray_stats.vector_ops,
        });
    }
    Ok(BenchReport { master_seed: seed, d, repetitions, rows })
}

pub fn render_text(report: &BenchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "master seed: {}", report.master_seed);
    let _ = writeln!(out, "d = {}, repetitions = {} (median reported)", report.d, report.repetitions);
    let _ = writeln!(
        out,
        "{:>3} {:>14} {:>14} {:>6} {:>12} {:>10}",
        "n", "naive ms", "gray ms", "equal", "naive ops", "gray ops"
    );
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{:>3} {:>14.3} {:>14.3} {:>6} {:>12} {:>10}",
            r.n,
            r.naive_median_ns as f64 / 1e6,
            r.gray_median_ns as f64 / 1e6,
            if r.equal { "✓" } else { "✗" },
            r.naive_vector_ops,
            r.gray_vector_ops
        );
    }
    out
}

pub fn cmd_bench(n_min: usize, n_max: usize, d: usize, reps: usize, seed: u64, json: bool) -> Result<String, CliError> {
    let report = bench(n_min, n_max, d, reps, seed)?;
    Ok(if json { crate::to_json(&report) } else { render_text(&report) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_counts_and_agreement() {
        let report = bench(1, 10, 4, 3, 7).unwrap();
        for r in &report.rows {
            assert!(r.equal, "n = {}", r.n);
            assert_eq!(r.gray_vector_ops, (1 << r.n) - 1);
            // sum_k k C(n,k) = n 2^(n-1)
            assert_eq!(r.naive_vector_ops, r.n << (r.n - 1));
            assert_eq!(r.naive_ns.len(), 3);
            assert_eq!(r.naive_median_ns, median(&r.naive_ns));
        }
        assert_eq!(report.rows[9].naive_vector_ops, 5120);
        assert_eq!(report.rows[9].gray_vector_ops, 1023);
    }

    #[test]
    fn instances_are_deterministic() {
        assert_eq!(bench_instance(5, 3, 11).1, bench_instance(5, 3, 11).1);
        assert_eq!(bench_instance(5, 3, 11).0, bench_instance(5, 3, 11).0);
    }

    #[test]
    fn bounds() {
        assert!(bench(0, 3, 2, 1, 0).is_err());
        assert!(bench(4, 3, 2, 1, 0).is_err());
        assert!(bench(1, 21, 2, 1, 0).is_err());
        assert!(bench(1, 2, 2, 0, 0).is_err());
    }

    #[test]
    fn median_of_samples() {
        assert_eq!(median(&[5, 1, 3]), 3);
    }
}
