//! Moments of centred jointly Gaussian variables: pair partitions, the
//! Isserlis sum, and a seeded Monte Carlo cross-check.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::polarize::{recover, Method};
use crate::sampling::derive_seed;
use crate::scalar::{Field, Rational, Scalar};
use crate::symtensor::{FnDiagonal, MultiIndex};

/// Default upper bound on `n` for [`pair_partitions`].
pub const PAIRING_MAX_ORDER: usize = 12;

/// A perfect matching of `{1, ..., n}`: each pair sorted, pairs sorted by
/// their first element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition {
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    /// Canonicalises and validates that the pairs cover `1..=n` exactly once.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        let n = 2 * pairs.len();
        let mut seen = vec![false; n + 1];
        for &(a, b) in &pairs {
            for x in [a, b] {
                if x == 0 || x > n || seen[x] {
                    return Err(Error::Parse(format!("pairs {pairs:?} do not partition 1..={n}")));
                }
                seen[x] = true;
            }
        }
        Ok(PairPartition { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn order(&self) -> usize {
        2 * self.pairs.len()
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            write!(f, "{{{a},{b}}}")?;
        }
        Ok(())
    }
}

/// All perfect matchings of `{1, ..., n}` for `n <= 12`.
pub fn pair_partitions(n: usize) -> Result<Vec<PairPartition>> {
    pair_partitions_bounded(n, PAIRING_MAX_ORDER)
}

/// Pairs the smallest unpaired element with each remaining one in turn, so
/// matchings come out canonical and in lexicographic order.
pub fn pair_partitions_bounded(n: usize, bound: usize) -> Result<Vec<PairPartition>> {
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if n > bound {
        return Err(Error::OutOfBounds { what: "n", value: n, bound });
    }
    fn extend(rest: &[usize], current: &mut Vec<(usize, usize)>, out: &mut Vec<PairPartition>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(PairPartition { pairs: current.clone() });
            return;
        };
        for (k, &partner) in tail.iter().enumerate() {
            let remaining: Vec<usize> = tail.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
            current.push((first, partner));
            extend(&remaining, current, out);
            current.pop();
        }
    }
    let elements: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    extend(&elements, &mut Vec::with_capacity(n / 2), &mut out);
    Ok(out)
}

/// `(n-1)(n-3)...1` for even `n`, zero for odd `n`.
pub fn double_factorial_moment(n: usize) -> BigUint {
    if n % 2 == 1 {
        return BigUint::zero();
    }
    (1..n).step_by(2).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `E(x^n)` for a standard Gaussian `x`.
pub fn gaussian_moment_single(n: usize) -> Rational {
    let value = double_factorial_moment(n);
    if n % 2 == 0 && n <= PAIRING_MAX_ORDER {
        let count = pair_partitions(n).expect("even n within bound").len();
        assert_eq!(value, BigUint::from(count), "moment must count pair partitions");
    }
    Rational::from_biguint(&value)
}

/// Symmetric matrix of second moments `E(x_i x_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covariance<F> {
    rows: Vec<Vec<F>>,
}

impl<F: Field> Covariance<F> {
    pub fn new(rows: Vec<Vec<F>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::Parse("covariance needs at least one variable".into()));
        }
        if let Some(row) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: row.len() });
        }
        for i in 0..d {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Covariance { rows })
    }

    pub fn identity(dim: usize) -> Self {
        Covariance { rows: (0..dim).map(|i| (0..dim).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    fn check_indices(&self, idx: &[usize]) -> Result<()> {
        match idx.iter().find(|&&i| i >= self.dim()) {
            Some(&index) => Err(Error::IndexOutOfRange { index, dim: self.dim() }),
            None => Ok(()),
        }
    }

    /// `w^T C w`.
    pub fn quadratic_form(&self, w: &[F]) -> Result<F> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: w.len() });
        }
        let mut acc = F::zero();
        for (i, wi) in w.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                acc += &(wi.clone() * self.rows[i][j].clone() * wj.clone());
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> CovarianceJson {
        CovarianceJson {
            dim: self.dim(),
            rows: self.rows.iter().map(|r| r.iter().map(Field::to_scalar).collect()).collect(),
        }
    }

    pub fn from_json(json: &CovarianceJson) -> Result<Self> {
        if json.rows.len() != json.dim {
            return Err(Error::DimensionMismatch { expected: json.dim, found: json.rows.len() });
        }
        let rows = json
            .rows
            .iter()
            .map(|r| r.iter().map(F::from_scalar).collect::<Result<Vec<F>>>())
            .collect::<Result<Vec<_>>>()?;
        Covariance::new(rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceJson {
    pub dim: usize,
    pub rows: Vec<Vec<Scalar>>,
}

/// `E(x_{idx_1} ... x_{idx_n})`: zero for odd `n`, otherwise the sum over
/// pair partitions of the products of covariances.
pub fn isserlis<F: Field>(cov: &Covariance<F>, idx: &[usize]) -> Result<F> {
    cov.check_indices(idx)?;
    if idx.len() % 2 == 1 {
        return Ok(F::zero());
    }
    let mut total = F::zero();
    for p in pair_partitions(idx.len())? {
        let mut term = F::one();
        for &(a, b) in p.pairs() {
            term *= cov.get(idx[a - 1], idx[b - 1]);
        }
        total += &term;
    }
    Ok(total)
}

/// Computes `E(y^n)` for `y = sum_i w_i x_i` twice: as `(n-1)!! Var(y)^{n/2}`
/// and by expanding `y^n` multilinearly into Isserlis terms.
pub fn isserlis_diagonal_consistency<F: Field>(cov: &Covariance<F>, weights: &[F], n: usize) -> Result<bool> {
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    let var = cov.quadratic_form(weights)?;
    let closed = F::from_biguint(&double_factorial_moment(n)) * var.pow((n / 2) as u32);

    let mut expanded = F::zero();
    for m in MultiIndex::enumerate(n, cov.dim()) {
        let mut w = F::from_biguint(&m.multiplicity());
        for &i in m.indices() {
            w *= &weights[i];
        }
        if w.is_zero() {
            continue;
        }
        expanded += &(w * isserlis(cov, m.indices())?);
    }
    Ok(closed == expanded)
}

/// Recovers `E(x_{idx_1} ... x_{idx_n})` from the one-variable moments
/// `w -> E((w.x)^n) = (n-1)!! (w^T C w)^{n/2}` by polarization along the
/// basis vectors `e_{idx_k}`.
pub fn isserlis_via_polarization<F: Field>(cov: &Covariance<F>, idx: &[usize]) -> Result<F> {
    cov.check_indices(idx)?;
    let n = idx.len();
    if n == 0 {
        return Ok(F::one());
    }
    let d = cov.dim();
    let moment = F::from_biguint(&double_factorial_moment(n));
    let diag = FnDiagonal::new(n, d, |w: &[F]| {
        if n % 2 == 1 {
            return F::zero();
        }
        let var = cov.quadratic_form(w).expect("dimension checked by the engine");
        moment.clone() * var.pow((n / 2) as u32)
    });
    let xs: Vec<Vector<F>> = idx.iter().map(|&i| Vector::basis(d, i)).collect();
    recover(&diag, &xs, &Method::Subset)
}

/// Determinant by Gaussian elimination over the rationals.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / p.clone();
            for c in col..n {
                let delta = factor.clone() * a[col][c].clone();
                a[r][c] -= &delta;
            }
        }
    }
    det
}

/// Exact positive-semidefiniteness: every principal minor is non-negative.
pub fn is_positive_semidefinite(cov: &Covariance<Rational>) -> bool {
    let d = cov.dim();
    (1u64..(1 << d)).all(|mask| {
        let sel: Vec<usize> = (0..d).filter(|&i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<Rational>> =
            sel.iter().map(|&i| sel.iter().map(|&j| cov.get(i, j).clone()).collect()).collect();
        !determinant(&sub).is_negative()
    })
}

/// Lower-triangular `L` with `L L^T = C`, tolerating zero pivots from
/// singular (semidefinite) matrices.
fn cholesky_psd(c: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = c.len();
    let scale = c.iter().enumerate().map(|(i, r)| r[i].abs()).fold(0.0, f64::max).max(1.0);
    let mut l = vec![vec![0.0; d]; d];
    for j in 0..d {
        let s: f64 = (0..j).map(|k| l[j][k] * l[j][k]).sum();
        let pivot = c[j][j] - s;
        if pivot <= 1e-12 * scale {
            continue;
        }
        l[j][j] = pivot.sqrt();
        for i in j + 1..d {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            l[i][j] = (c[i][j] - s) / l[j][j];
        }
    }
    l
}

/// Sample mean of the index product and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn value(&self) -> Scalar {
        Scalar::float(self.mean)
    }

    /// `|exact - mean| / stderr`.
    pub fn z_score(&self, exact: f64) -> f64 {
        if self.stderr == 0.0 {
            if exact == self.mean {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (exact - self.mean).abs() / self.stderr
        }
    }
}

pub const MC_MIN_SAMPLES: usize = 1000;
const MC_CHUNK: usize = 1 << 15;

/// Estimates `E(x_{idx_1} ... x_{idx_n})` from `samples` draws of
/// `N(0, cov)`. Draws are split into fixed chunks with per-chunk seeds
/// derived from `seed`; partial sums are combined in chunk order, so the
/// result is deterministic for a given seed.
pub fn monte_carlo_estimate(cov: &Covariance<Rational>, idx: &[usize], samples: usize, seed: u64) -> Result<McEstimate> {
    cov.check_indices(idx)?;
    if samples < MC_MIN_SAMPLES {
        return Err(Error::OutOfBounds { what: "samples (minimum)", value: samples, bound: MC_MIN_SAMPLES });
    }
    if !is_positive_semidefinite(cov) {
        return Err(Error::NotPositiveSemidefinite);
    }
    let d = cov.dim();
    let c: Vec<Vec<f64>> =
        cov.rows().iter().map(|r| r.iter().map(|v| v.to_f64().expect("finite rational")).collect()).collect();
    let l = cholesky_psd(&c);

    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let count = MC_CHUNK.min(samples - k * MC_CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64));
            let mut z = vec![0.0; d];
            let mut x = vec![0.0; d];
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..count {
                for zi in z.iter_mut() {
                    *zi = StandardNormal.sample(&mut rng);
                }
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi = (0..=i).map(|k| l[i][k] * z[k]).sum();
                }
                let prod: f64 = idx.iter().map(|&i| x[i]).product();
                sum += prod;
                sum_sq += prod * prod;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials.iter().fold((0.0, 0.0), |(a, b), &(s, q)| (a + s, b + q));
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(McEstimate { mean, stderr: (var / n).sqrt(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use rand::RngCore;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn r(v: i64) -> Q {
        Q::from_i64(v)
    }

    /// Independent matching generator: all permutations of 1..=n, keep those
    /// whose consecutive pairs form a canonical matching.
    fn matchings_by_permutation(n: usize) -> Vec<Vec<(usize, usize)>> {
        fn perms(items: Vec<usize>) -> Vec<Vec<usize>> {
            if items.len() <= 1 {
                return vec![items];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.clone();
                let x = rest.remove(i);
                for mut p in perms(rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let mut out: Vec<Vec<(usize, usize)>> = perms((1..=n).collect())
            .into_iter()
            .map(|p| p.chunks(2).map(|c| (c[0], c[1])).collect::<Vec<_>>())
            .filter(|pairs: &Vec<(usize, usize)>| {
                pairs.iter().all(|&(a, b)| a < b) && pairs.windows(2).all(|w| w[0].0 < w[1].0)
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn small_pairings() {
        let p2 = pair_partitions(2).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].pairs(), &[(1, 2)]);
        let p4: Vec<String> = pair_partitions(4).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(p4, vec!["{1,2}{3,4}", "{1,3}{2,4}", "{1,4}{2,3}"]);
        assert_eq!(pair_partitions(3), Err(Error::OddOrder(3)));
        assert!(pair_partitions(14).is_err());
        assert_eq!(pair_partitions_bounded(14, 14).unwrap().len(), 135135);
    }

    #[test]
    fn pairing_counts_match_recursive_oracle() {
        // (n-1)!! by the recursion a(n) = (n-1) a(n-2).
        let mut expected = 1usize;
        for n in (2..=12).step_by(2) {
            expected *= n - 1;
            let all = pair_partitions(n).unwrap();
            assert_eq!(all.len(), expected);
            let mut dedup = all.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
        assert_eq!(pair_partitions(8).unwrap().len(), 105);
    }

    #[test]
    fn pairings_match_permutation_oracle() {
        for n in [2, 4, 6, 8] {
            let ours: Vec<Vec<(usize, usize)>> = pair_partitions(n).unwrap().into_iter().map(|p| p.pairs).collect();
            assert_eq!(ours, matchings_by_permutation(n));
        }
    }

    #[test]
    fn partition_validation() {
        assert!(PairPartition::new(vec![(2, 1), (3, 4)]).is_ok());
        assert!(PairPartition::new(vec![(1, 2), (2, 3)]).is_err());
        assert!(PairPartition::new(vec![(1, 5), (2, 3)]).is_err());
    }

    #[test]
    fn isserlis_examples() {
        let id4 = Covariance::<Q>::identity(4);
        assert_eq!(isserlis(&id4, &[0, 1, 2, 3]).unwrap(), r(0));
        let one = Covariance::<Q>::identity(1);
        assert_eq!(isserlis(&one, &[0, 0, 0, 0]).unwrap(), r(3));
        assert_eq!(isserlis(&one, &[0, 0, 0]).unwrap(), r(0));
        let c = Covariance::new(vec![vec![r(1), q(1, 2)], vec![q(1, 2), r(1)]]).unwrap();
        assert_eq!(isserlis(&c, &[0, 0, 1, 1]).unwrap(), q(3, 2));
        assert_eq!(isserlis(&c, &[0, 2]), Err(Error::IndexOutOfRange { index: 2, dim: 2 }));
    }

    #[test]
    fn covariance_validation() {
        assert_eq!(Covariance::new(vec![vec![r(1), r(2)], vec![r(3), r(1)]]), Err(Error::NotSymmetric));
        assert!(Covariance::new(vec![vec![r(1), r(2)]]).is_err());
        let json: CovarianceJson = serde_json::from_str(r#"{"dim":2,"rows":[["1","1/2"],["1/2","1"]]}"#).unwrap();
        let c = Covariance::<Q>::from_json(&json).unwrap();
        assert_eq!(c.get(0, 1), &q(1, 2));
        assert_eq!(c.to_json(), json);
    }

    #[test]
    fn single_variable_moments() {
        assert_eq!(gaussian_moment_single(4), r(3));
        assert_eq!(gaussian_moment_single(3), r(0));
        assert_eq!(gaussian_moment_single(6), r(15));
        assert_eq!(gaussian_moment_single(0), r(1));
        assert_eq!(gaussian_moment_single(20), r(654_729_075));
    }

    fn random_cov(rng: &mut impl RngCore, d: usize) -> Covariance<Q> {
        // B B^T is symmetric positive semidefinite.
        let b: Vec<Vec<Q>> = (0..d).map(|_| (0..d).map(|_| Q::sample(rng, 4)).collect()).collect();
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(Q::zero(), |acc, k| acc + b[i][k].clone() * b[j][k].clone()))
                    .collect()
            })
            .collect();
        Covariance::new(rows).unwrap()
    }

    /// Brute force over matchings produced by the permutation oracle.
    fn isserlis_oracle(cov: &Covariance<Q>, idx: &[usize]) -> Q {
        matchings_by_permutation(idx.len())
            .iter()
            .map(|m| m.iter().fold(Q::one(), |acc, &(a, b)| acc * cov.get(idx[a - 1], idx[b - 1]).clone()))
            .fold(Q::zero(), |a, b| a + b)
    }

    #[test]
    fn isserlis_matches_oracle_on_random_covariances() {
        let mut rng = sampling::rng(31);
        for _ in 0..20 {
            let d = 1 + (rng.next_u64() % 3) as usize;
            let cov = random_cov(&mut rng, d);
            for n in [4, 6] {
                let idx: Vec<usize> = (0..n).map(|_| (rng.next_u64() % d as u64) as usize).collect();
                assert_eq!(isserlis(&cov, &idx).unwrap(), isserlis_oracle(&cov, &idx));
            }
        }
    }

    #[test]
    fn isserlis_is_symmetric_and_vanishes_for_odd_orders() {
        let mut rng = sampling::rng(32);
        let cov = random_cov(&mut rng, 3);
        let idx = [0, 1, 1, 2, 2, 0];
        let base = isserlis(&cov, &idx).unwrap();
        let mut rotated = idx;
        for _ in 0..6 {
            rotated.rotate_left(1);
            assert_eq!(isserlis(&cov, &rotated).unwrap(), base);
        }
        for n in [1, 3, 5, 7, 9, 11] {
            let idx: Vec<usize> = (0..n).map(|k| k % 3).collect();
            assert!(isserlis(&cov, &idx).unwrap().is_zero());
        }
    }

    #[test]
    fn diagonal_consistency() {
        let id = Covariance::<Q>::identity(2);
        assert!(isserlis_diagonal_consistency(&id, &[r(1), r(0)], 4).unwrap());
        assert!(isserlis_diagonal_consistency(&id, &[r(1), r(1)], 2).unwrap());
        let mut rng = sampling::rng(33);
        for trial in 0..50 {
            let d = 1 + trial % 3;
            let cov = random_cov(&mut rng, d);
            let w: Vec<Q> = (0..d).map(|_| Q::sample(&mut rng, 5)).collect();
            let n = 2 * (1 + trial % 3);
            assert!(isserlis_diagonal_consistency(&cov, &w, n).unwrap());
        }
        // A wrong Isserlis value would break it: perturbing weights changes only one side.
        assert!(isserlis_diagonal_consistency(&id, &[r(1)], 4).is_err());
    }

    #[test]
    fn polarization_bridge() {
        let mut rng = sampling::rng(34);
        for trial in 0..20 {
            let d = 1 + trial % 3;
            let cov = random_cov(&mut rng, d);
            let n = 1 + (rng.next_u64() % 6) as usize;
            let idx: Vec<usize> = (0..n).map(|_| (rng.next_u64() % d as u64) as usize).collect();
            assert_eq!(isserlis_via_polarization(&cov, &idx).unwrap(), isserlis(&cov, &idx).unwrap());
        }
        let one = Covariance::<Q>::identity(1);
        assert_eq!(isserlis_via_polarization(&one, &[0; 6]).unwrap(), r(15));
    }

    #[test]
    fn psd_checks() {
        assert!(is_positive_semidefinite(&Covariance::identity(3)));
        let singular = Covariance::new(vec![vec![r(1), r(1)], vec![r(1), r(1)]]).unwrap();
        assert!(is_positive_semidefinite(&singular));
        // Leading minors are 0 and 0, yet the matrix is not PSD.
        let tricky = Covariance::new(vec![vec![r(0), r(0)], vec![r(0), r(-1)]]).unwrap();
        assert!(!is_positive_semidefinite(&tricky));
        let indefinite = Covariance::new(vec![vec![r(1), r(2)], vec![r(2), r(1)]]).unwrap();
        assert_eq!(monte_carlo_estimate(&indefinite, &[0, 1], 1000, 1), Err(Error::NotPositiveSemidefinite));
        assert_eq!(determinant(&[vec![r(2), r(1)], vec![r(1), r(3)]]), r(5));
    }

    #[test]
    fn monte_carlo_small_run() {
        let cov = Covariance::<Q>::identity(1);
        let est = monte_carlo_estimate(&cov, &[0, 0], 200_000, 7).unwrap();
        assert!(est.z_score(1.0) < 4.0, "{est:?}");
        let again = monte_carlo_estimate(&cov, &[0, 0], 200_000, 7).unwrap();
        assert_eq!(est, again);
        assert!(monte_carlo_estimate(&cov, &[0, 0], 999, 7).is_err());
        assert_eq!(est.value().as_f64(), Some(est.mean));
        let singular = Covariance::new(vec![vec![r(1), r(1)], vec![r(1), r(1)]]).unwrap();
        let est = monte_carlo_estimate(&singular, &[0, 1], 100_000, 3).unwrap();
        assert!(est.z_score(1.0) < 4.0, "{est:?}");
    }
}
