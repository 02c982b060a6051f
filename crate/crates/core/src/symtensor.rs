//! Symmetric n-linear maps `u: (K^d)^n -> K`, their diagonals, and the
//! correspondence with homogeneous polynomials of degree n.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_dims, Vector};
use crate::poly::{Monomial, Polynomial};
use rand::RngCore;

use crate::sampling::{self, unit_f64};
use crate::scalar::{Field, FieldDescriptor, Scalar};

/// Non-decreasing list of basis indices; one slot per argument of the map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Rejects unsorted input.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Parse(format!("multi-index {indices:?} is not sorted")));
        }
        Ok(MultiIndex(indices))
    }

    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        MultiIndex(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Occurrence count of each basis index below `dim`.
    pub fn counts(&self, dim: usize) -> Vec<u32> {
        let mut c = vec![0; dim];
        for &i in &self.0 {
            c[i] += 1;
        }
        c
    }

    /// Number of distinct orderings: `n! / (m_0! m_1! ...)`.
    pub fn multiplicity(&self) -> BigUint {
        let mut result = BigUint::one();
        let mut placed = 0u64;
        let mut k = 0;
        while k < self.0.len() {
            let mut run = 0u64;
            while k < self.0.len() && self.0[k] == self.0[k - run as usize] {
                run += 1;
                k += 1;
            }
            // Multiply by C(placed + run, run) one factor at a time; exact at every step.
            for j in 1..=run {
                result = result * BigUint::from(placed + j) / BigUint::from(j);
            }
            placed += run;
        }
        result
    }

    /// All multi-indices of length `order` over `0..dim`, in lexicographic order.
    pub fn enumerate(order: usize, dim: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        if dim == 0 {
            return out;
        }
        let mut cur = vec![0usize; order];
        loop {
            out.push(MultiIndex(cur.clone()));
            // Rightmost slot that can still grow.
            let Some(pos) = (0..order).rev().find(|&p| cur[p] + 1 < dim) else {
                return out;
            };
            let v = cur[pos] + 1;
            for slot in &mut cur[pos..] {
                *slot = v;
            }
        }
    }
}

/// Advances to the next lexicographic permutation; false after the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A symmetric n-linear scalar form on K^d, stored by its values on sorted
/// basis tuples (all `C(n+d-1, n)` of them, zeros included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMultiMap<F> {
    order: usize,
    dim: usize,
    index: Vec<MultiIndex>,
    coeffs: Vec<F>,
}

impl<F: Field> SymMultiMap<F> {
    pub fn zeros(order: usize, dim: usize) -> Self {
        assert!(order >= 1 && dim >= 1, "order and dimension must be positive");
        let index = MultiIndex::enumerate(order, dim);
        let coeffs = vec![F::zero(); index.len()];
        SymMultiMap { order, dim, index, coeffs }
    }

    pub fn from_entries(order: usize, dim: usize, entries: impl IntoIterator<Item = (MultiIndex, F)>) -> Result<Self> {
        let mut map = Self::zeros(order, dim);
        for (m, v) in entries {
            map.set(&m, v)?;
        }
        Ok(map)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slot(&self, m: &MultiIndex) -> Result<usize> {
        if m.len() != self.order {
            return Err(Error::ArityMismatch { expected: self.order, found: m.len() });
        }
        if let Some(&bad) = m.0.iter().find(|&&i| i >= self.dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim: self.dim });
        }
        Ok(self.index.binary_search(m).expect("every valid multi-index is stored"))
    }

    pub fn set(&mut self, m: &MultiIndex, value: F) -> Result<()> {
        let k = self.slot(m)?;
        self.coeffs[k] = value;
        Ok(())
    }

    /// `u(e_{i1}, ..., e_{in})` for the sorted tuple `m`.
    pub fn coefficient(&self, m: &MultiIndex) -> Result<&F> {
        Ok(&self.coeffs[self.slot(m)?])
    }

    /// `u(e_{i1}, ..., e_{in})` for a tuple in any order.
    pub fn value_on_basis(&self, tuple: &[usize]) -> Result<&F> {
        self.coefficient(&MultiIndex::from_unsorted(tuple.to_vec()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &F)> {
        self.index.iter().zip(&self.coeffs)
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&MultiIndex, &F)> {
        self.entries().filter(|(_, c)| !c.is_zero())
    }

    /// `u(x_1, ..., x_n)` from the definition: every index tuple contributes
    /// `u(e_{i1}, ..., e_{in}) x_1[i1] ... x_n[in]`. Tuples are grouped by
    /// their sorted form, so zero coefficients skip all their permutations.
    pub fn eval_direct(&self, args: &[Vector<F>]) -> Result<F> {
        if args.len() != self.order {
            return Err(Error::ArityMismatch { expected: self.order, found: args.len() });
        }
        check_dims(args, self.dim)?;
        let mut acc = F::zero();
        let mut perm = vec![0usize; self.order];
        for (m, c) in self.nonzero_entries() {
            perm.copy_from_slice(&m.0);
            let mut orbit = F::zero();
            loop {
                let mut prod = F::one();
                for (arg, &i) in args.iter().zip(&perm) {
                    prod *= &arg[i];
                }
                orbit += &prod;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            acc += &(orbit * c.clone());
        }
        Ok(acc)
    }

    pub fn diagonal(&self) -> TensorDiagonal<F> {
        let terms: Vec<(Vec<u32>, F)> = self
            .nonzero_entries()
            .map(|(m, c)| (m.counts(self.dim), c.clone() * F::from_biguint(&m.multiplicity())))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut max_exp = vec![0u32; self.dim];
        for (exps, _) in terms.iter() {
            for (m, &e) in max_exp.iter_mut().zip(exps) {
                *m = (*m).max(e);
            }
        }
        TensorDiagonal { order: self.order, dim: self.dim, terms, max_exp }
    }

    /// The diagonal as a homogeneous polynomial in `X0, ..., X{d-1}`.
    pub fn to_polynomial(&self) -> Polynomial<F> {
        let vars = coordinate_vars(self.dim);
        Polynomial::from_terms(
            &vars,
            self.nonzero_entries().map(|(m, c)| (m.counts(self.dim), c.clone() * F::from_biguint(&m.multiplicity()))),
        )
    }

    /// The unique symmetric map whose diagonal is `p`. `p` may only mention
    /// the variables `X0, ..., X{dim-1}` and must be homogeneous of degree `order`.
    pub fn from_polynomial(p: &Polynomial<F>, order: usize, dim: usize) -> Result<Self> {
        let vars = coordinate_vars(dim);
        if let Some(bad) = p.vars().iter().find(|v| !vars.contains(v)) {
            return Err(Error::Parse(format!("unexpected variable `{bad}` for dimension {dim}")));
        }
        if !p.is_homogeneous(order as u32) {
            return Err(Error::NotHomogeneous { degree: order });
        }
        let p = p.over_vars(&vars);
        let mut map = Self::zeros(order, dim);
        for (mono, c) in p.terms() {
            let m = multi_index_of(mono);
            let mult = F::from_biguint(&m.multiplicity());
            let inv = mult.inverse().map_err(|_| Error::CharacteristicDividesFactorial {
                n: order,
                characteristic: F::characteristic(),
            })?;
            map.set(&m, c.clone() * inv)?;
        }
        Ok(map)
    }

    pub fn to_json(&self) -> TensorJson {
        TensorJson {
            order: self.order,
            dim: self.dim,
            field: F::descriptor(),
            entries: self
                .nonzero_entries()
                .map(|(m, c)| EntryJson { index: m.0.clone(), value: c.to_scalar() })
                .collect(),
        }
    }

    pub fn from_json(json: &TensorJson) -> Result<Self> {
        if json.field != F::descriptor() {
            return Err(Error::FieldMismatch { left: F::descriptor().to_string(), right: json.field.to_string() });
        }
        if json.order == 0 || json.dim == 0 {
            return Err(Error::Parse("order and dim must be positive".into()));
        }
        let mut map = Self::zeros(json.order, json.dim);
        let mut seen = std::collections::HashSet::new();
        for e in &json.entries {
            let m = MultiIndex::new(e.index.clone())?;
            if !seen.insert(m.clone()) {
                return Err(Error::Parse(format!("duplicate index {:?}", e.index)));
            }
            map.set(&m, F::from_scalar(&e.value)?)?;
        }
        Ok(map)
    }
}

impl<F: Field> fmt::Display for SymMultiMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymMultiMap(order={}, dim={}) {{", self.order, self.dim)?;
        for (k, (m, c)) in self.nonzero_entries().enumerate() {
            write!(f, "{}{:?}: {c}", if k == 0 { " " } else { ", " }, m.0)?;
        }
        write!(f, " }}")
    }
}

fn multi_index_of(m: &Monomial) -> MultiIndex {
    let mut idx = Vec::new();
    for (j, &e) in m.exponents().iter().enumerate() {
        idx.extend(std::iter::repeat_n(j, e as usize));
    }
    MultiIndex(idx)
}

pub fn coordinate_vars(dim: usize) -> Vec<String> {
    (0..dim).map(|j| format!("X{j}")).collect()
}

/// Parameters for [`random_symmetric`].
#[derive(Debug, Clone, Copy)]
pub struct RandomConfig {
    /// Bound on numerators and denominators of rational coefficients.
    pub bound: u64,
    /// Probability that a coefficient is drawn rather than left at zero.
    pub density: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig { bound: 9, density: 1.0 }
    }
}

/// Deterministic pseudo-random symmetric map.
///
/// Walks the multi-indices in lexicographic order on one SplitMix64 stream
/// seeded with `seed`. For each index: when `density < 1`, one draw decides
/// whether the coefficient is kept; kept coefficients are then drawn with
/// [`Field::sample`].
pub fn random_symmetric<F: Field>(order: usize, dim: usize, seed: u64, cfg: RandomConfig) -> SymMultiMap<F> {
    let mut rng = sampling::rng(seed);
    let mut map = SymMultiMap::zeros(order, dim);
    for c in map.coeffs.iter_mut() {
        if cfg.density < 1.0 && unit_f64(&mut rng) >= cfg.density {
            continue;
        }
        *c = F::sample(&mut rng, cfg.bound);
    }
    map
}

/// A map with at most `terms` nonzero entries at random multi-indices, each
/// an integer in `[-bound, bound]`. Cheap to evaluate at any order, which
/// suits timing runs where the diagonal should not dominate.
pub fn random_sparse<F: Field>(order: usize, dim: usize, terms: usize, bound: u64, seed: u64) -> SymMultiMap<F> {
    let mut rng = sampling::rng(seed);
    let mut map = SymMultiMap::zeros(order, dim);
    let slots = map.coeffs.len() as u64;
    let span = 2 * bound + 1;
    for _ in 0..terms {
        let slot = (rng.next_u64() % slots) as usize;
        map.coeffs[slot] = F::from_i64((rng.next_u64() % span) as i64 - bound as i64);
    }
    map
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub index: Vec<usize>,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    pub order: usize,
    pub dim: usize,
    pub field: FieldDescriptor,
    pub entries: Vec<EntryJson>,
}

/// A degree-n function `x -> u~(x)` on K^d: the only access polarization
/// engines have to the map they recover.
pub trait Diagonal<F: Field>: Sync {
    fn order(&self) -> usize;
    fn dim(&self) -> usize;
    fn eval(&self, x: &[F]) -> F;
}

/// `u~(x) = u(x, ..., x)`, evaluated as the homogeneous polynomial
/// `sum_m multiplicity(m) u(e_m) x^m`.
#[derive(Debug, Clone)]
pub struct TensorDiagonal<F> {
    order: usize,
    dim: usize,
    terms: Vec<(Vec<u32>, F)>,
    // Largest exponent of each coordinate over all terms; bounds the power tables.
    max_exp: Vec<u32>,
}

impl<F: Field> TensorDiagonal<F> {
    pub fn eval_vector(&self, x: &Vector<F>) -> Result<F> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(self.eval(x.coords()))
    }
}

impl<F: Field> Diagonal<F> for TensorDiagonal<F> {
    fn order(&self) -> usize {
        self.order
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[F]) -> F {
        debug_assert_eq!(x.len(), self.dim);
        let mut powers: Vec<Vec<F>> = Vec::with_capacity(self.dim);
        for (xj, &top) in x.iter().zip(&self.max_exp) {
            let mut row = Vec::with_capacity(top as usize + 1);
            row.push(F::one());
            for k in 0..top as usize {
                let next = row[k].clone() * xj.clone();
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = F::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (row, &e) in powers.iter().zip(exps) {
                if e > 0 {
                    term *= &row[e as usize];
                }
            }
            acc += &term;
        }
        acc
    }
}

/// A diagonal given by a closure, for hand-written forms such as `x -> x^3`.
pub struct FnDiagonal<G> {
    order: usize,
    dim: usize,
    f: G,
}

impl<G> FnDiagonal<G> {
    pub fn new(order: usize, dim: usize, f: G) -> Self {
        FnDiagonal { order, dim, f }
    }
}

impl<F: Field, G: Fn(&[F]) -> F + Sync> Diagonal<F> for FnDiagonal<G> {
    fn order(&self) -> usize {
        self.order
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[F]) -> F {
        (self.f)(x)
    }
}

/// Counts evaluations of the wrapped diagonal.
pub struct CountingDiagonal<'a, D: ?Sized> {
    inner: &'a D,
    calls: AtomicUsize,
}

impl<'a, D: ?Sized> CountingDiagonal<'a, D> {
    pub fn new(inner: &'a D) -> Self {
        CountingDiagonal { inner, calls: AtomicUsize::new(0) }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

impl<'a, F: Field, D: Diagonal<F> + ?Sized> Diagonal<F> for CountingDiagonal<'a, D> {
    fn order(&self) -> usize {
        self.inner.order()
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, x: &[F]) -> F {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.eval(x)
    }
}
