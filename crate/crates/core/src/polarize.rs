//! Polarization engines: recovering `n! u(x_1, ..., x_n)` from the diagonal
//! `u~` of a symmetric n-linear map.
//!
//! Every engine returns the *unnormalised* value (`n! u`, or `2^n n! u` for
//! the signed form), which is meaningful over any field. [`recover`] divides
//! by the normalising constant and is where characteristic restrictions
//! surface.
//!
//! Subset conventions: bit `i` of a [`SubsetMask`] stands for `x_{i+1}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{check_dims, Vector};
use crate::poly::{indexed_vars, Polynomial};
use crate::scalar::{invert_factorial, Field};
use crate::symtensor::{Diagonal, SymMultiMap};

/// Largest `n` any subset-enumerating engine accepts.
pub const MAX_ENGINE_ORDER: usize = 30;

/// A subset `J` of `{1, ..., n}`; bit `i` set means `i + 1` is in `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Whether position `i` (0-based) belongs to the subset.
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn complement(self, n: usize) -> SubsetMask {
        SubsetMask(!self.0 & full_mask(n))
    }

    /// 0-based member positions in increasing order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.members().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Signs `(eps_1, ..., eps_n) in {0,1}^n` of the signed and offset sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    eps: Vec<u8>,
}

impl SignPattern {
    pub fn from_mask(mask: SubsetMask, n: usize) -> Self {
        SignPattern { eps: (0..n).map(|i| mask.contains(i) as u8).collect() }
    }

    pub fn eps(&self) -> &[u8] {
        &self.eps
    }

    pub fn weight(&self) -> usize {
        self.eps.iter().map(|&e| e as usize).sum()
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `(-1)^k` as a field element sign: true means negative.
fn odd(k: usize) -> bool {
    k % 2 == 1
}

/// Operation counts reported by the subset-sum engines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Evaluations of the diagonal.
    pub diag_evals: usize,
    /// Vector additions or subtractions performed to form the arguments.
    pub vector_ops: usize,
}

fn check_engine_inputs<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>]) -> Result<()> {
    if xs.len() != diag.order() {
        return Err(Error::ArityMismatch { expected: diag.order(), found: xs.len() });
    }
    if xs.len() > MAX_ENGINE_ORDER {
        return Err(Error::OutOfBounds { what: "n", value: xs.len(), bound: MAX_ENGINE_ORDER });
    }
    check_dims(xs, diag.dim())
}

fn add_into<F: Field>(acc: &mut [F], v: &Vector<F>) {
    for (a, b) in acc.iter_mut().zip(v.coords()) {
        *a += b;
    }
}

fn sub_from<F: Field>(acc: &mut [F], v: &Vector<F>) {
    for (a, b) in acc.iter_mut().zip(v.coords()) {
        *a -= b;
    }
}

/// `S_J`: the sum of the vectors selected by `mask`; zero for the empty mask.
pub fn subset_sum<F: Field>(xs: &[Vector<F>], mask: SubsetMask) -> Result<Vector<F>> {
    let Some(first) = xs.first() else {
        return Ok(Vector::new(Vec::new()));
    };
    check_dims(xs, first.dim())?;
    let mut acc = Vector::zeros(first.dim());
    for i in mask.members().take_while(|&i| i < xs.len()) {
        acc.add_assign(&xs[i])?;
    }
    Ok(acc)
}

/// `(Delta_{x_k} ... Delta_{x_1} u~)(point)` by direct recursion,
/// `(Delta_h v)(p) = v(p + h) - v(p)`. `point` is restored on return.
fn nested_differences<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>], point: &mut [F]) -> F {
    match xs.split_last() {
        None => diag.eval(point),
        Some((outer, inner)) => {
            add_into(point, outer);
            let shifted = nested_differences(diag, inner, point);
            sub_from(point, outer);
            let here = nested_differences(diag, inner, point);
            shifted - here
        }
    }
}

/// Applies `Delta_{x_k} ... Delta_{x_1}` (as many differences as there are
/// vectors in `xs`) to the diagonal and evaluates the result at `at`.
pub fn difference_at<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>], at: &Vector<F>) -> Result<F> {
    check_dims(xs, diag.dim())?;
    check_dims(std::slice::from_ref(at), diag.dim())?;
    let mut point = at.coords().to_vec();
    Ok(nested_differences(diag, xs, &mut point))
}

/// `Tr Delta_{x_n} ... Delta_{x_1} u~ = n! u(x_1, ..., x_n)`, valid over any field.
pub fn polarize_operator<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>]) -> Result<F> {
    check_engine_inputs(diag, xs)?;
    let mut point = vec![F::zero(); diag.dim()];
    Ok(nested_differences(diag, xs, &mut point))
}

/// Expansion of `prod_i (sigma_{x_i} - I)` as `sum_J (-1)^{n-|J|} sigma_{S_J}`:
/// every mask `J` in ascending order with its sign.
pub fn shift_expand(n: usize) -> Vec<(SubsetMask, i8)> {
    assert!(n < 64, "shift_expand supports n < 64");
    (0..=full_mask(n))
        .map(|m| {
            let mask = SubsetMask(m);
            (mask, if odd(n - mask.len()) { -1 } else { 1 })
        })
        .collect()
}

/// Masks of popcount `k` below `2^n`, ascending (Gosper's hack).
pub fn masks_of_size(n: usize, k: usize) -> impl Iterator<Item = SubsetMask> {
    let limit = full_mask(n);
    let mut next = if k == 0 {
        Some(0)
    } else if k > n {
        None
    } else {
        Some(full_mask(k))
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let succ = (((r ^ cur) >> 2) / c) | r;
            (r != 0 && succ <= limit).then_some(succ)
        };
        Some(SubsetMask(cur))
    })
}

/// Subset-sum form, terms grouped by `k = |J|` with masks ascending inside a
/// group. Each `S_J` is built from scratch (`|J|` additions). The empty
/// subset is skipped since `u~(0) = 0`.
pub fn polarize_subset_sum_counted<F: Field, D: Diagonal<F> + ?Sized>(
    diag: &D,
    xs: &[Vector<F>],
) -> Result<(F, EngineStats)> {
    check_engine_inputs(diag, xs)?;
    let n = xs.len();
    let mut stats = EngineStats::default();
    let mut total = F::zero();
    let mut point = vec![F::zero(); diag.dim()];
    for k in 1..=n {
        let mut group = F::zero();
        for mask in masks_of_size(n, k) {
            point.iter_mut().for_each(|c| *c = F::zero());
            for i in mask.members() {
                add_into(&mut point, &xs[i]);
                stats.vector_ops += 1;
            }
            group += &diag.eval(&point);
            stats.diag_evals += 1;
        }
        if odd(n - k) {
            total -= &group;
        } else {
            total += &group;
        }
    }
    Ok((total, stats))
}

pub fn polarize_subset_sum<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>]) -> Result<F> {
    polarize_subset_sum_counted(diag, xs).map(|(v, _)| v)
}

/// Binary-reflected Gray code over `n` bits: yields `(mask, flipped_bit)`
/// for steps `1..2^n`, starting from the empty mask.
pub fn gray_code(n: usize) -> impl Iterator<Item = (SubsetMask, usize)> {
    let steps = full_mask(n);
    let mut mask = 0u64;
    (1..=steps).map(move |step| {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        (SubsetMask(mask), bit)
    })
}

/// Same identity as [`polarize_subset_sum_counted`], visiting subsets in
/// Gray-code order so that each `S_J` is one vector update away from the
/// previous one: `2^n - 1` updates in total.
pub fn polarize_subset_sum_gray_counted<F: Field, D: Diagonal<F> + ?Sized>(
    diag: &D,
    xs: &[Vector<F>],
) -> Result<(F, EngineStats)> {
    check_engine_inputs(diag, xs)?;
    let n = xs.len();
    let mut stats = EngineStats::default();
    let mut total = F::zero();
    let mut point = vec![F::zero(); diag.dim()];
    for (mask, bit) in gray_code(n) {
        if mask.contains(bit) {
            add_into(&mut point, &xs[bit]);
        } else {
            sub_from(&mut point, &xs[bit]);
        }
        stats.vector_ops += 1;
        let value = diag.eval(&point);
        stats.diag_evals += 1;
        if odd(n - mask.len()) {
            total -= &value;
        } else {
            total += &value;
        }
    }
    Ok((total, stats))
}

pub fn polarize_subset_sum_gray<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>]) -> Result<F> {
    polarize_subset_sum_gray_counted(diag, xs).map(|(v, _)| v)
}

/// `sum_{k=0}^{n} (-1)^{n-k} sum_{|J|=k} u~(x_0 + S_J)`. The result does not
/// depend on `x_0`; with `x_0 = 0` this is the subset-sum form.
pub fn polarize_offset<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>], x0: &Vector<F>) -> Result<F> {
    check_engine_inputs(diag, xs)?;
    check_dims(std::slice::from_ref(x0), diag.dim())?;
    if x0.is_zero() {
        return polarize_subset_sum(diag, xs);
    }
    let n = xs.len();
    let mut total = F::zero();
    let mut point = vec![F::zero(); diag.dim()];
    for (mask, sign) in shift_expand(n) {
        point.clone_from_slice(x0.coords());
        for i in mask.members() {
            add_into(&mut point, &xs[i]);
        }
        let value = diag.eval(&point);
        if sign < 0 {
            total -= &value;
        } else {
            total += &value;
        }
    }
    Ok(total)
}

/// `sum_eps (-1)^{|eps|} u~((-1)^{eps_1} x_1 + ... + (-1)^{eps_n} x_n) = 2^n n! u`.
/// Needs characteristic other than 2.
pub fn polarize_signed<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>]) -> Result<F> {
    polarize_signed_counted(diag, xs).map(|(v, _)| v)
}

pub fn polarize_signed_counted<F: Field, D: Diagonal<F> + ?Sized>(
    diag: &D,
    xs: &[Vector<F>],
) -> Result<(F, EngineStats)> {
    if F::characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    check_engine_inputs(diag, xs)?;
    let n = xs.len();
    let mut stats = EngineStats::default();
    let mut total = F::zero();
    let mut point = vec![F::zero(); diag.dim()];
    for m in 0..=full_mask(n) {
        let pattern = SignPattern::from_mask(SubsetMask(m), n);
        point.iter_mut().for_each(|c| *c = F::zero());
        for (x, &e) in xs.iter().zip(pattern.eps()) {
            if e == 1 {
                sub_from(&mut point, x);
            } else {
                add_into(&mut point, x);
            }
            stats.vector_ops += 1;
        }
        let value = diag.eval(&point);
        stats.diag_evals += 1;
        if odd(pattern.weight()) {
            total -= &value;
        } else {
            total += &value;
        }
    }
    Ok((total, stats))
}

/// The signed value obtained instead from the offset form at
/// `x_0 = -(x_1 + ... + x_n)/2`, rescaled by `2^n` using homogeneity.
pub fn polarize_signed_via_offset<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>]) -> Result<F> {
    if F::characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    check_engine_inputs(diag, xs)?;
    let minus_half = -F::from_u64(2).inverse()?;
    let mut total = Vector::zeros(diag.dim());
    for x in xs {
        total.add_assign(x)?;
    }
    let x0 = total.scale(&minus_half);
    let offset = polarize_offset(diag, xs, &x0)?;
    Ok(offset * F::from_u64(2).pow(xs.len() as u32))
}

/// `n! u(x_1, ..., x_n)` as the coefficient of `t_1 t_2 ... t_n` in the
/// expansion of `u~(t_1 x_1 + ... + t_n x_n)`.
pub fn coefficient_extraction<F: Field>(u: &SymMultiMap<F>, xs: &[Vector<F>]) -> Result<F> {
    let expanded = expand_along(u, xs)?;
    let t = indexed_vars("t", xs.len());
    let mono: Vec<(&str, u32)> = t.iter().map(|v| (v.as_str(), 1)).collect();
    Ok(expanded.coefficient(&mono))
}

/// The same quantity via formal differentiation: `d^n / dt_1 ... dt_n`
/// applied to the expansion, then evaluated at `t = 0`.
pub fn mixed_partial_extraction<F: Field>(u: &SymMultiMap<F>, xs: &[Vector<F>]) -> Result<F> {
    let mut p = expand_along(u, xs)?;
    for v in indexed_vars("t", xs.len()) {
        p = p.partial_derivative(&v);
    }
    let zeros = vec![F::zero(); p.vars().len()];
    Ok(p.evaluate(&zeros))
}

/// `u~(t_1 x_1 + ... + t_n x_n)` as a polynomial in `t_1, ..., t_n`.
pub fn expand_along<F: Field>(u: &SymMultiMap<F>, xs: &[Vector<F>]) -> Result<Polynomial<F>> {
    if xs.len() != u.order() {
        return Err(Error::ArityMismatch { expected: u.order(), found: xs.len() });
    }
    check_dims(xs, u.dim())?;
    let t = indexed_vars("t", xs.len());
    let subs: Vec<Polynomial<F>> = (0..u.dim())
        .map(|j| {
            let coeffs: Vec<F> = xs.iter().map(|x| x[j].clone()).collect();
            Polynomial::linear(&t, &coeffs)
        })
        .collect();
    Ok(u.to_polynomial().compose(&subs))
}

/// True iff `Delta_{x_k} ... Delta_{x_1} u~` takes the same value at the
/// origin and at every probe.
pub fn constant_check<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>], probes: &[Vector<F>]) -> Result<bool> {
    check_dims(probes, diag.dim())?;
    let origin = difference_at(diag, xs, &Vector::zeros(diag.dim()))?;
    for p in probes {
        if difference_at(diag, xs, p)? != origin {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Engines usable with [`recover`], which only sees the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method<F> {
    Operator,
    Subset,
    Gray,
    Offset(Vector<F>),
    Signed,
}

/// `u(x_1, ..., x_n)` from the diagonal alone: the chosen engine's output
/// divided by `n!` (and by `2^n` for the signed engine).
pub fn recover<F: Field, D: Diagonal<F> + ?Sized>(diag: &D, xs: &[Vector<F>], method: &Method<F>) -> Result<F> {
    let n = xs.len();
    let inv = invert_factorial::<F>(n)?;
    let raw = match method {
        Method::Operator => polarize_operator(diag, xs)?,
        Method::Subset => polarize_subset_sum(diag, xs)?,
        Method::Gray => polarize_subset_sum_gray(diag, xs)?,
        Method::Offset(x0) => polarize_offset(diag, xs, x0)?,
        Method::Signed => {
            let signed = polarize_signed(diag, xs)?;
            let half_n = F::from_u64(2).inverse()?.pow(n as u32);
            signed * half_n
        }
    };
    Ok(raw * inv)
}
