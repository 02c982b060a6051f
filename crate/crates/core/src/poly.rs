//! Sparse multivariate polynomials over a [`Field`] in named, commuting
//! indeterminates.
//!
//! Terms are kept in graded lexicographic order (total degree first, then
//! exponents compared variable by variable in declaration order). Zero
//! coefficients are never stored.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::{factorial, Field, Rational, Scalar};

/// Exponent vector aligned with the owning polynomial's variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct Polynomial<F> {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        Polynomial { vars: vars.iter().map(|v| v.as_ref().to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: F) -> Self {
        let mut p = Self::zero(vars);
        p.insert(Monomial(vec![0; p.vars.len()]), c);
        p
    }

    /// The indeterminate `name` as a polynomial in the single variable `name`.
    pub fn var(name: &str) -> Self {
        let mut p = Self::zero(&[name]);
        p.insert(Monomial(vec![1]), F::one());
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms<S: AsRef<str>>(vars: &[S], terms: impl IntoIterator<Item = (Vec<u32>, F)>) -> Self {
        let mut p = Self::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), p.vars.len(), "exponent vector does not match variables");
            p.accumulate(Monomial(exps), c);
        }
        p
    }

    /// Linear form `sum_i coeffs[i] * vars[i]`.
    pub fn linear<S: AsRef<str>>(vars: &[S], coeffs: &[F]) -> Self {
        let n = vars.len();
        Self::from_terms(
            vars,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        )
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter().rev()
    }

    fn insert(&mut self, m: Monomial, c: F) {
        if !c.is_zero() {
            self.terms.insert(m, c);
        }
    }

    fn accumulate(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Re-expresses over `vars`, which must contain every current variable.
    pub fn over_vars(&self, vars: &[String]) -> Self {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("target variables must be a superset"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; vars.len()];
                for (i, &x) in m.0.iter().enumerate() {
                    e[map[i]] = x;
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Polynomial { vars: vars.to_vec(), terms }
    }

    fn union_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = self.union_vars(other);
        (self.over_vars(&vars), other.over_vars(&vars))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (m, c) in b.terms {
            a.accumulate(m, c);
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut acc: HashMap<Monomial, F> = HashMap::with_capacity(a.len() * b.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let prod = ca.clone() * cb.clone();
                acc.entry(ma.product(mb)).and_modify(|e| *e += &prod).or_insert(prod);
            }
        }
        let mut out = Self::zero(&a.vars);
        for (m, c) in acc {
            out.insert(m, c);
        }
        out
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = Self::constant(&self.vars, F::one());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Largest total degree of a stored term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// True when every term has total degree `degree` (the zero polynomial qualifies).
    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    /// Coefficient of the monomial given as `(variable, exponent)` pairs.
    /// Unlisted variables have exponent zero; unknown variables with a
    /// positive exponent give zero.
    pub fn coefficient(&self, monomial: &[(&str, u32)]) -> F {
        let mut e = vec![0; self.vars.len()];
        for &(name, exp) in monomial {
            match self.var_index(name) {
                Some(i) => e[i] += exp,
                None if exp > 0 => return F::zero(),
                None => {}
            }
        }
        self.coefficient_of(&Monomial(e))
    }

    pub fn coefficient_of(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Formal partial derivative. Differentiating by an absent variable gives zero.
    pub fn partial_derivative(&self, var: &str) -> Self {
        let mut out = Self::zero(&self.vars);
        let Some(i) = self.var_index(var) else {
            return out;
        };
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[i] -= 1;
            out.accumulate(Monomial(d), c.clone() * F::from_u64(e as u64));
        }
        out
    }

    /// Evaluates with `values[i]` substituted for `vars()[i]`.
    pub fn evaluate(&self, values: &[F]) -> F {
        assert_eq!(values.len(), self.vars.len(), "one value per variable");
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in values.iter().zip(&m.0) {
                if e > 0 {
                    term *= &x.pow(e);
                }
            }
            acc += &term;
        }
        acc
    }

    /// Substitutes `subs[i]` for `vars()[i]` and expands.
    pub fn compose(&self, subs: &[Polynomial<F>]) -> Polynomial<F> {
        assert_eq!(subs.len(), self.vars.len(), "one substitution per variable");
        let Some(first) = subs.first() else {
            return self.clone();
        };
        let vars = subs[1..].iter().fold(first.vars.clone(), |acc, s| {
            let mut acc = acc;
            for v in &s.vars {
                if !acc.contains(v) {
                    acc.push(v.clone());
                }
            }
            acc
        });
        let subs: Vec<_> = subs.iter().map(|s| s.over_vars(&vars)).collect();
        // Power tables, filled lazily up to the largest exponent in use.
        let mut powers: Vec<Vec<Polynomial<F>>> =
            subs.iter().map(|_| vec![Polynomial::constant(&vars, F::one())]).collect();
        let mut out = Polynomial::zero(&vars);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// The single variable in which the polynomial actually depends, if any.
    /// `Err(())` when more than one variable occurs.
    pub fn sole_variable(&self) -> Result<Option<&str>, ()> {
        let mut found = None;
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    match found {
                        None => found = Some(i),
                        Some(j) if j != i => return Err(()),
                        _ => {}
                    }
                }
            }
        }
        Ok(found.map(|i| self.vars[i].as_str()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson(
            self.terms()
                .map(|(m, c)| TermJson {
                    exponents: self
                        .vars
                        .iter()
                        .zip(&m.0)
                        .filter(|(_, &e)| e > 0)
                        .map(|(v, &e)| (v.clone(), e))
                        .collect(),
                    coeff: c.to_scalar(),
                })
                .collect(),
        )
    }
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        Polynomial::add(self, rhs)
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        Polynomial::sub(self, rhs)
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        Polynomial::mul(self, rhs)
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial::neg(self)
    }
}

/// Canonical text, e.g. `a1^2 - a2^2` or `2*a1*a2`.
impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = self
                .vars
                .iter()
                .zip(&m.0)
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{magnitude}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: BTreeMap<String, u32>,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolynomialJson(pub Vec<TermJson>);

/// For a univariate `p` whose derivative is a constant `c`, checks
/// `c = p(1) - p(0)`; polynomials with non-constant derivative pass
/// vacuously. Polynomials in more than one variable are outside the
/// statement and return `false`.
pub fn lemma_check<F: Field>(p: &Polynomial<F>) -> bool {
    let var = match p.sole_variable() {
        Ok(Some(v)) => v.to_string(),
        // Constant: p' = 0 = p(1) - p(0).
        Ok(None) => return true,
        Err(()) => return false,
    };
    let derivative = p.partial_derivative(&var);
    if !derivative.is_constant() {
        return true;
    }
    let c = derivative.coefficient(&[]);
    let at = |t: F| {
        let values: Vec<F> = p.vars().iter().map(|v| if *v == var { t.clone() } else { F::zero() }).collect();
        p.evaluate(&values)
    };
    at(F::one()) - at(F::zero()) == c
}

/// Variable names `prefix1, ..., prefixn`.
pub fn indexed_vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Expands `sum_{J} (-1)^{n-|J|} (sum_{i in J} a_i)^n` over all subsets `J`
/// of `{1..n}` (the empty subset contributes `0^n = 0`).
pub fn nelson_expansion(n: usize) -> Polynomial<Rational> {
    let vars = indexed_vars("a", n);
    let mut total = Polynomial::zero(&vars);
    for mask in 0u64..(1 << n) {
        let coeffs: Vec<Rational> =
            (0..n).map(|i| if mask >> i & 1 == 1 { Rational::from_i64(1) } else { Rational::from_i64(0) }).collect();
        let sum = Polynomial::linear(&vars, &coeffs);
        let mut term = sum.pow(n as u32);
        if (n - mask.count_ones() as usize) % 2 == 1 {
            term = term.neg();
        }
        total = total.add(&term);
    }
    total
}

/// Upper bound on `n` for [`nelson_identity_check`].
pub const NELSON_MAX_ORDER: usize = 8;

/// Checks `sum_J (-1)^{n-|J|} (sum_{i in J} a_i)^n = n! a_1 a_2 ... a_n` in
/// the polynomial ring over the rationals. `n` must lie in `1..=bound`.
pub fn nelson_identity_check_bounded(n: usize, bound: usize) -> bool {
    assert!(n >= 1 && n <= bound && n < 64, "order {n} outside 1..={bound}");
    let vars = indexed_vars("a", n);
    let product = Polynomial::from_terms(&vars, [(vec![1; n], factorial::<Rational>(n))]);
    nelson_expansion(n) == product
}

pub fn nelson_identity_check(n: usize) -> bool {
    nelson_identity_check_bounded(n, NELSON_MAX_ORDER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Gf;
    use num_traits::Zero;
    use rand::{RngCore, SeedableRng};
    use rand_xoshiro::SplitMix64;

    type P = Polynomial<Rational>;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn var(name: &str) -> P {
        P::var(name)
    }

    #[test]
    fn difference_of_squares() {
        let (a1, a2) = (var("a1"), var("a2"));
        let prod = &(&a1 + &a2) * &(&a1 - &a2);
        assert_eq!(prod.to_string(), "a1^2 - a2^2");
        let expected = &a1.pow(2) - &a2.pow(2);
        assert_eq!(prod, expected);
    }

    #[test]
    fn square_of_sum() {
        let (t1, t2) = (var("t1"), var("t2"));
        let sq = (&t1 + &t2).pow(2);
        assert_eq!(sq.to_string(), "t1^2 + 2*t1*t2 + t2^2");
        assert_eq!(sq.coefficient(&[("t1", 1), ("t2", 1)]), r(2));
        assert_eq!(sq.coefficient(&[("t1", 2)]), r(1));
        assert_eq!(sq.coefficient(&[("t3", 1)]), r(0));
    }

    #[test]
    fn multinomial_coefficient_of_cube() {
        let vars = indexed_vars("t", 3);
        let s = P::linear(&vars, &[r(1), r(1), r(1)]);
        let cube = s.pow(3);
        // Multinomial oracle: 3!/(1!1!1!) = 6.
        let oracle: i64 = (1..=3).product::<i64>();
        assert_eq!(cube.coefficient(&[("t1", 1), ("t2", 1), ("t3", 1)]), r(oracle));
        assert_eq!(cube.coefficient(&[("t1", 2), ("t3", 1)]), r(3));
    }

    #[test]
    fn derivative_examples() {
        // a0 + a1 t + a2 t^2 with a = (4, 5, 6)
        let p = P::from_terms(&["t"], [(vec![0], r(4)), (vec![1], r(5)), (vec![2], r(6))]);
        let d = p.partial_derivative("t");
        assert_eq!(d, P::from_terms(&["t"], [(vec![0], r(5)), (vec![1], r(12))]));
        assert!(var("t2").pow(3).partial_derivative("t1").is_zero());
    }

    #[test]
    fn derivative_in_characteristic_p() {
        // d/dt t^7 = 7 t^6 = 0 over GF(7)
        let p = Polynomial::<Gf<7>>::var("t").pow(7);
        assert!(p.partial_derivative("t").is_zero());
    }

    #[test]
    fn lemma_examples() {
        assert!(lemma_check(&P::from_terms(&["t"], [(vec![0], r(3)), (vec![1], r(5))])));
        assert!(lemma_check(&var("t").pow(2)));
        assert!(lemma_check(&P::constant(&["t"], r(9))));
        assert!(!lemma_check(&(&var("s") + &var("t"))));
    }

    #[test]
    fn nelson_small_orders() {
        assert!(nelson_identity_check(1));
        assert!(nelson_identity_check(2));
        assert_eq!(nelson_expansion(2).to_string(), "2*a1*a2");
        assert!(nelson_identity_check(3));
        // Independent expansion oracle for n = 3, term by term.
        let a: Vec<P> = indexed_vars("a", 3).iter().map(|v| var(v)).collect();
        let s123 = (&(&a[0] + &a[1]) + &a[2]).pow(3);
        let pairs = [(&a[0] + &a[1]).pow(3), (&a[0] + &a[2]).pow(3), (&a[1] + &a[2]).pow(3)];
        let singles = [a[0].pow(3), a[1].pow(3), a[2].pow(3)];
        let mut total = s123;
        for p in &pairs {
            total = &total - p;
        }
        for s in &singles {
            total = &total + s;
        }
        assert_eq!(total.to_string(), "6*a1*a2*a3");
    }

    #[test]
    fn composition_substitutes_and_expands() {
        // p(X) = X^2 with X = t1 + 2 t2
        let p = var("X").pow(2);
        let sub = P::linear(&["t1", "t2"], &[r(1), r(2)]);
        let out = p.compose(&[sub]);
        assert_eq!(out.to_string(), "t1^2 + 4*t1*t2 + 4*t2^2");
    }

    #[test]
    fn display_and_json() {
        let p = P::from_terms(&["a1", "a2"], [(vec![1, 1], Rational::new(1.into(), 2.into())), (vec![0, 0], r(-3))]);
        assert_eq!(p.to_string(), "1/2*a1*a2 - 3");
        assert_eq!(P::zero(&["x"]).to_string(), "0");
        assert_eq!((-&var("x")).to_string(), "-x");
        let json = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(json, r#"[{"exponents":{"a1":1,"a2":1},"coeff":"1/2"},{"exponents":{},"coeff":"-3"}]"#);
    }

    #[test]
    fn equality_ignores_variable_order() {
        let a = &var("x") + &var("y");
        let b = &var("y") + &var("x");
        assert_eq!(a, b);
        assert_ne!(a, var("x"));
    }

    fn random_poly(rng: &mut SplitMix64, vars: &[String], degree: u32, terms: usize) -> P {
        P::from_terms(
            vars,
            (0..terms).map(|_| {
                let mut e = vec![0; vars.len()];
                let mut left = degree;
                for slot in e.iter_mut() {
                    let take = (rng.next_u64() % (left as u64 + 1)) as u32;
                    *slot = take;
                    left -= take;
                }
                (e, Rational::sample(rng, 9))
            }),
        )
    }

    /// Naive product: list every pair of terms, then gather by exponent.
    fn naive_product(a: &P, b: &P) -> Vec<(Vec<u32>, Rational)> {
        let mut out: Vec<(Vec<u32>, Rational)> = Vec::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let e: Vec<u32> = ma.exponents().iter().zip(mb.exponents()).map(|(x, y)| x + y).collect();
                match out.iter_mut().find(|(k, _)| *k == e) {
                    Some((_, c)) => *c += &(ca.clone() * cb.clone()),
                    None => out.push((e, ca.clone() * cb.clone())),
                }
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        out.sort_by(|x, y| Monomial(y.0.clone()).cmp(&Monomial(x.0.clone())));
        out
    }

    #[test]
    fn products_match_convolution_oracle() {
        let mut rng = SplitMix64::seed_from_u64(3);
        let vars = indexed_vars("x", 3);
        for _ in 0..50 {
            let a = random_poly(&mut rng, &vars, 3, 5);
            let b = random_poly(&mut rng, &vars, 3, 5);
            let prod = a.mul(&b);
            let got: Vec<(Vec<u32>, Rational)> =
                prod.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect();
            assert_eq!(got, naive_product(&a, &b));
        }
    }

    #[test]
    fn mixed_partial_of_cubic_form_is_multilinear_coefficient() {
        let mut rng = SplitMix64::seed_from_u64(4);
        let vars = indexed_vars("t", 3);
        for _ in 0..30 {
            // Homogeneous cubic: random combination of all degree-3 monomials.
            let mut terms = Vec::new();
            for a in 0..=3u32 {
                for b in 0..=(3 - a) {
                    terms.push((vec![a, b, 3 - a - b], Rational::sample(&mut rng, 9)));
                }
            }
            let p = P::from_terms(&vars, terms);
            let d = p.partial_derivative("t1").partial_derivative("t2").partial_derivative("t3");
            assert!(d.is_constant());
            let zero = vec![r(0); 3];
            assert_eq!(d.evaluate(&zero), p.coefficient(&[("t1", 1), ("t2", 1), ("t3", 1)]));
        }
    }

    #[test]
    fn lemma_holds_on_random_affine_polynomials() {
        let mut rng = SplitMix64::seed_from_u64(5);
        for _ in 0..200 {
            let degree = rng.next_u64() % 7;
            let mut coeffs: Vec<(Vec<u32>, Rational)> =
                (0..=degree as u32).map(|k| (vec![k], Rational::sample(&mut rng, 20))).collect();
            // Force the derivative to be constant.
            coeffs.truncate(2);
            let p = P::from_terms(&["t"], coeffs);
            assert!(lemma_check(&p));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = P> {
            proptest::collection::vec(((0u32..3, 0u32..3), -5i64..5), 0..6).prop_map(|ts| {
                P::from_terms(&["s", "t"], ts.into_iter().map(|((a, b), c)| (vec![a, b], r(c))))
            })
        }

        proptest! {
            #[test]
            fn derivative_is_linear(p in poly(), q in poly(), k in -4i64..4) {
                let lhs = p.scale(&r(k)).add(&q).partial_derivative("s");
                let rhs = p.partial_derivative("s").scale(&r(k)).add(&q.partial_derivative("s"));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn leibniz_rule(p in poly(), q in poly()) {
                let lhs = p.mul(&q).partial_derivative("t");
                let rhs = p.partial_derivative("t").mul(&q).add(&p.mul(&q.partial_derivative("t")));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn evaluation_is_a_ring_map(p in poly(), q in poly(), s in -3i64..3, t in -3i64..3) {
                let at = [r(s), r(t)];
                prop_assert_eq!(p.mul(&q).evaluate(&at), p.evaluate(&at) * q.evaluate(&at));
                prop_assert_eq!(p.add(&q).evaluate(&at), p.evaluate(&at) + q.evaluate(&at));
            }

            #[test]
            fn no_zero_coefficients_stored(p in poly(), q in poly()) {
                let prod = p.mul(&q).sub(&q.mul(&p));
                prop_assert!(prod.is_zero());
                for (m, c) in p.add(&q).terms() {
                    prop_assert!(!c.is_zero());
                    prop_assert_eq!(m.degree(), m.exponents().iter().sum::<u32>());
                }
            }
        }
    }
}
