//! Field elements.
//!
//! Everything above this module is generic over [`Field`]. Two families
//! implement it: arbitrary-precision rationals ([`Rational`]) and prime
//! fields [`Gf<P>`] with a compile-time modulus. Floats deliberately do not
//! implement [`Field`]; they only appear as [`Scalar`] values produced by the
//! Monte Carlo estimator.
//!
//! [`Scalar`] is the dynamically typed counterpart used at file and CLI
//! boundaries, where the field is only known at runtime.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::RngCore;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Largest modulus accepted for prime fields (the Mersenne prime 2^61 - 1).
pub const MAX_MODULUS: u64 = (1 << 61) - 1;

/// Exact field arithmetic with a known characteristic.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn descriptor() -> FieldDescriptor;

    fn characteristic() -> u64 {
        Self::descriptor().characteristic()
    }

    fn inverse(&self) -> Result<Self>;

    fn from_i64(v: i64) -> Self;

    fn from_u64(v: u64) -> Self;

    fn from_biguint(v: &BigUint) -> Self;

    fn to_scalar(&self) -> Scalar;

    fn from_scalar(s: &Scalar) -> Result<Self>;

    /// Draws a pseudo-random element. Rationals get numerator in
    /// `[-bound, bound]` and denominator in `[1, bound]`; prime-field elements
    /// are residues `next_u64() mod p`.
    fn sample<R: RngCore>(rng: &mut R, bound: u64) -> Self;

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= &base;
            }
            exp >>= 1;
            if exp > 0 {
                let b = base.clone();
                base *= &b;
            }
        }
        acc
    }
}

/// `n!` as a field element. May be zero in positive characteristic.
pub fn factorial<F: Field>(n: usize) -> F {
    (2..=n as u64).fold(F::one(), |acc, k| acc * F::from_u64(k))
}

/// `(n!)^-1`, refusing fields whose characteristic `p` satisfies `0 < p <= n`.
pub fn invert_factorial<F: Field>(n: usize) -> Result<F> {
    let p = F::characteristic();
    if p != 0 && p as u128 <= n as u128 {
        return Err(Error::CharacteristicDividesFactorial { n, characteristic: p });
    }
    factorial::<F>(n).inverse()
}

impl Field for Rational {
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_u64(v: u64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_biguint(v: &BigUint) -> Self {
        Rational::from_integer(BigInt::from(v.clone()))
    }

    fn to_scalar(&self) -> Scalar {
        Scalar(Repr::Rational(self.clone()))
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match &s.0 {
            Repr::Rational(r) => Ok(r.clone()),
            Repr::Float(_) => Err(Error::FloatNotAllowed),
            Repr::Gfp { modulus, .. } => Err(Error::FieldMismatch {
                left: "rational".into(),
                right: format!("GF({modulus})"),
            }),
        }
    }

    fn sample<R: RngCore>(rng: &mut R, bound: u64) -> Self {
        let bound = bound.max(1);
        let span = 2 * bound + 1;
        let num = (rng.next_u64() % span) as i64 - bound as i64;
        let den = 1 + (rng.next_u64() % bound) as i64;
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

const fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

const fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let mut i = 0;
    while i < BASES.len() {
        if n == BASES[i] {
            return true;
        }
        if n % BASES[i] == 0 {
            return false;
        }
        i += 1;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mut i = 0;
    'witness: while i < BASES.len() {
        let mut x = pow_mod(BASES[i], d, n);
        i += 1;
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut r = 1;
        while r < s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
            r += 1;
        }
        return false;
    }
    true
}

/// Element of the prime field GF(P), stored as its canonical residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf<const P: u64>(u64);

impl<const P: u64> Gf<P> {
    const VALID_MODULUS: () = assert!(
        P <= MAX_MODULUS && is_prime(P),
        "Gf<P> needs a prime modulus no larger than 2^61 - 1"
    );

    pub fn new(value: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::VALID_MODULUS;
        Gf(value % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl<const P: u64> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Gf<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        // P < 2^61, so the sum cannot overflow.
        let s = self.0 + rhs.0;
        Gf(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gf(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gf(mul_mod(self.0, rhs.0, P))
    }
}

impl<const P: u64> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<'a, const P: u64> AddAssign<&'a Gf<P>> for Gf<P> {
    fn add_assign(&mut self, rhs: &'a Gf<P>) {
        *self = *self + *rhs;
    }
}

impl<'a, const P: u64> SubAssign<&'a Gf<P>> for Gf<P> {
    fn sub_assign(&mut self, rhs: &'a Gf<P>) {
        *self = *self - *rhs;
    }
}

impl<'a, const P: u64> MulAssign<&'a Gf<P>> for Gf<P> {
    fn mul_assign(&mut self, rhs: &'a Gf<P>) {
        *self = *self * *rhs;
    }
}

impl<const P: u64> Zero for Gf<P> {
    fn zero() -> Self {
        Gf::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Gf<P> {
    fn one() -> Self {
        Gf::new(1)
    }
}

impl<const P: u64> Field for Gf<P> {
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::Gfp(P)
    }

    fn inverse(&self) -> Result<Self> {
        if self.0 == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(Gf(pow_mod(self.0, P - 2, P)))
        }
    }

    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(P.min(i64::MAX as u64) as i64) as u64;
        Gf::new(r)
    }

    fn from_u64(v: u64) -> Self {
        Gf::new(v)
    }

    fn from_biguint(v: &BigUint) -> Self {
        let r = v % BigUint::from(P);
        Gf::new(r.to_u64().expect("residue below modulus"))
    }

    fn to_scalar(&self) -> Scalar {
        Scalar(Repr::Gfp { modulus: P, value: self.0 })
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match &s.0 {
            Repr::Gfp { modulus, value } if *modulus == P => Ok(Gf::new(*value)),
            Repr::Gfp { modulus, .. } => Err(Error::FieldMismatch {
                left: format!("GF({P})"),
                right: format!("GF({modulus})"),
            }),
            // Integers (and rationals with invertible denominator) embed into GF(P).
            Repr::Rational(r) => {
                let num = Self::from_bigint(r.numer());
                let den = Self::from_bigint(r.denom());
                Ok(num * den.inverse()?)
            }
            Repr::Float(_) => Err(Error::FloatNotAllowed),
        }
    }

    fn sample<R: RngCore>(rng: &mut R, _bound: u64) -> Self {
        Gf::new(rng.next_u64())
    }
}

impl<const P: u64> Gf<P> {
    fn from_bigint(v: &BigInt) -> Self {
        let m = BigInt::from(P);
        let r = ((v % &m) + &m) % &m;
        Gf::new(r.to_u64().expect("residue below modulus"))
    }
}

/// Runtime description of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rational,
    Gfp(u64),
    /// Double precision; only ever attached to Monte Carlo estimates.
    Float,
}

impl FieldDescriptor {
    pub fn gfp(p: u64) -> Result<Self> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(FieldDescriptor::Gfp(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Gfp(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldDescriptor::Rational => Scalar(Repr::Rational(Rational::from_i64(v))),
            FieldDescriptor::Gfp(p) => Scalar(Repr::Gfp {
                modulus: p,
                value: (v as i128).rem_euclid(p as i128) as u64,
            }),
            FieldDescriptor::Float => Scalar(Repr::Float(v as f64)),
        }
    }

    /// `(n!)^-1` in this field.
    pub fn invert_factorial(&self, n: usize) -> Result<Scalar> {
        match *self {
            FieldDescriptor::Float => Err(Error::FloatNotAllowed),
            FieldDescriptor::Gfp(p) if p as u128 <= n as u128 => {
                Err(Error::CharacteristicDividesFactorial { n, characteristic: p })
            }
            _ => {
                let mut acc = self.one();
                for k in 2..=n as i64 {
                    acc = acc.mul(&self.from_i64(k))?;
                }
                acc.inverse()
            }
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "rational"),
            FieldDescriptor::Gfp(p) => write!(f, "GF({p})"),
            FieldDescriptor::Float => write!(f, "float"),
        }
    }
}

/// Accepts `rational`, `q`, `gf:P`, `gfP` and `gfp:P`.
impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "rational" || lower == "q" {
            return Ok(FieldDescriptor::Rational);
        }
        let digits = lower
            .strip_prefix("gfp:")
            .or_else(|| lower.strip_prefix("gf:"))
            .or_else(|| lower.strip_prefix("gf"))
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}`")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in `{s}`")))?;
        FieldDescriptor::gfp(p)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FieldDescriptorJson {
    Name(String),
    Gfp { gfp: u64 },
}

impl Serialize for FieldDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            FieldDescriptor::Rational => FieldDescriptorJson::Name("rational".into()),
            FieldDescriptor::Gfp(p) => FieldDescriptorJson::Gfp { gfp: p },
            FieldDescriptor::Float => FieldDescriptorJson::Name("float".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match FieldDescriptorJson::deserialize(d)? {
            FieldDescriptorJson::Name(n) if n == "rational" => Ok(FieldDescriptor::Rational),
            FieldDescriptorJson::Name(n) => Err(D::Error::custom(format!("unknown field `{n}`"))),
            FieldDescriptorJson::Gfp { gfp } => FieldDescriptor::gfp(gfp).map_err(D::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Rational(Rational),
    Gfp { modulus: u64, value: u64 },
    Float(f64),
}

/// A field element whose field is known only at runtime.
///
/// Binary operations check that both operands live in the same field and
/// report [`Error::FieldMismatch`] otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn rational(r: Rational) -> Self {
        Scalar(Repr::Rational(r))
    }

    pub fn integer(v: i64) -> Self {
        Scalar(Repr::Rational(Rational::from_i64(v)))
    }

    pub fn gfp(modulus: u64, value: u64) -> Result<Self> {
        FieldDescriptor::gfp(modulus)?;
        Ok(Scalar(Repr::Gfp { modulus, value: value % modulus }))
    }

    pub(crate) fn float(v: f64) -> Self {
        Scalar(Repr::Float(v))
    }

    pub fn field(&self) -> FieldDescriptor {
        match &self.0 {
            Repr::Rational(_) => FieldDescriptor::Rational,
            Repr::Gfp { modulus, .. } => FieldDescriptor::Gfp(*modulus),
            Repr::Float(_) => FieldDescriptor::Float,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.field().characteristic()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match &self.0 {
            Repr::Rational(r) => r.to_f64(),
            Repr::Gfp { .. } => None,
            Repr::Float(v) => Some(*v),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_zero(),
            Repr::Gfp { value, .. } => *value == 0,
            Repr::Float(v) => *v == 0.0,
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::FieldMismatch { left: self.field().to_string(), right: other.field().to_string() }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Ok(Scalar::rational(a + b)),
            (Repr::Gfp { modulus: p, value: a }, Repr::Gfp { modulus: q, value: b }) if p == q => {
                Ok(Scalar(Repr::Gfp { modulus: *p, value: ((*a as u128 + *b as u128) % *p as u128) as u64 }))
            }
            (Repr::Float(a), Repr::Float(b)) => Ok(Scalar::float(a + b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Ok(Scalar::rational(a * b)),
            (Repr::Gfp { modulus: p, value: a }, Repr::Gfp { modulus: q, value: b }) if p == q => {
                Ok(Scalar(Repr::Gfp { modulus: *p, value: mul_mod(*a, *b, *p) }))
            }
            (Repr::Float(a), Repr::Float(b)) => Ok(Scalar::float(a * b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match &self.0 {
            Repr::Rational(a) => Scalar::rational(-a),
            Repr::Gfp { modulus, value } => {
                Scalar(Repr::Gfp { modulus: *modulus, value: (modulus - value) % modulus })
            }
            Repr::Float(v) => Scalar::float(-v),
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(a) => Scalar::rational(a.recip()),
            Repr::Gfp { modulus, value } => {
                Scalar(Repr::Gfp { modulus: *modulus, value: pow_mod(*value, modulus - 2, *modulus) })
            }
            Repr::Float(v) => Scalar::float(1.0 / v),
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) => write!(f, "{r}"),
            Repr::Gfp { modulus, value } => write!(f, "{value} (mod {modulus})"),
            Repr::Float(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarJson {
    Text(String),
    Gfp {
        #[serde(rename = "mod")]
        modulus: u64,
        val: u64,
    },
    Integer(i64),
    Float(f64),
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Rational(r) => ScalarJson::Text(r.to_string()),
            Repr::Gfp { modulus, value } => ScalarJson::Gfp { modulus: *modulus, val: *value },
            Repr::Float(v) => ScalarJson::Float(*v),
        }
        .serialize(s)
    }
}

/// Floats are never accepted from input; JSON numbers must be integers.
impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ScalarJson::deserialize(d)? {
            ScalarJson::Text(t) => parse_rational(&t).map(Scalar::rational).map_err(D::Error::custom),
            ScalarJson::Gfp { modulus, val } => {
                if val >= modulus {
                    return Err(D::Error::custom(format!("residue {val} not reduced mod {modulus}")));
                }
                Scalar::gfp(modulus, val).map_err(D::Error::custom)
            }
            ScalarJson::Integer(v) => Ok(Scalar::integer(v)),
            ScalarJson::Float(_) => Err(D::Error::custom(Error::FloatNotAllowed)),
        }
    }
}

/// Parses `"p/q"` or `"p"`, normalising to lowest terms with positive denominator.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
    let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let r = Rational::new(num, den);
    debug_assert!(r.denom().is_positive());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    type Gf5 = Gf<5>;
    type Gf7 = Gf<7>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rational_addition_reduces() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        let s = Scalar::rational(q(1, 2)).add(&Scalar::rational(q(1, 3))).unwrap();
        assert_eq!(s.to_string(), "5/6");
    }

    #[test]
    fn prime_field_addition_wraps() {
        assert_eq!(Gf5::new(3) + Gf5::new(4), Gf5::new(2));
        let s = Scalar::gfp(5, 3).unwrap().add(&Scalar::gfp(5, 4).unwrap()).unwrap();
        assert_eq!(s, Scalar::gfp(5, 2).unwrap());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Scalar::integer(1);
        let b = Scalar::gfp(5, 1).unwrap();
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch { .. })));
        let c = Scalar::gfp(7, 1).unwrap();
        assert!(matches!(b.mul(&c), Err(Error::FieldMismatch { .. })));
        assert!(matches!(Rational::from_scalar(&b), Err(Error::FieldMismatch { .. })));
        assert!(matches!(Gf7::from_scalar(&b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn inverses() {
        assert_eq!(q(2, 3).inverse().unwrap(), q(3, 2));
        assert_eq!(Gf7::new(3).inverse().unwrap(), Gf7::new(5));
        assert_eq!(Rational::zero().inverse(), Err(Error::DivisionByZero));
        assert_eq!(Gf7::zero().inverse(), Err(Error::DivisionByZero));
        assert_eq!(Scalar::integer(0).inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn factorial_inversion() {
        assert_eq!(invert_factorial::<Rational>(3).unwrap(), q(1, 6));
        assert_eq!(
            invert_factorial::<Gf<2>>(3),
            Err(Error::CharacteristicDividesFactorial { n: 3, characteristic: 2 })
        );
        // Brute-force search for the inverse of 4! = 24 mod 7.
        let target = (1..7u64).find(|v| (24 * v) % 7 == 1).unwrap();
        assert_eq!(target, 5);
        assert_eq!(invert_factorial::<Gf7>(4).unwrap(), Gf7::new(target));
        assert_eq!(FieldDescriptor::Gfp(7).invert_factorial(4).unwrap(), Scalar::gfp(7, 5).unwrap());
        assert!(FieldDescriptor::Gfp(3).invert_factorial(3).is_err());
        assert!(FieldDescriptor::Gfp(5).invert_factorial(4).is_ok());
    }

    #[test]
    fn characteristic_and_repeated_one() {
        assert_eq!(Rational::characteristic(), 0);
        assert_eq!(Gf7::characteristic(), 7);
        let mut acc = Gf7::zero();
        for _ in 0..7 {
            acc += &Gf7::one();
        }
        assert!(acc.is_zero());
        assert_eq!(Scalar::gfp(13, 2).unwrap().characteristic(), 13);
        assert_eq!(Scalar::float(1.0).characteristic(), 0);
    }

    #[test]
    fn large_modulus_uses_widening_multiplication() {
        type Big = Gf<MAX_MODULUS>;
        let a = Big::new(MAX_MODULUS - 1);
        // (-1)(-1) = 1
        assert_eq!(a * a, Big::one());
        let x = Big::new(123_456_789_012_345);
        assert_eq!(x * x.inverse().unwrap(), Big::one());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(MAX_MODULUS));
        assert!(!is_prime(MAX_MODULUS - 2));
        assert!(FieldDescriptor::gfp(9).is_err());
        assert!(FieldDescriptor::gfp(u64::MAX).is_err());
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!("rational".parse::<FieldDescriptor>().unwrap(), FieldDescriptor::Rational);
        assert_eq!("gf:7".parse::<FieldDescriptor>().unwrap(), FieldDescriptor::Gfp(7));
        assert_eq!("GF2".parse::<FieldDescriptor>().unwrap(), FieldDescriptor::Gfp(2));
        assert!("gf:8".parse::<FieldDescriptor>().is_err());
        assert!("real".parse::<FieldDescriptor>().is_err());
    }

    #[test]
    fn json_forms() {
        let r = Scalar::rational(q(-3, 4));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-3/4\"");
        assert_eq!(serde_json::to_string(&Scalar::integer(5)).unwrap(), "\"5\"");
        let g = Scalar::gfp(7, 3).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"mod":7,"val":3}"#);
        let back: Scalar = serde_json::from_str(r#"{"mod":7,"val":3}"#).unwrap();
        assert_eq!(back, g);
        let back: Scalar = serde_json::from_str("\"6/-8\"").unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<Scalar>("1.5").is_err());
        assert!(serde_json::from_str::<Scalar>(r#"{"mod":7,"val":9}"#).is_err());
        assert!(serde_json::from_str::<Scalar>("\"1/0\"").is_err());

        let f: FieldDescriptor = serde_json::from_str(r#"{"gfp":3}"#).unwrap();
        assert_eq!(f, FieldDescriptor::Gfp(3));
        assert_eq!(serde_json::to_string(&FieldDescriptor::Rational).unwrap(), "\"rational\"");
    }

    /// Second implementation of rational addition on raw big integers.
    fn oracle_add(a: &Rational, b: &Rational) -> (BigInt, BigInt) {
        let num = a.numer() * b.denom() + b.numer() * a.denom();
        let den = a.denom() * b.denom();
        let g = num.gcd(&den);
        (num / &g, den / g)
    }

    #[test]
    fn additive_identity_against_bigint_oracle() {
        let mut rng = SplitMix64::seed_from_u64(11);
        for _ in 0..100 {
            let x = Rational::sample(&mut rng, 1_000_000);
            let sum = x.clone() + Rational::zero();
            let (n, d) = oracle_add(&x, &Rational::zero());
            assert_eq!(sum, x);
            assert_eq!((sum.numer().clone(), sum.denom().clone()), (n, d));
            let y = Rational::sample(&mut rng, 1_000_000);
            let (n, d) = oracle_add(&x, &y);
            let s = x + y;
            assert_eq!((s.numer().clone(), s.denom().clone()), (n, d));
            assert!(s.denom().is_positive());
        }
    }

    #[test]
    fn multiplicative_inverse_property() {
        let mut rng = SplitMix64::seed_from_u64(12);
        let mut checked = 0;
        while checked < 100 {
            let a = Rational::sample(&mut rng, 50);
            let g = Gf::<1_000_000_007>::sample(&mut rng, 0);
            if !a.is_zero() {
                assert!((a.clone() * a.inverse().unwrap()).is_one());
                let s = a.to_scalar();
                assert_eq!(s.mul(&s.inverse().unwrap()).unwrap(), Scalar::integer(1));
            }
            if !g.is_zero() {
                assert!((g * g.inverse().unwrap()).is_one());
            }
            checked += 1;
        }
    }

    #[test]
    fn embedding_rationals_into_prime_fields() {
        let half = Scalar::rational(q(1, 2));
        assert_eq!(Gf7::from_scalar(&half).unwrap(), Gf7::new(4));
        assert_eq!(Gf7::from_i64(-1), Gf7::new(6));
        assert_eq!(Gf7::from_biguint(&BigUint::from(720u32)), Gf7::new(720 % 7));
        assert_eq!(Gf::<2>::from_scalar(&half), Err(Error::DivisionByZero));
        assert_eq!(Rational::from_scalar(&Scalar::float(0.5)), Err(Error::FloatNotAllowed));
    }

    fn field_axioms<F: Field>(a: F, b: F, c: F) {
        assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        assert_eq!(a.clone() + F::zero(), a);
        assert_eq!(a.clone() * F::one(), a);
        assert!((a.clone() + (-a.clone())).is_zero());
        if !a.is_zero() {
            assert!((a.clone() * a.inverse().unwrap()).is_one());
        }
        assert_eq!(a.clone() - b.clone(), a + (-b));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = Rational> {
            (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| q(n, d))
        }

        proptest! {
            #[test]
            fn rational_axioms(a in rational(), b in rational(), c in rational()) {
                field_axioms(a, b, c);
            }

            #[test]
            fn gf_axioms(a in 0u64..7, b in 0u64..7, c in 0u64..7) {
                field_axioms(Gf7::new(a), Gf7::new(b), Gf7::new(c));
                field_axioms(Gf::<2>::new(a), Gf::<2>::new(b), Gf::<2>::new(c));
            }

            #[test]
            fn mersenne_axioms(a: u64, b: u64, c: u64) {
                field_axioms(Gf::<MAX_MODULUS>::new(a), Gf::<MAX_MODULUS>::new(b), Gf::<MAX_MODULUS>::new(c));
            }

            #[test]
            fn factorial_inverse_times_factorial_is_one(n in 1usize..15) {
                let r: Rational = invert_factorial(n).unwrap();
                prop_assert!((r * factorial::<Rational>(n)).is_one());
                match invert_factorial::<Gf<13>>(n) {
                    Ok(v) => prop_assert!((v * factorial::<Gf<13>>(n)).is_one()),
                    Err(e) => {
                        let expected = matches!(e, Error::CharacteristicDividesFactorial { .. });
                        prop_assert!(n >= 13 && expected);
                    }
                }
            }

            #[test]
            fn pow_matches_repeated_product(a in rational(), e in 0u32..8) {
                let direct = (0..e).fold(Rational::one(), |acc, _| acc * a.clone());
                prop_assert_eq!(Field::pow(&a, e), direct);
            }
        }
    }
}
