//! Exact recovery of symmetric multilinear maps from their diagonals.
//!
//! A symmetric `n`-linear map `u` is determined by `x -> u(x, ..., x)` when
//! `n!` is invertible. This crate implements the recovery formulas as
//! independent engines over any [`Field`], together with the supporting
//! algebra (vectors, sparse polynomials, symmetric tensors) and two
//! applications: Gaussian moments via pair partitions and inclusion-exclusion
//! on set systems.
//!
//! Everything is generic over the scalar; the aliases below fix the common
//! choices.
//!
//! ```
//! use polarization::{polarize, sampling, symtensor, RationalMap};
//! use polarization::symtensor::RandomConfig;
//!
//! let u: RationalMap = symtensor::random_symmetric(3, 2, 7, RandomConfig::default());
//! let xs = sampling::random_vectors(&mut sampling::rng(1), 3, 2, 5);
//! let value = polarize::recover(&u.diagonal(), &xs, &polarize::Method::Subset).unwrap();
//! assert_eq!(value, u.eval_direct(&xs).unwrap());
//! ```

pub mod error;
pub mod inclexcl;
pub mod linalg;
pub mod polarize;
pub mod poly;
pub mod sampling;
pub mod scalar;
pub mod symtensor;
pub mod wick;

pub use error::{Error, Result};
pub use linalg::Vector;
pub use polarize::{recover, Method, SubsetMask};
pub use poly::{Monomial, Polynomial};
pub use scalar::{Field, FieldDescriptor, Gf, Rational, Scalar};
pub use symtensor::{Diagonal, MultiIndex, SymMultiMap};

pub type Gf2 = Gf<2>;
pub type Gf3 = Gf<3>;
pub type Gf7 = Gf<7>;
/// The Mersenne prime `2^61 - 1`, the largest supported modulus.
pub type GfMersenne61 = Gf<{ scalar::MAX_MODULUS }>;

pub type RationalVector = Vector<Rational>;
pub type RationalPolynomial = Polynomial<Rational>;
pub type RationalMap = SymMultiMap<Rational>;
pub type RationalCovariance = wick::Covariance<Rational>;
