use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A coordinate vector in K^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector<F> {
    coords: Vec<F>,
}

impl<F: Field> Vector<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Vector { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector { coords: vec![F::zero(); dim] }
    }

    /// The `i`-th standard basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[i] = F::one();
        v
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Vector { coords: values.iter().map(|&v| F::from_i64(v)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<F> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.sub_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_dim(other)?;
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += b;
        }
        Ok(())
    }

    pub fn sub_assign(&mut self, other: &Self) -> Result<()> {
        self.check_dim(other)?;
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a -= b;
        }
        Ok(())
    }

    pub fn scale(&self, s: &F) -> Self {
        Vector { coords: self.coords.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        Vector { coords: self.coords.iter().map(|c| -c.clone()).collect() }
    }

    pub fn dot(&self, other: &Self) -> Result<F> {
        self.check_dim(other)?;
        let mut acc = F::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc += &(a.clone() * b.clone());
        }
        Ok(acc)
    }

    pub fn to_scalars(&self) -> Vec<Scalar> {
        self.coords.iter().map(Field::to_scalar).collect()
    }

    pub fn from_scalars(values: &[Scalar]) -> Result<Self> {
        Ok(Vector { coords: values.iter().map(F::from_scalar).collect::<Result<_>>()? })
    }
}

/// Checks that every vector has dimension `dim`.
pub fn check_dims<F: Field>(vectors: &[Vector<F>], dim: usize) -> Result<()> {
    match vectors.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch { expected: dim, found: v.dim() }),
        None => Ok(()),
    }
}

impl<F> Index<usize> for Vector<F> {
    type Output = F;
    fn index(&self, i: usize) -> &F {
        &self.coords[i]
    }
}

impl<F: fmt::Display> fmt::Display for Vector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// JSON form: a list of scalars.
impl<F: Field> Serialize for Vector<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_scalars().serialize(s)
    }
}

impl<'de, F: Field> Deserialize<'de> for Vector<F> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Scalar>::deserialize(d)?;
        Vector::from_scalars(&raw).map_err(serde::de::Error::custom)
    }
}
