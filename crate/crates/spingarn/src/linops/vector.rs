//! Points of a real Hilbert space `R^n` and of product spaces.

use crate::error::{Error, Result};

/// A point of `R^n`, stored densely.
///
/// Coordinates are validated to be finite when a vector enters the library
/// from outside; internal arithmetic works on already-validated data.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    /// Builds a vector from raw coordinates, rejecting NaN/Inf and the
    /// zero-dimensional case.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "vector must have at least one coordinate".into(),
            ));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite("vector coordinates"));
        }
        Ok(Vector { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Vector {
            coords: vec![0.0; dim],
        }
    }

    /// Internal constructor for coordinates produced by our own arithmetic.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Vector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coords[i]
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::from_raw(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::from_raw(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Vector {
        Vector::from_raw(self.coords.iter().map(|c| c * factor).collect())
    }

    /// `self + factor * other`, the workhorse of every iteration loop.
    pub fn add_scaled(&self, factor: f64, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::from_raw(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + factor * b)
                .collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub(crate) fn check_dim(&self, expected: usize, context: &'static str) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                context,
                expected,
                actual: self.dim(),
            });
        }
        Ok(())
    }
}

/// A point of a product space `⊕_i R^{n_i}`, kept as its ordered blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockVector {
    blocks: Vec<Vector>,
}

impl BlockVector {
    pub fn new(blocks: Vec<Vector>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument(
                "block vector must have at least one block".into(),
            ));
        }
        Ok(BlockVector { blocks })
    }

    pub fn pair(x: Vector, y: Vector) -> Self {
        BlockVector { blocks: vec![x, y] }
    }

    pub fn blocks(&self) -> &[Vector] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Vector {
        &self.blocks[i]
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(Vector::dim).sum()
    }

    /// Concatenates the blocks into one flat vector.
    pub fn flatten(&self) -> Vector {
        let mut coords = Vec::with_capacity(self.total_dim());
        for b in &self.blocks {
            coords.extend_from_slice(b.as_slice());
        }
        Vector::from_raw(coords)
    }

    /// Splits a flat vector into blocks of the given dimensions.
    pub fn from_flat(dims: &[usize], flat: &Vector) -> Result<Self> {
        let total: usize = dims.iter().sum();
        flat.check_dim(total, "block split")?;
        let mut blocks = Vec::with_capacity(dims.len());
        let mut off = 0;
        for &d in dims {
            blocks.push(Vector::from_raw(flat.as_slice()[off..off + d].to_vec()));
            off += d;
        }
        BlockVector::new(blocks)
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.dot(b)).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
        assert!(Vector::new(vec![]).is_err());
        assert!(Vector::new(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn block_flatten_split_roundtrip() {
        let bv = BlockVector::new(vec![
            Vector::new(vec![1.0, 2.0]).unwrap(),
            Vector::new(vec![3.0]).unwrap(),
        ])
        .unwrap();
        assert_eq!(bv.total_dim(), 3);
        let flat = bv.flatten();
        let back = BlockVector::from_flat(&[2, 1], &flat).unwrap();
        assert_eq!(back, bv);

        assert!(BlockVector::from_flat(&[2, 2], &flat).is_err());
        assert!(BlockVector::new(vec![]).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = Vector::new(vec![1.0, -1.0]).unwrap();
        let b = Vector::new(vec![2.0, 3.0]).unwrap();
        assert_eq!(a.dot(&b), -1.0);
        assert_eq!(a.add_scaled(2.0, &b).as_slice(), &[5.0, 5.0]);
        assert_eq!(a.sub(&b).as_slice(), &[-1.0, -4.0]);
    }
}
