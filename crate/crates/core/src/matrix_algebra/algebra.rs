//! Multi-matrix algebras, their elements and traces.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type C = Complex64;
pub type Mat = DMatrix<C>;

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// Block-diagonal element of a multi-matrix algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    pub blocks: Vec<Mat>,
}

impl BlockMatrix {
    pub fn new(blocks: Vec<Mat>) -> Self {
        Self { blocks }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.blocks.iter().map(|b| b.adjoint()).collect())
    }

    pub fn scale(&self, s: C) -> Self {
        Self::new(self.blocks.iter().map(|b| b * s).collect())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().flat_map(|b| b.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    /// Unnormalized trace of every block.
    pub fn block_traces(&self) -> Vec<C> {
        self.blocks.iter().map(|b| b.trace()).collect()
    }

    /// The block-diagonal matrix acting on `C^{Σ d_i}`.
    pub fn to_dense(&self) -> Mat {
        let n: usize = self.blocks.iter().map(|b| b.nrows()).sum();
        let mut out = Mat::zeros(n, n);
        let mut o = 0;
        for b in &self.blocks {
            let d = b.nrows();
            out.view_mut((o, o), (d, d)).copy_from(b);
            o += d;
        }
        out
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.dist(&self.adjoint()) <= tol
    }
}

impl Add for &BlockMatrix {
    type Output = BlockMatrix;
    fn add(self, rhs: &BlockMatrix) -> BlockMatrix {
        BlockMatrix::new(self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &BlockMatrix {
    type Output = BlockMatrix;
    fn sub(self, rhs: &BlockMatrix) -> BlockMatrix {
        BlockMatrix::new(self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a - b).collect())
    }
}

impl Mul for &BlockMatrix {
    type Output = BlockMatrix;
    fn mul(self, rhs: &BlockMatrix) -> BlockMatrix {
        BlockMatrix::new(self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a * b).collect())
    }
}

/// `⊕ M_{d_i}`, determined by its block sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMatrixAlgebra {
    dims: Vec<usize>,
}

impl MultiMatrixAlgebra {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Incompatible(format!("block dimensions must be positive, got {dims:?}")));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    /// Vector-space dimension `Σ d_i²`.
    pub fn dim(&self) -> usize {
        self.dims.iter().map(|d| d * d).sum()
    }

    pub fn is_factor(&self) -> bool {
        self.dims.len() == 1
    }

    pub fn zero(&self) -> BlockMatrix {
        BlockMatrix::new(self.dims.iter().map(|&d| Mat::zeros(d, d)).collect())
    }

    pub fn identity(&self) -> BlockMatrix {
        BlockMatrix::new(self.dims.iter().map(|&d| Mat::identity(d, d)).collect())
    }

    /// Matrix unit `E^j_{rc}`.
    pub fn unit(&self, j: usize, r: usize, col: usize) -> BlockMatrix {
        let mut x = self.zero();
        x.blocks[j][(r, col)] = c(1.0);
        x
    }

    /// Block, row and column of the `t`-th matrix unit in row-major order.
    pub fn unit_index(&self, mut t: usize) -> (usize, usize, usize) {
        for (j, &d) in self.dims.iter().enumerate() {
            if t < d * d {
                return (j, t / d, t % d);
            }
            t -= d * d;
        }
        panic!("matrix unit index out of range")
    }

    /// All matrix units in (block, row, column) order.
    pub fn basis(&self) -> Vec<BlockMatrix> {
        (0..self.dim()).map(|t| {
            let (j, r, col) = self.unit_index(t);
            self.unit(j, r, col)
        })
        .collect()
    }

    pub fn contains(&self, x: &BlockMatrix) -> bool {
        x.blocks.len() == self.dims.len()
            && x.blocks.iter().zip(&self.dims).all(|(b, &d)| b.nrows() == d && b.ncols() == d)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> BlockMatrix {
        BlockMatrix::new(
            self.dims
                .iter()
                .map(|&d| Mat::from_fn(d, d, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
                .collect(),
        )
    }

    pub fn random_self_adjoint<R: Rng>(&self, rng: &mut R) -> BlockMatrix {
        let x = self.random_element(rng);
        (&x + &x.adjoint()).scale(c(0.5))
    }
}

/// Weights `s_i` with `tr(x) = Σ s_i Tr(x_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceVector {
    weights: Vec<f64>,
}

impl TraceVector {
    /// Checks faithfulness and the normalization `Σ s_i d_i = 1`.
    pub fn new(algebra: &MultiMatrixAlgebra, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != algebra.num_blocks() {
            return Err(Error::Incompatible(format!(
                "{} trace weights for {} blocks",
                weights.len(),
                algebra.num_blocks()
            )));
        }
        if weights.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::NotFaithful);
        }
        let total: f64 = weights.iter().zip(algebra.dims()).map(|(s, &d)| s * d as f64).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Incompatible(format!("trace weights give tr(1) = {total}")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn trace(&self, x: &BlockMatrix) -> C {
        x.blocks.iter().zip(&self.weights).map(|(b, &s)| b.trace() * s).sum()
    }
}

/// A multi-matrix algebra with a faithful normalized trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TracialAlgebra {
    pub algebra: MultiMatrixAlgebra,
    pub trace: TraceVector,
}

impl TracialAlgebra {
    pub fn new(algebra: MultiMatrixAlgebra, trace: TraceVector) -> Self {
        Self { algebra, trace }
    }

    /// `M_d` with the normalized trace.
    pub fn full_matrix(d: usize) -> Result<Self> {
        let algebra = MultiMatrixAlgebra::new(vec![d])?;
        let trace = TraceVector::new(&algebra, vec![1.0 / d as f64])?;
        Ok(Self { algebra, trace })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn tr(&self, x: &BlockMatrix) -> C {
        self.trace.trace(x)
    }

    /// `E^j_{rc} / √s_j`, the orthonormal basis of `L²` in (block, row, column) order.
    pub fn orthonormal_unit(&self, t: usize) -> BlockMatrix {
        let (j, r, col) = self.algebra.unit_index(t);
        let mut x = self.algebra.zero();
        x.blocks[j][(r, col)] = c(1.0 / self.trace.weights()[j].sqrt());
        x
    }

    /// `‖x‖₂ = tr(x*x)^{1/2}`.
    pub fn norm2(&self, x: &BlockMatrix) -> f64 {
        self.tr(&(&x.adjoint() * x)).re.max(0.0).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_dims_and_weights() {
        assert!(MultiMatrixAlgebra::new(vec![]).is_err());
        assert!(MultiMatrixAlgebra::new(vec![2, 0]).is_err());
        let a = MultiMatrixAlgebra::new(vec![1, 1]).unwrap();
        assert!(matches!(TraceVector::new(&a, vec![1.0, 0.0]), Err(Error::NotFaithful)));
        assert!(TraceVector::new(&a, vec![0.3, 0.3]).is_err());
        assert!(TraceVector::new(&a, vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn basis_order_and_trace() {
        let a = TracialAlgebra::full_matrix(2).unwrap();
        let b = a.algebra.basis();
        assert_eq!(b.len(), 4);
        assert_eq!(a.algebra.unit_index(1), (0, 0, 1));
        assert!((a.tr(&a.algebra.identity()) - c(1.0)).norm() < 1e-15);
        assert!((a.norm2(&a.orthonormal_unit(2)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blockwise_arithmetic() {
        let a = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = a.random_element(&mut rng);
        let y = a.random_element(&mut rng);
        let lhs = (&x * &y).to_dense();
        let rhs = x.to_dense() * y.to_dense();
        assert!((lhs - rhs).norm() < 1e-12);
        assert!(a.random_self_adjoint(&mut rng).is_self_adjoint(1e-14));
    }
}
