//! `L²(A, tr)` in the orthonormal basis `E^j_{rc}/√s_j`.

use super::algebra::{c, BlockMatrix, Mat, MultiMatrixAlgebra, TraceVector, TracialAlgebra, C};
use super::linalg::Vector;
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct GnsSpace {
    pub algebra: TracialAlgebra,
    offsets: Vec<usize>,
}

/// The GNS space of `A` for the trace with the given block weights.
pub fn gns_space(algebra: &MultiMatrixAlgebra, weights: Vec<f64>) -> Result<GnsSpace> {
    let trace = TraceVector::new(algebra, weights)?;
    Ok(GnsSpace::new(&TracialAlgebra::new(algebra.clone(), trace)))
}

impl GnsSpace {
    pub fn new(algebra: &TracialAlgebra) -> Self {
        let mut offsets = Vec::new();
        let mut o = 0;
        for &d in algebra.algebra.dims() {
            offsets.push(o);
            o += d * d;
        }
        Self { algebra: algebra.clone(), offsets }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn index(&self, j: usize, r: usize, col: usize) -> usize {
        self.offsets[j] + r * self.algebra.algebra.dims()[j] + col
    }

    /// Coordinates of `x̄`.
    pub fn to_vector(&self, x: &BlockMatrix) -> Vector {
        let mut v = Vector::zeros(self.dim());
        for (j, b) in x.blocks.iter().enumerate() {
            let sq = self.algebra.trace.weights()[j].sqrt();
            let d = b.nrows();
            for r in 0..d {
                for col in 0..d {
                    v[self.index(j, r, col)] = b[(r, col)] * sq;
                }
            }
        }
        v
    }

    pub fn from_vector(&self, v: &[C]) -> BlockMatrix {
        let dims = self.algebra.algebra.dims();
        let blocks = dims
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let inv = 1.0 / self.algebra.trace.weights()[j].sqrt();
                Mat::from_fn(d, d, |r, col| v[self.index(j, r, col)] * inv)
            })
            .collect();
        BlockMatrix::new(blocks)
    }

    pub fn one(&self) -> Vector {
        self.to_vector(&self.algebra.algebra.identity())
    }

    /// `⟨u, v⟩`, linear in `u`.
    pub fn inner(u: &Vector, v: &Vector) -> C {
        v.dotc(u)
    }

    /// Left multiplication `x̄ ↦ \overline{ax}`, blockwise `a_j ⊗ I`.
    pub fn left(&self, a: &BlockMatrix) -> Mat {
        self.block_operator(a, |aj, d| aj.kronecker(&Mat::identity(d, d)))
    }

    /// Right multiplication `x̄ ↦ \overline{xb}`, blockwise `I ⊗ b_jᵀ`.
    pub fn right(&self, b: &BlockMatrix) -> Mat {
        self.block_operator(b, |bj, d| Mat::identity(d, d).kronecker(&bj.transpose()))
    }

    fn block_operator(&self, a: &BlockMatrix, f: impl Fn(&Mat, usize) -> Mat) -> Mat {
        let n = self.dim();
        let mut out = Mat::zeros(n, n);
        for (j, aj) in a.blocks.iter().enumerate() {
            let d = aj.nrows();
            out.view_mut((self.offsets[j], self.offsets[j]), (d * d, d * d)).copy_from(&f(aj, d));
        }
        out
    }

    /// Applies left multiplication to a vector without forming the operator.
    pub fn apply_left(&self, a: &BlockMatrix, v: &Vector) -> Vector {
        self.to_vector(&(a * &self.from_vector(v.as_slice())))
    }

    /// The modular conjugation is `v ↦ P v̄` for this permutation matrix `P`.
    pub fn j_permutation(&self) -> Mat {
        let n = self.dim();
        let mut p = Mat::zeros(n, n);
        for (j, &d) in self.algebra.algebra.dims().iter().enumerate() {
            for r in 0..d {
                for col in 0..d {
                    p[(self.index(j, col, r), self.index(j, r, col))] = c(1.0);
                }
            }
        }
        p
    }

    /// `J x̄ = \overline{x*}`.
    pub fn apply_j(&self, v: &Vector) -> Vector {
        self.j_permutation() * v.map(|z| z.conj())
    }

    /// `J T J` for a linear operator `T`.
    pub fn conjugate_by_j(&self, t: &Mat) -> Mat {
        let p = self.j_permutation();
        &p * t.map(|z| z.conj()) * &p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_algebra::linalg::max_abs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn invariants_on_two_blocks() {
        let alg = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let g = gns_space(&alg, vec![0.4, 0.2]).unwrap();
        assert_eq!(g.dim(), 5);
        assert!((GnsSpace::inner(&g.one(), &g.one()) - c(1.0)).norm() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = alg.random_element(&mut rng);
        let b = alg.random_element(&mut rng);
        let (la, rb) = (g.left(&a), g.right(&b));
        assert!(max_abs(&(&la * &rb - &rb * &la)) < 1e-12);
        assert!(max_abs(&(g.conjugate_by_j(&la) - g.right(&a.adjoint()))) < 1e-12);
        let x = alg.random_element(&mut rng);
        let v = g.to_vector(&x);
        assert!((g.apply_j(&g.apply_j(&v)) - &v).norm() < 1e-14);
        assert!((g.apply_j(&v) - g.to_vector(&x.adjoint())).norm() < 1e-12);
        assert!((&la * &v - g.apply_left(&a, &v)).norm() < 1e-12);
        assert!((&rb * &v - g.to_vector(&(&x * &b))).norm() < 1e-12);
    }

    #[test]
    fn inner_product_is_trace() {
        let alg = TracialAlgebra::full_matrix(2).unwrap();
        let g = GnsSpace::new(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = alg.algebra.random_element(&mut rng);
        let y = alg.algebra.random_element(&mut rng);
        let lhs = GnsSpace::inner(&g.to_vector(&x), &g.to_vector(&y));
        assert!((lhs - alg.tr(&(&y.adjoint() * &x))).norm() < 1e-12);
    }

    #[test]
    fn non_faithful_trace_rejected() {
        let alg = MultiMatrixAlgebra::new(vec![1, 1]).unwrap();
        assert!(gns_space(&alg, vec![1.0, 0.0]).is_err());
    }
}
