//! Inclusions `N ⊆ M` of multi-matrix algebras with their Markov trace.

use nalgebra::DMatrix;

use super::algebra::{c, BlockMatrix, Mat, MultiMatrixAlgebra, TraceVector, TracialAlgebra};
use super::linalg::hermitian_eigen;
use crate::error::{Error, Result};

/// Index and Perron–Frobenius trace weights of an inclusion matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovData {
    pub beta: f64,
    /// Weights on the blocks of `M` (rows of `Λ`).
    pub m_weights: Vec<f64>,
    /// Induced weights `Λᵀ s` on the blocks of `N`.
    pub n_weights: Vec<f64>,
}

/// `Λ[j][i]` is the multiplicity of the `i`-th block of `N` in the `j`-th block of `M`.
pub type InclusionMatrix = Vec<Vec<usize>>;

fn check_shape(lambda: &[Vec<usize>], n_blocks: usize) -> Result<()> {
    if lambda.is_empty() || lambda.iter().any(|row| row.len() != n_blocks) || n_blocks == 0 {
        return Err(Error::Incompatible(format!(
            "inclusion matrix rows must all have {n_blocks} entries"
        )));
    }
    Ok(())
}

fn is_connected(lambda: &[Vec<usize>]) -> bool {
    let (rows, cols) = (lambda.len(), lambda[0].len());
    let mut seen_r = vec![false; rows];
    let mut seen_c = vec![false; cols];
    let mut stack = vec![(true, 0usize)];
    seen_r[0] = true;
    while let Some((is_row, k)) = stack.pop() {
        if is_row {
            for i in 0..cols {
                if lambda[k][i] > 0 && !seen_c[i] {
                    seen_c[i] = true;
                    stack.push((false, i));
                }
            }
        } else {
            for j in 0..rows {
                if lambda[j][k] > 0 && !seen_r[j] {
                    seen_r[j] = true;
                    stack.push((true, j));
                }
            }
        }
    }
    seen_r.iter().all(|&x| x) && seen_c.iter().all(|&x| x)
}

/// `β = ‖Λ‖²` and the Markov weights, normalized so that `tr(1) = 1`.
pub fn markov_data(lambda: &[Vec<usize>], n_dims: &[usize]) -> Result<MarkovData> {
    check_shape(lambda, n_dims.len())?;
    if lambda.iter().flatten().all(|&x| x == 0) {
        return Err(Error::ZeroMatrix);
    }
    if !is_connected(lambda) {
        return Err(Error::Disconnected);
    }
    let rows = lambda.len();
    let l = DMatrix::from_fn(rows, n_dims.len(), |j, i| lambda[j][i] as f64);
    let llt = &l * l.transpose();
    let (vals, vecs) = hermitian_eigen(&llt.map(c));
    let beta = vals[0];
    let mut s: Vec<f64> = (0..rows).map(|j| vecs[(j, 0)].norm()).collect();
    let m_dims = m_dims_of(lambda, n_dims);
    let total: f64 = s.iter().zip(&m_dims).map(|(x, &d)| x * d as f64).sum();
    s.iter_mut().for_each(|x| *x /= total);
    let n_weights = (0..n_dims.len()).map(|i| (0..rows).map(|j| lambda[j][i] as f64 * s[j]).sum()).collect();
    Ok(MarkovData { beta, m_weights: s, n_weights })
}

/// `D = Λ d`.
pub fn m_dims_of(lambda: &[Vec<usize>], n_dims: &[usize]) -> Vec<usize> {
    lambda.iter().map(|row| row.iter().zip(n_dims).fold(0usize, |acc, (m, d)| acc.saturating_add(m.saturating_mul(*d)))).collect()
}

/// `N ⊆ M` with the standard block embedding and a Markov trace.
///
/// Inside the `j`-th block of `M` the copies of the blocks of `N` sit on the diagonal in order
/// of `(i, copy)`, each occupying `d_i` consecutive rows.
#[derive(Clone, Debug, PartialEq)]
pub struct TracialInclusion {
    pub n: TracialAlgebra,
    pub m: TracialAlgebra,
    lambda: InclusionMatrix,
    beta: f64,
}

impl TracialInclusion {
    /// Builds the inclusion with its Markov trace.
    pub fn new(n_dims: Vec<usize>, lambda: InclusionMatrix) -> Result<Self> {
        let data = markov_data(&lambda, &n_dims)?;
        Self::assemble(n_dims, lambda, data)
    }

    /// As [`Self::new`], also checking the given block sizes of `M`.
    pub fn from_dims(n_dims: Vec<usize>, m_dims: Vec<usize>, lambda: InclusionMatrix) -> Result<Self> {
        check_shape(&lambda, n_dims.len())?;
        let expected = m_dims_of(&lambda, &n_dims);
        if expected != m_dims {
            return Err(Error::Incompatible(format!(
                "block sizes of M are {m_dims:?} but the inclusion matrix forces {expected:?}"
            )));
        }
        Self::new(n_dims, lambda)
    }

    /// Uses the supplied weights on `M`, which must agree with the Markov trace.
    pub fn with_trace(n_dims: Vec<usize>, lambda: InclusionMatrix, m_weights: Vec<f64>) -> Result<Self> {
        let mut data = markov_data(&lambda, &n_dims)?;
        let m_dims = m_dims_of(&lambda, &n_dims);
        let m_alg = MultiMatrixAlgebra::new(m_dims)?;
        TraceVector::new(&m_alg, m_weights.clone())?;
        // Markov condition: Λ Λᵀ s = β s.
        for j in 0..lambda.len() {
            let lhs: f64 = (0..n_dims.len())
                .map(|i| lambda[j][i] as f64 * (0..lambda.len()).map(|k| lambda[k][i] as f64 * m_weights[k]).sum::<f64>())
                .sum();
            let rhs = data.beta * m_weights[j];
            if (lhs - rhs).abs() > 1e-9 {
                return Err(Error::NotMarkov(format!(
                    "β·tr(p e_0) ≠ tr(p) for a minimal projection p in block {j} of M: (ΛΛᵀs)_{j} = {lhs}, β s_{j} = {rhs}"
                )));
            }
        }
        data.n_weights = (0..n_dims.len())
            .map(|i| (0..lambda.len()).map(|j| lambda[j][i] as f64 * m_weights[j]).sum())
            .collect();
        data.m_weights = m_weights;
        Self::assemble(n_dims, lambda, data)
    }

    fn assemble(n_dims: Vec<usize>, lambda: InclusionMatrix, data: MarkovData) -> Result<Self> {
        let m_dims = m_dims_of(&lambda, &n_dims);
        let n_alg = MultiMatrixAlgebra::new(n_dims)?;
        let m_alg = MultiMatrixAlgebra::new(m_dims)?;
        let n = TracialAlgebra::new(n_alg.clone(), TraceVector::new(&n_alg, data.n_weights)?);
        let m = TracialAlgebra::new(m_alg.clone(), TraceVector::new(&m_alg, data.m_weights)?);
        Ok(Self { n, m, lambda, beta: data.beta })
    }

    pub fn lambda(&self) -> &InclusionMatrix {
        &self.lambda
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// First row of the `copy`-th copy of `N_i` inside `M_j`.
    pub fn segment_offset(&self, j: usize, i: usize, copy: usize) -> usize {
        let d = self.n.algebra.dims();
        (0..i).map(|k| self.lambda[j][k] * d[k]).sum::<usize>() + copy * d[i]
    }

    pub fn embed(&self, x: &BlockMatrix) -> BlockMatrix {
        let d = self.n.algebra.dims();
        let blocks = self
            .m
            .algebra
            .dims()
            .iter()
            .enumerate()
            .map(|(j, &dj)| {
                let mut b = Mat::zeros(dj, dj);
                for i in 0..d.len() {
                    for cp in 0..self.lambda[j][i] {
                        let o = self.segment_offset(j, i, cp);
                        b.view_mut((o, o), (d[i], d[i])).copy_from(&x.blocks[i]);
                    }
                }
                b
            })
            .collect();
        BlockMatrix::new(blocks)
    }

    /// `E(x)_i = t_i⁻¹ Σ_j s_j Σ_copies x_j[segment, segment]`.
    pub fn conditional_expectation(&self, x: &BlockMatrix) -> BlockMatrix {
        let d = self.n.algebra.dims();
        let s = self.m.trace.weights();
        let t = self.n.trace.weights();
        let blocks = (0..d.len())
            .map(|i| {
                let mut acc = Mat::zeros(d[i], d[i]);
                for (j, xj) in x.blocks.iter().enumerate() {
                    for cp in 0..self.lambda[j][i] {
                        let o = self.segment_offset(j, i, cp);
                        acc += xj.view((o, o), (d[i], d[i])) * c(s[j]);
                    }
                }
                acc * c(1.0 / t[i])
            })
            .collect();
        BlockMatrix::new(blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_in_m2() {
        let d = markov_data(&[vec![2]], &[1]).unwrap();
        assert!((d.beta - 4.0).abs() < 1e-12);
        assert!((d.m_weights[0] - 0.5).abs() < 1e-12);
        assert!((d.n_weights[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scalars_in_c2() {
        let d = markov_data(&[vec![1], vec![1]], &[1]).unwrap();
        assert!((d.beta - 2.0).abs() < 1e-12);
        assert!(d.m_weights.iter().all(|w| (w - 0.5).abs() < 1e-12));
    }

    #[test]
    fn degenerate_matrices() {
        assert!(matches!(markov_data(&[vec![0]], &[1]), Err(Error::ZeroMatrix)));
        assert!(matches!(markov_data(&[vec![1, 0], vec![0, 1]], &[1, 1]), Err(Error::Disconnected)));
        assert!(markov_data(&[vec![1, 2]], &[1]).is_err());
    }

    #[test]
    fn diagonal_expectation() {
        let inc = TracialInclusion::new(vec![1, 1], vec![vec![1, 1]]).unwrap();
        let x = BlockMatrix::new(vec![Mat::from_row_slice(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)])]);
        let e = inc.conditional_expectation(&x);
        assert_eq!(e.blocks[0][(0, 0)], c(1.0));
        assert_eq!(e.blocks[1][(0, 0)], c(4.0));
        let back = inc.embed(&e);
        assert_eq!(back.blocks[0][(0, 1)], c(0.0));
    }

    #[test]
    fn supplied_trace_is_validated() {
        assert!(TracialInclusion::with_trace(vec![1], vec![vec![1], vec![1]], vec![0.5, 0.5]).is_ok());
        let err = TracialInclusion::with_trace(vec![1], vec![vec![1], vec![1]], vec![0.25, 0.75]).unwrap_err();
        assert!(matches!(err, Error::NotMarkov(_)));
        assert!(TracialInclusion::from_dims(vec![1], vec![3], vec![vec![2]]).is_err());
    }
}
