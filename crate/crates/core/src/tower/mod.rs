//! The Jones tower `N = M₋₁ ⊆ M₀ ⊆ M₁ ⊆ …` in matrix-unit coordinates.
//!
//! The basic construction of `A ⊆ B` is realized as `B₁ = ⊕_i M_{n_i}` with one block per
//! block of `A`. Inside block `i` the coordinates are triples `(j, copy, r)` ordered
//! lexicographically, where `j` runs over the blocks of `B`, `copy` over the copies of `A_i`
//! in `B_j` and `r` over the rows of `B_j`. With this layout `B ⊆ B₁` is the standard block
//! embedding with matrix `Λᵀ`, and `L²(B)` splits as `⊕_i C^{n_i} ⊗ C^{d_i}` with `B₁` acting
//! on the first factor.


mod invariant;
mod relations;
mod theorem;
mod unitaries;

use crate::error::{Error, Result};
use crate::matrix_algebra::linalg::Vector;
use crate::matrix_algebra::{c, BlockMatrix, GnsSpace, Mat, TracialAlgebra, TracialInclusion};


pub use invariant::{
    bimodule_correspondence, cross_route_dims, epsilon, partial_tensor, principal_graph, relative_commutant, standard_invariant,
    verify_corollary_2_3, LevelData, PrincipalGraph, StandardInvariant, Vertex, CROSS_ROUTE_LIMIT,
};
pub use relations::verify_tower_relations;
pub use theorem::{build_wn, isomorphism_witness, jones_projection, verify_theorem_2_2, GeneratorImage, IsomorphismWitness, Wn};
pub use unitaries::{bimodule_linearity, build_u2, build_uk, closed_uk, ClosedForm, Regrouping, TensorPower, Unitary};

pub const DEFAULT_CAP: usize = 4096;

/// `M₁`, `e₀` and the inclusion `M ⊆ M₁` for a Markov inclusion `N ⊆ M`.
#[derive(Clone, Debug)]
pub struct BasicConstruction {
    pub upper: TracialInclusion,
    pub e: BlockMatrix,
}

/// The basic construction of `N ⊆ M`; fails unless the trace is Markov.
pub fn basic_construction(incl: &TracialInclusion) -> Result<BasicConstruction> {
    let lambda = incl.lambda();
    let (nb, mb) = (incl.n.algebra.num_blocks(), incl.m.algebra.num_blocks());
    let transposed: Vec<Vec<usize>> = (0..nb).map(|i| (0..mb).map(|j| lambda[j][i]).collect()).collect();
    let beta = incl.beta();
    let t = incl.n.trace.weights();
    let s = incl.m.trace.weights();
    let weights: Vec<f64> = t.iter().map(|ti| ti / beta).collect();
    let mut upper = TracialInclusion::with_trace(incl.m.algebra.dims().to_vec(), transposed, weights)?;
    for (j, (&induced, &own)) in upper.n.trace.weights().iter().zip(s).enumerate() {
        if (induced - own).abs() > 1e-9 {
            return Err(Error::NotMarkov(format!(
                "β·tr(x e_0) ≠ tr(x) for a minimal projection x in block {j}: {} vs {own}",
                induced
            )));
        }
    }
    // Same object on both sides so that bimodules over M match exactly.
    upper.n = incl.m.clone();
    let d = incl.n.algebra.dims();
    let blocks = upper
        .m
        .algebra
        .dims()
        .iter()
        .enumerate()
        .map(|(i, &ni)| {
            let mut g = Mat::zeros(ni, d[i]);
            for j in 0..mb {
                let amp = (s[j] / t[i]).sqrt();
                for cp in 0..lambda[j][i] {
                    let base = upper.segment_offset(i, j, cp) + incl.segment_offset(j, i, cp);
                    for p in 0..d[i] {
                        g[(base + p, p)] = c(amp);
                    }
                }
            }
            &g * g.adjoint()
        })
        .collect();
    Ok(BasicConstruction { upper, e: BlockMatrix::new(blocks) })
}

/// Coordinates of `L²(B)` regrouped as `⊕_i C^{n_i} ⊗ C^{d_i}` for `A ⊆ B ⊆ B₁`.
#[derive(Clone, Debug)]
struct BasicRep {
    /// For block `i` of `B₁`: GNS index of `(u, p)` at position `u·d_i + p`.
    maps: Vec<Vec<usize>>,
    dims: Vec<(usize, usize)>,
}

impl BasicRep {
    fn new(lower: &TracialInclusion, upper: &TracialInclusion) -> Self {
        let g = GnsSpace::new(&lower.m);
        let d = lower.n.algebra.dims();
        let dm = lower.m.algebra.dims();
        let mut maps = Vec::new();
        let mut dims = Vec::new();
        for (i, &ni) in upper.m.algebra.dims().iter().enumerate() {
            let mut map = vec![0; ni * d[i]];
            for j in 0..dm.len() {
                for cp in 0..lower.lambda()[j][i] {
                    let u0 = upper.segment_offset(i, j, cp);
                    let w0 = lower.segment_offset(j, i, cp);
                    for r in 0..dm[j] {
                        for p in 0..d[i] {
                            map[(u0 + r) * d[i] + p] = g.index(j, r, w0 + p);
                        }
                    }
                }
            }
            maps.push(map);
            dims.push((ni, d[i]));
        }
        Self { maps, dims }
    }

    fn apply(&self, x: &BlockMatrix, v: &Vector) -> Vector {
        let mut out = Vector::zeros(v.len());
        for (i, map) in self.maps.iter().enumerate() {
            let (ni, di) = self.dims[i];
            let vi = Mat::from_fn(ni, di, |u, p| v[map[u * di + p]]);
            let wi = &x.blocks[i] * vi;
            for u in 0..ni {
                for p in 0..di {
                    out[map[u * di + p]] = wi[(u, p)];
                }
            }
        }
        out
    }
}

/// `M₋₁ ⊆ M₀ ⊆ … ⊆ M_depth` with Jones projections `e_k ∈ M_{k+1}`.
#[derive(Clone, Debug)]
pub struct Tower {
    beta: f64,
    /// `inclusions[k]` is `M_{k-1} ⊆ M_k`.
    inclusions: Vec<TracialInclusion>,
    jones: Vec<BlockMatrix>,
    reps: Vec<BasicRep>,
}

/// Builds the tower to the given depth, refusing if `dim M_depth` exceeds `cap`.
pub fn jones_tower(incl: &TracialInclusion, depth: usize, cap: usize) -> Result<Tower> {
    let required = projected_dims(incl, depth).last().copied().unwrap_or(0);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let mut inclusions = vec![incl.clone()];
    let mut jones = Vec::new();
    let mut reps = Vec::new();
    for _ in 0..depth {
        let lower = inclusions.last().unwrap();
        let bc = basic_construction(lower)?;
        reps.push(BasicRep::new(lower, &bc.upper));
        jones.push(bc.e);
        inclusions.push(bc.upper);
    }
    Ok(Tower { beta: incl.beta(), inclusions, jones, reps })
}

/// `dim M_k` for `k = 0..=depth`, from block sizes alone.
pub fn projected_dims(incl: &TracialInclusion, depth: usize) -> Vec<usize> {
    let mut lower: Vec<usize> = incl.n.algebra.dims().to_vec();
    let mut upper: Vec<usize> = incl.m.algebra.dims().to_vec();
    let mut lambda = incl.lambda().clone();
    let mut out = vec![upper.iter().map(|d| d * d).sum()];
    for _ in 0..depth {
        let nb = lower.len();
        let transposed: Vec<Vec<usize>> = (0..nb).map(|i| (0..upper.len()).map(|j| lambda[j][i]).collect()).collect();
        let next: Vec<usize> = transposed.iter().map(|row| row.iter().zip(&upper).map(|(m, d)| m * d).sum()).collect();
        out.push(next.iter().map(|d| d * d).sum());
        lower = upper;
        upper = next;
        lambda = transposed;
    }
    out
}

impl Tower {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn depth(&self) -> usize {
        self.inclusions.len() - 1
    }

    /// `M_k` for `-1 ≤ k ≤ depth`.
    pub fn algebra(&self, k: isize) -> &TracialAlgebra {
        if k < 0 {
            &self.inclusions[0].n
        } else {
            &self.inclusions[k as usize].m
        }
    }

    /// `M_{k-1} ⊆ M_k`.
    pub fn inclusion(&self, k: usize) -> &TracialInclusion {
        &self.inclusions[k]
    }

    pub fn base_inclusion(&self) -> &TracialInclusion {
        &self.inclusions[0]
    }

    /// `e_k ∈ M_{k+1}`.
    pub fn e(&self, k: usize) -> &BlockMatrix {
        &self.jones[k]
    }

    /// `e_k` viewed in `M_level`.
    pub fn e_in(&self, k: usize, level: usize) -> BlockMatrix {
        self.embed(&self.jones[k], k as isize + 1, level as isize)
    }

    /// Embeds `x ∈ M_from` into `M_to`.
    pub fn embed(&self, x: &BlockMatrix, from: isize, to: isize) -> BlockMatrix {
        let mut y = x.clone();
        for k in (from + 1)..=to {
            y = self.inclusions[k as usize].embed(&y);
        }
        y
    }

    /// `E_k : M_k → M_{k-1}`.
    pub fn expectation(&self, k: usize, x: &BlockMatrix) -> BlockMatrix {
        self.inclusions[k].conditional_expectation(x)
    }

    /// Composite expectation `M_from → M_to`.
    pub fn expect_down(&self, x: &BlockMatrix, from: isize, to: isize) -> BlockMatrix {
        let mut y = x.clone();
        for k in ((to + 1)..=from).rev() {
            y = self.expectation(k as usize, &y);
        }
        y
    }

    pub fn tr(&self, k: isize, x: &BlockMatrix) -> f64 {
        self.algebra(k).tr(x).re
    }

    pub fn gns(&self, k: isize) -> GnsSpace {
        GnsSpace::new(self.algebra(k))
    }

    /// `x ∈ M_{k+1}` acting on `L²(M_k)`.
    pub fn basic_apply(&self, k: usize, x: &BlockMatrix, v: &Vector) -> Vector {
        self.reps[k].apply(x, v)
    }

    /// `e_k` acting on `L²(M_k)`: the projection onto `L²(M_{k-1})`.
    pub fn jones_apply(&self, k: usize, v: &Vector) -> Vector {
        let g = self.gns(k as isize);
        let x = g.from_vector(v.as_slice());
        g.to_vector(&self.inclusions[k].embed(&self.expectation(k, &x)))
    }

    /// The tower of `M ⊆ M₁ ⊆ …`, one level shorter.
    pub fn shift(&self) -> Result<Tower> {
        if self.depth() == 0 {
            return Err(Error::DepthInsufficient { required: 1, have: 0 });
        }
        Ok(Tower {
            beta: self.beta,
            inclusions: self.inclusions[1..].to_vec(),
            jones: self.jones[1..].to_vec(),
            reps: self.reps[1..].to_vec(),
        })
    }

    pub fn require_depth(&self, required: usize) -> Result<()> {
        if self.depth() < required {
            return Err(Error::DepthInsufficient { required, have: self.depth() });
        }
        Ok(())
    }

    /// `e_{n,m}` in `M_level`.
    pub fn chain(&self, n: usize, m: usize, level: usize) -> BlockMatrix {
        let idx: Vec<usize> = if n <= m { (n..=m).collect() } else { (m..=n).rev().collect() };
        let mut acc = self.algebra(level as isize).algebra.identity();
        for k in idx {
            acc = &acc * &self.e_in(k, level);
        }
        acc
    }

    /// Product of generators `e_{w₀} e_{w₁} …` in `M_level`.
    pub fn word(&self, w: &[usize], level: usize) -> BlockMatrix {
        w.iter().fold(self.algebra(level as isize).algebra.identity(), |acc, &k| &acc * &self.e_in(k, level))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_algebra::linalg::max_abs;

    #[test]
    fn scalars_in_c2_dims() {
        let inc = TracialInclusion::new(vec![1], vec![vec![1], vec![1]]).unwrap();
        let t = jones_tower(&inc, 3, DEFAULT_CAP).unwrap();
        let dims: Vec<usize> = (-1..=3).map(|k| t.algebra(k).dim()).collect();
        assert_eq!(dims, vec![1, 2, 4, 8, 16]);
        assert_eq!(projected_dims(&inc, 3), vec![2, 4, 8, 16]);
    }

    #[test]
    fn trivial_inclusion_has_identity_projection() {
        let inc = TracialInclusion::new(vec![2], vec![vec![1]]).unwrap();
        let t = jones_tower(&inc, 2, DEFAULT_CAP).unwrap();
        assert!(t.e(0).dist(&t.algebra(1).algebra.identity()) < 1e-12);
        assert_eq!(t.algebra(1).dim(), 4);
    }

    #[test]
    fn e0_projects_onto_l2n() {
        let inc = TracialInclusion::new(vec![1, 1], vec![vec![1, 1]]).unwrap();
        let t = jones_tower(&inc, 1, DEFAULT_CAP).unwrap();
        let g = t.gns(0);
        for b in 0..g.dim() {
            let mut v = Vector::zeros(g.dim());
            v[b] = c(1.0);
            let lhs = t.basic_apply(0, t.e(0), &v);
            assert!((lhs - t.jones_apply(0, &v)).norm() < 1e-12);
        }
        assert!((t.tr(1, t.e(0)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn basic_rep_is_multiplicative() {
        use rand::SeedableRng;
        let inc = TracialInclusion::new(vec![1, 1], vec![vec![1, 1]]).unwrap();
        let t = jones_tower(&inc, 2, DEFAULT_CAP).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = t.gns(1);
        let x = t.algebra(2).algebra.random_element(&mut rng);
        let y = t.algebra(2).algebra.random_element(&mut rng);
        let v = g.to_vector(&t.algebra(1).algebra.random_element(&mut rng));
        let lhs = t.basic_apply(1, &(&x * &y), &v);
        let rhs = t.basic_apply(1, &x, &t.basic_apply(1, &y, &v));
        assert!((lhs - rhs).norm() < 1e-10);
        // M₁ ⊆ M₂ acts by left multiplication.
        let m = t.algebra(1).algebra.random_element(&mut rng);
        let lhs = t.basic_apply(1, &t.embed(&m, 1, 2), &v);
        assert!((lhs - g.apply_left(&m, &v)).norm() < 1e-10);
        let _ = max_abs(&Mat::zeros(1, 1));
    }

    #[test]
    fn cap_is_enforced() {
        let inc = TracialInclusion::new(vec![1], vec![vec![2]]).unwrap();
        let err = jones_tower(&inc, 4, 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { required: 1024, cap: 100 }));
    }
}
