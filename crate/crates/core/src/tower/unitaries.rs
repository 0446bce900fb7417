//! Relative tensor powers of `L²(M)` and the unitaries `U_k : L²(M)^{⊗_N k} → L²(M_{k-1})`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Tower;
use crate::bimodule::{op_tensor, rel_tensor, spanning_map, Bimodule, RelTensor};
use crate::error::{Error, Result};
use crate::matrix_algebra::linalg::{max_abs, Vector};
use crate::matrix_algebra::{c, BlockMatrix, Mat, TracialInclusion};

/// Extra spanning vectors used to measure well-definedness of maps given on pure tensors.
const SPAN_CHECK: usize = 32;

/// Left-bracketed relative tensor product `((H₁ ⊗ H₂) ⊗ H₃) ⊗ …`.
///
/// With `middle = Some(N ⊆ Q)` every factor is a `(Q, Q)`-bimodule and the products are
/// taken over `N`; otherwise consecutive factors must already share their middle algebra.
#[derive(Clone, Debug)]
pub struct TensorPower {
    factors: Vec<Bimodule>,
    /// `middles[j]` sits between factors `j` and `j + 1`.
    middles: Vec<Option<TracialInclusion>>,
    /// `stages[j]` is `H₁ ⊗ … ⊗ H_{j+2}`.
    stages: Vec<RelTensor>,
}

impl TensorPower {
    pub fn new(factors: Vec<Bimodule>, middle: Option<TracialInclusion>) -> Result<Self> {
        let middles = vec![middle; factors.len().saturating_sub(1)];
        Self::with_middles(factors, middles)
    }

    /// A different middle restriction at each step.
    pub fn with_middles(factors: Vec<Bimodule>, middles: Vec<Option<TracialInclusion>>) -> Result<Self> {
        if factors.is_empty() || middles.len() + 1 != factors.len() {
            return Err(Error::Incompatible("tensor power needs one middle per adjacent pair of factors".into()));
        }
        let mut stages: Vec<RelTensor> = Vec::new();
        for (f, middle) in factors[1..].iter().zip(&middles) {
            let prev = stages.last().map_or(&factors[0], |s| &s.module);
            let st = match middle {
                Some(incl) => rel_tensor(&prev.restrict_right(incl)?, &f.restrict_left(incl)?)?,
                None => rel_tensor(prev, f)?,
            };
            stages.push(st);
        }
        Ok(Self { factors, middles, stages })
    }

    /// `L²(M)^{⊗_N n}` for the base inclusion of the tower.
    pub fn of_tower(t: &Tower, n: usize) -> Result<Self> {
        let l2 = Bimodule::l2(t.algebra(0));
        Self::new(vec![l2; n.max(1)], Some(t.base_inclusion().clone()))
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> usize {
        self.module().dim()
    }

    pub fn factor(&self, j: usize) -> &Bimodule {
        &self.factors[j]
    }

    /// The whole product as a bimodule.
    pub fn module(&self) -> &Bimodule {
        self.stages.last().map_or(&self.factors[0], |s| &s.module)
    }

    /// `H₁ ⊗ … ⊗ H_j` as a relative tensor product; `j ≥ 2`.
    pub fn stage(&self, j: usize) -> &RelTensor {
        &self.stages[j - 2]
    }

    /// Number of pure tensors of basis vectors.
    pub fn pure_count(&self) -> usize {
        self.factors.iter().map(Bimodule::dim).product()
    }

    /// Digits of the `i`-th pure basis tensor, first factor most significant.
    pub fn multi_index(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for j in (0..self.n()).rev() {
            let d = self.factors[j].dim();
            out[j] = i % d;
            i /= d;
        }
        out
    }

    pub fn pure(&self, vs: &[Vector]) -> Vector {
        let mut v = vs[0].clone();
        for (j, w) in vs.iter().enumerate().skip(1) {
            v = self.stage(j + 1).pure(&v, w);
        }
        v
    }

    pub fn pure_basis(&self, idx: &[usize]) -> Vector {
        let vs: Vec<Vector> = idx.iter().enumerate().map(|(j, &a)| unit(self.factors[j].dim(), a)).collect();
        self.pure(&vs)
    }

    /// `1 ⊗ … ⊗ A ⊗ … ⊗ 1` with `A` in slot `slot`; `A` must commute with the middle actions.
    pub fn slot_operator(&self, slot: usize, a: &Mat) -> Result<Mat> {
        let id = |j: usize| Mat::identity(self.factors[j].dim(), self.factors[j].dim());
        let mut acc = if slot == 0 { a.clone() } else { id(0) };
        for j in 1..self.n() {
            let b = if slot == j { a.clone() } else { id(j) };
            let st = self.stage(j + 1);
            acc = op_tensor(st, st, &acc, &b)?;
        }
        Ok(acc)
    }

    /// An operator on `H_s ⊗ H_{s+1}` (in the coordinates of the two-fold product) placed on
    /// slots `s, s+1`. Returns the operator and its well-definedness residual.
    pub fn pair_operator(&self, slot: usize, op: &Mat) -> Result<(Mat, f64)> {
        let pair = TensorPower::new(self.factors[slot..slot + 2].to_vec(), self.middles[slot].clone())?;
        let lift = &*pair.stage(2).lift;
        let dk = self.factors[slot + 1].dim();
        let m = spanning_map(
            self.dim(),
            self.pure_count(),
            SPAN_CHECK,
            |i| self.pure_basis(&self.multi_index(i)),
            |i| {
                let idx = self.multi_index(i);
                let amb = lift * (op * pair.pure_basis(&idx[slot..slot + 2]));
                let mut out = Vector::zeros(self.dim());
                let mut digits = idx.clone();
                for (ab, z) in amb.iter().enumerate() {
                    if z.norm() < 1e-15 {
                        continue;
                    }
                    digits[slot] = ab / dk;
                    digits[slot + 1] = ab % dk;
                    out += self.pure_basis(&digits) * *z;
                }
                out
            },
        )?;
        Ok((m.map, m.residual))
    }
}

fn unit(n: usize, k: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[k] = c(1.0);
    v
}

/// A unitary with its construction residuals.
#[derive(Clone, Debug)]
pub struct Unitary {
    pub matrix: Mat,
    /// `max(‖U*U − 1‖, ‖UU* − 1‖)`.
    pub unitarity: f64,
    /// Well-definedness of the map on the spanning family.
    pub definition: f64,
}

impl Unitary {
    fn new(matrix: Mat, definition: f64) -> Self {
        let unitarity = unitarity_residual(&matrix);
        Self { matrix, unitarity, definition }
    }
}

pub(crate) fn unitarity_residual(u: &Mat) -> f64 {
    let a = max_abs(&(u.adjoint() * u - Mat::identity(u.ncols(), u.ncols())));
    let b = max_abs(&(u * u.adjoint() - Mat::identity(u.nrows(), u.nrows())));
    a.max(b)
}

/// Elements of `M` behind the orthonormal basis of `L²(M)`.
pub(crate) fn l2_basis_elements(t: &Tower, level: isize) -> Vec<BlockMatrix> {
    let g = t.gns(level);
    (0..g.dim()).map(|a| g.from_vector(unit(g.dim(), a).as_slice())).collect()
}

fn check_rank(space: usize, target: usize, what: &str) -> Result<()> {
    if space != target {
        return Err(Error::ModelViolation(format!(
            "{what}: tensor quotient has dimension {space} but the target has {target}"
        )));
    }
    Ok(())
}

/// `U₂ : m̄₁ ⊗_N m̄₂ ↦ β^{1/2} (m₁ e₀ m₂)‾`, built on pure tensors of basis vectors.
pub fn build_u2(t: &Tower) -> Result<Unitary> {
    t.require_depth(1)?;
    let space = TensorPower::of_tower(t, 2)?;
    let g1 = t.gns(1);
    check_rank(space.dim(), g1.dim(), "U_2")?;
    let xs: Vec<BlockMatrix> = l2_basis_elements(t, 0).iter().map(|x| t.embed(x, 0, 1)).collect();
    let e0 = t.e(0);
    let s = c(t.beta().sqrt());
    let m = spanning_map(
        space.dim(),
        space.pure_count(),
        SPAN_CHECK,
        |i| space.pure_basis(&space.multi_index(i)),
        |i| {
            let idx = space.multi_index(i);
            g1.to_vector(&(&(&xs[idx[0]] * e0) * &xs[idx[1]])) * s
        },
    )?;
    Ok(Unitary::new(m.map, m.residual))
}

/// How `L²(M)^{⊗_N k}` is regrouped into `(L²(M) ⊗_N L²(M))^{⊗_M (k-1)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regrouping {
    /// `x̄ᵢ = x̄ᵢ ⊗_M 1̄` for the middle factors.
    UnitRight,
    /// `x̄ᵢ = 1̄ ⊗_M x̄ᵢ`.
    UnitLeft,
}

/// `U_k` through `U_k = V_k ∘ U₂^{⊗_M (k-1)}`, with `V_k = U(k-1; M, M₁)` from the shifted tower.
pub fn build_uk(t: &Tower, k: usize, how: Regrouping) -> Result<Unitary> {
    if k == 0 {
        return Err(Error::Incompatible("U_k needs k ≥ 1".into()));
    }
    t.require_depth(k - 1)?;
    if k == 1 {
        let d = t.gns(0).dim();
        return Ok(Unitary::new(Mat::identity(d, d), 0.0));
    }
    let u2 = build_u2(t)?;
    if k == 2 {
        return Ok(u2);
    }
    let src = TensorPower::of_tower(t, k)?;
    let pair = TensorPower::of_tower(t, 2)?;
    let grouped = TensorPower::new(vec![pair.module().clone(); k - 1], None)?;
    let one = t.gns(0).one();
    let e = |a: usize| unit(src.factor(0).dim(), a);
    let phi = spanning_map(
        src.dim(),
        src.pure_count(),
        SPAN_CHECK,
        |i| src.pure_basis(&src.multi_index(i)),
        |i| {
            let x = src.multi_index(i);
            let groups: Vec<Vector> = match how {
                Regrouping::UnitRight => std::iter::once(pair.pure(&[e(x[0]), e(x[1])]))
                    .chain(x[2..].iter().map(|&a| pair.pure(&[one.clone(), e(a)])))
                    .collect(),
                Regrouping::UnitLeft => x[..k - 2]
                    .iter()
                    .map(|&a| pair.pure(&[e(a), one.clone()]))
                    .chain(std::iter::once(pair.pure(&[e(x[k - 2]), e(x[k - 1])])))
                    .collect(),
            };
            grouped.pure(&groups)
        },
    )?;
    let shifted = t.shift()?;
    let dst = TensorPower::of_tower(&shifted, k - 1)?;
    check_rank(grouped.dim(), dst.dim(), "U_2 tensor power")?;
    let mut tensored = u2.matrix.clone();
    for j in 2..k {
        tensored = op_tensor(grouped.stage(j), dst.stage(j), &tensored, &u2.matrix)?;
    }
    let v = build_uk(&shifted, k - 1, how)?;
    let matrix = &v.matrix * tensored * &phi.map;
    let definition = phi.residual.max(u2.definition).max(v.definition);
    Ok(Unitary::new(matrix, definition))
}

/// Which displayed form of the closed formula for `U_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `x₁ e₀ x₂ e_{1,0} x₃ e_{2,0} … x_{k-1} e_{k-2,0} x_k`
    Descending,
    /// `x₁ e_{0,k-2} x₂ e_{0,k-3} … x_{k-1} e₀ x_k`
    Ascending,
}

/// `U_k` from its closed formula with scalar `β^{k(k-1)/4}`.
pub fn closed_uk(t: &Tower, k: usize, form: ClosedForm) -> Result<Unitary> {
    if k == 0 {
        return Err(Error::Incompatible("U_k needs k ≥ 1".into()));
    }
    t.require_depth(k - 1)?;
    let level = k - 1;
    let space = TensorPower::of_tower(t, k)?;
    let g = t.gns(level as isize);
    let xs: Vec<BlockMatrix> = l2_basis_elements(t, 0).iter().map(|x| t.embed(x, 0, level as isize)).collect();
    let chains: Vec<BlockMatrix> = (0..k.saturating_sub(1))
        .map(|j| match form {
            ClosedForm::Descending => t.chain(j, 0, level),
            ClosedForm::Ascending => t.chain(0, k - 2 - j, level),
        })
        .collect();
    let s = c(t.beta().powf((k * (k - 1)) as f64 / 4.0));
    let m = spanning_map(
        space.dim(),
        space.pure_count(),
        SPAN_CHECK,
        |i| space.pure_basis(&space.multi_index(i)),
        |i| {
            let idx = space.multi_index(i);
            let mut acc = xs[idx[0]].clone();
            for j in 1..k {
                acc = &(&acc * &chains[j - 1]) * &xs[idx[j]];
            }
            g.to_vector(&acc) * s
        },
    )?;
    Ok(Unitary::new(m.map, m.residual))
}

/// Residuals of `(M, M)`-linearity of a map `T_k → L²(M_level)` on seeded random elements.
pub fn bimodule_linearity(t: &Tower, space: &TensorPower, u: &Mat, level: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = t.gns(level as isize);
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let m = t.algebra(0).algebra.random_element(&mut rng);
        let up = t.embed(&m, 0, level as isize);
        let l = u * space.module().left.apply(&m) - g.left(&up) * u;
        let r = u * space.module().right.apply(&m) - g.right(&up) * u;
        worst = worst.max(max_abs(&l)).max(max_abs(&r));
    }
    worst
}
