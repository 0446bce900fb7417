//! Relative tensor products, operator tensors, associators and unit maps.

use std::sync::Arc;

use super::{unit_vector, Action, Bimodule};
use crate::error::{Error, Result};
use crate::matrix_algebra::linalg::{hermitian_eigen, kron_mul, map_from_spanning, max_abs, IndependentSelector, Vector};
use crate::matrix_algebra::{c, Mat};

/// Relative eigenvalue cut below which the Gram form counts as zero.
pub const KERNEL_TOL: f64 = 1e-10;

/// `H ⊗_Q K`: the algebraic tensor product modulo the kernel of its Gram form.
///
/// Ambient coordinates use the Kronecker index `a·dim K + b`. The quotient carries an
/// orthonormal basis; `projection` sends ambient vectors to their classes and `lift` is a
/// right inverse of it.
#[derive(Clone, Debug)]
pub struct RelTensor {
    pub h: Bimodule,
    pub k: Bimodule,
    pub gram: Mat,
    pub projection: Arc<Mat>,
    pub lift: Arc<Mat>,
    pub module: Bimodule,
    pub min_gram_eigenvalue: f64,
}

/// Builds `H ⊗_Q K` for a right `Q`-module `H` and a left `Q`-module `K`, with the induced
/// left action of `H` and right action of `K`.
pub fn rel_tensor(h: &Bimodule, k: &Bimodule) -> Result<RelTensor> {
    let q = &h.right.algebra;
    if q != &k.left.algebra {
        return Err(Error::Incompatible("middle algebras of the tensor factors differ".into()));
    }
    let (dh, dk) = (h.dim(), k.dim());
    let n = dh * dk;
    let mut gram = Mat::zeros(n, n);
    for t in 0..q.dim() {
        let (j, _, _) = q.algebra.unit_index(t);
        let s = q.trace.weights()[j];
        let unit = q.algebra.unit_index(t);
        let e = q.algebra.unit(unit.0, unit.1, unit.2);
        gram += h.right.apply(&e).adjoint().kronecker(&k.left.apply(&e)) * c(1.0 / s);
    }
    gram = (&gram + gram.adjoint()) * c(0.5);
    let (vals, vecs) = hermitian_eigen(&gram);
    let top = vals.first().copied().unwrap_or(0.0);
    let bottom = vals.last().copied().unwrap_or(0.0);
    if bottom < -1e-9 * top.max(1.0) {
        return Err(Error::Numerical(format!("tensor Gram form has eigenvalue {bottom:.3e}")));
    }
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] > KERNEL_TOL * top).collect();
    let r = keep.len();
    let projection = Mat::from_fn(r, n, |i, a| vecs[(a, keep[i])].conj() * vals[keep[i]].sqrt());
    let lift = Mat::from_fn(n, r, |a, i| vecs[(a, keep[i])] / vals[keep[i]].sqrt());
    let (projection, lift) = (Arc::new(projection), Arc::new(lift));

    let (p1, l1, hl) = (projection.clone(), lift.clone(), h.left.clone());
    let left = Action::new(h.left.algebra.clone(), move |x| {
        &*p1 * kron_mul(&hl.apply(x), &Mat::identity(dk, dk), &l1)
    });
    let (p2, l2, kr) = (projection.clone(), lift.clone(), k.right.clone());
    let right = Action::new(k.right.algebra.clone(), move |x| {
        &*p2 * kron_mul(&Mat::identity(dh, dh), &kr.apply(x), &l2)
    });
    let module = Bimodule::new(r, left, right)?;
    Ok(RelTensor { h: h.clone(), k: k.clone(), gram, projection, lift, module, min_gram_eigenvalue: bottom })
}

impl RelTensor {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.h.dim() * self.k.dim()
    }

    /// Class of `ξ ⊗ η` in quotient coordinates.
    pub fn pure(&self, xi: &Vector, eta: &Vector) -> Vector {
        let dk = self.k.dim();
        let mut out = Vector::zeros(self.dim());
        for a in 0..xi.len() {
            if xi[a] == c(0.0) {
                continue;
            }
            let cols = self.projection.columns(a * dk, dk);
            out += (cols * eta) * xi[a];
        }
        out
    }

    /// Class of `e_a ⊗ η` for a basis vector of `H`.
    pub fn pure_basis_left(&self, a: usize, eta: &Vector) -> Vector {
        self.projection.columns(a * self.k.dim(), self.k.dim()) * eta
    }

    /// `⟨ξ₁⊗η₁, ξ₂⊗η₂⟩` from the Gram form, i.e. `⟨⟨ξ₁,ξ₂⟩_r.η₁, η₂⟩`.
    pub fn inner(&self, xi1: &Vector, eta1: &Vector, xi2: &Vector, eta2: &Vector) -> crate::matrix_algebra::C {
        let v = xi1.kronecker(eta1);
        let w = xi2.kronecker(eta2);
        w.dotc(&(&self.gram * v))
    }

    /// The other formula, `⟨ξ₁.⟨η₁,η₂⟩_l, ξ₂⟩`.
    pub fn inner_alt(&self, xi1: &Vector, eta1: &Vector, xi2: &Vector, eta2: &Vector) -> Result<crate::matrix_algebra::C> {
        let q = self.k.q_inner_left(eta1, eta2)?;
        let v = self.h.right.apply(&q) * xi1;
        Ok(xi2.dotc(&v))
    }

    /// Through the right inner product, `⟨⟨ξ₁,ξ₂⟩_r.η₁, η₂⟩`.
    pub fn inner_right_route(&self, xi1: &Vector, eta1: &Vector, xi2: &Vector, eta2: &Vector) -> Result<crate::matrix_algebra::C> {
        let q = self.h.q_inner_right(xi1, xi2)?;
        let v = self.k.left.apply(&q) * eta1;
        Ok(eta2.dotc(&v))
    }
}

/// `A ⊗_Q B` between quotients; `A` must be right `Q`-linear and `B` left `Q`-linear.
pub fn op_tensor(src: &RelTensor, dst: &RelTensor, a: &Mat, b: &Mat) -> Result<Mat> {
    let q = &src.h.right.algebra;
    if q != &dst.h.right.algebra {
        return Err(Error::Incompatible("tensor products over different algebras".into()));
    }
    if a.shape() != (dst.h.dim(), src.h.dim()) || b.shape() != (dst.k.dim(), src.k.dim()) {
        return Err(Error::Incompatible("operator shapes do not match the tensor factors".into()));
    }
    for u in q.algebra.basis() {
        let ra = a * src.h.right.apply(&u) - dst.h.right.apply(&u) * a;
        let lb = b * src.k.left.apply(&u) - dst.k.left.apply(&u) * b;
        let tol = 1e-8 * (1.0 + max_abs(a) + max_abs(b));
        if max_abs(&ra) > tol {
            return Err(Error::NotEquivariant("left operator is not right-linear over the middle algebra".into()));
        }
        if max_abs(&lb) > tol {
            return Err(Error::NotEquivariant("right operator is not left-linear over the middle algebra".into()));
        }
    }
    Ok(&*dst.projection * kron_mul(a, b, &src.lift))
}

/// A linear map defined on a spanning family, with its well-definedness residual.
#[derive(Clone, Debug)]
pub struct SpanningMap {
    pub map: Mat,
    pub residual: f64,
}

/// Builds the map sending `src(i)` to `tgt(i)` for `i < count`.
///
/// Picks a basis among the sources, solves on it, and measures the residual on up to
/// `check` further members of the family.
pub fn spanning_map(
    src_dim: usize,
    count: usize,
    check: usize,
    src: impl Fn(usize) -> Vector,
    tgt: impl Fn(usize) -> Vector,
) -> Result<SpanningMap> {
    let mut sel = IndependentSelector::new(src_dim, 1e-8);
    let mut rejected = Vec::new();
    for i in 0..count {
        if sel.is_full() {
            break;
        }
        let v = src(i);
        if !sel.offer(i, &v) && rejected.len() < check {
            rejected.push(i);
        }
    }
    if !sel.is_full() {
        return Err(Error::Numerical(format!(
            "spanning family has rank {} < {src_dim}",
            sel.chosen.len()
        )));
    }
    let mut idx = sel.chosen.clone();
    let stride = (count / check.max(1)).max(1);
    let mut extra: Vec<usize> = rejected;
    extra.extend((0..count).step_by(stride).filter(|i| !sel.chosen.contains(i)));
    extra.sort_unstable();
    extra.dedup();
    extra.truncate(check);
    idx.extend(extra);
    let s = Mat::from_columns(&idx.iter().map(|&i| src(i)).collect::<Vec<_>>());
    let t = Mat::from_columns(&idx.iter().map(|&i| tgt(i)).collect::<Vec<_>>());
    let (map, residual) = map_from_spanning(&s, &t)?;
    Ok(SpanningMap { map, residual })
}

/// The unitary `(H ⊗_Q K) ⊗_P L → H ⊗_Q (K ⊗_P L)`.
#[derive(Clone, Debug)]
pub struct Associator {
    pub hk: RelTensor,
    pub kl: RelTensor,
    /// `(H ⊗ K) ⊗ L`
    pub left: RelTensor,
    /// `H ⊗ (K ⊗ L)`
    pub right: RelTensor,
    pub unitary: Mat,
    pub residual: f64,
}

pub fn associator(h: &Bimodule, k: &Bimodule, l: &Bimodule) -> Result<Associator> {
    let hk = rel_tensor(h, k)?;
    let kl = rel_tensor(k, l)?;
    let left = rel_tensor(&hk.module, l)?;
    let right = rel_tensor(h, &kl.module)?;
    if left.dim() != right.dim() {
        return Err(Error::ModelViolation(format!(
            "associated tensor products have dimensions {} and {}",
            left.dim(),
            right.dim()
        )));
    }
    let (dh, dk, dl) = (h.dim(), k.dim(), l.dim());
    let split = |i: usize| (i / (dk * dl), (i / dl) % dk, i % dl);
    let m = spanning_map(
        left.dim(),
        dh * dk * dl,
        64,
        |i| {
            let (a, b, cc) = split(i);
            left.pure(&hk.pure_basis_left(a, &unit_vector(dk, b)), &unit_vector(dl, cc))
        },
        |i| {
            let (a, b, cc) = split(i);
            right.pure_basis_left(a, &kl.pure_basis_left(b, &unit_vector(dl, cc)))
        },
    )?;
    Ok(Associator { hk, kl, left, right, unitary: m.map, residual: m.residual })
}

/// `l_H: L²(Q) ⊗_Q H → H` or `r_H: H ⊗_Q L²(Q) → H` with its tensor space.
#[derive(Clone, Debug)]
pub struct UnitMap {
    pub space: RelTensor,
    pub unitary: Mat,
    pub residual: f64,
}

/// `l_H(q̄ ⊗ ξ) = q.ξ`.
pub fn unit_left(h: &Bimodule) -> Result<UnitMap> {
    let q = h.left.algebra.clone();
    let space = rel_tensor(&Bimodule::l2(&q), h)?;
    let dh = h.dim();
    let m = spanning_map(
        space.dim(),
        q.dim() * dh,
        64,
        |i| space.pure_basis_left(i / dh, &unit_vector(dh, i % dh)),
        |i| h.left.apply(&q.orthonormal_unit(i / dh)).column(i % dh).into_owned(),
    )?;
    Ok(UnitMap { space, unitary: m.map, residual: m.residual })
}

/// `r_H(ξ ⊗ q̄) = ξ.q`.
pub fn unit_right(h: &Bimodule) -> Result<UnitMap> {
    let q = h.right.algebra.clone();
    let space = rel_tensor(h, &Bimodule::l2(&q))?;
    let dq = q.dim();
    let m = spanning_map(
        space.dim(),
        h.dim() * dq,
        64,
        |i| space.pure_basis_left(i / dq, &unit_vector(dq, i % dq)),
        |i| h.right.apply(&q.orthonormal_unit(i % dq)).column(i / dq).into_owned(),
    )?;
    Ok(UnitMap { space, unitary: m.map, residual: m.residual })
}
