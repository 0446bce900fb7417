//! Finite-dimensional bimodules over multi-matrix algebras and their tensor calculus.
//!
//! Every vector is left and right bounded in finite dimension, so `D_l` and `D_r` are the
//! whole space and the Hausdorff completion of the algebraic tensor product is the quotient
//! by the kernel of its Gram form.

mod intertwiner;
mod tensor;

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix_algebra::linalg::{max_abs, Vector};
use crate::matrix_algebra::{c, BlockMatrix, GnsSpace, Mat, TracialAlgebra, TracialInclusion};

pub use intertwiner::{decompose, equivalent, intertwiners, IntertwinerSpace, Sides};
pub use tensor::{
    associator, op_tensor, rel_tensor, spanning_map, unit_left, unit_right, Associator, RelTensor, SpanningMap, UnitMap,
};

pub const EQUIVARIANCE_TOL: f64 = 1e-9;

type ActionFn = Arc<dyn Fn(&BlockMatrix) -> Mat + Send + Sync>;

/// A representation of a tracial algebra by matrices on the module's space.
#[derive(Clone)]
pub struct Action {
    pub algebra: TracialAlgebra,
    f: ActionFn,
}

impl Action {
    pub fn new(algebra: TracialAlgebra, f: impl Fn(&BlockMatrix) -> Mat + Send + Sync + 'static) -> Self {
        Self { algebra, f: Arc::new(f) }
    }

    pub fn apply(&self, x: &BlockMatrix) -> Mat {
        (self.f)(x)
    }

    /// Images of the matrix units, in basis order.
    pub fn units(&self) -> Vec<Mat> {
        self.algebra.algebra.basis().iter().map(|u| self.apply(u)).collect()
    }

    /// Precomposition with the embedding of the smaller algebra.
    pub fn restrict(&self, incl: &TracialInclusion) -> Result<Self> {
        if incl.m.algebra != self.algebra.algebra {
            return Err(Error::Incompatible("inclusion target differs from acting algebra".into()));
        }
        let f = self.f.clone();
        let incl = incl.clone();
        Ok(Self::new(incl.n.clone(), move |x| f(&incl.embed(x))))
    }

    fn map(&self, g: impl Fn(Mat) -> Mat + Send + Sync + 'static) -> Self {
        let f = self.f.clone();
        Self::new(self.algebra.clone(), move |x| g(f(x)))
    }
}

/// A `(P, Q)`-bimodule with orthonormal coordinates; `right(q)` is `ξ ↦ ξ.q`.
#[derive(Clone)]
pub struct Bimodule {
    dim: usize,
    pub left: Action,
    pub right: Action,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bimodule")
            .field("dim", &self.dim)
            .field("left", &self.left.algebra.algebra.dims())
            .field("right", &self.right.algebra.algebra.dims())
            .finish()
    }
}

impl Bimodule {
    /// Checks on seeded random elements that the actions are unital *-representations,
    /// that `λ` is multiplicative, `ρ` anti-multiplicative, and that they commute.
    pub fn new(dim: usize, left: Action, right: Action) -> Result<Self> {
        let b = Self { dim, left, right };
        b.check(EQUIVARIANCE_TOL)?;
        Ok(b)
    }

    fn check(&self, tol: f64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let id = Mat::identity(self.dim, self.dim);
        let scale = |m: &Mat| tol * (1.0 + max_abs(m));
        for (name, act, anti) in [("left", &self.left, false), ("right", &self.right, true)] {
            let alg = &act.algebra.algebra;
            let one = act.apply(&alg.identity());
            if one.shape() != (self.dim, self.dim) || max_abs(&(&one - &id)) > tol {
                return Err(Error::NotModule(format!("{name} action is not unital")));
            }
            let x = alg.random_element(&mut rng);
            let y = alg.random_element(&mut rng);
            let (ax, ay) = (act.apply(&x), act.apply(&y));
            let prod = act.apply(&(&x * &y));
            let expected = if anti { &ay * &ax } else { &ax * &ay };
            if max_abs(&(&prod - &expected)) > scale(&expected) {
                return Err(Error::NotModule(format!("{name} action does not respect products")));
            }
            if max_abs(&(act.apply(&x.adjoint()) - ax.adjoint())) > scale(&ax) {
                return Err(Error::NotModule(format!("{name} action does not respect adjoints")));
            }
        }
        for _ in 0..2 {
            let p = self.left.apply(&self.left.algebra.algebra.random_element(&mut rng));
            let q = self.right.apply(&self.right.algebra.algebra.random_element(&mut rng));
            let comm = &p * &q - &q * &p;
            if max_abs(&comm) > tol * (1.0 + max_abs(&p) * max_abs(&q)) {
                return Err(Error::NotEquivariant("left and right actions do not commute".into()));
            }
        }
        Ok(())
    }

    /// `L²(Q)` as a `(Q, Q)`-bimodule.
    pub fn l2(q: &TracialAlgebra) -> Self {
        let g = GnsSpace::new(q);
        let g2 = g.clone();
        Self {
            dim: g.dim(),
            left: Action::new(q.clone(), move |x| g.left(x)),
            right: Action::new(q.clone(), move |x| g2.right(x)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Left bounded vectors; all of them at finite dimension.
    pub fn d_left(&self) -> usize {
        self.dim
    }

    /// Right bounded vectors; all of them at finite dimension.
    pub fn d_right(&self) -> usize {
        self.dim
    }

    pub fn restrict_left(&self, incl: &TracialInclusion) -> Result<Self> {
        Ok(Self { dim: self.dim, left: self.left.restrict(incl)?, right: self.right.clone() })
    }

    pub fn restrict_right(&self, incl: &TracialInclusion) -> Result<Self> {
        Ok(Self { dim: self.dim, left: self.left.clone(), right: self.right.restrict(incl)? })
    }

    /// The conjugate `(Q, P)`-bimodule on the same coordinates (read as `conj(ξ)`):
    /// `λ̄(q) = conj ρ(q*)` and `ρ̄(p) = conj λ(p*)`.
    pub fn conjugate(&self) -> Self {
        let (l, r) = (self.left.f.clone(), self.right.f.clone());
        Self {
            dim: self.dim,
            left: Action::new(self.right.algebra.clone(), move |q| r(&q.adjoint()).map(|z| z.conj())),
            right: Action::new(self.left.algebra.clone(), move |p| l(&p.adjoint()).map(|z| z.conj())),
        }
    }

    /// The sub-bimodule on the span of the orthonormal columns of `basis`, which must be
    /// invariant under both actions.
    pub fn sub_bimodule(&self, basis: &Mat) -> Result<Self> {
        let b = Arc::new(basis.clone());
        let (b1, b2) = (b.clone(), b.clone());
        let sub = Self {
            dim: basis.ncols(),
            left: self.left.map(move |m| b1.adjoint() * m * &*b1),
            right: self.right.map(move |m| b2.adjoint() * m * &*b2),
        };
        sub.check(1e-8)?;
        Ok(sub)
    }

    /// `R_l(η): x̄ ↦ x.η` from `L²(P)`, in the orthonormal GNS basis.
    pub fn bounded_operator_left(&self, eta: &Vector) -> Mat {
        let alg = &self.left.algebra;
        let cols: Vec<Vector> = (0..alg.dim()).map(|t| self.left.apply(&alg.orthonormal_unit(t)) * eta).collect();
        Mat::from_columns(&cols)
    }

    /// `R_r(ξ): x̄ ↦ ξ.x` from `L²(Q)`.
    pub fn bounded_operator_right(&self, xi: &Vector) -> Mat {
        let alg = &self.right.algebra;
        let cols: Vec<Vector> = (0..alg.dim()).map(|t| self.right.apply(&alg.orthonormal_unit(t)) * xi).collect();
        Mat::from_columns(&cols)
    }

    /// `⟨η₁, η₂⟩_l`, the element of `P` whose left multiplication is `J R_l(η₁)* R_l(η₂) J`.
    pub fn q_inner_left(&self, eta1: &Vector, eta2: &Vector) -> Result<BlockMatrix> {
        let g = GnsSpace::new(&self.left.algebra);
        let r1 = self.bounded_operator_left(eta1);
        let r2 = self.bounded_operator_left(eta2);
        let op = g.conjugate_by_j(&(r1.adjoint() * r2));
        let q = g.from_vector(g.apply_j(&(r1.adjoint() * eta2)).as_slice());
        check_left_multiplication(&g, &op, &q)?;
        Ok(q)
    }

    /// `⟨ξ₁, ξ₂⟩_r`, the element of `Q` whose left multiplication is `R_r(ξ₂)* R_r(ξ₁)`.
    pub fn q_inner_right(&self, xi1: &Vector, xi2: &Vector) -> Result<BlockMatrix> {
        let g = GnsSpace::new(&self.right.algebra);
        let r1 = self.bounded_operator_right(xi1);
        let r2 = self.bounded_operator_right(xi2);
        let op = r2.adjoint() * r1;
        let q = g.from_vector((r2.adjoint() * xi1).as_slice());
        check_left_multiplication(&g, &op, &q)?;
        Ok(q)
    }
}

fn check_left_multiplication(g: &GnsSpace, op: &Mat, q: &BlockMatrix) -> Result<()> {
    let res = max_abs(&(op - g.left(q)));
    if res > 1e-8 * (1.0 + max_abs(op)) {
        return Err(Error::NotModule(format!("inner product is not left multiplication (residual {res:.3e})")));
    }
    Ok(())
}

/// The vector `x̄` of `L²` for an element, scaled to match `Bimodule::l2`.
pub fn l2_vector(q: &TracialAlgebra, x: &BlockMatrix) -> Vector {
    GnsSpace::new(q).to_vector(x)
}

pub(crate) fn unit_vector(n: usize, k: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[k] = c(1.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_algebra::TracialInclusion;

    fn diag_in_m2() -> TracialInclusion {
        TracialInclusion::new(vec![1, 1], vec![vec![1, 1]]).unwrap()
    }

    #[test]
    fn l2_is_a_bimodule() {
        let inc = diag_in_m2();
        let h = Bimodule::l2(&inc.m);
        assert!(h.check(1e-12).is_ok());
        let hn = h.restrict_left(&inc).unwrap().restrict_right(&inc).unwrap();
        assert!(hn.check(1e-12).is_ok());
        assert_eq!(hn.left.algebra.algebra.dims(), &[1, 1]);
    }

    #[test]
    fn non_commuting_actions_rejected() {
        let q = TracialAlgebra::full_matrix(2).unwrap();
        let g = GnsSpace::new(&q);
        let g2 = g.clone();
        let left = Action::new(q.clone(), move |x| g.left(x));
        let wrong_right = Action::new(q.clone(), move |x| g2.left(&x.adjoint()).adjoint());
        assert!(Bimodule::new(4, left, wrong_right).is_err());
    }

    #[test]
    fn bounded_operators_of_one() {
        let q = TracialAlgebra::full_matrix(2).unwrap();
        let h = Bimodule::l2(&q);
        let one = GnsSpace::new(&q).one();
        assert!(max_abs(&(h.bounded_operator_left(&one) - Mat::identity(4, 4))) < 1e-12);
        let inner = h.q_inner_left(&one, &one).unwrap();
        assert!(inner.dist(&q.algebra.identity()) < 1e-12);
        let inner = h.q_inner_right(&one, &one).unwrap();
        assert!(inner.dist(&q.algebra.identity()) < 1e-12);
    }

    #[test]
    fn conjugate_is_involutive() {
        let inc = diag_in_m2();
        let h = Bimodule::l2(&inc.m).restrict_left(&inc).unwrap();
        let hbar = h.conjugate();
        assert!(hbar.check(1e-12).is_ok());
        assert_eq!(hbar.left.algebra.algebra.dims(), &[2]);
        let back = hbar.conjugate();
        let x = inc.n.algebra.unit(1, 0, 0);
        assert!(max_abs(&(back.left.apply(&x) - h.left.apply(&x))) < 1e-14);
    }
}
