//! Intertwiner spaces and decomposition into irreducibles.

use super::{Action, Bimodule};
use crate::error::{Error, Result};
use crate::matrix_algebra::linalg::isotypic_components;
use crate::matrix_algebra::{c, Isotypic, Mat};

/// Which actions an intertwiner has to commute with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sides {
    Left,
    Right,
    Both,
}

/// Hilbert–Schmidt orthonormal basis of the intertwiners `H → K`.
#[derive(Clone, Debug)]
pub struct IntertwinerSpace {
    pub basis: Vec<Mat>,
}

impl IntertwinerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Isotypic components of `H` under the selected actions.
///
/// Both actions together form a representation of `P ⊗ Q^op`, whose matrix units are
/// `λ(E_ab) ρ(E_b'a')`; a right action reverses products, so `ρ(E_ba)` plays the role of `E_ab`.
fn components(h: &Bimodule, which: Sides) -> Vec<Isotypic> {
    let l = |a: &Action, j, r, s| a.apply(&a.algebra.algebra.unit(j, r, s));
    let ld = h.left.algebra.algebra.dims().to_vec();
    let rd = h.right.algebra.algebra.dims().to_vec();
    match which {
        Sides::Left => isotypic_components(&ld, h.dim(), |j, r, s| l(&h.left, j, r, s)),
        Sides::Right => isotypic_components(&rd, h.dim(), |j, r, s| l(&h.right, j, s, r)),
        Sides::Both => {
            let dims: Vec<usize> = ld.iter().flat_map(|&a| rd.iter().map(move |&b| a * b)).collect();
            isotypic_components(&dims, h.dim(), |j, r, s| {
                let (jl, jr) = (j / rd.len(), j % rd.len());
                let d = rd[jr];
                l(&h.left, jl, r / d, s / d) * l(&h.right, jr, s % d, r % d)
            })
        }
    }
}

fn acting_algebras_match(h: &Bimodule, k: &Bimodule, which: Sides) -> Result<()> {
    if matches!(which, Sides::Left | Sides::Both) && h.left.algebra != k.left.algebra {
        return Err(Error::Incompatible("left algebras differ".into()));
    }
    if matches!(which, Sides::Right | Sides::Both) && h.right.algebra != k.right.algebra {
        return Err(Error::Incompatible("right algebras differ".into()));
    }
    Ok(())
}

/// Basis of `{T : H → K commuting with the requested actions}`.
///
/// Every intertwiner maps copy `c′` of an isotypic component of `H` onto copies of the same
/// component of `K`; the maps `Σ_r |K_{c,r}⟩⟨H_{c′,r}|` span.
pub fn intertwiners(h: &Bimodule, k: &Bimodule, which: Sides) -> Result<IntertwinerSpace> {
    acting_algebras_match(h, k, which)?;
    let (ch, ck) = (components(h, which), components(k, which));
    let mut basis = Vec::new();
    for a in &ck {
        let Some(b) = ch.iter().find(|b| b.block == a.block) else { continue };
        let norm = c(1.0 / (a.copies[0].ncols() as f64).sqrt());
        for x in &a.copies {
            for y in &b.copies {
                basis.push(x * y.adjoint() * norm);
            }
        }
    }
    Ok(IntertwinerSpace { basis })
}

/// Whether a nonzero intertwiner of both actions exists.
pub fn equivalent(h: &Bimodule, k: &Bimodule) -> Result<bool> {
    acting_algebras_match(h, k, Sides::Both)?;
    let ch = components(h, Sides::Both);
    Ok(components(k, Sides::Both).iter().any(|a| ch.iter().any(|b| b.block == a.block)))
}

/// Irreducible classes of `H` with multiplicities; one representative per class.
pub fn decompose(h: &Bimodule) -> Result<Vec<(Bimodule, usize)>> {
    components(h, Sides::Both).into_iter().map(|iso| Ok((h.sub_bimodule(&iso.copies[0])?, iso.multiplicity()))).collect()
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::matrix_algebra::linalg::{hs_inner, max_abs};
    use crate::matrix_algebra::{TracialInclusion, C};

    /// Conditional expectation onto the commutant of one action:
    /// `X ↦ Σ_j d_j⁻¹ Σ_ab π_K(E_ab) X π_H(E_ba)`.
    fn twirl(on_h: &Action, on_k: &Action, anti: bool, x: &Mat) -> Mat {
        let alg = &on_h.algebra.algebra;
        let mut out = Mat::zeros(x.nrows(), x.ncols());
        for (j, &d) in alg.dims().iter().enumerate() {
            for a in 0..d {
                for b in 0..d {
                    let (p, q) = if anti { (alg.unit(j, b, a), alg.unit(j, a, b)) } else { (alg.unit(j, a, b), alg.unit(j, b, a)) };
                    out += on_k.apply(&p) * x * on_h.apply(&q) * c(1.0 / d as f64);
                }
            }
        }
        out
    }

    /// The twirled image of random matrices lies in the span of the basis and the basis is
    /// fixed by the twirl.
    fn agrees_with_twirl(h: &Bimodule, k: &Bimodule) {
        let sp = intertwiners(h, k, Sides::Both).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let both = |x: &Mat| twirl(&h.right, &k.right, true, &twirl(&h.left, &k.left, false, x));
        for b in &sp.basis {
            assert!(max_abs(&(both(b) - b)) < 1e-10);
        }
        for _ in 0..8 {
            let x = Mat::from_fn(k.dim(), h.dim(), |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let mut y = both(&x);
            for b in &sp.basis {
                y -= b * hs_inner(b, &y);
            }
            assert!(y.norm() < 1e-9);
        }
    }

    fn diag_bimodule() -> Bimodule {
        let inc = TracialInclusion::new(vec![1, 1], vec![vec![1, 1]]).unwrap();
        Bimodule::l2(&inc.m).restrict_left(&inc).unwrap().restrict_right(&inc).unwrap()
    }

    #[test]
    fn diagonal_l2_splits_into_four_lines() {
        let h = diag_bimodule();
        let parts = decompose(&h).unwrap();
        assert_eq!(parts.len(), 4);
        assert!(parts.iter().all(|(b, m)| b.dim() == 1 && *m == 1));
        assert_eq!(intertwiners(&h, &h, Sides::Both).unwrap().dim(), 4);
    }

    #[test]
    fn irreducible_has_scalar_commutant() {
        let inc = TracialInclusion::new(vec![1], vec![vec![2]]).unwrap();
        let h = Bimodule::l2(&inc.m);
        let sp = intertwiners(&h, &h, Sides::Both).unwrap();
        assert_eq!(sp.dim(), 1);
        let parts = decompose(&h).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1, 1);
        // Only one side: commutant of left M₂ on L²(M₂) is the right action, dimension 4.
        assert_eq!(intertwiners(&h, &h, Sides::Left).unwrap().dim(), 4);
    }

    #[test]
    fn basis_elements_intertwine() {
        let h = diag_bimodule();
        let sp = intertwiners(&h, &h, Sides::Both).unwrap();
        for t in &sp.basis {
            for u in h.left.units() {
                assert!(max_abs(&(t * &u - &u * t)) < 1e-10);
            }
            for u in h.right.units() {
                assert!(max_abs(&(t * &u - &u * t)) < 1e-10);
            }
        }
    }

    #[test]
    fn matches_twirl_oracle() {
        let h = diag_bimodule();
        agrees_with_twirl(&h, &h);
        let inc = TracialInclusion::new(vec![1, 1], vec![vec![1, 1], vec![2, 1]]).unwrap();
        let l2 = Bimodule::l2(&inc.m).restrict_left(&inc).unwrap();
        agrees_with_twirl(&l2, &l2);
        let both = l2.restrict_right(&inc).unwrap();
        agrees_with_twirl(&both, &both);
    }

    #[test]
    fn orthonormal_basis() {
        let inc = TracialInclusion::new(vec![1, 1], vec![vec![1, 1], vec![2, 1]]).unwrap();
        let h = Bimodule::l2(&inc.m).restrict_left(&inc).unwrap().restrict_right(&inc).unwrap();
        let b = intertwiners(&h, &h, Sides::Both).unwrap().basis;
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((hs_inner(x, y) - c(want)).norm() < 1e-10);
            }
        }
    }
}
