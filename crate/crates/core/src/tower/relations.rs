//! Numerical check of the relations satisfied by the Jones projections.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{projected_dims, Tower};
use crate::matrix_algebra::linalg::IndependentSelector;
use crate::matrix_algebra::{c, BlockMatrix};
use crate::params;
use crate::report::Report;

const SAMPLES: usize = 4;
const GENERATION_LIMIT: usize = 64;

/// Residuals of projection, (E1)–(E4), Markov and generation relations at every level.
pub fn verify_tower_relations(t: &Tower, tol: f64, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new();
    let depth = t.depth();
    let beta_inv = c(1.0 / t.beta());

    let expected = projected_dims(t.base_inclusion(), depth);
    let actual: Vec<usize> = (0..=depth).map(|k| t.algebra(k as isize).dim()).collect();
    r.exact("dimensions", params! {"expected" => expected, "actual" => actual}, expected == actual);

    for k in 0..depth {
        let e = t.e(k);
        let proj = (&(e * e) - e).max_abs().max((&e.adjoint() - e).max_abs());
        r.residual("projection", params! {"k" => k}, proj, tol);
    }

    for k in 0..depth {
        for l in [k + 1, k.wrapping_sub(1)] {
            if l >= depth {
                continue;
            }
            let level = k.max(l) + 1;
            let (ek, el) = (t.e_in(k, level), t.e_in(l, level));
            let res = (&(&(&ek * &el) * &ek) - &ek.scale(beta_inv)).max_abs();
            r.residual("E1", params! {"k" => k, "l" => l}, res, tol);
        }
        for l in (k + 2)..depth {
            let (ek, el) = (t.e_in(k, l + 1), t.e(l));
            r.residual("E2", params! {"k" => k, "l" => l}, (&(&ek * el) - &(el * &ek)).max_abs(), tol);
        }
    }

    for k in 0..depth {
        let e = t.e(k);
        let mk = &t.algebra(k as isize).algebra;
        let (mut e3, mut markov) = (0.0f64, 0.0f64);
        for _ in 0..SAMPLES {
            let x = mk.random_element(&mut rng);
            let xe = t.embed(&x, k as isize, k as isize + 1);
            let ex = t.embed(&t.expectation(k, &x), k as isize - 1, k as isize + 1);
            e3 = e3.max((&(&(e * &xe) * e) - &(&ex * e)).max_abs());
            let lhs = t.beta() * t.tr(k as isize + 1, &(&xe * e));
            markov = markov.max((lhs - t.tr(k as isize, &x)).abs());
        }
        r.residual("E3", params! {"k" => k}, e3, tol);
        r.residual("markov", params! {"k" => k}, markov, tol);
        let markov_unit = (t.beta() * t.tr(k as isize + 1, e) - 1.0).abs();
        r.residual("markov", params! {"k" => k, "x" => "1"}, markov_unit, tol);
    }

    for k in 0..depth {
        let target = t.algebra(k as isize).algebra.identity().scale(beta_inv);
        let res = t.expectation(k + 1, t.e(k)).dist(&target);
        r.residual("E4", params! {"k" => k + 1}, res, tol);
    }

    for k in 0..depth {
        let mk = &t.algebra(k as isize).algebra;
        if mk.dim() > GENERATION_LIMIT {
            r.note(format!("generation of M_{} by M_{} and e_{} not checked: dim M_{} > {GENERATION_LIMIT}", k + 1, k, k, k));
            continue;
        }
        let upper = t.algebra(k as isize + 1);
        let g = t.gns(k as isize + 1);
        let basis: Vec<BlockMatrix> = mk.basis().iter().map(|b| t.embed(b, k as isize, k as isize + 1)).collect();
        let mut sel = IndependentSelector::new(upper.dim(), 1e-8);
        let mut idx = 0;
        'outer: for a in &basis {
            for b in &basis {
                sel.offer(idx, &g.to_vector(&(&(a * t.e(k)) * b)));
                idx += 1;
                if sel.is_full() {
                    break 'outer;
                }
            }
        }
        r.exact("generation", params! {"k" => k + 1, "rank" => sel.chosen.len(), "dim" => upper.dim()}, sel.is_full());
    }
    r
}

#[cfg(test)]
mod tests {
    use super::super::{jones_tower, DEFAULT_CAP};
    use super::*;
    use crate::matrix_algebra::TracialInclusion;

    #[test]
    fn diag_in_m2_depth_4() {
        let inc = TracialInclusion::new(vec![1, 1], vec![vec![1, 1]]).unwrap();
        let t = jones_tower(&inc, 4, DEFAULT_CAP).unwrap();
        let r = verify_tower_relations(&t, 1e-9, 7);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        for name in ["E1", "E2", "E3", "E4", "markov", "generation"] {
            assert!(r.worst(name).is_some(), "{name}");
        }
    }

    #[test]
    fn trivial_is_exact() {
        let inc = TracialInclusion::new(vec![2], vec![vec![1]]).unwrap();
        let t = jones_tower(&inc, 3, DEFAULT_CAP).unwrap();
        let r = verify_tower_relations(&t, 1e-12, 1);
        assert!(r.all_pass());
        assert_eq!(r.worst("E1"), Some(0.0));
    }
}
