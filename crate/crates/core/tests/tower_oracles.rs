mod common;

use common::{basic_construction_dim, bratteli_dims, diagram_trace, gram_expectation, pf_eigenvalue, preset, PRESETS};
use jtower::bimodule::{decompose, intertwiners, Bimodule, Sides};
use jtower::matrix_algebra::TracialInclusion;
use jtower::tower::{jones_tower, projected_dims, Tower, DEFAULT_CAP};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tower(name: &str, depth: usize) -> Tower {
    jones_tower(&preset(name), depth, DEFAULT_CAP).unwrap()
}

fn inclusion_strategy() -> impl Strategy<Value = Option<TracialInclusion>> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(rows, cols)| {
            (prop::collection::vec(1usize..=2, cols), prop::collection::vec(prop::collection::vec(0usize..=2, cols), rows))
        })
        .prop_map(|(n, lambda)| TracialInclusion::new(n, lambda).ok())
}

#[test]
fn beta_is_the_perron_frobenius_eigenvalue() {
    for (name, _, l) in PRESETS {
        let lambda: Vec<Vec<usize>> = l.iter().map(|r| r.to_vec()).collect();
        assert!((preset(name).beta() - pf_eigenvalue(&lambda)).abs() < 1e-10, "{name}");
    }
}

#[test]
fn tower_dims_count_bratteli_paths() {
    for (name, n, l) in PRESETS {
        let lambda: Vec<Vec<usize>> = l.iter().map(|r| r.to_vec()).collect();
        let want = bratteli_dims(n, &lambda, 4);
        let t = tower(name, if name == "m2-in-m4" { 3 } else { 4 });
        for k in -1..=t.depth() as isize {
            assert_eq!(t.algebra(k).algebra.dim(), want[(k + 1) as usize], "{name} level {k}");
        }
        assert_eq!(projected_dims(&preset(name), 4), want[1..].to_vec(), "{name}");
    }
}

#[test]
fn basic_construction_is_the_commutant_of_n() {
    for (name, _, _) in PRESETS {
        let t = tower(name, 1);
        assert_eq!(t.algebra(1).algebra.dim(), basic_construction_dim(&preset(name)), "{name}");
    }
    assert_eq!(basic_construction_dim(&preset("scalars-in-m2")), 16);
}

#[test]
fn conditional_expectation_is_the_orthogonal_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, _, _) in PRESETS {
        let incl = preset(name);
        for _ in 0..4 {
            let x = incl.m.algebra.random_element(&mut rng);
            let got = incl.embed(&incl.conditional_expectation(&x));
            assert!(got.dist(&gram_expectation(&incl, &x)) < 1e-10, "{name}");
        }
    }
}

#[test]
fn tower_trace_of_words_matches_diagrams() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (name, _, _) in PRESETS {
        let depth = if name == "m2-in-m4" { 3 } else { 4 };
        let t = tower(name, depth);
        let q = t.beta().sqrt();
        for _ in 0..40 {
            let level = rng.gen_range(1..=depth);
            let len = rng.gen_range(0..8);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..level)).collect();
            let w16: Vec<u16> = w.iter().map(|&g| g as u16).collect();
            let got = t.tr(level as isize, &t.word(&w, level));
            let want = diagram_trace(&w16, level + 1, q);
            assert!((got - want).abs() < 1e-10, "{name} {w:?}: {got} vs {want}");
        }
    }
}

#[test]
fn intertwiner_dims_match_decomposition() {
    for (name, _, _) in PRESETS {
        let incl = preset(name);
        let l2 = Bimodule::l2(&incl.m);
        for h in [l2.clone(), l2.restrict_left(&incl).unwrap(), l2.restrict_left(&incl).unwrap().restrict_right(&incl).unwrap()] {
            let parts = decompose(&h).unwrap();
            let by_count: usize = parts.iter().map(|(_, m)| m * m).sum();
            let total: usize = parts.iter().map(|(b, m)| b.dim() * m).sum();
            assert_eq!(total, h.dim(), "{name}");
            assert_eq!(intertwiners(&h, &h, Sides::Both).unwrap().dim(), by_count, "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_inclusions(incl in inclusion_strategy()) {
        let Some(incl) = incl else { return Ok(()) };
        let lambda = incl.lambda().clone();
        prop_assert!((incl.beta() - pf_eigenvalue(&lambda)).abs() < 1e-8);
        let want = bratteli_dims(incl.n.algebra.dims(), &lambda, 2);
        if want[3] <= 400 {
            let t = jones_tower(&incl, 2, DEFAULT_CAP).unwrap();
            for k in -1..=2isize {
                prop_assert_eq!(t.algebra(k).algebra.dim(), want[(k + 1) as usize]);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = incl.m.algebra.random_element(&mut rng);
        prop_assert!(incl.embed(&incl.conditional_expectation(&x)).dist(&gram_expectation(&incl, &x)) < 1e-9);
    }
}
