mod common;

use std::collections::HashSet;

use common::{diagram_trace, saturate, word_diagram};
use jtower::tl::{
    catalan, enumerate_basis, markov_trace, parse_expression, Gen, ReductionOrder, TLCoefficient, TLElement, TLMonomial,
};
use proptest::prelude::*;

fn word_strategy(max_gen: Gen, max_len: usize) -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec(0..=max_gen, 0..=max_len)
}

#[test]
fn saturation_matches_basis_and_catalan() {
    for m in 0..=7 {
        let strands = m + 1;
        let diagrams = saturate(strands);
        let basis = enumerate_basis(m);
        assert_eq!(diagrams.len() as u64, catalan(m + 1), "m = {m}");
        assert_eq!(basis.len(), diagrams.len(), "m = {m}");
        let from_basis: HashSet<_> = basis.iter().map(|w| word_diagram(w.word(), strands).0).collect();
        assert_eq!(from_basis, diagrams, "m = {m}");
    }
}

#[test]
fn basis_words_are_reduced() {
    // A reduced word produces no closed loops.
    for m in 0..=6 {
        for w in enumerate_basis(m) {
            let (_, exp) = word_diagram(w.word(), m + 1);
            assert_eq!(exp, -(w.len() as i64), "{w}");
        }
    }
}

#[test]
fn trace_of_basis_against_closure() {
    for m in 1..=5 {
        for w in enumerate_basis(m) {
            let sym = markov_trace(&TLElement::word(w.word()), m).unwrap();
            for beta in [2.0, 3.0, 4.0, 4.0 * (std::f64::consts::PI / 5.0).cos().powi(2)] {
                let q = beta.sqrt();
                let want = diagram_trace(w.word(), m + 1, q);
                assert!((sym.eval(q) - want).abs() < 1e-12 * want.abs().max(1.0), "{w} at beta {beta}");
            }
        }
    }
}

#[test]
fn parser_agrees_with_direct_construction() {
    let x = parse_expression("b * e0 e1 + b^-1 + 2 * ( e1 - e0 )").unwrap();
    let beta = TLElement::scalar(TLCoefficient::beta_pow(1));
    let want = &(&(&beta * &TLElement::word(&[0, 1])) + &TLElement::scalar(TLCoefficient::beta_pow(-1)))
        + &(&TLElement::scalar(TLCoefficient::from_int(2)) * &(&TLElement::generator(1) - &TLElement::generator(0)));
    assert_eq!(x, want);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_form_matches_diagram(w in word_strategy(5, 14)) {
        let strands = 7;
        let (loops, m) = TLMonomial::from_word(&w);
        let (dw, ew) = word_diagram(&w, strands);
        let (dm, em) = word_diagram(m.word(), strands);
        prop_assert_eq!(dw, dm);
        // δ^{ew} = β^{-loops} δ^{em} with β = δ².
        prop_assert_eq!(ew, em - 2 * loops as i64);
        prop_assert!(m.is_jones_normal());
    }

    #[test]
    fn reduction_orders_agree(w in word_strategy(6, 24)) {
        prop_assert_eq!(
            TLMonomial::from_word_with(&w, ReductionOrder::LeftToRight),
            TLMonomial::from_word_with(&w, ReductionOrder::RightToLeft)
        );
    }

    #[test]
    fn multiplication_is_associative(a in word_strategy(4, 6), b in word_strategy(4, 6), c in word_strategy(4, 6)) {
        let (x, y, z) = (TLElement::word(&a), TLElement::word(&b), TLElement::word(&c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn trace_is_markov(w in word_strategy(3, 8)) {
        let x = TLElement::word(&w);
        let with_top = &x * &TLElement::generator(4);
        let lhs = markov_trace(&with_top, 5).unwrap();
        let rhs = &markov_trace(&x, 4).unwrap() * &TLCoefficient::beta_pow(-1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_matches_closure(w in word_strategy(4, 12)) {
        let sym = markov_trace(&TLElement::word(&w), 5).unwrap();
        let q = 1.7f64;
        let want = diagram_trace(&w, 6, q);
        prop_assert!((sym.eval(q) - want).abs() < 1e-10 * want.abs().max(1.0));
    }
}
