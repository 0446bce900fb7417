//! The Markov trace on the word algebra.

use super::coeff::TLCoefficient;
use super::element::TLElement;
use super::word::{Chain, Gen, TLMonomial};
use crate::error::Result;

/// Normalized Markov trace of `x`, which must only use `e_0, …, e_{level-1}`.
///
/// In a normal-form word the largest generator `e_k` occurs once, so the word is
/// `x e_k y` with `x, y` below `k`, and `tr(x e_k y) = β⁻¹ tr(y x)`.
pub fn markov_trace(x: &TLElement, level: usize) -> Result<TLCoefficient> {
    x.check_level(level)?;
    let mut acc = TLCoefficient::zero();
    for (m, c) in x.terms() {
        let k = monomial_trace_exponent(m);
        acc = &acc + &(c * &TLCoefficient::beta_pow(-(k as i64)));
    }
    Ok(acc)
}

/// `tr(m) = β^{-k}`; returns `k`.
pub fn monomial_trace_exponent(m: &TLMonomial) -> u32 {
    let mut word = m.word().to_vec();
    let mut k = 0;
    while let Some(&top) = word.iter().max() {
        let pos = word.iter().position(|&g| g == top).unwrap();
        debug_assert_eq!(word.iter().filter(|&&g| g == top).count(), 1);
        let mut cycled: Vec<Gen> = word[pos + 1..].to_vec();
        cycled.extend_from_slice(&word[..pos]);
        let (drops, reduced) = TLMonomial::from_word(&cycled);
        k += 1 + drops;
        word = reduced.word().to_vec();
    }
    k
}

/// All normal-form monomials in `e_0, …, e_{m-1}`; there are `Catalan(m + 1)` of them.
pub fn enumerate_basis(m: usize) -> Vec<TLMonomial> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    extend_chains(m as Gen, &mut stack, &mut out);
    out.sort_by(|a, b| (a.len(), a.word()).cmp(&(b.len(), b.word())));
    out
}

fn extend_chains(m: Gen, stack: &mut Vec<Chain>, out: &mut Vec<TLMonomial>) {
    out.push(TLMonomial::from_chains(stack).expect("valid by construction"));
    let (min_head, min_foot) = match stack.last() {
        Some(c) => (c.head + 1, c.foot + 1),
        None => (0, 0),
    };
    for head in min_head..m {
        for foot in min_foot..=head {
            stack.push(Chain { head, foot });
            extend_chains(m, stack, out);
            stack.pop();
        }
    }
}

pub fn catalan(n: usize) -> u64 {
    let mut c: u64 = 1;
    for i in 0..n as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_traces() {
        let one = TLElement::one();
        assert!(markov_trace(&one, 0).unwrap().is_one());
        for k in 0..4 {
            let t = markov_trace(&TLElement::generator(k), 4).unwrap();
            assert_eq!(t, TLCoefficient::beta_pow(-1));
        }
        let x = TLElement::word(&[0, 2]);
        assert_eq!(markov_trace(&x, 3).unwrap(), TLCoefficient::beta_pow(-2));
    }

    #[test]
    fn level_is_enforced() {
        assert!(markov_trace(&TLElement::generator(2), 2).is_err());
    }

    #[test]
    fn catalan_numbers() {
        let c: Vec<u64> = (0..10).map(catalan).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]);
    }

    #[test]
    fn small_bases() {
        let words = |m| enumerate_basis(m).iter().map(|w| w.word().to_vec()).collect::<Vec<_>>();
        assert_eq!(words(0), vec![Vec::<Gen>::new()]);
        assert_eq!(words(1), vec![vec![], vec![0]]);
        assert_eq!(words(2), vec![vec![], vec![0], vec![1], vec![0, 1], vec![1, 0]]);
    }
}
