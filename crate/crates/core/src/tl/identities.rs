//! Exact verification of the word identities used for the tower isomorphisms.

use serde::Serialize;

use super::coeff::TLCoefficient;
use super::element::{chain_indices, TLElement};
use super::trace::markov_trace;
use super::word::Gen;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub parameters: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, identity: &str, parameters: String, lhs: TLElement, rhs: TLElement) {
        let pass = lhs == rhs;
        self.checks.push(IdentityCheck {
            identity: identity.to_string(),
            parameters,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
        });
    }

    fn push_scalar(&mut self, identity: &str, parameters: String, lhs: TLCoefficient, rhs: TLCoefficient) {
        let pass = lhs == rhs;
        self.checks.push(IdentityCheck {
            identity: identity.to_string(),
            parameters,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
        });
    }
}

fn beta(k: i64) -> TLCoefficient {
    TLCoefficient::beta_pow(k)
}

/// Product of chains `e_{a₁,b₁} e_{a₂,b₂} …` as a single word.
fn chains(list: &[(Gen, Gen)]) -> TLElement {
    let w: Vec<Gen> = list.iter().flat_map(|&(a, b)| chain_indices(a, b)).collect();
    TLElement::word(&w)
}

/// Chain products: `β^{k(k+1)/2} e_{n,0}…e_{n+k,0} = e_{n,0}e_{n+1,2}…e_{n+k,2k}`.
pub fn chain_lemma_ii(n: Gen, k: Gen) -> (TLElement, TLElement) {
    let lhs_chains: Vec<_> = (0..=k).map(|t| (n + t, 0)).collect();
    let rhs_chains: Vec<_> = (0..=k).map(|t| (n + t, 2 * t)).collect();
    let kk = k as i64;
    (chains(&lhs_chains).scale(&beta(kk * (kk + 1) / 2)), chains(&rhs_chains))
}

/// Part (iii): `e_{n,0}e_{n+1,0}…e_{2n-2,0}e_{2n-1,2n-2} = β^{n-1} e_{n,0}…e_{2n-1,0}`.
pub fn chain_lemma_iii(n: Gen) -> (TLElement, TLElement) {
    let mut lhs_chains: Vec<_> = (n..=2 * n - 2).map(|j| (j, 0)).collect();
    lhs_chains.push((2 * n - 1, 2 * n - 2));
    let rhs_chains: Vec<_> = (n..=2 * n - 1).map(|j| (j, 0)).collect();
    (chains(&lhs_chains), chains(&rhs_chains).scale(&beta(n as i64 - 1)))
}

/// Runs every identity for all admissible parameters up to `n_max`.
///
/// Covers the generator relations on `e_0 … e_{2 n_max}`, the Markov property, the three
/// chain-product identities and the shift identity `e_l e_{0,2n-3} = e_{0,2n-3} e_{l-2}`.
pub fn verify_word_identities(n_max: usize) -> IdentityReport {
    let mut report = IdentityReport::default();
    let n_max = n_max.max(1) as Gen;
    let top = 2 * n_max;
    let e = TLElement::generator;

    for k in 0..=top {
        report.push("projection", format!("k={k}"), &e(k) * &e(k), e(k));
        let lhs = &(&e(k) * &e(k + 1)) * &e(k);
        report.push("E1", format!("k={k},+1"), lhs, e(k).scale(&beta(-1)));
        if k > 0 {
            let lhs = &(&e(k) * &e(k - 1)) * &e(k);
            report.push("E1", format!("k={k},-1"), lhs, e(k).scale(&beta(-1)));
        }
        for l in (k + 2)..=top {
            report.push("E2", format!("k={k},l={l}"), &e(k) * &e(l), &e(l) * &e(k));
        }
        // Word-level shadow of E_k(e_{k-1}) = β⁻¹: e_k e_{k-1} e_k = E_k(e_{k-1}) e_k.
        if k > 0 {
            let trace_lhs = markov_trace(&(&e(k - 1) * &e(k)), k as usize + 1).unwrap();
            let trace_rhs = &markov_trace(&e(k - 1), k as usize).unwrap() * &beta(-1);
            report.push_scalar("markov", format!("x=e{},k={k}", k - 1), trace_lhs, trace_rhs);
        }
        let t = markov_trace(&e(k), k as usize + 1).unwrap();
        report.push_scalar("markov", format!("x=1,k={k}"), t, beta(-1));
    }

    for n in 1..=n_max {
        let lhs = chains(&[(n, 0), (n + 1, 0)]).scale(&beta(1));
        let rhs = chains(&[(n, 0), (n + 1, 2)]);
        report.push("chain-i", format!("n={n}"), lhs, rhs);
        for k in 1..=n {
            let (lhs, rhs) = chain_lemma_ii(n, k);
            report.push("chain-ii", format!("n={n},k={k}"), lhs, rhs);
        }
        let (lhs, rhs) = chain_lemma_iii(n);
        report.push("chain-iii", format!("n={n}"), lhs, rhs);
        if n >= 2 {
            let c = 2 * n - 3;
            for l in 2..=c {
                let lhs = &e(l) * &chains(&[(0, c)]);
                let rhs = &chains(&[(0, c)]) * &e(l - 2);
                report.push("shift", format!("n={n},l={l}"), lhs, rhs);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_small_cases() {
        let (lhs, rhs) = chain_lemma_iii(1);
        assert_eq!(lhs, chains(&[(1, 0)]));
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = chain_lemma_ii(2, 1);
        assert_eq!(lhs, rhs);
        assert_eq!(rhs, chains(&[(2, 0), (3, 2)]));
    }

    #[test]
    fn report_passes() {
        let r = verify_word_identities(3);
        assert!(r.all_pass(), "{:?}", r.checks.iter().find(|c| !c.pass));
        assert!(r.checks.iter().any(|c| c.identity == "shift"));
    }

    #[test]
    fn a_false_identity_would_be_reported() {
        let mut r = IdentityReport::default();
        r.push("bogus", String::new(), TLElement::generator(0), TLElement::generator(1));
        assert!(!r.all_pass());
    }
}
