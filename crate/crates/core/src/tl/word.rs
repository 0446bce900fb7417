//! Reduced words in the Jones projections and their normal form.
//!
//! A word is rewritten with `e_k e_k = e_k`, `e_k e_{k±1} e_k = β⁻¹ e_k` and distant
//! commutation. Two occurrences of `e_i` with no `e_i` between them collapse whenever at
//! most one neighbouring letter `e_{i±1}` separates them; every other letter between them
//! commutes with `e_i`. Once no such pair is left the word is fully commutative and its
//! commutation class is represented by the lexicographically least member, which is the
//! Jones normal form `e_{i₁,j₁} e_{i₂,j₂} … e_{i_p,j_p}`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

pub type Gen = u16;

/// Which end of the word the rewriter works from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionOrder {
    LeftToRight,
    RightToLeft,
}

/// A reduced word stored in Jones normal form. The empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TLMonomial {
    word: Vec<Gen>,
}

/// One descending chain `e_{head} e_{head-1} … e_{foot}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chain {
    pub head: Gen,
    pub foot: Gen,
}

impl TLMonomial {
    pub fn unit() -> Self {
        Self::default()
    }

    /// Normalizes an arbitrary word; returns the number of `β⁻¹` factors produced.
    pub fn from_word(word: &[Gen]) -> (u32, Self) {
        Self::from_word_with(word, ReductionOrder::LeftToRight)
    }

    pub fn from_word_with(word: &[Gen], order: ReductionOrder) -> (u32, Self) {
        let (drops, w) = match order {
            ReductionOrder::LeftToRight => reduce_appending(word),
            ReductionOrder::RightToLeft => {
                let mut w = word.to_vec();
                (reduce(&mut w, order), w)
            }
        };
        (drops, Self { word: lex_least(&w) })
    }

    /// Builds a monomial from chains, which must already satisfy the normal-form pattern.
    pub fn from_chains(chains: &[Chain]) -> Option<Self> {
        for c in chains {
            if c.foot > c.head {
                return None;
            }
        }
        for pair in chains.windows(2) {
            if pair[0].head >= pair[1].head || pair[0].foot >= pair[1].foot {
                return None;
            }
        }
        let word = chains.iter().flat_map(|c| (c.foot..=c.head).rev()).collect();
        Some(Self { word })
    }

    pub fn word(&self) -> &[Gen] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_unit(&self) -> bool {
        self.word.is_empty()
    }

    pub fn max_generator(&self) -> Option<Gen> {
        self.word.iter().copied().max()
    }

    /// Splits the word into maximal descending runs.
    pub fn chains(&self) -> Vec<Chain> {
        let mut out: Vec<Chain> = Vec::new();
        for &g in &self.word {
            match out.last_mut() {
                Some(c) if c.foot > 0 && g == c.foot - 1 => c.foot = g,
                _ => out.push(Chain { head: g, foot: g }),
            }
        }
        out
    }

    /// Heads and feet strictly increase along the chain decomposition.
    pub fn is_jones_normal(&self) -> bool {
        let chains = self.chains();
        chains
            .windows(2)
            .all(|p| p[0].head < p[1].head && p[0].foot < p[1].foot)
    }
}

impl fmt::Display for TLMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.word.iter().map(|g| format!("e{g}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn adjacent(a: Gen, b: Gen) -> bool {
    a.abs_diff(b) == 1
}

/// Applies rewriting steps until none applies; returns the number of `β⁻¹` factors.
fn reduce(w: &mut Vec<Gen>, order: ReductionOrder) -> u32 {
    let mut drops = 0;
    while let Some(step) = find_step(w, order) {
        match step {
            Step::Idempotent { remove } => {
                w.remove(remove);
            }
            Step::Contract { neighbour, remove } => {
                let (a, b) = if neighbour > remove { (neighbour, remove) } else { (remove, neighbour) };
                w.remove(a);
                w.remove(b);
                drops += 1;
            }
        }
    }
    drops
}

/// Left-to-right reduction that appends one letter at a time to a reduced prefix. A new
/// letter can only pair with the latest copy of itself; after a contraction the letters
/// behind the removed neighbour are fed in again.
fn reduce_appending(word: &[Gen]) -> (u32, Vec<Gen>) {
    let mut out: Vec<Gen> = Vec::with_capacity(word.len());
    let mut positions: HashMap<Gen, Vec<usize>> = HashMap::new();
    let mut pending: Vec<Gen> = word.iter().rev().copied().collect();
    let mut drops = 0;
    while let Some(g) = pending.pop() {
        if let Some(&p) = positions.get(&g).and_then(|v| v.last()) {
            let mut neighbours = (p + 1..out.len()).filter(|&t| adjacent(out[t], g));
            match (neighbours.next(), neighbours.next()) {
                (None, _) => continue,
                (Some(t), None) => {
                    drops += 1;
                    pending.extend(out[t + 1..].iter().rev());
                    for h in &out[t..] {
                        positions.get_mut(h).expect("letter was recorded").pop();
                    }
                    out.truncate(t);
                    continue;
                }
                _ => {}
            }
        }
        positions.entry(g).or_default().push(out.len());
        out.push(g);
    }
    (drops, out)
}

enum Step {
    /// `e_i X e_i → e_i X` (or `X e_i`): drop one copy.
    Idempotent { remove: usize },
    /// `e_i X e_{i±1} Y e_i → β⁻¹ e_i X Y` (or `X Y e_i`): drop the neighbour and one copy.
    Contract { neighbour: usize, remove: usize },
}

fn find_step(w: &[Gen], order: ReductionOrder) -> Option<Step> {
    let n = w.len();
    match order {
        ReductionOrder::LeftToRight => {
            for j in 1..n {
                if let Some(p) = (0..j).rev().find(|&p| w[p] == w[j]) {
                    if let Some(step) = classify(w, p, j, j) {
                        return Some(step);
                    }
                }
            }
        }
        ReductionOrder::RightToLeft => {
            for p in (0..n.saturating_sub(1)).rev() {
                if let Some(j) = (p + 1..n).find(|&j| w[j] == w[p]) {
                    if let Some(step) = classify(w, p, j, p) {
                        return Some(step);
                    }
                }
            }
        }
    }
    None
}

fn classify(w: &[Gen], p: usize, j: usize, remove: usize) -> Option<Step> {
    let i = w[p];
    let mut neighbours = (p + 1..j).filter(|&t| adjacent(w[t], i));
    match (neighbours.next(), neighbours.next()) {
        (None, _) => Some(Step::Idempotent { remove }),
        (Some(t), None) => Some(Step::Contract { neighbour: t, remove }),
        _ => None,
    }
}

/// Lexicographically least word in the commutation class of `w`.
///
/// Letters that do not commute keep their order, so each letter waits only for the latest
/// earlier `e_{g-1}`, `e_g` and `e_{g+1}`; the least available letter is emitted first.
fn lex_least(w: &[Gen]) -> Vec<Gen> {
    let mut last: HashMap<Gen, usize> = HashMap::new();
    let mut waiting = vec![0usize; w.len()];
    let mut unblocks: Vec<Vec<usize>> = vec![Vec::new(); w.len()];
    for (t, &g) in w.iter().enumerate() {
        for h in [g.checked_sub(1), Some(g), g.checked_add(1)].into_iter().flatten() {
            if let Some(&s) = last.get(&h) {
                unblocks[s].push(t);
                waiting[t] += 1;
            }
        }
        last.insert(g, t);
    }
    let mut ready: BinaryHeap<Reverse<(Gen, usize)>> =
        (0..w.len()).filter(|&t| waiting[t] == 0).map(|t| Reverse((w[t], t))).collect();
    let mut out = Vec::with_capacity(w.len());
    while let Some(Reverse((g, t))) = ready.pop() {
        out.push(g);
        for &u in &unblocks[t] {
            waiting[u] -= 1;
            if waiting[u] == 0 {
                ready.push(Reverse((w[u], u)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_gives_beta_inverse() {
        let (d, m) = TLMonomial::from_word(&[1, 0, 1]);
        assert_eq!(d, 1);
        assert_eq!(m.word(), &[1]);
    }

    #[test]
    fn idempotent() {
        let (d, m) = TLMonomial::from_word(&[3, 3]);
        assert_eq!((d, m.word()), (0, &[3][..]));
    }

    #[test]
    fn distant_generators_sorted() {
        let (d, m) = TLMonomial::from_word(&[2, 0]);
        assert_eq!((d, m.word()), (0, &[0, 2][..]));
    }

    #[test]
    fn chains_of_normal_word() {
        let (_, m) = TLMonomial::from_word(&[2, 1, 3, 2, 0, 1]);
        assert!(m.is_jones_normal());
        let rebuilt = TLMonomial::from_chains(&m.chains()).unwrap();
        assert_eq!(rebuilt, m);
    }

    #[test]
    fn from_chains_rejects_bad_pattern() {
        let c = |head, foot| Chain { head, foot };
        assert!(TLMonomial::from_chains(&[c(1, 1), c(2, 0)]).is_none());
        assert!(TLMonomial::from_chains(&[c(2, 0), c(2, 1)]).is_none());
        assert_eq!(TLMonomial::from_chains(&[c(2, 0)]).unwrap().word(), &[2, 1, 0]);
    }

    #[test]
    fn both_orders_agree_on_a_long_word() {
        let w = [3, 1, 2, 0, 1, 3, 2, 4, 3, 1, 0, 2];
        assert_eq!(
            TLMonomial::from_word_with(&w, ReductionOrder::LeftToRight),
            TLMonomial::from_word_with(&w, ReductionOrder::RightToLeft)
        );
    }
}
