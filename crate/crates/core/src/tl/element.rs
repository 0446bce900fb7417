//! Linear combinations of normal-form monomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::coeff::TLCoefficient;
use super::word::{Gen, ReductionOrder, TLMonomial};
use crate::error::{Error, Result};

/// Finite map from monomials to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TLElement {
    terms: BTreeMap<TLMonomial, TLCoefficient>,
}

impl TLElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(TLMonomial::unit(), TLCoefficient::one())
    }

    pub fn scalar(c: TLCoefficient) -> Self {
        Self::monomial(TLMonomial::unit(), c)
    }

    pub fn monomial(m: TLMonomial, c: TLCoefficient) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    /// The generator `e_k`.
    pub fn generator(k: Gen) -> Self {
        Self::word(&[k])
    }

    /// Normal form of an arbitrary word in the generators.
    pub fn word(w: &[Gen]) -> Self {
        Self::word_with(w, ReductionOrder::LeftToRight)
    }

    pub fn word_with(w: &[Gen], order: ReductionOrder) -> Self {
        let (drops, m) = TLMonomial::from_word_with(w, order);
        Self::monomial(m, TLCoefficient::beta_pow(-(drops as i64)))
    }

    fn add_term(&mut self, m: TLMonomial, c: TLCoefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLMonomial, &TLCoefficient)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &TLMonomial) -> TLCoefficient {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &TLCoefficient) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<Gen> {
        self.terms.keys().filter_map(TLMonomial::max_generator).max()
    }

    /// Errors if a generator `e_k` with `k ≥ level` occurs.
    pub fn check_level(&self, level: usize) -> Result<()> {
        match self.max_generator() {
            Some(g) if g as usize >= level => Err(Error::LevelOutOfRange { generator: g as usize, level }),
            _ => Ok(()),
        }
    }

    pub fn mul_with(&self, rhs: &Self, order: ReductionOrder) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let mut w = a.word().to_vec();
                w.extend_from_slice(b.word());
                let (drops, m) = TLMonomial::from_word_with(&w, order);
                let c = &(ca * cb) * &TLCoefficient::beta_pow(-(drops as i64));
                out.add_term(m, c);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

/// The chain `e_{n,m}`: ascending for `n < m`, `e_n` for `n = m`, descending for `n > m`.
pub fn chain_word(n: Gen, m: Gen) -> TLElement {
    TLElement::word(&chain_indices(n, m))
}

pub fn chain_indices(n: Gen, m: Gen) -> Vec<Gen> {
    if n <= m {
        (n..=m).collect()
    } else {
        (m..=n).rev().collect()
    }
}

impl Add for &TLElement {
    type Output = TLElement;
    fn add(self, rhs: &TLElement) -> TLElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &TLElement {
    type Output = TLElement;
    fn neg(self) -> TLElement {
        self.scale(&TLCoefficient::from_int(-1))
    }
}

impl Sub for &TLElement {
    type Output = TLElement;
    fn sub(self, rhs: &TLElement) -> TLElement {
        self + &(-rhs)
    }
}

impl Mul for &TLElement {
    type Output = TLElement;
    fn mul(self, rhs: &TLElement) -> TLElement {
        self.mul_with(rhs, ReductionOrder::LeftToRight)
    }
}

impl Add for TLElement {
    type Output = TLElement;
    fn add(self, rhs: TLElement) -> TLElement {
        &self + &rhs
    }
}

impl Sub for TLElement {
    type Output = TLElement;
    fn sub(self, rhs: TLElement) -> TLElement {
        &self - &rhs
    }
}

impl Mul for TLElement {
    type Output = TLElement;
    fn mul(self, rhs: TLElement) -> TLElement {
        &self * &rhs
    }
}

impl fmt::Display for TLElement {
    /// Terms ordered by word length, then lexicographically: `b^-1 * e1 + e0 e1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| (a.0.len(), a.0.word()).cmp(&(b.0.len(), b.0.word())));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let cs = c.to_string();
            let (neg, cs) = match cs.strip_prefix('-') {
                Some(rest) if !cs.starts_with("-(") => (true, rest.to_string()),
                _ => (false, cs),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (cs == "1", m.is_unit()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{m}")?,
                (false, true) => write!(f, "{cs}")?,
                (false, false) => write!(f, "{cs} * {m}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(k: Gen) -> TLElement {
        TLElement::generator(k)
    }

    #[test]
    fn relation_e1_from_products() {
        let lhs = &e(1) * &(&e(0) * &e(1));
        assert_eq!(lhs, e(1).scale(&TLCoefficient::beta_pow(-1)));
        assert_eq!(lhs.to_string(), "b^-1 * e1");
    }

    #[test]
    fn projection_and_commutation() {
        assert_eq!(&e(0) * &e(0), e(0));
        assert_eq!(&e(2) * &e(0), &e(0) * &e(2));
    }

    #[test]
    fn chains() {
        assert_eq!(chain_indices(2, 0), vec![2, 1, 0]);
        assert_eq!(chain_indices(1, 1), vec![1]);
        assert_eq!(chain_indices(0, 2), vec![0, 1, 2]);
        assert_eq!(chain_word(2, 0).to_string(), "e2 e1 e0");
        assert_eq!(chain_word(0, 2).to_string(), "e0 e1 e2");
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = &e(0) + &e(1);
        let z = &x - &x;
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn display_signs() {
        let x = &TLElement::one() - &e(0).scale(&TLCoefficient::from_int(2));
        assert_eq!(x.to_string(), "1 - 2 * e0");
    }

    #[test]
    fn level_check() {
        assert!(e(3).check_level(4).is_ok());
        assert!(matches!(e(3).check_level(3), Err(Error::LevelOutOfRange { generator: 3, level: 3 })));
    }
}
