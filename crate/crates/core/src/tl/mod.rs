//! Exact Temperley–Lieb word algebra over rational functions in `q`, with `β = q²`.

mod coeff;
mod element;
mod identities;
mod parse;
mod poly;
mod trace;
mod word;

pub use coeff::TLCoefficient;
pub use element::{chain_indices, chain_word, TLElement};
pub use identities::{chain_lemma_ii, chain_lemma_iii, verify_word_identities, IdentityCheck, IdentityReport};
pub use parse::parse_expression;
pub use poly::Poly;
pub use trace::{catalan, enumerate_basis, markov_trace, monomial_trace_exponent};
pub use word::{Chain, Gen, ReductionOrder, TLMonomial};
