//! Finite-dimensional tracial multi-matrix algebras and their inclusions.

mod algebra;
mod gns;
mod inclusion;
pub mod linalg;

pub use algebra::{c, BlockMatrix, Mat, MultiMatrixAlgebra, TraceVector, TracialAlgebra, C};
pub use gns::{gns_space, GnsSpace};
pub use inclusion::{m_dims_of, markov_data, InclusionMatrix, MarkovData, TracialInclusion};
pub use linalg::{center_decomposition, commutant, isotypic_components, Isotypic, Summand, Vector};
