//! Temperley–Lieb words, finite-dimensional Jones towers and the relative tensor calculus
//! of bimodules over multi-matrix algebras.

pub mod bimodule;
pub mod config;
pub mod error;
pub mod report;
pub mod matrix_algebra;
pub mod tl;
pub mod tower;

pub use error::{Error, ParseError, Result};
