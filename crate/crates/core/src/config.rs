//! Inclusion spec files (TOML) and the built-in presets.
//!
//! ```toml
//! # either a preset ...
//! preset = "diag-in-m2"
//! # ... or an explicit inclusion
//! n = [1, 1]
//! m = [2]              # optional, checked against n and lambda
//! lambda = [[1, 1]]    # rows indexed by blocks of M
//! trace = [1.0]        # optional trace weights on M
//! depth = 4
//! tol = 1e-9
//! cap = 4096
//! seed = 0
//! ```

use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::matrix_algebra::{m_dims_of, TracialInclusion};

pub const PRESETS: &[&str] = &["scalars-in-m2", "scalars-in-c2", "diag-in-m2", "m2-in-m4", "trivial"];

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_DEPTH: usize = 3;

/// Block sizes of `N` and the inclusion matrix of a preset.
pub fn preset(name: &str) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
    Some(match name {
        "scalars-in-m2" => (vec![1], vec![vec![2]]),
        "scalars-in-c2" => (vec![1], vec![vec![1], vec![1]]),
        "diag-in-m2" => (vec![1, 1], vec![vec![1, 1]]),
        "m2-in-m4" => (vec![2], vec![vec![2]]),
        "trivial" => (vec![1], vec![vec![1]]),
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Preset(String),
    Explicit { n: Vec<usize>, lambda: Vec<Vec<usize>>, trace: Option<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct InclusionConfig {
    pub source: Source,
    pub depth: usize,
    pub tol: f64,
    /// `None` leaves the choice to the caller.
    pub cap: Option<usize>,
    pub seed: u64,
}

impl InclusionConfig {
    pub fn from_preset(name: &str) -> Result<Self> {
        if preset(name).is_none() {
            return Err(Error::Config { line: 0, col: 0, msg: unknown_preset(name) });
        }
        Ok(Self { source: Source::Preset(name.into()), depth: DEFAULT_DEPTH, tol: DEFAULT_TOL, cap: None, seed: 0 })
    }

    pub fn name(&self) -> String {
        match &self.source {
            Source::Preset(p) => p.clone(),
            Source::Explicit { .. } => "custom".into(),
        }
    }

    pub fn inclusion(&self) -> Result<TracialInclusion> {
        match &self.source {
            Source::Preset(p) => {
                let (n, lambda) = preset(p).expect("validated preset");
                TracialInclusion::new(n, lambda)
            }
            Source::Explicit { n, lambda, trace: None } => TracialInclusion::new(n.clone(), lambda.clone()),
            Source::Explicit { n, lambda, trace: Some(w) } => {
                TracialInclusion::with_trace(n.clone(), lambda.clone(), w.clone())
            }
        }
    }
}

fn unknown_preset(name: &str) -> String {
    format!("unknown preset {name:?}, expected one of {}", PRESETS.join(", "))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    preset: Option<Spanned<String>>,
    n: Option<Spanned<Vec<usize>>>,
    m: Option<Spanned<Vec<usize>>>,
    lambda: Option<Spanned<Vec<Spanned<Vec<usize>>>>>,
    trace: Option<Spanned<Vec<f64>>>,
    depth: Option<usize>,
    tol: Option<Spanned<f64>>,
    cap: Option<usize>,
    seed: Option<u64>,
}

/// Line and column (both 1-based) of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn at(text: &str, span: Range<usize>, msg: impl Into<String>) -> Error {
    let (line, col) = position(text, span.start);
    Error::Config { line, col, msg: msg.into() }
}

pub fn parse_config(text: &str) -> Result<InclusionConfig> {
    let raw: Raw = toml::from_str(text).map_err(|e| {
        let start = e.span().map_or(0, |s| s.start);
        at(text, start..start, e.message().to_string())
    })?;
    let source = match (&raw.preset, &raw.n, &raw.lambda) {
        (Some(p), None, None) => {
            if raw.m.is_some() || raw.trace.is_some() {
                return Err(at(text, p.span(), "a preset cannot be combined with m or trace"));
            }
            if preset(p.get_ref()).is_none() {
                return Err(at(text, p.span(), unknown_preset(p.get_ref())));
            }
            Source::Preset(p.get_ref().clone())
        }
        (Some(p), _, _) => return Err(at(text, p.span(), "give either a preset or n and lambda")),
        (None, Some(n), Some(lambda)) => explicit(text, n, lambda, raw.m.as_ref(), raw.trace.as_ref())?,
        (None, _, _) => return Err(at(text, 0..0, "missing preset, or n together with lambda")),
    };
    let tol = match raw.tol {
        Some(t) if !(*t.get_ref() > 0.0 && t.get_ref().is_finite()) => {
            return Err(at(text, t.span(), "tol must be positive"))
        }
        Some(t) => t.into_inner(),
        None => DEFAULT_TOL,
    };
    Ok(InclusionConfig {
        source,
        depth: raw.depth.unwrap_or(DEFAULT_DEPTH),
        tol,
        cap: raw.cap,
        seed: raw.seed.unwrap_or(0),
    })
}

fn explicit(
    text: &str,
    n: &Spanned<Vec<usize>>,
    lambda: &Spanned<Vec<Spanned<Vec<usize>>>>,
    m: Option<&Spanned<Vec<usize>>>,
    trace: Option<&Spanned<Vec<f64>>>,
) -> Result<Source> {
    if n.get_ref().is_empty() || n.get_ref().contains(&0) {
        return Err(at(text, n.span(), "block sizes of n must be positive"));
    }
    if lambda.get_ref().is_empty() {
        return Err(at(text, lambda.span(), "lambda needs at least one row"));
    }
    let width = n.get_ref().len();
    for row in lambda.get_ref() {
        if row.get_ref().len() != width {
            let msg = format!("matrix row has {} entries, expected {width} (one per block of n)", row.get_ref().len());
            return Err(at(text, row.span(), msg));
        }
    }
    let rows: Vec<Vec<usize>> = lambda.get_ref().iter().map(|r| r.get_ref().clone()).collect();
    if let Some(m) = m {
        let want = m_dims_of(&rows, n.get_ref());
        if m.get_ref() != &want {
            return Err(at(text, m.span(), format!("m = {:?} does not match n and lambda, which give {want:?}", m.get_ref())));
        }
    }
    if let Some(t) = trace {
        if t.get_ref().len() != rows.len() {
            return Err(at(text, t.span(), format!("trace needs {} weights, one per block of M", rows.len())));
        }
    }
    Ok(Source::Explicit { n: n.get_ref().clone(), lambda: rows, trace: trace.map(|t| t.get_ref().clone()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_pos(text: &str) -> (usize, usize) {
        match parse_config(text) {
            Err(Error::Config { line, col, .. }) => (line, col),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn presets_build() {
        for p in PRESETS {
            let c = parse_config(&format!("preset = \"{p}\"\ndepth = 2\n")).unwrap();
            assert_eq!(c.depth, 2);
            c.inclusion().unwrap();
        }
    }

    #[test]
    fn explicit_inclusion() {
        let c = parse_config("n = [1, 1]\nm = [2]\nlambda = [[1, 1]]\ntol = 1e-8\nseed = 7\n").unwrap();
        assert_eq!(c.source, Source::Explicit { n: vec![1, 1], lambda: vec![vec![1, 1]], trace: None });
        assert_eq!((c.tol, c.seed, c.cap), (1e-8, 7, None));
        assert!((c.inclusion().unwrap().beta() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn short_row_is_located() {
        assert_eq!(err_pos("n = [1, 1]\nlambda = [\n  [1, 1],\n  [2],\n]\n"), (4, 3));
    }

    #[test]
    fn syntax_error_is_located() {
        let (line, _) = err_pos("n = [1]\nlambda = [[1 2]]\n");
        assert_eq!(line, 2);
    }

    #[test]
    fn rejects_bad_fields() {
        err_pos("preset = \"nope\"\n");
        err_pos("preset = \"trivial\"\ncolour = 1\n");
        err_pos("preset = \"trivial\"\ntol = -1.0\n");
        err_pos("n = [1]\nm = [3]\nlambda = [[2]]\n");
        err_pos("n = [1]\n");
        err_pos("");
    }
}
