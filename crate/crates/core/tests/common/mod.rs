//! Oracles shared by the integration tests. None of them call into the code under test
//! beyond reading inputs.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use jtower::matrix_algebra::linalg::commutant;
use jtower::matrix_algebra::{c, BlockMatrix, Mat, TracialInclusion};

pub const PRESETS: [(&str, &[usize], &[&[usize]]); 4] = [
    ("scalars-in-m2", &[1], &[&[2]]),
    ("scalars-in-c2", &[1], &[&[1], &[1]]),
    ("diag-in-m2", &[1, 1], &[&[1, 1]]),
    ("m2-in-m4", &[2], &[&[2]]),
];

pub fn preset(name: &str) -> TracialInclusion {
    let (_, n, l) = PRESETS.iter().find(|p| p.0 == name).expect("known preset");
    TracialInclusion::new(n.to_vec(), l.iter().map(|r| r.to_vec()).collect()).unwrap()
}

/// Temperley–Lieb diagram on `n` strands: points `0..n` on top, `n..2n` on the bottom,
/// `pair[p]` is the point joined to `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    pub n: usize,
    pub pair: Vec<usize>,
}

impl Diagram {
    pub fn identity(n: usize) -> Self {
        Self { n, pair: (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect() }
    }

    /// The cup–cap `U_i` joining strands `i` and `i + 1`.
    pub fn cup(n: usize, i: usize) -> Self {
        let mut d = Self::identity(n);
        d.pair[i] = i + 1;
        d.pair[i + 1] = i;
        d.pair[n + i] = n + i + 1;
        d.pair[n + i + 1] = n + i;
        d
    }

    /// `self` stacked on top of `other`; returns the product and the number of closed loops.
    pub fn compose(&self, other: &Self) -> (Self, usize) {
        let n = self.n;
        // Points 0..2n belong to self, 2n..4n to other; self's bottom meets other's top.
        let partner = |p: usize| if p < 2 * n { self.pair[p] } else { other.pair[p - 2 * n] + 2 * n };
        let across = |p: usize| if p < 2 * n { p - n + 2 * n } else { p - 2 * n + n };
        let outer = |p: usize| p < n || p >= 3 * n;
        let relabel = |p: usize| if p < n { p } else { p - 2 * n };
        let mut pair = vec![usize::MAX; 2 * n];
        let mut seen = vec![false; 4 * n];
        for start in (0..n).chain(3 * n..4 * n) {
            if seen[start] {
                continue;
            }
            let mut p = start;
            loop {
                seen[p] = true;
                let q = partner(p);
                seen[q] = true;
                if outer(q) {
                    pair[relabel(start)] = relabel(q);
                    pair[relabel(q)] = relabel(start);
                    break;
                }
                p = across(q);
            }
        }
        let mut loops = 0;
        for start in n..2 * n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                let q = partner(p);
                seen[q] = true;
                p = across(q);
            }
        }
        (Self { n, pair }, loops)
    }

    /// Loops left after joining each top point to the bottom point below it.
    pub fn closure_loops(&self) -> usize {
        let n = self.n;
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                let q = self.pair[p];
                seen[q] = true;
                p = if q < n { q + n } else { q - n };
            }
        }
        loops
    }
}

/// A word `e_{w₁} e_{w₂} …` on `n` strands as `δ^{loops − len} D` with `e_i = δ⁻¹ U_i`;
/// returns `(D, loops − len)`.
pub fn word_diagram(word: &[u16], n: usize) -> (Diagram, i64) {
    let mut d = Diagram::identity(n);
    let mut exp = 0i64;
    for &g in word {
        let (next, loops) = d.compose(&Diagram::cup(n, g as usize));
        d = next;
        exp += loops as i64 - 1;
    }
    (d, exp)
}

/// Markov trace of a word on `n` strands at loop value `δ`, normalised by `tr(1) = 1`.
pub fn diagram_trace(word: &[u16], n: usize, delta: f64) -> f64 {
    let (d, exp) = word_diagram(word, n);
    delta.powi(exp as i32 + d.closure_loops() as i32 - n as i32)
}

/// All diagrams reachable from the identity by right multiplication with cup–caps.
pub fn saturate(n: usize) -> HashSet<Diagram> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([Diagram::identity(n)]);
    while let Some(d) = queue.pop_front() {
        if !seen.insert(d.clone()) {
            continue;
        }
        for i in 0..n.saturating_sub(1) {
            queue.push_back(d.compose(&Diagram::cup(n, i)).0);
        }
    }
    seen
}

/// Perron–Frobenius eigenvalue of `ΛΛᵀ` by power iteration.
pub fn pf_eigenvalue(lambda: &[Vec<usize>]) -> f64 {
    let rows = lambda.len();
    let a: Vec<Vec<f64>> = (0..rows)
        .map(|i| (0..rows).map(|j| lambda[i].iter().zip(&lambda[j]).map(|(x, y)| (x * y) as f64).sum()).collect())
        .collect();
    // Shift by the identity so periodic graphs still converge.
    let mut v = vec![1.0; rows];
    let mut value = 0.0;
    for _ in 0..5000 {
        let w: Vec<f64> = (0..rows).map(|i| v[i] + (0..rows).map(|j| a[i][j] * v[j]).sum::<f64>()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        value = (0..rows).map(|i| next[i] * (next[i] + (0..rows).map(|j| a[i][j] * next[j]).sum::<f64>())).sum::<f64>()
            - 1.0;
        if next.iter().zip(&v).all(|(x, y)| (x - y).abs() < 1e-15) {
            break;
        }
        v = next;
    }
    value
}

/// Block sizes along the tower by counting paths in the Bratteli diagram; `dim M_k` is the
/// sum of their squares. Entry 0 is `N`.
pub fn bratteli_dims(n: &[usize], lambda: &[Vec<usize>], depth: usize) -> Vec<usize> {
    let mut sizes: Vec<Vec<usize>> = vec![n.to_vec()];
    for k in 0..=depth {
        let prev = sizes.last().unwrap();
        let next: Vec<usize> = if k % 2 == 0 {
            lambda.iter().map(|row| row.iter().zip(prev).map(|(a, b)| a * b).sum()).collect()
        } else {
            (0..lambda[0].len()).map(|i| lambda.iter().zip(prev).map(|(row, b)| row[i] * b).sum()).collect()
        };
        sizes.push(next);
    }
    sizes.iter().map(|s| s.iter().map(|x| x * x).sum()).collect()
}

/// Orthogonal projection of `x` onto the embedded copy of `N` in `L²(M, tr)`, solved
/// through the Gram matrix of the embedded matrix units.
pub fn gram_expectation(incl: &TracialInclusion, x: &BlockMatrix) -> BlockMatrix {
    let basis: Vec<BlockMatrix> = incl.n.algebra.basis().iter().map(|b| incl.embed(b)).collect();
    let k = basis.len();
    let tr = |a: &BlockMatrix, b: &BlockMatrix| incl.m.tr(&(&a.adjoint() * b));
    let g = Mat::from_fn(k, k, |i, j| tr(&basis[i], &basis[j]));
    let rhs = jtower::matrix_algebra::Vector::from_fn(k, |i, _| tr(&basis[i], x));
    let coef = g.lu().solve(&rhs).expect("Gram matrix is invertible");
    basis.iter().zip(coef.iter()).fold(incl.m.algebra.zero(), |acc, (b, &s)| &acc + &b.scale(s))
}

/// `dim` of the commutant of the right action of `N` on `L²(M)`, by the Kronecker solver.
pub fn basic_construction_dim(incl: &TracialInclusion) -> usize {
    let g = jtower::matrix_algebra::gns_space(&incl.m.algebra, incl.m.trace.weights().to_vec()).unwrap();
    let gens: Vec<Mat> = incl.n.algebra.basis().iter().map(|b| g.right(&incl.embed(b))).collect();
    commutant(&gens, g.dim()).len()
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n) * c(1.0)
}
