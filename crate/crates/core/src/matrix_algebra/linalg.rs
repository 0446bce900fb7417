//! Dense linear algebra helpers over `C`.

use nalgebra::{DVector, SymmetricEigen};
use rand::Rng;

use super::algebra::{c, Mat, C};
use crate::error::{Error, Result};

pub type Vector = DVector<C>;

/// Largest entry modulus.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues descending.
pub fn hermitian_eigen(m: &Mat) -> (Vec<f64>, Mat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), Mat::zeros(0, 0));
    }
    let h = (m + m.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Mat::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Orthonormal basis (as columns) of the null space of `a`.
///
/// Singular values below `rel_tol · σ_max` (or an absolute `1e-12` floor) count as zero.
pub fn nullspace(a: &Mat, rel_tol: f64) -> Mat {
    let n = a.ncols();
    let gram = a.adjoint() * a;
    let (vals, vecs) = hermitian_eigen(&gram);
    let top = vals.first().copied().unwrap_or(0.0).max(0.0);
    let cut = (rel_tol * rel_tol * top).max(1e-24);
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] <= cut).collect();
    Mat::from_fn(n, keep.len(), |r, k| vecs[(r, keep[k])])
}

/// Modified Gram–Schmidt with one re-orthogonalization pass; drops dependent vectors.
pub fn orthonormalize(vectors: &[Vector], tol: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        if let Some(u) = orthogonal_part(&basis, v, tol) {
            basis.push(u);
        }
    }
    basis
}

fn orthogonal_part(basis: &[Vector], v: &Vector, tol: f64) -> Option<Vector> {
    let norm0 = v.norm();
    if norm0 == 0.0 {
        return None;
    }
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let p = b.dotc(&w);
            w.axpy(-p, b, c(1.0));
        }
    }
    let n = w.norm();
    (n > tol * norm0.max(1.0)).then(|| w / c(n))
}

/// Greedy choice of linearly independent columns from a stream, stopping at `target` of them.
pub struct IndependentSelector {
    basis: Vec<Vector>,
    pub chosen: Vec<usize>,
    target: usize,
    tol: f64,
}

impl IndependentSelector {
    pub fn new(target: usize, tol: f64) -> Self {
        Self { basis: Vec::new(), chosen: Vec::new(), target, tol }
    }

    pub fn is_full(&self) -> bool {
        self.chosen.len() >= self.target
    }

    /// Offers column `idx`; returns whether it was kept.
    pub fn offer(&mut self, idx: usize, v: &Vector) -> bool {
        if self.is_full() {
            return false;
        }
        match orthogonal_part(&self.basis, v, self.tol) {
            Some(u) => {
                self.basis.push(u);
                self.chosen.push(idx);
                true
            }
            None => false,
        }
    }
}

/// Column-major `vec` of a square matrix and its inverse.
pub fn vec_of(m: &Mat) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

pub fn unvec(v: &[C], n: usize) -> Mat {
    Mat::from_column_slice(n, n, v)
}

/// Orthonormal (Hilbert–Schmidt) basis of `{x : x g = g x for every generator g}`.
///
/// Solves the stacked system `(I⊗g − gᵀ⊗I) vec(x) = 0`. An empty generator list gives the
/// full matrix algebra.
pub fn commutant(generators: &[Mat], dim: usize) -> Vec<Mat> {
    let n2 = dim * dim;
    let mut normal = Mat::zeros(n2, n2);
    let id = Mat::identity(dim, dim);
    for g in generators {
        let k = id.kronecker(g) - g.transpose().kronecker(&id);
        normal += k.adjoint() * &k;
    }
    let null = nullspace_of_normal(&normal);
    (0..null.ncols()).map(|k| unvec(null.column(k).as_slice(), dim)).collect()
}

fn nullspace_of_normal(normal: &Mat) -> Mat {
    let n = normal.nrows();
    let (vals, vecs) = hermitian_eigen(normal);
    let top = vals.first().copied().unwrap_or(0.0).max(1.0);
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] <= 1e-10 * top).collect();
    Mat::from_fn(n, keep.len(), |r, k| vecs[(r, keep[k])])
}

/// `(A ⊗ B) X` with Kronecker index `a·dim(B) + b`, without forming `A ⊗ B`.
pub fn kron_mul(a: &Mat, b: &Mat, x: &Mat) -> Mat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    assert_eq!(x.nrows(), ca * cb);
    let bt = b.transpose();
    let mut out = Mat::zeros(ra * rb, x.ncols());
    for k in 0..x.ncols() {
        let y = Mat::from_fn(ca, cb, |i, j| x[(i * cb + j, k)]);
        let z = a * y * &bt;
        for i in 0..ra {
            for j in 0..rb {
                out[(i * rb + j, k)] = z[(i, j)];
            }
        }
    }
    out
}

/// The linear map `A` with `A S = T` where the columns of `S` span the source.
///
/// Returns the map and the residual `max |A S − T|`, which measures well-definedness.
pub fn map_from_spanning(s: &Mat, t: &Mat) -> Result<(Mat, f64)> {
    let gram = s * s.adjoint();
    let inv = gram
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("spanning set does not span the source".into()))?;
    let a = t * s.adjoint() * inv;
    let residual = max_abs(&(&a * s - t));
    Ok((a, residual))
}

/// Eigenvalue clusters of a Hermitian matrix as spectral projections, eigenvalues descending.
pub fn spectral_projections(h: &Mat, gap: f64) -> Vec<(f64, Mat)> {
    let (vals, vecs) = hermitian_eigen(h);
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match out.last_mut() {
            Some((rep, idx)) if (*rep - v).abs() <= gap => idx.push(i),
            _ => out.push((v, vec![i])),
        }
    }
    out.into_iter()
        .map(|(v, idx)| {
            let u = Mat::from_fn(h.nrows(), idx.len(), |r, k| vecs[(r, idx[k])]);
            (v, &u * u.adjoint())
        })
        .collect()
}

/// Rank of a projection, read off its trace.
pub fn projection_rank(p: &Mat) -> usize {
    p.trace().re.round().max(0.0) as usize
}

/// One simple summand of a finite-dimensional *-algebra of matrices.
#[derive(Clone, Debug)]
pub struct Summand {
    pub central: Mat,
    /// Mutually orthogonal minimal projections summing to `central`.
    pub minimal: Vec<Mat>,
    /// The summand is `M_size`.
    pub size: usize,
    /// Ambient rank of a minimal projection.
    pub minimal_rank: usize,
}

/// One isotypic component of a *-representation `π` of `⊕_j M_{d_j}`.
///
/// `copies[c]` holds the orthonormal columns `π(E^j_{r0}) v_c` (`r < d_j`), where the `v_c`
/// form an orthonormal basis of the range of `π(E^j_{00})`.
#[derive(Clone, Debug)]
pub struct Isotypic {
    pub block: usize,
    pub copies: Vec<Mat>,
}

impl Isotypic {
    pub fn multiplicity(&self) -> usize {
        self.copies.len()
    }

    /// `π(E^j_{cc})`-style minimal projection of the commutant onto copy `c`.
    pub fn projection(&self, c: usize) -> Mat {
        &self.copies[c] * self.copies[c].adjoint()
    }

    /// The isotypic component as a simple summand of the commutant `π(A)′`.
    pub fn summand(&self) -> Summand {
        let minimal: Vec<Mat> = (0..self.multiplicity()).map(|c| self.projection(c)).collect();
        let n = self.copies[0].nrows();
        let central = minimal.iter().fold(Mat::zeros(n, n), |acc, p| acc + p);
        Summand { central, minimal, size: self.multiplicity(), minimal_rank: self.copies[0].ncols() }
    }
}

/// Isotypic components of the representation with matrix units `unit(j, r, s) = π(E^j_{rs})`
/// on `C^n`; only `unit(j, r, 0)` is queried. Blocks acting as zero are skipped.
pub fn isotypic_components(dims: &[usize], n: usize, unit: impl Fn(usize, usize, usize) -> Mat) -> Vec<Isotypic> {
    let mut out = Vec::new();
    for (j, &d) in dims.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let moves: Vec<Mat> = (0..d).map(|r| unit(j, r, 0)).collect();
        let m = projection_rank(&moves[0]);
        if m == 0 {
            continue;
        }
        let (_, vecs) = hermitian_eigen(&moves[0]);
        let copies = (0..m)
            .map(|cc| {
                let v = vecs.column(cc);
                Mat::from_columns(&moves.iter().map(|e| e * v).collect::<Vec<_>>())
            })
            .collect();
        debug_assert!(n == moves[0].nrows());
        out.push(Isotypic { block: j, copies });
    }
    out
}

/// Simple summands of the *-algebra spanned by `basis` (matrices on a common space).
///
/// The span must contain the identity and be closed under products and adjoints; closure
/// is probed on random elements and failures are reported as [`Error::NotAnAlgebra`].
pub fn center_decomposition<R: Rng>(basis: &[Mat], rng: &mut R) -> Result<Vec<Summand>> {
    let ortho = orthonormal_matrices(basis);
    let dim = basis.first().map_or(0, |b| b.nrows());
    if ortho.is_empty() {
        return Err(Error::Incompatible("empty algebra".into()));
    }
    let in_span = |x: &Mat| {
        let mut r = x.clone();
        for b in &ortho {
            let p = hs_inner(b, &r);
            r -= b * p;
        }
        max_abs(&r) <= 1e-8 * (1.0 + max_abs(x))
    };
    if !in_span(&Mat::identity(dim, dim)) {
        return Err(Error::Incompatible("algebra does not contain the identity".into()));
    }
    // Closure and the center are probed with random elements: two generic elements of a
    // finite-dimensional C*-algebra already generate it.
    let probes: Vec<Mat> = (0..3).map(|_| random_combination(&ortho, rng)).collect();
    for a in &probes {
        if !in_span(&a.adjoint()) {
            return Err(Error::NotAnAlgebra);
        }
        for b in &probes {
            if !in_span(&(a * b)) {
                return Err(Error::NotAnAlgebra);
            }
        }
    }

    // Center: Σ c_a [b_a, r] = 0 for every probe r.
    let na = ortho.len();
    let mut normal = Mat::zeros(na, na);
    for r in &probes {
        let cols: Vec<Vector> = ortho.iter().map(|ba| vec_of(&(ba * r - r * ba))).collect();
        let k = Mat::from_columns(&cols);
        normal += k.adjoint() * &k;
    }
    let null = nullspace_of_normal(&normal);
    let center: Vec<Mat> = (0..null.ncols())
        .map(|k| ortho.iter().enumerate().fold(Mat::zeros(dim, dim), |acc, (a, b)| acc + b * null[(a, k)]))
        .collect();

    let z = random_hermitian_combination(&center, rng);
    let gap = 1e-6 * (1.0 + max_abs(&z));
    let h = random_hermitian_combination(&ortho, rng);
    let mut out = Vec::new();
    for (_, p) in spectral_projections(&z, gap) {
        // Park the complement of p far above the spectrum of php.
        let shift = 1.0 + 2.0 * h.norm();
        let hp = &p * &h * &p + (Mat::identity(dim, dim) - &p) * c(shift);
        let minimal: Vec<Mat> = spectral_projections(&hp, 1e-6 * shift)
            .into_iter()
            .filter(|(v, _)| *v < shift - 0.5)
            .map(|(_, f)| f)
            .collect();
        let rank = projection_rank(&p);
        let size = minimal.len();
        if size == 0 || rank % size != 0 {
            return Err(Error::Numerical("inconsistent summand decomposition".into()));
        }
        out.push(Summand { central: p, minimal, size, minimal_rank: rank / size });
    }
    Ok(out)
}

/// `tr(a* b)`.
pub fn hs_inner(a: &Mat, b: &Mat) -> C {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Hilbert–Schmidt orthonormal basis of the span of `ms`.
pub fn orthonormal_matrices(ms: &[Mat]) -> Vec<Mat> {
    let Some(first) = ms.first() else { return Vec::new() };
    let (r, cc) = first.shape();
    let vs: Vec<Vector> = ms.iter().map(|m| Vector::from_column_slice(m.as_slice())).collect();
    orthonormalize(&vs, 1e-9)
        .into_iter()
        .map(|v| Mat::from_column_slice(r, cc, v.as_slice()))
        .collect()
}

fn random_combination<R: Rng>(ms: &[Mat], rng: &mut R) -> Mat {
    let n = ms[0].nrows();
    let mut acc = Mat::zeros(n, n);
    for m in ms {
        let w = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        acc += m * w;
    }
    acc
}

fn random_hermitian_combination<R: Rng>(ms: &[Mat], rng: &mut R) -> Mat {
    let acc = random_combination(ms, rng);
    (&acc + acc.adjoint()) * c(0.5)
}
