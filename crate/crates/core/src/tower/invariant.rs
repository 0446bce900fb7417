//! Relative commutants, the standard invariant, the principal graph and the two-route
//! checks through tensor powers of `L²(M)`.

use serde::Serialize;

use super::theorem::jones_projection;
use super::{build_wn, isomorphism_witness, TensorPower, Tower, Wn};
use crate::bimodule::{decompose, equivalent, intertwiners, Bimodule, Sides};
use crate::error::{Error, Result};
use crate::matrix_algebra::linalg::{commutant, hermitian_eigen, isotypic_components, max_abs, projection_rank, Vector};
use crate::matrix_algebra::{c, BlockMatrix, Isotypic, Mat, Summand};
use crate::params;
use crate::report::Report;

/// Blocks up to this size are solved through the Kronecker commutant system.
const KRON_LIMIT: usize = 16;

/// `ε(k)`: 0 for even `k`, −1 for odd `k` (so `ε(−1) = −1`).
pub fn epsilon(k: isize) -> isize {
    if k.rem_euclid(2) == 0 {
        0
    } else {
        -1
    }
}

/// Basis of `M_k′ ∩ M_l` as elements of `M_l`, for `−1 ≤ k ≤ l ≤ depth`.
pub fn relative_commutant(t: &Tower, k: isize, l: isize) -> Result<Vec<BlockMatrix>> {
    check_levels(t, k, l)?;
    let upper = &t.algebra(l).algebra;
    let mut out = Vec::new();
    for (b, &nb) in upper.dims().iter().enumerate() {
        let local = if nb <= KRON_LIMIT {
            // Generators: E_00 and the neighbouring off-diagonal units of every block.
            let lower = &t.algebra(k).algebra;
            let gens: Vec<Mat> = lower
                .dims()
                .iter()
                .enumerate()
                .flat_map(|(j, &d)| (0..d).flat_map(move |r| (0..d).map(move |s| (j, r, s))))
                .filter(|&(_, r, s)| (r == 0 && s == 0) || r.abs_diff(s) == 1)
                .map(|(j, r, s)| t.embed(&lower.unit(j, r, s), k, l).blocks[b].clone())
                .collect();
            commutant(&gens, nb)
        } else {
            components(t, k, l, b)
                .iter()
                .flat_map(|iso| iso.copies.iter().flat_map(|x| iso.copies.iter().map(move |y| x * y.adjoint())))
                .collect()
        };
        for m in local {
            let mut x = upper.zero();
            x.blocks[b] = m;
            out.push(x);
        }
    }
    Ok(out)
}

fn check_levels(t: &Tower, k: isize, l: isize) -> Result<()> {
    if k < -1 || k > l || l > t.depth() as isize {
        return Err(Error::DepthInsufficient { required: l.max(0) as usize, have: t.depth() });
    }
    Ok(())
}

/// Isotypic components of block `b` of `M_l` under `M_k`; the commutant of `M_k` in that
/// block is `⊕ 1 ⊗ M_multiplicity`.
fn components(t: &Tower, k: isize, l: isize, b: usize) -> Vec<Isotypic> {
    let lower = &t.algebra(k).algebra;
    let nb = t.algebra(l).algebra.dims()[b];
    isotypic_components(lower.dims(), nb, |j, r, s| t.embed(&lower.unit(j, r, s), k, l).blocks[b].clone())
}

/// `𝓗_a^b = L²(M) ⊗_{M_ε(a)} L²(M) ⊗ … ⊗_{M_ε(b−2)} L²(M)` with left `M_ε(a−1)` and
/// right `M_ε(b−1)` actions, for `0 ≤ a < b`.
pub fn partial_tensor(t: &Tower, a: isize, b: isize) -> Result<Bimodule> {
    let l2 = Bimodule::l2(t.algebra(0));
    let base = t.base_inclusion().clone();
    let pick = |k: isize| if epsilon(k) == 0 { None } else { Some(base.clone()) };
    let factors = vec![l2; (b - a) as usize];
    let middles = (a..=b - 2).map(pick).collect();
    let mut h = TensorPower::with_middles(factors, middles)?.module().clone();
    if epsilon(a - 1) != 0 {
        h = h.restrict_left(&base)?;
    }
    if epsilon(b - 1) != 0 {
        h = h.restrict_right(&base)?;
    }
    Ok(h)
}

/// Both routes to `dim(M_k′ ∩ M_l)` for `−1 ≤ k < l ≤ min(2n − 1, depth)`, plus the check
/// that `J_n(M_k′ ∩ M_l)` commutes with the images of the generators of `M_k`.
pub fn verify_corollary_2_3(t: &Tower, n: usize, tol: f64) -> Result<Report> {
    let mut r = Report::new();
    let top = (2 * n as isize - 1).min(t.depth() as isize);
    let witness = if n >= 1 && t.depth() >= 2 * n - 1 { Some(isomorphism_witness(t, n)?) } else { None };
    if witness.is_none() {
        r.note(format!("containment in J_{n} images skipped: depth {} < {}", t.depth(), 2 * n - 1));
    }
    let level = 2 * n - 2;
    for l in 0..=top {
        for k in -1..l {
            let basis = relative_commutant(t, k, l)?;
            let h = partial_tensor(t, k + 1, l + 1)?;
            let inter = intertwiners(&h, &h, Sides::Both)?.dim();
            r.exact(
                "dimension",
                params! {"n" => n, "k" => k, "l" => l, "commutant" => basis.len(), "intertwiners" => inter},
                basis.len() == inter,
            );
            let Some(w) = &witness else { continue };
            let act = |x: &BlockMatrix| -> Mat {
                if l as usize <= level {
                    t.gns(level as isize).left(&t.embed(x, l, level as isize))
                } else {
                    let dim = t.gns(level as isize).dim();
                    Mat::from_columns(&(0..dim).map(|a| t.basic_apply(level, x, &unit(dim, a))).collect::<Vec<_>>())
                }
            };
            // Images of M and of e_0, …, e_{k-1}.
            let gens: Vec<&Mat> = w
                .generators
                .iter()
                .filter(|g| g.name == "m" || g.name[1..].parse::<isize>().is_ok_and(|j| j < k))
                .filter(|_| k >= 0)
                .map(|g| &g.image)
                .collect();
            let mut worst = 0.0f64;
            for x in &basis {
                let jx = w.w.adjoint() * act(x) * &w.w;
                for g in &gens {
                    worst = worst.max(max_abs(&(&jx * *g - *g * &jx)));
                }
            }
            r.residual("containment", params! {"n" => n, "k" => k, "l" => l}, worst, tol);
        }
    }
    Ok(r)
}

/// Largest `dim L²(M_{l−k−1}) · dim L²(M)` for which [`cross_route_dims`] builds `𝓗_{k+1}^{l+1}`.
pub const CROSS_ROUTE_LIMIT: usize = 4096;

/// `dim(N′∩M_l)` and `dim(M′∩M_l)` against the intertwiner algebras of `𝓗_0^{l+1}` and
/// `𝓗_1^{l+1}`, for every level small enough.
pub fn cross_route_dims(t: &Tower) -> Result<Report> {
    let mut r = Report::new();
    let l2 = t.gns(0).dim();
    for l in 0..=t.depth() as isize {
        for k in [-1isize, 0] {
            if k >= l {
                continue;
            }
            if t.gns(l - k - 1).dim() * l2 > CROSS_ROUTE_LIMIT {
                r.note(format!("cross-route check for (k, l) = ({k}, {l}) skipped: tensor dimension above {CROSS_ROUTE_LIMIT}"));
                continue;
            }
            let direct = decompose_level(t, k, l)?.dim;
            let h = partial_tensor(t, k + 1, l + 1)?;
            let inter = intertwiners(&h, &h, Sides::Both)?.dim();
            r.exact("cross-route", params! {"k" => k, "l" => l, "grid" => direct, "intertwiners" => inter}, direct == inter);
        }
    }
    Ok(r)
}

fn unit(n: usize, k: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[k] = c(1.0);
    v
}

fn dense_to_blocks(dims: &[usize], m: &Mat) -> BlockMatrix {
    let mut off = 0;
    let blocks = dims
        .iter()
        .map(|&d| {
            let b = m.view((off, off), (d, d)).into_owned();
            off += d;
            b
        })
        .collect();
    BlockMatrix::new(blocks)
}

/// A relative commutant with its simple summands, in the dense coordinates of `M_level`.
struct Decomposed {
    level: isize,
    dim: usize,
    summands: Vec<Summand>,
}

fn decompose_level(t: &Tower, k: isize, l: isize) -> Result<Decomposed> {
    check_levels(t, k, l)?;
    let dims = t.algebra(l).algebra.dims().to_vec();
    let total: usize = dims.iter().sum();
    let mut summands = Vec::new();
    let mut off = 0;
    for (b, &nb) in dims.iter().enumerate() {
        for iso in components(t, k, l, b) {
            let s = iso.summand();
            let place = |m: &Mat| {
                let mut out = Mat::zeros(total, total);
                out.view_mut((off, off), (nb, nb)).copy_from(m);
                out
            };
            summands.push(Summand {
                central: place(&s.central),
                minimal: s.minimal.iter().map(place).collect(),
                size: s.size,
                minimal_rank: s.minimal_rank,
            });
        }
        off += nb;
    }
    let dim = summands.iter().map(|s| s.size * s.size).sum();
    Ok(Decomposed { level: l, dim, summands })
}

/// `mult[j][i]`: copies of summand `i` of `a` inside summand `j` of `b` (`a ⊆ b`, same or
/// lower level).
fn inclusion_matrix(t: &Tower, a: &Decomposed, b: &Decomposed) -> Vec<Vec<usize>> {
    let dims_a = t.algebra(a.level).algebra.dims().to_vec();
    let dims_b = t.algebra(b.level).algebra.dims().to_vec();
    b.summands
        .iter()
        .map(|zb| {
            a.summands
                .iter()
                .map(|sa| {
                    let f = t.embed(&dense_to_blocks(&dims_a, &sa.minimal[0]), a.level, b.level).to_dense();
                    let _ = &dims_b;
                    projection_rank(&(&f * &zb.central)) / zb.minimal_rank
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelData {
    pub level: isize,
    pub dim: usize,
    /// Sizes of the simple summands.
    pub summands: Vec<usize>,
}

/// The grid `N′∩M_k` (top row) and `M′∩M_k` (bottom row) with inclusion matrices.
#[derive(Clone, Debug, Serialize)]
pub struct StandardInvariant {
    pub n_row: Vec<LevelData>,
    pub m_row: Vec<LevelData>,
    /// `n_inclusions[i]`: `N′∩M_{i−1} ⊆ N′∩M_i`, rows indexed by summands of the larger one.
    pub n_inclusions: Vec<Vec<Vec<usize>>>,
    /// `m_inclusions[i]`: `M′∩M_i ⊆ M′∩M_{i+1}`.
    pub m_inclusions: Vec<Vec<Vec<usize>>>,
    /// `vertical[i]`: `M′∩M_i ⊆ N′∩M_i`.
    pub vertical: Vec<Vec<Vec<usize>>>,
}

impl StandardInvariant {
    /// Dimensions, summand sizes and inclusion matrices fit together.
    pub fn consistency(&self) -> Report {
        let mut r = Report::new();
        for row in self.n_row.iter().chain(&self.m_row) {
            let sq: usize = row.summands.iter().map(|s| s * s).sum();
            r.exact("summand-dims", params! {"level" => row.level, "dim" => row.dim, "sum" => sq}, sq == row.dim);
        }
        let unital = |small: &LevelData, big: &LevelData, m: &Vec<Vec<usize>>| {
            big.summands.iter().zip(m).all(|(&sb, row)| row.iter().zip(&small.summands).map(|(a, b)| a * b).sum::<usize>() == sb)
        };
        for (i, m) in self.n_inclusions.iter().enumerate() {
            let ok = unital(&self.n_row[i], &self.n_row[i + 1], m);
            r.exact("n-inclusion", params! {"level" => self.n_row[i + 1].level}, ok);
        }
        for (i, m) in self.m_inclusions.iter().enumerate() {
            let ok = unital(&self.m_row[i], &self.m_row[i + 1], m);
            r.exact("m-inclusion", params! {"level" => self.m_row[i + 1].level}, ok);
        }
        for (i, m) in self.vertical.iter().enumerate() {
            let ok = unital(&self.m_row[i], &self.n_row[i + 1], m);
            r.exact("vertical-inclusion", params! {"level" => self.m_row[i].level}, ok);
        }
        r
    }
}

fn level_data(d: &Decomposed) -> LevelData {
    LevelData { level: d.level, dim: d.dim, summands: d.summands.iter().map(|s| s.size).collect() }
}

pub fn standard_invariant(t: &Tower) -> Result<StandardInvariant> {
    t.require_depth(1)?;
    let depth = t.depth() as isize;
    let n_levels: Vec<Decomposed> = (-1..=depth).map(|l| decompose_level(t, -1, l)).collect::<Result<_>>()?;
    let m_levels: Vec<Decomposed> = (0..=depth).map(|l| decompose_level(t, 0, l)).collect::<Result<_>>()?;
    let n_inclusions = n_levels.windows(2).map(|w| inclusion_matrix(t, &w[0], &w[1])).collect();
    let m_inclusions = m_levels.windows(2).map(|w| inclusion_matrix(t, &w[0], &w[1])).collect();
    let vertical = m_levels.iter().zip(&n_levels[1..]).map(|(m, n)| inclusion_matrix(t, m, n)).collect();
    Ok(StandardInvariant {
        n_row: n_levels.iter().map(level_data).collect(),
        m_row: m_levels.iter().map(level_data).collect(),
        n_inclusions,
        m_inclusions,
        vertical,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Vertex {
    pub id: usize,
    /// First level `k` at which the vertex appears as a summand of `N′∩M_k`.
    pub level: isize,
    /// Even vertices come from odd levels `2k − 1`.
    pub even: bool,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrincipalGraph {
    pub vertices: Vec<Vertex>,
    /// `(even vertex, odd vertex, multiplicity)`.
    pub edges: Vec<(usize, usize, usize)>,
    pub truncated: bool,
    pub depth: usize,
    /// `class[k + 1][i]`: vertex of summand `i` of `N′∩M_k`.
    pub classes: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub anomalies: Vec<String>,
}

impl PrincipalGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph principal {\n");
        for v in &self.vertices {
            let shape = if v.even { "circle" } else { "box" };
            let label = if v.level == -1 { format!("*{}", v.id) } else { format!("{}", v.id) };
            s.push_str(&format!("  v{} [label=\"{label}\", shape={shape}];\n", v.id));
        }
        for &(a, b, m) in &self.edges {
            if m == 1 {
                s.push_str(&format!("  v{a} -- v{b};\n"));
            } else {
                s.push_str(&format!("  v{a} -- v{b} [label=\"{m}\"];\n"));
            }
        }
        if self.truncated {
            s.push_str(&format!("  // graph truncated at depth {}\n", self.depth));
        }
        s.push_str("}\n");
        s
    }

    pub fn even_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.even).count()
    }
}

/// Summands of `N′∩M_k` identified along `f ↦ f e_{k+1}` into `N′∩M_{k+2}`, joined by
/// inclusion multiplicities.
pub fn principal_graph(t: &Tower) -> Result<PrincipalGraph> {
    t.require_depth(2)?;
    let depth = t.depth() as isize;
    let levels: Vec<Decomposed> = (-1..=depth).map(|l| decompose_level(t, -1, l)).collect::<Result<_>>()?;
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut anomalies = Vec::new();
    let mut new_at_last = false;
    for (pos, d) in levels.iter().enumerate() {
        let l = d.level;
        let mut class: Vec<Option<usize>> = vec![None; d.summands.len()];
        if pos >= 2 {
            let prev = &levels[pos - 2];
            let dims = t.algebra(prev.level).algebra.dims().to_vec();
            let e = t.e_in((l - 1) as usize, l as usize);
            for (i, s) in prev.summands.iter().enumerate() {
                let f = t.embed(&dense_to_blocks(&dims, &s.minimal[0]), prev.level, l);
                let fe = (&f * &e).to_dense();
                let hits: Vec<usize> = d
                    .summands
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| max_abs(&(&fe * &z.central)) > 1e-8)
                    .map(|(j, _)| j)
                    .collect();
                match hits.as_slice() {
                    [j] => {
                        let z = &d.summands[*j];
                        if projection_rank(&(&fe * &z.central)) != z.minimal_rank {
                            anomalies.push(format!("f e_{} is not minimal at level {l}", l - 1));
                        }
                        if class[*j].replace(classes[pos - 2][i]).is_some() {
                            anomalies.push(format!("two summands identified with summand {j} at level {l}"));
                        }
                    }
                    _ => anomalies.push(format!("f e_{} meets {} summands at level {l}", l - 1, hits.len())),
                }
            }
        }
        let mut fresh = false;
        let class: Vec<usize> = class
            .into_iter()
            .enumerate()
            .map(|(j, c)| {
                c.unwrap_or_else(|| {
                    fresh = true;
                    let id = vertices.len();
                    vertices.push(Vertex { id, level: l, even: l.rem_euclid(2) == 1, size: d.summands[j].size });
                    id
                })
            })
            .collect();
        if l == depth {
            new_at_last = fresh;
        }
        classes.push(class);
    }
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for pos in 0..levels.len() - 1 {
        let m = inclusion_matrix(t, &levels[pos], &levels[pos + 1]);
        for (j, row) in m.iter().enumerate() {
            for (i, &mult) in row.iter().enumerate() {
                if mult == 0 {
                    continue;
                }
                let (a, b) = (classes[pos][i], classes[pos + 1][j]);
                let (even, odd) = if vertices[a].even { (a, b) } else { (b, a) };
                match edges.iter().find(|e| e.0 == even && e.1 == odd) {
                    Some(e) if e.2 != mult => {
                        anomalies.push(format!("edge {even}-{odd} has multiplicity {} and {mult}", e.2))
                    }
                    Some(_) => {}
                    None => edges.push((even, odd, mult)),
                }
            }
        }
    }
    Ok(PrincipalGraph { vertices, edges, truncated: new_at_last, depth: t.depth(), classes, anomalies })
}

fn range_of(p: &Mat) -> Mat {
    let rank = projection_rank(p);
    let (_, vecs) = hermitian_eigen(p);
    vecs.columns(0, rank).into_owned()
}

/// The `(N, N)`-bimodule cut out of `L²(M)^{⊗_N n}` by `J_n(x)` for a projection `x ∈ M_{2n−1}`
/// given through its action on `L²(M_{2n−2})`; `nn` is the tensor power as `(N, N)`-bimodule.
fn cut(w: &Wn, nn: &Bimodule, action: &Mat) -> Result<Bimodule> {
    nn.sub_bimodule(&range_of(&(w.w.adjoint() * action * &w.w)))
}

/// Irreducible `(N, N)`-classes of `L²(M)^{⊗_N k}` against the simple summands of
/// `N′∩M_{2k−1}`, and equivalence of the cuts by `J_k(f)` and `J_{k+1}(f e_{2k})`.
pub fn bimodule_correspondence(t: &Tower, k: usize) -> Result<Report> {
    if k == 0 {
        return Err(Error::Incompatible("the correspondence starts at k = 1".into()));
    }
    t.require_depth(2 * k)?;
    let mut r = Report::new();
    let base = t.base_inclusion();
    let (w_low, w_high) = (build_wn(t, k)?, build_wn(t, k + 1)?);
    let nn_low = w_low.space.module().restrict_left(base)?.restrict_right(base)?;
    let nn_high = w_high.space.module().restrict_left(base)?.restrict_right(base)?;
    let classes = decompose(&nn_low)?.len();
    let level = decompose_level(t, -1, 2 * k as isize - 1)?;
    r.exact(
        "class-count",
        params! {"k" => k, "classes" => classes, "summands" => level.summands.len()},
        classes == level.summands.len(),
    );

    let low = 2 * k - 2;
    let dims = t.algebra(2 * k as isize - 1).algebra.dims().to_vec();
    let dim_low = t.gns(low as isize).dim();
    let act_low = |f: &BlockMatrix| -> Mat {
        Mat::from_columns(&(0..dim_low).map(|a| t.basic_apply(low, f, &unit(dim_low, a))).collect::<Vec<_>>())
    };
    let g_high = t.gns(2 * k as isize);
    let e_high = jones_projection(t, 2 * k);
    let mut cuts = Vec::new();
    for (i, s) in level.summands.iter().enumerate() {
        let f = dense_to_blocks(&dims, &s.minimal[0]);
        let a = cut(&w_low, &nn_low, &act_low(&f))?;
        let b = cut(&w_high, &nn_high, &(g_high.left(&t.embed(&f, 2 * k as isize - 1, 2 * k as isize)) * &e_high))?;
        r.exact("shift-equivalence", params! {"k" => k, "summand" => i}, equivalent(&a, &b)?);
        if s.size >= 2 {
            let g = dense_to_blocks(&dims, &s.minimal[1]);
            let other = cut(&w_low, &nn_low, &act_low(&g))?;
            r.exact("same-summand", params! {"k" => k, "summand" => i}, equivalent(&a, &other)?);
        }
        cuts.push(a);
    }
    for i in 0..cuts.len() {
        for j in (i + 1)..cuts.len() {
            r.exact("distinct-summands", params! {"k" => k, "pair" => [i, j]}, !equivalent(&cuts[i], &cuts[j])?);
        }
    }
    Ok(r)
}
