//! Surface rigidity matrices and rigidity verdicts.
//!
//! The matrix of a framework `(G, p)` on a surface `m = 0` has one row per
//! edge `uv`, holding `p(u) - p(v)` in the columns of `u` and `p(v) - p(u)` in
//! those of `v`, followed by one row per vertex holding `grad m(p(v))`. Its
//! right nullspace is the space of infinitesimal flexes tangent to the surface.
//!
//! Rank at any particular placement is a lower bound for the generic rank, so
//! full row rank at a sampled placement certifies generic independence, while
//! a deficient rank is only evidence of generic dependence.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::linalg::{self, ExactBackend, ExactRank, QMatrix, RankBackend, RankRegistry};
use crate::rational::Q;
use crate::sparsity::{is_sparse, SparsityVerdict};
use crate::surface::{Point3, Surface};

/// A graph placed on a surface with exact coordinates.
#[derive(Debug, Clone)]
pub struct Framework {
    pub graph: SimpleGraph,
    pub surface: Surface,
    pub placement: Vec<Point3>,
}

impl Framework {
    /// Checks that every point lies on the surface, is nonsingular, and that
    /// the points are pairwise distinct.
    pub fn new(graph: SimpleGraph, surface: Surface, placement: Vec<Point3>) -> Result<Self> {
        if placement.len() != graph.n() {
            return Err(Error::PlacementSize {
                expected: graph.n(),
                got: placement.len(),
            });
        }
        for (i, p) in placement.iter().enumerate() {
            surface.normal_indexed(p, i)?;
        }
        for i in 0..placement.len() {
            for j in i + 1..placement.len() {
                if placement[i] == placement[j] {
                    return Err(Error::CoincidentPoints(i, j));
                }
            }
        }
        Ok(Self {
            graph,
            surface,
            placement,
        })
    }

    /// A random placement from the surface sampler.
    pub fn sample(graph: SimpleGraph, surface: Surface, rng: &mut ChaCha8Rng) -> Result<Self> {
        let placement = surface.sample_placement(graph.n(), rng)?;
        Ok(Self {
            graph,
            surface,
            placement,
        })
    }

    pub fn matrix(&self) -> Result<RigidityMatrix> {
        build_matrix(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowLabel {
    Edge(usize, usize),
    Vertex(usize),
}

/// Edge rows in canonical edge order, then vertex rows in label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityMatrix {
    pub matrix: QMatrix,
    pub labels: Vec<RowLabel>,
}

impl RigidityMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank_exact(&self) -> ExactRank {
        linalg::rank_exact(&self.matrix)
    }

    pub fn to_float(&self) -> DMatrix<f64> {
        self.matrix.to_f64()
    }
}

pub fn build_matrix(f: &Framework) -> Result<RigidityMatrix> {
    let g = &f.graph;
    let n = g.n();
    if f.placement.len() != n {
        return Err(Error::PlacementSize {
            expected: n,
            got: f.placement.len(),
        });
    }
    let normals = f
        .placement
        .iter()
        .enumerate()
        .map(|(i, p)| f.surface.normal_indexed(p, i))
        .collect::<Result<Vec<_>>>()?;
    let edges = g.edge_list();
    let mut m = QMatrix::zeros(edges.len() + n, 3 * n);
    let mut labels = Vec::with_capacity(edges.len() + n);
    for (r, &(u, v)) in edges.iter().enumerate() {
        if f.placement[u] == f.placement[v] {
            return Err(Error::CoincidentPoints(u, v));
        }
        let d = f.placement[u].sub(&f.placement[v]);
        for (i, x) in d.into_iter().enumerate() {
            m.set(r, 3 * v + i, -x.clone());
            m.set(r, 3 * u + i, x);
        }
        labels.push(RowLabel::Edge(u, v));
    }
    for (v, normal) in normals.into_iter().enumerate() {
        let r = edges.len() + v;
        for (i, x) in normal.into_iter().enumerate() {
            m.set(r, 3 * v + i, x);
        }
        labels.push(RowLabel::Vertex(v));
    }
    Ok(RigidityMatrix { matrix: m, labels })
}

/// Floating-point matrix for placements that are not exactly rational.
pub fn build_matrix_f64(
    g: &SimpleGraph,
    s: &Surface,
    placement: &[[f64; 3]],
) -> Result<DMatrix<f64>> {
    let n = g.n();
    if placement.len() != n {
        return Err(Error::PlacementSize {
            expected: n,
            got: placement.len(),
        });
    }
    if placement.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let edges = g.edge_list();
    let mut m = DMatrix::zeros(edges.len() + n, 3 * n);
    for (r, &(u, v)) in edges.iter().enumerate() {
        if placement[u] == placement[v] {
            return Err(Error::CoincidentPoints(u, v));
        }
        for i in 0..3 {
            let d = placement[u][i] - placement[v][i];
            m[(r, 3 * u + i)] = d;
            m[(r, 3 * v + i)] = -d;
        }
    }
    for (v, p) in placement.iter().enumerate() {
        let normal = s.normal_f64(p);
        for i in 0..3 {
            m[(edges.len() + v, 3 * v + i)] = normal[i];
        }
    }
    Ok(m)
}

/// Exact infinitesimal flexes of a framework, as integer vectors of length `3|V|`.
pub fn flexes(f: &Framework) -> Result<Vec<Vec<Q>>> {
    Ok(build_matrix(f)?.rank_exact().nullspace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    /// Full row rank at an exact placement.
    Certified,
    Evidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictBasis {
    /// `rank = 3|V| - k` and `|E| = 2|V| - k`.
    RankTest,
    /// Small complete graph, isostatic exactly when independent.
    Enumeration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub rank: usize,
    pub nullity: usize,
    pub independent: bool,
    pub isostatic: bool,
    pub strength: Strength,
    pub k: u8,
    pub trials: usize,
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    /// Nullity minus the `k` flexes induced by isometries of the surface.
    pub flex_dim_internal: i64,
    pub basis: VerdictBasis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub trials: usize,
    pub seed: u64,
    /// Name in [`RankRegistry`].
    pub backend: String,
    /// Overrides the surface type.
    pub k: Option<u8>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            trials: 3,
            seed: 0,
            backend: "exact".into(),
            k: None,
        }
    }
}

/// Independent random stream for trial `trial` of a seeded computation.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Largest complete graph that is isostatic exactly when independent on a
/// surface of type `k`.
fn enumeration_limit(k: u8) -> usize {
    match k {
        1 => 4,
        2 => 3,
        3 => 2,
        _ => 0,
    }
}

fn surface_type(s: &Surface, opts: &AnalyzeOptions) -> Result<(u8, bool)> {
    if let Some(k) = opts.k {
        if k > 3 {
            return Err(Error::InvalidK(k));
        }
        return Ok((k, false));
    }
    if let Some(k) = s.declared_type {
        return Ok((k, true));
    }
    if !s.has_sampler() {
        return Err(Error::UnknownType(s.name.clone()));
    }
    Ok((compute_type(s, 5, opts.seed)?, false))
}

struct Verdict<'a> {
    g: &'a SimpleGraph,
    k: u8,
    /// Whether `k` is the surface's declared type, so the rank bound must hold.
    k_known: bool,
}

impl Verdict<'_> {
    fn report(&self, rank: usize, exact: bool, trials: usize, seed: u64) -> Result<RigidityReport> {
        let n = self.g.n();
        let (rows, cols) = (self.g.m() + n, 3 * n);
        let bound = cols.saturating_sub(self.k as usize);
        if exact && self.k_known && rank > bound {
            return Err(Error::RankBoundViolated { rank, bound });
        }
        let independent = rank == rows;
        let (isostatic, basis) =
            if n <= enumeration_limit(self.k) && self.g.is_clique(&(0..n).collect::<Vec<_>>()) {
                (independent, VerdictBasis::Enumeration)
            } else {
                let count = 2 * n as i64 - self.g.m() as i64 == self.k as i64;
                (count && rank == bound, VerdictBasis::RankTest)
            };
        let nullity = cols - rank;
        Ok(RigidityReport {
            rank,
            nullity,
            independent,
            isostatic,
            strength: if independent && exact {
                Strength::Certified
            } else {
                Strength::Evidence
            },
            k: self.k,
            trials,
            seed,
            rows,
            cols,
            flex_dim_internal: nullity as i64 - self.k as i64,
            basis,
        })
    }
}

/// Maximum rank over up to `opts.trials` sampled placements, stopping at the
/// first full-row-rank trial.
pub fn analyze(g: &SimpleGraph, s: &Surface, opts: &AnalyzeOptions) -> Result<RigidityReport> {
    analyze_with(g, s, opts, &RankRegistry::default())
}

pub fn analyze_with(
    g: &SimpleGraph,
    s: &Surface,
    opts: &AnalyzeOptions,
    backends: &RankRegistry,
) -> Result<RigidityReport> {
    if g.n() == 0 {
        return Err(Error::EmptyVertexSet);
    }
    if opts.trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let backend = backends
        .get(&opts.backend)
        .ok_or_else(|| Error::UnknownBackend(opts.backend.clone()))?;
    if !s.has_sampler() {
        return Err(Error::NoSampler(s.name.clone()));
    }
    let (k, k_known) = surface_type(s, opts)?;
    let rows = g.m() + g.n();
    let mut best = None::<linalg::RankOutcome>;
    let mut used = 0;
    for t in 0..opts.trials {
        used += 1;
        let mut rng = trial_rng(opts.seed, t as u64);
        let f = Framework::sample(g.clone(), s.clone(), &mut rng)?;
        let outcome = backend.rank(&build_matrix(&f)?.matrix)?;
        if best.is_none_or(|b| outcome.rank > b.rank) {
            best = Some(outcome);
        }
        if outcome.rank == rows {
            break;
        }
    }
    let best = best.expect("at least one trial");
    Verdict { g, k, k_known }.report(best.rank, best.exact, used, opts.seed)
}

/// Analysis of one exact user-supplied placement.
pub fn analyze_placement(
    f: &Framework,
    k: Option<u8>,
    backend: &dyn RankBackend,
) -> Result<RigidityReport> {
    let opts = AnalyzeOptions {
        k,
        ..AnalyzeOptions::default()
    };
    let (k, k_known) = surface_type(&f.surface, &opts)?;
    let outcome = backend.rank(&build_matrix(f)?.matrix)?;
    Verdict {
        g: &f.graph,
        k,
        k_known,
    }
    .report(outcome.rank, outcome.exact, 1, 0)
}

/// Analysis of a floating-point placement; never certified.
pub fn analyze_float(
    g: &SimpleGraph,
    s: &Surface,
    placement: &[[f64; 3]],
    k: u8,
    tol: Option<f64>,
) -> Result<RigidityReport> {
    if k > 3 {
        return Err(Error::InvalidK(k));
    }
    let rank = linalg::rank_float(&build_matrix_f64(g, s, placement)?, tol)?;
    Verdict {
        g,
        k,
        k_known: false,
    }
    .report(rank, false, 1, 0)
}

/// Freedom number of a surface: the minimum nullity of complete-graph
/// frameworks on 4, 5 and 6 vertices over `trials` placements each.
///
/// Random placements can only overestimate the generic nullity, so the
/// result converges to the true type from above.
pub fn compute_type(s: &Surface, trials: usize, seed: u64) -> Result<u8> {
    if !s.has_sampler() {
        return Err(Error::NoSampler(s.name.clone()));
    }
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let mut k = usize::MAX;
    for n in 4..=6usize {
        let g = SimpleGraph::complete(n);
        for t in 0..trials {
            let mut rng = trial_rng(seed, (n * trials + t) as u64);
            let f = Framework::sample(g.clone(), s.clone(), &mut rng)?;
            let rank = ExactBackend.rank(&build_matrix(&f)?.matrix)?.rank;
            k = k.min(3 * n - rank);
        }
    }
    Ok(k.min(3) as u8)
}

/// Necessary count condition for isostaticity on a type-`k` surface: the
/// graph must be `(2,k)`-tight. A violating vertex set is returned as witness.
pub fn maxwell_check(g: &SimpleGraph, k: u8) -> Result<SparsityVerdict> {
    is_sparse(g, k)
}
