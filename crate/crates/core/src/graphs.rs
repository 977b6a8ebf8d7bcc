//! Bounded-degree graphs approximating level sets, with normalized
//! Laplacian spectra and Cheeger constants.
//!
//! The gap convention throughout is `λ₂` of the normalized Laplacian
//! `I − D^{-1/2} A D^{-1/2}`.

use std::time::Instant;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::Action;
use crate::error::{Error, Result};
use crate::spaces::{epsilon_net_with, Net, NetOptions, Space};
use crate::warped::EdgeKind;

/// Largest graph handled by the dense eigensolver.
pub const DENSE_LIMIT: usize = 3000;
/// Largest graph handled by the brute-force Cheeger enumeration.
pub const CHEEGER_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuiltFrom {
    pub space: Space,
    pub t: f64,
    pub epsilon: f64,
    pub generators: usize,
}

/// Simple undirected graph.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelGraph {
    n: usize,
    /// Sorted `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
    kinds: Vec<EdgeKind>,
    adjacency: Vec<Vec<usize>>,
    pub degree_bound: usize,
    pub built_from: Option<BuiltFrom>,
}

impl LevelGraph {
    /// Builds a simple graph: loops are dropped, multi-edges merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<LevelGraph> {
        let tagged: Vec<_> = edges.iter().map(|&(u, v)| (u, v, EdgeKind::Spatial)).collect();
        Self::from_tagged(n, &tagged)
    }

    fn from_tagged(n: usize, edges: &[(usize, usize, EdgeKind)]) -> Result<LevelGraph> {
        let mut norm: Vec<(usize, usize, EdgeKind)> = Vec::with_capacity(edges.len());
        for &(u, v, k) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u != v {
                norm.push((u.min(v), u.max(v), k));
            }
        }
        // spatial sorts before orbital, so dedup keeps the spatial tag
        norm.sort_by_key(|&(u, v, k)| (u, v, k == EdgeKind::Orbital));
        norm.dedup_by_key(|e| (e.0, e.1));
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, _) in &norm {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        let degree_bound = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(LevelGraph {
            n,
            edges: norm.iter().map(|&(u, v, _)| (u, v)).collect(),
            kinds: norm.iter().map(|e| e.2).collect(),
            adjacency,
            degree_bound,
            built_from: None,
        })
    }

    pub fn complete(n: usize) -> LevelGraph {
        let edges: Vec<_> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, &edges).expect("valid edges")
    }

    pub fn cycle(n: usize) -> LevelGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("valid edges")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    fn check_no_isolated(&self) -> Result<()> {
        match (0..self.n).find(|&v| self.adjacency[v].is_empty()) {
            Some(v) => Err(Error::IsolatedVertex(v)),
            None => Ok(()),
        }
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            kind: "level".into(),
            t: self.built_from.as_ref().map(|p| p.t),
            epsilon: self.built_from.as_ref().map(|p| p.epsilon),
            space: self.built_from.as_ref().map(|p| p.space),
            vertices: (0..self.n)
                .map(|i| VertexRecord {
                    index: i,
                    coords: Vec::new(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .zip(&self.kinds)
                .map(|(&(u, v), &kind)| EdgeRecord {
                    u,
                    v,
                    weight: 1.0,
                    kind,
                    label: None,
                })
                .collect(),
        }
    }
}

/// Level-set graph with net points as vertices: spatial edges from the
/// net's neighbour pairs and orbital edges `i ~ nearest(s·p_i)`.
pub fn approximating_graph(action: &Action, net: &Net, t: f64) -> Result<LevelGraph> {
    if action.space != net.space {
        return Err(Error::SpaceMismatch {
            expected: action.space.to_string(),
            found: net.space.to_string(),
        });
    }
    if net.is_empty() {
        return Err(Error::EmptyNet);
    }
    let ratio = net.epsilon * t;
    if !(0.25..=4.0).contains(&ratio) {
        log::warn!("net epsilon {} is far from 1/t = {}", net.epsilon, 1.0 / t);
    }
    let gens = action.symmetric_generators();
    let mut edges: Vec<(usize, usize, EdgeKind)> =
        net.spatial_pairs.iter().map(|&(i, j)| (i, j, EdgeKind::Spatial)).collect();
    let orbital: Vec<Vec<(usize, usize, EdgeKind)>> = net
        .points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            gens.iter()
                .map(|g| (i, net.nearest_unchecked(&g.transform.apply(p)).0, EdgeKind::Orbital))
                .collect()
        })
        .collect();
    edges.extend(orbital.into_iter().flatten());
    let mut g = LevelGraph::from_tagged(net.len(), &edges)?;
    let mut spatial_degree = vec![0usize; net.len()];
    for &(i, j) in &net.spatial_pairs {
        spatial_degree[i] += 1;
        spatial_degree[j] += 1;
    }
    g.degree_bound = gens.len() + spatial_degree.into_iter().max().unwrap_or(0);
    g.built_from = Some(BuiltFrom {
        space: net.space,
        t,
        epsilon: net.epsilon,
        generators: gens.len(),
    });
    Ok(g)
}

/// Dense normalized Laplacian.
pub fn normalized_laplacian(g: &LevelGraph) -> Result<DMatrix<f64>> {
    g.check_no_isolated()?;
    let inv_sqrt: Vec<f64> = (0..g.n).map(|v| 1.0 / (g.degree(v) as f64).sqrt()).collect();
    let mut m = DMatrix::identity(g.n, g.n);
    for &(u, v) in &g.edges {
        let w = -inv_sqrt[u] * inv_sqrt[v];
        m[(u, v)] = w;
        m[(v, u)] = w;
    }
    Ok(m)
}

/// Matrix-free normalized Laplacian.
pub struct LaplacianOperator<'a> {
    graph: &'a LevelGraph,
    inv_sqrt: Vec<f64>,
}

impl<'a> LaplacianOperator<'a> {
    pub fn new(graph: &'a LevelGraph) -> Result<Self> {
        graph.check_no_isolated()?;
        let inv_sqrt = (0..graph.n).map(|v| 1.0 / (graph.degree(v) as f64).sqrt()).collect();
        Ok(LaplacianOperator { graph, inv_sqrt })
    }

    pub fn dim(&self) -> usize {
        self.graph.n
    }

    /// `y = L x`, rows in parallel with a fixed per-row summation order.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.graph.n)
            .into_par_iter()
            .map(|u| {
                let s: f64 = self.graph.adjacency[u].iter().map(|&v| self.inv_sqrt[v] * x[v]).sum();
                x[u] - self.inv_sqrt[u] * s
            })
            .collect()
    }

    /// Unit eigenvector of eigenvalue 0, proportional to `D^{1/2} 1`.
    pub fn null_vector(&self) -> Vec<f64> {
        let v: Vec<f64> = self.inv_sqrt.iter().map(|s| 1.0 / s).collect();
        let n = norm(&v);
        v.into_iter().map(|x| x / n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending eigenvalues of the normalized Laplacian.
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn gap(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(0.0)
    }
}

pub fn spectrum_dense(g: &LevelGraph) -> Result<Spectrum> {
    if g.n > DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "dense eigensolver",
            n: g.n,
            max: DENSE_LIMIT,
        });
    }
    let l = normalized_laplacian(g)?;
    let mut eigenvalues: Vec<f64> = l.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum { eigenvalues })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMode {
    Dense,
    Iterative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    /// `λ₂` of the normalized Laplacian; 0 for disconnected graphs.
    pub value: f64,
    pub mode: SpectralMode,
    pub connected: bool,
    pub iterations: usize,
    pub residual: f64,
}

pub fn spectral_gap(g: &LevelGraph, mode: SpectralMode, tol: f64) -> Result<GapReport> {
    g.check_no_isolated()?;
    if !g.is_connected() {
        log::warn!("graph is disconnected; spectral gap is 0");
        return Ok(GapReport {
            value: 0.0,
            mode,
            connected: false,
            iterations: 0,
            residual: 0.0,
        });
    }
    match mode {
        SpectralMode::Dense => Ok(GapReport {
            value: spectrum_dense(g)?.gap(),
            mode,
            connected: true,
            iterations: 0,
            residual: 0.0,
        }),
        SpectralMode::Iterative => {
            let op = LaplacianOperator::new(g)?;
            let max_iter = g.n.saturating_sub(1).min(2000);
            let r = lanczos_second_eigenvalue(&op, tol, max_iter, 0x1a2c)?;
            Ok(GapReport {
                value: r.value,
                mode,
                connected: true,
                iterations: r.iterations,
                residual: r.residual,
            })
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub struct LanczosResult {
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Smallest eigenvalue of `L` on the complement of its null vector, by
/// Lanczos with full reorthogonalization. Convergence is declared when the
/// Ritz residual `‖L x − θ x‖` drops below `tol`, or when the Krylov space
/// becomes invariant.
pub fn lanczos_second_eigenvalue(
    op: &LaplacianOperator<'_>,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<LanczosResult> {
    let n = op.dim();
    if n < 2 {
        return Err(Error::InvalidInput("need at least two vertices".into()));
    }
    let null = op.null_vector();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let c = dot(&null, &q);
    axpy(&mut q, -c, &null);
    let qn = norm(&q);
    q.iter_mut().for_each(|x| *x /= qn);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut next_check = 8usize;
    let mut best = (f64::INFINITY, f64::INFINITY);
    let max_iter = max_iter.clamp(1, n - 1);

    for k in 0..max_iter {
        let mut w = op.apply(&basis[k]);
        let alpha = dot(&basis[k], &w);
        axpy(&mut w, -alpha, &basis[k]);
        if k > 0 {
            axpy(&mut w, -betas[k - 1], &basis[k - 1]);
        }
        for _ in 0..2 {
            let c = dot(&null, &w);
            axpy(&mut w, -c, &null);
            for b in &basis {
                let c = dot(b, &w);
                axpy(&mut w, -c, b);
            }
        }
        alphas.push(alpha);
        let beta = norm(&w);
        let dim = k + 1;
        let invariant = beta < 1e-10 || dim == max_iter;
        if dim >= next_check || invariant {
            next_check = (dim + 8).max(dim * 5 / 4);
            let (theta, y) = smallest_ritz_pair(&alphas, &betas);
            let mut x = vec![0.0; n];
            for (b, &yi) in basis.iter().zip(y.iter()) {
                axpy(&mut x, yi, b);
            }
            let lx = op.apply(&x);
            let r: Vec<f64> = lx.iter().zip(&x).map(|(a, b)| a - theta * b).collect();
            let residual = norm(&r);
            best = (theta, residual);
            if residual <= tol || (invariant && beta < 1e-10) {
                return Ok(LanczosResult {
                    value: theta,
                    residual,
                    iterations: dim,
                });
            }
        }
        if invariant {
            break;
        }
        betas.push(beta);
        basis.push(w.into_iter().map(|x| x / beta).collect());
    }
    Err(Error::NonConvergence {
        estimate: best.0,
        residual: best.1,
        iterations: alphas.len(),
    })
}

fn smallest_ritz_pair(alphas: &[f64], betas: &[f64]) -> (f64, DVector<f64>) {
    let m = alphas.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, theta) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    (theta, eig.eigenvectors.column(idx).into_owned())
}

/// `(gap/2, sqrt(2·gap))`.
pub fn cheeger_bounds(gap: f64) -> Result<(f64, f64)> {
    if !(-1e-9..=2.0 + 1e-9).contains(&gap) {
        return Err(Error::GapOutOfRange(gap));
    }
    let gap = gap.clamp(0.0, 2.0);
    Ok((gap / 2.0, (2.0 * gap).sqrt()))
}

/// Exact conductance `min |∂S| / vol(S)` over `0 < vol(S) <= vol(V)/2`.
pub fn brute_force_cheeger(g: &LevelGraph) -> Result<f64> {
    if g.n > CHEEGER_LIMIT {
        return Err(Error::TooLarge {
            what: "brute-force Cheeger",
            n: g.n,
            max: CHEEGER_LIMIT,
        });
    }
    let n = g.n;
    let adj: Vec<u32> = (0..n)
        .map(|v| g.adjacency[v].iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let deg: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
    let total: u32 = deg.iter().sum();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) {
        let mut vol = 0u32;
        let mut cut = 0u32;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            vol += deg[v];
            cut += (adj[v] & !mask).count_ones();
        }
        if vol > 0 && 2 * vol <= total {
            best = best.min(cut as f64 / vol as f64);
        }
    }
    Ok(best)
}

/// How ε is chosen for level `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum EpsilonRule {
    /// `ε = scale / t`.
    Inverse { scale: f64 },
    Fixed { epsilon: f64 },
}

impl Default for EpsilonRule {
    fn default() -> Self {
        EpsilonRule::Inverse { scale: 1.0 }
    }
}

impl EpsilonRule {
    pub fn epsilon(&self, t: f64) -> f64 {
        match *self {
            EpsilonRule::Inverse { scale } => scale / t,
            EpsilonRule::Fixed { epsilon } => epsilon,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub t: f64,
    pub epsilon: f64,
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub degree_bound: usize,
    pub lambda2: Option<f64>,
    pub connected: bool,
    pub runtime_ms: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub mode: SpectralMode,
    pub records: Vec<ProfileRecord>,
    /// Largest max-degree over all levels.
    pub max_degree: usize,
    /// `true` when no level exceeds twice the degree bound of the coarsest
    /// successful level.
    pub degree_uniform: bool,
}

#[derive(Clone, Debug)]
pub struct ProfileOptions {
    pub epsilon_rule: EpsilonRule,
    pub mode: SpectralMode,
    pub tol: f64,
    pub net_seed: u64,
    pub net: NetOptions,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            epsilon_rule: EpsilonRule::default(),
            mode: SpectralMode::Dense,
            tol: 1e-9,
            net_seed: 0,
            net: NetOptions::default(),
        }
    }
}

/// Spectral gap of the approximating graph at each level. Errors at one level
/// are recorded and the profile continues.
pub fn expansion_profile(action: &Action, levels: &[f64], opts: &ProfileOptions) -> Result<Profile> {
    if levels.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput("levels must be ascending".into()));
    }
    let mut records = Vec::with_capacity(levels.len());
    for &t in levels {
        let start = Instant::now();
        let epsilon = opts.epsilon_rule.epsilon(t);
        let mut rec = ProfileRecord {
            t,
            epsilon,
            vertices: 0,
            edges: 0,
            max_degree: 0,
            degree_bound: 0,
            lambda2: None,
            connected: false,
            runtime_ms: 0.0,
            error: None,
        };
        let outcome = epsilon_net_with(action.space, epsilon, opts.net_seed, &opts.net)
            .and_then(|net| approximating_graph(action, &net, t))
            .and_then(|g| {
                rec.vertices = g.vertex_count();
                rec.edges = g.edges().len();
                rec.max_degree = g.max_degree();
                rec.degree_bound = g.degree_bound;
                spectral_gap(&g, opts.mode, opts.tol)
            });
        match outcome {
            Ok(gap) => {
                rec.lambda2 = Some(gap.value);
                rec.connected = gap.connected;
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        records.push(rec);
    }
    let max_degree = records.iter().map(|r| r.max_degree).max().unwrap_or(0);
    let first_bound = records.iter().find(|r| r.error.is_none()).map(|r| r.degree_bound);
    let degree_uniform = match first_bound {
        Some(b) => records.iter().all(|r| r.max_degree <= 2 * b),
        None => false,
    };
    Ok(Profile {
        mode: opts.mode,
        records,
        max_degree,
        degree_uniform,
    })
}

/// Random connected graph: a random spanning tree plus each remaining edge
/// with probability `p`.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> LevelGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    LevelGraph::from_edges(n, &edges).expect("valid edges")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub index: usize,
    /// Point coordinates; empty when the graph has no geometry attached.
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub kind: EdgeKind,
    pub label: Option<String>,
}

/// Structured text graph format shared by level graphs and warped graphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub kind: String,
    pub t: Option<f64>,
    pub epsilon: Option<f64>,
    pub space: Option<Space>,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl GraphFile {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in &self.vertices {
            out.push_str(&format!("  {};\n", v.index));
        }
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Spatial => "solid",
                EdgeKind::Orbital => "dashed",
            };
            let label = match &e.label {
                Some(l) => format!("{l}:{}", e.weight),
                None => format!("{}", e.weight),
            };
            out.push_str(&format!("  {} -- {} [label=\"{label}\", style={style}];\n", e.u, e.v));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simple_graph_normalization() {
        let g = LevelGraph::from_edges(3, &[(1, 0), (0, 1), (2, 2), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(LevelGraph::from_edges(2, &[(0, 5)]).is_err());
    }

    #[test]
    fn laplacian_spectra() {
        let k2 = spectrum_dense(&LevelGraph::complete(2)).unwrap();
        assert!(k2.eigenvalues[0].abs() < 1e-12 && (k2.eigenvalues[1] - 2.0).abs() < 1e-12);
        let c4 = spectrum_dense(&LevelGraph::cycle(4)).unwrap();
        for (got, want) in c4.eigenvalues.iter().zip([0.0, 1.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let k4 = spectrum_dense(&LevelGraph::complete(4)).unwrap();
        assert!((k4.gap() - 4.0 / 3.0).abs() < 1e-12);
        let l = normalized_laplacian(&LevelGraph::cycle(7)).unwrap();
        assert!((&l - l.transpose()).abs().max() < 1e-12);
    }

    #[test]
    fn isolated_vertex_is_an_error() {
        let g = LevelGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(normalized_laplacian(&g), Err(Error::IsolatedVertex(2))));
    }

    #[test]
    fn gap_examples() {
        let k10 = spectral_gap(&LevelGraph::complete(10), SpectralMode::Dense, 1e-9).unwrap();
        assert!((k10.value - 10.0 / 9.0).abs() < 1e-9);
        let c16 = spectral_gap(&LevelGraph::cycle(16), SpectralMode::Dense, 1e-9).unwrap();
        assert!((c16.value - (1.0 - (2.0 * PI / 16.0).cos())).abs() < 1e-9);
        let tri = LevelGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let r = spectral_gap(&tri, SpectralMode::Dense, 1e-9).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(!r.connected);
    }

    #[test]
    fn iterative_matches_dense_on_small_graphs() {
        for seed in 0..5 {
            let g = random_connected_graph(60, 0.05, seed);
            let dense = spectral_gap(&g, SpectralMode::Dense, 1e-9).unwrap().value;
            let it = spectral_gap(&g, SpectralMode::Iterative, 1e-9).unwrap();
            assert!((dense - it.value).abs() < 1e-6, "{dense} vs {}", it.value);
        }
    }

    #[test]
    fn cheeger_examples() {
        assert_eq!(cheeger_bounds(0.0).unwrap(), (0.0, 0.0));
        assert_eq!(cheeger_bounds(0.5).unwrap(), (0.25, 1.0));
        assert_eq!(cheeger_bounds(2.0).unwrap(), (1.0, 2.0));
        assert!(cheeger_bounds(2.5).is_err());
        assert!(cheeger_bounds(-0.1).is_err());
    }

    #[test]
    fn brute_force_cheeger_examples() {
        assert_eq!(brute_force_cheeger(&LevelGraph::complete(2)).unwrap(), 1.0);
        assert_eq!(brute_force_cheeger(&LevelGraph::cycle(4)).unwrap(), 0.5);
        let barbell = LevelGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
        // one triangle: boundary 1, volume 7
        assert!((brute_force_cheeger(&barbell).unwrap() - 1.0 / 7.0).abs() < 1e-15);
        assert!(brute_force_cheeger(&LevelGraph::cycle(21)).is_err());
    }

    #[test]
    fn dot_export_lists_edges() {
        let dot = LevelGraph::cycle(3).to_file().to_dot();
        assert!(dot.contains("0 -- 1"));
        assert!(dot.starts_with("graph G {"));
    }
}
