//! Warped metric on level sets
//! `d_t(x, y) = inf_γ ( t·d_M(x, γy) + ‖γ‖ )`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{displacement_table, make_action, Action, ActionSpec, EvaluatedBall};
use crate::error::{Error, Result};
use crate::graphs::{EdgeRecord, GraphFile, VertexRecord};
use crate::groups::Word;
use crate::spaces::{metric, Net, Point, Space};

/// Result of an exact warped-distance query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedDistance {
    pub value: f64,
    /// Shortlex-first minimizing group element.
    pub word: Word,
    /// `true` when the search radius provably contains the minimizer.
    pub certified: bool,
}

/// Level-`t` warped metric with a precomputed word ball.
///
/// The search for a pair `(x, y)` only visits words with
/// `‖γ‖ < t·d_M(x, y)`, since the `γ = e` term already bounds the infimum.
/// If the ball scan is inconclusive (minimum above `word_bound + 1`), a
/// meet-in-the-middle pass over splittings `γ = a⁻¹b` with `|a|, |b| <= h`
/// uses `d_M(x, a⁻¹b·y) = d_M(a·x, b·y)`. The result is exact whenever the
/// minimum is at most `2·word_bound + 1`.
pub struct WarpedMetric<'a> {
    action: &'a Action,
    t: f64,
    word_bound: usize,
    ball: EvaluatedBall,
}

impl<'a> WarpedMetric<'a> {
    pub fn new(action: &'a Action, t: f64, word_bound: usize) -> Result<Self> {
        action.require_isometric()?;
        check_level(t)?;
        let ball = action.evaluated_ball(word_bound)?;
        Ok(WarpedMetric {
            action,
            t,
            word_bound,
            ball,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn action(&self) -> &Action {
        self.action
    }

    pub fn word_bound(&self) -> usize {
        self.word_bound
    }

    pub fn distance(&self, x: &Point, y: &Point) -> f64 {
        self.query(x, y).value
    }

    pub fn query(&self, x: &Point, y: &Point) -> WarpedDistance {
        let mut best = self.t * metric(x, y);
        let mut arg = 0usize;
        for (idx, (w, tr)) in self.ball.words.iter().zip(&self.ball.transforms).enumerate().skip(1) {
            let len = w.len() as f64;
            if len >= best {
                break;
            }
            let cost = len + self.t * metric(x, &tr.apply(y));
            if cost < best {
                best = cost;
                arg = idx;
            }
        }
        let bound = self.word_bound as f64;
        if best <= bound + 1.0 {
            return WarpedDistance {
                value: best,
                word: self.ball.words[arg].clone(),
                certified: true,
            };
        }
        let half = (((best - 1.0) / 2.0).ceil().max(0.0) as usize).min(self.word_bound);
        let (value, word) = self.split_search(x, y, half, best, self.ball.words[arg].clone());
        WarpedDistance {
            value,
            word,
            certified: value <= 2.0 * bound + 1.0,
        }
    }

    /// Minimum over `a⁻¹b` with `|a|, |b| <= half`, starting from an upper bound.
    fn split_search(&self, x: &Point, y: &Point, half: usize, upper: f64, upper_word: Word) -> (f64, Word) {
        let end = self.ball.words.partition_point(|w| w.len() <= half);
        let images = |p: &Point| -> Vec<Point> { self.ball.transforms[..end].iter().map(|tr| tr.apply(p)).collect() };
        let (ax, by) = (images(x), images(y));
        let words = &self.ball.words[..end];
        let t = self.t;
        let found = (0..end)
            .into_par_iter()
            .filter_map(|i| {
                let la = words[i].len() as f64;
                let mut local = upper;
                let mut arg = None;
                for j in 0..end {
                    let len = la + words[j].len() as f64;
                    if len >= local {
                        break;
                    }
                    let cost = len + t * metric(&ax[i], &by[j]);
                    if cost < local {
                        local = cost;
                        arg = Some(j);
                    }
                }
                arg.map(|j| (local, words[i].inverse().mul(&words[j])))
            })
            .reduce_with(|p, q| match p.0.partial_cmp(&q.0) {
                Some(Ordering::Less) => p,
                Some(Ordering::Greater) => q,
                _ if (p.1.len(), p.1.letters()) <= (q.1.len(), q.1.letters()) => p,
                _ => q,
            });
        match found {
            Some((v, w)) if v < upper => (v, w),
            _ => (upper, upper_word),
        }
    }
}

fn check_level(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("level t must be positive, got {t}")))
    }
}

/// Exact warped distance, searching `‖γ‖ <= min(word_bound, floor(t·d_M(x, y)))`.
pub fn warped_distance_exact(action: &Action, t: f64, x: &Point, y: &Point, word_bound: usize) -> Result<f64> {
    action.require_isometric()?;
    check_level(t)?;
    action.space.check(x)?;
    action.space.check(y)?;
    let natural = (t * metric(x, y)).floor();
    let radius = if natural < word_bound as f64 {
        natural as usize
    } else {
        word_bound
    };
    Ok(WarpedMetric::new(action, t, radius)?.distance(x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Spatial,
    Orbital,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub kind: EdgeKind,
    /// Generator letter for orbital edges.
    pub label: Option<char>,
}

/// Weighted graph on net points approximating the level set `M_t`.
#[derive(Clone, Debug)]
pub struct WarpedGraph {
    pub t: f64,
    pub space: Space,
    pub epsilon: f64,
    pub points: Vec<Point>,
    /// Raw edge list: every spatial pair, then one orbital edge per
    /// (vertex, generator) in vertex-major order. Edges are undirected.
    pub edges: Vec<WarpedEdge>,
    pub connected: bool,
    adjacency: Vec<Vec<(usize, f64)>>,
}

/// Spatial edges have weight `t·d_M(p_i, p_j)`; the orbital edge for `s`
/// at `p_i` goes to `j = nearest(s·p_i)` with weight `1 + t·d_M(s·p_i, p_j)`.
pub fn build_warped_graph(action: &Action, t: f64, net: &Net) -> Result<WarpedGraph> {
    action.require_isometric()?;
    check_level(t)?;
    if action.space != net.space {
        return Err(Error::SpaceMismatch {
            expected: action.space.to_string(),
            found: net.space.to_string(),
        });
    }
    let mut edges: Vec<WarpedEdge> = net
        .spatial_pairs
        .iter()
        .map(|&(i, j)| WarpedEdge {
            u: i,
            v: j,
            weight: t * metric(&net.points[i], &net.points[j]),
            kind: EdgeKind::Spatial,
            label: None,
        })
        .collect();
    let gens = action.symmetric_generators();
    let orbital: Vec<Vec<WarpedEdge>> = net
        .points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            gens.iter()
                .map(|g| {
                    let image = g.transform.apply(p);
                    let (j, d) = net.nearest_unchecked(&image);
                    WarpedEdge {
                        u: i,
                        v: j,
                        weight: 1.0 + t * d,
                        kind: EdgeKind::Orbital,
                        label: Some(g.label),
                    }
                })
                .collect()
        })
        .collect();
    edges.extend(orbital.into_iter().flatten());

    let mut adjacency = vec![Vec::new(); net.len()];
    for e in &edges {
        if e.u != e.v {
            adjacency[e.u].push((e.v, e.weight));
            adjacency[e.v].push((e.u, e.weight));
        }
    }
    let connected = is_connected(&adjacency);
    if !connected {
        log::warn!("warped graph at t = {t} is disconnected");
    }
    Ok(WarpedGraph {
        t,
        space: net.space,
        epsilon: net.epsilon,
        points: net.points.clone(),
        edges,
        connected,
        adjacency,
    })
}

fn is_connected(adjacency: &[Vec<(usize, f64)>]) -> bool {
    if adjacency.is_empty() {
        return true;
    }
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(v, _) in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Clone, Copy, PartialEq)]
struct HeapKey(f64, usize);

impl Eq for HeapKey {}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl WarpedGraph {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dijkstra from `source`; unreachable vertices get `f64::INFINITY`.
    pub fn shortest_paths(&self, source: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Reverse(HeapKey(0.0, source)));
        while let Some(Reverse(HeapKey(d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adjacency[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse(HeapKey(nd, v)));
                }
            }
        }
        dist
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            kind: "warped".into(),
            t: Some(self.t),
            epsilon: Some(self.epsilon),
            space: Some(self.space),
            vertices: self
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| VertexRecord {
                    index: i,
                    coords: p.coords(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    u: e.u,
                    v: e.v,
                    weight: e.weight,
                    kind: e.kind,
                    label: e.label.map(|c| c.to_string()),
                })
                .collect(),
        }
    }
}

/// Graph distance between net vertices `i` and `j`. Returns infinity (and
/// logs a warning) when `j` is unreachable.
pub fn warped_distance_apx(graph: &WarpedGraph, i: usize, j: usize) -> f64 {
    if i == j {
        return 0.0;
    }
    let d = graph.shortest_paths(i)[j];
    if d.is_infinite() {
        log::warn!("vertex {j} unreachable from {i} in warped graph");
    }
    d
}

/// Minimum displacement `δ(R)` over nontrivial words of length at most `R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Displacement {
    /// `+inf` when the ball has no nontrivial words.
    pub value: f64,
    pub word: Option<Word>,
    pub point: Option<usize>,
    pub radius: usize,
    /// Displacement is 2-Lipschitz in the point, so the true minimum over
    /// the space is within `2·net_epsilon` of `value`.
    pub net_epsilon: f64,
}

pub fn min_displacement(action: &Action, radius: usize, net: &Net) -> Result<Displacement> {
    let table = displacement_table(action, net, radius)?;
    let mut out = Displacement {
        value: f64::INFINITY,
        word: None,
        point: None,
        radius,
        net_epsilon: net.epsilon,
    };
    for row in table {
        if row.min_displacement < out.value {
            out.value = row.min_displacement;
            out.word = Some(row.word);
            out.point = Some(row.point);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub i: usize,
    pub j: usize,
    pub d_s: f64,
    pub d_t: f64,
    pub monotone: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub s: f64,
    pub t: f64,
    pub rows: Vec<LevelRow>,
    pub all_monotone: bool,
}

/// Compares `d_s` and `d_t` on net index pairs; `d_s <= d_t` for `s <= t`.
pub fn level_compare(
    action: &Action,
    net: &Net,
    s: f64,
    t: f64,
    pairs: &[(usize, usize)],
    word_bound: usize,
) -> Result<LevelReport> {
    if !(s > 0.0 && s <= t) {
        return Err(Error::InvalidInput(format!("need 0 < s <= t, got s = {s}, t = {t}")));
    }
    let ms = WarpedMetric::new(action, s, word_bound)?;
    let mt = WarpedMetric::new(action, t, word_bound)?;
    let rows: Vec<LevelRow> = pairs
        .iter()
        .map(|&(i, j)| {
            let (x, y) = (&net.points[i], &net.points[j]);
            let d_s = ms.distance(x, y);
            let d_t = mt.distance(x, y);
            LevelRow {
                i,
                j,
                d_s,
                d_t,
                monotone: d_s <= d_t + 1e-12,
            }
        })
        .collect();
    let all_monotone = rows.iter().all(|r| r.monotone);
    Ok(LevelReport { s, t, rows, all_monotone })
}

/// Comparison of a circle action by `⟨rot α, rot 1/2⟩` with its quotient by
/// the order-two subgroup: `R/(½Z)` with the induced rotation action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientComparison {
    pub t: f64,
    /// Word length of the order-two element.
    pub b: f64,
    /// `(d_t(x, y), d'_t(πx, πy))` per sampled pair.
    pub rows: Vec<(f64, f64)>,
    pub sup_gap: f64,
}

pub fn half_turn_quotient(alpha: f64, t: f64, pairs: &[(f64, f64)], word_bound: usize) -> Result<QuotientComparison> {
    let full = make_action(&ActionSpec::Rotation {
        translations: vec![vec![alpha], vec![0.5]],
    })?;
    // R/(½Z) is the unit circle under x ↦ 2x with distances halved, so the
    // quotient level t is the unit circle at level t/2 rotated by 2α
    let quotient = make_action(&ActionSpec::Rotation {
        translations: vec![vec![2.0 * alpha]],
    })?;
    let m = WarpedMetric::new(&full, t, word_bound)?;
    let mq = WarpedMetric::new(&quotient, t / 2.0, 2 * word_bound)?;
    let mut rows = Vec::with_capacity(pairs.len());
    let mut sup_gap: f64 = 0.0;
    for &(x, y) in pairs {
        let d = m.distance(&Point::torus(&[x])?, &Point::torus(&[y])?);
        let dq = mq.distance(&Point::torus(&[2.0 * x])?, &Point::torus(&[2.0 * y])?);
        sup_gap = sup_gap.max((d - dq).abs());
        rows.push((d, dq));
    }
    Ok(QuotientComparison { t, b: 1.0, rows, sup_gap })
}
