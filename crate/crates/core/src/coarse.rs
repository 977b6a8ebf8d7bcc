//! Coarse paths at scale `r` on level `t`: orbital jumps, the `Q` map,
//! canonical forms, homotopy moves, `j` loops and torus winding vectors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{displacement_table, probe_points, Action, Transform};
use crate::error::{Error, Result};
use crate::groups::Word;
use crate::spaces::{circle_lift, metric, Net, Point, Space};
use crate::warped::WarpedMetric;

/// Guard band for the strict `d_M < r/t` comparison.
pub const GUARD: f64 = 1e-12;
/// Two isometries are identified when they agree on the probe points to
/// this tolerance.
pub const DEDUP_TOL: f64 = 1e-9;
/// Points closer than this are the same point when joining paths.
pub const POINT_TOL: f64 = 1e-9;

/// Validated r-path with its orbital jumps.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarsePath {
    t: f64,
    r: f64,
    points: Vec<Point>,
    jumps: Vec<Word>,
}

impl CoarsePath {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn jumps(&self) -> &[Word] {
        &self.jumps
    }

    /// Number of steps.
    pub fn steps(&self) -> usize {
        self.jumps.len()
    }

    pub fn start(&self) -> &Point {
        &self.points[0]
    }

    pub fn end(&self) -> &Point {
        self.points.last().expect("paths are nonempty")
    }

    pub fn is_loop(&self) -> bool {
        metric(self.start(), self.end()) < POINT_TOL
    }

    pub fn to_file(&self) -> PathFile {
        PathFile {
            space: self.start().space(),
            t: self.t,
            r: self.r,
            points: self.points.iter().map(Point::coords).collect(),
            jumps: self.jumps.clone(),
            q: q_map(self),
        }
    }
}

/// Serialized path: `(t, r)` header, ordered points, jumps and `Q` for audit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathFile {
    pub space: Space,
    pub t: f64,
    pub r: f64,
    pub points: Vec<Vec<f64>>,
    pub jumps: Vec<Word>,
    pub q: Word,
}

/// `Q(α) = γ_{ℓ-1} ⋯ γ_0`, reduced.
pub fn q_map(path: &CoarsePath) -> Word {
    path.jumps.iter().fold(Word::identity(), |acc, g| g.mul(&acc))
}

/// Single-position homotopy moves.
#[derive(Clone, Debug, PartialEq)]
pub enum Move {
    /// Replace an interior point by one within warped distance `r`.
    Replace { position: usize, point: Point },
    /// Repeat the last point.
    AppendEndpoint,
    /// Drop a repeated last point.
    DeleteEndpoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    pub vector: Vec<i64>,
    /// Largest distance from the raw lifted sum to the integer vector.
    pub residual: f64,
}

/// Everything needed to work at one `(t, r)`: the warped metric, the
/// deduplicated jump candidates and the scale threshold.
pub struct CoarseContext<'a> {
    action: &'a Action,
    t: f64,
    r: f64,
    metric: WarpedMetric<'a>,
    candidates: Vec<(Word, Transform)>,
    delta: f64,
}

fn word_radius(r: f64) -> usize {
    r.floor().max(0.0) as usize
}

/// Ball elements with duplicate isometries removed, keeping the shortlex
/// first word of each class.
fn distinct_elements(action: &Action, radius: usize) -> Result<Vec<(Word, Transform)>> {
    let ball = action.evaluated_ball(radius)?;
    let probes = probe_points(action.space, 8);
    let mut kept: Vec<(Word, Transform, Vec<Point>)> = Vec::new();
    for (w, tr) in ball.words.into_iter().zip(ball.transforms) {
        let images: Vec<Point> = probes.iter().map(|p| tr.apply(p)).collect();
        let duplicate = kept
            .iter()
            .any(|(_, _, other)| images.iter().zip(other).all(|(a, b)| metric(a, b) < DEDUP_TOL));
        if !duplicate {
            kept.push((w, tr, images));
        }
    }
    Ok(kept.into_iter().map(|(w, tr, _)| (w, tr)).collect())
}

impl<'a> CoarseContext<'a> {
    /// Checks `t > 2r/δ(2r)` with `δ` measured on `net`.
    pub fn new(action: &'a Action, t: f64, r: f64, net: &Net) -> Result<Self> {
        action.require_isometric()?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidInput(format!("scale r must be positive, got {r}")));
        }
        let metric = WarpedMetric::new(action, t, word_radius(r))?;
        let candidates = distinct_elements(action, word_radius(r))?;
        let delta = scale_delta(action, word_radius(2.0 * r), net)?;
        let required = 2.0 * r / delta;
        if required.is_nan() || t <= required {
            return Err(Error::Threshold { t, required });
        }
        Ok(CoarseContext {
            action,
            t,
            r,
            metric,
            candidates,
            delta,
        })
    }

    /// Like [`CoarseContext::new`], measuring `δ` on the fixed probe points.
    pub fn with_probes(action: &'a Action, t: f64, r: f64) -> Result<Self> {
        let space = action.space;
        let d = space.diameter();
        let net = Net::from_points(space, d, d, probe_points(space, 32))?;
        Self::new(action, t, r, &net)
    }

    pub fn action(&self) -> &Action {
        self.action
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `δ(2r)`, `+inf` when no nontrivial isometry has length `<= 2r`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn threshold(&self) -> f64 {
        2.0 * self.r / self.delta
    }

    fn check_path(&self, path: &CoarsePath) -> Result<()> {
        if path.t != self.t || path.r != self.r {
            return Err(Error::InvalidInput(format!(
                "path at (t, r) = ({}, {}) used with context ({}, {})",
                path.t, path.r, self.t, self.r
            )));
        }
        Ok(())
    }

    /// Unique candidate `γ`, `‖γ‖ <= r`, with `d_M(γp, q) < r/t`.
    fn step(&self, index: usize, p: &Point, q: &Point) -> Result<Word> {
        let length = self.metric.distance(p, q);
        if length >= self.r {
            return Err(Error::NotRPath {
                step: index,
                length,
                r: self.r,
            });
        }
        let bound = self.r / self.t - GUARD;
        let mut found = self
            .candidates
            .iter()
            .filter(|(_, tr)| metric(&tr.apply(p), q) < bound)
            .map(|(w, _)| w);
        match (found.next(), found.count()) {
            (Some(w), 0) => Ok(w.clone()),
            (None, _) => Err(Error::ScaleCondition {
                step: index,
                candidates: 0,
            }),
            (Some(_), extra) => Err(Error::ScaleCondition {
                step: index,
                candidates: extra + 1,
            }),
        }
    }

    pub fn validate(&self, points: Vec<Point>) -> Result<CoarsePath> {
        if points.is_empty() {
            return Err(Error::InvalidInput("a path needs at least one point".into()));
        }
        for p in &points {
            self.action.space.check(p)?;
        }
        let steps: Vec<Result<Word>> = points
            .par_windows(2)
            .enumerate()
            .map(|(i, w)| self.step(i, &w[0], &w[1]))
            .collect();
        let jumps = steps.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(CoarsePath {
            t: self.t,
            r: self.r,
            points,
            jumps,
        })
    }

    /// Sum of warped lengths of the steps.
    pub fn path_length(&self, path: &CoarsePath) -> f64 {
        path.points.windows(2).map(|w| self.metric.distance(&w[0], &w[1])).sum()
    }

    /// Orbital part `(p₀, γ₀p₀, γ₁γ₀p₀, …, Q p₀)` with trivial jumps
    /// skipped, and spatial part `S_i = (γ_{ℓ-1}⋯γ_i) p_i`.
    pub fn canonical_form(&self, path: &CoarsePath) -> Result<(CoarsePath, CoarsePath)> {
        self.check_path(path)?;
        let mut orbital = vec![path.points[0].clone()];
        for g in &path.jumps {
            if !g.is_identity() {
                let next = self.action.act(g, orbital.last().expect("nonempty"));
                orbital.push(next);
            }
        }
        let n = path.points.len();
        let mut spatial = Vec::with_capacity(n);
        let mut suffix = Word::identity();
        spatial.push(path.points[n - 1].clone());
        for i in (0..n - 1).rev() {
            suffix = suffix.mul(&path.jumps[i]);
            spatial.push(self.action.act(&suffix, &path.points[i]));
        }
        spatial.reverse();
        Ok((self.validate(orbital)?, self.validate(spatial)?))
    }

    /// `α ∗ β`, merging `α`'s last point with `β`'s first.
    pub fn concat(&self, a: &CoarsePath, b: &CoarsePath) -> Result<CoarsePath> {
        self.check_path(a)?;
        self.check_path(b)?;
        if metric(a.end(), b.start()) >= POINT_TOL {
            return Err(Error::InvalidInput("paths are not composable".into()));
        }
        let mut points = a.points.clone();
        points.extend(b.points[1..].iter().cloned());
        let mut jumps = a.jumps.clone();
        jumps.extend(b.jumps.iter().cloned());
        Ok(CoarsePath {
            t: self.t,
            r: self.r,
            points,
            jumps,
        })
    }

    pub fn reverse(&self, path: &CoarsePath) -> Result<CoarsePath> {
        self.check_path(path)?;
        self.validate(path.points.iter().rev().cloned().collect())
    }

    /// `g · α`, pointwise.
    pub fn translate(&self, g: &Word, path: &CoarsePath) -> Result<CoarsePath> {
        self.check_path(path)?;
        self.validate(path.points.iter().map(|p| self.action.act(g, p)).collect())
    }

    pub fn homotopy_move(&self, path: &CoarsePath, mv: &Move) -> Result<CoarsePath> {
        self.check_path(path)?;
        let n = path.points.len();
        match mv {
            Move::AppendEndpoint => {
                let mut out = path.clone();
                out.points.push(path.end().clone());
                out.jumps.push(Word::identity());
                Ok(out)
            }
            Move::DeleteEndpoint => {
                if n < 2 || metric(&path.points[n - 2], &path.points[n - 1]) != 0.0 {
                    return Err(Error::HomotopyMove("last point is not a repeat".into()));
                }
                let mut out = path.clone();
                out.points.pop();
                out.jumps.pop();
                Ok(out)
            }
            Move::Replace { position, point } => {
                let k = *position;
                if k == 0 || k + 1 >= n {
                    return Err(Error::HomotopyMove(format!("position {k} is not interior")));
                }
                self.action.space.check(point)?;
                let moved = self.metric.distance(&path.points[k], point);
                if moved >= self.r {
                    return Err(Error::HomotopyMove(format!(
                        "new point is at warped distance {moved} >= r"
                    )));
                }
                let before = self
                    .step(k - 1, &path.points[k - 1], point)
                    .map_err(|e| Error::HomotopyMove(e.to_string()))?;
                let after = self
                    .step(k, point, &path.points[k + 1])
                    .map_err(|e| Error::HomotopyMove(e.to_string()))?;
                let mut out = path.clone();
                out.points[k] = point.clone();
                out.jumps[k - 1] = before;
                out.jumps[k] = after;
                Ok(out)
            }
        }
    }

    /// Loop at `base`: spell `w` through the orbit letter by letter, then
    /// walk back along the geodesic from `w·base` in steps shorter than `r/t`.
    pub fn j_gamma(&self, w: &Word, base: &Point) -> Result<CoarsePath> {
        self.action.space.check(base)?;
        let mut points = vec![base.clone()];
        let mut cur = base.clone();
        for &l in w.letters().iter().rev() {
            cur = self.action.apply_letter(l, &cur);
            points.push(cur.clone());
        }
        let span = metric(&cur, base);
        if span > 0.0 {
            let n = (span * self.t / self.r).ceil() as usize + 1;
            for j in 1..n {
                points.push(self.action.space.geodesic(&cur, base, j as f64 / n as f64)?);
            }
            points.push(base.clone());
        }
        self.validate(points)
    }

    /// Integer winding of the spatial part of a torus loop with trivial `Q`.
    pub fn winding_vector(&self, path: &CoarsePath) -> Result<Winding> {
        self.check_path(path)?;
        let dim = match self.action.space {
            Space::Torus { dim } => dim,
            other => {
                return Err(Error::SpaceMismatch {
                    expected: "torus".into(),
                    found: other.to_string(),
                })
            }
        };
        if !path.is_loop() {
            return Err(Error::InvalidInput("path is not a loop".into()));
        }
        if !q_map(path).is_identity() {
            return Err(Error::InvalidInput("loop has nontrivial Q".into()));
        }
        let n = path.points.len();
        let mut spatial = Vec::with_capacity(n);
        let mut suffix = Word::identity();
        spatial.push(path.points[n - 1].clone());
        for i in (0..n - 1).rev() {
            suffix = suffix.mul(&path.jumps[i]);
            spatial.push(self.action.act(&suffix, &path.points[i]));
        }
        spatial.reverse();
        let mut sum = vec![0.0; dim];
        for w in spatial.windows(2) {
            let (a, b) = (w[0].as_torus().expect("torus"), w[1].as_torus().expect("torus"));
            for k in 0..dim {
                let d = circle_lift(b[k] - a[k]);
                if d.abs() >= 0.5 - GUARD {
                    return Err(Error::Discretization("spatial step of length 1/2".into()));
                }
                sum[k] += d;
            }
        }
        let vector: Vec<i64> = sum.iter().map(|s| s.round() as i64).collect();
        let residual = sum
            .iter()
            .zip(&vector)
            .map(|(s, &v)| (s - v as f64).abs())
            .fold(0.0, f64::max);
        if residual > 0.1 {
            return Err(Error::WindingResidual { residual });
        }
        Ok(Winding { vector, residual })
    }
}

/// `δ(R)` over elements that are not the identity isometry.
fn scale_delta(action: &Action, radius: usize, net: &Net) -> Result<f64> {
    let probes = probe_points(action.space, 8);
    let table = displacement_table(action, net, radius)?;
    let mut delta = f64::INFINITY;
    for row in table {
        let tr = action.transform_of(&row.word);
        let trivial = probes.iter().all(|p| metric(&tr.apply(p), p) < DEDUP_TOL);
        if !trivial {
            delta = delta.min(row.min_displacement);
        }
    }
    Ok(delta)
}

/// Validates `points` as an r-path, measuring `δ` on the probe points.
pub fn validate_r_path(action: &Action, t: f64, r: f64, points: Vec<Point>) -> Result<CoarsePath> {
    CoarseContext::with_probes(action, t, r)?.validate(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{make_action, ActionSpec};

    fn circle(x: f64) -> Point {
        Point::torus(&[x]).unwrap()
    }

    fn rotation(alpha: f64) -> Action {
        make_action(&ActionSpec::Rotation {
            translations: vec![vec![alpha]],
        })
        .unwrap()
    }

    #[test]
    fn rotation_path_examples() {
        let action = rotation(0.3);
        let ctx = CoarseContext::with_probes(&action, 100.0, 3.0).unwrap();
        let single = ctx.validate(vec![circle(0.0)]).unwrap();
        assert!(single.jumps().is_empty());
        assert_eq!(ctx.path_length(&single), 0.0);

        let path = ctx.validate(vec![circle(0.0), circle(0.3), circle(0.6)]).unwrap();
        assert_eq!(path.jumps(), &[Word::parse("a").unwrap(), Word::parse("a").unwrap()]);
        assert_eq!(q_map(&path).to_string(), "aa");
        assert!((ctx.path_length(&path) - 2.0).abs() < 1e-12);

        let (o, s) = ctx.canonical_form(&path).unwrap();
        assert_eq!(o.points().len(), 3);
        for p in s.points() {
            assert!(metric(p, &circle(0.6)) < 1e-12);
        }

        // -0.6 ≡ 0.4, so this step is the double inverse jump
        let back = ctx.validate(vec![circle(0.0), circle(0.4)]).unwrap();
        assert_eq!(back.jumps()[0].to_string(), "AA");
        let err = ctx.validate(vec![circle(0.0), circle(0.45)]).unwrap_err();
        assert!(matches!(err, Error::NotRPath { step: 0, .. }));
    }

    #[test]
    fn step_too_long_is_rejected() {
        let action = rotation(0.3);
        let ctx = CoarseContext::with_probes(&action, 100.0, 3.0).unwrap();
        let err = ctx.validate(vec![circle(0.0), circle(0.9)]).unwrap_err();
        assert!(matches!(err, Error::NotRPath { step: 0, .. }));
    }

    #[test]
    fn threshold_is_enforced() {
        let action = rotation(0.3);
        // δ(6) = 0.1, so the threshold is 60
        assert!(matches!(
            CoarseContext::with_probes(&action, 50.0, 3.0),
            Err(Error::Threshold { .. })
        ));
    }

    #[test]
    fn j_gamma_one_letter() {
        let action = rotation(0.3);
        let ctx = CoarseContext::with_probes(&action, 100.0, 3.0).unwrap();
        let w = Word::parse("a").unwrap();
        let lp = ctx.j_gamma(&w, &circle(0.0)).unwrap();
        assert!(lp.is_loop());
        assert!(lp.steps() >= 11);
        assert_eq!(q_map(&lp), w);
        let constant = ctx.j_gamma(&Word::identity(), &circle(0.2)).unwrap();
        assert_eq!(constant.points().len(), 1);
    }

    #[test]
    fn homotopy_moves() {
        let action = rotation(0.3);
        let ctx = CoarseContext::with_probes(&action, 100.0, 3.0).unwrap();
        let path = ctx.validate(vec![circle(0.0), circle(0.3), circle(0.6)]).unwrap();
        let nudged = ctx
            .homotopy_move(
                &path,
                &Move::Replace {
                    position: 1,
                    point: circle(0.3 + 0.25 * 0.03),
                },
            )
            .unwrap();
        assert_eq!(nudged.jumps(), path.jumps());
        let e = ctx.homotopy_move(
            &path,
            &Move::Replace {
                position: 2,
                point: circle(0.6),
            },
        );
        assert!(matches!(e, Err(Error::HomotopyMove(_))));
        let longer = ctx.homotopy_move(&path, &Move::AppendEndpoint).unwrap();
        assert_eq!(longer.points().len(), 4);
        assert_eq!(ctx.homotopy_move(&longer, &Move::DeleteEndpoint).unwrap(), path);
        assert!(ctx.homotopy_move(&path, &Move::DeleteEndpoint).is_err());
    }

    #[test]
    fn winding_of_circle_loop() {
        let action = Action::trivial(Space::Torus { dim: 1 });
        let ctx = CoarseContext::with_probes(&action, 10.0, 1.0).unwrap();
        let pts: Vec<Point> = (0..=20).map(|i| circle((i % 20) as f64 / 20.0)).collect();
        let lp = ctx.validate(pts).unwrap();
        assert_eq!(ctx.winding_vector(&lp).unwrap().vector, vec![1]);
        let back = ctx.reverse(&lp).unwrap();
        assert_eq!(ctx.winding_vector(&back).unwrap().vector, vec![-1]);
        let constant = ctx.validate(vec![circle(0.5)]).unwrap();
        assert_eq!(ctx.winding_vector(&constant).unwrap().vector, vec![0]);
    }
}
