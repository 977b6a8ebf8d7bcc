//! Group actions by labeled generators, and numerical diagnostics for
//! relations and freeness.
//!
//! The acting group is always treated as the free group on the generator
//! labels; relations of the actual acting group show up as words whose
//! transform is numerically the identity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{ball_fold, Letter, Word, DEFAULT_BALL_BUDGET};
use crate::quaternion::Quat;
use crate::spaces::{metric, random_unit_quat, CMatrix, Net, Point, Space};

const UNIT_TOL: f64 = 1e-9;

/// Square integer matrix acting on `T^d` by `x ↦ A x mod 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix(pub Vec<Vec<i64>>);

impl IntMatrix {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn identity(d: usize) -> Self {
        IntMatrix((0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let d = self.dim();
        IntMatrix(
            (0..d)
                .map(|i| (0..d).map(|j| (0..d).map(|k| self.0[i][k] * other.0[k][j]).sum()).collect())
                .collect(),
        )
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i64 {
        let d = self.dim();
        if d == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> = self.0.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..d - 1 {
            if m[k][k] == 0 {
                match (k + 1..d).find(|&i| m[i][k] != 0) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        (sign * m[d - 1][d - 1]) as i64
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let d = self.dim();
        let det = self.determinant();
        if det.abs() != 1 {
            return Err(Error::Validation(format!(
                "integer matrix has determinant {det}, not invertible over Z"
            )));
        }
        // Gauss-Jordan in floating point, then round and verify exactly
        let mut a: Vec<Vec<f64>> = self.0.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
        let mut inv: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64 as f64).collect()).collect();
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap();
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col];
            for j in 0..d {
                a[col][j] /= p;
                inv[col][j] /= p;
            }
            for i in 0..d {
                if i != col {
                    let f = a[i][col];
                    for j in 0..d {
                        a[i][j] -= f * a[col][j];
                        inv[i][j] -= f * inv[col][j];
                    }
                }
            }
        }
        let candidate = IntMatrix(inv.iter().map(|r| r.iter().map(|v| v.round() as i64).collect()).collect());
        if self.mul(&candidate) != IntMatrix::identity(d) {
            return Err(Error::Validation("integer inverse is numerically unstable".into()));
        }
        Ok(candidate)
    }
}

/// The isometry datum of one generator.
#[derive(Clone, Debug, PartialEq)]
pub enum Transform {
    /// Torus translation `x ↦ x + v`.
    Translation(Vec<f64>),
    /// Toral automorphism `x ↦ A x`; not an isometry.
    Linear(IntMatrix),
    /// `x ↦ left · x · right` on unit quaternions.
    QuatLeftRight { left: Quat, right: Quat },
    /// `x ↦ left · x · right` on a unitary group.
    UnitaryLeftRight { left: CMatrix, right: CMatrix },
}

impl Transform {
    pub fn identity(space: Space) -> Transform {
        match space {
            Space::Torus { dim } => Transform::Translation(vec![0.0; dim]),
            Space::Sphere => Transform::QuatLeftRight {
                left: Quat::ONE,
                right: Quat::ONE,
            },
            Space::Unitary { n } => Transform::UnitaryLeftRight {
                left: CMatrix::identity(n, n),
                right: CMatrix::identity(n, n),
            },
        }
    }

    pub fn is_isometry(&self) -> bool {
        !matches!(self, Transform::Linear(_))
    }

    pub fn apply(&self, x: &Point) -> Point {
        match (self, x) {
            (Transform::Translation(v), Point::Torus(c)) => Point::Torus(
                c.iter()
                    .zip(v)
                    .map(|(a, b)| {
                        let r = (a + b).rem_euclid(1.0);
                        if r >= 1.0 {
                            0.0
                        } else {
                            r
                        }
                    })
                    .collect(),
            ),
            (Transform::Linear(m), Point::Torus(c)) => Point::Torus(
                m.0.iter()
                    .map(|row| {
                        let s: f64 = row.iter().zip(c).map(|(&a, &b)| a as f64 * b).sum();
                        let r = s.rem_euclid(1.0);
                        if r >= 1.0 {
                            0.0
                        } else {
                            r
                        }
                    })
                    .collect(),
            ),
            (Transform::QuatLeftRight { left, right }, Point::Sphere(q)) => {
                Point::Sphere((*left * *q * *right).normalized())
            }
            (Transform::UnitaryLeftRight { left, right }, Point::Unitary(u)) => {
                Point::Unitary(left * u * right)
            }
            _ => panic!("transform applied to a point of the wrong space"),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Transform) -> Transform {
        match (self, other) {
            (Transform::Translation(a), Transform::Translation(b)) => {
                Transform::Translation(a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(1.0)).collect())
            }
            (Transform::Linear(a), Transform::Linear(b)) => Transform::Linear(a.mul(b)),
            (
                Transform::QuatLeftRight { left: l1, right: r1 },
                Transform::QuatLeftRight { left: l2, right: r2 },
            ) => Transform::QuatLeftRight {
                left: (*l1 * *l2).normalized(),
                right: (*r2 * *r1).normalized(),
            },
            (
                Transform::UnitaryLeftRight { left: l1, right: r1 },
                Transform::UnitaryLeftRight { left: l2, right: r2 },
            ) => Transform::UnitaryLeftRight {
                left: l1 * l2,
                right: r2 * r1,
            },
            _ => panic!("composing transforms of different kinds"),
        }
    }

    pub fn inverse(&self) -> Result<Transform> {
        Ok(match self {
            Transform::Translation(v) => Transform::Translation(v.iter().map(|x| -x).collect()),
            Transform::Linear(m) => Transform::Linear(m.inverse()?),
            Transform::QuatLeftRight { left, right } => Transform::QuatLeftRight {
                left: left.conj(),
                right: right.conj(),
            },
            Transform::UnitaryLeftRight { left, right } => Transform::UnitaryLeftRight {
                left: left.adjoint(),
                right: right.adjoint(),
            },
        })
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    /// Human-readable name, e.g. `delta0` or `gamma1`.
    pub name: String,
    pub transform: Transform,
    pub inverse: Transform,
}

/// A symmetric labeled generating set acting on a space.
#[derive(Clone, Debug)]
pub struct Action {
    pub space: Space,
    generators: Vec<Generator>,
    pub isometric: bool,
    pub free_claimed: bool,
}

/// One element of the symmetric generating set.
#[derive(Clone, Debug)]
pub struct SymmetricGenerator<'a> {
    pub letter: Letter,
    pub label: char,
    pub inverse_label: char,
    pub transform: &'a Transform,
}

impl Action {
    pub fn new(space: Space, generators: Vec<(String, Transform)>, free_claimed: bool) -> Result<Action> {
        let mut gens = Vec::with_capacity(generators.len());
        if generators.len() > 26 {
            return Err(Error::Validation("at most 26 generators are supported".into()));
        }
        for (name, transform) in generators {
            check_transform_space(space, &transform)?;
            let inverse = transform.inverse()?;
            gens.push(Generator {
                name,
                transform,
                inverse,
            });
        }
        let isometric = gens.iter().all(|g| g.transform.is_isometry());
        Ok(Action {
            space,
            generators: gens,
            isometric,
            free_claimed,
        })
    }

    pub fn trivial(space: Space) -> Action {
        Action {
            space,
            generators: Vec::new(),
            isometric: true,
            free_claimed: false,
        }
    }

    /// Number of positive generators (rank of the free group on labels).
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn symmetric_generators(&self) -> Vec<SymmetricGenerator<'_>> {
        Letter::alphabet(self.rank())
            .into_iter()
            .map(|l| SymmetricGenerator {
                letter: l,
                label: l.to_char(),
                inverse_label: l.inverse().to_char(),
                transform: self.letter_transform(l),
            })
            .collect()
    }

    pub fn letter_transform(&self, l: Letter) -> &Transform {
        let g = &self.generators[l.generator()];
        if l.is_inverse() {
            &g.inverse
        } else {
            &g.transform
        }
    }

    pub fn apply_letter(&self, l: Letter, x: &Point) -> Point {
        self.letter_transform(l).apply(x)
    }

    /// `w · x`, applying the rightmost letter first.
    pub fn act(&self, w: &Word, x: &Point) -> Point {
        w.letters()
            .iter()
            .rev()
            .fold(x.clone(), |p, &l| self.apply_letter(l, &p))
    }

    pub fn transform_of(&self, w: &Word) -> Transform {
        w.letters()
            .iter()
            .fold(Transform::identity(self.space), |t, &l| t.compose(self.letter_transform(l)))
    }

    pub fn require_isometric(&self) -> Result<()> {
        if self.isometric {
            Ok(())
        } else {
            Err(Error::NonIsometric)
        }
    }

    /// The word ball of the given radius with each element's transform.
    pub fn evaluated_ball(&self, radius: usize) -> Result<EvaluatedBall> {
        self.evaluated_ball_with_budget(radius, DEFAULT_BALL_BUDGET)
    }

    pub fn evaluated_ball_with_budget(&self, radius: usize, budget: u128) -> Result<EvaluatedBall> {
        let entries = ball_fold(self.rank(), radius, budget, Transform::identity(self.space), |t, l| {
            t.compose(self.letter_transform(l))
        })?;
        let (words, transforms) = entries.into_iter().unzip();
        Ok(EvaluatedBall { words, transforms })
    }
}

fn check_transform_space(space: Space, t: &Transform) -> Result<()> {
    let ok = match (space, t) {
        (Space::Torus { dim }, Transform::Translation(v)) => v.len() == dim,
        (Space::Torus { dim }, Transform::Linear(m)) => m.dim() == dim && m.0.iter().all(|r| r.len() == dim),
        (Space::Sphere, Transform::QuatLeftRight { .. }) => true,
        (Space::Unitary { n }, Transform::UnitaryLeftRight { left, right }) => {
            left.nrows() == n && left.ncols() == n && right.nrows() == n && right.ncols() == n
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Validation(format!("generator datum does not act on {space}")))
    }
}

/// Shortlex word ball together with each element's transform.
#[derive(Clone, Debug)]
pub struct EvaluatedBall {
    pub words: Vec<Word>,
    pub transforms: Vec<Transform>,
}

impl EvaluatedBall {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Declarative description of an action, as found in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionSpec {
    /// No generators.
    Trivial { space: Space },
    /// Translations of `T^d`, one vector per generator.
    Rotation { translations: Vec<Vec<f64>> },
    /// Left multiplication on SU(2).
    Su2Left { quaternions: Vec<[f64; 4]> },
    /// Seeded generic left multiplications on SU(2).
    GenericSu2 { count: usize, seed: u64 },
    /// `Δ` acting by left and `F_n` by right multiplication on SU(2).
    LeftRight { left: Vec<[f64; 4]>, right: Vec<[f64; 4]> },
    /// Left-right action on `U(n)`; each matrix as row-major `re, im` pairs.
    LeftRightUnitary {
        n: usize,
        left: Vec<Vec<f64>>,
        right: Vec<Vec<f64>>,
    },
    /// Integer matrices acting on `T^d`.
    ToralAutomorphism { matrices: Vec<Vec<Vec<i64>>> },
}

fn unit_quat(q: &[f64; 4]) -> Result<Quat> {
    let q = Quat(*q);
    let n = q.norm();
    if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
        return Err(Error::Validation(format!("quaternion {:?} has norm {n}, not 1", q.0)));
    }
    Ok(q.normalized())
}

fn unitary_matrix(n: usize, coords: &[f64]) -> Result<CMatrix> {
    let space = Space::Unitary { n };
    match space.point_from_coords(coords) {
        Ok(Point::Unitary(m)) => Ok(m),
        Ok(_) => unreachable!(),
        Err(e) => Err(Error::Validation(e.to_string())),
    }
}

/// Builds an action from its spec, taking the symmetric closure of the
/// listed generators.
pub fn make_action(spec: &ActionSpec) -> Result<Action> {
    match spec {
        ActionSpec::Trivial { space } => Ok(Action::trivial(*space)),
        ActionSpec::Rotation { translations } => {
            let dim = translations
                .first()
                .map(|v| v.len())
                .ok_or_else(|| Error::Validation("rotation needs at least one generator".into()))?;
            if dim == 0 {
                return Err(Error::Validation("rotation vectors must be nonempty".into()));
            }
            let gens = translations
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if v.iter().any(|c| !c.is_finite()) {
                        return Err(Error::Validation("non-finite translation".into()));
                    }
                    Ok((format!("rot{i}"), Transform::Translation(v.clone())))
                })
                .collect::<Result<Vec<_>>>()?;
            Action::new(Space::Torus { dim }, gens, false)
        }
        ActionSpec::Su2Left { quaternions } => {
            let gens = quaternions
                .iter()
                .enumerate()
                .map(|(i, q)| {
                    Ok((
                        format!("q{i}"),
                        Transform::QuatLeftRight {
                            left: unit_quat(q)?,
                            right: Quat::ONE,
                        },
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Action::new(Space::Sphere, gens, false)
        }
        ActionSpec::GenericSu2 { count, seed } => {
            let qs = random_generic_generators(*count, *seed)?;
            let gens = qs
                .into_iter()
                .enumerate()
                .map(|(i, q)| {
                    (
                        format!("q{i}"),
                        Transform::QuatLeftRight {
                            left: q,
                            right: Quat::ONE,
                        },
                    )
                })
                .collect();
            Action::new(Space::Sphere, gens, true)
        }
        ActionSpec::LeftRight { left, right } => {
            let mut gens = Vec::new();
            for (i, q) in left.iter().enumerate() {
                gens.push((
                    format!("delta{i}"),
                    Transform::QuatLeftRight {
                        left: unit_quat(q)?,
                        right: Quat::ONE,
                    },
                ));
            }
            for (i, q) in right.iter().enumerate() {
                // right multiplication by γ⁻¹ makes this a left action
                gens.push((
                    format!("gamma{i}"),
                    Transform::QuatLeftRight {
                        left: Quat::ONE,
                        right: unit_quat(q)?.conj(),
                    },
                ));
            }
            Action::new(Space::Sphere, gens, false)
        }
        ActionSpec::LeftRightUnitary { n, left, right } => {
            let mut gens = Vec::new();
            for (i, c) in left.iter().enumerate() {
                gens.push((
                    format!("delta{i}"),
                    Transform::UnitaryLeftRight {
                        left: unitary_matrix(*n, c)?,
                        right: CMatrix::identity(*n, *n),
                    },
                ));
            }
            for (i, c) in right.iter().enumerate() {
                gens.push((
                    format!("gamma{i}"),
                    Transform::UnitaryLeftRight {
                        left: CMatrix::identity(*n, *n),
                        right: unitary_matrix(*n, c)?.adjoint(),
                    },
                ));
            }
            Action::new(Space::Unitary { n: *n }, gens, false)
        }
        ActionSpec::ToralAutomorphism { matrices } => {
            let dim = matrices
                .first()
                .map(|m| m.len())
                .ok_or_else(|| Error::Validation("toral automorphism needs a matrix".into()))?;
            let gens = matrices
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                        return Err(Error::Validation("matrices must be square of equal size".into()));
                    }
                    Ok((format!("A{i}"), Transform::Linear(IntMatrix(m.clone()))))
                })
                .collect::<Result<Vec<_>>>()?;
            Action::new(Space::Torus { dim }, gens, false)
        }
    }
}

/// `k` seeded Haar-random unit quaternions (normalized 4D Gaussians).
pub fn random_generic_generators(k: usize, seed: u64) -> Result<Vec<Quat>> {
    if k == 0 {
        return Err(Error::InvalidInput("need at least one generator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..k).map(|_| random_unit_quat(&mut rng)).collect())
}

/// Fixed probe points used when no net is supplied: a base point plus
/// seeded uniform samples.
pub fn probe_points(space: Space, count: usize) -> Vec<Point> {
    let base = match space {
        Space::Torus { dim } => Point::Torus(vec![0.0; dim]),
        Space::Sphere => Point::Sphere(Quat::ONE),
        Space::Unitary { n } => Point::Unitary(CMatrix::identity(n, n)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    std::iter::once(base)
        .chain((0..count).map(|_| space.sample_uniform(&mut rng)))
        .collect()
}

/// All nontrivial reduced words of length at most `max_len` that move every
/// probe point by less than `tol`, i.e. numerical relations.
pub fn relation_check(action: &Action, max_len: usize, tol: f64) -> Result<Vec<Word>> {
    action.require_isometric()?;
    let ball = action.evaluated_ball(max_len)?;
    let probes = probe_points(action.space, 8);
    let flags: Vec<bool> = ball
        .transforms
        .par_iter()
        .map(|t| probes.iter().all(|p| metric(p, &t.apply(p)) < tol))
        .collect();
    Ok(ball
        .words
        .into_iter()
        .zip(flags)
        .skip(1)
        .filter_map(|(w, f)| f.then_some(w))
        .collect())
}

/// Minimum displacement over net points for one word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordDisplacement {
    pub word: Word,
    pub min_displacement: f64,
    /// Net index attaining the minimum (lowest index on ties).
    pub point: usize,
}

/// `min_x d(x, w·x)` over the net for every nontrivial word in the ball,
/// in shortlex order.
pub fn displacement_table(action: &Action, net: &Net, radius: usize) -> Result<Vec<WordDisplacement>> {
    action.require_isometric()?;
    if net.is_empty() {
        return Err(Error::EmptyNet);
    }
    if action.space != net.space {
        return Err(Error::SpaceMismatch {
            expected: action.space.to_string(),
            found: net.space.to_string(),
        });
    }
    let ball = action.evaluated_ball(radius)?;
    let rows: Vec<(f64, usize)> = ball.transforms[1..]
        .par_iter()
        .map(|t| {
            net.points
                .iter()
                .enumerate()
                .map(|(i, p)| (metric(p, &t.apply(p)), i))
                .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best })
        })
        .collect();
    Ok(ball.words[1..]
        .iter()
        .zip(rows)
        .map(|(w, (d, i))| WordDisplacement {
            word: w.clone(),
            min_displacement: d,
            point: i,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeActionReport {
    pub max_len: usize,
    pub tol: f64,
    pub net_epsilon: f64,
    pub words: Vec<WordDisplacement>,
    /// Smallest displacement over all words, with the first word attaining it.
    pub minimum: Option<WordDisplacement>,
    pub passed: bool,
}

/// Empirical freeness: every nontrivial word up to `max_len` must displace
/// every net point by more than `tol`.
pub fn free_action_check(action: &Action, net: &Net, max_len: usize, tol: f64) -> Result<FreeActionReport> {
    let words = displacement_table(action, net, max_len)?;
    let minimum = words
        .iter()
        .fold(None::<&WordDisplacement>, |best, w| match best {
            Some(b) if b.min_displacement <= w.min_displacement => Some(b),
            _ => Some(w),
        })
        .cloned();
    let passed = words.iter().all(|w| w.min_displacement > tol);
    Ok(FreeActionReport {
        max_len,
        tol,
        net_epsilon: net.epsilon,
        words,
        minimum,
        passed,
    })
}
