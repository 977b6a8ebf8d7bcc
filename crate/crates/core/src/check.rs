//! Seeded invariant suites, plus the random path and move generators they
//! share with the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::actions::{make_action, Action, ActionSpec};
use crate::coarse::{q_map, CoarseContext, CoarsePath, Move};
use crate::error::Result;
use crate::graphs::{brute_force_cheeger, cheeger_bounds, random_connected_graph, spectral_gap, SpectralMode};
use crate::groups::{ball_size, enumerate_ball, random_word, Automorphism, Letter, Word};
use crate::spaces::{epsilon_net, metric, Point, Space};
use crate::warped::{build_warped_graph, warped_distance_apx, warped_distance_exact};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Groups,
    Spaces,
    Actions,
    Warped,
    Coarse,
    Graphs,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Groups,
        Suite::Spaces,
        Suite::Actions,
        Suite::Warped,
        Suite::Coarse,
        Suite::Graphs,
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub suite: Suite,
    pub property: String,
    pub cases: usize,
    /// First few failing cases, described.
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub seed: u64,
    pub cases: usize,
    pub outcomes: Vec<PropertyOutcome>,
    pub passed: bool,
}

struct Recorder {
    suite: Suite,
    out: Vec<PropertyOutcome>,
}

impl Recorder {
    fn property(&mut self, name: &str, cases: usize, mut case: impl FnMut(usize) -> Option<String>) {
        let mut failures = Vec::new();
        let mut failed = 0;
        for i in 0..cases {
            if let Some(msg) = case(i) {
                failed += 1;
                if failures.len() < 5 {
                    failures.push(msg);
                }
            }
        }
        self.out.push(PropertyOutcome {
            suite: self.suite,
            property: name.to_string(),
            cases,
            failures,
            passed: failed == 0,
        });
    }
}

/// Runs the selected suites; each suite gets its own stream derived from
/// `seed`, so results do not depend on which other suites run.
pub fn run_checks(suites: &[Suite], seed: u64, cases: usize) -> Result<CheckReport> {
    let mut outcomes = Vec::new();
    for (i, &suite) in Suite::ALL.iter().enumerate() {
        if !suites.contains(&suite) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((i as u64 + 1) << 32));
        let mut rec = Recorder { suite, out: Vec::new() };
        match suite {
            Suite::Groups => groups_suite(&mut rec, &mut rng, cases),
            Suite::Spaces => spaces_suite(&mut rec, &mut rng, cases)?,
            Suite::Actions => actions_suite(&mut rec, &mut rng, cases)?,
            Suite::Warped => warped_suite(&mut rec, &mut rng, cases)?,
            Suite::Coarse => coarse_suite(&mut rec, &mut rng, cases)?,
            Suite::Graphs => graphs_suite(&mut rec, &mut rng, cases)?,
        }
        outcomes.extend(rec.out);
    }
    let passed = outcomes.iter().all(|o| o.passed);
    Ok(CheckReport {
        seed,
        cases,
        outcomes,
        passed,
    })
}

fn random_raw<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> Vec<Letter> {
    let alphabet = Letter::alphabet(n);
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
}

fn groups_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) {
    rec.property("reduce_idempotent_subadditive", cases, |_| {
        let u = Word::reduce(random_raw(rng, 3, 12));
        let v = Word::reduce(random_raw(rng, 3, 12));
        let uv = u.mul(&v);
        let again = Word::reduce(uv.letters().iter().copied());
        (again != uv || uv.len() > u.len() + v.len()).then(|| format!("{u} * {v}"))
    });
    rec.property("stable_norm_conjugation_invariant", cases, |_| {
        let len = rng.random_range(0..=10);
        let w = random_word(rng, 2, len);
        let clen = rng.random_range(0..=6);
        let c = random_word(rng, 2, clen);
        (w.conjugate_by(&c).stable_norm() != w.stable_norm()).then(|| format!("{w} by {c}"))
    });
    rec.property("stable_norm_of_powers", cases, |_| {
        let len = rng.random_range(0..=8);
        let w = random_word(rng, 2, len);
        let k = rng.random_range(1..=8u32);
        (w.pow(k).stable_norm() != k as usize * w.stable_norm()).then(|| format!("{w}^{k}"))
    });
    rec.property("stable_norm_at_most_length", cases, |_| {
        let len = rng.random_range(0..=12);
        let w = random_word(rng, 3, len);
        (w.stable_norm() > w.len()).then(|| w.to_string())
    });
    rec.property("automorphism_composition", cases, |_| {
        let images = |rng: &mut ChaCha8Rng| {
            Automorphism::new(
                (0..2)
                    .map(|_| {
                        let l = rng.random_range(1..=3);
                        random_word(rng, 2, l)
                    })
                    .collect(),
            )
        };
        let phi = images(rng);
        let psi = images(rng);
        let len = rng.random_range(0..=6);
        let w = random_word(rng, 2, len);
        (phi.compose(&psi).apply(&w) != phi.apply(&psi.apply(&w))).then(|| w.to_string())
    });
    rec.property("ball_size_closed_form", 1, |_| {
        for n in 2..=3 {
            for r in 0..=4 {
                let ball = enumerate_ball(n, r).expect("small ball");
                if ball.elements.len() as u128 != ball_size(n, r) {
                    return Some(format!("n={n} r={r}"));
                }
            }
        }
        None
    });
}

fn spaces_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) -> Result<()> {
    for space in [Space::Torus { dim: 2 }, Space::Sphere, Space::Unitary { n: 2 }] {
        rec.property(&format!("metric_axioms_{}", space_tag(space)), cases, |_| {
            let x = space.sample_uniform(rng);
            let y = space.sample_uniform(rng);
            let z = space.sample_uniform(rng);
            let (xy, yx) = (metric(&x, &y), metric(&y, &x));
            let slack = metric(&x, &y) + metric(&y, &z) - metric(&x, &z);
            ((xy - yx).abs() > 1e-9 || slack < -1e-9 || metric(&x, &x) > 1e-9)
                .then(|| format!("xy={xy} yx={yx} slack={slack}"))
        });
    }
    let a = epsilon_net(Space::Sphere, 0.9, 11)?;
    let b = epsilon_net(Space::Sphere, 0.9, 11)?;
    rec.property("net_determinism", 1, |_| (a != b).then(|| "nets differ".to_string()));
    Ok(())
}

fn space_tag(space: Space) -> String {
    match space {
        Space::Torus { dim } => format!("torus{dim}"),
        Space::Sphere => "sphere".into(),
        Space::Unitary { n } => format!("unitary{n}"),
    }
}

fn left_right_action() -> Result<Action> {
    let q = |axis: [f64; 3], angle: f64| crate::quaternion::Quat::from_axis_angle(axis, angle).0;
    make_action(&ActionSpec::LeftRight {
        left: vec![q([1.0, 0.0, 0.0], 1.0)],
        right: vec![q([0.0, 1.0, 0.0], 0.7), q([0.3, 0.2, 1.0], 2.1)],
    })
}

fn actions_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) -> Result<()> {
    let generic = make_action(&ActionSpec::GenericSu2 { count: 2, seed: 1 })?;
    let lr = left_right_action()?;
    for (name, action) in [("generic_su2", &generic), ("left_right", &lr)] {
        rec.property(&format!("symmetric_closure_{name}"), cases, |_| {
            let x = action.space.sample_uniform(rng);
            action
                .symmetric_generators()
                .iter()
                .find(|g| {
                    let inv = action.letter_transform(g.letter.inverse());
                    metric(&inv.apply(&g.transform.apply(&x)), &x) > 1e-9
                })
                .map(|g| format!("generator {}", g.label))
        });
        rec.property(&format!("isometry_{name}"), cases, |_| {
            let x = action.space.sample_uniform(rng);
            let y = action.space.sample_uniform(rng);
            let d = metric(&x, &y);
            action
                .symmetric_generators()
                .iter()
                .find(|g| (metric(&g.transform.apply(&x), &g.transform.apply(&y)) - d).abs() > 1e-9)
                .map(|g| format!("generator {}", g.label))
        });
    }
    rec.property("left_right_commute", cases, |_| {
        let x = lr.space.sample_uniform(rng);
        let left = lr.letter_transform(Letter::positive(0));
        for g in 1..lr.rank() {
            let right = lr.letter_transform(Letter::positive(g));
            if metric(&left.apply(&right.apply(&x)), &right.apply(&left.apply(&x))) > 1e-9 {
                return Some(format!("generator {g}"));
            }
        }
        None
    });
    Ok(())
}

fn warped_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) -> Result<()> {
    let circle = make_action(&ActionSpec::Rotation {
        translations: vec![vec![2f64.sqrt() - 1.0]],
    })?;
    let space = circle.space;
    rec.property("metric_axioms_circle_t5", cases, |_| {
        let x = space.sample_uniform(rng);
        let y = space.sample_uniform(rng);
        let z = space.sample_uniform(rng);
        let d = |p: &Point, q: &Point| warped_distance_exact(&circle, 5.0, p, q, 16).expect("valid");
        let slack = d(&x, &y) + d(&y, &z) - d(&x, &z);
        let asym = (d(&x, &y) - d(&y, &x)).abs();
        (asym > 1e-9 || slack < -1e-9).then(|| format!("asym={asym} slack={slack}"))
    });
    rec.property("monotone_in_level", cases, |_| {
        let x = space.sample_uniform(rng);
        let y = space.sample_uniform(rng);
        let s = rng.random_range(1.0..10.0);
        let t = s + rng.random_range(0.0..10.0);
        let ds = warped_distance_exact(&circle, s, &x, &y, 32).expect("valid");
        let dt = warped_distance_exact(&circle, t, &x, &y, 32).expect("valid");
        (ds > dt + 1e-9).then(|| format!("d_{s}={ds} > d_{t}={dt}"))
    });
    let net = epsilon_net(space, 1.0 / 50.0, 0)?;
    let graph = build_warped_graph(&circle, 10.0, &net)?;
    rec.property("graph_distance_dominates_exact", cases, |_| {
        let i = rng.random_range(0..net.len());
        let j = rng.random_range(0..net.len());
        let apx = warped_distance_apx(&graph, i, j);
        let exact = warped_distance_exact(&circle, 10.0, &net.points[i], &net.points[j], 32).expect("valid");
        (apx < exact - 1e-9).then(|| format!("({i}, {j}): apx={apx} exact={exact}"))
    });
    Ok(())
}

/// Point at distance `rho` from `p` in a random direction.
pub fn perturb<R: Rng>(space: Space, p: &Point, rho: f64, rng: &mut R) -> Point {
    if rho == 0.0 {
        return p.clone();
    }
    match p {
        Point::Torus(c) => {
            let dir: Vec<f64> = c.iter().map(|_| rng.random::<f64>() - 0.5).collect();
            let n = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            let moved: Vec<f64> = c.iter().zip(&dir).map(|(x, d)| x + rho * d / n).collect();
            Point::torus(&moved).expect("finite coordinates")
        }
        _ => loop {
            let q = space.sample_uniform(rng);
            let d = metric(p, &q);
            if d > 2.0 * rho && d < space.diameter() - 1e-3 {
                if let Ok(x) = space.geodesic(p, &q, rho / d) {
                    return x;
                }
            }
        },
    }
}

/// Random r-path: each step applies a random jump of length at most one and
/// then a spatial wobble below `0.4·r/t`. Requires `r > 1.4 r/t + 1`.
pub fn random_path<R: Rng>(ctx: &CoarseContext<'_>, start: &Point, steps: usize, rng: &mut R) -> Result<CoarsePath> {
    let action = ctx.action();
    let gens = action.symmetric_generators();
    let mut points = vec![start.clone()];
    for _ in 0..steps {
        let cur = points.last().expect("nonempty");
        let k = rng.random_range(0..=gens.len());
        let jumped = if k == gens.len() { cur.clone() } else { gens[k].transform.apply(cur) };
        let rho = rng.random_range(0.0..0.4) * ctx.r() / ctx.t();
        points.push(perturb(action.space, &jumped, rho, rng));
    }
    ctx.validate(points)
}

/// Random loop at a random base: `j(w)` for a random word of length at most
/// `max_word`.
pub fn random_loop<R: Rng>(ctx: &CoarseContext<'_>, max_word: usize, rng: &mut R) -> Result<CoarsePath> {
    let action = ctx.action();
    let base = action.space.sample_uniform(rng);
    let len = rng.random_range(0..=max_word);
    let w = random_word(rng, action.rank(), len);
    ctx.j_gamma(&w, &base)
}

/// Splits every spatial step (trivial jump) into `pieces` geodesic steps,
/// leaving room for generator-composed replacements.
pub fn refine_path(ctx: &CoarseContext<'_>, path: &CoarsePath, pieces: usize) -> Result<CoarsePath> {
    let space = ctx.action().space;
    let pts = path.points();
    let mut out = vec![pts[0].clone()];
    for (i, jump) in path.jumps().iter().enumerate() {
        if jump.is_identity() {
            for k in 1..pieces {
                out.push(space.geodesic(&pts[i], &pts[i + 1], k as f64 / pieces as f64)?);
            }
        }
        out.push(pts[i + 1].clone());
    }
    ctx.validate(out)
}

/// Draws random single moves until one is valid: interior replacements
/// (a wobble, optionally composed with a generator), endpoint appends and
/// deletions of a repeated endpoint.
pub fn random_move<R: Rng>(ctx: &CoarseContext<'_>, path: &CoarsePath, rng: &mut R) -> Result<(Move, CoarsePath)> {
    let action = ctx.action();
    let gens = action.symmetric_generators();
    loop {
        let n = path.points().len();
        let choice = rng.random_range(0..10);
        let mv = if choice == 0 || n < 3 {
            Move::AppendEndpoint
        } else if choice == 1 {
            Move::DeleteEndpoint
        } else {
            let position = rng.random_range(1..n - 1);
            let rho = rng.random_range(0.0..0.45) * ctx.r() / ctx.t();
            let mut point = perturb(action.space, &path.points()[position], rho, rng);
            if rng.random_bool(0.5) {
                point = gens[rng.random_range(0..gens.len())].transform.apply(&point);
            }
            Move::Replace { position, point }
        };
        if let Ok(next) = ctx.homotopy_move(path, &mv) {
            return Ok((mv, next));
        }
    }
}

fn coarse_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) -> Result<()> {
    let action = make_action(&ActionSpec::GenericSu2 { count: 2, seed: 1 })?;
    let ctx = CoarseContext::with_probes(&action, 100.0, 2.5)?;
    let small = cases.min(20);
    rec.property("q_of_j_is_identity", small, |_| {
        let len = rng.random_range(0..=8);
        let w = random_word(rng, 2, len);
        let base = action.space.sample_uniform(rng);
        match ctx.j_gamma(&w, &base) {
            Ok(lp) if q_map(&lp) == w => None,
            Ok(lp) => Some(format!("{w} gave {}", q_map(&lp))),
            Err(e) => Some(format!("{w}: {e}")),
        }
    });
    rec.property("q_homotopy_invariant", small, |_| {
        let lp = match random_loop(&ctx, 3, rng).and_then(|lp| refine_path(&ctx, &lp, 4)) {
            Ok(lp) => lp,
            Err(e) => return Some(e.to_string()),
        };
        match random_move(&ctx, &lp, rng) {
            Ok((_, moved)) if q_map(&moved) == q_map(&lp) => None,
            Ok((mv, moved)) => Some(format!("{mv:?}: {} -> {}", q_map(&lp), q_map(&moved))),
            Err(e) => Some(e.to_string()),
        }
    });
    rec.property("canonical_form_laws", small, |_| {
        let start = action.space.sample_uniform(rng);
        let steps = rng.random_range(0..12);
        let path = match random_path(&ctx, &start, steps, rng) {
            Ok(p) => p,
            Err(e) => return Some(e.to_string()),
        };
        canonical_form_violation(&ctx, &path)
    });
    Ok(())
}

/// `None` when endpoints, `Q` and length are preserved by the canonical form.
pub fn canonical_form_violation(ctx: &CoarseContext<'_>, path: &CoarsePath) -> Option<String> {
    let (o, s) = match ctx.canonical_form(path) {
        Ok(pair) => pair,
        Err(e) => return Some(e.to_string()),
    };
    if metric(o.start(), path.start()) > 1e-9 || metric(s.end(), path.end()) > 1e-9 {
        return Some("endpoints moved".into());
    }
    let c = match ctx.concat(&o, &s) {
        Ok(c) => c,
        Err(e) => return Some(e.to_string()),
    };
    if q_map(&c) != q_map(path) {
        return Some(format!("Q {} became {}", q_map(path), q_map(&c)));
    }
    let (a, b) = (ctx.path_length(path), ctx.path_length(&o) + ctx.path_length(&s));
    ((a - b).abs() > 1e-9).then(|| format!("length {a} became {b}"))
}

/// `None` when `O(α∗β) = O(α)∗O(β)` on jumps and
/// `S(α∗β) = (Q(β)·S(α))∗S(β)` on points and jumps.
pub fn cocycle_violation(ctx: &CoarseContext<'_>, a: &CoarsePath, b: &CoarsePath) -> Option<String> {
    let run = || -> Result<Option<String>> {
        let ab = ctx.concat(a, b)?;
        let (o_ab, s_ab) = ctx.canonical_form(&ab)?;
        let (o_a, s_a) = ctx.canonical_form(a)?;
        let (o_b, s_b) = ctx.canonical_form(b)?;
        let joined: Vec<Word> = o_a.jumps().iter().chain(o_b.jumps()).cloned().collect();
        if o_ab.jumps() != joined.as_slice() {
            return Ok(Some("orbital jumps differ".into()));
        }
        let rhs = ctx.concat(&ctx.translate(&q_map(b), &s_a)?, &s_b)?;
        if rhs.jumps() != s_ab.jumps() || rhs.points().len() != s_ab.points().len() {
            return Ok(Some("spatial jumps differ".into()));
        }
        let gap = rhs
            .points()
            .iter()
            .zip(s_ab.points())
            .map(|(p, q)| metric(p, q))
            .fold(0.0, f64::max);
        Ok((gap > 1e-9).then(|| format!("spatial points differ by {gap}")))
    };
    run().unwrap_or_else(|e| Some(e.to_string()))
}

fn graphs_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, cases: usize) -> Result<()> {
    let small = cases.min(30);
    rec.property("iterative_matches_dense", small, |_| {
        let n = rng.random_range(10..=120);
        let p = rng.random_range(0.0..0.1);
        let g = random_connected_graph(n, p, rng.random());
        let dense = spectral_gap(&g, SpectralMode::Dense, 1e-10).expect("connected");
        match spectral_gap(&g, SpectralMode::Iterative, 1e-10) {
            Ok(it) if (it.value - dense.value).abs() <= 1e-6 => None,
            Ok(it) => Some(format!("n={n}: {} vs {}", it.value, dense.value)),
            Err(e) => Some(e.to_string()),
        }
    });
    rec.property("cheeger_sandwich", small, |_| {
        let n = rng.random_range(2..=12);
        let p = rng.random_range(0.0..0.5);
        let g = random_connected_graph(n, p, rng.random());
        let gap = spectral_gap(&g, SpectralMode::Dense, 1e-10).expect("connected").value;
        let (lo, hi) = cheeger_bounds(gap.clamp(0.0, 2.0)).expect("in range");
        let h = brute_force_cheeger(&g).expect("small");
        (h < lo - 1e-9 || h > hi + 1e-9).then(|| format!("n={n}: {lo} <= {h} <= {hi} fails"))
    });
    Ok(())
}
