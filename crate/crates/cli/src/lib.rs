//! Batch front end: each command reads an [`ExperimentConfig`] and writes
//! JSON, CSV or DOT artifacts carrying the config hash and tool version.

pub mod config;
pub mod error;
pub mod output;

use std::path::{Path, PathBuf};

use serde::Serialize;
use warpcone_core::actions::{make_action, probe_points, Action};
use warpcone_core::check::run_checks;
use warpcone_core::coarse::{q_map, CoarseContext, PathFile, Winding};
use warpcone_core::graphs::{expansion_profile, GraphFile, Profile, ProfileOptions, ProfileRecord};
use warpcone_core::groups::{stable_bound_check, stable_lipschitz_constant, Automorphism, StableBound, Word};
use warpcone_core::spaces::{epsilon_net_with, Net, NetFile, Space};
use warpcone_core::warped::{build_warped_graph, warped_distance_apx, warped_distance_exact};

pub use config::{ExperimentConfig, LoadedConfig};
pub use error::{CliError, ErrorRecord};
use output::{num, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Net,
    Warped,
    Profile,
    Coarse,
    Stablenorm,
    Check,
    Export,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Net => "net",
            Command::Warped => "warped",
            Command::Profile => "profile",
            Command::Coarse => "coarse",
            Command::Stablenorm => "stablenorm",
            Command::Check => "check",
            Command::Export => "export",
        }
    }
}

/// Runs one command and returns the artifact paths written.
pub fn execute(cmd: Command, cfg: &LoadedConfig, out_dir: &Path, deterministic: bool) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Output::new(out_dir, cmd.name(), &cfg.hash, deterministic)?;
    let c = &cfg.config;
    match cmd {
        Command::Net => run_net(c, &mut out)?,
        Command::Warped => run_warped(c, &mut out)?,
        Command::Profile => run_profile(c, &mut out)?,
        Command::Coarse => run_coarse(c, &mut out)?,
        Command::Stablenorm => run_stablenorm(c, &mut out)?,
        Command::Check => run_check(c, &mut out)?,
        Command::Export => run_export(cfg, &mut out)?,
    }
    Ok(out.written().to_vec())
}

fn action_of(c: &ExperimentConfig) -> Result<Action, CliError> {
    Ok(make_action(c.action()?)?)
}

fn build_net(c: &ExperimentConfig, space: Space) -> Result<Net, CliError> {
    Ok(epsilon_net_with(space, c.epsilon()?, c.net.seed, &c.net.options())?)
}

#[derive(Serialize)]
struct NetReport {
    points: usize,
    spatial_pairs: usize,
    empirical_covering_radius: f64,
    net: NetFile,
}

fn run_net(c: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let space = action_of(c)?.space;
    let net = build_net(c, space)?;
    let report = NetReport {
        points: net.len(),
        spatial_pairs: net.spatial_pairs.len(),
        empirical_covering_radius: net.empirical_covering_radius(c.net.probes, c.net.seed ^ 1),
        net: net.to_file(),
    };
    out.json("net.json", &report)
}

#[derive(Serialize)]
struct PairRow {
    i: usize,
    j: usize,
    apx: f64,
    exact: f64,
}

#[derive(Serialize)]
struct WarpedReport {
    t: f64,
    epsilon: f64,
    word_bound: usize,
    vertices: usize,
    edges: usize,
    connected: bool,
    pairs: Vec<PairRow>,
}

fn run_warped(c: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let action = action_of(c)?;
    let t = c.t()?;
    let net = build_net(c, action.space)?;
    let graph = build_warped_graph(&action, t, &net)?;
    let mut pairs = Vec::new();
    for &(i, j) in &c.warped.pairs {
        if i >= net.len() || j >= net.len() {
            return Err(CliError::Config(format!("pair ({i}, {j}) out of range for {} points", net.len())));
        }
        pairs.push(PairRow {
            i,
            j,
            apx: warped_distance_apx(&graph, i, j),
            exact: warped_distance_exact(&action, t, &net.points[i], &net.points[j], c.scale.word_bound)?,
        });
    }
    out.json(
        "warped.json",
        &WarpedReport {
            t,
            epsilon: net.epsilon,
            word_bound: c.scale.word_bound,
            vertices: graph.len(),
            edges: graph.edges.len(),
            connected: graph.connected,
            pairs,
        },
    )?;
    out.json("warped_graph.json", &graph.to_file())
}

const PROFILE_COLUMNS: [&str; 9] = [
    "level", "epsilon", "vertices", "edges", "max_degree", "degree_bound", "lambda2", "runtime_ms", "error",
];

fn profile_rows(records: &[ProfileRecord], deterministic: bool) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| {
            vec![
                num(r.t),
                num(r.epsilon),
                r.vertices.to_string(),
                r.edges.to_string(),
                r.max_degree.to_string(),
                r.degree_bound.to_string(),
                r.lambda2.map(num).unwrap_or_default(),
                if deterministic { String::new() } else { format!("{:.3}", r.runtime_ms) },
                r.error.clone().unwrap_or_default(),
            ]
        })
        .collect()
}

fn run_profile(c: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let action = action_of(c)?;
    if c.levels.values.is_empty() {
        return Err(CliError::Config("levels.values is empty".into()));
    }
    let opts = ProfileOptions {
        epsilon_rule: c.levels.epsilon_rule,
        mode: c.spectral.mode,
        tol: c.spectral.tol,
        net_seed: c.net.seed,
        net: c.net.options(),
    };
    let mut profile = expansion_profile(&action, &c.levels.values, &opts)?;
    if out.deterministic {
        for r in &mut profile.records {
            r.runtime_ms = 0.0;
        }
    }
    let rows = profile_rows(&profile.records, out.deterministic);
    out.csv("profile.csv", &PROFILE_COLUMNS, &rows)?;
    out.json("profile.json", &profile)
}

#[derive(Serialize)]
struct PathReport {
    length: f64,
    q: Word,
    canonical_orbital: PathFile,
    canonical_spatial: PathFile,
    winding: Option<Winding>,
    path: PathFile,
}

#[derive(Serialize)]
struct LoopReport {
    word: Word,
    q: Word,
    recovered: bool,
    steps: usize,
    length: f64,
    winding: Option<Winding>,
}

#[derive(Serialize)]
struct CoarseReport {
    t: f64,
    r: f64,
    delta: f64,
    threshold: f64,
    paths: Vec<PathReport>,
    loops: Vec<LoopReport>,
}

fn run_coarse(c: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let action = action_of(c)?;
    let (t, r) = (c.t()?, c.r()?);
    let ctx = if c.coarse.delta_on_net {
        let net = build_net(c, action.space)?;
        CoarseContext::new(&action, t, r, &net)?
    } else {
        CoarseContext::with_probes(&action, t, r)?
    };
    let space = action.space;
    let winding_of = |p: &warpcone_core::coarse::CoarsePath| -> Result<Option<Winding>, CliError> {
        if matches!(space, Space::Torus { .. }) && p.is_loop() && q_map(p).is_identity() {
            Ok(Some(ctx.winding_vector(p)?))
        } else {
            Ok(None)
        }
    };
    let mut paths = Vec::new();
    for coords in &c.coarse.paths {
        let points = coords
            .iter()
            .map(|x| space.point_from_coords(x))
            .collect::<Result<Vec<_>, _>>()?;
        let path = ctx.validate(points)?;
        let (o, s) = ctx.canonical_form(&path)?;
        paths.push(PathReport {
            length: ctx.path_length(&path),
            q: q_map(&path),
            canonical_orbital: o.to_file(),
            canonical_spatial: s.to_file(),
            winding: winding_of(&path)?,
            path: path.to_file(),
        });
    }
    let base = match &c.coarse.base {
        Some(x) => space.point_from_coords(x)?,
        None => probe_points(space, 0).remove(0),
    };
    let mut loops = Vec::new();
    for w in &c.coarse.loops {
        let lp = ctx.j_gamma(w, &base)?;
        let q = q_map(&lp);
        loops.push(LoopReport {
            word: w.clone(),
            recovered: &q == w,
            q,
            steps: lp.steps(),
            length: ctx.path_length(&lp),
            winding: winding_of(&lp)?,
        });
    }
    out.json(
        "coarse.json",
        &CoarseReport {
            t,
            r,
            delta: ctx.delta(),
            threshold: ctx.threshold(),
            paths,
            loops,
        },
    )
}

#[derive(Serialize)]
struct WordReport {
    word: Word,
    length: usize,
    cyclically_reduced: bool,
    cyclic_core: Word,
    conjugator: Word,
    stable_norm: usize,
}

#[derive(Serialize)]
struct AutomorphismReport {
    images: Vec<Word>,
    max_len: usize,
    stable_lipschitz_constant: String,
    bound: Option<StableBound>,
}

#[derive(Serialize)]
struct StableNormReport {
    words: Vec<WordReport>,
    automorphisms: Vec<AutomorphismReport>,
}

fn run_stablenorm(c: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let words = c
        .words
        .words
        .iter()
        .map(|w| {
            let (core, conj) = w.cyclic_reduce();
            WordReport {
                word: w.clone(),
                length: w.len(),
                cyclically_reduced: w.is_cyclically_reduced(),
                cyclic_core: core,
                conjugator: conj,
                stable_norm: w.stable_norm(),
            }
        })
        .collect();
    let mut automorphisms = Vec::new();
    for images in &c.words.automorphisms {
        let phi = Automorphism::new(images.clone());
        let k = stable_lipschitz_constant(&phi, c.words.max_len)?;
        let bound = match c.words.lipschitz {
            Some(l) => Some(stable_bound_check(&phi, l, c.words.max_len)?),
            None => None,
        };
        automorphisms.push(AutomorphismReport {
            images: images.clone(),
            max_len: c.words.max_len,
            stable_lipschitz_constant: format!("{}/{}", k.numer(), k.denom()),
            bound,
        });
    }
    out.json("stablenorm.json", &StableNormReport { words, automorphisms })
}

fn run_check(c: &ExperimentConfig, out: &mut Output) -> Result<(), CliError> {
    let report = run_checks(&c.check.suites, c.check.seed, c.check.cases)?;
    out.json("check.json", &report)?;
    let failed = report.outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(CliError::CheckFailed { failed });
    }
    Ok(())
}

fn run_export(cfg: &LoadedConfig, out: &mut Output) -> Result<(), CliError> {
    use config::ExportFormat;
    let input = cfg
        .config
        .export
        .input
        .as_ref()
        .ok_or_else(|| CliError::Config("missing export.input".into()))?;
    let path = if input.is_absolute() { input.clone() } else { cfg.base_dir.join(input) };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    // artifacts written by this tool wrap their payload in `result`
    let payload = value.get("result").cloned().unwrap_or(value);
    let format = cfg.config.export.format;
    if let Ok(graph) = serde_json::from_value::<GraphFile>(payload.clone()) {
        return match format {
            ExportFormat::Dot => out.text("export.dot", "//", &graph.to_dot()),
            ExportFormat::Json => out.json("export.json", &graph),
            ExportFormat::Csv => {
                let rows: Vec<Vec<String>> = graph
                    .edges
                    .iter()
                    .map(|e| {
                        vec![
                            e.u.to_string(),
                            e.v.to_string(),
                            num(e.weight),
                            format!("{:?}", e.kind).to_lowercase(),
                            e.label.clone().unwrap_or_default(),
                        ]
                    })
                    .collect();
                out.csv("export.csv", &["u", "v", "weight", "kind", "label"], &rows)
            }
        };
    }
    if let Ok(profile) = serde_json::from_value::<Profile>(payload) {
        return match format {
            ExportFormat::Csv => {
                let rows = profile_rows(&profile.records, out.deterministic);
                out.csv("export.csv", &PROFILE_COLUMNS, &rows)
            }
            ExportFormat::Json => out.json("export.json", &profile),
            ExportFormat::Dot => Err(CliError::Config("profiles export to csv or json only".into())),
        };
    }
    Err(CliError::Config(format!("{} is neither a graph nor a profile", path.display())))
}
