use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use warpcone_core::actions::ActionSpec;
use warpcone_core::check::Suite;
use warpcone_core::graphs::{EpsilonRule, SpectralMode};
use warpcone_core::groups::Word;
use warpcone_core::spaces::NetOptions;

use crate::error::CliError;

/// Experiment description read from a TOML file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub action: Option<ActionSpec>,
    #[serde(default)]
    pub net: NetConfig,
    #[serde(default)]
    pub levels: LevelsConfig,
    #[serde(default)]
    pub scale: ScaleConfig,
    #[serde(default)]
    pub warped: WarpedConfig,
    #[serde(default)]
    pub spectral: SpectralConfig,
    #[serde(default)]
    pub coarse: CoarseConfig,
    #[serde(default)]
    pub words: WordsConfig,
    #[serde(default)]
    pub check: CheckConfig,
    #[serde(default)]
    pub export: ExportConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetConfig {
    /// Defaults to `1/t` when a level is given.
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub max_points: usize,
    pub pool_size: Option<usize>,
    pub probes: usize,
}

impl Default for NetConfig {
    fn default() -> Self {
        let d = NetOptions::default();
        NetConfig {
            epsilon: None,
            seed: 0,
            max_points: d.max_points,
            pool_size: d.pool_size,
            probes: d.probes,
        }
    }
}

impl NetConfig {
    pub fn options(&self) -> NetOptions {
        NetOptions {
            max_points: self.max_points,
            pool_size: self.pool_size,
            probes: self.probes,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevelsConfig {
    pub values: Vec<f64>,
    pub epsilon_rule: EpsilonRule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaleConfig {
    pub t: Option<f64>,
    pub r: Option<f64>,
    /// Largest word length searched by exact warped distances.
    pub word_bound: usize,
}

impl Default for ScaleConfig {
    fn default() -> Self {
        ScaleConfig {
            t: None,
            r: None,
            word_bound: 8,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WarpedConfig {
    /// Net index pairs to query.
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    pub mode: SpectralMode,
    pub tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            mode: SpectralMode::Dense,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoarseConfig {
    /// Each path is a list of point coordinate vectors.
    pub paths: Vec<Vec<Vec<f64>>>,
    /// Words turned into loops at `base`.
    pub loops: Vec<Word>,
    pub base: Option<Vec<f64>>,
    /// Measure the scale threshold on the `[net]` net instead of fixed
    /// probe points.
    pub delta_on_net: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WordsConfig {
    pub words: Vec<Word>,
    /// Each automorphism is the list of generator images.
    pub automorphisms: Vec<Vec<Word>>,
    pub max_len: usize,
    /// When set, test `‖φ(w)‖_∞ ≤ (L + 2)‖w‖_∞` for this `L`.
    pub lipschitz: Option<f64>,
}

impl Default for WordsConfig {
    fn default() -> Self {
        WordsConfig {
            words: Vec::new(),
            automorphisms: Vec::new(),
            max_len: 4,
            lipschitz: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<Suite>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            cases: 50,
            suites: Suite::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    #[default]
    Dot,
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExportConfig {
    /// Graph or profile artifact to convert, relative to the config file.
    pub input: Option<PathBuf>,
    pub format: ExportFormat,
}

/// A parsed config together with the hash of its source text.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub hash: String,
    pub base_dir: PathBuf,
}

pub fn config_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl LoadedConfig {
    pub fn from_str(text: &str, base_dir: PathBuf) -> Result<LoadedConfig, CliError> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(LoadedConfig {
            config,
            hash: config_hash(text),
            base_dir,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<LoadedConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(|p| p.to_path_buf()).unwrap_or_default();
        Self::from_str(&text, base)
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let v = &self.levels.values;
        if v.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(CliError::Config("levels must be positive".into()));
        }
        if v.windows(2).any(|w| w[0] > w[1]) {
            return Err(CliError::Config("levels must be ascending".into()));
        }
        if let Some(e) = self.net.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                return Err(CliError::Config("net.epsilon must be positive".into()));
            }
        }
        if self.check.cases == 0 {
            return Err(CliError::Config("check.cases must be positive".into()));
        }
        Ok(())
    }

    pub fn action(&self) -> Result<&ActionSpec, CliError> {
        self.action.as_ref().ok_or_else(|| CliError::Config("missing [action] section".into()))
    }

    pub fn t(&self) -> Result<f64, CliError> {
        self.scale.t.ok_or_else(|| CliError::Config("missing scale.t".into()))
    }

    pub fn r(&self) -> Result<f64, CliError> {
        self.scale.r.ok_or_else(|| CliError::Config("missing scale.r".into()))
    }

    /// `net.epsilon`, else `1/t`.
    pub fn epsilon(&self) -> Result<f64, CliError> {
        match (self.net.epsilon, self.scale.t) {
            (Some(e), _) => Ok(e),
            (None, Some(t)) => Ok(1.0 / t),
            (None, None) => Err(CliError::Config("set net.epsilon or scale.t".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let text = r#"
[action]
kind = "rotation"
translations = [[0.3]]

[scale]
t = 100.0
r = 3.0

[coarse]
paths = [[[0.0], [0.3], [0.6]]]
loops = ["a"]
"#;
        let c = LoadedConfig::from_str(text, PathBuf::new()).unwrap();
        assert_eq!(c.config.coarse.paths[0].len(), 3);
        assert_eq!(c.config.scale.word_bound, 8);
        assert_eq!(c.hash.len(), 64);
    }

    #[test]
    fn rejects_descending_levels_and_unknown_keys() {
        assert!(LoadedConfig::from_str("[levels]\nvalues = [4.0, 2.0]\n", PathBuf::new()).is_err());
        assert!(LoadedConfig::from_str("[levels]\nvalue = [4.0]\n", PathBuf::new()).is_err());
    }
}
