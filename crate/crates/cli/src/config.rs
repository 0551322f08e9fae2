//! Run configuration: a TOML or JSON file (chosen by extension) merged with
//! command-line flags, flags winning. Numbers that are not plain integers
//! are exact strings such as `"1/2"`.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context as _, Result};
use num_rational::BigRational;
use num_traits::Signed;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use qkwc_core::ifun::{preset_by_name, HypergeomConfig, HypergeomSpec};
use qkwc_core::ring::json::rational_from_json;

use crate::Common;

pub use qkwc_core::verify::DEFAULT_TRIALS;

pub const DEFAULT_SEED: u64 = 1;
const DEFAULT_MAX_DEGREE: i64 = 3;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    /// Inline I-function description, used when no preset is named.
    pub ifun: Option<HypergeomConfig>,
    pub max_degree: Option<Value>,
    pub epsilon: Option<Value>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub out: Option<PathBuf>,
    pub potential: Option<PathBuf>,
    pub var: Option<String>,
}

fn parse_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("toml") => toml::from_str(&text).with_context(|| format!("parsing {}", path.display())),
        Some("json") => serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())),
        _ => bail!("{}: expected a .toml or .json file", path.display()),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn rational(v: &Value, what: &str) -> Result<BigRational> {
    rational_from_json(v).map_err(|e| anyhow!("{what}: {e}"))
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<RunConfig> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let mut cfg: RunConfig = parse_file(path)?;
        // Relative paths in a config file are relative to the file.
        if let Some(p) = &cfg.potential {
            if p.is_relative() {
                cfg.potential = Some(path.parent().unwrap_or(Path::new(".")).join(p));
            }
        }
        Ok(cfg)
    }

    pub fn merge(mut self, flags: &Common) -> Result<RunConfig> {
        if let Some(p) = &flags.preset {
            self.preset = Some(p.clone());
        }
        if let Some(d) = &flags.max_degree {
            self.max_degree = Some(Value::String(d.clone()));
        }
        if let Some(e) = &flags.epsilon {
            self.epsilon = Some(Value::String(e.clone()));
        }
        if flags.seed.is_some() {
            self.seed = flags.seed;
        }
        if flags.trials.is_some() {
            self.trials = flags.trials;
        }
        if flags.out.is_some() {
            self.out = flags.out.clone();
        }
        Ok(self)
    }

    pub fn hypergeom(&self) -> Result<HypergeomSpec> {
        match (&self.preset, &self.ifun) {
            (Some(p), _) => Ok(preset_by_name(p)?),
            (None, Some(c)) => Ok(c.build()?),
            (None, None) => bail!("no I-function: give --preset or an `ifun` table in the config"),
        }
    }

    pub fn max_degree(&self) -> Result<BigRational> {
        let d = match &self.max_degree {
            Some(v) => rational(v, "max-degree")?,
            None => BigRational::from_integer(DEFAULT_MAX_DEGREE.into()),
        };
        if d.is_negative() {
            bail!("max-degree must be nonnegative, got {d}");
        }
        Ok(d)
    }

    pub fn epsilon(&self) -> Result<BigRational> {
        let v = self.epsilon.as_ref().ok_or_else(|| anyhow!("this command needs --epsilon"))?;
        let e = rational(v, "epsilon")?;
        if !e.is_positive() {
            bail!("epsilon must be positive, got {e}");
        }
        Ok(e)
    }
}
