//! Experiment configuration files and command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use cvqnn::bench::{layer_models, parameter_models, DEFAULT_DEPTHS, PARAMETER_MATCHED_DEPTHS};
use cvqnn::{Activation, AdamConfig, CutoffConfig, ExperimentSpec, ModelDescriptor, Strategy, TargetKind};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

/// Environment variable holding the output directory used when the config
/// does not name one.
pub const OUT_DIR_ENV: &str = "CVQNN_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "results";
pub const DEFAULT_SEEDS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub strategy: Strategy,
    pub target: TargetKind,
    pub seeds: usize,
    pub seed_base: u64,
    /// Depths for the layers strategy.
    pub depths: Vec<usize>,
    /// QNN depths for the parameters strategy; classical partners are taken
    /// from the matched-configuration table.
    pub qnn_depths: Vec<usize>,
    pub activations: Vec<Activation>,
    /// Explicit model list, replacing the one generated from the depths.
    pub models: Option<Vec<ModelDescriptor>>,
    pub optimizer: AdamConfig,
    pub cutoff: CutoffConfig,
    pub n_train: usize,
    pub n_test: usize,
    pub out_dir: Option<PathBuf>,
    /// 0 uses every available core.
    pub workers: usize,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            strategy: Strategy::Layers,
            target: TargetKind::Sine,
            seeds: DEFAULT_SEEDS,
            seed_base: 0,
            depths: DEFAULT_DEPTHS.to_vec(),
            qnn_depths: PARAMETER_MATCHED_DEPTHS.to_vec(),
            activations: Activation::ALL.to_vec(),
            models: None,
            optimizer: AdamConfig::default(),
            cutoff: CutoffConfig::default(),
            n_train: cvqnn::data::DEFAULT_TRAIN_POINTS,
            n_test: cvqnn::data::DEFAULT_TEST_POINTS,
            out_dir: None,
            workers: 0,
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Reads `path` and applies `overrides` (`--key value` pairs, dotted
    /// keys for nested tables) on top of it.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        // parse once untouched so file errors carry line numbers
        Self::parse(&text).with_context(|| format!("in {}", path.display()))?;
        let mut table: Table = toml::from_str(&text)?;
        for (key, value) in parse_overrides(overrides)? {
            set_dotted(&mut table, &key, value)?;
        }
        let cfg: Self = Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| anyhow!("in command-line overrides: {}", e.message()))?;
        Ok(cfg)
    }

    pub fn models(&self) -> Vec<ModelDescriptor> {
        match (&self.models, self.strategy) {
            (Some(models), _) => models.clone(),
            (None, Strategy::Layers) => layer_models(&self.depths, &self.activations),
            (None, Strategy::Parameters) => parameter_models(&self.qnn_depths, &self.activations),
        }
    }

    pub fn to_spec(&self) -> Result<ExperimentSpec> {
        let spec = ExperimentSpec {
            strategy: self.strategy,
            target: self.target,
            models: self.models(),
            seeds: self.seeds,
            seed_base: self.seed_base,
            optimizer: self.optimizer,
            cutoff: self.cutoff,
            n_train: self.n_train,
            n_test: self.n_test,
            workers: self.workers,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Config value, then the environment, then `results`.
    pub fn resolved_out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }
}

/// Pairs up `--key value` arguments. Dashes in keys become underscores.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, Value)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let (key, inline) = match flag.strip_prefix("--") {
            Some(rest) => match rest.split_once('=') {
                Some((k, v)) => (k, Some(v.to_string())),
                None => (rest, None),
            },
            None => bail!("expected --key value, found '{flag}'"),
        };
        if key.is_empty() {
            bail!("empty override key");
        }
        let raw = match inline {
            Some(v) => v,
            None => it.next().cloned().ok_or_else(|| anyhow!("--{key} needs a value"))?,
        };
        out.push((key.replace('-', "_"), parse_value(&raw)));
    }
    Ok(out)
}

/// A TOML literal if `raw` is one, otherwise the raw text as a string.
fn parse_value(raw: &str) -> Value {
    toml::from_str::<Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

fn set_dotted(table: &mut Table, key: &str, value: Value) -> Result<()> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("split yields one part");
    let mut current = table;
    for part in parts {
        let entry = current
            .entry(part.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        current = entry
            .as_table_mut()
            .ok_or_else(|| anyhow!("--{key}: '{part}' is not a table"))?;
    }
    current.insert(last.to_string(), value);
    Ok(())
}
