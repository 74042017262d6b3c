//! Benchmark orchestration: the depth-matched and parameter-matched
//! comparison protocols, per-group statistics, and CSV export.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{target, DataError, DataSplit, TargetKind, DEFAULT_TEST_POINTS, DEFAULT_TRAIN_POINTS};
use crate::fock::CutoffConfig;
use crate::mlp::{param_count, Activation, MlpArchitecture, MlpError, MlpModel};
use crate::optim::{train, AdamConfig, OptimError, Trainable};
use crate::qnn::{QnnModel, LEAKAGE_THRESHOLD, PARAMS_PER_LAYER};

/// Column order of `runs.csv`.
pub const RUNS_HEADER: [&str; 11] = [
    "model_id",
    "target",
    "strategy",
    "layers",
    "params",
    "activation",
    "seed",
    "train_mse",
    "test_mse",
    "leakage_flag",
    "runtime_s",
];

/// Column order of `aggregates.csv`.
pub const AGGREGATES_HEADER: [&str; 10] = [
    "model_id",
    "target",
    "strategy",
    "layers",
    "params",
    "activation",
    "n_seeds",
    "mean_mse",
    "std_mse",
    "min_mse",
];

/// Hidden-layer widths of the classical networks matched to each quantum
/// parameter budget.
pub const PARAMETER_MATCHED_CONFIGS: [(usize, &[&[usize]]); 4] = [
    (10, &[&[3]]),
    (15, &[&[1, 4], &[4, 1], &[1, 2, 2], &[2, 2, 1]]),
    (20, &[&[1, 1, 5], &[1, 5, 1], &[2, 1, 4], &[3, 1, 3], &[4, 1, 2], &[5, 1, 1]]),
    (25, &[&[8], &[2, 5], &[5, 2]]),
];

/// Hidden widths listed for a parameter budget (empty for budgets without
/// an entry).
pub fn matched_configs(params: usize) -> Vec<Vec<usize>> {
    PARAMETER_MATCHED_CONFIGS
        .iter()
        .filter(|(count, _)| *count == params)
        .flat_map(|(_, cfgs)| cfgs.iter().map(|c| c.to_vec()))
        .collect()
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("experiment declares strategy '{declared}' but was run as '{requested}'")]
    WrongStrategy { declared: Strategy, requested: Strategy },
    #[error("{0}")]
    Invalid(String),
    #[error("no results to aggregate")]
    Empty,
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Mlp(#[from] MlpError),
    #[error(transparent)]
    Optim(#[from] OptimError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}, row {row}: {message}")]
    BadRow {
        path: PathBuf,
        row: usize,
        message: String,
    },
    #[error("building worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// One neuron per layer, depth varied.
    Layers,
    /// Trainable parameter counts matched between models.
    Parameters,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Layers => "layers",
            Strategy::Parameters => "parameters",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "layers" => Ok(Strategy::Layers),
            "parameters" => Ok(Strategy::Parameters),
            other => Err(BenchError::Invalid(format!(
                "unknown strategy '{other}' (expected layers or parameters)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelDescriptor {
    Qnn {
        layers: usize,
    },
    /// `layers` single-neuron layers, the last linear.
    Chain {
        layers: usize,
        activation: Activation,
    },
    Mlp {
        hidden: Vec<usize>,
        activation: Activation,
    },
}

impl ModelDescriptor {
    /// Identifier used in CSV rows and curve file names, e.g. `qnn-l3`,
    /// `chain-l2-tanh`, `mlp-2-5-sigmoid`.
    pub fn model_id(&self) -> String {
        match self {
            ModelDescriptor::Qnn { layers } => format!("qnn-l{layers}"),
            ModelDescriptor::Chain { layers, activation } => format!("chain-l{layers}-{activation}"),
            ModelDescriptor::Mlp { hidden, activation } => {
                let widths: Vec<String> = hidden.iter().map(|w| w.to_string()).collect();
                format!("mlp-{}-{activation}", widths.join("-"))
            }
        }
    }

    /// Quantum layers, or weight layers (output layer included) for
    /// classical networks.
    pub fn layer_count(&self) -> usize {
        match self {
            ModelDescriptor::Qnn { layers } | ModelDescriptor::Chain { layers, .. } => *layers,
            ModelDescriptor::Mlp { hidden, .. } => hidden.len() + 1,
        }
    }

    pub fn param_count(&self) -> usize {
        match self {
            ModelDescriptor::Qnn { layers } => PARAMS_PER_LAYER * layers,
            ModelDescriptor::Chain { layers, .. } => 2 * layers,
            ModelDescriptor::Mlp { hidden, .. } => param_count(hidden),
        }
    }

    /// Activation name, or `quantum` for the circuit.
    pub fn activation_label(&self) -> String {
        match self {
            ModelDescriptor::Qnn { .. } => "quantum".to_string(),
            ModelDescriptor::Chain { activation, .. } | ModelDescriptor::Mlp { activation, .. } => {
                activation.to_string()
            }
        }
    }

    fn validate(&self) -> Result<(), BenchError> {
        match self {
            ModelDescriptor::Qnn { layers: 0 } | ModelDescriptor::Chain { layers: 0, .. } => {
                Err(BenchError::Invalid(format!("{}: depth must be at least 1", self.model_id())))
            }
            ModelDescriptor::Mlp { hidden, .. } if hidden.contains(&0) => Err(BenchError::Invalid(
                format!("{}: hidden widths must be positive", self.model_id()),
            )),
            _ => Ok(()),
        }
    }

    fn build(&self, cutoff: CutoffConfig) -> Result<Box<dyn Trainable<f64>>, BenchError> {
        Ok(match self {
            ModelDescriptor::Qnn { layers } => Box::new(
                QnnModel::<f64>::new(*layers, cutoff).map_err(|e| BenchError::Invalid(e.to_string()))?,
            ),
            ModelDescriptor::Chain { layers, activation } => {
                Box::new(MlpModel::new(MlpArchitecture::chain(*layers, *activation)?))
            }
            ModelDescriptor::Mlp { hidden, activation } => {
                Box::new(MlpModel::new(MlpArchitecture::new(hidden.clone(), *activation)?))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub strategy: Strategy,
    pub target: TargetKind,
    pub models: Vec<ModelDescriptor>,
    pub seeds: usize,
    /// Seeds are `seed_base, seed_base + 1, …`.
    pub seed_base: u64,
    pub optimizer: AdamConfig,
    pub cutoff: CutoffConfig,
    pub n_train: usize,
    pub n_test: usize,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
}

pub const DESK_SEEDS: usize = 10;
pub const DEFAULT_DEPTHS: [usize; 5] = [1, 2, 3, 4, 5];
pub const PARAMETER_MATCHED_DEPTHS: [usize; 4] = [2, 3, 4, 5];

impl ExperimentSpec {
    fn base(strategy: Strategy, target: TargetKind, models: Vec<ModelDescriptor>) -> Self {
        Self {
            strategy,
            target,
            models,
            seeds: DESK_SEEDS,
            seed_base: 0,
            optimizer: AdamConfig::default(),
            cutoff: CutoffConfig::default(),
            n_train: DEFAULT_TRAIN_POINTS,
            n_test: DEFAULT_TEST_POINTS,
            workers: 0,
        }
    }

    /// QNN and one chain network per activation at every depth.
    pub fn layers(target: TargetKind, depths: &[usize], activations: &[Activation]) -> Self {
        Self::base(Strategy::Layers, target, layer_models(depths, activations))
    }

    /// QNN at every depth, paired with every matched classical configuration
    /// of the same parameter count under every activation.
    pub fn parameters(target: TargetKind, qnn_depths: &[usize], activations: &[Activation]) -> Self {
        Self::base(
            Strategy::Parameters,
            target,
            parameter_models(qnn_depths, activations),
        )
    }

    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds as u64).map(|i| self.seed_base + i).collect()
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.models.is_empty() {
            return Err(BenchError::Invalid("experiment lists no models".into()));
        }
        if self.seeds == 0 {
            return Err(BenchError::Invalid("seeds must be at least 1".into()));
        }
        if self.n_train < 2 || self.n_test < 2 {
            return Err(BenchError::Invalid(
                "train and test grids need at least 2 points".into(),
            ));
        }
        self.optimizer.validate()?;
        for m in &self.models {
            m.validate()?;
        }
        if self.strategy == Strategy::Parameters {
            let budgets: Vec<usize> = self
                .models
                .iter()
                .filter(|m| matches!(m, ModelDescriptor::Qnn { .. }))
                .map(ModelDescriptor::param_count)
                .collect();
            // without quantum models in the list, pair with the implied depth
            let matched = |count: usize| {
                if budgets.is_empty() {
                    count > 0 && count % PARAMS_PER_LAYER == 0
                } else {
                    budgets.contains(&count)
                }
            };
            for m in &self.models {
                if !matches!(m, ModelDescriptor::Qnn { .. }) && !matched(m.param_count()) {
                    return Err(BenchError::Invalid(format!(
                        "{} has {} parameters, matching no quantum model in the experiment",
                        m.model_id(),
                        m.param_count()
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn layer_models(depths: &[usize], activations: &[Activation]) -> Vec<ModelDescriptor> {
    let mut models = Vec::new();
    for &layers in depths {
        models.push(ModelDescriptor::Qnn { layers });
        for &activation in activations {
            models.push(ModelDescriptor::Chain { layers, activation });
        }
    }
    models
}

pub fn parameter_models(qnn_depths: &[usize], activations: &[Activation]) -> Vec<ModelDescriptor> {
    let mut models = Vec::new();
    for &layers in qnn_depths {
        models.push(ModelDescriptor::Qnn { layers });
        for hidden in matched_configs(PARAMS_PER_LAYER * layers) {
            for &activation in activations {
                models.push(ModelDescriptor::Mlp {
                    hidden: hidden.clone(),
                    activation,
                });
            }
        }
    }
    models
}

/// Outcome of one training run. Failed runs (divergence or non-finite
/// gradients) carry infinite MSEs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub model_id: String,
    pub target: TargetKind,
    pub strategy: Strategy,
    pub layers: usize,
    pub params: usize,
    pub activation: String,
    pub seed: u64,
    pub train_mse: f64,
    pub test_mse: f64,
    pub leakage_flag: bool,
    pub runtime_seconds: f64,
    /// `(x, ŷ)` on the test grid; empty for results read back from CSV.
    pub fit_curve: Vec<(f64, f64)>,
}

impl RunResult {
    pub fn failed(&self) -> bool {
        !self.test_mse.is_finite() || !self.train_mse.is_finite()
    }

    fn group_key(&self) -> GroupKey {
        GroupKey {
            model_id: self.model_id.clone(),
            target: self.target,
            strategy: self.strategy,
            layers: self.layers,
            params: self.params,
            activation: self.activation.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct GroupKey {
    model_id: String,
    target: TargetKind,
    strategy: Strategy,
    layers: usize,
    params: usize,
    activation: String,
}

/// Test-MSE statistics of one model over its seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub model_id: String,
    pub target: TargetKind,
    pub strategy: Strategy,
    pub layers: usize,
    pub params: usize,
    pub activation: String,
    pub n_seeds: usize,
    pub mean_mse: f64,
    /// Population standard deviation.
    pub std_mse: f64,
    pub min_mse: f64,
}

fn run_one(
    spec: &ExperimentSpec,
    model: &ModelDescriptor,
    data: &DataSplit<f64>,
    seed: u64,
) -> Result<RunResult, BenchError> {
    let trainable = model.build(spec.cutoff)?;
    let outcome = train(trainable.as_ref(), data, &spec.optimizer, seed);
    let failed = outcome.failed();
    let mse_or_inf = |v: f64| if failed || !v.is_finite() { f64::INFINITY } else { v };
    Ok(RunResult {
        model_id: model.model_id(),
        target: spec.target,
        strategy: spec.strategy,
        layers: model.layer_count(),
        params: model.param_count(),
        activation: model.activation_label(),
        seed,
        train_mse: mse_or_inf(outcome.train_mse),
        test_mse: mse_or_inf(outcome.test_mse),
        leakage_flag: outcome
            .max_leakage
            .is_some_and(|l| !(l <= LEAKAGE_THRESHOLD)),
        runtime_seconds: outcome.runtime_seconds,
        fit_curve: outcome.fit_curve,
    })
}

/// Trains every model of `spec` over every seed on a bounded worker pool.
/// Results come back ordered by model (as listed) then seed, independent of
/// scheduling.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunResult>, BenchError> {
    spec.validate()?;
    let data = DataSplit::new(spec.target, spec.n_train, spec.n_test)?;
    let jobs: Vec<(usize, u64)> = (0..spec.models.len())
        .flat_map(|m| spec.seed_list().into_iter().map(move |s| (m, s)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if spec.workers > 0 {
        builder = builder.num_threads(spec.workers);
    }
    let pool = builder.build()?;
    let results: Result<Vec<RunResult>, BenchError> = pool.install(|| {
        jobs.par_iter()
            .map(|&(m, seed)| run_one(spec, &spec.models[m], &data, seed))
            .collect()
    });
    results
}

fn check_strategy(spec: &ExperimentSpec, requested: Strategy) -> Result<(), BenchError> {
    if spec.strategy != requested {
        return Err(BenchError::WrongStrategy {
            declared: spec.strategy,
            requested,
        });
    }
    Ok(())
}

pub fn run_strategy_layers(spec: &ExperimentSpec) -> Result<Vec<RunResult>, BenchError> {
    check_strategy(spec, Strategy::Layers)?;
    run_experiment(spec)
}

pub fn run_strategy_parameters(spec: &ExperimentSpec) -> Result<Vec<RunResult>, BenchError> {
    check_strategy(spec, Strategy::Parameters)?;
    run_experiment(spec)
}

/// Per-group mean, population standard deviation and minimum of the test
/// MSE. Groups keep the order in which they first appear; failed runs are
/// left out, and a group with no successful run produces no row.
pub fn aggregate(results: &[RunResult]) -> Vec<AggregateRow> {
    let mut order: Vec<GroupKey> = Vec::new();
    let mut groups: HashMap<GroupKey, Vec<f64>> = HashMap::new();
    for r in results {
        let key = r.group_key();
        let entry = groups.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            Vec::new()
        });
        if !r.failed() {
            entry.push(r.test_mse);
        }
    }
    order
        .into_iter()
        .filter_map(|key| {
            let values = &groups[&key];
            if values.is_empty() {
                return None;
            }
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            Some(AggregateRow {
                model_id: key.model_id,
                target: key.target,
                strategy: key.strategy,
                layers: key.layers,
                params: key.params,
                activation: key.activation,
                n_seeds: values.len(),
                mean_mse: mean,
                std_mse: var.sqrt(),
                min_mse: min,
            })
        })
        .collect()
}

/// Median of the successful test MSEs of one model, or `None` if every
/// run failed.
pub fn median_test_mse<'a, I>(results: I) -> Option<f64>
where
    I: IntoIterator<Item = &'a RunResult>,
{
    let mut values: Vec<f64> = results
        .into_iter()
        .filter(|r| !r.failed())
        .map(|r| r.test_mse)
        .collect();
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 0 {
        0.5 * (values[mid - 1] + values[mid])
    } else {
        values[mid]
    })
}

/// Lowest-test-MSE run of every group, in group order.
pub fn best_runs(results: &[RunResult]) -> Vec<&RunResult> {
    let mut order: Vec<GroupKey> = Vec::new();
    let mut best: HashMap<GroupKey, &RunResult> = HashMap::new();
    for r in results.iter().filter(|r| !r.failed()) {
        let key = r.group_key();
        match best.get(&key) {
            Some(current) if current.test_mse <= r.test_mse => {}
            Some(_) => {
                best.insert(key, r);
            }
            None => {
                order.push(key.clone());
                best.insert(key, r);
            }
        }
    }
    order.iter().map(|k| best[k]).collect()
}

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:e}")
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> BenchError + '_ {
    move |source| BenchError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_runs_csv(results: &[RunResult], path: &Path) -> Result<(), BenchError> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    w.write_record(RUNS_HEADER).map_err(&err)?;
    for r in results {
        w.write_record([
            r.model_id.clone(),
            r.target.to_string(),
            r.strategy.to_string(),
            r.layers.to_string(),
            r.params.to_string(),
            r.activation.clone(),
            r.seed.to_string(),
            fmt_f64(r.train_mse),
            fmt_f64(r.test_mse),
            r.leakage_flag.to_string(),
            format!("{:.3}", r.runtime_seconds),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(|e| BenchError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn write_aggregates_csv(rows: &[AggregateRow], path: &Path) -> Result<(), BenchError> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    w.write_record(AGGREGATES_HEADER).map_err(&err)?;
    for a in rows {
        w.write_record([
            a.model_id.clone(),
            a.target.to_string(),
            a.strategy.to_string(),
            a.layers.to_string(),
            a.params.to_string(),
            a.activation.clone(),
            a.n_seeds.to_string(),
            fmt_f64(a.mean_mse),
            fmt_f64(a.std_mse),
            fmt_f64(a.min_mse),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(|e| BenchError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn curve_file_name(run: &RunResult) -> String {
    format!("curve_{}_{}.csv", run.model_id, run.target)
}

/// Writes `x,y_pred,y_true` for one run.
pub fn write_curve_csv(run: &RunResult, path: &Path) -> Result<(), BenchError> {
    let err = csv_err(path);
    let mut w = csv::Writer::from_path(path).map_err(&err)?;
    w.write_record(["x", "y_pred", "y_true"]).map_err(&err)?;
    for &(x, y) in &run.fit_curve {
        w.write_record([fmt_f64(x), fmt_f64(y), fmt_f64(target(run.target, x))])
            .map_err(&err)?;
    }
    w.flush().map_err(|e| BenchError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Files written by [`export`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExportedFiles {
    pub runs: PathBuf,
    pub aggregates: PathBuf,
    pub curves: Vec<PathBuf>,
}

/// Writes `runs.csv`, `aggregates.csv` and one curve file for the best run
/// of every group into `out_dir`, overwriting earlier exports.
pub fn export(
    results: &[RunResult],
    aggregates: &[AggregateRow],
    out_dir: &Path,
) -> Result<ExportedFiles, BenchError> {
    fs::create_dir_all(out_dir).map_err(|source| BenchError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let runs = out_dir.join("runs.csv");
    write_runs_csv(results, &runs)?;
    let agg = out_dir.join("aggregates.csv");
    write_aggregates_csv(aggregates, &agg)?;
    let mut curves = Vec::new();
    for best in best_runs(results) {
        if best.fit_curve.is_empty() {
            continue;
        }
        let path = out_dir.join(curve_file_name(best));
        write_curve_csv(best, &path)?;
        curves.push(path);
    }
    Ok(ExportedFiles {
        runs,
        aggregates: agg,
        curves,
    })
}

/// Reads a `runs.csv` written by [`write_runs_csv`]. Fit curves are not
/// stored there and come back empty.
pub fn read_runs_csv(path: &Path) -> Result<Vec<RunResult>, BenchError> {
    let err = csv_err(path);
    let mut reader = csv::Reader::from_path(path).map_err(&err)?;
    let header = reader.headers().map_err(&err)?.clone();
    if header.iter().ne(RUNS_HEADER.iter().copied()) {
        return Err(BenchError::BadRow {
            path: path.to_path_buf(),
            row: 0,
            message: format!("unexpected header '{}'", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(&err)?;
        let bad = |message: String| BenchError::BadRow {
            path: path.to_path_buf(),
            row,
            message,
        };
        let field = |idx: usize| record.get(idx).unwrap_or("");
        fn parse<T: FromStr>(s: &str, name: &str) -> Result<T, String> {
            s.parse::<T>().map_err(|_| format!("column {name}: cannot parse '{s}'"))
        }
        let run = (|| -> Result<RunResult, String> {
            Ok(RunResult {
                model_id: field(0).to_string(),
                target: parse(field(1), "target")?,
                strategy: parse(field(2), "strategy")?,
                layers: parse(field(3), "layers")?,
                params: parse(field(4), "params")?,
                activation: field(5).to_string(),
                seed: parse(field(6), "seed")?,
                train_mse: parse(field(7), "train_mse")?,
                test_mse: parse(field(8), "test_mse")?,
                leakage_flag: parse(field(9), "leakage_flag")?,
                runtime_seconds: parse(field(10), "runtime_s")?,
                fit_curve: Vec::new(),
            })
        })()
        .map_err(bad)?;
        if run.test_mse.is_nan() || run.test_mse < 0.0 {
            return Err(BenchError::BadRow {
                path: path.to_path_buf(),
                row,
                message: format!("test_mse must be non-negative, got {}", run.test_mse),
            });
        }
        out.push(run);
    }
    Ok(out)
}
