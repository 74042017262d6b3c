//! Regression targets on `[−1, 1]` sampled on uniform grids.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

pub const DEFAULT_TRAIN_POINTS: usize = 20;
pub const DEFAULT_TEST_POINTS: usize = 200;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("a uniform grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("unknown target '{0}' (expected sine or heaviside)")]
    UnknownTarget(String),
    #[error("writing {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    /// `sin(πx)`
    Sine,
    /// 0 for `x < 0`, 1 for `x ≥ 0`
    Heaviside,
}

impl TargetKind {
    pub const ALL: [TargetKind; 2] = [TargetKind::Sine, TargetKind::Heaviside];

    pub fn name(&self) -> &'static str {
        match self {
            TargetKind::Sine => "sine",
            TargetKind::Heaviside => "heaviside",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetKind {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sine" | "sin" => Ok(TargetKind::Sine),
            "heaviside" | "step" => Ok(TargetKind::Heaviside),
            _ => Err(DataError::UnknownTarget(s.to_string())),
        }
    }
}

pub fn target<T: Real>(kind: TargetKind, x: T) -> T {
    match kind {
        TargetKind::Sine => (T::pi() * x).sin(),
        TargetKind::Heaviside => {
            if x < T::zero() {
                T::zero()
            } else {
                T::one()
            }
        }
    }
}

/// `n` evenly spaced points from −1 to 1 inclusive. The grid is exactly
/// symmetric about 0.
pub fn uniform_grid<T: Real>(n: usize) -> Result<Vec<T>, DataError> {
    if n < 2 {
        return Err(DataError::TooFewPoints(n));
    }
    let denom = T::from_usize_lossy(n - 1);
    Ok((0..n)
        .map(|i| {
            // 2i − (n−1) is an exact integer, so x_{n-1-i} = −x_i bit for bit
            let numer = T::lit(2.0 * i as f64 - (n - 1) as f64);
            numer / denom
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T: Real> {
    inputs: Vec<T>,
    targets: Vec<T>,
    kind: TargetKind,
}

impl<T: Real> Dataset<T> {
    pub fn on_grid(kind: TargetKind, n: usize) -> Result<Self, DataError> {
        let inputs = uniform_grid(n)?;
        let targets = inputs.iter().map(|&x| target(kind, x)).collect();
        Ok(Self {
            inputs,
            targets,
            kind,
        })
    }

    pub fn inputs(&self) -> &[T] {
        &self.inputs
    }

    pub fn targets(&self) -> &[T] {
        &self.targets
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Writes `x,y` rows with a header.
    pub fn write_csv(&self, path: &Path) -> Result<(), DataError> {
        let wrap = |source| DataError::Csv {
            path: path.display().to_string(),
            source,
        };
        let mut w = csv::Writer::from_path(path).map_err(wrap)?;
        w.write_record(["x", "y"]).map_err(wrap)?;
        for (x, y) in self.inputs.iter().zip(&self.targets) {
            w.write_record([x.to_string(), y.to_string()]).map_err(wrap)?;
        }
        w.flush().map_err(|e| wrap(e.into()))?;
        Ok(())
    }
}

/// Training and test sets for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSplit<T: Real> {
    pub train: Dataset<T>,
    pub test: Dataset<T>,
}

impl<T: Real> DataSplit<T> {
    pub fn new(kind: TargetKind, n_train: usize, n_test: usize) -> Result<Self, DataError> {
        Ok(Self {
            train: Dataset::on_grid(kind, n_train)?,
            test: Dataset::on_grid(kind, n_test)?,
        })
    }

    /// 20 training and 200 test points.
    pub fn standard(kind: TargetKind) -> Self {
        Self::new(kind, DEFAULT_TRAIN_POINTS, DEFAULT_TEST_POINTS).expect("default sizes are valid")
    }
}
