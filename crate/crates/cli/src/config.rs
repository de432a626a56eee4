//! JSON run configurations. Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// A grid given either as an explicit list or as `{start, stop, step}`
/// (both ends included).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range(RangeSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    /// Expands the grid and checks it is nonempty, finite and strictly increasing.
    pub fn values(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let values = match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Range(r) => {
                if !(r.step > 0.0 && r.step.is_finite()) || !(r.start.is_finite() && r.stop.is_finite()) {
                    return Err(CliError::config(format!("{name}: step must be positive and bounds finite")));
                }
                if r.stop < r.start {
                    return Err(CliError::config(format!("{name}: stop lies below start")));
                }
                let n = ((r.stop - r.start) / r.step + 1e-9).floor() as usize;
                (0..=n).map(|i| r.start + i as f64 * r.step).collect()
            }
        };
        if values.is_empty() {
            return Err(CliError::config(format!("{name}: grid is empty")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::config(format!("{name}: grid values must be finite")));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::config(format!("{name}: grid must be strictly increasing")));
        }
        Ok(values)
    }
}

/// A single number or a grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ValueOrGrid {
    Value(f64),
    Grid(GridSpec),
}

impl ValueOrGrid {
    pub fn values(&self, name: &str) -> Result<Vec<f64>, CliError> {
        match self {
            ValueOrGrid::Value(v) => GridSpec::List(vec![*v]).values(name),
            ValueOrGrid::Grid(g) => g.values(name),
        }
    }
}

fn default_delta() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityRun {
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub h: f64,
    pub cutoff: usize,
    pub pair: [usize; 2],
    pub squeezings: Vec<f64>,
    pub u_grid: GridSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrwRun {
    pub epsilon: f64,
    pub rho: f64,
    pub mass: f64,
    pub k: ValueOrGrid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApplyRun {
    /// Coefficient file; relative paths are resolved against the config's directory.
    pub coefficients: PathBuf,
    /// Single-mode squeezing per mode, in the file's mode order.
    pub squeezings: Vec<f64>,
    pub pair: [usize; 2],
}

/// A parsed configuration and the raw bytes it came from.
pub struct Loaded<T> {
    pub run: T,
    pub bytes: Vec<u8>,
    pub dir: PathBuf,
}

pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Loaded<T>, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let run = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { run, bytes, dir })
}
