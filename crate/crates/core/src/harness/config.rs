//! TOML experiment configuration.
//!
//! ```toml
//! name = "fig5"
//! dt = 0.01                       # optional, default 0.01
//! output = "results/fig5.csv"     # optional
//! seed = 7                        # optional, D-Wave shot sampling
//! shots = 2000                    # optional, D-Wave shot sampling
//!
//! [gate]
//! kind = "x_rotation"             # x_rotation | controlled_not | dwave
//!
//! [grid]
//! h_z = { start = -2.0, stop = 2.0, step = 0.25 }   # or { values = [...] }
//! anneal_times = [2000.0]
//! initial_states = ["+"]
//! ```
//!
//! `controlled_not` takes `a`, `b` and an optional `catalyst = [w1, w2]`
//! (default `[1.0, 1.0]`). `dwave` takes `h`, `couplings` keyed `"i,j"`
//! (1-based, `i > j`), `g_knots` rows `[fraction of T, constant, h_z
//! coefficient]`, and optional `a_schedule`/`b_schedule` CSV tables over
//! `s`. Relative table paths resolve against the config file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::evolution::DEFAULT_DT;
use crate::gates::GatePipeline;
use crate::schedules::{DWaveSchedule, PiecewiseLinear};
use crate::state::parse_drive_label;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub shots: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    pub gate: GateConfig,
    pub grid: Grid,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GateConfig {
    XRotation,
    ControlledNot {
        a: f64,
        b: f64,
        #[serde(default = "uniform")]
        catalyst: [f64; 2],
    },
    Dwave(DWaveConfig),
}

fn uniform() -> [f64; 2] {
    [1.0, 1.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DWaveConfig {
    pub h: Vec<f64>,
    #[serde(default)]
    pub couplings: BTreeMap<String, f64>,
    pub g_knots: Vec<[f64; 3]>,
    #[serde(default)]
    pub a_schedule: Option<PathBuf>,
    #[serde(default)]
    pub b_schedule: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub h_z: HzGrid,
    pub anneal_times: Vec<f64>,
    pub initial_states: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HzGrid {
    Values { values: Vec<f64> },
    Range { start: f64, stop: f64, step: f64 },
}

impl HzGrid {
    /// Ascending grid points; a range includes `stop` when it lies on the
    /// lattice.
    pub fn points(&self) -> Result<Vec<f64>> {
        let pts = match self {
            HzGrid::Values { values } => values.clone(),
            HzGrid::Range { start, stop, step } => {
                if !(*step > 0.0) || !step.is_finite() || !start.is_finite() || !stop.is_finite() {
                    return Err(Error::Config(format!("bad h_z range {start}..{stop} step {step}")));
                }
                let count = ((stop - start) / step + 1e-9).floor();
                if count < 0.0 {
                    return Err(Error::Config("h_z range stop is below start".into()));
                }
                (0..=count as usize).map(|i| start + i as f64 * step).collect()
            }
        };
        if pts.is_empty() {
            return Err(Error::Config("h_z grid is empty".into()));
        }
        if pts.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("h_z grid has non-finite values".into()));
        }
        let mut pts = pts;
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).any(|w| w[1] == w[0]) {
            return Err(Error::Config("h_z grid has repeated values".into()));
        }
        Ok(pts)
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config; relative schedule-table paths are
    /// rebased onto the file's directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let (GateConfig::Dwave(d), Some(dir)) = (&mut cfg.gate, path.parent()) {
            for p in [&mut d.a_schedule, &mut d.b_schedule].into_iter().flatten() {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn qubit_count(&self) -> usize {
        match &self.gate {
            GateConfig::XRotation => 1,
            GateConfig::ControlledNot { .. } => 2,
            GateConfig::Dwave(d) => d.h.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        self.grid.h_z.points()?;
        if self.grid.anneal_times.is_empty() {
            return Err(Error::Config("anneal_times is empty".into()));
        }
        if let Some(t) = self.grid.anneal_times.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
            return Err(Error::Config(format!("anneal time {t} must be positive")));
        }
        if self.grid.anneal_times.iter().any(|&t| t < self.dt) {
            return Err(Error::Config("every anneal time must be at least dt".into()));
        }
        if self.grid.initial_states.is_empty() {
            return Err(Error::Config("initial_states is empty".into()));
        }
        if self.shots == Some(0) {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        let n = self.qubit_count();
        match &self.gate {
            GateConfig::XRotation => {}
            GateConfig::ControlledNot { a, b, catalyst } => {
                GatePipeline::cnot(*a, *b, *catalyst).map_err(|e| Error::Config(e.to_string()))?;
            }
            GateConfig::Dwave(d) => {
                let plus = "+".repeat(n);
                if self.grid.initial_states.iter().any(|s| *s != plus) {
                    return Err(Error::Config(format!(
                        "D-Wave runs start from the all-plus state {plus:?} only"
                    )));
                }
                d.couplings()?;
                if d.g_knots.is_empty() {
                    return Err(Error::Config("g_knots is empty".into()));
                }
            }
        }
        for label in &self.grid.initial_states {
            if label.chars().count() != n || parse_drive_label(label).is_err() {
                return Err(Error::Config(format!(
                    "initial state {label:?} is not a {n}-qubit +/- label"
                )));
            }
        }
        Ok(())
    }
}

impl DWaveConfig {
    /// Couplings re-keyed to 0-based `(i, j)`.
    pub fn couplings(&self) -> Result<BTreeMap<(usize, usize), f64>> {
        self.couplings
            .iter()
            .map(|(k, &v)| Ok((parse_pair(k, self.h.len())?, v)))
            .collect()
    }

    /// `g` knots in time units for a given `h_z` and `T`.
    pub fn g_waveform(&self, h_z: f64, anneal_time: f64) -> Result<PiecewiseLinear> {
        PiecewiseLinear::new(
            self.g_knots
                .iter()
                .map(|[f, c, k]| (f * anneal_time, c + k * h_z))
                .collect(),
        )
    }

    pub fn schedule(&self, h_z: f64, anneal_time: f64) -> Result<DWaveSchedule> {
        let mut spec = DWaveSchedule::linear(self.g_waveform(h_z, anneal_time)?, self.h.clone(), self.couplings()?)?;
        let load = |p: &PathBuf| -> Result<PiecewiseLinear> {
            let file = std::fs::File::open(p).map_err(io_err(p))?;
            PiecewiseLinear::from_csv_reader(file)
        };
        if let Some(p) = &self.a_schedule {
            spec.a = load(p)?;
        }
        if let Some(p) = &self.b_schedule {
            spec.b = load(p)?;
        }
        spec.validate(anneal_time)?;
        Ok(spec)
    }
}

/// Parses a 1-based `"i,j"` key with `i > j` into 0-based indices.
pub fn parse_pair(key: &str, qubit_count: usize) -> Result<(usize, usize)> {
    let (i, j) = key
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("coupling key {key:?} is not \"i,j\"")))?;
    let parse = |s: &str| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("coupling key {key:?}: {e}")))
    };
    let (i, j) = (parse(i)?, parse(j)?);
    if j == 0 || i <= j || i > qubit_count {
        return Err(Error::Parse(format!(
            "coupling key {key:?} needs {qubit_count} ≥ i > j ≥ 1"
        )));
    }
    Ok((i - 1, j - 1))
}
