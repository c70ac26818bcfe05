//! Parameter sweeps over `(h_z, T, initial state)`.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::EvolveOptions;
use crate::gates::GatePipeline;
use crate::schedules::dwave;
use crate::state::{to_drive_basis, StateVector};

use super::config::{ExperimentConfig, GateConfig};
use super::dwave::{emulate_schedule, end_slope_prediction};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub h_z: f64,
    pub anneal_time: f64,
    pub initial_state: String,
    /// Computational populations at the end of the forward part. For D-Wave
    /// runs with shots these are observed frequencies.
    pub forward: Vec<f64>,
    /// Drive-basis populations after the reverse part; empty for D-Wave runs.
    pub reverse: Vec<f64>,
    pub oracle_forward: Vec<f64>,
    pub oracle_reverse: Vec<f64>,
    pub max_deviation: f64,
    pub norm_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepMetadata {
    pub name: String,
    pub dt: f64,
    pub version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub points: usize,
    pub max_norm_drift: f64,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub qubit_count: usize,
    /// Whether the rows carry reverse-part populations.
    pub has_reverse: bool,
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Runs every grid point (in parallel) and merges rows ordered by `h_z`,
/// then `T`, then initial state. A failing point keeps its row with the
/// error recorded and NaN populations.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let started = unix_now();
    let mut grid = Vec::new();
    for h in cfg.grid.h_z.points()? {
        let mut times = cfg.grid.anneal_times.clone();
        times.sort_by(f64::total_cmp);
        for t in times {
            let mut states = cfg.grid.initial_states.clone();
            states.sort();
            for s in states {
                grid.push((h, t, s));
            }
        }
    }
    let n = cfg.qubit_count();
    let dim = 1usize << n;
    let has_reverse = !matches!(cfg.gate, GateConfig::Dwave(_));
    let opts = EvolveOptions::with_dt(cfg.dt);
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .enumerate()
        .map(|(idx, (h, t, s))| {
            run_point(cfg, idx as u64, *h, *t, s, &opts).unwrap_or_else(|e| SweepRow {
                h_z: *h,
                anneal_time: *t,
                initial_state: s.clone(),
                forward: vec![f64::NAN; dim],
                reverse: if has_reverse { vec![f64::NAN; dim] } else { Vec::new() },
                oracle_forward: vec![f64::NAN; dim],
                oracle_reverse: if has_reverse { vec![f64::NAN; dim] } else { Vec::new() },
                max_deviation: f64::NAN,
                norm_drift: f64::NAN,
                counts: None,
                error: Some(e.to_string()),
            })
        })
        .collect();
    let failures = rows
        .iter()
        .filter_map(|r| {
            r.error
                .as_ref()
                .map(|e| format!("h_z = {}, T = {}, {}: {e}", r.h_z, r.anneal_time, r.initial_state))
        })
        .collect();
    let max_norm_drift = rows
        .iter()
        .map(|r| r.norm_drift)
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    Ok(SweepResult {
        qubit_count: n,
        has_reverse,
        metadata: SweepMetadata {
            name: cfg.name.clone(),
            dt: cfg.dt,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: started,
            finished_unix: unix_now(),
            points: rows.len(),
            max_norm_drift,
            failures,
        },
        rows,
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn run_point(cfg: &ExperimentConfig, idx: u64, h_z: f64, anneal_time: f64, label: &str, opts: &EvolveOptions) -> Result<SweepRow> {
    let pipeline = match &cfg.gate {
        GateConfig::XRotation => GatePipeline::x_rotation()?,
        GateConfig::ControlledNot { a, b, catalyst } => GatePipeline::cnot(*a, *b, *catalyst)?,
        GateConfig::Dwave(d) => {
            let spec = d.schedule(h_z, anneal_time)?;
            let oracle = end_slope_prediction(&dwave(&spec, anneal_time)?)?;
            let (forward, counts, drift) = match cfg.shots {
                Some(shots) => {
                    let seed = cfg.seed.unwrap_or(0).wrapping_add(idx);
                    let em = emulate_schedule(&spec, anneal_time, shots, seed, opts)?;
                    (em.frequencies(spec.qubit_count()), Some(em.counts), em.norm_drift)
                }
                None => {
                    let em = emulate_schedule(&spec, anneal_time, 1, 0, opts)?;
                    (em.populations, None, em.norm_drift)
                }
            };
            return Ok(SweepRow {
                h_z,
                anneal_time,
                initial_state: label.to_string(),
                max_deviation: max_abs_diff(&forward, &oracle),
                forward,
                reverse: Vec::new(),
                oracle_forward: oracle,
                oracle_reverse: Vec::new(),
                norm_drift: drift,
                counts,
                error: None,
            });
        }
    };
    let psi0 = StateVector::from_drive_label(label)?;
    let run = pipeline.run(h_z, anneal_time, &psi0, opts)?;
    let prediction = pipeline.predict(h_z, label)?;
    let forward = run.forward.final_state.probabilities();
    let reverse: Vec<f64> = to_drive_basis(run.final_state()).iter().map(|a| a.norm_sqr()).collect();
    let deviation = max_abs_diff(&forward, &prediction.forward).max(max_abs_diff(&reverse, &prediction.reverse));
    if !deviation.is_finite() {
        return Err(Error::NonFinite("population deviation".into()));
    }
    Ok(SweepRow {
        h_z,
        anneal_time,
        initial_state: label.to_string(),
        forward,
        reverse,
        oracle_forward: prediction.forward,
        oracle_reverse: prediction.reverse,
        max_deviation: deviation,
        norm_drift: run.forward.norm_drift.max(run.reverse.norm_drift),
        counts: None,
        error: None,
    })
}
