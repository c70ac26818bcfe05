//! D-Wave-style problem documents and their software emulation.
//!
//! The emulator integrates the device Hamiltonian from `|++…+⟩` and samples
//! the computational basis at `t = T`, which is all the device allows.
//! `anneal_schedule` holds the `g(t)` knots, not the device's `s(t)` table.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::evolution::{evolve_with, sample_measurements, EvolveOptions};
use crate::operators::{eigen_decompose, PauliSum, DEFAULT_DEGENERACY_TOL};
use crate::perturbation::generic_first_order;
use crate::schedules::{dwave, ControlSchedule, DWaveSchedule, PiecewiseLinear};
use crate::state::{basis_label, StateVector};

use super::config::parse_pair;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DWaveProblem {
    pub h: Vec<f64>,
    /// 0-based `(i, j)` with `i > j`; serialized as `"i,j"` 1-based keys.
    #[serde(rename = "J", with = "coupling_keys")]
    pub j: BTreeMap<(usize, usize), f64>,
    pub anneal_schedule: Vec<[f64; 2]>,
    pub annealing_time: f64,
    pub num_reads: usize,
}

mod coupling_keys {
    use std::collections::BTreeMap;

    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, usize), f64>, s: S) -> Result<S::Ok, S::Error> {
        let keyed: BTreeMap<String, f64> = m
            .iter()
            .map(|(&(i, j), &v)| (format!("{},{}", i + 1, j + 1), v))
            .collect();
        keyed.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), f64>, D::Error> {
        let keyed = BTreeMap::<String, f64>::deserialize(d)?;
        keyed
            .into_iter()
            .map(|(k, v)| {
                super::parse_pair(&k, usize::MAX)
                    .map(|p| (p, v))
                    .map_err(D::Error::custom)
            })
            .collect()
    }
}

impl DWaveProblem {
    pub fn qubit_count(&self) -> usize {
        self.h.len()
    }

    /// Device ranges `|h|, |J| ≤ 1`, sorted knots covering `[0, T]`.
    pub fn validate(&self) -> Result<()> {
        let n = self.h.len();
        if n == 0 || n > crate::error::MAX_QUBITS {
            return Err(Error::RegisterSize(n));
        }
        if let Some(v) = self.h.iter().find(|v| !(v.abs() <= 1.0)) {
            return Err(Error::DWaveRange(format!("field {v} outside [-1, 1]")));
        }
        for (&(i, j), v) in &self.j {
            if !(v.abs() <= 1.0) {
                return Err(Error::DWaveRange(format!("coupling {},{} = {v} outside [-1, 1]", i + 1, j + 1)));
            }
            parse_pair(&format!("{},{}", i + 1, j + 1), n).map_err(|e| Error::DWaveRange(e.to_string()))?;
        }
        if !(self.annealing_time > 0.0) || !self.annealing_time.is_finite() {
            return Err(Error::DWaveRange(format!("annealing time {}", self.annealing_time)));
        }
        if self.num_reads == 0 {
            return Err(Error::DWaveRange("num_reads must be at least 1".into()));
        }
        let k = &self.anneal_schedule;
        if k.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("anneal schedule knot".into()));
        }
        if k.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::DWaveRange("anneal schedule knots are not time-sorted".into()));
        }
        match (k.first(), k.last()) {
            (Some(first), Some(last)) if first[0] == 0.0 && last[0] == self.annealing_time => Ok(()),
            _ => Err(Error::DWaveRange(format!(
                "anneal schedule must run from t = 0 to t = {}",
                self.annealing_time
            ))),
        }
    }

    /// Schedule with linear `A(s) = 1 − s`, `B(s) = s`.
    pub fn schedule(&self) -> Result<DWaveSchedule> {
        self.validate()?;
        let g = PiecewiseLinear::new(self.anneal_schedule.iter().map(|k| (k[0], k[1])).collect())?;
        DWaveSchedule::linear(g, self.h.clone(), self.j.clone())
    }

    /// Builds a problem from a schedule, copying its `g` knots.
    pub fn from_schedule(spec: &DWaveSchedule, annealing_time: f64, num_reads: usize) -> Result<Self> {
        let p = Self {
            h: spec.h.clone(),
            j: spec.j.clone(),
            anneal_schedule: spec.g.knots().iter().map(|&(t, v)| [t, v]).collect(),
            annealing_time,
            num_reads,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }
}

pub fn export_dwave(problem: &DWaveProblem, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = problem.to_json()?;
    text.push('\n');
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn import_dwave(path: impl AsRef<Path>) -> Result<DWaveProblem> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    DWaveProblem::from_json(&text)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DWaveEmulation {
    /// Exact final populations, basis-index order.
    pub populations: Vec<f64>,
    /// Shot counts keyed by `↑/↓` label.
    pub counts: BTreeMap<String, u64>,
    pub norm_drift: f64,
}

impl DWaveEmulation {
    /// Observed frequency of each basis state, basis-index order.
    pub fn frequencies(&self, qubit_count: usize) -> Vec<f64> {
        let total: u64 = self.counts.values().sum();
        (0..self.populations.len())
            .map(|i| self.counts[&basis_label(qubit_count, i)] as f64 / total as f64)
            .collect()
    }
}

/// Emulates `problem` with linear `A`, `B`.
pub fn emulate_dwave(problem: &DWaveProblem, seed: u64, opts: &EvolveOptions) -> Result<DWaveEmulation> {
    emulate_schedule(&problem.schedule()?, problem.annealing_time, problem.num_reads, seed, opts)
}

/// Emulates an arbitrary device schedule (e.g. with tabulated `A`, `B`).
pub fn emulate_schedule(
    spec: &DWaveSchedule,
    annealing_time: f64,
    shots: usize,
    seed: u64,
    opts: &EvolveOptions,
) -> Result<DWaveEmulation> {
    let sched = dwave(spec, annealing_time)?;
    let psi0 = StateVector::all_plus(spec.qubit_count())?;
    let report = evolve_with(&sched, &psi0, opts)?;
    Ok(DWaveEmulation {
        populations: report.final_state.probabilities(),
        counts: sample_measurements(&report.final_state, shots, seed)?,
        norm_drift: report.norm_drift,
    })
}

/// Adiabatic prediction of the final populations of an anneal that starts
/// in the ground state of `H(0)`.
///
/// Near `t = T`, `H ≈ H(T) − (T − t) H'(T)`. If `H(T)` has a two-fold ground
/// space, the state ends in the lower first-order branch of `V = −H'(T)` on
/// that space; if the ground state is unique it ends there.
pub fn end_slope_prediction(sched: &ControlSchedule) -> Result<Vec<f64>> {
    let h_end = sched.sample(sched.total_time())?;
    let spectrum = eigen_decompose(&h_end, DEFAULT_DEGENERACY_TOL)?;
    match spectrum.ground_degeneracy {
        1 => Ok(spectrum.eigenvectors[0].probabilities()),
        2 => {
            let v: PauliSum = sched.end_slope()?.scaled(-1.0);
            let split = generic_first_order(&h_end, &v, DEFAULT_DEGENERACY_TOL)?;
            split
                .state(false)
                .map(|s| s.probabilities())
                .ok_or_else(|| Error::GateParameters("perturbation kets missing".into()))
        }
        found => Err(Error::GroundDegeneracy { expected: 2, found }),
    }
}
