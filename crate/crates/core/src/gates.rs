//! Annealing gate pipelines and gate programs.
//!
//! An X-rotation or controlled-not is run as forward anneal (with catalytic
//! pulse) into a degenerate problem Hamiltonian, an instantaneous swap to a
//! non-degenerate `H̃_P`, then a reverse anneal back to the driver. Both
//! problem Hamiltonians are diagonal, so the swap leaves the state alone.
//!
//! Qubit indices are 0-based in the API and 1-based in serialized programs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{evolve_with, EvolutionReport, EvolveOptions};
use crate::operators::{PauliSum, DEFAULT_DEGENERACY_TOL};
use crate::perturbation::generic_first_order;
use crate::schedules::{self, ControlSchedule};
use crate::state::{
    basis_label, drive_label, parse_drive_label, qubit_bit, to_drive_basis, StateVector, C64,
};

/// Driver, degenerate problem, catalyst and lifted problem of one gate.
#[derive(Clone, Debug, PartialEq)]
pub struct GatePipeline {
    pub driver: PauliSum,
    pub problem: PauliSum,
    pub catalyst: PauliSum,
    pub lifted_problem: PauliSum,
}

/// Result of a forward + reverse run.
#[derive(Clone, Debug, PartialEq)]
pub struct GateRun {
    pub forward: EvolutionReport,
    pub reverse: EvolutionReport,
}

impl GateRun {
    pub fn final_state(&self) -> &StateVector {
        &self.reverse.final_state
    }

    /// The whole pipeline as one report; drift is that of the final state.
    pub fn report(&self) -> EvolutionReport {
        EvolutionReport {
            final_state: self.reverse.final_state.clone(),
            norm_drift: self.reverse.norm_drift,
            steps: self.forward.steps + self.reverse.steps,
            dt: self.reverse.dt,
        }
    }
}

/// Oracle predictions for a pipeline run from a drive eigenstate.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelinePrediction {
    /// Computational-basis populations after the forward part.
    pub forward: Vec<f64>,
    /// Drive-basis populations after the reverse part.
    pub reverse: Vec<f64>,
}

impl GatePipeline {
    /// `H_D = −σ^x`, `H_P = −1l`, `H_C = σ^z`, `H̃_P = σ^z`.
    pub fn x_rotation() -> Result<Self> {
        Ok(Self {
            driver: PauliSum::single(1, 0, crate::operators::Pauli::X, -1.0)?,
            problem: PauliSum::identity(1, -1.0)?,
            catalyst: PauliSum::sigma_z(1, 0)?,
            lifted_problem: PauliSum::sigma_z(1, 0)?,
        })
    }

    /// `H_D = −σ₁^x − ½σ₂^x`, `H_P = (σ₁^z+1)(aσ₂^z+1)`,
    /// `H̃_P = (bσ₁^z+1)(aσ₂^z+1)`, `H_C = w₁σ₁^z + w₂σ₂^z`.
    /// Requires `0 < a < b < 1`.
    pub fn cnot(a: f64, b: f64, catalyst_weights: [f64; 2]) -> Result<Self> {
        if !(0.0 < a && a < b && b < 1.0) {
            return Err(Error::GateParameters(format!(
                "controlled-not needs 0 < a < b < 1, got a = {a}, b = {b}"
            )));
        }
        let z1 = PauliSum::sigma_z(2, 0)?;
        let z2 = PauliSum::sigma_z(2, 1)?;
        let one = PauliSum::identity(2, 1.0)?;
        let target = &z2.scaled(a) + &one;
        Ok(Self {
            driver: PauliSum::transverse_field(&[-1.0, -0.5])?,
            problem: (&z1 + &one).try_mul(&target)?.simplified(),
            catalyst: PauliSum::longitudinal_field(&catalyst_weights)?,
            lifted_problem: (&z1.scaled(b) + &one).try_mul(&target)?.simplified(),
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.driver.qubit_count()
    }

    pub fn forward_schedule(&self, h_z: f64, anneal_time: f64) -> Result<ControlSchedule> {
        schedules::forward(&self.driver, &self.problem, &self.catalyst, h_z, anneal_time)
    }

    pub fn reverse_schedule(&self, anneal_time: f64) -> Result<ControlSchedule> {
        schedules::reverse(&self.driver, &self.lifted_problem, anneal_time)
    }

    /// `H` at the end of the forward part and at the start of the reverse part.
    pub fn junction(&self, h_z: f64, anneal_time: f64) -> Result<(PauliSum, PauliSum)> {
        Ok((
            self.forward_schedule(h_z, anneal_time)?.sample(anneal_time)?,
            self.reverse_schedule(anneal_time)?.sample(0.0)?,
        ))
    }

    pub fn run(&self, h_z: f64, anneal_time: f64, psi0: &StateVector, opts: &EvolveOptions) -> Result<GateRun> {
        let forward = evolve_with(&self.forward_schedule(h_z, anneal_time)?, psi0, opts)?;
        let reverse = evolve_with(&self.reverse_schedule(anneal_time)?, &forward.final_state, opts)?;
        Ok(GateRun { forward, reverse })
    }

    /// Drive basis indices sorted by `H_D` energy.
    fn drive_order(&self) -> Vec<usize> {
        let n = self.qubit_count();
        let dim = 1usize << n;
        // H_D is diagonal in the drive basis; read its energies off σ^x weights
        let weights: Vec<f64> = (0..n)
            .map(|q| {
                self.driver
                    .terms()
                    .iter()
                    .filter(|t| {
                        t.factors()
                            .iter()
                            .enumerate()
                            .all(|(k, p)| (k == q) == (*p == crate::operators::Pauli::X))
                    })
                    .map(|t| t.coefficient())
                    .sum()
            })
            .collect();
        let energy = |idx: usize| -> f64 {
            (0..n)
                .map(|q| if idx & qubit_bit(n, q) == 0 { weights[q] } else { -weights[q] })
                .sum()
        };
        sorted_by_energy(dim, energy)
    }

    /// Maps each computational state to the drive state it reaches at the
    /// end of the reverse anneal (level order is preserved).
    pub fn reverse_mapping(&self) -> Vec<usize> {
        let diag = self.lifted_problem.diagonal();
        let comp = sorted_by_energy(diag.len(), |i| diag[i]);
        let drive = self.drive_order();
        let mut map = vec![0; diag.len()];
        for (c, d) in comp.into_iter().zip(drive) {
            map[c] = d;
        }
        map
    }

    /// First-order prediction for a run starting in the drive eigenstate
    /// `initial` (a `+`/`-` label).
    ///
    /// The two lowest drive levels end in the two branches of the
    /// degenerate ground space of `H_P`, split by `V = H_D + h_z H_C`; higher
    /// levels end in the remaining computational states in energy order.
    pub fn predict(&self, h_z: f64, initial: &str) -> Result<PipelinePrediction> {
        let n = self.qubit_count();
        let dim = 1usize << n;
        let start = parse_drive_label(initial)?;
        if initial.chars().count() != n {
            return Err(Error::RegisterMismatch {
                left: n,
                right: initial.chars().count(),
            });
        }
        let rank = self
            .drive_order()
            .iter()
            .position(|&d| d == start)
            .expect("drive order is a permutation");
        let v = (&self.driver + &self.catalyst.scaled(h_z)).simplified();
        let split = generic_first_order(&self.problem, &v, DEFAULT_DEGENERACY_TOL)?;
        let mut forward = vec![0.0; dim];
        if rank < 2 {
            let state = split
                .state(rank == 1)
                .ok_or_else(|| Error::GateParameters("perturbation kets missing".into()))?;
            forward = state.probabilities();
        } else {
            let diag = self.problem.diagonal();
            let order = sorted_by_energy(dim, |i| diag[i]);
            forward[order[rank]] = 1.0;
        }
        let map = self.reverse_mapping();
        let mut reverse = vec![0.0; dim];
        for (c, p) in forward.iter().enumerate() {
            reverse[map[c]] += p;
        }
        Ok(PipelinePrediction { forward, reverse })
    }
}

fn sorted_by_energy(dim: usize, energy: impl Fn(usize) -> f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.sort_by(|&a, &b| energy(a).total_cmp(&energy(b)).then(a.cmp(&b)));
    idx
}

/// Single-qubit X-rotation pipeline.
pub fn x_rotation(h_z: f64, anneal_time: f64, psi0: &StateVector, opts: &EvolveOptions) -> Result<GateRun> {
    GatePipeline::x_rotation()?.run(h_z, anneal_time, psi0, opts)
}

/// Controlled-not pipeline with the uniform catalyst `σ₁^z + σ₂^z`.
pub fn cnot(a: f64, b: f64, h_z: f64, anneal_time: f64, psi0: &StateVector, opts: &EvolveOptions) -> Result<GateRun> {
    GatePipeline::cnot(a, b, [1.0, 1.0])?.run(h_z, anneal_time, psi0, opts)
}

/// `e^{+iσ^z t}` on `qubit`: `α|↑⟩ + β|↓⟩ → αe^{it}|↑⟩ + βe^{−it}|↓⟩`.
pub fn z_rotation(psi: &StateVector, t: f64, qubit: usize) -> Result<StateVector> {
    let n = psi.qubit_count();
    check_qubit(qubit, n)?;
    let bit = qubit_bit(n, qubit);
    let (up, down) = (C64::from_polar(1.0, t), C64::from_polar(1.0, -t));
    let amps = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| if i & bit == 0 { a * up } else { a * down })
        .collect();
    StateVector::unchecked(n, amps)
}

/// `e^{+iσ^x t}` on `qubit`: a phase rotation between `|+⟩` and `|−⟩`,
/// leaving drive-basis populations unchanged.
pub fn drive_phase_rotation(psi: &StateVector, t: f64, qubit: usize) -> Result<StateVector> {
    let n = psi.qubit_count();
    check_qubit(qubit, n)?;
    let bit = qubit_bit(n, qubit);
    let (c, s) = (C64::new(t.cos(), 0.0), C64::new(0.0, t.sin()));
    let a = psi.amplitudes();
    let amps = (0..a.len()).map(|i| a[i] * c + a[i ^ bit] * s).collect();
    StateVector::unchecked(n, amps)
}

/// Longitudinal-field schedule realizing `e^{+iσ^z t}`: `H = −sign(t) σ^z`
/// held for `|t|`.
pub fn z_rotation_schedule(qubit_count: usize, qubit: usize, t: f64) -> Result<ControlSchedule> {
    check_qubit(qubit, qubit_count)?;
    let h = PauliSum::single(qubit_count, qubit, crate::operators::Pauli::Z, -t.signum())?;
    ControlSchedule::constant(h, t.abs())
}

/// [`z_rotation`] by integrating [`z_rotation_schedule`].
pub fn z_rotation_evolved(psi: &StateVector, t: f64, qubit: usize, opts: &EvolveOptions) -> Result<EvolutionReport> {
    if t == 0.0 {
        return Ok(EvolutionReport {
            final_state: psi.clone(),
            norm_drift: (psi.norm() - 1.0).abs(),
            steps: 0,
            dt: opts.dt,
        });
    }
    let sched = z_rotation_schedule(psi.qubit_count(), qubit, t)?;
    let opts = EvolveOptions {
        dt: opts.dt.min(t.abs()),
        ..*opts
    };
    evolve_with(&sched, psi, &opts)
}

/// `−(k/2) Σ σ^x`, whose spectrum is spaced by `k`.
pub fn idle_hamiltonian(qubit_count: usize, gap: f64) -> Result<PauliSum> {
    PauliSum::transverse_field(&vec![-0.5 * gap; qubit_count])
}

/// Evolves under the idling Hamiltonian for `t = 2πm/k`; identity up to a
/// global phase.
pub fn idle(psi: &StateVector, periods: u32, gap: f64, opts: &EvolveOptions) -> Result<EvolutionReport> {
    if !(gap > 0.0) || !gap.is_finite() {
        return Err(Error::GateParameters(format!("idle gap must be positive, got {gap}")));
    }
    let t = 2.0 * PI * periods as f64 / gap;
    if periods == 0 {
        return Ok(EvolutionReport {
            final_state: psi.clone(),
            norm_drift: (psi.norm() - 1.0).abs(),
            steps: 0,
            dt: opts.dt,
        });
    }
    let sched = ControlSchedule::constant(idle_hamiltonian(psi.qubit_count(), gap)?, t)?;
    let opts = EvolveOptions {
        dt: opts.dt.min(t),
        ..*opts
    };
    evolve_with(&sched, psi, &opts)
}

fn check_qubit(qubit: usize, qubit_count: usize) -> Result<()> {
    if qubit >= qubit_count {
        return Err(Error::QubitIndex {
            index: qubit,
            qubits: qubit_count,
        });
    }
    Ok(())
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut x = theta.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// `arg⟨second|ψ⟩ − arg⟨first|ψ⟩` for two drive-basis labels, wrapped into
/// `(−π, π]`. Fails when either amplitude is below 1e-6.
pub fn relative_phase(psi: &StateVector, first: &str, second: &str) -> Result<f64> {
    let amps = to_drive_basis(psi);
    let a = amps[parse_drive_label(first)?];
    let b = amps[parse_drive_label(second)?];
    let smallest = a.norm().min(b.norm());
    if smallest < 1e-6 {
        return Err(Error::CalibrationUndefined(smallest));
    }
    Ok(wrap_phase(b.arg() - a.arg()))
}

/// Relative phase picked up by a gate on the `|+⟩` (or `|++⟩`) input.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseCalibration {
    pub gate: GateSpec,
    /// `arg⟨−|ψ⟩ − arg⟨+|ψ⟩` on the target qubit, in `(−π, π]`.
    pub theta_prime: f64,
    /// Duration of the drive-axis rotation `e^{+iσ^x t}` that cancels
    /// `theta_prime`, in `[0, π)`.
    pub compensation: f64,
    /// Drive-basis phases of the output, relative to the input label's
    /// amplitude, for every component above 1e-6.
    pub phases: Vec<(String, f64)>,
    pub method: String,
}

/// Runs `gate` on `|+⟩` (X-rotation) or `|++⟩` (controlled-not, target
/// phase with control `|+⟩`) and measures the relative phase.
pub fn calibrate_relative_phase(gate: &GateSpec, opts: &EvolveOptions) -> Result<PhaseCalibration> {
    let (pipeline, h_z, anneal_time, input, pair) = match gate {
        GateSpec::XRotation { h_z, anneal_time, .. } => {
            (GatePipeline::x_rotation()?, *h_z, *anneal_time, "+", ("+", "-"))
        }
        GateSpec::ControlledNot {
            a,
            b,
            h_z,
            anneal_time,
            catalyst,
            ..
        } => (
            GatePipeline::cnot(*a, *b, *catalyst)?,
            *h_z,
            *anneal_time,
            "++",
            ("++", "+-"),
        ),
        other => {
            return Err(Error::GateParameters(format!(
                "only annealing gates need calibration, got {}",
                other.kind()
            )))
        }
    };
    let psi0 = StateVector::from_drive_label(input)?;
    let out = pipeline.run(h_z, anneal_time, &psi0, opts)?;
    let psi = out.final_state();
    let theta_prime = relative_phase(psi, pair.0, pair.1)?;
    let amps = to_drive_basis(psi);
    let n = psi.qubit_count();
    let reference = amps[parse_drive_label(input)?].arg();
    let phases = amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() >= 1e-6)
        .map(|(i, a)| (drive_label(n, i), wrap_phase(a.arg() - reference)))
        .collect();
    Ok(PhaseCalibration {
        gate: gate.clone(),
        theta_prime,
        compensation: (0.5 * theta_prime).rem_euclid(PI),
        phases,
        method: format!("simulated pipeline from |{input}⟩, dt = {}", opts.dt),
    })
}

/// One step of a [`GateProgram`]. Serialized with 1-based qubit indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GateSpec {
    XRotation {
        #[serde(with = "one_based")]
        qubit: usize,
        h_z: f64,
        anneal_time: f64,
    },
    ControlledNot {
        #[serde(with = "one_based")]
        control: usize,
        #[serde(with = "one_based")]
        target: usize,
        a: f64,
        b: f64,
        h_z: f64,
        anneal_time: f64,
        #[serde(default = "uniform_catalyst")]
        catalyst: [f64; 2],
    },
    ZRotation {
        #[serde(with = "one_based")]
        qubit: usize,
        duration: f64,
    },
    /// `e^{+iσ^x t}`, used to cancel a calibrated relative phase.
    PhaseCompensation {
        #[serde(with = "one_based")]
        qubit: usize,
        duration: f64,
    },
    Idle {
        periods: u32,
    },
}

fn uniform_catalyst() -> [f64; 2] {
    [1.0, 1.0]
}

impl GateSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GateSpec::XRotation { .. } => "x_rotation",
            GateSpec::ControlledNot { .. } => "controlled_not",
            GateSpec::ZRotation { .. } => "z_rotation",
            GateSpec::PhaseCompensation { .. } => "phase_compensation",
            GateSpec::Idle { .. } => "idle",
        }
    }

    fn validate(&self, qubit_count: usize) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::GateParameters(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            GateSpec::XRotation {
                qubit,
                h_z,
                anneal_time,
            } => {
                check_qubit(*qubit, qubit_count)?;
                positive("anneal_time", *anneal_time)?;
                if !h_z.is_finite() {
                    return Err(Error::NonFinite(format!("h_z = {h_z}")));
                }
            }
            GateSpec::ControlledNot {
                control,
                target,
                anneal_time,
                ..
            } => {
                check_qubit(*control, qubit_count)?;
                check_qubit(*target, qubit_count)?;
                if control == target {
                    return Err(Error::GateParameters("control and target coincide".into()));
                }
                positive("anneal_time", *anneal_time)?;
            }
            GateSpec::ZRotation { qubit, duration } | GateSpec::PhaseCompensation { qubit, duration } => {
                check_qubit(*qubit, qubit_count)?;
                if !duration.is_finite() {
                    return Err(Error::NonFinite(format!("duration = {duration}")));
                }
            }
            GateSpec::Idle { .. } => {}
        }
        Ok(())
    }
}

mod one_based {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*v as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let v = u64::deserialize(d)?;
        if v == 0 {
            return Err(D::Error::custom("qubit indices are 1-based"));
        }
        Ok(v as usize - 1)
    }
}

/// Ordered gate steps on an `n`-qubit register. Idle steps last `2πm/k`
/// under `−(k/2)Σσ^x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateProgram {
    pub qubit_count: usize,
    pub idle_gap: f64,
    #[serde(default)]
    pub steps: Vec<GateSpec>,
}

/// Applies the steps in order. `norm_drift` in the report is the sum of the
/// per-step drifts; `steps` counts integrator steps.
pub fn run_program(prog: &GateProgram, psi0: &StateVector, opts: &EvolveOptions) -> Result<EvolutionReport> {
    if psi0.qubit_count() != prog.qubit_count {
        return Err(Error::RegisterMismatch {
            left: prog.qubit_count,
            right: psi0.qubit_count(),
        });
    }
    let mut psi = psi0.clone();
    let mut drift = 0.0;
    let mut steps = 0;
    for (index, spec) in prog.steps.iter().enumerate() {
        let wrap = |e: Error| Error::ProgramStep {
            index,
            source: Box::new(e),
        };
        spec.validate(prog.qubit_count).map_err(wrap)?;
        let report = apply_step(spec, prog, &psi, opts).map_err(wrap)?;
        drift += report.norm_drift;
        steps += report.steps;
        psi = report.final_state;
    }
    Ok(EvolutionReport {
        norm_drift: drift,
        final_state: psi,
        steps,
        dt: opts.dt,
    })
}

fn exact(psi: StateVector, before: &StateVector) -> EvolutionReport {
    let drift = (psi.norm() - before.norm()).abs();
    EvolutionReport {
        final_state: psi,
        norm_drift: drift,
        steps: 0,
        dt: 0.0,
    }
}

fn apply_step(spec: &GateSpec, prog: &GateProgram, psi: &StateVector, opts: &EvolveOptions) -> Result<EvolutionReport> {
    let n = prog.qubit_count;
    let embedded = |pipeline: GatePipeline, targets: &[usize]| -> Result<GatePipeline> {
        Ok(GatePipeline {
            driver: pipeline.driver.embed(n, targets)?,
            problem: pipeline.problem.embed(n, targets)?,
            catalyst: pipeline.catalyst.embed(n, targets)?,
            lifted_problem: pipeline.lifted_problem.embed(n, targets)?,
        })
    };
    match spec {
        GateSpec::XRotation {
            qubit,
            h_z,
            anneal_time,
        } => Ok(embedded(GatePipeline::x_rotation()?, &[*qubit])?
            .run(*h_z, *anneal_time, psi, opts)?
            .report()),
        GateSpec::ControlledNot {
            control,
            target,
            a,
            b,
            h_z,
            anneal_time,
            catalyst,
        } => Ok(embedded(GatePipeline::cnot(*a, *b, *catalyst)?, &[*control, *target])?
            .run(*h_z, *anneal_time, psi, opts)?
            .report()),
        GateSpec::ZRotation { qubit, duration } => Ok(exact(z_rotation(psi, *duration, *qubit)?, psi)),
        GateSpec::PhaseCompensation { qubit, duration } => {
            Ok(exact(drive_phase_rotation(psi, *duration, *qubit)?, psi))
        }
        GateSpec::Idle { periods } => idle(psi, *periods, prog.idle_gap, opts),
    }
}

/// Computational populations keyed like [`crate::evolution::populations`],
/// in basis-index order.
pub fn labeled(values: &[f64], qubit_count: usize, drive: bool) -> Vec<(String, f64)> {
    values
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let label = if drive {
                drive_label(qubit_count, i)
            } else {
                basis_label(qubit_count, i)
            };
            (label, p)
        })
        .collect()
}
