use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use anneal_gates::error::{Error, Result};
use anneal_gates::evolution::{EvolveOptions, DEFAULT_DT};
use anneal_gates::families::two_state_entangled;
use anneal_gates::gates::{calibrate_relative_phase, labeled, run_program, GatePipeline, GateProgram, GateSpec};
use anneal_gates::harness::{
    emit_csv, emulate_dwave, import_dwave, run_sweep, spectrum_report, DWaveProblem, ExperimentConfig, FamilyConfig,
    GateConfig, SweepResult,
};
use anneal_gates::operators::PauliSum;
use anneal_gates::state::{to_drive_basis, StateVector};

#[derive(Parser)]
#[command(name = "anneal-gates", version, about = "Annealing-based gate simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one gate (or a gate program) and print the populations.
    Simulate {
        #[arg(long, value_enum, default_value = "x-rotation", conflicts_with = "program")]
        gate: Gate,
        /// TOML gate program; runs its steps in order instead of a single gate.
        #[arg(long)]
        program: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        h_z: f64,
        #[arg(long = "anneal-time", short = 'T', default_value_t = 2000.0)]
        anneal_time: f64,
        /// Initial drive eigenstate, e.g. "+" or "+-".
        #[arg(long, default_value = "+")]
        initial: String,
        #[arg(long, default_value_t = 0.3)]
        a: f64,
        #[arg(long, default_value_t = 0.5)]
        b: f64,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        /// Also measure the relative phase the gate imprints.
        #[arg(long)]
        calibrate: bool,
    },
    /// Run the grid of an experiment config and write the CSV.
    Sweep {
        config: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Print the energy levels of a Hamiltonian.
    Spectrum {
        #[arg(long, value_enum, conflicts_with_all = ["terms", "entangled", "family"])]
        preset: Option<Preset>,
        /// Pauli terms such as "Z1*Z2: -1.0" (1-based qubits).
        #[arg(long, num_args = 1.., requires = "qubits")]
        terms: Vec<String>,
        #[arg(long)]
        qubits: Option<usize>,
        /// Signs α for −(Σ α_i σ_i^z)², e.g. "1,-1,1".
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        entangled: Vec<i8>,
        /// TOML family description; also checks the advertised ground states.
        #[arg(long, conflicts_with_all = ["terms", "entangled"])]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 0.3)]
        a: f64,
        #[arg(long, default_value_t = 0.5)]
        b: f64,
        #[arg(long)]
        json: bool,
    },
    /// Run one of the bundled experiment configs.
    Reproduce {
        #[arg(value_enum)]
        experiment: Experiment,
        /// Output directory (default: results/).
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Write a D-Wave problem document for one point of a `dwave` config.
    ExportDwave {
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        h_z: f64,
        /// Defaults to the config's only anneal time.
        #[arg(long = "anneal-time", short = 'T')]
        anneal_time: Option<f64>,
        #[arg(long, default_value_t = 2000)]
        num_reads: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Emulate a D-Wave problem document and print the shot counts.
    EmulateDwave {
        problem: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Gate {
    XRotation,
    Cnot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    XProblem,
    XLifted,
    CnotProblem,
    CnotLifted,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Fig5,
    Fig6,
    FigAppendixX,
    FigAppendixCnot,
    DwaveXrot,
    DwaveCnot,
}

impl Experiment {
    fn config(self) -> &'static str {
        match self {
            Experiment::Fig5 => include_str!("../../../configs/fig5.toml"),
            Experiment::Fig6 => include_str!("../../../configs/fig6.toml"),
            Experiment::FigAppendixX => include_str!("../../../configs/fig-appendix-x.toml"),
            Experiment::FigAppendixCnot => include_str!("../../../configs/fig-appendix-cnot.toml"),
            Experiment::DwaveXrot => include_str!("../../../configs/dwave-xrot.toml"),
            Experiment::DwaveCnot => include_str!("../../../configs/dwave-cnot.toml"),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            gate,
            program,
            h_z,
            anneal_time,
            initial,
            a,
            b,
            dt,
            calibrate,
        } => {
            let opts = EvolveOptions::with_dt(dt);
            if let Some(path) = program {
                return simulate_program(&path, &initial, &opts);
            }
            simulate(gate, h_z, anneal_time, &initial, a, b, &opts, calibrate)
        }
        Command::Sweep { config, output, dt } => {
            let mut cfg = ExperimentConfig::from_path(&config)?;
            if let Some(dt) = dt {
                cfg.dt = dt;
            }
            let path = output
                .or_else(|| cfg.output.clone())
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.name)));
            sweep(&cfg, &path)
        }
        Command::Spectrum {
            preset,
            terms,
            qubits,
            entangled,
            family,
            a,
            b,
            json,
        } => {
            let family = family.map(FamilyConfig::from_path).transpose()?;
            let h = if let Some(f) = &family {
                f.hamiltonian()?
            } else if let Some(p) = preset {
                let (pipe, lifted) = match p {
                    Preset::XProblem => (GatePipeline::x_rotation()?, false),
                    Preset::XLifted => (GatePipeline::x_rotation()?, true),
                    Preset::CnotProblem => (GatePipeline::cnot(a, b, [1.0, 1.0])?, false),
                    Preset::CnotLifted => (GatePipeline::cnot(a, b, [1.0, 1.0])?, true),
                };
                if lifted {
                    pipe.lifted_problem
                } else {
                    pipe.problem
                }
            } else if !entangled.is_empty() {
                two_state_entangled(&entangled)?
            } else if let Some(n) = qubits {
                PauliSum::parse_terms(n, &terms)?
            } else {
                return Err(Error::Config("give --preset, --family, --entangled or --terms with --qubits".into()));
            };
            let report = spectrum_report(&h)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("terms: {}", h.to_term_strings().join(", "));
                print!("{report}");
            }
            if let Some(f) = &family {
                let check = f.verify(1e-10)?;
                println!(
                    "advertised ground states: {} (dimension {} vs {}, projector distance {:?})",
                    if check.matches { "confirmed" } else { "MISMATCH" },
                    check.expected_dim,
                    check.ground_degeneracy,
                    check.projector_distance
                );
            }
            Ok(())
        }
        Command::Reproduce { experiment, output, dt } => {
            let mut cfg = ExperimentConfig::from_toml_str(experiment.config())?;
            if let Some(dt) = dt {
                cfg.dt = dt;
            }
            let dir = output.unwrap_or_else(|| PathBuf::from("results"));
            let path = dir.join(format!("{}.csv", cfg.name));
            sweep(&cfg, &path)
        }
        Command::ExportDwave {
            config,
            h_z,
            anneal_time,
            num_reads,
            output,
        } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let GateConfig::Dwave(d) = &cfg.gate else {
                return Err(Error::Config(format!("{} is not a dwave config", config.display())));
            };
            let t = match (anneal_time, cfg.grid.anneal_times.as_slice()) {
                (Some(t), _) => t,
                (None, [t]) => *t,
                _ => return Err(Error::Config("config has several anneal times; pass --anneal-time".into())),
            };
            let problem = DWaveProblem::from_schedule(&d.schedule(h_z, t)?, t, num_reads)?;
            anneal_gates::harness::export_dwave(&problem, &output)?;
            println!("wrote {}", output.display());
            Ok(())
        }
        Command::EmulateDwave { problem, seed, dt } => {
            let p = import_dwave(&problem)?;
            let em = emulate_dwave(&p, seed, &EvolveOptions::with_dt(dt))?;
            let n = p.qubit_count();
            let freq = em.frequencies(n);
            println!("{:>6}  {:>8}  {:>10}  {:>10}", "state", "counts", "frequency", "exact");
            for (i, (label, p)) in labeled(&em.populations, n, false).into_iter().enumerate() {
                println!("{label:>6}  {:>8}  {:>10.4}  {p:>10.6}", em.counts[&label], freq[i]);
            }
            println!("norm drift {:.2e}", em.norm_drift);
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    gate: Gate,
    h_z: f64,
    anneal_time: f64,
    initial: &str,
    a: f64,
    b: f64,
    opts: &EvolveOptions,
    calibrate: bool,
) -> Result<()> {
    let (pipeline, spec) = match gate {
        Gate::XRotation => (
            GatePipeline::x_rotation()?,
            GateSpec::XRotation { qubit: 0, h_z, anneal_time },
        ),
        Gate::Cnot => (
            GatePipeline::cnot(a, b, [1.0, 1.0])?,
            GateSpec::ControlledNot {
                control: 0,
                target: 1,
                a,
                b,
                h_z,
                anneal_time,
                catalyst: [1.0, 1.0],
            },
        ),
    };
    let n = pipeline.qubit_count();
    let psi0 = StateVector::from_drive_label(initial)?;
    let run = pipeline.run(h_z, anneal_time, &psi0, opts)?;
    let prediction = pipeline.predict(h_z, initial)?;
    let forward = run.forward.final_state.probabilities();
    let reverse: Vec<f64> = to_drive_basis(run.final_state()).iter().map(|c| c.norm_sqr()).collect();
    println!("forward part (computational basis)");
    print_table(&labeled(&forward, n, false), &prediction.forward);
    println!("reverse part (drive basis)");
    print_table(&labeled(&reverse, n, true), &prediction.reverse);
    println!(
        "norm drift {:.2e} / {:.2e}, {} steps",
        run.forward.norm_drift,
        run.reverse.norm_drift,
        run.forward.steps + run.reverse.steps
    );
    if calibrate {
        let cal = calibrate_relative_phase(&spec, opts)?;
        println!("relative phase θ' = {:.6}", cal.theta_prime);
        println!("compensation duration = {:.6}", cal.compensation);
        for (label, phase) in &cal.phases {
            println!("  arg ⟨{label}|ψ⟩ − arg ⟨input|ψ⟩ = {phase:.6}");
        }
    }
    Ok(())
}

fn print_table(simulated: &[(String, f64)], oracle: &[f64]) {
    println!("  {:>6}  {:>10}  {:>10}", "state", "simulated", "oracle");
    for ((label, p), o) in simulated.iter().zip(oracle) {
        println!("  {label:>6}  {p:>10.6}  {o:>10.6}");
    }
}

fn simulate_program(path: &Path, initial: &str, opts: &EvolveOptions) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let prog: GateProgram = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    let psi0 = if initial.chars().count() == prog.qubit_count {
        StateVector::from_drive_label(initial)?
    } else {
        StateVector::all_plus(prog.qubit_count)?
    };
    let report = run_program(&prog, &psi0, opts)?;
    let n = prog.qubit_count;
    let comp = report.final_state.probabilities();
    let drive: Vec<f64> = to_drive_basis(&report.final_state).iter().map(|c| c.norm_sqr()).collect();
    println!("{} steps, norm drift {:.2e}", prog.steps.len(), report.norm_drift);
    for ((l, p), (m, q)) in labeled(&comp, n, false).iter().zip(labeled(&drive, n, true).iter()) {
        println!("  {l:>6} {p:>10.6}    {m:>6} {q:>10.6}");
    }
    Ok(())
}

fn sweep(cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    let result: SweepResult = run_sweep(cfg)?;
    emit_csv(&result, path)?;
    let worst = result
        .rows
        .iter()
        .map(|r| r.max_deviation)
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    println!(
        "{}: {} points, max deviation from oracle {:.4}, max norm drift {:.2e}, wrote {}",
        cfg.name,
        result.rows.len(),
        worst,
        result.metadata.max_norm_drift,
        path.display()
    );
    for f in &result.metadata.failures {
        eprintln!("failed: {f}");
    }
    if result.metadata.failures.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(format!("{} grid points failed", result.metadata.failures.len())))
    }
}
