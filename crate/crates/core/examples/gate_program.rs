//! Runs a gate program: X-rotation, phase compensation from a calibration
//! run, idle, then a controlled-not.

use anneal_gates::evolution::{populations, EvolveOptions};
use anneal_gates::gates::{calibrate_relative_phase, run_program, GateProgram, GateSpec};
use anneal_gates::state::StateVector;

fn main() -> anneal_gates::error::Result<()> {
    let opts = EvolveOptions::default();
    let rotation = GateSpec::XRotation {
        qubit: 0,
        h_z: 1.0,
        anneal_time: 200.0,
    };
    let cal = calibrate_relative_phase(&rotation, &opts)?;
    println!("θ' = {:.6}, compensation {:.6}", cal.theta_prime, cal.compensation);

    let program = GateProgram {
        qubit_count: 2,
        idle_gap: 2.0,
        steps: vec![
            rotation,
            GateSpec::PhaseCompensation {
                qubit: 0,
                duration: cal.compensation,
            },
            GateSpec::Idle { periods: 1 },
            GateSpec::ControlledNot {
                control: 0,
                target: 1,
                a: 0.3,
                b: 0.5,
                h_z: 1.0,
                anneal_time: 2000.0,
                catalyst: [1.0, 1.0],
            },
        ],
    };
    println!("{}", toml::to_string(&program).expect("program serializes"));
    let report = run_program(&program, &StateVector::all_plus(2)?, &opts)?;
    for (label, p) in populations(&report.final_state) {
        println!("{label} {p:.6}");
    }
    println!("accumulated drift {:.2e}", report.norm_drift);
    Ok(())
}
