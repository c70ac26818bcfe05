//! Z-rotation as an exact phase and as an evolved longitudinal field, and
//! an idle period under the drive Hamiltonian.

use anneal_gates::evolution::EvolveOptions;
use anneal_gates::gates::{idle, z_rotation, z_rotation_evolved};
use anneal_gates::state::StateVector;

fn main() -> anneal_gates::error::Result<()> {
    let psi = StateVector::from_drive_label("+")?;
    let opts = EvolveOptions::default();
    let t = 0.4;
    let exact = z_rotation(&psi, t, 0)?;
    let evolved = z_rotation_evolved(&psi, t, 0, &opts)?;
    println!("exact   {:?}", exact.amplitudes());
    println!("evolved {:?}", evolved.final_state.amplitudes());
    println!("max |Δ| = {:.2e}", exact.max_abs_diff(&evolved.final_state));

    // drive eigenstates only pick up a global phase over whole periods
    let after = idle(&exact, 3, 2.0, &opts)?;
    println!("idle fidelity {:.12}", after.final_state.fidelity(&exact)?);
    Ok(())
}
