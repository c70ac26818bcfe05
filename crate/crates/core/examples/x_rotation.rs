//! Single-qubit X-rotation: forward part into the degenerate problem, then
//! the reverse part back to the drive basis, compared with the oracle.

use anneal_gates::evolution::EvolveOptions;
use anneal_gates::gates::GatePipeline;
use anneal_gates::state::{to_drive_basis, StateVector};

fn main() -> anneal_gates::error::Result<()> {
    let pipeline = GatePipeline::x_rotation()?;
    let psi0 = StateVector::from_drive_label("+")?;
    let opts = EvolveOptions::default();
    println!("{:>6} {:>9} {:>9} {:>9} {:>9}", "h_z", "p(↓)", "oracle", "p(+)", "oracle");
    for h_z in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let run = pipeline.run(h_z, 2000.0, &psi0, &opts)?;
        let pred = pipeline.predict(h_z, "+")?;
        let down = run.forward.final_state.probabilities()[1];
        let plus = to_drive_basis(run.final_state())[0].norm_sqr();
        println!(
            "{h_z:>6.2} {down:>9.5} {:>9.5} {plus:>9.5} {:>9.5}",
            pred.forward[1], pred.reverse[0]
        );
    }
    Ok(())
}
