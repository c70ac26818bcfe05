//! Controlled-not with a = 0.3, b = 0.5. Control |−⟩ leaves the target
//! alone; control |+⟩ rotates it by an amount set by h_z.

use anneal_gates::evolution::EvolveOptions;
use anneal_gates::gates::GatePipeline;
use anneal_gates::state::{drive_label, to_drive_basis, StateVector};

fn main() -> anneal_gates::error::Result<()> {
    let pipeline = GatePipeline::cnot(0.3, 0.5, [1.0, 1.0])?;
    let opts = EvolveOptions::default();
    let anneal_time = 2000.0;
    for h_z in [0.0, 1.0] {
        println!("h_z = {h_z}");
        for input in ["++", "+-", "-+", "--"] {
            let psi0 = StateVector::from_drive_label(input)?;
            let run = pipeline.run(h_z, anneal_time, &psi0, &opts)?;
            let out = to_drive_basis(run.final_state());
            let pred = pipeline.predict(h_z, input)?;
            let line: Vec<String> = out
                .iter()
                .enumerate()
                .map(|(i, a)| format!("{} {:.4} ({:.4})", drive_label(2, i), a.norm_sqr(), pred.reverse[i]))
                .collect();
            println!("  {input} -> {}", line.join("  "));
        }
    }
    Ok(())
}
