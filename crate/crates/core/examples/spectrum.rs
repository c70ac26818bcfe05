//! Level structure of the controlled-not problem Hamiltonian before and
//! after the degeneracy is lifted.

use anneal_gates::gates::GatePipeline;
use anneal_gates::harness::spectrum_report;

fn main() -> anneal_gates::error::Result<()> {
    let p = GatePipeline::cnot(0.3, 0.5, [1.0, 1.0])?;
    println!("problem:\n{}", spectrum_report(&p.problem)?);
    println!("lifted:\n{}", spectrum_report(&p.lifted_problem)?);
    println!("driver:\n{}", spectrum_report(&p.driver)?);
    Ok(())
}
