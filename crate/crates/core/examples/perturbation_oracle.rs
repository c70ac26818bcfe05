//! First-order degenerate perturbation theory: the closed forms and the
//! generic solver on an explicit operator pair.

use anneal_gates::gates::GatePipeline;
use anneal_gates::operators::DEFAULT_DEGENERACY_TOL;
use anneal_gates::perturbation::{cnot_populations, generic_first_order, xrot_populations};

fn main() -> anneal_gates::error::Result<()> {
    let x = GatePipeline::x_rotation()?;
    let c = GatePipeline::cnot(0.3, 0.5, [1.0, 0.3])?;
    // the closed form takes the catalyst σ₁^z + a σ₂^z at amplitude 1 + h_z
    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "h_z", "xrot ↓", "generic", "cnot ↓↓", "generic");
    for k in -4..=6 {
        let h_z = 0.5 * f64::from(k);
        let (.., down) = xrot_populations(h_z);
        let v = x.driver.try_add(&x.catalyst.scaled(h_z))?;
        let g = generic_first_order(&x.problem, &v, DEFAULT_DEGENERACY_TOL)?;
        let (_, (dd, _)) = cnot_populations(0.3, h_z);
        let v2 = c.driver.try_add(&c.catalyst.scaled(1.0 + h_z))?;
        let g2 = generic_first_order(&c.problem, &v2, DEFAULT_DEGENERACY_TOL)?;
        // generic kets are ordered by basis index: ↓↑ then ↓↓
        println!(
            "{h_z:>5.1} {down:>10.6} {:>10.6} {dd:>10.6} {:>10.6}",
            g.populations_minus()[1],
            g2.populations_minus()[1]
        );
    }
    Ok(())
}
