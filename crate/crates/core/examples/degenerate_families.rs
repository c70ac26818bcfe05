//! Hamiltonians with prescribed degenerate ground spaces, checked against
//! their advertised ground bases.

use anneal_gates::families::{
    combined_family, combined_ground_states, entangled_ground_states, product_ground_states, two_state_entangled,
    two_state_product, verify_ground_space, PartitionSpec,
};

fn main() -> anneal_gates::error::Result<()> {
    let alphas = [1, -1, 1];
    let h = two_state_entangled(&alphas)?;
    let r = verify_ground_space(&h, &entangled_ground_states(&alphas)?, 1e-9)?;
    println!("entangled {alphas:?}: {r:?}");

    let spec = PartitionSpec::new(vec![vec![0, 1], vec![2, 3]], vec![1, 1, -1, 1])?;
    let h = two_state_product(&spec)?;
    let r = verify_ground_space(&h, &product_ground_states(&spec)?, 1e-9)?;
    println!("product   {:?}: {r:?}", spec.domains);

    let spec = PartitionSpec::new(vec![vec![0, 1], vec![2, 3], vec![4]], vec![1, -1, 1, 1, -1])?;
    let h = combined_family(&spec)?;
    let r = verify_ground_space(&h, &combined_ground_states(&spec)?, 1e-9)?;
    println!("combined  {:?}: {r:?}", spec.domains);
    Ok(())
}
