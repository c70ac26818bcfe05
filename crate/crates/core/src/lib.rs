//! Gate operations built from quantum annealing with degenerate problem
//! Hamiltonians.
//!
//! A gate runs in two parts. The forward part anneals from the transverse
//! field into a problem Hamiltonian with a degenerate ground space while a
//! longitudinal "catalytic" pulse of height `h_z` steers which superposition
//! of the degenerate states is reached. The reverse part anneals from a
//! lifted (non-degenerate) version of the problem back to the transverse
//! field, mapping computational states onto drive eigenstates.
//!
//! Conventions: `ħ = 1`; qubit 0 is the most significant bit of a basis
//! index; bit value 0 is `↑` (the `+1` eigenstate of `σ^z`) in the
//! computational basis and `+` in the drive basis.
//!
//! ```
//! use anneal_gates::evolution::EvolveOptions;
//! use anneal_gates::gates::GatePipeline;
//! use anneal_gates::state::StateVector;
//!
//! let pipeline = GatePipeline::x_rotation().unwrap();
//! let psi0 = StateVector::from_drive_label("+").unwrap();
//! let run = pipeline.run(1.0, 200.0, &psi0, &EvolveOptions::with_dt(0.02)).unwrap();
//! let predicted = pipeline.predict(1.0, "+").unwrap();
//! let p_down = run.forward.final_state.probabilities()[1];
//! assert!((p_down - predicted.forward[1]).abs() < 0.01);
//! ```

pub mod error;
pub mod evolution;
pub mod families;
pub mod gates;
pub mod harness;
pub mod operators;
pub mod perturbation;
pub mod schedules;
pub mod state;
