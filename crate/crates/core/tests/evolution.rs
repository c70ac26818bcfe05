use anneal_gates::evolution::{evolve_with, overlap, sample_measurements, EvolveOptions, Integrator};
use anneal_gates::operators::{Pauli, PauliSum};
use anneal_gates::schedules::{conventional, ControlSchedule};
use anneal_gates::state::{StateVector, C64};
use proptest::prelude::*;

fn one_qubit_anneal(total: f64) -> ControlSchedule {
    let driver = PauliSum::single(1, 0, Pauli::X, -1.0).unwrap();
    let problem = PauliSum::parse_terms(1, &["Z1: 0.7", "X1: 0.2"]).unwrap();
    conventional(&driver, &problem, total).unwrap()
}

fn final_state(sched: &ControlSchedule, dt: f64, integrator: Integrator) -> StateVector {
    let opts = EvolveOptions {
        dt,
        integrator,
        drift_abort: 1e-3,
    };
    evolve_with(sched, &StateVector::from_drive_label("+").unwrap(), &opts)
        .unwrap()
        .final_state
}

fn error_ratio(integrator: Integrator) -> f64 {
    let sched = one_qubit_anneal(2.0);
    let reference = final_state(&sched, 0.2 / 8.0, integrator);
    let coarse = final_state(&sched, 0.2, integrator).max_abs_diff(&reference);
    let fine = final_state(&sched, 0.1, integrator).max_abs_diff(&reference);
    coarse / fine
}

#[test]
fn magnus_is_fourth_order() {
    let r = error_ratio(Integrator::CommutatorFreeMagnus4);
    assert!((r - 16.0).abs() <= 4.0, "ratio {r}");
}

#[test]
fn rk4_is_fourth_order() {
    let r = error_ratio(Integrator::Rk4);
    assert!((r - 16.0).abs() <= 4.0, "ratio {r}");
}

#[test]
fn integrators_agree() {
    let sched = one_qubit_anneal(20.0);
    let a = final_state(&sched, 0.01, Integrator::CommutatorFreeMagnus4);
    let b = final_state(&sched, 0.01, Integrator::Rk4);
    assert!(a.max_abs_diff(&b) < 1e-8);
}

#[test]
fn default_step_stays_inside_the_drift_budget() {
    let driver = PauliSum::transverse_field(&[-1.0, -0.5]).unwrap();
    let problem = PauliSum::parse_terms(2, &["I: 1", "Z1: 1", "Z2: 0.3", "Z1*Z2: 0.3"]).unwrap();
    let sched = conventional(&driver, &problem, 500.0).unwrap();
    let r = evolve_with(&sched, &StateVector::all_plus(2).unwrap(), &EvolveOptions::default()).unwrap();
    assert!(r.norm_drift <= 1e-8, "drift {}", r.norm_drift);
    assert_eq!(r.steps, 50_000);
}

#[test]
fn oversized_step_aborts_on_drift() {
    let sched = one_qubit_anneal(200.0);
    let opts = EvolveOptions {
        dt: 2.0,
        integrator: Integrator::Rk4,
        drift_abort: 1e-6,
    };
    let err = evolve_with(&sched, &StateVector::from_drive_label("+").unwrap(), &opts).unwrap_err();
    assert!(err.to_string().contains("reduce dt"), "{err}");
}

#[test]
fn shot_frequencies_approach_probabilities() {
    let psi = StateVector::normalized(1, vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
    let counts = sample_measurements(&psi, 20_000, 5).unwrap();
    let up = counts["↑"] as f64 / 20_000.0;
    assert!((up - 0.36).abs() < 5.0 * (0.36f64 * 0.64 / 20_000.0).sqrt());
    assert_eq!(counts, sample_measurements(&psi, 20_000, 5).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_is_linear(theta in 0.0f64..std::f64::consts::PI, phi in -3.0f64..3.0) {
        let driver = PauliSum::transverse_field(&[-1.0, -0.5]).unwrap();
        let problem = PauliSum::parse_terms(2, &["Z1: 1", "Z1*Z2: 0.4"]).unwrap();
        let sched = conventional(&driver, &problem, 3.0).unwrap();
        let opts = EvolveOptions::with_dt(0.01);
        let e0 = StateVector::basis(2, 0).unwrap();
        let e3 = StateVector::basis(2, 3).unwrap();
        let (ca, cb) = (C64::new(theta.cos(), 0.0), C64::from_polar(theta.sin(), phi));
        let amps: Vec<C64> = e0.amplitudes().iter().zip(e3.amplitudes()).map(|(x, y)| ca * x + cb * y).collect();
        let mixed = StateVector::new(2, amps).unwrap();
        let u0 = evolve_with(&sched, &e0, &opts).unwrap().final_state;
        let u3 = evolve_with(&sched, &e3, &opts).unwrap().final_state;
        let um = evolve_with(&sched, &mixed, &opts).unwrap().final_state;
        for i in 0..4 {
            let expect = ca * u0.amplitudes()[i] + cb * u3.amplitudes()[i];
            prop_assert!((um.amplitudes()[i] - expect).norm() < 1e-12);
        }
        prop_assert!(overlap(&u0, &u3).unwrap().norm() < 1e-10);
    }
}
