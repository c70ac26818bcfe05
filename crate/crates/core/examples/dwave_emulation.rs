//! Builds the single-qubit D-Wave problem, writes it as JSON, reads it back
//! and emulates it with shot noise.

use std::collections::BTreeMap;

use anneal_gates::evolution::EvolveOptions;
use anneal_gates::harness::{emulate_dwave, end_slope_prediction, export_dwave, import_dwave, DWaveProblem};
use anneal_gates::schedules::{dwave, DWaveSchedule, PiecewiseLinear};

fn main() -> anneal_gates::error::Result<()> {
    let anneal_time = 200.0;
    let dir = std::env::temp_dir();
    let opts = EvolveOptions::default();
    for h_z in [-1.0, 0.0, 0.5, 1.0] {
        let g = PiecewiseLinear::new(vec![(0.0, 0.0), (anneal_time / 2.0, h_z), (anneal_time, 0.0)])?;
        let spec = DWaveSchedule::linear(g, vec![1.0], BTreeMap::new())?;
        let problem = DWaveProblem::from_schedule(&spec, anneal_time, 2000)?;
        let path = dir.join(format!("dwave-xrot-{h_z}.json"));
        export_dwave(&problem, &path)?;
        let back = import_dwave(&path)?;
        assert_eq!(back, problem);
        let em = emulate_dwave(&back, 11, &opts)?;
        let oracle = end_slope_prediction(&dwave(&spec, anneal_time)?)?;
        println!(
            "h_z = {h_z:>4}: counts {:?}, exact ↓ {:.4}, predicted ↓ {:.4}",
            em.counts, em.populations[1], oracle[1]
        );
        let _ = std::fs::remove_file(path);
    }
    Ok(())
}
