//! A small X-rotation sweep from an inline config, written as CSV.

use anneal_gates::harness::{emit_csv, run_sweep, ExperimentConfig};

const CONFIG: &str = r#"
name = "xrot-short"
dt = 0.02

[gate]
kind = "x_rotation"

[grid]
h_z = { values = [-1.0, 0.0, 1.0] }
anneal_times = [20.0, 200.0]
initial_states = ["+", "-"]
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    let result = run_sweep(&cfg)?;
    for row in &result.rows {
        println!(
            "h_z = {:>4}, T = {:>5}, {}: max deviation {:.4}",
            row.h_z, row.anneal_time, row.initial_state, row.max_deviation
        );
    }
    let path = std::env::temp_dir().join("xrot-short.csv");
    emit_csv(&result, &path)?;
    print!("{}", std::fs::read_to_string(&path)?);
    Ok(())
}
