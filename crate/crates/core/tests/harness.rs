use std::collections::BTreeMap;

use anneal_gates::harness::{
    emit_csv, export_dwave, import_dwave, run_sweep, spectrum_report, DWaveProblem, ExperimentConfig, SweepMetadata,
    SweepResult,
};
use anneal_gates::gates::GatePipeline;
use proptest::prelude::*;

const SMALL: &str = r#"
name = "small"
dt = 0.05

[gate]
kind = "controlled_not"
a = 0.3
b = 0.5

[grid]
h_z = { values = [1.0, -0.5] }
anneal_times = [10.0]
initial_states = ["-+", "++"]
"#;

fn csv_without_meta(cfg: &ExperimentConfig, dir: &std::path::Path, name: &str) -> String {
    let path = dir.join(name);
    emit_csv(&run_sweep(cfg).unwrap(), &path).unwrap();
    assert!(dir.join(format!("{name}.meta.json")).exists());
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn sweeps_are_ordered_and_reproducible() {
    let cfg = ExperimentConfig::from_toml_str(SMALL).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let a = csv_without_meta(&cfg, dir.path(), "a.csv");
    let b = csv_without_meta(&cfg, dir.path(), "b.csv");
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 5);
    let keys: Vec<String> = lines[1..].iter().map(|l| l.split(',').take(3).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(keys, ["-0.5,10,plus_plus", "-0.5,10,minus_plus", "1,10,plus_plus", "1,10,minus_plus"]);
}

#[test]
fn rows_are_normalized() {
    let cfg = ExperimentConfig::from_toml_str(SMALL).unwrap();
    for row in run_sweep(&cfg).unwrap().rows {
        for (pops, tol) in [
            (&row.forward, 1e-8),
            (&row.reverse, 1e-8),
            (&row.oracle_forward, 1e-12),
            (&row.oracle_reverse, 1e-12),
        ] {
            assert!((pops.iter().sum::<f64>() - 1.0).abs() < tol);
        }
    }
}

#[test]
fn fig5_schema() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/fig5.toml")).unwrap();
    let mut cfg = ExperimentConfig::from_toml_str(&text).unwrap();
    cfg.grid.anneal_times = vec![5.0];
    cfg.dt = 0.05;
    let dir = tempfile::tempdir().unwrap();
    let csv = csv_without_meta(&cfg, dir.path(), "fig5.csv");
    assert_eq!(
        csv.lines().next().unwrap(),
        "h_z,T,initial_state,pop_up_forward,pop_down_forward,pop_plus_reverse,pop_minus_reverse,\
         oracle_up_forward,oracle_down_forward,oracle_plus_reverse,oracle_minus_reverse,max_deviation"
    );
    assert_eq!(csv.lines().count(), 18);
}

#[test]
fn empty_sweep_writes_only_the_header() {
    let result = SweepResult {
        qubit_count: 1,
        has_reverse: true,
        rows: Vec::new(),
        metadata: SweepMetadata {
            name: "empty".into(),
            dt: 0.01,
            version: "0".into(),
            started_unix: 0,
            finished_unix: 0,
            points: 0,
            max_norm_drift: 0.0,
            failures: Vec::new(),
        },
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/empty.csv");
    emit_csv(&result, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("h_z,T,initial_state,"));
}

#[test]
fn failing_points_leave_empty_cells() {
    let cfg = ExperimentConfig::from_toml_str(
        r#"
name = "broken"
[gate]
kind = "dwave"
h = [1.0]
g_knots = [[0.0, 0.0, 0.0], [0.5, 0.0, 1.0], [1.0, 0.0, 0.0]]
a_schedule = "no-such-table.csv"
[grid]
h_z = { values = [0.5, -0.5] }
anneal_times = [10.0]
initial_states = ["+"]
"#,
    )
    .unwrap();
    let result = run_sweep(&cfg).unwrap();
    assert_eq!(result.metadata.failures.len(), 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    emit_csv(&result, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "-0.5,10,plus,,,,,");
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bad.csv.meta.json")).unwrap()).unwrap();
    assert!(meta["failures"][0].as_str().unwrap().contains("no-such-table.csv"));
}

#[test]
fn missing_output_directory_is_reported_with_its_path() {
    let cfg = ExperimentConfig::from_toml_str(SMALL).unwrap();
    let result = run_sweep(&cfg).unwrap();
    let file = tempfile::NamedTempFile::new().unwrap();
    let path = file.path().join("under-a-file.csv");
    let err = emit_csv(&result, &path).unwrap_err().to_string();
    assert!(err.contains("under-a-file") || err.contains(&file.path().display().to_string()), "{err}");
}

#[test]
fn bundled_configs_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    for name in ["fig5", "fig6", "fig-appendix-x", "fig-appendix-cnot", "dwave-xrot", "dwave-cnot"] {
        let cfg = ExperimentConfig::from_path(format!("{dir}/{name}.toml")).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.name, name);
    }
}

#[test]
fn cnot_spectra() {
    let p = GatePipeline::cnot(0.3, 0.5, [1.0, 1.0]).unwrap();
    let r = spectrum_report(&p.problem).unwrap();
    assert_eq!(r.ground_degeneracy(), 2);
    assert_eq!(r.levels[0].labels, ["↓↑", "↓↓"]);
    let r = spectrum_report(&p.lifted_problem).unwrap();
    assert_eq!(r.levels.len(), 4);
    assert!(r.levels.iter().all(|l| l.degeneracy == 1));
}

fn problem() -> impl Strategy<Value = DWaveProblem> {
    (1usize..=4).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
        let m = pairs.len();
        (
            prop::collection::vec(-1.0f64..=1.0, n),
            prop::collection::vec(prop::option::of(-1.0f64..=1.0), m),
            prop::collection::vec((0.01f64..1.0, -3.0f64..3.0), 0..4),
            1.0f64..500.0,
            1usize..10_000,
        )
            .prop_map(move |(h, js, inner, t, reads)| {
                let j: BTreeMap<(usize, usize), f64> = pairs
                    .iter()
                    .zip(js)
                    .filter_map(|(&p, v)| v.map(|v| (p, v)))
                    .collect();
                let mut fracs: Vec<(f64, f64)> = inner;
                fracs.sort_by(|a, b| a.0.total_cmp(&b.0));
                fracs.dedup_by(|a, b| a.0 == b.0);
                let mut knots = vec![[0.0, 0.0]];
                knots.extend(fracs.into_iter().map(|(f, g)| [f * t, g]));
                knots.push([t, 1.0]);
                DWaveProblem {
                    h,
                    j,
                    anneal_schedule: knots,
                    annealing_time: t,
                    num_reads: reads,
                }
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dwave_documents_round_trip(p in problem()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        export_dwave(&p, &path).unwrap();
        prop_assert_eq!(import_dwave(&path).unwrap(), p);
    }
}
