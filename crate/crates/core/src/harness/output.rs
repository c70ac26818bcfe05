//! CSV emission with a JSON metadata sidecar.
//!
//! Columns: `h_z,T,initial_state`, then `pop_<state>_forward` for every
//! computational state (`up_down`, …), `pop_<state>_reverse` for every drive
//! state (`plus_minus`, …) when the sweep has a reverse part, the matching
//! `oracle_…` columns, and `max_deviation`. Failed points leave the numeric
//! cells empty. Run metadata (dt, version, timestamps, failures) goes to
//! `<path>.meta.json` so the CSV itself is reproducible byte for byte.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{io_err, Result};
use crate::state::{basis_label_ascii, drive_label_ascii};

use super::sweep::SweepResult;

pub fn header(result: &SweepResult) -> Vec<String> {
    let n = result.qubit_count;
    let dim = 1usize << n;
    let mut cols: Vec<String> = vec!["h_z".into(), "T".into(), "initial_state".into()];
    for prefix in ["pop", "oracle"] {
        cols.extend((0..dim).map(|i| format!("{prefix}_{}_forward", basis_label_ascii(n, i))));
        if result.has_reverse {
            cols.extend((0..dim).map(|i| format!("{prefix}_{}_reverse", drive_label_ascii(n, i))));
        }
    }
    cols.push("max_deviation".into());
    cols
}

fn cell(v: f64) -> String {
    if v.is_finite() {
        v.to_string()
    } else {
        String::new()
    }
}

pub fn write_csv<W: Write>(result: &SweepResult, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header(result))?;
    let n = result.qubit_count;
    for row in &result.rows {
        let label = crate::state::parse_drive_label(&row.initial_state)
            .map(|i| drive_label_ascii(n, i))
            .unwrap_or_else(|_| row.initial_state.clone());
        let mut rec = vec![cell(row.h_z), cell(row.anneal_time), label];
        rec.extend(row.forward.iter().copied().map(cell));
        rec.extend(row.reverse.iter().copied().map(cell));
        rec.extend(row.oracle_forward.iter().copied().map(cell));
        rec.extend(row.oracle_reverse.iter().copied().map(cell));
        rec.push(cell(row.max_deviation));
        w.write_record(rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes the CSV and its metadata sidecar, creating parent directories.
pub fn emit_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    write_csv(result, std::io::BufWriter::new(file))?;
    let meta = meta_path(path);
    let mut text = serde_json::to_string_pretty(&result.metadata)?;
    text.push('\n');
    std::fs::write(&meta, text).map_err(io_err(&meta))
}
