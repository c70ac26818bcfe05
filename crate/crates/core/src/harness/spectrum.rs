//! Level listings with basis-state labels.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::operators::{eigen_decompose, PauliSum, DEFAULT_DEGENERACY_TOL};
use crate::state::basis_label;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub degeneracy: usize,
    /// Computational states carrying weight in this level, in index order.
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub qubit_count: usize,
    pub levels: Vec<Level>,
}

impl SpectrumReport {
    pub fn ground_degeneracy(&self) -> usize {
        self.levels[0].degeneracy
    }
}

/// Ascending levels. Diagonal operators are read off their diagonal, so
/// energies are exact; others go through the eigensolver.
pub fn spectrum_report(h: &PauliSum) -> Result<SpectrumReport> {
    let n = h.qubit_count();
    let mut levels: Vec<Level> = Vec::new();
    if h.is_diagonal() {
        let diag = h.diagonal();
        let mut order: Vec<usize> = (0..diag.len()).collect();
        order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]).then(a.cmp(&b)));
        for i in order {
            match levels.last_mut() {
                Some(l) if (diag[i] - l.energy).abs() <= DEFAULT_DEGENERACY_TOL => {
                    l.degeneracy += 1;
                    l.labels.push(basis_label(n, i));
                }
                _ => levels.push(Level {
                    energy: diag[i],
                    degeneracy: 1,
                    labels: vec![basis_label(n, i)],
                }),
            }
        }
        for l in &mut levels {
            l.labels.sort_by_key(|s| crate::state::parse_basis_label(s).unwrap_or(usize::MAX));
        }
    } else {
        let spectrum = eigen_decompose(h, DEFAULT_DEGENERACY_TOL)?;
        for group in spectrum.levels() {
            let weight = spectrum.projector_diagonal(&group);
            levels.push(Level {
                energy: spectrum.eigenvalues[group[0]],
                degeneracy: group.len(),
                labels: weight
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| **w > 1e-9)
                    .map(|(b, _)| basis_label(n, b))
                    .collect(),
            });
        }
    }
    Ok(SpectrumReport { qubit_count: n, levels })
}

impl fmt::Display for SpectrumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>14}  {:>4}  states", "energy", "deg")?;
        for (k, l) in self.levels.iter().enumerate() {
            let tag = if k == 0 { "  (ground)" } else { "" };
            // keep rounding noise from printing as -0
            let e = if l.energy.abs() < 1e-12 { 0.0 } else { l.energy };
            writeln!(f, "{e:>14.9}  {:>4}  {}{tag}", l.degeneracy, l.labels.join(" "))?;
        }
        Ok(())
    }
}
