//! Register state vectors.
//!
//! Basis convention used everywhere in the crate: amplitude index `0` is
//! `|↑↑…↑⟩`, qubit 0 is the most significant bit, and a `0` bit means `|↑⟩`,
//! the `+1` eigenstate of `σ^z`. `|±⟩ = (|↑⟩ ± |↓⟩)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result, MAX_QUBITS};

pub type C64 = Complex64;

/// Norm tolerance enforced when a state is constructed from user input.
pub const NORM_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubit_count: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Builds a normalized state; fails if the norm is off by more than 1e-8.
    pub fn new(qubit_count: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let state = Self::unchecked(qubit_count, amplitudes)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Builds a state from arbitrary amplitudes, rescaling to unit norm.
    pub fn normalized(qubit_count: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let mut state = Self::unchecked(qubit_count, amplitudes)?;
        let norm = state.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        state.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(state)
    }

    /// Shape checks only. Used for integrator output, where drift is
    /// measured and reported instead of being rejected.
    pub(crate) fn unchecked(qubit_count: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_register(qubit_count)?;
        if amplitudes.len() != 1 << qubit_count {
            return Err(Error::Parse(format!(
                "{} amplitudes supplied for a {qubit_count}-qubit register",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state amplitude".into()));
        }
        Ok(Self {
            qubit_count,
            amplitudes,
        })
    }

    pub fn basis(qubit_count: usize, index: usize) -> Result<Self> {
        check_register(qubit_count)?;
        let dim = 1 << qubit_count;
        if index >= dim {
            return Err(Error::QubitIndex {
                index,
                qubits: qubit_count,
            });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            qubit_count,
            amplitudes,
        })
    }

    /// Parses a computational label such as `"↑↓"` or `"ud"`.
    pub fn from_basis_label(label: &str) -> Result<Self> {
        let index = parse_basis_label(label)?;
        Self::basis(label.chars().count(), index)
    }

    /// Tensor product of `|+⟩`/`|−⟩` factors, e.g. `"+-"`.
    pub fn from_drive_label(label: &str) -> Result<Self> {
        let factors = label
            .chars()
            .map(|c| match c {
                '+' => Ok([C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)]),
                '-' | '−' => Ok([C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0)]),
                other => Err(Error::Parse(format!("unknown drive label character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::product(&factors)
    }

    /// `|++…+⟩`, the ground state of a uniform transverse field.
    pub fn all_plus(qubit_count: usize) -> Result<Self> {
        Self::from_drive_label(&"+".repeat(qubit_count))
    }

    /// Tensor product of single-qubit states given as `(⟨↑|ψ⟩, ⟨↓|ψ⟩)`.
    pub fn product(factors: &[[C64; 2]]) -> Result<Self> {
        let n = factors.len();
        check_register(n)?;
        let mut amplitudes = vec![C64::new(1.0, 0.0)];
        for f in factors {
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| [a * f[0], a * f[1]])
                .collect();
        }
        Self::normalized(n, amplitudes)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨other|self⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.qubit_count != other.qubit_count {
            return Err(Error::RegisterMismatch {
                left: self.qubit_count,
                right: other.qubit_count,
            });
        }
        Ok(other
            .amplitudes
            .iter()
            .zip(&self.amplitudes)
            .map(|(b, a)| b.conj() * a)
            .sum())
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn scaled(&self, factor: C64) -> StateVector {
        StateVector {
            qubit_count: self.qubit_count,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Largest entrywise difference, ignoring nothing (global phase counts).
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({:.6}{:+.6}i)|{}⟩",
                a.re,
                a.im,
                basis_label(self.qubit_count, i)
            )?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub(crate) fn check_register(qubit_count: usize) -> Result<()> {
    if qubit_count == 0 || qubit_count > MAX_QUBITS {
        return Err(Error::RegisterSize(qubit_count));
    }
    Ok(())
}

/// Bit of `qubit` inside a basis index (qubit 0 is most significant).
#[inline]
pub fn qubit_bit(qubit_count: usize, qubit: usize) -> usize {
    1 << (qubit_count - 1 - qubit)
}

/// `"↑↓…"` label for a computational basis index.
pub fn basis_label(qubit_count: usize, index: usize) -> String {
    (0..qubit_count)
        .map(|q| {
            if index & qubit_bit(qubit_count, q) == 0 {
                '↑'
            } else {
                '↓'
            }
        })
        .collect()
}

/// ASCII form used in CSV headers: `up_down`.
pub fn basis_label_ascii(qubit_count: usize, index: usize) -> String {
    (0..qubit_count)
        .map(|q| {
            if index & qubit_bit(qubit_count, q) == 0 {
                "up"
            } else {
                "down"
            }
        })
        .collect::<Vec<_>>()
        .join("_")
}

/// `"+−"` label for a product of `σ^x` eigenstates, same bit layout
/// (`0` ↔ `|+⟩`).
pub fn drive_label(qubit_count: usize, index: usize) -> String {
    (0..qubit_count)
        .map(|q| {
            if index & qubit_bit(qubit_count, q) == 0 {
                '+'
            } else {
                '-'
            }
        })
        .collect()
}

pub fn drive_label_ascii(qubit_count: usize, index: usize) -> String {
    (0..qubit_count)
        .map(|q| {
            if index & qubit_bit(qubit_count, q) == 0 {
                "plus"
            } else {
                "minus"
            }
        })
        .collect::<Vec<_>>()
        .join("_")
}

/// Inverse of [`basis_label`]; also accepts `u`/`d` and `0`/`1`.
pub fn parse_basis_label(label: &str) -> Result<usize> {
    let n = label.chars().count();
    check_register(n)?;
    label.chars().enumerate().try_fold(0usize, |acc, (q, c)| {
        let down = match c {
            '↑' | 'u' | 'U' | '0' => false,
            '↓' | 'd' | 'D' | '1' => true,
            other => return Err(Error::Parse(format!("unknown basis character {other:?}"))),
        };
        Ok(if down { acc | qubit_bit(n, q) } else { acc })
    })
}

pub fn parse_drive_label(label: &str) -> Result<usize> {
    let n = label.chars().count();
    check_register(n)?;
    label.chars().enumerate().try_fold(0usize, |acc, (q, c)| match c {
        '+' => Ok(acc),
        '-' | '−' => Ok(acc | qubit_bit(n, q)),
        other => Err(Error::Parse(format!("unknown drive label character {other:?}"))),
    })
}

/// Amplitudes of `state` in the `σ^x` product basis (index layout as in
/// [`drive_label`]). This is a Walsh-Hadamard transform.
pub fn to_drive_basis(state: &StateVector) -> Vec<C64> {
    let mut out = state.amplitudes.clone();
    let dim = out.len();
    let mut half = 1;
    while half < dim {
        for block in (0..dim).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (out[i], out[i + half]);
                out[i] = (a + b) * FRAC_1_SQRT_2;
                out[i + half] = (a - b) * FRAC_1_SQRT_2;
            }
        }
        half *= 2;
    }
    out
}
