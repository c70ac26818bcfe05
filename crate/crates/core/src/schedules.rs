//! Time-dependent Hamiltonians built from operator blocks and knot-list
//! waveforms.
//!
//! `H(t) = Σ_i w_i(t) · B_i` where each `w_i` is a product of
//! piecewise-linear functions of `t` on `[0, T]`. Products appear only in
//! the D-Wave form, where `B(s)` multiplies `g(t)`.

use std::collections::BTreeMap;
use std::io::Read;

use crate::error::{Error, Result};
use crate::operators::PauliSum;

/// Continuous piecewise-linear function given by `(time, value)` knots.
/// Outside the knot range the end values are held constant.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Schedule("waveform needs at least one knot".into()));
        }
        if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::NonFinite("waveform knot".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Schedule(
                "waveform knot times must be strictly increasing".into(),
            ));
        }
        Ok(Self { knots })
    }

    pub fn constant(value: f64) -> Self {
        Self {
            knots: vec![(0.0, value)],
        }
    }

    /// Straight line from `(0, start)` to `(end_time, end)`.
    pub fn ramp(end_time: f64, start: f64, end: f64) -> Result<Self> {
        Self::new(vec![(0.0, start), (end_time, end)])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn value(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 {
            return k[0].1;
        }
        let last = k[k.len() - 1];
        if t >= last.0 {
            return last.1;
        }
        // first knot with time > t; segment is [idx-1, idx]
        let idx = k.partition_point(|(kt, _)| *kt <= t);
        let (t0, v0) = k[idx - 1];
        let (t1, v1) = k[idx];
        if t == t0 {
            return v0;
        }
        let frac = (t - t0) / (t1 - t0);
        (1.0 - frac) * v0 + frac * v1
    }

    /// Slope of the segment ending at `t` (zero outside the knot range).
    pub fn slope_before(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 || t > k[k.len() - 1].0 {
            return 0.0;
        }
        let idx = k.partition_point(|(kt, _)| *kt < t);
        let (t0, v0) = k[idx - 1];
        let (t1, v1) = k[idx];
        (v1 - v0) / (t1 - t0)
    }

    /// Rescales the time axis: knot `(x, v)` becomes `(x · factor, v)`.
    /// Used to turn `s`-domain tables into `t`-domain ones.
    pub fn scale_time(&self, factor: f64) -> Result<Self> {
        Self::new(self.knots.iter().map(|&(x, v)| (x * factor, v)).collect())
    }

    /// Reads `x,value` rows. Blank lines, `#` comments and a non-numeric
    /// header row are skipped.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut knots = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() < 2 {
                if record.iter().all(str::is_empty) {
                    continue;
                }
                return Err(Error::Parse(format!("knot row {} has fewer than 2 columns", line + 1)));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(x), Ok(v)) => knots.push((x, v)),
                _ if line == 0 && knots.is_empty() => continue,
                _ => {
                    return Err(Error::Parse(format!(
                        "knot row {} is not numeric: {:?}",
                        line + 1,
                        record
                    )))
                }
            }
        }
        Self::new(knots)
    }
}

/// Product of piecewise-linear factors.
#[derive(Clone, Debug, PartialEq)]
pub struct Waveform {
    factors: Vec<PiecewiseLinear>,
}

impl Waveform {
    pub fn constant(value: f64) -> Self {
        Self::from(PiecewiseLinear::constant(value))
    }

    pub fn product(factors: Vec<PiecewiseLinear>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[PiecewiseLinear] {
        &self.factors
    }

    pub fn value(&self, t: f64) -> f64 {
        self.factors.iter().map(|f| f.value(t)).product()
    }

    /// Left derivative at `t` by the product rule.
    pub fn slope_before(&self, t: f64) -> f64 {
        (0..self.factors.len())
            .map(|i| {
                self.factors
                    .iter()
                    .enumerate()
                    .map(|(j, f)| if i == j { f.slope_before(t) } else { f.value(t) })
                    .product::<f64>()
            })
            .sum()
    }

    fn knot_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.factors.iter().flat_map(|f| f.knots().iter().map(|k| k.0))
    }
}

impl From<PiecewiseLinear> for Waveform {
    fn from(pl: PiecewiseLinear) -> Self {
        Self { factors: vec![pl] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub operator: PauliSum,
    pub waveform: Waveform,
}

/// `H(t) = Σ w_i(t) B_i` on `[0, total_time]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSchedule {
    qubit_count: usize,
    total_time: f64,
    blocks: Vec<Block>,
}

impl ControlSchedule {
    pub fn new(total_time: f64, blocks: Vec<Block>) -> Result<Self> {
        if !(total_time > 0.0) || !total_time.is_finite() {
            return Err(Error::Schedule(format!(
                "total time must be positive and finite, got {total_time}"
            )));
        }
        let first = blocks
            .first()
            .ok_or_else(|| Error::Schedule("schedule has no blocks".into()))?;
        let n = first.operator.qubit_count();
        if let Some(b) = blocks.iter().find(|b| b.operator.qubit_count() != n) {
            return Err(Error::RegisterMismatch {
                left: n,
                right: b.operator.qubit_count(),
            });
        }
        Ok(Self {
            qubit_count: n,
            total_time,
            blocks,
        })
    }

    /// Time-independent `H` held for `duration`.
    pub fn constant(op: PauliSum, duration: f64) -> Result<Self> {
        Self::new(
            duration,
            vec![Block {
                operator: op,
                waveform: Waveform::constant(1.0),
            }],
        )
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Waveform values at `t`, no domain check.
    pub fn coefficients(&self, t: f64) -> Vec<f64> {
        self.blocks.iter().map(|b| b.waveform.value(t)).collect()
    }

    /// `H(t)` as a simplified Pauli sum.
    pub fn sample(&self, t: f64) -> Result<PauliSum> {
        if !(0.0..=self.total_time).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                total: self.total_time,
            });
        }
        let mut acc = PauliSum::zero(self.qubit_count)?;
        for (b, w) in self.blocks.iter().zip(self.coefficients(t)) {
            if w != 0.0 {
                acc = acc.try_add(&b.operator.scaled(w))?;
            }
        }
        Ok(acc.simplified())
    }

    /// `dH/dt` just before `T`.
    pub fn end_slope(&self) -> Result<PauliSum> {
        let mut acc = PauliSum::zero(self.qubit_count)?;
        for b in &self.blocks {
            let w = b.waveform.slope_before(self.total_time);
            if w != 0.0 {
                acc = acc.try_add(&b.operator.scaled(w))?;
            }
        }
        Ok(acc.simplified())
    }

    /// Waveform knots strictly inside `(0, T)`, sorted and deduplicated.
    /// The integrator never lets a step straddle one of these.
    pub fn interior_knots(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|b| b.waveform.knot_times())
            .filter(|&t| t > 0.0 && t < self.total_time)
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }
}

fn check_pair(a: &PauliSum, b: &PauliSum) -> Result<()> {
    if a.qubit_count() != b.qubit_count() {
        return Err(Error::RegisterMismatch {
            left: a.qubit_count(),
            right: b.qubit_count(),
        });
    }
    Ok(())
}

/// `H(t) = (1 − t/T) H_D + (t/T) H_P`.
pub fn conventional(driver: &PauliSum, problem: &PauliSum, total_time: f64) -> Result<ControlSchedule> {
    check_pair(driver, problem)?;
    ControlSchedule::new(
        total_time,
        vec![
            Block {
                operator: driver.clone(),
                waveform: PiecewiseLinear::ramp(total_time, 1.0, 0.0)?.into(),
            },
            Block {
                operator: problem.clone(),
                waveform: PiecewiseLinear::ramp(total_time, 0.0, 1.0)?.into(),
            },
        ],
    )
}

/// Conventional anneal plus a catalytic pulse: `(t/T) h_z H_C` for
/// `t < T/2` and `(1 − t/T) h_z H_C` afterwards. `H(0) = H_D` and
/// `H(T) = H_P` for every `h_z`.
pub fn forward(
    driver: &PauliSum,
    problem: &PauliSum,
    catalyst: &PauliSum,
    h_z: f64,
    total_time: f64,
) -> Result<ControlSchedule> {
    check_pair(driver, catalyst)?;
    if !h_z.is_finite() {
        return Err(Error::NonFinite(format!("h_z = {h_z}")));
    }
    let mut sched = conventional(driver, problem, total_time)?;
    let pulse = PiecewiseLinear::new(vec![
        (0.0, 0.0),
        (0.5 * total_time, 0.5 * h_z),
        (total_time, 0.0),
    ])?;
    sched.blocks.push(Block {
        operator: catalyst.clone(),
        waveform: pulse.into(),
    });
    Ok(sched)
}

/// `H(t) = (t/T) H_D + (1 − t/T) H̃_P`: from the lifted problem back to
/// the driver.
pub fn reverse(driver: &PauliSum, lifted_problem: &PauliSum, total_time: f64) -> Result<ControlSchedule> {
    check_pair(driver, lifted_problem)?;
    ControlSchedule::new(
        total_time,
        vec![
            Block {
                operator: lifted_problem.clone(),
                waveform: PiecewiseLinear::ramp(total_time, 1.0, 0.0)?.into(),
            },
            Block {
                operator: driver.clone(),
                waveform: PiecewiseLinear::ramp(total_time, 0.0, 1.0)?.into(),
            },
        ],
    )
}

/// Device-style schedule
/// `H = −A(s)/2 Σσ^x + B(s)/2 (g(t) Σ h_j σ_j^z + Σ_{i>j} J_ij σ_i^z σ_j^z)`,
/// `s = t/T`.
///
/// `a` and `b` are tables over `s ∈ [0, 1]`; `g` is a table over `t`.
/// Couplings are keyed by 0-based `(i, j)` with `i > j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DWaveSchedule {
    pub a: PiecewiseLinear,
    pub b: PiecewiseLinear,
    pub g: PiecewiseLinear,
    pub h: Vec<f64>,
    pub j: BTreeMap<(usize, usize), f64>,
}

impl DWaveSchedule {
    /// Linear `A(s) = 1 − s`, `B(s) = s`.
    pub fn linear(g: PiecewiseLinear, h: Vec<f64>, j: BTreeMap<(usize, usize), f64>) -> Result<Self> {
        Ok(Self {
            a: PiecewiseLinear::ramp(1.0, 1.0, 0.0)?,
            b: PiecewiseLinear::ramp(1.0, 0.0, 1.0)?,
            g,
            h,
            j,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.h.len()
    }

    pub fn validate(&self, total_time: f64) -> Result<()> {
        const BOUNDARY_TOL: f64 = 1e-12;
        if self.a.value(1.0).abs() > BOUNDARY_TOL {
            return Err(Error::Schedule(format!("A(1) = {} must vanish", self.a.value(1.0))));
        }
        if self.b.value(0.0).abs() > BOUNDARY_TOL {
            return Err(Error::Schedule(format!("B(0) = {} must vanish", self.b.value(0.0))));
        }
        let cover = |pl: &PiecewiseLinear, end: f64, name: &str| {
            let k = pl.knots();
            let (lo, hi) = (k[0].0, k[k.len() - 1].0);
            if lo > 0.0 || hi < end * (1.0 - 1e-12) {
                return Err(Error::Schedule(format!(
                    "{name} knots span [{lo}, {hi}], need [0, {end}]"
                )));
            }
            Ok(())
        };
        cover(&self.a, 1.0, "A(s)")?;
        cover(&self.b, 1.0, "B(s)")?;
        cover(&self.g, total_time, "g(t)")?;
        if self.h.iter().any(|v| !v.is_finite()) || self.j.values().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("D-Wave field or coupling".into()));
        }
        for &(i, j) in self.j.keys() {
            if i <= j || i >= self.h.len() {
                return Err(Error::Schedule(format!(
                    "coupling ({}, {}) must satisfy i > j within {} qubits",
                    i + 1,
                    j + 1,
                    self.h.len()
                )));
            }
        }
        Ok(())
    }

    /// `Σ h_j σ_j^z`.
    pub fn field_operator(&self) -> Result<PauliSum> {
        PauliSum::longitudinal_field(&self.h)
    }

    /// `Σ_{i>j} J_ij σ_i^z σ_j^z`.
    pub fn coupling_operator(&self) -> Result<PauliSum> {
        let n = self.h.len();
        let mut op = PauliSum::zero(n)?;
        for (&(i, j), &v) in &self.j {
            op = op.try_add(&PauliSum::zz(n, i, j, v)?)?;
        }
        Ok(op)
    }
}

pub fn dwave(spec: &DWaveSchedule, total_time: f64) -> Result<ControlSchedule> {
    spec.validate(total_time)?;
    let n = spec.qubit_count();
    let a_t = spec.a.scale_time(total_time)?;
    let b_t = spec.b.scale_time(total_time)?;
    let transverse = PauliSum::transverse_field(&vec![-0.5; n])?;
    let mut blocks = vec![
        Block {
            operator: transverse,
            waveform: a_t.into(),
        },
        Block {
            operator: spec.field_operator()?.scaled(0.5),
            waveform: Waveform::product(vec![b_t.clone(), spec.g.clone()]),
        },
    ];
    let couplings = spec.coupling_operator()?;
    if !couplings.terms().is_empty() {
        blocks.push(Block {
            operator: couplings.scaled(0.5),
            waveform: b_t.into(),
        });
    }
    ControlSchedule::new(total_time, blocks)
}
