//! Pauli-sum operators on small registers and their exact spectra.
//!
//! A [`PauliSum`] is a real-weighted sum of Pauli strings, which keeps every
//! operator Hermitian by construction. Matrices are dense; registers are
//! limited to [`MAX_QUBITS`] qubits.
//!
//! Operator literals use 1-based qubit indices: `"Z1*Z2: -1.0"`,
//! `"X2: 0.5"`, `"I: 2"`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result, MAX_QUBITS};
use crate::state::{basis_label, check_register, qubit_bit, StateVector, C64};

/// Default absolute tolerance for grouping eigenvalues into a degenerate level.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// `self · other = phase · result`, phase a power of `i`.
    fn mul(self, other: Pauli) -> (C64, Pauli) {
        use Pauli::*;
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        match (self, other) {
            (I, p) | (p, I) => (one, p),
            (a, b) if a == b => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
            _ => unreachable!(),
        }
    }
}

/// Tensor product of single-qubit Paulis with a real weight.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    factors: Vec<Pauli>,
    coefficient: f64,
}

impl PauliString {
    pub fn new(factors: Vec<Pauli>, coefficient: f64) -> Result<Self> {
        check_register(factors.len())?;
        if !coefficient.is_finite() {
            return Err(Error::NonFinite(format!("Pauli coefficient {coefficient}")));
        }
        Ok(Self {
            factors,
            coefficient,
        })
    }

    pub fn identity(qubit_count: usize, coefficient: f64) -> Result<Self> {
        Self::new(vec![Pauli::I; qubit_count], coefficient)
    }

    /// Places `ops` (0-based qubit, Pauli) on an identity background.
    pub fn from_ops(qubit_count: usize, ops: &[(usize, Pauli)], coefficient: f64) -> Result<Self> {
        check_register(qubit_count)?;
        let mut factors = vec![Pauli::I; qubit_count];
        for &(q, p) in ops {
            if q >= qubit_count {
                return Err(Error::QubitIndex {
                    index: q,
                    qubits: qubit_count,
                });
            }
            factors[q] = p;
        }
        Self::new(factors, coefficient)
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn qubit_count(&self) -> usize {
        self.factors.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.factors.iter().all(|p| matches!(p, Pauli::I | Pauli::Z))
    }

    /// (x-mask, z-mask, number of Y factors) in basis-index bit layout.
    fn masks(&self) -> (usize, usize, usize) {
        let n = self.factors.len();
        let mut x = 0;
        let mut z = 0;
        let mut ys = 0;
        for (q, p) in self.factors.iter().enumerate() {
            let bit = qubit_bit(n, q);
            match p {
                Pauli::I => {}
                Pauli::X => x |= bit,
                Pauli::Z => z |= bit,
                Pauli::Y => {
                    x |= bit;
                    z |= bit;
                    ys += 1;
                }
            }
        }
        (x, z, ys)
    }

    fn label(&self) -> String {
        let ops: Vec<String> = self
            .factors
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(q, p)| format!("{}{}", p.symbol(), q + 1))
            .collect();
        if ops.is_empty() {
            "I".to_string()
        } else {
            ops.join("*")
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label(), self.coefficient)
    }
}

/// Hermitian operator `Σ_k c_k P_k` on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    qubit_count: usize,
    terms: Vec<PauliString>,
}

impl PauliSum {
    /// The zero operator.
    pub fn zero(qubit_count: usize) -> Result<Self> {
        check_register(qubit_count)?;
        Ok(Self {
            qubit_count,
            terms: Vec::new(),
        })
    }

    pub fn from_terms(qubit_count: usize, terms: Vec<PauliString>) -> Result<Self> {
        check_register(qubit_count)?;
        if let Some(bad) = terms.iter().find(|t| t.qubit_count() != qubit_count) {
            return Err(Error::RegisterMismatch {
                left: qubit_count,
                right: bad.qubit_count(),
            });
        }
        Ok(Self { qubit_count, terms })
    }

    pub fn identity(qubit_count: usize, coefficient: f64) -> Result<Self> {
        Self::from_terms(
            qubit_count,
            vec![PauliString::identity(qubit_count, coefficient)?],
        )
    }

    /// `coefficient · P_qubit` (0-based qubit).
    pub fn single(qubit_count: usize, qubit: usize, pauli: Pauli, coefficient: f64) -> Result<Self> {
        Self::from_terms(
            qubit_count,
            vec![PauliString::from_ops(qubit_count, &[(qubit, pauli)], coefficient)?],
        )
    }

    pub fn sigma_x(qubit_count: usize, qubit: usize) -> Result<Self> {
        Self::single(qubit_count, qubit, Pauli::X, 1.0)
    }

    pub fn sigma_z(qubit_count: usize, qubit: usize) -> Result<Self> {
        Self::single(qubit_count, qubit, Pauli::Z, 1.0)
    }

    /// `Σ_j w_j σ_j^x`.
    pub fn transverse_field(weights: &[f64]) -> Result<Self> {
        Self::weighted_singles(weights, Pauli::X)
    }

    /// `Σ_j w_j σ_j^z`.
    pub fn longitudinal_field(weights: &[f64]) -> Result<Self> {
        Self::weighted_singles(weights, Pauli::Z)
    }

    fn weighted_singles(weights: &[f64], pauli: Pauli) -> Result<Self> {
        let n = weights.len();
        let terms = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(q, &w)| PauliString::from_ops(n, &[(q, pauli)], w))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, terms)
    }

    /// `c · σ_i^z σ_j^z` (0-based qubits).
    pub fn zz(qubit_count: usize, i: usize, j: usize, coefficient: f64) -> Result<Self> {
        Self::from_terms(
            qubit_count,
            vec![PauliString::from_ops(
                qubit_count,
                &[(i, Pauli::Z), (j, Pauli::Z)],
                coefficient,
            )?],
        )
    }

    /// Parses term literals such as `"Z1*Z2: -1.0"` (1-based qubits).
    pub fn parse_terms<S: AsRef<str>>(qubit_count: usize, terms: &[S]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|t| parse_term(qubit_count, t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(qubit_count, parsed)
    }

    pub fn to_term_strings(&self) -> Vec<String> {
        self.terms.iter().map(|t| t.to_string()).collect()
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        1 << self.qubit_count
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(PauliString::is_diagonal)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            qubit_count: self.qubit_count,
            terms: self
                .terms
                .iter()
                .map(|t| PauliString {
                    factors: t.factors.clone(),
                    coefficient: t.coefficient * factor,
                })
                .collect(),
        }
    }

    pub fn try_add(&self, other: &PauliSum) -> Result<Self> {
        self.check_same_register(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            qubit_count: self.qubit_count,
            terms,
        })
        .map(|s| s.simplified())
    }

    /// Operator product. Fails if the result is not Hermitian, i.e. if
    /// imaginary phases from anticommuting factors do not cancel.
    pub fn try_mul(&self, other: &PauliSum) -> Result<Self> {
        self.check_same_register(other)?;
        let mut acc: BTreeMap<Vec<Pauli>, C64> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut phase = C64::new(a.coefficient * b.coefficient, 0.0);
                let factors: Vec<Pauli> = a
                    .factors
                    .iter()
                    .zip(&b.factors)
                    .map(|(&p, &q)| {
                        let (ph, r) = p.mul(q);
                        phase *= ph;
                        r
                    })
                    .collect();
                *acc.entry(factors).or_insert(C64::new(0.0, 0.0)) += phase;
            }
        }
        let mut terms = Vec::with_capacity(acc.len());
        for (factors, c) in acc {
            if c.im.abs() > 1e-12 * (1.0 + c.re.abs()) {
                return Err(Error::NonHermitian(format!(
                    "product term {} has imaginary weight {}",
                    PauliString {
                        factors,
                        coefficient: 0.0
                    }
                    .label(),
                    c.im
                )));
            }
            if c.re != 0.0 {
                terms.push(PauliString::new(factors, c.re)?);
            }
        }
        Self::from_terms(self.qubit_count, terms)
    }

    pub fn square(&self) -> Result<Self> {
        self.try_mul(self)
    }

    /// Merges repeated strings and drops exact zeros. Term order follows
    /// first appearance.
    pub fn simplified(&self) -> Self {
        let mut order: Vec<Vec<Pauli>> = Vec::new();
        let mut acc: BTreeMap<Vec<Pauli>, f64> = BTreeMap::new();
        for t in &self.terms {
            let e = acc.entry(t.factors.clone()).or_insert_with(|| {
                order.push(t.factors.clone());
                0.0
            });
            *e += t.coefficient;
        }
        let terms = order
            .into_iter()
            .filter_map(|f| {
                let c = acc[&f];
                (c != 0.0).then_some(PauliString {
                    factors: f,
                    coefficient: c,
                })
            })
            .collect();
        Self {
            qubit_count: self.qubit_count,
            terms,
        }
    }

    fn check_same_register(&self, other: &PauliSum) -> Result<()> {
        if self.qubit_count != other.qubit_count {
            return Err(Error::RegisterMismatch {
                left: self.qubit_count,
                right: other.qubit_count,
            });
        }
        Ok(())
    }

    /// Dense `2^n × 2^n` matrix (Kronecker expansion of every term).
    pub fn to_matrix(&self) -> Result<DMatrix<C64>> {
        if self.qubit_count > MAX_QUBITS {
            return Err(Error::RegisterSize(self.qubit_count));
        }
        let dim = self.dim();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for t in &self.terms {
            if !t.coefficient.is_finite() {
                return Err(Error::NonFinite(format!("coefficient of {}", t.label())));
            }
            let (x, z, ys) = t.masks();
            let base = C64::new(t.coefficient, 0.0) * C64::new(0.0, 1.0).powu(ys as u32);
            for col in 0..dim {
                let sign = if (col & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                m[(col ^ x, col)] += base * sign;
            }
        }
        Ok(m)
    }

    /// Row-major dense matrix, the layout used by the integrator.
    pub(crate) fn to_row_major(&self) -> Result<Vec<C64>> {
        let m = self.to_matrix()?;
        let dim = m.nrows();
        let mut out = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                out.push(m[(r, c)]);
            }
        }
        Ok(out)
    }

    /// `trace / 2^n`, which is the weight of the identity string.
    pub fn identity_weight(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.factors.iter().all(|p| *p == Pauli::I))
            .map(|t| t.coefficient)
            .sum()
    }

    /// `self |ψ⟩` without forming the matrix.
    pub fn apply(&self, state: &StateVector) -> Result<Vec<C64>> {
        if state.qubit_count() != self.qubit_count {
            return Err(Error::RegisterMismatch {
                left: self.qubit_count,
                right: state.qubit_count(),
            });
        }
        let amps = state.amplitudes();
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        for t in &self.terms {
            let (x, z, ys) = t.masks();
            let base = C64::new(t.coefficient, 0.0) * C64::new(0.0, 1.0).powu(ys as u32);
            for (col, a) in amps.iter().enumerate() {
                let sign = if (col & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                out[col ^ x] += base * sign * a;
            }
        }
        Ok(out)
    }

    /// `⟨ψ|self|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        let h = self.apply(state)?;
        Ok(state
            .amplitudes()
            .iter()
            .zip(&h)
            .map(|(a, b)| (a.conj() * b).re)
            .sum())
    }

    /// Diagonal entries in the computational basis.
    pub fn diagonal(&self) -> Vec<f64> {
        let dim = self.dim();
        let mut d = vec![0.0; dim];
        for t in self.terms.iter().filter(|t| t.is_diagonal()) {
            let (_, z, _) = t.masks();
            for (idx, v) in d.iter_mut().enumerate() {
                let sign = if (idx & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                *v += t.coefficient * sign;
            }
        }
        d
    }

    /// Embeds an operator on `self.qubit_count()` qubits into a larger
    /// register, mapping local qubit `k` to `targets[k]`.
    pub fn embed(&self, qubit_count: usize, targets: &[usize]) -> Result<Self> {
        if targets.len() != self.qubit_count {
            return Err(Error::RegisterMismatch {
                left: self.qubit_count,
                right: targets.len(),
            });
        }
        let mut seen = vec![false; qubit_count];
        for &t in targets {
            if t >= qubit_count || std::mem::replace(&mut seen[t], true) {
                return Err(Error::QubitIndex {
                    index: t,
                    qubits: qubit_count,
                });
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let ops: Vec<(usize, Pauli)> = t
                    .factors
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| (targets[k], p))
                    .collect();
                PauliString::from_ops(qubit_count, &ops, t.coefficient)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(qubit_count, terms)
    }

    /// Exact spectrum; see [`eigen_decompose`].
    pub fn spectrum(&self, tol: f64) -> Result<Spectrum> {
        eigen_decompose(self, tol)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;

    /// Panics on register mismatch; use [`PauliSum::try_add`] for a `Result`.
    fn add(self, rhs: &PauliSum) -> PauliSum {
        self.try_add(rhs).expect("register mismatch in PauliSum addition")
    }
}

impl Sub for &PauliSum {
    type Output = PauliSum;

    fn sub(self, rhs: &PauliSum) -> PauliSum {
        self + &rhs.scaled(-1.0)
    }
}

impl Neg for &PauliSum {
    type Output = PauliSum;

    fn neg(self) -> PauliSum {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &PauliSum {
    type Output = PauliSum;

    fn mul(self, rhs: f64) -> PauliSum {
        self.scaled(rhs)
    }
}

fn parse_term(qubit_count: usize, text: &str) -> Result<PauliString> {
    let (ops, coeff) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("term {text:?} is missing ': coefficient'")))?;
    let coefficient = f64::from_str(coeff.trim())
        .map_err(|e| Error::Parse(format!("coefficient in {text:?}: {e}")))?;
    let ops = ops.trim();
    let mut placed = Vec::new();
    if ops != "I" && ops != "1" {
        for factor in ops.split('*') {
            let factor = factor.trim();
            let mut chars = factor.chars();
            let pauli = match chars.next() {
                Some('X' | 'x') => Pauli::X,
                Some('Y' | 'y') => Pauli::Y,
                Some('Z' | 'z') => Pauli::Z,
                Some('I' | 'i') => Pauli::I,
                _ => return Err(Error::Parse(format!("bad Pauli factor {factor:?}"))),
            };
            let index: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad qubit index in {factor:?}")))?;
            if index == 0 || index > qubit_count {
                return Err(Error::QubitIndex {
                    index,
                    qubits: qubit_count,
                });
            }
            if placed.iter().any(|(q, _)| *q == index - 1) {
                return Err(Error::Parse(format!("qubit {index} repeated in {text:?}")));
            }
            placed.push((index - 1, pauli));
        }
    }
    PauliString::from_ops(qubit_count, &placed, coefficient)
}

/// Eigenvalues (ascending) with orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
    pub ground_degeneracy: usize,
    pub degeneracy_tolerance: f64,
}

impl Spectrum {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Groups of indices whose eigenvalues lie within the tolerance of the
    /// first member of the group.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut levels: Vec<Vec<usize>> = Vec::new();
        for (i, &e) in self.eigenvalues.iter().enumerate() {
            match levels.last_mut() {
                Some(level) if (e - self.eigenvalues[level[0]]).abs() <= self.degeneracy_tolerance => {
                    level.push(i)
                }
                _ => levels.push(vec![i]),
            }
        }
        levels
    }

    /// `⟨b|P|b⟩` for the projector onto the eigenvectors in `indices`.
    pub fn projector_diagonal(&self, indices: &[usize]) -> Vec<f64> {
        let dim = self.eigenvalues.len();
        let mut d = vec![0.0; dim];
        for &i in indices {
            for (b, a) in self.eigenvectors[i].amplitudes().iter().enumerate() {
                d[b] += a.norm_sqr();
            }
        }
        d
    }
}

/// Exact diagonalization. `tol` decides which eigenvalues count as
/// degenerate with the minimum.
pub fn eigen_decompose(op: &PauliSum, tol: f64) -> Result<Spectrum> {
    let m = op.to_matrix()?;
    let dim = m.nrows();
    let eig = m
        .try_symmetric_eigen(1e-14, 10_000 + 100 * dim)
        .ok_or(Error::Eigensolver(dim))?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if eigenvalues.iter().any(|e| !e.is_finite()) {
        return Err(Error::Eigensolver(dim));
    }
    let eigenvectors = order
        .iter()
        .map(|&i| {
            let col: Vec<C64> = eig.eigenvectors.column(i).iter().copied().collect();
            StateVector::normalized(op.qubit_count(), fix_phase(col))
        })
        .collect::<Result<Vec<_>>>()?;
    let ground_degeneracy = eigenvalues
        .iter()
        .filter(|&&e| e - eigenvalues[0] <= tol)
        .count();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        ground_degeneracy,
        degeneracy_tolerance: tol,
    })
}

/// Rotates a vector so its largest-magnitude component is real and positive
/// (first such index on ties).
pub(crate) fn fix_phase(mut v: Vec<C64>) -> Vec<C64> {
    let max = v.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return v;
    }
    let pivot = v
        .iter()
        .position(|a| a.norm() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    let phase = v[pivot].conj() / v[pivot].norm();
    v.iter_mut().for_each(|a| *a *= phase);
    v
}

/// Orthonormal basis of the ground eigenspace (eigenvalues within `tol` of
/// the minimum).
///
/// When the ground space is spanned by computational basis states, those
/// basis states are returned in ascending index order; otherwise the
/// eigensolver's vectors are returned.
pub fn ground_space(op: &PauliSum, tol: f64) -> Result<Vec<StateVector>> {
    let spectrum = eigen_decompose(op, tol)?;
    let indices: Vec<usize> = (0..spectrum.ground_degeneracy).collect();
    let diag = spectrum.projector_diagonal(&indices);
    let aligned: Vec<usize> = diag
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 1.0 - 1e-9)
        .map(|(b, _)| b)
        .collect();
    if aligned.len() == spectrum.ground_degeneracy {
        return aligned
            .into_iter()
            .map(|b| StateVector::basis(op.qubit_count(), b))
            .collect();
    }
    Ok(spectrum.eigenvectors[..spectrum.ground_degeneracy].to_vec())
}

/// Frobenius norm of a dense matrix.
pub fn frobenius_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Human-readable dominant labels of a vector (components with weight
/// above `threshold`).
pub fn dominant_labels(v: &StateVector, threshold: f64) -> Vec<String> {
    v.amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > threshold)
        .map(|(b, _)| basis_label(v.qubit_count(), b))
        .collect()
}
