//! First-order degenerate perturbation theory on a two-fold ground space.
//!
//! With `H = H0 + V` and `H0` having a doubly degenerate ground space
//! `{|1⟩, |2⟩}`, the first-order energies and zeroth-order states follow from
//! the 2×2 secular problem `[[V11, V12], [V21, V22]]`. This is the analytic
//! reference the gate simulations are checked against.

use crate::error::{Error, Result};
use crate::operators::{ground_space, PauliSum};
use crate::state::{StateVector, C64};

/// Two orthogonal ground kets and the perturbation's matrix elements between
/// them. `V21 = conj(V12)` is implied.
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneratePair {
    pub kets: Option<[StateVector; 2]>,
    pub v11: f64,
    pub v22: f64,
    pub v12: C64,
}

impl DegeneratePair {
    /// Matrix elements only, no kets attached.
    pub fn from_elements(v11: f64, v22: f64, v12: C64) -> Result<Self> {
        if !v11.is_finite() || !v22.is_finite() || !v12.re.is_finite() || !v12.im.is_finite() {
            return Err(Error::NonFinite("perturbation matrix element".into()));
        }
        Ok(Self {
            kets: None,
            v11,
            v22,
            v12,
        })
    }

    /// Evaluates `⟨n|V|m⟩` on the given kets.
    pub fn from_operator(k1: StateVector, k2: StateVector, v: &PauliSum) -> Result<Self> {
        if k1.inner(&k2)?.norm() > 1e-10 {
            return Err(Error::GateParameters("degenerate kets are not orthogonal".into()));
        }
        let element = |bra: &StateVector, ket: &StateVector| -> Result<C64> {
            let vk = StateVector::unchecked(ket.qubit_count(), v.apply(ket)?)?;
            vk.inner(bra)
        };
        let v11 = element(&k1, &k1)?.re;
        let v22 = element(&k2, &k2)?.re;
        let v12 = element(&k1, &k2)?;
        let mut pair = Self::from_elements(v11, v22, v12)?;
        pair.kets = Some([k1, k2]);
        Ok(pair)
    }

    pub fn v21(&self) -> C64 {
        self.v12.conj()
    }
}

/// First-order energies and the corresponding superpositions
/// `c_{±,1}|1⟩ + c_{±,2}|2⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationResult {
    pub e_plus: f64,
    pub e_minus: f64,
    pub c_plus: [C64; 2],
    pub c_minus: [C64; 2],
    pub kets: Option<[StateVector; 2]>,
}

impl PerturbationResult {
    /// `(|c_{+,1}|², |c_{+,2}|²)`.
    pub fn populations_plus(&self) -> [f64; 2] {
        [self.c_plus[0].norm_sqr(), self.c_plus[1].norm_sqr()]
    }

    /// `(|c_{−,1}|², |c_{−,2}|²)`; the lower branch.
    pub fn populations_minus(&self) -> [f64; 2] {
        [self.c_minus[0].norm_sqr(), self.c_minus[1].norm_sqr()]
    }

    /// Full state `c_{±,1}|1⟩ + c_{±,2}|2⟩` for the chosen branch, when kets
    /// are attached.
    pub fn state(&self, upper: bool) -> Option<StateVector> {
        let [k1, k2] = self.kets.as_ref()?;
        let c = if upper { self.c_plus } else { self.c_minus };
        let amps = k1
            .amplitudes()
            .iter()
            .zip(k2.amplitudes())
            .map(|(a, b)| a * c[0] + b * c[1])
            .collect();
        StateVector::normalized(k1.qubit_count(), amps).ok()
    }
}

/// Solves the 2×2 secular problem.
///
/// `E± = ½{(V11+V22) ± √((V11−V22)² + 4|V12|²)}` with `c₁/c₂ = V12/(E−V11)`.
/// The phase is fixed by making `c₁` real and non-negative (or `c₂` when
/// `c₁ = 0`).
pub fn first_order(pair: &DegeneratePair) -> Result<PerturbationResult> {
    let (v11, v22, v12) = (pair.v11, pair.v22, pair.v12);
    let split = ((v11 - v22).powi(2) + 4.0 * v12.norm_sqr()).sqrt();
    if split == 0.0 {
        return Err(Error::FullyDegenerate);
    }
    let mean = 0.5 * (v11 + v22);
    let e_plus = mean + 0.5 * split;
    let e_minus = mean - 0.5 * split;
    let vector = |e: f64| -> [C64; 2] {
        // both rows of (V − E)c = 0; pick the better conditioned one
        let r1 = [v12, C64::new(e - v11, 0.0)];
        let r2 = [C64::new(e - v22, 0.0), pair.v21()];
        let n1 = r1[0].norm_sqr() + r1[1].norm_sqr();
        let n2 = r2[0].norm_sqr() + r2[1].norm_sqr();
        let (c, n) = if n1 >= n2 { (r1, n1) } else { (r2, n2) };
        let n = n.sqrt();
        let pivot = if c[0].norm() > 1e-300 { c[0] } else { c[1] };
        let phase = pivot.conj() / pivot.norm();
        [c[0] * phase / n, c[1] * phase / n]
    };
    Ok(PerturbationResult {
        e_plus,
        e_minus,
        c_plus: vector(e_plus),
        c_minus: vector(e_minus),
        kets: pair.kets.clone(),
    })
}

/// Builds the pair from the ground space of `h0` (which must be exactly
/// two-fold degenerate) and delegates to [`first_order`].
///
/// Ising `h0` yields computational basis kets in ascending index order, so
/// `|1⟩` is the state with fewer/lower `↓` bits.
pub fn generic_first_order(h0: &PauliSum, v: &PauliSum, tol: f64) -> Result<PerturbationResult> {
    if h0.qubit_count() != v.qubit_count() {
        return Err(Error::RegisterMismatch {
            left: h0.qubit_count(),
            right: v.qubit_count(),
        });
    }
    let mut ground = ground_space(h0, tol)?;
    if ground.len() != 2 {
        return Err(Error::GroundDegeneracy {
            expected: 2,
            found: ground.len(),
        });
    }
    let k2 = ground.pop().expect("two kets");
    let k1 = ground.pop().expect("two kets");
    first_order(&DegeneratePair::from_operator(k1, k2, v)?)
}

/// Closed-form single-qubit populations for `V = −σ^x + h_z σ^z` on the
/// `{|↑⟩, |↓⟩}` ground space: `(c²_{+,1}, c²_{+,2}, c²_{−,1}, c²_{−,2})` with
/// `c²_{±,1} = 1/(1 + (±√(1+h_z²) − h_z)²)`.
pub fn xrot_populations(h_z: f64) -> (f64, f64, f64, f64) {
    let r = (1.0 + h_z * h_z).sqrt();
    let up_plus = 1.0 / (1.0 + (r - h_z).powi(2));
    let up_minus = 1.0 / (1.0 + (-r - h_z).powi(2));
    (up_plus, 1.0 - up_plus, up_minus, 1.0 - up_minus)
}

/// Closed-form two-qubit populations with `K = 2a(1+h_z) ± √((2a(1+h_z))² + 1)`:
/// returns `((c²_{+,1}, c²_{+,2}), (c²_{−,1}, c²_{−,2}))`, `c²_1 = 1/(K²+1)`.
///
/// As written, `a` plays two roles: the problem parameter and the weight of
/// the second qubit in the catalytic field `σ₁^z + a σ₂^z`, whose amplitude
/// is `1 + h_z`. Here `|1⟩ = |↓↓⟩` and `|2⟩ = |↓↑⟩`.
pub fn cnot_populations(a: f64, h_z: f64) -> ((f64, f64), (f64, f64)) {
    let x = 2.0 * a * (1.0 + h_z);
    let r = (x * x + 1.0).sqrt();
    let branch = |k: f64| {
        let c1 = 1.0 / (k * k + 1.0);
        (c1, 1.0 - c1)
    };
    (branch(x + r), branch(x - r))
}
