//! Ising Hamiltonians with prescribed degenerate ground spaces.
//!
//! Squared sums are expanded into a constant plus `ZZ` couplings when the
//! operator is built. Sites are 0-based; signs `α_i` are `±1`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{eigen_decompose, PauliSum, DEFAULT_DEGENERACY_TOL};
use crate::state::{qubit_bit, StateVector, C64};

/// Disjoint site domains covering `0..N` with a sign per site.
///
/// For [`two_state_product`] the domains are `[A, B]`; for
/// [`combined_family`] the last domain carries the field term and the others
/// are squared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub domains: Vec<Vec<usize>>,
    pub alphas: Vec<i8>,
}

impl PartitionSpec {
    pub fn new(domains: Vec<Vec<usize>>, alphas: Vec<i8>) -> Result<Self> {
        let spec = Self { domains, alphas };
        spec.validate()?;
        Ok(spec)
    }

    pub fn site_count(&self) -> usize {
        self.alphas.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.alphas.len();
        if let Some(a) = self.alphas.iter().find(|a| a.abs() != 1) {
            return Err(Error::Partition(format!("sign {a} is not ±1")));
        }
        let mut seen = vec![false; n];
        for d in &self.domains {
            for &i in d {
                if i >= n {
                    return Err(Error::Partition(format!("site {} outside 1..={n}", i + 1)));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::Partition(format!("site {} is in two domains", i + 1)));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Partition(format!("site {} is in no domain", i + 1)));
        }
        Ok(())
    }

    fn alpha(&self, i: usize) -> f64 {
        f64::from(self.alphas[i])
    }
}

/// `Σ_{i∈domain} α_i σ_i^z`.
fn signed_field(n: usize, domain: &[usize], alpha: impl Fn(usize) -> f64) -> Result<PauliSum> {
    let mut w = vec![0.0; n];
    for &i in domain {
        w[i] = alpha(i);
    }
    PauliSum::longitudinal_field(&w)
}

/// `−(Σ_i α_i σ_i^z)²`; ground states `|σ = α⟩` and `|σ = −α⟩`.
pub fn two_state_entangled(alphas: &[i8]) -> Result<PauliSum> {
    if alphas.len() < 2 {
        return Err(Error::Partition("need at least two sites".into()));
    }
    let spec = PartitionSpec::new(vec![(0..alphas.len()).collect()], alphas.to_vec())?;
    let n = spec.site_count();
    Ok(signed_field(n, &spec.domains[0], |i| spec.alpha(i))?
        .square()?
        .scaled(-1.0)
        .simplified())
}

/// `−(Σ_{i∈A} α_i σ_i^z)² + Σ_{i∈B} α_i σ_i^z` for `domains = [A, B]`.
pub fn two_state_product(spec: &PartitionSpec) -> Result<PauliSum> {
    spec.validate()?;
    let [a, b] = spec.domains.as_slice() else {
        return Err(Error::Partition(format!(
            "expected domains [A, B], got {}",
            spec.domains.len()
        )));
    };
    if a.is_empty() {
        return Err(Error::Partition("domain A is empty, the ground state is not degenerate".into()));
    }
    let n = spec.site_count();
    let square = signed_field(n, a, |i| spec.alpha(i))?.square()?.scaled(-1.0);
    let field = signed_field(n, b, |i| spec.alpha(i))?;
    Ok(square.try_add(&field)?.simplified())
}

/// `−Σ_{j≤K} (Σ_{i∈A_j} α_i σ_i^z)² − Σ_{i∈A_{K+1}} α_i σ_i^z`; `2^K`-fold
/// degenerate.
pub fn combined_family(spec: &PartitionSpec) -> Result<PauliSum> {
    spec.validate()?;
    let (field_domain, squared) = spec
        .domains
        .split_last()
        .ok_or_else(|| Error::Partition("no domains".into()))?;
    if squared.is_empty() || squared.iter().any(|d| d.is_empty()) {
        return Err(Error::Partition("need K ≥ 1 non-empty squared domains".into()));
    }
    let n = spec.site_count();
    let mut h = signed_field(n, field_domain, |i| -spec.alpha(i))?;
    for d in squared {
        h = h.try_add(&signed_field(n, d, |i| spec.alpha(i))?.square()?.scaled(-1.0))?;
    }
    Ok(h.simplified())
}

/// Basis state with `σ_i = spins[i]` (`+1` ↔ `↑`).
fn spin_state(spins: &[f64]) -> Result<StateVector> {
    let n = spins.len();
    let index = spins
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < 0.0)
        .fold(0, |acc, (q, _)| acc | qubit_bit(n, q));
    StateVector::basis(n, index)
}

/// Advertised ground states of [`two_state_entangled`].
pub fn entangled_ground_states(alphas: &[i8]) -> Result<Vec<StateVector>> {
    let s: Vec<f64> = alphas.iter().map(|&a| f64::from(a)).collect();
    let flipped: Vec<f64> = s.iter().map(|x| -x).collect();
    Ok(vec![spin_state(&s)?, spin_state(&flipped)?])
}

/// Advertised ground states of [`two_state_product`]: `A` aligned with
/// `±α`, `B` anti-aligned with `α`.
pub fn product_ground_states(spec: &PartitionSpec) -> Result<Vec<StateVector>> {
    spec.validate()?;
    let n = spec.site_count();
    [1.0, -1.0]
        .iter()
        .map(|&sign| {
            let mut spins = vec![0.0; n];
            for &i in &spec.domains[0] {
                spins[i] = sign * spec.alpha(i);
            }
            for &i in &spec.domains[1] {
                spins[i] = -spec.alpha(i);
            }
            spin_state(&spins)
        })
        .collect()
}

/// Advertised ground states of [`combined_family`]: every squared domain
/// independently `±α`, field domain aligned with `α`.
pub fn combined_ground_states(spec: &PartitionSpec) -> Result<Vec<StateVector>> {
    spec.validate()?;
    let n = spec.site_count();
    let (field_domain, squared) = spec
        .domains
        .split_last()
        .ok_or_else(|| Error::Partition("no domains".into()))?;
    let k = squared.len();
    (0..1usize << k)
        .map(|choice| {
            let mut spins = vec![0.0; n];
            for (j, d) in squared.iter().enumerate() {
                let sign = if choice >> (k - 1 - j) & 1 == 0 { 1.0 } else { -1.0 };
                for &i in d {
                    spins[i] = sign * spec.alpha(i);
                }
            }
            for &i in field_domain {
                spins[i] = spec.alpha(i);
            }
            spin_state(&spins)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundSpaceReport {
    pub matches: bool,
    pub expected_dim: usize,
    pub ground_degeneracy: usize,
    /// `‖P_expected − P_ground‖_F`; `None` when the dimensions differ.
    pub projector_distance: Option<f64>,
}

/// Checks that `expected` spans exactly the ground eigenspace of `h`.
/// Dimension mismatches are reported, not raised.
pub fn verify_ground_space(h: &PauliSum, expected: &[StateVector], tol: f64) -> Result<GroundSpaceReport> {
    let spectrum = eigen_decompose(h, DEFAULT_DEGENERACY_TOL)?;
    let basis = orthonormalize(expected, h.qubit_count())?;
    let ground = spectrum.ground_degeneracy;
    if basis.len() != ground || expected.len() != ground {
        return Ok(GroundSpaceReport {
            matches: false,
            expected_dim: basis.len(),
            ground_degeneracy: ground,
            projector_distance: None,
        });
    }
    let dim = h.dim();
    let projector = |vs: &[Vec<C64>]| {
        let mut p = DMatrix::<C64>::zeros(dim, dim);
        for v in vs {
            for r in 0..dim {
                for c in 0..dim {
                    p[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        p
    };
    let eig: Vec<Vec<C64>> = spectrum.eigenvectors[..ground]
        .iter()
        .map(|v| v.amplitudes().to_vec())
        .collect();
    let distance = crate::operators::frobenius_norm(&(projector(&basis) - projector(&eig)));
    Ok(GroundSpaceReport {
        matches: distance <= tol,
        expected_dim: basis.len(),
        ground_degeneracy: ground,
        projector_distance: Some(distance),
    })
}

/// Modified Gram-Schmidt; drops vectors that are linearly dependent on
/// earlier ones.
fn orthonormalize(vs: &[StateVector], n: usize) -> Result<Vec<Vec<C64>>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for v in vs {
        if v.qubit_count() != n {
            return Err(Error::RegisterMismatch {
                left: n,
                right: v.qubit_count(),
            });
        }
        let mut w = v.amplitudes().to_vec();
        for u in &out {
            let proj: C64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in w.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            w.iter_mut().for_each(|a| *a /= norm);
            out.push(w);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::ground_space;

    fn labels(states: &[StateVector]) -> Vec<String> {
        states
            .iter()
            .map(|s| crate::operators::dominant_labels(s, 0.5).join(""))
            .collect()
    }

    #[test]
    fn entangled_examples() {
        let h = two_state_entangled(&[1, 1, 1]).unwrap();
        assert_eq!(labels(&ground_space(&h, 1e-9).unwrap()), ["↑↑↑", "↓↓↓"]);
        let h = two_state_entangled(&[1, -1]).unwrap();
        assert_eq!(labels(&ground_space(&h, 1e-9).unwrap()), ["↑↓", "↓↑"]);
        let h = two_state_entangled(&[1, 1]).unwrap();
        let mut d = h.diagonal();
        d.sort_by(f64::total_cmp);
        assert_eq!(d, vec![-4.0, -4.0, 0.0, 0.0]);
    }

    #[test]
    fn global_sign_flip_is_invisible_to_squares() {
        assert_eq!(
            two_state_entangled(&[1, -1, 1]).unwrap(),
            two_state_entangled(&[-1, 1, -1]).unwrap()
        );
    }

    #[test]
    fn product_examples() {
        let spec = PartitionSpec::new(vec![vec![0], vec![1]], vec![1, 1]).unwrap();
        let h = two_state_product(&spec).unwrap();
        assert_eq!(labels(&ground_space(&h, 1e-9).unwrap()), ["↑↓", "↓↓"]);
        let empty_b = PartitionSpec::new(vec![vec![0, 1, 2], vec![]], vec![1, -1, 1]).unwrap();
        assert_eq!(two_state_product(&empty_b).unwrap(), two_state_entangled(&[1, -1, 1]).unwrap());
        let empty_a = PartitionSpec::new(vec![vec![], vec![0, 1]], vec![1, 1]).unwrap();
        assert!(matches!(two_state_product(&empty_a), Err(Error::Partition(_))));
    }

    #[test]
    fn combined_degeneracy() {
        let spec = PartitionSpec::new(vec![vec![0, 1], vec![2, 3], vec![4]], vec![1, 1, 1, -1, 1]).unwrap();
        let h = combined_family(&spec).unwrap();
        let r = verify_ground_space(&h, &combined_ground_states(&spec).unwrap(), 1e-10).unwrap();
        assert!(r.matches, "{r:?}");
        assert_eq!(r.ground_degeneracy, 4);
    }

    #[test]
    fn partition_validation() {
        assert!(PartitionSpec::new(vec![vec![0], vec![0, 1]], vec![1, 1]).is_err());
        assert!(PartitionSpec::new(vec![vec![0]], vec![1, 1]).is_err());
        assert!(PartitionSpec::new(vec![vec![0, 1]], vec![1, 2]).is_err());
        assert!(PartitionSpec::new(vec![vec![0, 2]], vec![1, 1]).is_err());
    }

    #[test]
    fn verification_reports_mismatch() {
        let h = two_state_entangled(&[1, 1, 1, 1]).unwrap();
        let both = entangled_ground_states(&[1, 1, 1, 1]).unwrap();
        assert!(verify_ground_space(&h, &both, 1e-10).unwrap().matches);
        let one = verify_ground_space(&h, &both[..1], 1e-10).unwrap();
        assert!(!one.matches && one.projector_distance.is_none());
        // rotated basis of the same span
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mix = |sign: f64| {
            let amps = both[0]
                .amplitudes()
                .iter()
                .zip(both[1].amplitudes())
                .map(|(a, b)| (a + b * sign) * s)
                .collect();
            StateVector::new(4, amps).unwrap()
        };
        assert!(verify_ground_space(&h, &[mix(1.0), mix(-1.0)], 1e-10).unwrap().matches);
    }
}
