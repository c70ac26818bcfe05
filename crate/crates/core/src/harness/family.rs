//! Degenerate-family Hamiltonians described in TOML.
//!
//! ```toml
//! family = "combined"            # entangled | product | combined
//! domains = [[1, 2], [3, 4], [5]] # 1-based sites; last domain is the field domain
//! alphas = [1, -1, 1, 1, -1]
//! ```
//!
//! `entangled` takes only `alphas`; `product` takes domains `[A, B]`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::families::{
    combined_family, combined_ground_states, entangled_ground_states, product_ground_states, two_state_entangled,
    two_state_product, verify_ground_space, GroundSpaceReport, PartitionSpec,
};
use crate::operators::PauliSum;
use crate::state::StateVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyConfig {
    Entangled { alphas: Vec<i8> },
    Product { domains: Vec<Vec<usize>>, alphas: Vec<i8> },
    Combined { domains: Vec<Vec<usize>>, alphas: Vec<i8> },
}

impl FamilyConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_toml_str(&std::fs::read_to_string(path).map_err(io_err(path))?)
    }

    /// The partition with 0-based site indices.
    pub fn partition(&self) -> Result<PartitionSpec> {
        match self {
            FamilyConfig::Entangled { alphas } => PartitionSpec::new(vec![(0..alphas.len()).collect()], alphas.clone()),
            FamilyConfig::Product { domains, alphas } | FamilyConfig::Combined { domains, alphas } => {
                let zero_based = domains
                    .iter()
                    .map(|d| {
                        d.iter()
                            .map(|&i| {
                                i.checked_sub(1)
                                    .ok_or_else(|| Error::Partition("site indices start at 1".into()))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                PartitionSpec::new(zero_based, alphas.clone())
            }
        }
    }

    pub fn hamiltonian(&self) -> Result<PauliSum> {
        match self {
            FamilyConfig::Entangled { alphas } => two_state_entangled(alphas),
            FamilyConfig::Product { .. } => two_state_product(&self.partition()?),
            FamilyConfig::Combined { .. } => combined_family(&self.partition()?),
        }
    }

    /// The advertised ground basis.
    pub fn ground_states(&self) -> Result<Vec<StateVector>> {
        match self {
            FamilyConfig::Entangled { alphas } => entangled_ground_states(alphas),
            FamilyConfig::Product { .. } => product_ground_states(&self.partition()?),
            FamilyConfig::Combined { .. } => combined_ground_states(&self.partition()?),
        }
    }

    pub fn verify(&self, tol: f64) -> Result<GroundSpaceReport> {
        verify_ground_space(&self.hamiltonian()?, &self.ground_states()?, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_verifies() {
        let f = FamilyConfig::from_toml_str(
            "family = \"combined\"\ndomains = [[1, 2], [3, 4], [5]]\nalphas = [1, -1, 1, 1, -1]\n",
        )
        .unwrap();
        assert_eq!(f.partition().unwrap().domains, vec![vec![0, 1], vec![2, 3], vec![4]]);
        let r = f.verify(1e-10).unwrap();
        assert!(r.matches && r.ground_degeneracy == 4);
        let e = FamilyConfig::from_toml_str("family = \"entangled\"\nalphas = [1, 1, 1]\n").unwrap();
        assert_eq!(e.verify(1e-10).unwrap().ground_degeneracy, 2);
    }

    #[test]
    fn rejects_zero_index_and_unknown_family() {
        let f = FamilyConfig::from_toml_str("family = \"product\"\ndomains = [[0], [1]]\nalphas = [1, 1]\n").unwrap();
        assert!(f.partition().is_err());
        assert!(FamilyConfig::from_toml_str("family = \"ring\"\nalphas = [1]\n").is_err());
    }
}
