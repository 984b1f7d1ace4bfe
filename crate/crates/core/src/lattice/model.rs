use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest chain the exact statevector backend accepts.
pub const MAX_SITES: usize = 14;

/// Parameters of the staggered Thirring Hamiltonian. The lattice spacing is
/// fixed to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeModel {
    sites: usize,
    mass: f64,
    coupling: f64,
}

impl LatticeModel {
    pub fn new(sites: usize, mass: f64, coupling: f64) -> Result<Self> {
        if sites < 4 || !sites.is_multiple_of(2) {
            return Err(Error::InvalidModel(format!(
                "site count must be even and at least 4, got {sites}"
            )));
        }
        if sites > MAX_SITES {
            return Err(Error::InvalidModel(format!(
                "site count {sites} exceeds the statevector cap of {MAX_SITES}"
            )));
        }
        if !mass.is_finite() || !coupling.is_finite() {
            return Err(Error::InvalidModel(format!(
                "mass and coupling must be finite (m = {mass}, g = {coupling})"
            )));
        }
        Ok(Self {
            sites,
            mass,
            coupling,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn spacing(&self) -> f64 {
        1.0
    }

    /// Full Fock-space dimension `2^N`.
    pub fn dimension(&self) -> usize {
        1 << self.sites
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_site_count() {
        assert!(LatticeModel::new(3, 0.1, 0.1).is_err());
        assert!(LatticeModel::new(2, 0.1, 0.1).is_err());
        assert!(LatticeModel::new(16, 0.1, 0.1).is_err());
        let m = LatticeModel::new(6, 0.4, 0.5).unwrap();
        assert_eq!(m.dimension(), 64);
        assert_eq!(m.spacing(), 1.0);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(LatticeModel::new(6, f64::NAN, 0.1).is_err());
    }
}
