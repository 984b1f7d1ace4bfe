use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::lattice::MAX_SITES;
use crate::{Error, Result};

/// How entries of [`SweepConfig::thresholds`] are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdKind {
    /// Literal `ΔS_mid` values.
    Value,
    /// Quantiles in `[0, 1]` of the detected `ΔS_mid` distribution.
    Quantile,
}

/// Sweep grid, trajectory sampling and dataset-build settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub sites: usize,
    pub masses: Vec<f64>,
    pub couplings: Vec<f64>,
    /// Positive reduced-zone momenta of the fermion packet.
    pub fermion_momenta: Vec<f64>,
    /// Negative reduced-zone momenta of the antifermion packet.
    pub antifermion_momenta: Vec<f64>,
    pub momentum_width: f64,
    /// Defaults to `round(N/4)`.
    #[serde(default)]
    pub fermion_position: Option<f64>,
    /// Defaults to `round(3N/4)`.
    #[serde(default)]
    pub antifermion_position: Option<f64>,
    pub time_horizon: f64,
    pub time_step: f64,
    pub separation_fraction: f64,
    pub threshold_kind: ThresholdKind,
    pub thresholds: Vec<f64>,
    /// PCA sizes; one dataset is written per (threshold, size).
    pub components: Vec<usize>,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    pub seed: u64,
}

fn default_test_fraction() -> f64 {
    0.2
}

impl Default for SweepConfig {
    /// The desk-scale sweep: `N = 12`, a 5×5×3×3 grid.
    fn default() -> Self {
        Self {
            sites: 12,
            masses: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            couplings: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            fermion_momenta: vec![0.4, 0.8, 1.2],
            antifermion_momenta: vec![-0.4, -0.8, -1.2],
            momentum_width: 0.4,
            fermion_position: None,
            antifermion_position: None,
            time_horizon: 20.0,
            time_step: 0.5,
            separation_fraction: 0.5,
            threshold_kind: ThresholdKind::Quantile,
            thresholds: vec![0.5],
            components: vec![4, 8],
            test_fraction: 0.2,
            seed: 2024,
        }
    }
}

impl SweepConfig {
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let cfg: Self = crate::config::load(path, overrides)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.sites > MAX_SITES {
            return bad(format!("sites = {} exceeds the exact-simulation cap of {MAX_SITES}", self.sites));
        }
        if self.sites < 4 || !self.sites.is_multiple_of(2) {
            return bad(format!("sites must be even and ≥ 4, got {}", self.sites));
        }
        for (name, grid) in [
            ("masses", &self.masses),
            ("couplings", &self.couplings),
            ("fermion_momenta", &self.fermion_momenta),
            ("antifermion_momenta", &self.antifermion_momenta),
            ("thresholds", &self.thresholds),
        ] {
            if grid.is_empty() {
                return bad(format!("{name} must not be empty"));
            }
            if grid.iter().any(|x| !x.is_finite()) {
                return bad(format!("{name} contains a non-finite value"));
            }
        }
        if self.masses.iter().any(|&m| m <= 0.0) {
            return bad("masses must be positive".into());
        }
        let forward = self.fermion_momenta.iter().all(|&k| k > 0.0);
        let backward = self.antifermion_momenta.iter().all(|&k| k < 0.0);
        if !(forward && backward) {
            return bad(
                "packets must counter-propagate: fermion momenta > 0 and antifermion momenta < 0".into(),
            );
        }
        if !(self.momentum_width > 0.0) {
            return bad("momentum_width must be positive".into());
        }
        if !(self.time_step > 0.0 && self.time_horizon >= self.time_step) {
            return bad("need 0 < time_step ≤ time_horizon".into());
        }
        let steps = self.time_horizon / self.time_step;
        if (steps - steps.round()).abs() > 1e-9 {
            return bad("time_horizon must be a whole number of time_step".into());
        }
        if !(self.separation_fraction > 0.0 && self.separation_fraction <= 1.0) {
            return bad("separation_fraction must lie in (0, 1]".into());
        }
        if self.threshold_kind == ThresholdKind::Quantile && self.thresholds.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return bad("quantile thresholds must lie in [0, 1]".into());
        }
        if self.components.is_empty() || self.components.contains(&0) {
            return bad("components must be a non-empty list of positive sizes".into());
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return bad("test_fraction must lie in (0, 1)".into());
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.time_horizon / self.time_step).round() as usize
    }

    pub fn fermion_center(&self) -> f64 {
        self.fermion_position
            .unwrap_or_else(|| (self.sites as f64 / 4.0).round())
    }

    pub fn antifermion_center(&self) -> f64 {
        self.antifermion_position
            .unwrap_or_else(|| (3.0 * self.sites as f64 / 4.0).round())
    }

    /// Number of `(m, g, μ_k^c, μ_k^d)` tuples.
    pub fn cardinality(&self) -> usize {
        self.masses.len() * self.couplings.len() * self.fermion_momenta.len() * self.antifermion_momenta.len()
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(crate::json::to_line(self).as_bytes()))
    }
}
