use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::modes::{sublattice_amplitude, SingleParticleModes};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Fermion,
    Antifermion,
}

/// Gaussian wave packet centred at `position_center` (sites) with mean
/// momentum `momentum_center` and momentum width `momentum_width`.
///
/// Momenta are reduced-zone momenta in `[−π/2, π/2]`; the sign is the
/// direction of motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavepacketSpec {
    pub species: Species,
    pub position_center: f64,
    pub momentum_center: f64,
    pub momentum_width: f64,
}

impl WavepacketSpec {
    pub fn new(species: Species, position_center: f64, momentum_center: f64, momentum_width: f64) -> Result<Self> {
        let spec = Self {
            species,
            position_center,
            momentum_center,
            momentum_width,
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if !(self.momentum_width > 0.0) || !self.momentum_width.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "momentum width must be positive, got {}",
                self.momentum_width
            )));
        }
        if !self.position_center.is_finite() || !self.momentum_center.is_finite() {
            return Err(Error::InvalidArgument("wave-packet centres must be finite".into()));
        }
        if self.momentum_center.abs() > FRAC_PI_2 {
            return Err(Error::InvalidArgument(format!(
                "mean momentum {} lies outside the reduced zone [-π/2, π/2]",
                self.momentum_center
            )));
        }
        Ok(())
    }

    /// Position-space standard deviation of `|φ̃_n|²`, `1 / (2 σ_k)`.
    pub fn position_width(&self) -> f64 {
        0.5 / self.momentum_width
    }
}

/// A wave packet in both the mode basis and on the lattice.
#[derive(Debug, Clone)]
pub struct Wavepacket {
    pub species: Species,
    /// Indices into the mode list this packet is built from.
    pub modes: Vec<usize>,
    /// Signed momentum label of each mode.
    pub momenta: Vec<f64>,
    /// Normalized momentum-space coefficients `φ_k`.
    pub momentum_coeffs: Vec<Complex64>,
    /// Position-space operator coefficients `φ̃_n`.
    pub position_coeffs: Vec<Complex64>,
}

/// Evaluates the Gaussian `φ_k ∝ e^{−i k μ_n} e^{−(k−μ_k)²/4σ_k²}` on the mode
/// momenta of the requested species and maps it to lattice coefficients
/// through the mode vectors.
///
/// Each mode vector is phase-fixed so that its dominant-sublattice Fourier
/// amplitude at the signed label is real and positive; that makes the
/// `e^{−ikμ_n}` factor translate the packet to `μ_n`.
pub fn gaussian_wavepacket(spec: &WavepacketSpec, modes: &SingleParticleModes) -> Result<Wavepacket> {
    spec.check()?;
    let sites = modes.sites();
    if spec.position_center < 0.0 || spec.position_center > (sites - 1) as f64 {
        return Err(Error::InvalidArgument(format!(
            "packet centre {} outside the lattice [0, {}]",
            spec.position_center,
            sites - 1
        )));
    }
    let (range, parity): (Vec<usize>, usize) = match spec.species {
        Species::Fermion => (modes.positive_modes().collect(), 0),
        Species::Antifermion => (modes.negative_modes().collect(), 1),
    };
    let direction = if spec.momentum_center < 0.0 { -1.0 } else { 1.0 };
    let labels: Vec<f64> = range
        .iter()
        .map(|&j| direction * modes.momentum_magnitudes()[j])
        .collect();
    let covered = labels.iter().fold(0.0f64, |acc, k| acc.max(k.abs()));
    if spec.momentum_center.abs() > covered + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "mean momentum {} outside the covered range ±{covered:.4}",
            spec.momentum_center
        )));
    }

    let width = spec.momentum_width;
    let mut phi: Vec<Complex64> = labels
        .iter()
        .map(|&k| {
            let envelope = (-(k - spec.momentum_center).powi(2) / (4.0 * width * width)).exp();
            Complex64::from_polar(envelope, -k * spec.position_center)
        })
        .collect();
    let norm = phi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 1e-300) {
        return Err(Error::InvalidArgument(
            "Gaussian weights vanish on every mode; widen the momentum width".into(),
        ));
    }
    phi.iter_mut().for_each(|c| *c /= norm);

    let mut position = vec![Complex64::new(0.0, 0.0); sites];
    for ((&j, &k), &c) in range.iter().zip(&labels).zip(&phi) {
        let w = modes.operator_vector(j);
        let amp = sublattice_amplitude(&w, parity, k);
        let gauge = if amp.norm() > 0.0 { amp.conj() / amp.norm() } else { Complex64::new(1.0, 0.0) };
        for (n, p) in position.iter_mut().enumerate() {
            *p += c * gauge * w[n];
        }
    }

    Ok(Wavepacket {
        species: spec.species,
        modes: range,
        momenta: labels,
        momentum_coeffs: phi,
        position_coeffs: position,
    })
}
