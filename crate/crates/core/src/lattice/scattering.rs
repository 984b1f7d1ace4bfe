use serde::{Deserialize, Serialize};

use super::eigensolver::{ground_state, GroundState};
use super::fock::apply_wavepacket_operator;
use super::hamiltonian::{build_hamiltonian, SparseHamiltonian};
use super::model::LatticeModel;
use super::modes::{free_modes, SingleParticleModes};
use super::observables::{density, entropy_profile};
use super::propagate::KrylovPropagator;
use super::wavepacket::{gaussian_wavepacket, Species, WavepacketSpec};
use crate::{Error, Result, Statevector};

/// Everything about a `(m, g)` point that is shared by all wave-packet
/// momenta: Hamiltonian, interacting vacuum, free modes and vacuum profiles.
#[derive(Debug, Clone)]
pub struct ScatteringContext {
    pub model: LatticeModel,
    pub hamiltonian: SparseHamiltonian,
    pub vacuum: GroundState,
    pub modes: SingleParticleModes,
    pub vacuum_density: Vec<f64>,
    pub vacuum_entropy: Vec<f64>,
    pub propagator: KrylovPropagator,
}

impl ScatteringContext {
    pub fn new(model: LatticeModel) -> Result<Self> {
        let hamiltonian = build_hamiltonian(&model)?;
        let vacuum = ground_state(&hamiltonian)?;
        let modes = free_modes(&model)?;
        let vacuum_density = density(&vacuum.state);
        let vacuum_entropy = entropy_profile(&vacuum.state)?;
        Ok(Self {
            model,
            hamiltonian,
            vacuum,
            modes,
            vacuum_density,
            vacuum_entropy,
            propagator: KrylovPropagator::default(),
        })
    }

    /// Normalized `D†C†|Ω⟩`.
    pub fn prepare(&self, fermion: &WavepacketSpec, antifermion: &WavepacketSpec) -> Result<Statevector> {
        if fermion.species != Species::Fermion || antifermion.species != Species::Antifermion {
            return Err(Error::InvalidArgument(
                "expected one fermion and one antifermion packet".into(),
            ));
        }
        let gap = (fermion.position_center - antifermion.position_center).abs();
        let needed = 4.0 * fermion.position_width().max(antifermion.position_width());
        if gap < needed {
            return Err(Error::InvalidArgument(format!(
                "packets {gap} sites apart; need at least 4σ = {needed:.3}"
            )));
        }
        let c = gaussian_wavepacket(fermion, &self.modes)?;
        let d = gaussian_wavepacket(antifermion, &self.modes)?;
        let one = apply_wavepacket_operator(&self.vacuum.state, &c.position_coeffs, Species::Fermion)?;
        let mut two = apply_wavepacket_operator(&one, &d.position_coeffs, Species::Antifermion)?;
        two.normalize();
        Ok(two)
    }

    /// Evolves `initial` for `steps` steps of `dt`, recording excess density and
    /// excess entropy at every grid time including `t = 0`.
    pub fn run(&self, initial: &Statevector, dt: f64, steps: usize) -> Result<Trajectory> {
        let mut traj = Trajectory::default();
        let mut psi = initial.clone();
        for k in 0..=steps {
            if k > 0 {
                psi = self.propagator.step(&self.hamiltonian, &psi, dt)?;
            }
            traj.record(self, k as f64 * dt, &psi)?;
        }
        Ok(traj)
    }
}

/// Builds a fresh context and prepares the scattering state.
pub fn prepare_scattering_state(
    model: &LatticeModel,
    fermion: &WavepacketSpec,
    antifermion: &WavepacketSpec,
) -> Result<Statevector> {
    ScatteringContext::new(*model)?.prepare(fermion, antifermion)
}

/// Observables recorded along a real-time trajectory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `times.len() × N` excess densities.
    pub excess_density: Vec<Vec<f64>>,
    /// `times.len() × (N − 1)` excess entropies for cuts `1..N−1`.
    pub excess_entropy: Vec<Vec<f64>>,
    pub norm: Vec<f64>,
    pub energy: Vec<f64>,
    pub particle_number: Vec<f64>,
}

impl Trajectory {
    fn record(&mut self, ctx: &ScatteringContext, t: f64, psi: &Statevector) -> Result<()> {
        let dens = density(psi);
        let ent = entropy_profile(psi)?;
        self.particle_number.push(dens.iter().sum());
        self.excess_density
            .push(dens.iter().zip(&ctx.vacuum_density).map(|(a, b)| a - b).collect());
        self.excess_entropy
            .push(ent.iter().zip(&ctx.vacuum_entropy).map(|(a, b)| a - b).collect());
        self.norm.push(psi.norm());
        self.energy.push(ctx.hamiltonian.energy(psi.amplitudes()));
        self.times.push(t);
        Ok(())
    }
}
