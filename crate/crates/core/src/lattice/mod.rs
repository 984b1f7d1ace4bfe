//! Staggered massive Thirring model on an open chain: Hamiltonian, free
//! modes, wave packets, vacuum search, real-time propagation and observables.

mod eigensolver;
mod fock;
mod hamiltonian;
mod model;
mod modes;
mod observables;
mod propagate;
mod scattering;
mod wavepacket;

pub use eigensolver::{ground_state, lanczos_lowest, GroundState, LanczosOptions};
pub use fock::{apply_annihilation, apply_creation, apply_wavepacket_operator, jw_sign, occupied};
pub use hamiltonian::{build_hamiltonian, number_operator, HalfFillingSector, SparseHamiltonian};
pub use model::{LatticeModel, MAX_SITES};
pub use modes::{free_modes, single_particle_matrix, SingleParticleModes};
pub use observables::{
    density, entanglement_entropy, entropy_profile, excess_density, excess_entropy, reduced_density_matrix,
    reduced_density_matrix_right, von_neumann_entropy, DEFAULT_MAX_BLOCK_QUBITS,
};
pub use propagate::{evolve, KrylovPropagator};
pub use scattering::{prepare_scattering_state, ScatteringContext, Trajectory};
pub use wavepacket::{gaussian_wavepacket, Species, Wavepacket, WavepacketSpec};
