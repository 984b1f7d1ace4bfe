use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SweepConfig;
use super::label::{central_excess_entropy, detect_separation_time};
use crate::lattice::{LatticeModel, ScatteringContext, Species, WavepacketSpec};
use crate::{Result, SCHEMA_VERSION};

/// Physical parameters of one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventParameters {
    pub mass: f64,
    pub coupling: f64,
    pub fermion_momentum: f64,
    pub antifermion_momentum: f64,
    pub fermion_position: f64,
    pub antifermion_position: f64,
    pub momentum_width: f64,
}

/// One trajectory of the sweep, or the reason it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringEvent {
    pub schema_version: u32,
    pub index: usize,
    pub parameters: EventParameters,
    pub times: Vec<f64>,
    /// `times × N` excess densities.
    pub density_image: Vec<Vec<f64>>,
    /// `times × (N − 1)` excess entropies, column `n − 1` for cut `n`.
    pub entropy_traces: Vec<Vec<f64>>,
    pub t_star: Option<f64>,
    pub t_star_index: Option<usize>,
    pub delta_s_mid: Option<f64>,
    /// Set when the trajectory failed; all arrays are then empty.
    pub error: Option<String>,
}

impl ScatteringEvent {
    fn failed(index: usize, parameters: EventParameters, error: String) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            index,
            parameters,
            times: Vec::new(),
            density_image: Vec::new(),
            entropy_traces: Vec::new(),
            t_star: None,
            t_star_index: None,
            delta_s_mid: None,
            error: Some(error),
        }
    }

    /// The flattened density image used as the raw feature vector.
    pub fn features(&self) -> Vec<f64> {
        self.density_image.iter().flatten().copied().collect()
    }
}

/// Runs every `(m, g, μ_k^c, μ_k^d)` tuple of the grid in that nesting order.
///
/// The vacuum and free modes are computed once per `(m, g)`. Failures of a
/// single trajectory, or of a vacuum solve, are recorded on the affected
/// events instead of aborting the sweep.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ScatteringEvent>> {
    config.validate()?;
    let points: Vec<(f64, f64)> = config
        .masses
        .iter()
        .flat_map(|&m| config.couplings.iter().map(move |&g| (m, g)))
        .collect();
    let per_point = config.fermion_momenta.len() * config.antifermion_momenta.len();

    let events = points
        .par_iter()
        .enumerate()
        .flat_map_iter(|(p, &(m, g))| {
            let ctx = LatticeModel::new(config.sites, m, g).and_then(ScatteringContext::new);
            let mut out = Vec::with_capacity(per_point);
            for (i, &kf) in config.fermion_momenta.iter().enumerate() {
                for (j, &ka) in config.antifermion_momenta.iter().enumerate() {
                    let index = p * per_point + i * config.antifermion_momenta.len() + j;
                    let params = EventParameters {
                        mass: m,
                        coupling: g,
                        fermion_momentum: kf,
                        antifermion_momentum: ka,
                        fermion_position: config.fermion_center(),
                        antifermion_position: config.antifermion_center(),
                        momentum_width: config.momentum_width,
                    };
                    let event = match &ctx {
                        Ok(ctx) => simulate(ctx, config, index, params)
                            .unwrap_or_else(|e| ScatteringEvent::failed(index, params, e.to_string())),
                        Err(e) => ScatteringEvent::failed(index, params, format!("vacuum: {e}")),
                    };
                    out.push(event);
                }
            }
            out
        })
        .collect();
    Ok(events)
}

fn simulate(ctx: &ScatteringContext, config: &SweepConfig, index: usize, p: EventParameters) -> Result<ScatteringEvent> {
    let fermion = WavepacketSpec::new(Species::Fermion, p.fermion_position, p.fermion_momentum, p.momentum_width)?;
    let antifermion = WavepacketSpec::new(
        Species::Antifermion,
        p.antifermion_position,
        p.antifermion_momentum,
        p.momentum_width,
    )?;
    let initial = ctx.prepare(&fermion, &antifermion)?;
    let traj = ctx.run(&initial, config.time_step, config.steps())?;
    let t_star_index = detect_separation_time(&traj.excess_density, config.separation_fraction);
    let delta_s_mid = t_star_index
        .map(|i| central_excess_entropy(&traj.excess_entropy[i]))
        .transpose()?;
    Ok(ScatteringEvent {
        schema_version: SCHEMA_VERSION,
        index,
        parameters: p,
        t_star: t_star_index.map(|i| traj.times[i]),
        t_star_index,
        delta_s_mid,
        times: traj.times,
        density_image: traj.excess_density,
        entropy_traces: traj.excess_entropy,
        error: None,
    })
}

pub fn write_events(path: &Path, events: &[ScatteringEvent]) -> Result<()> {
    crate::json::write_lines(path, events)
}

/// Reads an events file, rejecting records from another schema version.
pub fn read_events(path: &Path) -> Result<Vec<ScatteringEvent>> {
    let events: Vec<ScatteringEvent> = crate::json::read_lines(path)?;
    for e in &events {
        crate::json::check_schema(path, e.schema_version)?;
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SweepConfig {
        SweepConfig {
            sites: 6,
            masses: vec![0.5],
            couplings: vec![0.3],
            fermion_momenta: vec![0.6],
            antifermion_momenta: vec![-0.6],
            momentum_width: 1.0,
            fermion_position: Some(1.0),
            antifermion_position: Some(4.0),
            time_horizon: 2.0,
            time_step: 0.5,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn single_point_grid_gives_one_event() {
        let events = run_sweep(&tiny()).unwrap();
        assert_eq!(events.len(), 1);
        let e = &events[0];
        assert!(e.error.is_none(), "{:?}", e.error);
        assert_eq!(e.times.len(), 5);
        assert_eq!(e.density_image.len(), 5);
        assert_eq!(e.entropy_traces[0].len(), 5);
        for row in &e.density_image {
            assert!(row.iter().sum::<f64>().abs() < 1e-8);
        }
    }

    #[test]
    fn failures_are_recorded_per_event() {
        let mut cfg = tiny();
        // the second packet pair starts too close together
        cfg.antifermion_position = Some(2.0);
        cfg.fermion_momenta = vec![0.3, 0.6];
        let events = run_sweep(&cfg).unwrap();
        assert_eq!(events.len(), 2);
        assert!(events.iter().all(|e| e.error.is_some() && e.density_image.is_empty()));
    }

    #[test]
    fn events_round_trip_through_json_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("events.jsonl");
        let events = run_sweep(&tiny()).unwrap();
        write_events(&path, &events).unwrap();
        assert_eq!(read_events(&path).unwrap(), events);
    }
}
