//! Classical 2D Ising runs: seeded ramp ensembles, scaled excitation
//! energy, and the threshold-range velocity ladder.

use crate::analysis::{threshold_range, velocity_ladder, VelocityLadder};
use crate::error::Result;
use crate::glauber2d::{ensemble_ramp, onsager_internal_energy, scales, EnsembleResult, RampSchedule};
use crate::profile::{rescale_profile, ScaledProfile};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsingRunConfig {
    pub l: usize,
    pub tau_q_list: Vec<f64>,
    /// Measurement times in units of t_hat.
    pub s_list: Vec<f64>,
    pub r_max: usize,
    pub seeds: Vec<u64>,
}

impl IsingRunConfig {
    pub fn acceptance() -> Self {
        IsingRunConfig {
            l: 1024,
            tau_q_list: vec![1024.0, 2048.0, 4096.0],
            s_list: (0..9).map(|i| -1.0 + 0.25 * i as f64).collect(),
            r_max: 128,
            seeds: (0..50).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsingEnergyPoint {
    pub s: f64,
    /// tau_Q^(1/3) (E - U(beta(t))), with U the exact equilibrium energy.
    pub scaled_excess: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone)]
pub struct IsingRunResult {
    pub config: IsingRunConfig,
    /// Raw ensemble output per tau_Q.
    pub ensembles: Vec<(f64, EnsembleResult)>,
    /// Scaled excitation-energy curves per tau_Q.
    pub scaled_energy: Vec<(f64, Vec<IsingEnergyPoint>)>,
}

pub fn run_ensembles(config: &IsingRunConfig) -> Result<IsingRunResult> {
    let mut ensembles = Vec::with_capacity(config.tau_q_list.len());
    let mut scaled_energy = Vec::with_capacity(config.tau_q_list.len());
    for &tau_q in &config.tau_q_list {
        let sc = scales(tau_q);
        let times: Vec<f64> = config.s_list.iter().map(|&s| s * sc.t_hat).collect();
        let ens = ensemble_ramp(config.l, tau_q, &times, config.r_max, &config.seeds)?;
        let ramp = RampSchedule { tau_q };
        let amp = tau_q.powf(1.0 / 3.0);
        let energy_curve: Vec<IsingEnergyPoint> = ens
            .energy
            .iter()
            .map(|&(t, e, se)| IsingEnergyPoint {
                s: t / sc.t_hat,
                scaled_excess: amp * (e - onsager_internal_energy(ramp.beta(t))),
                stderr: amp * se,
            })
            .collect();
        scaled_energy.push((tau_q, energy_curve));
        ensembles.push((tau_q, ens));
    }
    Ok(IsingRunResult { config: config.clone(), ensembles, scaled_energy })
}

/// Scaled profiles (Delta = eta = 1/4) of one ensemble.
pub fn scaled_profiles(result: &IsingRunResult, tau_q: f64) -> Vec<ScaledProfile> {
    let sc = scales(tau_q);
    result
        .ensembles
        .iter()
        .find(|(t, _)| *t == tau_q)
        .map(|(_, ens)| {
            ens.profiles
                .iter()
                .map(|p| rescale_profile(p, &sc, 0.25))
                .collect()
        })
        .unwrap_or_default()
}

/// Threshold-crossing ranges over a cutoff ladder and the zero-cutoff
/// extrapolation of the slopes.
pub fn velocity_from_profiles(
    profiles: &[ScaledProfile],
    cutoffs: &[f64],
) -> Result<VelocityLadder> {
    let mut ranges = Vec::with_capacity(cutoffs.len());
    for &c in cutoffs {
        let mut series = Vec::new();
        for sp in profiles {
            match threshold_range(sp, c) {
                Ok(x) => series.push((sp.s, x)),
                Err(crate::Error::NoCrossing { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        ranges.push((c, series));
    }
    velocity_ladder(&ranges)
}
