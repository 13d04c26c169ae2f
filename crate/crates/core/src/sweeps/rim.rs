//! Random Ising chain runs: the scaled excitation-density ladder, the
//! static critical exponent, and the correlation-range velocity.

use crate::analysis::{threshold_range, velocity_ladder, VelocityLadder};
use crate::error::Result;
use crate::profile::{average_samples, rescale_profile, ScaledProfile};
use crate::randomising::{
    dex_sweep, rim_profile, static_xx_correlators, translation_sites, DisorderRealization,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_RIM_A: f64 = 0.118;
pub const DEFAULT_EPS_START: f64 = -2.0;
pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DexLadderConfig {
    pub n: usize,
    pub realizations: usize,
    pub tau_q_list: Vec<f64>,
    pub s_list: Vec<f64>,
    pub rim_a: f64,
    pub dt: f64,
    pub epsilon_start: f64,
    pub seed_base: u64,
}

impl DexLadderConfig {
    pub fn acceptance() -> Self {
        DexLadderConfig {
            n: 128,
            realizations: 30,
            tau_q_list: (7..=11).map(|p| (2.0f64).powi(p)).collect(),
            s_list: (0..13).map(|i| -1.5 + 0.25 * i as f64).collect(),
            rim_a: DEFAULT_RIM_A,
            dt: DEFAULT_DT,
            epsilon_start: DEFAULT_EPS_START,
            seed_base: 10_000,
        }
    }
}

/// Scaled excitation-density curves: per tau_Q, points
/// (s, xi_hat * d_ex, xi_hat * stderr).
pub fn run_dex_ladder(config: &DexLadderConfig) -> Result<Vec<(f64, Vec<(f64, f64, f64)>)>> {
    let mut out = Vec::with_capacity(config.tau_q_list.len());
    for &tau_q in &config.tau_q_list {
        let scales = DisorderRealization::scales(tau_q, config.rim_a)?;
        let times: Vec<f64> = config.s_list.iter().map(|&s| s * scales.t_hat).collect();
        let rows = dex_sweep(
            config.n,
            config.realizations,
            tau_q,
            config.dt,
            config.epsilon_start,
            &times,
            config.seed_base,
        )?;
        let curve = rows
            .iter()
            .zip(&config.s_list)
            .map(|(&(_, d, se), &s)| (s, scales.xi_hat * d, scales.xi_hat * se))
            .collect();
        out.push((tau_q, curve));
    }
    Ok(out)
}

/// Disorder-averaged critical ground-state correlator over `realizations`
/// samples; returns the averaged profile.
pub fn static_critical_profile(
    n: usize,
    realizations: usize,
    r_list: &[u32],
    seed_base: u64,
) -> Result<crate::CorrelationProfile> {
    let r_max = *r_list.last().unwrap() as usize;
    let sites = translation_sites(n, r_max, 16);
    let samples: Vec<Vec<f64>> = (0..realizations)
        .into_par_iter()
        .map(|i| {
            let d = DisorderRealization::sample(n, seed_base + i as u64)?;
            static_xx_correlators(&d, 0.0, r_list, &sites)
        })
        .collect::<Result<_>>()?;
    average_samples("randomising", 0.0, f64::MAX, r_list.to_vec(), &samples)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RimProfileConfig {
    pub n: usize,
    pub realizations: usize,
    pub tau_q_list: Vec<f64>,
    pub s_list: Vec<f64>,
    pub r_max: usize,
    pub rim_a: f64,
    pub dt: f64,
    pub epsilon_start: f64,
    pub seed_base: u64,
    pub n_translations: usize,
}

impl RimProfileConfig {
    pub fn acceptance() -> Self {
        RimProfileConfig {
            n: 256,
            realizations: 30,
            tau_q_list: vec![1024.0, 2048.0],
            s_list: vec![-0.25, -0.15, -0.05, 0.05, 0.15, 0.25],
            r_max: 64,
            rim_a: DEFAULT_RIM_A,
            dt: DEFAULT_DT,
            epsilon_start: DEFAULT_EPS_START,
            seed_base: 40_000,
            n_translations: 12,
        }
    }
}

impl Default for RimProfileConfig {
    fn default() -> Self {
        Self::acceptance()
    }
}

/// Quench correlation profiles, already rescaled (x = R/xi_hat,
/// y = xi_hat^eta * C): per tau_Q one ScaledProfile per s.
pub fn run_profiles(config: &RimProfileConfig) -> Result<Vec<(f64, Vec<ScaledProfile>)>> {
    let r_list: Vec<u32> = (1..=config.r_max as u32).collect();
    let eta = DisorderRealization::exponents().eta_or_delta;
    let mut out = Vec::with_capacity(config.tau_q_list.len());
    for &tau_q in &config.tau_q_list {
        let scales = DisorderRealization::scales(tau_q, config.rim_a)?;
        let profiles = rim_profile(
            config.n,
            config.realizations,
            tau_q,
            config.dt,
            config.epsilon_start,
            config.rim_a,
            &config.s_list,
            &r_list,
            config.seed_base,
            config.n_translations.max(4),
        )?;
        let scaled = profiles.iter().map(|p| rescale_profile(p, &scales, eta)).collect();
        out.push((tau_q, scaled));
    }
    Ok(out)
}

/// Velocity ladder from the scaled profiles of one quench time.
pub fn velocity_from_profiles(profiles: &[ScaledProfile], cutoffs: &[f64]) -> Result<VelocityLadder> {
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
