//! Long-range chain runs: static tails and their scaling collapse, the
//! linear-quench collapse set with tail coefficients A(s), B(s), C(s), and
//! the two sudden-quench benchmarks.

use crate::analysis::{power_tail_fit, TailFit};
use crate::error::Result;
use crate::longrange::{
    log_r_grid, lr_quench_profile, lr_static_profile, sudden_quench_profile, LongRangeParams,
    SuddenSource,
};
use crate::profile::{rescale_profile, CorrelationProfile, ScaledProfile};
use serde::{Deserialize, Serialize};

/// Static critical / off-critical tails plus the static scaling collapse.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LrStaticResult {
    pub critical: CorrelationProfile,
    pub off_critical: CorrelationProfile,
    /// (epsilon, scaled profile with x = R/xi, y = xi^eta C_R).
    pub collapse: Vec<(f64, ScaledProfile)>,
}

pub fn run_statics(alpha: f64, n_sites: usize, collapse_eps: &[f64]) -> Result<LrStaticResult> {
    let p = LongRangeParams::new(alpha, n_sites)?;
    let r_grid = log_r_grid(n_sites / 8, 120);
    let critical = lr_static_profile(&p, 0.0, &r_grid)?;
    let off_critical = lr_static_profile(&p, -2.0, &r_grid)?;
    let eta = 1.0;
    let nu = 1.0 / (alpha - 1.0);
    let mut collapse = Vec::with_capacity(collapse_eps.len());
    for &eps in collapse_eps {
        let prof = lr_static_profile(&p, eps, &r_grid)?;
        let xi = eps.abs().powf(-nu);
        let scaled = ScaledProfile {
            model_id: prof.model_id.clone(),
            tau_q: f64::MAX,
            s: eps,
            x: prof.r_values.iter().map(|&r| r as f64 / xi).collect(),
            y: prof.c_values.iter().map(|&c| xi.powf(eta) * c).collect(),
            y_err: None,
        };
        collapse.push((eps, scaled));
    }
    Ok(LrStaticResult { critical, off_critical, collapse })
}

/// Merge collapse members into (x, y) clouds and fit the two crossover
/// slopes on log-log windows.
pub fn crossover_slopes(
    collapse: &[(f64, ScaledProfile)],
    small_window: (f64, f64),
    large_window: (f64, f64),
) -> Result<(f64, f64)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (_, sp) in collapse {
        xs.extend_from_slice(&sp.x);
        ys.extend_from_slice(&sp.y);
    }
    let small = super::loglog_slope(&xs, &ys, small_window.0, small_window.1)?;
    let large = super::loglog_slope(&xs, &ys, large_window.0, large_window.1)?;
    Ok((small, large))
}

/// Linear-quench snapshot: scaled profile and its power-basis tail fit
/// y = A x^{-3/2} + B x^{-2} + C x^{-5/2}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LrQuenchSlice {
    pub tau_q: f64,
    pub s: f64,
    pub scaled: ScaledProfile,
    pub abc: TailFit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LrQuenchConfig {
    pub alpha: f64,
    pub n_sites: usize,
    pub tau_q_list: Vec<f64>,
    pub s_list: Vec<f64>,
    /// Scaled-distance window of the ABC tail fit.
    pub fit_window: (f64, f64),
    /// Largest scaled distance kept in the profiles.
    pub x_max: f64,
}

impl LrQuenchConfig {
    pub fn acceptance() -> Self {
        LrQuenchConfig {
            alpha: 1.5,
            n_sites: 1 << 17,
            tau_q_list: vec![256.0, 1024.0],
            s_list: vec![-2.0, -1.5, -1.0, -0.5, 0.0, 0.25, 0.35, 0.4],
            fit_window: (3.0, 20.0),
            x_max: 30.0,
        }
    }
}

pub fn run_quench(config: &LrQuenchConfig) -> Result<Vec<LrQuenchSlice>> {
    let p = LongRangeParams::new(config.alpha, config.n_sites)?;
    let mut out = Vec::new();
    for &tau_q in &config.tau_q_list {
        let scales = p.scales(tau_q);
        let r_max = ((config.x_max * scales.xi_hat) as usize).min(config.n_sites / 4);
        let r_grid = log_r_grid(r_max, 160);
        for &s in &config.s_list {
            let t = s * scales.t_hat;
            let prof = lr_quench_profile(&p, tau_q, t, &r_grid)?;
            let scaled = rescale_profile(&prof, &scales, 1.0);
            let abc = power_tail_fit(&scaled.x, &scaled.y, &[1.5, 2.0, 2.5], config.fit_window)?;
            out.push(LrQuenchSlice { tau_q, s, scaled, abc });
        }
    }
    Ok(out)
}

/// Adiabatic reference A_ad(s): the same tail fit applied to the static
/// ground-state profile at epsilon(s), expressed in the quench's scaled
/// variables.
pub fn adiabatic_a_of_s(config: &LrQuenchConfig, tau_q: f64, s: f64) -> Result<f64> {
    let p = LongRangeParams::new(config.alpha, config.n_sites)?;
    let scales = p.scales(tau_q);
    let eps = s * scales.t_hat / tau_q;
    let r_max = ((config.x_max * scales.xi_hat) as usize).min(config.n_sites / 4);
    let r_grid = log_r_grid(r_max, 160);
    let prof = lr_static_profile(&p, eps, &r_grid)?;
    let scaled = rescale_profile(&prof, &scales, 1.0);
    let abc = power_tail_fit(&scaled.x, &scaled.y, &[1.5, 2.0, 2.5], config.fit_window)?;
    Ok(abc.get("c0").unwrap())
}

/// Sudden-quench profile series at the requested times (raw distances).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuddenResult {
    pub source: SuddenSource,
    pub profiles: Vec<CorrelationProfile>,
    /// Tail fits with fixed exponents {3/2, 2, 5/2} on the raw-R window.
    pub abc: Vec<(f64, TailFit)>,
}

pub fn run_sudden(
    alpha: f64,
    n_sites: usize,
    source: SuddenSource,
    times: &[f64],
    fit_window: (f64, f64),
) -> Result<SuddenResult> {
    let p = LongRangeParams::new(alpha, n_sites)?;
    // log-spaced overall, dense inside the tail-fit window
    let mut r_grid = log_r_grid(n_sites / 8, 200);
    let stride = (((fit_window.1 - fit_window.0) / 80.0).floor() as u32).max(1);
    let mut r = fit_window.0.ceil() as u32;
    while (r as f64) <= fit_window.1 {
        r_grid.push(r);
        r += stride;
    }
    r_grid.sort_unstable();
    r_grid.dedup();
    let mut profiles = Vec::with_capacity(times.len());
    let mut abc = Vec::with_capacity(times.len());
    for &t in times {
        let prof = sudden_quench_profile(&p, source, t, &r_grid)?;
        let x: Vec<f64> = prof.r_values.iter().map(|&r| r as f64).collect();
        let fit = power_tail_fit(&x, &prof.c_values, &[1.5, 2.0, 2.5], fit_window)?;
        abc.push((t, fit));
        profiles.push(prof);
    }
    Ok(SuddenResult { source, profiles, abc })
}
