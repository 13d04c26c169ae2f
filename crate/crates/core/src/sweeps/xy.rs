//! Extended XY chain: correlation profiles over a tau_Q ladder, oscillatory
//! tail fits, scaled correlation length versus scaled time, and the
//! velocity saturation extraction.

use crate::analysis::{derivative_and_saturation, linear_fit, DerivativeSaturation, TailFit};
use crate::error::Result;
use crate::profile::{rescale_profile, CorrelationProfile, ScaledProfile};
use crate::xychain::{xx_profile, XYParams, XyMethod};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct XyLadderConfig {
    pub params: XYParams,
    pub tau_q_list: Vec<f64>,
    /// Scaled times t/t_hat at which profiles are taken.
    pub s_list: Vec<f64>,
    pub method: XyMethod,
    /// Lower end of the oscillatory fit window in units of xi_hat.
    pub x_min_fit: f64,
}

impl XyLadderConfig {
    pub fn acceptance_ladder() -> Self {
        XyLadderConfig {
            params: XYParams::default(),
            tau_q_list: (10..=20).map(|p| (2.0f64).powi(p)).collect(),
            s_list: (0..17).map(|i| -2.0 + 0.25 * i as f64).collect(),
            method: XyMethod::Weber,
            x_min_fit: 2.5,
        }
    }

    /// Grid size rule: 4096 below tau_Q = 2^14, 16384 above (keeps
    /// N > 40 xi_hat with a wide margin).
    pub fn sites_for(tau_q: f64) -> usize {
        if tau_q <= 16_384.0 {
            4096
        } else {
            16_384
        }
    }

    /// Distances retained: about 12 xi_hat, floor 40 (the fit window needs
    /// 20+ points past x_min).
    pub fn r_max_for(&self, tau_q: f64) -> usize {
        let xi = self.params.scales(tau_q).xi_hat;
        ((12.0 * xi).ceil() as usize).max(40).min(Self::sites_for(tau_q) / 8)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct XyTimeSlice {
    pub s: f64,
    pub scaled: ScaledProfile,
    pub fit: TailFit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct XyLadderResult {
    pub config: XyLadderConfig,
    /// Per tau_Q: the fitted slices at each scaled time.
    pub slices: Vec<(f64, Vec<XyTimeSlice>)>,
    /// Per tau_Q: linear slope of xi/xi_hat versus s with its stderr.
    pub xi_slopes: Vec<(f64, f64, f64)>,
    /// Present when the ladder has at least 4 quench times.
    pub saturation: Option<DerivativeSaturation>,
}

/// One profile, rescaled with Delta = 1/4.
pub fn scaled_profile_at(
    params: &XYParams,
    tau_q: f64,
    s: f64,
    n_sites: usize,
    r_max: usize,
    method: XyMethod,
) -> Result<(CorrelationProfile, ScaledProfile)> {
    let scales = params.scales(tau_q);
    let t = s * scales.t_hat;
    let prof = xx_profile(params, tau_q, t, n_sites, r_max, method)?;
    let scaled = rescale_profile(&prof, &scales, params.exponents().eta_or_delta);
    Ok((prof, scaled))
}

/// Run the ladder: profiles -> oscillatory fits -> xi(s) series -> slopes,
/// derivatives, and the saturation fit.
pub fn run_ladder(config: &XyLadderConfig) -> Result<XyLadderResult> {
    let mut slices = Vec::with_capacity(config.tau_q_list.len());
    let mut xi_series = Vec::with_capacity(config.tau_q_list.len());
    let mut xi_slopes = Vec::with_capacity(config.tau_q_list.len());
    for &tau_q in &config.tau_q_list {
        let n = XyLadderConfig::sites_for(tau_q);
        let r_max = config.r_max_for(tau_q);
        let mut per_s = Vec::with_capacity(config.s_list.len());
        let mut series = Vec::with_capacity(config.s_list.len());
        let mut seed = None;
        for &s in &config.s_list {
            let (_, scaled) = scaled_profile_at(&config.params, tau_q, s, n, r_max, config.method)?;
            let fit = crate::analysis::oscillatory_fit_seeded(&scaled, config.x_min_fit, seed)?;
            let lam = fit.get("xi_over_xihat").unwrap();
            seed = Some((fit.get("b").unwrap(), lam));
            series.push((s, lam));
            per_s.push(XyTimeSlice { s, scaled, fit });
        }
        let sv: Vec<f64> = series.iter().map(|p| p.0).collect();
        let lv: Vec<f64> = series.iter().map(|p| p.1).collect();
        let (slope, _, stderr) = linear_fit(&sv, &lv)?;
        xi_slopes.push((tau_q, slope, stderr));
        xi_series.push((tau_q, series));
        slices.push((tau_q, per_s));
    }
    let saturation = if xi_series.len() >= 4 {
        Some(derivative_and_saturation(&xi_series)?)
    } else {
        None
    };
    Ok(XyLadderResult { config: config.clone(), slices, xi_slopes, saturation })
}

/// Collapse check data: scaled profiles at fixed s for several tau_Q.
pub fn collapse_set(
    params: &XYParams,
    tau_q_list: &[f64],
    s: f64,
    method: XyMethod,
) -> Result<Vec<ScaledProfile>> {
    tau_q_list
        .iter()
        .map(|&tau_q| {
            let n = XyLadderConfig::sites_for(tau_q);
            let xi = params.scales(tau_q).xi_hat;
            let r_max = ((12.0 * xi).ceil() as usize).max(40).min(n / 8);
            Ok(scaled_profile_at(params, tau_q, s, n, r_max, method)?.1)
        })
        .collect()
}
