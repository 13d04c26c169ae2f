//! Long-range extended Ising chain, 1 < alpha < 2 (dynamical exponent
//! z = alpha - 1 < 1).
//!
//! Couplings J_r = r^(-alpha)/zeta(alpha) Fourier-transform to the
//! polylogarithm, J~_k = Li_alpha(e^{ik})/zeta(alpha), giving
//! A_k(eps) = 1 - eps - Re J~_k and B_k = Im J~_k. The relevant correlator
//! is the string form <sigma^x sigma^z ... sigma^z sigma^x>, a single
//! fermion bilinear: C_R = delta_R0 - 2 alpha_R + 2 Re beta_R.

use crate::error::{Error, Result};
use crate::freefermion::lz::{adiabatic_mode, lz_mode, weber_lz_amplitudes, LzMapping, ModeMethod};
use crate::freefermion::{string_correlator, two_point_tables_at, MomentumGrid, PairAmplitudes, StaticMode};
use crate::profile::CorrelationProfile;
use crate::protocol::{kz_scales, CriticalExponents, KzFlavor, KzScales};
use crate::specfun::{gamma_real, riemann_zeta, zeta_real, PolylogEval};
use num_complex::Complex64;
use rayon::prelude::*;

/// Model parameters. The range exponent must stay strictly inside (1, 2):
/// alpha <= 1 has no thermodynamic limit and alpha >= 2 is effectively
/// short-range.
#[derive(Debug, Clone)]
pub struct LongRangeParams {
    pub alpha: f64,
    pub n_sites: usize,
    polylog: PolylogEval,
    zeta_alpha: f64,
}

impl LongRangeParams {
    pub fn new(alpha: f64, n_sites: usize) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::domain(
                "LongRangeParams",
                format!("range exponent must satisfy 1 < alpha < 2, got {alpha}"),
            ));
        }
        if n_sites < 4 || n_sites % 2 != 0 {
            return Err(Error::invalid("LongRangeParams", format!("n_sites must be even and >= 4, got {n_sites}")));
        }
        Ok(LongRangeParams {
            alpha,
            n_sites,
            polylog: PolylogEval::new(alpha)?,
            zeta_alpha: riemann_zeta(alpha)?,
        })
    }

    /// Normalized coupling Fourier transform J~_k.
    pub fn j_tilde(&self, k: f64) -> Result<Complex64> {
        Ok(self.polylog.eval(k)? / self.zeta_alpha)
    }

    /// z = alpha - 1, nu = 1/z (so z nu = 1), eta = 1 at criticality.
    pub fn exponents(&self) -> CriticalExponents {
        let z = self.alpha - 1.0;
        CriticalExponents { z, nu: 1.0 / z, eta_or_delta: 1.0 }
    }

    /// KZ scales with unit prefactors: t_hat = sqrt(tau_Q),
    /// xi_hat = tau_Q^(1/(2(alpha-1))).
    pub fn scales(&self, tau_q: f64) -> KzScales {
        kz_scales(&self.exponents(), tau_q, KzFlavor::PowerLaw, None).expect("tau_q > 0")
    }

    /// Static correlation length xi = |eps|^(-nu).
    pub fn static_xi(&self, epsilon: f64) -> f64 {
        epsilon.abs().powf(-1.0 / (self.alpha - 1.0))
    }
}

/// (A_k, B_k, omega_k) at distance `epsilon` from the critical point.
pub fn lr_dispersion(p: &LongRangeParams, epsilon: f64, k: f64) -> Result<(f64, f64, f64)> {
    let j = p.j_tilde(k)?;
    let a_k = 1.0 - epsilon - j.re;
    let b_k = j.im;
    Ok((a_k, b_k, 2.0 * (a_k * a_k + b_k * b_k).sqrt()))
}

/// Small-k expansion coefficients of J~_k:
/// Im J~_k ~ a_alpha k^(alpha-1) + c_alpha k,
/// Re J~_k ~ 1 + b_alpha k^(alpha-1).
pub fn small_k_constants(alpha: f64) -> (f64, f64, f64) {
    let z = riemann_zeta(alpha).expect("alpha > 1");
    let g = gamma_real(1.0 - alpha);
    let a = g * (std::f64::consts::PI * alpha / 2.0).cos() / z;
    let b = g * (std::f64::consts::PI * alpha / 2.0).sin() / z;
    let c = zeta_real(alpha - 1.0) / z;
    (a, b, c)
}

/// Analytic late-tail coefficient of the sudden quench from infinite field:
/// C_R(t) -> coeff * t^2 / R^(2 alpha - 1) at large R. Assembled from the
/// small-k asymptotics of the mode functions and the cosine-transform
/// asymptote of k^(2(alpha-1)).
pub fn sudden_tail_coefficient(alpha: f64) -> f64 {
    let z = riemann_zeta(alpha).expect("alpha > 1");
    let g = gamma_real(1.0 - alpha);
    let pi = std::f64::consts::PI;
    let c1 = (1.0 + (pi * alpha).cos()) / 8.0;
    -(32.0 / pi) * g * g * c1 * gamma_real(2.0 * alpha - 1.0) * (pi * (alpha - 1.0)).sin() / (z * z)
}

fn ground_modes(p: &LongRangeParams, grid: &MomentumGrid, epsilon: f64) -> Result<Vec<StaticMode>> {
    grid.k_values
        .iter()
        .map(|&k| {
            let (a, b, _) = lr_dispersion(p, epsilon, k)?;
            StaticMode::solve(k, a, b)
        })
        .collect()
}

fn profile_at(
    modes: &[PairAmplitudes],
    n_sites: usize,
    r_list: &[u32],
    model: &str,
    t: f64,
    tau_q: f64,
) -> Result<CorrelationProfile> {
    let (alpha_r, beta_r) = two_point_tables_at(modes, n_sites, r_list);
    let c: Vec<f64> = r_list
        .iter()
        .zip(alpha_r.iter().zip(&beta_r))
        .map(|(&r, (&a, &b))| string_correlator(a, b, r))
        .collect();
    CorrelationProfile::new(model, t, tau_q, r_list.to_vec(), c, 1, None)
}

/// Logarithmically spaced integer distances in [1, r_max], deduplicated.
pub fn log_r_grid(r_max: usize, points: usize) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(points);
    let lmax = (r_max as f64).ln();
    for i in 0..points {
        let r = ((i as f64 / (points - 1) as f64 * lmax).exp()).round() as u32;
        let r = r.clamp(1, r_max as u32);
        if out.last() != Some(&r) {
            out.push(r);
        }
    }
    out
}

/// Ground-state string correlator at fixed epsilon on the chosen distances.
pub fn lr_static_profile(p: &LongRangeParams, epsilon: f64, r_list: &[u32]) -> Result<CorrelationProfile> {
    if epsilon > 0.0 {
        return Err(Error::domain("lr_static_profile", "statics are taken on the paramagnetic side (epsilon <= 0)"));
    }
    let grid = MomentumGrid::new(p.n_sites)?;
    let modes: Vec<PairAmplitudes> = ground_modes(p, &grid, epsilon)?
        .into_iter()
        .map(|m| PairAmplitudes { k: m.k, u: Complex64::new(m.u, 0.0), v: Complex64::new(m.v, 0.0), t: 0.0 })
        .collect();
    profile_at(&modes, p.n_sites, r_list, "longrange", 0.0, f64::MAX)
}

/// Exact Landau-Zener amplitudes of the linear ramp at momentum k, time t.
pub fn lr_quench_modes(p: &LongRangeParams, tau_q: f64, k: f64, t: f64) -> Result<(PairAmplitudes, ModeMethod)> {
    let j = p.j_tilde(k)?;
    lz_mode(tau_q, j.im, 1.0 - j.re, k, t)
}

/// Scaled-variable approximation: the exact mapping with J~_k replaced by
/// its small-k asymptote (including the subleading linear term), so the
/// amplitudes depend on the scaled momentum and time combinations only.
/// Valid for slow quenches and small k.
pub fn lr_quench_modes_scaled(p: &LongRangeParams, tau_q: f64, k: f64, t: f64) -> Result<(PairAmplitudes, ModeMethod)> {
    let (a_im, b_re, c_im) = small_k_constants(p.alpha);
    let b_k = a_im * k.powf(p.alpha - 1.0) + c_im * k;
    let eps_c = -b_re * k.powf(p.alpha - 1.0);
    let map = LzMapping::new(tau_q, b_k, eps_c, t);
    if map.tau_k > crate::freefermion::lz::TAU_K_WEBER_MAX {
        return Ok((adiabatic_mode(tau_q, b_k, eps_c, k, t), ModeMethod::Adiabatic));
    }
    let (u, v) = weber_lz_amplitudes(map)?;
    let pa = PairAmplitudes { k, u, v, t };
    pa.check_norm(1e-8)?;
    Ok((pa, ModeMethod::Scaled))
}

/// Correlation profile during the linear quench.
pub fn lr_quench_profile(p: &LongRangeParams, tau_q: f64, t: f64, r_list: &[u32]) -> Result<CorrelationProfile> {
    let grid = MomentumGrid::new(p.n_sites)?;
    let results: Vec<Result<(PairAmplitudes, ModeMethod)>> = grid
        .k_values
        .par_iter()
        .map(|&k| lr_quench_modes(p, tau_q, k, t))
        .collect();
    let mut modes = Vec::with_capacity(results.len());
    for r in results {
        modes.push(r?.0);
    }
    profile_at(&modes, p.n_sites, r_list, "longrange", t, tau_q)
}

/// Initial state of a sudden quench to the critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuddenSource {
    /// Fully polarized ground state at infinite transverse field:
    /// (u, v) = (1, 0) for every mode.
    InfiniteField,
    /// Ground state at epsilon = -1.
    EpsilonMinusOne,
}

/// Correlation profile a time `t` after a sudden quench to epsilon = 0.
pub fn sudden_quench_profile(
    p: &LongRangeParams,
    source: SuddenSource,
    t: f64,
    r_list: &[u32],
) -> Result<CorrelationProfile> {
    let grid = MomentumGrid::new(p.n_sites)?;
    let final_modes = ground_modes(p, &grid, 0.0)?;
    let init: Vec<(f64, f64)> = match source {
        SuddenSource::InfiniteField => grid.k_values.iter().map(|_| (1.0, 0.0)).collect(),
        SuddenSource::EpsilonMinusOne => ground_modes(p, &grid, -1.0)?
            .into_iter()
            .map(|m| (m.u, m.v))
            .collect(),
    };
    let modes: Vec<PairAmplitudes> = final_modes
        .iter()
        .zip(init)
        .map(|(m, (u0, v0))| {
            // expand the initial mode in the post-quench eigenbasis and
            // attach the dynamical phases
            let c_plus = m.u * u0 + m.v * v0;
            let c_minus = -m.v * u0 + m.u * v0;
            let ph_m = Complex64::new(0.0, -m.omega * t).exp();
            let ph_p = Complex64::new(0.0, m.omega * t).exp();
            let u = c_plus * ph_m * m.u - c_minus * ph_p * m.v;
            let v = c_plus * ph_m * m.v + c_minus * ph_p * m.u;
            PairAmplitudes { k: m.k, u, v, t }
        })
        .collect();
    profile_at(&modes, p.n_sites, r_list, "longrange", t, f64::MAX)
}
