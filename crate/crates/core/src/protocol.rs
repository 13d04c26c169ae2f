//! Quench protocol, critical exponents, and the derived Kibble-Zurek scales.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Linear ramp epsilon(t) = t / tau_Q over a finite time window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuenchProtocol {
    pub tau_q: f64,
    pub t_start: f64,
    pub t_end: f64,
    /// Integrator / measurement step.
    pub dt: f64,
}

impl QuenchProtocol {
    pub fn new(tau_q: f64, t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(tau_q > 0.0) {
            return Err(Error::invalid("QuenchProtocol", format!("tau_q must be > 0, got {tau_q}")));
        }
        if !(t_start < t_end) {
            return Err(Error::invalid("QuenchProtocol", format!("need t_start < t_end, got [{t_start}, {t_end}]")));
        }
        if !(dt > 0.0) {
            return Err(Error::invalid("QuenchProtocol", format!("dt must be > 0, got {dt}")));
        }
        Ok(QuenchProtocol { tau_q, t_start, t_end, dt })
    }

    /// Distance from the critical point at time `t`.
    #[inline]
    pub fn epsilon(&self, t: f64) -> f64 {
        t / self.tau_q
    }
}

/// Equilibrium exponents entering the KZ scales. `eta_or_delta` is the
/// scaling dimension used to rescale correlators; it is an input here,
/// never fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalExponents {
    pub z: f64,
    pub nu: f64,
    pub eta_or_delta: f64,
}

impl CriticalExponents {
    pub fn new(z: f64, nu: f64, eta_or_delta: f64) -> Result<Self> {
        if !(z > 0.0) || !(nu > 0.0) || !(eta_or_delta >= 0.0) {
            return Err(Error::invalid(
                "CriticalExponents",
                format!("need z > 0, nu > 0, eta >= 0; got z={z}, nu={nu}, eta={eta_or_delta}"),
            ));
        }
        Ok(CriticalExponents { z, nu, eta_or_delta })
    }
}

/// Which scale law applies: the usual power laws, or the activated
/// (logarithmic) scaling of the random Ising chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KzFlavor {
    PowerLaw,
    LogarithmicRim,
}

/// Derived Kibble-Zurek scales. All prefactors are set to exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KzScales {
    pub xi_hat: f64,
    pub t_hat: f64,
    pub v_hat: f64,
    pub flavor: KzFlavor,
}

/// Compute the KZ scales for a given quench time.
///
/// Power-law flavor: xi_hat = tau_q^(nu/(1+z nu)), t_hat = xi_hat^z.
/// Logarithmic flavor: xi_hat = ln^2(tau_q/a), t_hat = tau_q/ln(tau_q/a),
/// defined only while ln(tau_q/a) > 1.
pub fn kz_scales(
    exponents: &CriticalExponents,
    tau_q: f64,
    flavor: KzFlavor,
    rim_a: Option<f64>,
) -> Result<KzScales> {
    if !(tau_q > 0.0) {
        return Err(Error::domain("kz_scales", format!("tau_q must be > 0, got {tau_q}")));
    }
    match flavor {
        KzFlavor::PowerLaw => {
            let xi_hat = tau_q.powf(exponents.nu / (1.0 + exponents.z * exponents.nu));
            let t_hat = xi_hat.powf(exponents.z);
            Ok(KzScales { xi_hat, t_hat, v_hat: xi_hat / t_hat, flavor })
        }
        KzFlavor::LogarithmicRim => {
            let a = rim_a.ok_or_else(|| Error::domain("kz_scales", "logarithmic flavor needs rim_a"))?;
            if !(a > 0.0) {
                return Err(Error::domain("kz_scales", format!("rim_a must be > 0, got {a}")));
            }
            let l = (tau_q / a).ln();
            if l <= 1.0 {
                return Err(Error::domain(
                    "kz_scales",
                    format!("ln(tau_q/a) = {l:.4} <= 1: KZ regime undefined"),
                ));
            }
            let xi_hat = l * l;
            let t_hat = tau_q / l;
            Ok(KzScales { xi_hat, t_hat, v_hat: xi_hat / t_hat, flavor })
        }
    }
}
