//! Polylogarithm on the unit circle, Li_alpha(e^{ik}).
//!
//! The workhorse is the Hurwitz-style expansion about k = 0,
//!
//! ```text
//! Li_s(e^{ik}) = Gamma(1-s) (-ik)^(s-1) + sum_{j>=0} zeta(s-j) (ik)^j / j!
//! ```
//!
//! valid for |k| < 2pi and non-integer s. It converges geometrically on the
//! whole momentum range [0, pi] and reproduces the singular small-k behaviour
//! exactly, so no separate small-k branch is needed. Integer s falls back to
//! direct summation with an Abel-transformed tail.

use crate::error::{Error, Result};
use crate::specfun::gamma::gamma_real;
use crate::specfun::zeta::{riemann_zeta, zeta_real};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Reusable evaluator for a fixed index `alpha`; precomputes the zeta table
/// so per-momentum evaluation is a short power series.
#[derive(Debug, Clone)]
pub struct PolylogEval {
    alpha: f64,
    /// zeta(alpha - j) for j = 0..J, empty for integer alpha.
    zetas: Vec<f64>,
    gamma_1ma: f64,
    integer_alpha: bool,
}

const J_MAX: usize = 72;

impl PolylogEval {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha <= 1.0 {
            return Err(Error::domain(
                "polylog_unit_circle",
                format!("require alpha > 1, got {alpha}"),
            ));
        }
        let integer_alpha = alpha == alpha.round();
        let (zetas, gamma_1ma) = if integer_alpha {
            (Vec::new(), 0.0)
        } else {
            let zetas = (0..=J_MAX).map(|j| zeta_real(alpha - j as f64)).collect();
            (zetas, gamma_real(1.0 - alpha))
        };
        Ok(PolylogEval { alpha, zetas, gamma_1ma, integer_alpha })
    }

    /// Li_alpha(e^{ik}) for 0 <= k <= pi to absolute accuracy 1e-10.
    pub fn eval(&self, k: f64) -> Result<Complex64> {
        if !(0.0..=PI + 1e-12).contains(&k) {
            return Err(Error::domain(
                "polylog_unit_circle",
                format!("require 0 <= k <= pi, got {k}"),
            ));
        }
        if k == 0.0 {
            return Ok(Complex64::new(riemann_zeta(self.alpha)?, 0.0));
        }
        if self.integer_alpha {
            return Ok(direct_sum_abel(self.alpha, k));
        }
        // singular part: Gamma(1-s) (-ik)^(s-1) = Gamma(1-s) k^(s-1) e^{-i pi (s-1)/2}
        let sm1 = self.alpha - 1.0;
        let singular = self.gamma_1ma
            * k.powf(sm1)
            * Complex64::new(0.0, -PI * sm1 / 2.0).exp();
        // regular part: sum_j zeta(s-j) (ik)^j / j!
        let ik = Complex64::new(0.0, k);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, &zj) in self.zetas.iter().enumerate() {
            sum += zj * term;
            term *= ik / (j as f64 + 1.0);
            if j > 8 && term.norm() * 2.0 < 1e-17 {
                break;
            }
        }
        Ok(singular + sum)
    }
}

/// Direct summation with a threefold Abel-transformed tail; used for integer
/// alpha where the expansion about k = 0 has poles.
fn direct_sum_abel(alpha: f64, k: f64) -> Complex64 {
    let z = Complex64::new(0.0, k).exp();
    let n0 = 2000usize;
    let mut head = Complex64::new(0.0, 0.0);
    let mut zn = z;
    for n in 1..n0 {
        head += zn * (n as f64).powf(-alpha);
        zn *= z;
    }
    head + tail(&|n: f64| n.powf(-alpha), z, n0, 3)
}

fn tail(a: &dyn Fn(f64) -> f64, z: Complex64, n0: usize, levels: usize) -> Complex64 {
    if levels == 0 {
        let mut s = Complex64::new(0.0, 0.0);
        let mut zn = z.powu(n0 as u32);
        for n in n0..n0 + 20_000 {
            s += zn * a(n as f64);
            zn *= z;
        }
        return s;
    }
    // sum_{n>=n0} z^n a(n) = z^n0 a(n0)/(1-z) + z/(1-z) sum_{n>=n0} z^n [a(n)-a(n+1)]
    let geom = 1.0 / (1.0 - z);
    let da = move |n: f64| a(n) - a(n + 1.0);
    z.powu(n0 as u32) * a(n0 as f64) * geom + z * geom * tail(&da, z, n0, levels - 1)
}

/// Li_alpha(e^{ik}) on the unit circle; see [`PolylogEval`].
pub fn polylog_unit_circle(alpha: f64, k: f64) -> Result<Complex64> {
    PolylogEval::new(alpha)?.eval(k)
}
