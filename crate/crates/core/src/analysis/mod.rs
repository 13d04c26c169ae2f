//! Model-agnostic post-processing: threshold-crossing correlation ranges,
//! velocity ladders with zero-cutoff extrapolation, oscillatory and
//! power-law tail fits, numerical derivatives, and saturation extrapolation.

mod fit;
mod interp;

pub use fit::{basis_lsq, golden_min, grid_refine_2d, linear_fit, weighted_linear_fit};
pub use interp::MonotoneCubic;

use crate::error::{Error, Result};
use crate::profile::ScaledProfile;
use serde::{Deserialize, Serialize};

/// Correlation-range slope at one cutoff.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VelocityEstimate {
    pub cutoff: f64,
    /// Slope of x_c(s), in units of xi_hat / t_hat.
    pub slope: f64,
    pub slope_stderr: f64,
    pub fit_window: (f64, f64),
}

/// Velocity ladder plus its zero-cutoff extrapolation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VelocityLadder {
    pub estimates: Vec<VelocityEstimate>,
    /// Weighted (1/stderr^2) linear extrapolation of slope vs cutoff to 0.
    pub zero_cutoff: f64,
    pub zero_cutoff_stderr: f64,
    /// Unweighted variant, reported alongside.
    pub zero_cutoff_unweighted: f64,
}

/// Named-coefficient tail fit result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailFit {
    pub coefficients: Vec<(String, f64)>,
    pub stderr: Vec<f64>,
    pub residual_rms: f64,
    pub window: (f64, f64),
}

impl TailFit {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.coefficients.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// Scaled correlation range: the largest x where the monotone-cubic
/// interpolant of y(x) crosses `cutoff` from above (the final downward
/// crossing, which handles oscillatory tails).
pub fn threshold_range(scaled: &ScaledProfile, cutoff: f64) -> Result<f64> {
    if !(cutoff > 0.0) {
        return Err(Error::domain("threshold_range", format!("cutoff must be > 0, got {cutoff}")));
    }
    if !scaled.y.iter().any(|&y| y >= cutoff) {
        return Err(Error::NoCrossing { cutoff });
    }
    let interp = MonotoneCubic::new(&scaled.x, &scaled.y)?;
    interp
        .last_downward_crossing(cutoff)
        .ok_or(Error::NoCrossing { cutoff })
}

/// Least-squares slope per cutoff, then extrapolation of slope vs cutoff to
/// zero cutoff. `ranges` maps each cutoff to its (s, x_c) series.
pub fn velocity_ladder(ranges: &[(f64, Vec<(f64, f64)>)]) -> Result<VelocityLadder> {
    if ranges.len() < 3 {
        return Err(Error::invalid("velocity_ladder", "need at least 3 cutoffs"));
    }
    let c0 = ranges[0].0;
    if ranges.iter().all(|(c, _)| (*c - c0).abs() < 1e-15) {
        return Err(Error::RankDeficient { cond: f64::INFINITY, limit: 1e10 });
    }
    let mut estimates = Vec::with_capacity(ranges.len());
    for (cutoff, series) in ranges {
        if series.len() < 4 {
            return Err(Error::invalid("velocity_ladder", format!("cutoff {cutoff}: need >= 4 time points")));
        }
        let s: Vec<f64> = series.iter().map(|p| p.0).collect();
        let x: Vec<f64> = series.iter().map(|p| p.1).collect();
        let (slope, _, stderr) = linear_fit(&s, &x)?;
        estimates.push(VelocityEstimate {
            cutoff: *cutoff,
            slope,
            slope_stderr: stderr,
            fit_window: (s[0], *s.last().unwrap()),
        });
    }
    let cutoffs: Vec<f64> = estimates.iter().map(|e| e.cutoff).collect();
    let slopes: Vec<f64> = estimates.iter().map(|e| e.slope).collect();
    let weights: Vec<f64> = estimates
        .iter()
        .map(|e| 1.0 / e.slope_stderr.max(1e-12).powi(2))
        .collect();
    let (_, intercept_w, _, intercept_w_err) = weighted_linear_fit(&cutoffs, &slopes, &weights)?;
    let (_, intercept_u, _) = {
        let (a, b, se) = linear_fit(&cutoffs, &slopes)?;
        (a, b, se)
    };
    Ok(VelocityLadder {
        estimates,
        zero_cutoff: intercept_w,
        zero_cutoff_stderr: intercept_w_err,
        zero_cutoff_unweighted: intercept_u,
    })
}

/// Fit the oscillatory tail form
/// y = a x^(-1/4) exp(-x / lambda) cos(b x + c) for x > x_min.
///
/// (b, lambda) are searched on a deterministic coarse grid whose best cells
/// are refined by coordinate descent; (a, c) enter linearly and are solved
/// exactly at each candidate. `lambda` is reported as `xi_over_xihat`.
pub fn oscillatory_fit(scaled: &ScaledProfile, x_min: f64) -> Result<TailFit> {
    oscillatory_fit_seeded(scaled, x_min, None)
}

/// Same fit, optionally warm-started from a previous solution (b, lambda).
/// Successive time slices of one quench change slowly; seeding from the
/// neighbour keeps the search in the physical basin when the coarse grid
/// would hop between near-degenerate minima.
pub fn oscillatory_fit_seeded(
    scaled: &ScaledProfile,
    x_min: f64,
    seed: Option<(f64, f64)>,
) -> Result<TailFit> {
    if x_min < 2.5 {
        return Err(Error::domain("oscillatory_fit", format!("x_min = {x_min} below the universal window 2.5")));
    }
    let pts: Vec<(f64, f64)> = scaled
        .x
        .iter()
        .zip(&scaled.y)
        .filter(|(&x, _)| x > x_min)
        .map(|(&x, &y)| (x, y))
        .collect();
    if pts.len() < 20 {
        return Err(Error::invalid("oscillatory_fit", format!("only {} points beyond x_min", pts.len())));
    }
    let sse_of = |b: f64, lam: f64| -> (f64, f64, f64) {
        if lam <= 1e-3 {
            return (f64::INFINITY, 0.0, 0.0);
        }
        // y = p f1 + q f2 with f1 = envelope cos(bx), f2 = envelope sin(bx)
        let (mut s11, mut s12, mut s22, mut sy1, mut sy2, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, y) in &pts {
            let env = x.powf(-0.25) * (-x / lam).exp();
            let f1 = env * (b * x).cos();
            let f2 = env * (b * x).sin();
            s11 += f1 * f1;
            s12 += f1 * f2;
            s22 += f2 * f2;
            sy1 += y * f1;
            sy2 += y * f2;
            syy += y * y;
        }
        let det = s11 * s22 - s12 * s12;
        if det.abs() < 1e-300 {
            return (f64::INFINITY, 0.0, 0.0);
        }
        let p = (s22 * sy1 - s12 * sy2) / det;
        let q = (s11 * sy2 - s12 * sy1) / det;
        let sse = syy - p * sy1 - q * sy2;
        (sse.max(0.0), p, q)
    };
    let objective = |b: f64, lam: f64| sse_of(b, lam).0;
    let (mut best_sse, mut b_best, mut lam_best) = grid_refine_2d(&objective, (0.05, 4.0), (0.1, 6.0), (48, 36), 8);
    if let Some((b0, lam0)) = seed {
        let (sse_w, b_w, lam_w) = grid_refine_2d(
            &objective,
            ((b0 - 0.15).max(0.05), b0 + 0.15),
            ((lam0 - 0.4).max(0.05), lam0 + 0.4),
            (8, 8),
            3,
        );
        // prefer the warm-started basin unless it is clearly worse
        if sse_w <= best_sse * 1.02 {
            best_sse = sse_w;
            b_best = b_w;
            lam_best = lam_w;
        }
    }
    let _ = best_sse;
    let (sse, p, q) = sse_of(b_best, lam_best);
    if !sse.is_finite() {
        return Err(Error::FitDidNotConverge("oscillatory tail".into()));
    }
    let a = (p * p + q * q).sqrt();
    let c = (-q).atan2(p);
    let rms = (sse / pts.len() as f64).sqrt();
    Ok(TailFit {
        coefficients: vec![
            ("a".into(), a),
            ("b".into(), b_best),
            ("c".into(), c),
            ("xi_over_xihat".into(), lam_best),
        ],
        stderr: vec![f64::NAN, f64::NAN, f64::NAN, f64::NAN],
        residual_rms: rms,
        window: (x_min, pts.last().unwrap().0),
    })
}

/// Linear least squares over a fixed power basis sum_j A_j x^(-e_j) inside
/// `window`. Coefficient names are "c0", "c1", ... aligned with `exponents`.
pub fn power_tail_fit(
    x: &[f64],
    y: &[f64],
    exponents: &[f64],
    window: (f64, f64),
) -> Result<TailFit> {
    if exponents.is_empty() {
        return Err(Error::invalid("power_tail_fit", "no exponents"));
    }
    for pair in exponents.windows(2) {
        if (pair[0] - pair[1]).abs() < 1e-12 {
            return Err(Error::invalid("power_tail_fit", "exponents must be distinct"));
        }
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (&xi, &yi) in x.iter().zip(y) {
        if xi >= window.0 && xi <= window.1 {
            rows.push(exponents.iter().map(|&e| xi.powf(-e)).collect());
            rhs.push(yi);
        }
    }
    if rows.len() < exponents.len() + 1 {
        return Err(Error::invalid("power_tail_fit", format!("window holds only {} points", rows.len())));
    }
    let (coef, stderr, rms) = basis_lsq(&rows, &rhs)?;
    Ok(TailFit {
        coefficients: coef.iter().enumerate().map(|(i, &v)| (format!("c{i}"), v)).collect(),
        stderr,
        residual_rms: rms,
        window,
    })
}

/// Saturation fit v_max(tau_Q) = v_inf - c tau_Q^(-p).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaturationFit {
    pub v_infinity: f64,
    pub v_infinity_stderr: f64,
    pub amplitude: f64,
    pub exponent: f64,
    pub residual_rms: f64,
}

/// Per-quench-time scaled velocities and their saturation extrapolation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivativeSaturation {
    /// (tau_q, series of (s, v)) per quench time.
    pub v_of_s: Vec<(f64, Vec<(f64, f64)>)>,
    /// (tau_q, max v) per quench time.
    pub v_max: Vec<(f64, f64)>,
    pub fit: SaturationFit,
}

/// Central-difference derivative of xi(s) per quench time, the per-tau_Q
/// maximum, and the saturation fit across the ladder.
pub fn derivative_and_saturation(series: &[(f64, Vec<(f64, f64)>)]) -> Result<DerivativeSaturation> {
    if series.len() < 4 {
        return Err(Error::invalid("derivative_and_saturation", "need >= 4 quench times"));
    }
    let mut v_of_s = Vec::with_capacity(series.len());
    let mut v_max = Vec::with_capacity(series.len());
    for (tau_q, pts) in series {
        if pts.len() < 5 {
            return Err(Error::invalid("derivative_and_saturation", format!("tau_q = {tau_q}: need >= 5 points")));
        }
        let mut v = Vec::with_capacity(pts.len() - 2);
        for i in 1..pts.len() - 1 {
            let (s0, y0) = pts[i - 1];
            let (s1, _) = pts[i];
            let (s2, y2) = pts[i + 1];
            v.push((s1, (y2 - y0) / (s2 - s0)));
        }
        let max = v.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        v_of_s.push((*tau_q, v));
        v_max.push((*tau_q, max));
    }
    // v_max(tau) = v_inf - c tau^-p: linear in (v_inf, c) at fixed p
    let taus: Vec<f64> = v_max.iter().map(|p| p.0).collect();
    let vs: Vec<f64> = v_max.iter().map(|p| p.1).collect();
    let sse_at = |p: f64| -> f64 {
        let rows: Vec<Vec<f64>> = taus.iter().map(|&t| vec![1.0, -t.powf(-p)]).collect();
        match basis_lsq(&rows, &vs) {
            Ok((_, _, rms)) => rms * rms * taus.len() as f64,
            Err(_) => f64::INFINITY,
        }
    };
    let p_best = golden_min(&sse_at, 0.02, 1.5, 80);
    let rows: Vec<Vec<f64>> = taus.iter().map(|&t| vec![1.0, -t.powf(-p_best)]).collect();
    let (coef, stderr, rms) = basis_lsq(&rows, &vs)?;
    Ok(DerivativeSaturation {
        v_of_s,
        v_max,
        fit: SaturationFit {
            v_infinity: coef[0],
            v_infinity_stderr: stderr[0],
            amplitude: coef[1],
            exponent: p_best,
            residual_rms: rms,
        },
    })
}

/// Collapse-quality metric between two scaled profiles: the maximum
/// absolute difference over a common log-spaced x grid inside `window`,
/// normalized by the peak |y| over the same window.
pub fn collapse_deviation(a: &ScaledProfile, b: &ScaledProfile, window: (f64, f64), n_grid: usize) -> Result<f64> {
    let build = |p: &ScaledProfile| -> Result<MonotoneCubic> {
        let lx: Vec<f64> = p.x.iter().map(|&v| v.ln()).collect();
        MonotoneCubic::new(&lx, &p.y)
    };
    let ia = build(a)?;
    let ib = build(b)?;
    let lo = window.0.max(a.x[0]).max(b.x[0]).ln();
    let hi = window.1.min(*a.x.last().unwrap()).min(*b.x.last().unwrap()).ln();
    if !(hi > lo) {
        return Err(Error::invalid("collapse_deviation", "empty comparison window"));
    }
    let mut peak = 0.0f64;
    let mut dev = 0.0f64;
    for i in 0..n_grid {
        let lx = lo + (hi - lo) * i as f64 / (n_grid - 1) as f64;
        let ya = ia.eval(lx);
        let yb = ib.eval(lx);
        peak = peak.max(ya.abs()).max(yb.abs());
        dev = dev.max((ya - yb).abs());
    }
    Ok(dev / peak.max(1e-300))
}
