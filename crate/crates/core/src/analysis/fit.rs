//! Linear least squares (with condition control) and the small nonlinear
//! searches used by the tail fits.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Straight-line fit y = a x + b; returns (slope, intercept, slope_stderr).
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::invalid("linear_fit", "need >= 2 matching points"));
    }
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Err(Error::RankDeficient { cond: f64::INFINITY, limit: 1e10 });
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mut sse = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let r = yi - slope * xi - intercept;
        sse += r * r;
    }
    let dof = (x.len() as f64 - 2.0).max(1.0);
    let stderr = (sse / dof * n / denom).sqrt();
    Ok((slope, intercept, stderr))
}

/// Weighted straight-line fit with weights w (= 1/sigma^2).
pub fn weighted_linear_fit(x: &[f64], y: &[f64], w: &[f64]) -> Result<(f64, f64, f64, f64)> {
    if x.len() != y.len() || x.len() != w.len() || x.len() < 2 {
        return Err(Error::invalid("weighted_linear_fit", "need >= 2 matching points"));
    }
    let sw: f64 = w.iter().sum();
    let swx: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum();
    let swy: f64 = y.iter().zip(w).map(|(a, b)| a * b).sum();
    let swxx: f64 = x.iter().zip(w).map(|(a, b)| a * a * b).sum();
    let swxy: f64 = x.iter().zip(y).zip(w).map(|((a, b), c)| a * b * c).sum();
    let denom = sw * swxx - swx * swx;
    if denom.abs() < 1e-30 {
        return Err(Error::RankDeficient { cond: f64::INFINITY, limit: 1e10 });
    }
    let slope = (sw * swxy - swx * swy) / denom;
    let intercept = (swy - slope * swx) / sw;
    // parameter variances of the weighted normal equations
    let slope_var = sw / denom;
    let intercept_var = swxx / denom;
    Ok((slope, intercept, slope_var.sqrt(), intercept_var.sqrt()))
}

/// General linear least squares against a design matrix built from basis
/// functions. Returns (coefficients, coefficient stderr, residual rms).
pub fn basis_lsq(rows: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let n = rows.len();
    if n == 0 || n != y.len() {
        return Err(Error::invalid("basis_lsq", "empty or mismatched system"));
    }
    let m = rows[0].len();
    if n < m {
        return Err(Error::invalid("basis_lsq", "fewer points than parameters"));
    }
    let a = DMatrix::from_fn(n, m, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = smax / smin.max(1e-300);
    if cond > 1e10 {
        return Err(Error::RankDeficient { cond, limit: 1e10 });
    }
    let coef = svd.solve(&b, 1e-14).map_err(|e| Error::invalid("basis_lsq", e))?;
    let resid = &a * &coef - &b;
    let sse: f64 = resid.iter().map(|r| r * r).sum();
    let rms = (sse / n as f64).sqrt();
    let dof = (n as f64 - m as f64).max(1.0);
    let sigma2 = sse / dof;
    // covariance = sigma^2 (A^T A)^-1 via the SVD factors
    let v = svd.v_t.as_ref().unwrap().transpose();
    let mut stderr = vec![0.0; m];
    for j in 0..m {
        let mut acc = 0.0;
        for l in 0..m {
            let s = svd.singular_values[l];
            if s > 1e-300 {
                acc += (v[(j, l)] / s).powi(2);
            }
        }
        stderr[j] = (sigma2 * acc).sqrt();
    }
    Ok((coef.iter().copied().collect(), stderr, rms))
}

/// Coordinate-descent refinement of a 2-parameter objective from a coarse
/// grid of starts. Deterministic; `f` returns the SSE for (p0, p1).
pub fn grid_refine_2d(
    f: &dyn Fn(f64, f64) -> f64,
    range0: (f64, f64),
    range1: (f64, f64),
    grid: (usize, usize),
    keep: usize,
) -> (f64, f64, f64) {
    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(grid.0 * grid.1);
    for i in 0..grid.0 {
        let p0 = range0.0 + (range0.1 - range0.0) * i as f64 / (grid.0 - 1) as f64;
        for j in 0..grid.1 {
            let p1 = range1.0 + (range1.1 - range1.0) * j as f64 / (grid.1 - 1) as f64;
            cells.push((f(p0, p1), p0, p1));
        }
    }
    cells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut best = cells[0];
    for &(_, s0, s1) in cells.iter().take(keep) {
        let refined = coordinate_descent(f, s0, s1, (range0.1 - range0.0) / grid.0 as f64, (range1.1 - range1.0) / grid.1 as f64);
        if refined.0 < best.0 {
            best = refined;
        }
    }
    best
}

fn coordinate_descent(
    f: &dyn Fn(f64, f64) -> f64,
    mut p0: f64,
    mut p1: f64,
    mut step0: f64,
    mut step1: f64,
) -> (f64, f64, f64) {
    let mut best = f(p0, p1);
    for _ in 0..60 {
        let mut improved = false;
        for (dp0, dp1) in [(step0, 0.0), (-step0, 0.0), (0.0, step1), (0.0, -step1)] {
            let v = f(p0 + dp0, p1 + dp1);
            if v < best {
                best = v;
                p0 += dp0;
                p1 += dp1;
                improved = true;
            }
        }
        if !improved {
            step0 *= 0.5;
            step1 *= 0.5;
            if step0.max(step1) < 1e-10 {
                break;
            }
        }
    }
    (best, p0, p1)
}

/// Golden-section minimization of a 1-d objective.
pub fn golden_min(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}
