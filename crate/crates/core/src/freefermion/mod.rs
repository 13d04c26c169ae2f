//! Shared machinery for the solvable fermionic chains: anti-periodic momentum
//! grids, stationary Bogoliubov modes, time-dependent pair amplitudes, and
//! the Wick-theorem contraction tables behind every spin correlator.

pub mod lz;
mod pfaffian;

pub use pfaffian::{pfaffian_skew, ScaledPfaffian};

use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// Half-integer momentum grid of the even-parity (anti-periodic) sector:
/// k = (2m - 1) pi / N for m = 1..N/2, all in (0, pi).
#[derive(Debug, Clone)]
pub struct MomentumGrid {
    pub n_sites: usize,
    pub k_values: Vec<f64>,
}

impl MomentumGrid {
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites < 2 || n_sites % 2 != 0 {
            return Err(Error::invalid("MomentumGrid", format!("n_sites must be even and >= 2, got {n_sites}")));
        }
        let k_values = (1..=n_sites / 2)
            .map(|m| (2 * m - 1) as f64 * std::f64::consts::PI / n_sites as f64)
            .collect();
        Ok(MomentumGrid { n_sites, k_values })
    }
}

/// Positive-frequency eigenmode of the stationary Bogoliubov-de Gennes
/// problem omega (U, V)^T = 2 [A sigma_z + B sigma_x] (U, V)^T.
/// Sign convention: U >= 0, the sign of V follows B.
#[derive(Debug, Clone, Copy)]
pub struct StaticMode {
    pub k: f64,
    pub u: f64,
    pub v: f64,
    pub omega: f64,
}

impl StaticMode {
    /// Solve the 2x2 eigenproblem at one momentum.
    pub fn solve(k: f64, a_k: f64, b_k: f64) -> Result<StaticMode> {
        let omega = 2.0 * (a_k * a_k + b_k * b_k).sqrt();
        if omega < 1e-14 {
            return Err(Error::DegenerateMode { k, omega });
        }
        let theta = 0.5 * b_k.atan2(a_k);
        Ok(StaticMode { k, u: theta.cos(), v: theta.sin(), omega })
    }
}

/// Stationary modes over a full grid for model dispersion functions
/// (A_k, B_k). Errors out on any (numerically) gapless momentum.
pub fn stationary_modes(
    grid: &MomentumGrid,
    a_of_k: impl Fn(f64) -> f64 + Sync,
    b_of_k: impl Fn(f64) -> f64 + Sync,
) -> Result<Vec<StaticMode>> {
    grid.k_values
        .iter()
        .map(|&k| StaticMode::solve(k, a_of_k(k), b_of_k(k)))
        .collect()
}

/// Time-dependent pair amplitudes (u_k, v_k) of one momentum mode.
#[derive(Debug, Clone, Copy)]
pub struct PairAmplitudes {
    pub k: f64,
    pub u: Complex64,
    pub v: Complex64,
    pub t: f64,
}

impl PairAmplitudes {
    /// |u|^2 + |v|^2, conserved by any BdG evolution.
    pub fn norm_sq(&self) -> f64 {
        self.u.norm_sqr() + self.v.norm_sqr()
    }

    pub fn check_norm(&self, tol: f64) -> Result<()> {
        let drift = (self.norm_sq() - 1.0).abs();
        if drift > tol {
            return Err(Error::NormDrift { t: self.t, drift, tol });
        }
        Ok(())
    }
}

/// The two-point tables alpha_R, beta_R, stored by distance R = 0..=r_max
/// (beta_0 = 0 identically).
///
/// alpha_R = (2/N) sum_k |u_k|^2 cos(kR),
/// beta_R  = (2/N) sum_k u_k conj(v_k) sin(kR);
/// the discrete sums replace (1/pi) integrals and are exact for the chain.
#[derive(Debug, Clone)]
pub struct TwoPointTables {
    pub alpha: Vec<f64>,
    pub beta: Vec<Complex64>,
}

impl TwoPointTables {
    pub fn r_max(&self) -> usize {
        self.alpha.len() - 1
    }
}

/// Accumulate the tables for all distances 0..=r_max.
pub fn two_point_tables(modes: &[PairAmplitudes], n_sites: usize, r_max: usize) -> Result<TwoPointTables> {
    if modes.len() != n_sites / 2 {
        return Err(Error::invalid("two_point_tables", format!("expected {} modes, got {}", n_sites / 2, modes.len())));
    }
    if r_max >= n_sites / 2 {
        return Err(Error::invalid("two_point_tables", format!("r_max = {r_max} must be < N/2 = {}", n_sites / 2)));
    }
    let chunks: Vec<(Vec<f64>, Vec<Complex64>)> = modes
        .par_chunks(512)
        .map(|chunk| {
            let mut alpha = vec![0.0; r_max + 1];
            let mut beta = vec![Complex64::new(0.0, 0.0); r_max + 1];
            for m in chunk {
                let w = m.u.norm_sqr();
                let uv = m.u * m.v.conj();
                let (sk, ck) = m.k.sin_cos();
                // rotate (cos kR, sin kR) incrementally over R
                let mut c = 1.0;
                let mut s = 0.0;
                for r in 0..=r_max {
                    alpha[r] += w * c;
                    beta[r] += uv * s;
                    let c2 = c * ck - s * sk;
                    s = s * ck + c * sk;
                    c = c2;
                }
            }
            (alpha, beta)
        })
        .collect();
    let mut alpha = vec![0.0; r_max + 1];
    let mut beta = vec![Complex64::new(0.0, 0.0); r_max + 1];
    for (a, b) in chunks {
        for r in 0..=r_max {
            alpha[r] += a[r];
            beta[r] += b[r];
        }
    }
    let norm = 2.0 / n_sites as f64;
    alpha.iter_mut().for_each(|v| *v *= norm);
    beta.iter_mut().for_each(|v| *v *= norm);
    Ok(TwoPointTables { alpha, beta })
}

/// Same sums evaluated only at the listed distances (large sparse profiles).
/// Returns (alpha_R, beta_R) aligned with `r_list`.
pub fn two_point_tables_at(
    modes: &[PairAmplitudes],
    n_sites: usize,
    r_list: &[u32],
) -> (Vec<f64>, Vec<Complex64>) {
    let parts: Vec<(Vec<f64>, Vec<Complex64>)> = modes
        .par_chunks(1024)
        .map(|chunk| {
            let mut alpha = vec![0.0; r_list.len()];
            let mut beta = vec![Complex64::new(0.0, 0.0); r_list.len()];
            for m in chunk {
                let w = m.u.norm_sqr();
                let uv = m.u * m.v.conj();
                for (i, &r) in r_list.iter().enumerate() {
                    let (s, c) = (m.k * r as f64).sin_cos();
                    alpha[i] += w * c;
                    beta[i] += uv * s;
                }
            }
            (alpha, beta)
        })
        .collect();
    let mut alpha = vec![0.0; r_list.len()];
    let mut beta = vec![Complex64::new(0.0, 0.0); r_list.len()];
    for (a, b) in parts {
        for i in 0..r_list.len() {
            alpha[i] += a[i];
            beta[i] += b[i];
        }
    }
    let norm = 2.0 / n_sites as f64;
    alpha.iter_mut().for_each(|v| *v *= norm);
    beta.iter_mut().for_each(|v| *v *= norm);
    (alpha, beta)
}

/// String correlator of the fermion bilinear form,
/// C_R = delta_{R,0} - 2 alpha_R + 2 Re beta_R.
pub fn string_correlator(alpha_r: f64, beta_r: Complex64, r: u32) -> f64 {
    let delta = if r == 0 { 1.0 } else { 0.0 };
    delta - 2.0 * alpha_r + 2.0 * beta_r.re
}

/// Source of Majorana contractions <a_i a_j>, <a_i b_j>, <b_i a_j>, <b_i b_j>
/// with a_i = c_i^dag + c_i and b_i = c_i^dag - c_i.
pub trait Contractions {
    fn aa(&self, i: usize, j: usize) -> Complex64;
    fn ab(&self, i: usize, j: usize) -> Complex64;
    fn ba(&self, i: usize, j: usize) -> Complex64;
    fn bb(&self, i: usize, j: usize) -> Complex64;
}

/// Translation-invariant contractions derived from the momentum tables.
#[derive(Debug, Clone)]
pub struct UniformContractions {
    alpha: Vec<f64>,
    beta: Vec<Complex64>,
}

impl UniformContractions {
    pub fn new(tables: &TwoPointTables) -> Self {
        UniformContractions { alpha: tables.alpha.clone(), beta: tables.beta.clone() }
    }

    #[inline]
    fn disp(&self, i: usize, j: usize) -> (usize, f64) {
        if j >= i { (j - i, 1.0) } else { (i - j, -1.0) }
    }
}

impl Contractions for UniformContractions {
    fn aa(&self, i: usize, j: usize) -> Complex64 {
        let (d, sgn) = self.disp(i, j);
        if d == 0 {
            return Complex64::new(0.0, 0.0);
        }
        // <a_n a_{n+d}> = -2i Im beta_d for d > 0
        Complex64::new(0.0, -2.0 * self.beta[d].im * sgn)
    }

    fn bb(&self, i: usize, j: usize) -> Complex64 {
        let (d, sgn) = self.disp(i, j);
        if d == 0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, -2.0 * self.beta[d].im * sgn)
    }

    fn ba(&self, i: usize, j: usize) -> Complex64 {
        let (d, sgn) = self.disp(i, j);
        let delta = if d == 0 { 1.0 } else { 0.0 };
        // <b_n a_{n+d}> = delta_d0 - 2 alpha_d + 2 sgn Re beta_d
        Complex64::new(delta - 2.0 * self.alpha[d] + 2.0 * sgn * self.beta[d].re, 0.0)
    }

    fn ab(&self, i: usize, j: usize) -> Complex64 {
        // <a_i b_j> = -<b_j a_i>
        -self.ba(j, i)
    }
}

/// Site-resolved contractions from real-space mode matrices (disordered
/// chains). Entries are the dense products of u^+ = u + v and u^- = u - v:
/// aa = u+ u+^dag, ab = u+ u-^dag, ba = -u- u+^dag, bb = -u- u-^dag.
#[derive(Debug, Clone)]
pub struct SiteContractions {
    n: usize,
    aa: Vec<Complex64>,
    ab: Vec<Complex64>,
    bb: Vec<Complex64>,
}

impl SiteContractions {
    /// `u_plus`, `u_minus` are row-major [site][mode] matrices.
    pub fn new(n: usize, u_plus: &[Complex64], u_minus: &[Complex64]) -> Self {
        let gram = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![Complex64::new(0.0, 0.0); n * n];
            out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                let xi = &x[i * n..(i + 1) * n];
                for (j, cell) in row.iter_mut().enumerate() {
                    let yj = &y[j * n..(j + 1) * n];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m in 0..n {
                        acc += xi[m] * yj[m].conj();
                    }
                    *cell = acc;
                }
            });
            out
        };
        SiteContractions {
            n,
            aa: gram(u_plus, u_plus),
            ab: gram(u_plus, u_minus),
            bb: gram(u_minus, u_minus),
        }
    }
}

impl Contractions for SiteContractions {
    fn aa(&self, i: usize, j: usize) -> Complex64 {
        if i == j {
            return Complex64::new(0.0, 0.0);
        }
        self.aa[i * self.n + j]
    }

    fn ab(&self, i: usize, j: usize) -> Complex64 {
        self.ab[i * self.n + j]
    }

    fn ba(&self, i: usize, j: usize) -> Complex64 {
        -self.ab[j * self.n + i]
    }

    fn bb(&self, i: usize, j: usize) -> Complex64 {
        if i == j {
            return Complex64::new(0.0, 0.0);
        }
        -self.bb[i * self.n + j]
    }
}

/// Longitudinal spin correlator <sigma^x_i sigma^x_{i+r}> by Wick's theorem.
///
/// The Jordan-Wigner product b_i a_{i+1} b_{i+1} ... b_{i+r-1} a_{i+r}
/// pairs into the Pfaffian of the 2r x 2r skew matrix of contractions;
/// the Pfaffian carries the correlator sign directly, and its square
/// reproduces the determinant form |C| = sqrt(|det|).
pub fn string_correlator_det<T: Contractions>(tables: &T, i: usize, r: usize) -> Result<f64> {
    if r == 0 {
        return Ok(1.0);
    }
    let n = 2 * r;
    // operator order: b_i, (a_{i+1}, b_{i+1}), ..., (a_{i+r-1}, b_{i+r-1}), a_{i+r}
    let site = |p: usize| -> (usize, bool) {
        // (site index, is_b)
        if p == 0 {
            (i, true)
        } else if p == n - 1 {
            (i + r, false)
        } else {
            (i + p.div_ceil(2), p % 2 == 0)
        }
    };
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for p in 0..n {
        let (sp, bp) = site(p);
        for q in (p + 1)..n {
            let (sq, bq) = site(q);
            let val = match (bp, bq) {
                (true, false) => tables.ba(sp, sq),
                (false, true) => tables.ab(sp, sq),
                (false, false) => tables.aa(sp, sq),
                (true, true) => tables.bb(sp, sq),
            };
            m[p * n + q] = val;
            m[q * n + p] = -val;
        }
    }
    let pf = pfaffian_skew(m, n).value();
    if !pf.re.is_finite() {
        return Err(Error::invalid("string_correlator_det", "non-finite Pfaffian"));
    }
    if pf.im.abs() > (1e-6 * pf.re.abs()).max(1e-10) {
        return Err(Error::invalid(
            "string_correlator_det",
            format!("correlator has spurious imaginary part {:.3e} (re {:.3e})", pf.im, pf.re),
        ));
    }
    Ok(pf.re)
}
