//! Classical 2D Ising model on a periodic L x L lattice with single-spin
//! Glauber (heat-bath) dynamics under a linear inverse-temperature ramp
//! beta(t) = beta_c (1 + t/tau_Q), starting from a random configuration at
//! beta(-tau_Q) = 0. One unit of time is L^2 single-site updates.
//!
//! Measurements (energy, magnetization, axis-averaged correlators) run on
//! bit-packed spin planes with XOR/popcount, so they cost a small fraction
//! of a sweep even at r_max = L/8.

use crate::error::{Error, Result};
use crate::profile::CorrelationProfile;
use crate::protocol::{kz_scales, CriticalExponents, KzFlavor, KzScales};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Critical inverse temperature of the infinite square lattice.
pub const BETA_C: f64 = 0.44068679350977147;

/// ln(1 + sqrt(2)) / 2, recomputed to guard the constant.
pub fn beta_critical() -> f64 {
    (1.0 + 2.0f64.sqrt()).ln() / 2.0
}

/// Model-A exponents of this dynamics: z = 2, nu = 1, eta = 1/4.
pub fn exponents() -> CriticalExponents {
    CriticalExponents { z: 2.0, nu: 1.0, eta_or_delta: 0.25 }
}

pub fn scales(tau_q: f64) -> KzScales {
    kz_scales(&exponents(), tau_q, KzFlavor::PowerLaw, None).expect("tau_q > 0")
}

/// Linear ramp of the bath inverse temperature.
#[derive(Debug, Clone, Copy)]
pub struct RampSchedule {
    pub tau_q: f64,
}

impl RampSchedule {
    /// beta(-tau_Q) = 0, beta(0) = beta_c.
    #[inline]
    pub fn beta(&self, t: f64) -> f64 {
        BETA_C * (1.0 + t / self.tau_q)
    }
}

/// Spin lattice with its own counter-based generator state.
pub struct SpinLattice {
    pub l: usize,
    pub spins: Vec<i8>,
    rng: ChaCha8Rng,
}

impl SpinLattice {
    /// Random infinite-temperature configuration.
    pub fn random(l: usize, seed: u64) -> Result<Self> {
        if l < 8 {
            return Err(Error::invalid("SpinLattice", format!("need l >= 8, got {l}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut spins = vec![0i8; l * l];
        for chunk in spins.chunks_mut(64) {
            let mut bits = rng.next_u64();
            for s in chunk.iter_mut() {
                *s = if bits & 1 == 1 { 1 } else { -1 };
                bits >>= 1;
            }
        }
        Ok(SpinLattice { l, spins, rng })
    }

    /// All spins up (for zero-temperature stability checks).
    pub fn all_up(l: usize, seed: u64) -> Result<Self> {
        let mut lat = Self::random(l, seed)?;
        lat.spins.iter_mut().for_each(|s| *s = 1);
        Ok(lat)
    }

    /// Heat-bath thresholds on 24 bits for the five neighbor sums.
    fn thresholds(beta: f64) -> [u64; 5] {
        let mut t = [0u64; 5];
        for (i, item) in t.iter_mut().enumerate() {
            let h = (2 * i as i32 - 4) as f64;
            let p = 1.0 / (1.0 + (-2.0 * beta * h).exp());
            *item = (p * (1u64 << 24) as f64).round() as u64;
        }
        t
    }

    /// One sweep: L^2 heat-bath updates at uniformly random sites.
    /// Each updated site is set to +1 with probability 1/(1 + e^{-2 beta h}).
    pub fn glauber_sweep(&mut self, beta: f64) {
        let l = self.l;
        let l64 = l as u64;
        let table = Self::thresholds(beta);
        let n = l * l;
        for _ in 0..n {
            let r = self.rng.next_u64();
            let x = (((r & 0xF_FFFF) * l64) >> 20) as usize;
            let y = ((((r >> 20) & 0xF_FFFF) * l64) >> 20) as usize;
            let xl = if x == 0 { l - 1 } else { x - 1 };
            let xr = if x + 1 == l { 0 } else { x + 1 };
            let yu = if y == 0 { l - 1 } else { y - 1 };
            let yd = if y + 1 == l { 0 } else { y + 1 };
            let row = y * l;
            let h = self.spins[row + xl] as i32
                + self.spins[row + xr] as i32
                + self.spins[yu * l + x] as i32
                + self.spins[yd * l + x] as i32;
            let thr = table[((h + 4) >> 1) as usize];
            self.spins[row + x] = if (r >> 40) < thr { 1 } else { -1 };
        }
    }

    /// Pack spins into row bit-planes (bit = 1 for spin up).
    fn bitplanes(&self) -> (Vec<u64>, usize) {
        let l = self.l;
        let words = l.div_ceil(64);
        let mut planes = vec![0u64; l * words];
        for y in 0..l {
            for x in 0..l {
                if self.spins[y * l + x] > 0 {
                    planes[y * words + x / 64] |= 1u64 << (x % 64);
                }
            }
        }
        (planes, words)
    }
}

/// One measurement record of a single lattice.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub t: f64,
    pub beta: f64,
    /// Energy per site, E = -(1/L^2) sum over bonds, in [-2, 2].
    pub energy: f64,
    pub magnetization: f64,
    /// Connected axis-averaged correlator C_R for R = 1..=r_max.
    pub c_values: Vec<f64>,
}

fn row_mismatch_x(plane: &[u64], words: usize, l: usize, r: usize, scratch: &mut Vec<u64>) -> u64 {
    // circular left shift of each row by r bits, XOR, popcount
    scratch.clear();
    scratch.resize(words, 0);
    let word_shift = r / 64;
    let bit_shift = r % 64;
    for w in 0..words {
        let src = (w + word_shift) % words;
        let src2 = (w + word_shift + 1) % words;
        let v = if bit_shift == 0 {
            plane[src]
        } else {
            (plane[src] >> bit_shift) | (plane[src2] << (64 - bit_shift))
        };
        scratch[w] = v;
    }
    // mask to valid L bits if L is not a multiple of 64: rows are padded at
    // the top word; the shift above assumed a tight 64*words ring, which is
    // exact when l % 64 == 0 (enforced by measure()).
    let _ = l;
    let mut miss = 0u64;
    for w in 0..words {
        miss += (plane[w] ^ scratch[w]).count_ones() as u64;
    }
    miss
}

/// Measure energy, magnetization, and connected correlators up to r_max.
pub fn measure(lat: &SpinLattice, t: f64, beta: f64, r_max: usize) -> Result<Measurement> {
    let l = lat.l;
    if l % 64 != 0 {
        return Err(Error::invalid("glauber2d::measure", format!("lattice side must be a multiple of 64, got {l}")));
    }
    if r_max >= l / 2 {
        return Err(Error::invalid("glauber2d::measure", format!("r_max = {r_max} too large for L = {l}")));
    }
    let (planes, words) = lat.bitplanes();
    let n = (l * l) as f64;
    let ones: u64 = planes.iter().map(|w| w.count_ones() as u64).sum();
    let magnetization = (2.0 * ones as f64 - n) / n;

    // <s_i s_{i+R x}> and <s_i s_{i+R y}> for R = 1..=r_max
    let mut ss = vec![0.0f64; r_max + 1];
    let mut scratch = Vec::new();
    for r in 1..=r_max {
        let mut miss = 0u64;
        for y in 0..l {
            miss += row_mismatch_x(&planes[y * words..(y + 1) * words], words, l, r, &mut scratch);
        }
        let sx = 1.0 - 2.0 * miss as f64 / n;
        let mut miss_y = 0u64;
        for y in 0..l {
            let y2 = (y + r) % l;
            for w in 0..words {
                miss_y += (planes[y * words + w] ^ planes[y2 * words + w]).count_ones() as u64;
            }
        }
        let sy = 1.0 - 2.0 * miss_y as f64 / n;
        ss[r] = 0.5 * (sx + sy);
    }
    // energy from the R = 1 bond averages of both axes
    let mut miss_x1 = 0u64;
    for y in 0..l {
        miss_x1 += row_mismatch_x(&planes[y * words..(y + 1) * words], words, l, 1, &mut scratch);
    }
    let mut miss_y1 = 0u64;
    for y in 0..l {
        let y2 = (y + 1) % l;
        for w in 0..words {
            miss_y1 += (planes[y * words + w] ^ planes[y2 * words + w]).count_ones() as u64;
        }
    }
    let e = -((1.0 - 2.0 * miss_x1 as f64 / n) + (1.0 - 2.0 * miss_y1 as f64 / n));
    let m2 = magnetization * magnetization;
    let c_values = (1..=r_max).map(|r| ss[r] - m2).collect();
    Ok(Measurement { t, beta, energy: e, magnetization, c_values })
}

/// Run one seeded ramp; measurement times are rounded to whole sweeps.
/// Returns one record per requested time.
pub fn ramp_run(
    l: usize,
    tau_q: f64,
    measure_times: &[f64],
    r_max: usize,
    seed: u64,
) -> Result<Vec<Measurement>> {
    let ramp = RampSchedule { tau_q };
    let mut lat = SpinLattice::random(l, seed)?;
    let mut records = Vec::with_capacity(measure_times.len());
    let mut sweeps: i64 = 0; // completed sweeps since t = -tau_q
    let t_of = |sweeps: i64| -> f64 { -tau_q + sweeps as f64 };
    let mut targets: Vec<i64> = measure_times.iter().map(|&t| ((t + tau_q).round() as i64).max(0)).collect();
    targets.sort_unstable();
    for &target in &targets {
        while sweeps < target {
            let beta = ramp.beta(t_of(sweeps) + 0.5);
            lat.glauber_sweep(beta);
            sweeps += 1;
        }
        let t = t_of(sweeps);
        records.push(measure(&lat, t, ramp.beta(t), r_max)?);
    }
    Ok(records)
}

/// Ensemble-aggregated results of `ramp_run` over independent seeds.
#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub profiles: Vec<CorrelationProfile>,
    /// (t, mean energy, stderr) per measurement time.
    pub energy: Vec<(f64, f64, f64)>,
}

/// Warn threshold: the lattice should be much longer than the KZ length.
pub fn finite_size_ratio(l: usize, tau_q: f64) -> f64 {
    l as f64 / scales(tau_q).xi_hat
}

pub fn ensemble_ramp(
    l: usize,
    tau_q: f64,
    measure_times: &[f64],
    r_max: usize,
    seeds: &[u64],
) -> Result<EnsembleResult> {
    if seeds.is_empty() {
        return Err(Error::invalid("ensemble_ramp", "need at least one seed"));
    }
    let runs: Vec<Vec<Measurement>> = seeds
        .par_iter()
        .map(|&s| ramp_run(l, tau_q, measure_times, r_max, s))
        .collect::<Result<_>>()?;
    let n_t = runs[0].len();
    let r_values: Vec<u32> = (1..=r_max as u32).collect();
    let mut profiles = Vec::with_capacity(n_t);
    let mut energy = Vec::with_capacity(n_t);
    for ti in 0..n_t {
        let t = runs[0][ti].t;
        let samples: Vec<Vec<f64>> = runs.iter().map(|r| r[ti].c_values.clone()).collect();
        profiles.push(crate::profile::average_samples("glauber2d", t, tau_q, r_values.clone(), &samples)?);
        let n = runs.len() as f64;
        let mean = runs.iter().map(|r| r[ti].energy).sum::<f64>() / n;
        let var = runs.iter().map(|r| (r[ti].energy - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        energy.push((t, mean, (var / n).sqrt()));
    }
    Ok(EnsembleResult { profiles, energy })
}

/// Near-critical parametrization of the equilibrium internal energy,
/// U(beta) = -[1 + a (beta - beta_c) ln|beta - beta_c|] / tanh(2 beta_c).
/// At beta = beta_c the logarithmic term vanishes and U = -sqrt(2), the
/// exact critical internal energy per site.
pub fn equilibrium_energy_near_tc(beta: f64, a_coef: f64) -> Result<f64> {
    if (beta - BETA_C).abs() >= 0.1 {
        return Err(Error::domain("equilibrium_energy_near_tc", format!("|beta - beta_c| = {:.3} >= 0.1", (beta - BETA_C).abs())));
    }
    let d = beta - BETA_C;
    let log_term = if d == 0.0 { 0.0 } else { a_coef * d * d.abs().ln() };
    Ok(-(1.0 + log_term) / (2.0 * BETA_C).tanh())
}

/// Asymptotic coefficient of the (beta - beta_c) ln|beta - beta_c| term in
/// the exact internal energy, in the parametrization above: a = -4 sqrt(2)/pi.
pub fn critical_log_coefficient() -> f64 {
    -4.0 * 2.0f64.sqrt() / std::f64::consts::PI
}

/// Exact equilibrium internal energy per site of the infinite lattice,
/// u(beta) = -coth(2b) [1 + (2/pi) (2 tanh^2(2b) - 1) K(k1)],
/// k1 = 2 sinh(2b)/cosh^2(2b).
pub fn onsager_internal_energy(beta: f64) -> f64 {
    if beta <= 0.0 {
        return 0.0;
    }
    let b2 = 2.0 * beta;
    let (sh, ch) = (b2.sinh(), b2.cosh());
    let k1 = 2.0 * sh / (ch * ch);
    let k1p_sq = 1.0 - k1 * k1;
    let coef = 2.0 * (sh / ch).powi(2) - 1.0;
    let term = if k1p_sq <= 1e-30 {
        0.0
    } else {
        let kk = complete_elliptic_k(k1p_sq.sqrt());
        (2.0 / std::f64::consts::PI) * coef * kk
    };
    -(ch / sh) * (1.0 + term)
}

/// K(k) through the arithmetic-geometric mean, argument passed as k' (the
/// complementary modulus) to stay accurate near k = 1.
fn complete_elliptic_k(k_prime: f64) -> f64 {
    let mut a = 1.0f64;
    let mut b = k_prime;
    for _ in 0..60 {
        if (a - b).abs() < 1e-17 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    std::f64::consts::PI / (2.0 * a)
}
