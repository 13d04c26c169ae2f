//! Parameterized end-to-end runs: each function drives one model through a
//! full measure-and-analyze pipeline and returns a structured, serializable
//! result. The command-line front end and the acceptance suite both call
//! these, so a canned run means the same thing everywhere.

pub mod ising;
pub mod lr;
pub mod rim;
pub mod xy;

/// Root-mean-square z-score between two (value, stderr) series sampled at
/// the same points: the aggregate "within n combined stderr" collapse test
/// for Monte Carlo data.
pub fn rms_z_score(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    let mut n = 0usize;
    for ((va, sa), (vb, sb)) in a.iter().zip(b) {
        let sigma = (sa * sa + sb * sb).sqrt();
        if sigma > 0.0 {
            acc += ((va - vb) / sigma).powi(2);
            n += 1;
        }
    }
    (acc / n.max(1) as f64).sqrt()
}

/// Log-log slope of y(x) over [x_lo, x_hi] (points with y <= 0 skipped).
pub fn loglog_slope(x: &[f64], y: &[f64], x_lo: f64, x_hi: f64) -> crate::Result<f64> {
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for (&xi, &yi) in x.iter().zip(y) {
        if xi >= x_lo && xi <= x_hi && yi.abs() > 0.0 {
            lx.push(xi.ln());
            ly.push(yi.abs().ln());
        }
    }
    let (slope, _, _) = crate::analysis::linear_fit(&lx, &ly)?;
    Ok(slope)
}
