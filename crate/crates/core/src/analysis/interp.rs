//! Monotone cubic (Fritsch-Carlson) interpolation.
//!
//! Chosen for threshold crossings: the interpolant never overshoots the
//! data, so a steep correlator tail cannot inject spurious crossings the
//! way a natural spline can.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::invalid("MonotoneCubic", "need >= 2 matching points"));
        }
        if !x.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("MonotoneCubic", "x must be strictly increasing"));
        }
        let n = x.len();
        let mut slopes = vec![0.0; n - 1];
        for i in 0..n - 1 {
            slopes[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        }
        let mut d = vec![0.0; n];
        d[0] = slopes[0];
        d[n - 1] = slopes[n - 2];
        for i in 1..n - 1 {
            if slopes[i - 1] * slopes[i] <= 0.0 {
                d[i] = 0.0;
            } else {
                // harmonic mean weighted by interval widths
                let w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
                let w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
                d[i] = (w1 + w2) / (w1 / slopes[i - 1] + w2 / slopes[i]);
            }
        }
        // Fritsch-Carlson limiter
        for i in 0..n - 1 {
            if slopes[i] == 0.0 {
                d[i] = 0.0;
                d[i + 1] = 0.0;
            } else {
                let a = d[i] / slopes[i];
                let b = d[i + 1] / slopes[i];
                let s = (a * a + b * b).sqrt();
                if s > 3.0 {
                    let t = 3.0 / s;
                    d[i] = t * a * slopes[i];
                    d[i + 1] = t * b * slopes[i];
                }
            }
        }
        Ok(MonotoneCubic { x: x.to_vec(), y: y.to_vec(), d })
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    /// Evaluate (clamped to the data range).
    pub fn eval(&self, xq: f64) -> f64 {
        let n = self.x.len();
        if xq <= self.x[0] {
            return self.y[0];
        }
        if xq >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&xq).unwrap()) {
            Ok(i) => return self.y[i],
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let t = (xq - self.x[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }

    /// The largest x where the interpolant crosses `level` from above.
    pub fn last_downward_crossing(&self, level: f64) -> Option<f64> {
        let n = self.x.len();
        let mut found = None;
        for i in 0..n - 1 {
            let (y0, y1) = (self.y[i], self.y[i + 1]);
            if y0 >= level && y1 < level {
                // bisection inside the segment (interpolant is continuous,
                // endpoints straddle the level)
                let (mut lo, mut hi) = (self.x[i], self.x[i + 1]);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if self.eval(mid) >= level {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                found = Some(0.5 * (lo + hi));
            }
        }
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_monotonicity() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.35).collect();
        let y: Vec<f64> = x.iter().map(|&v| (-v).exp()).collect();
        let p = MonotoneCubic::new(&x, &y).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((p.eval(*xi) - yi).abs() < 1e-14);
        }
        // no overshoot between nodes
        let mut prev = p.eval(0.0);
        for i in 1..400 {
            let v = p.eval(i as f64 * 0.35 * 19.0 / 400.0);
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn crossing_of_exponential() {
        let x: Vec<f64> = (0..60).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|&v| (-v).exp()).collect();
        let p = MonotoneCubic::new(&x, &y).unwrap();
        let c = p.last_downward_crossing((-2.0f64).exp()).unwrap();
        assert!((c - 2.0).abs() < 1e-3, "crossing at {c}");
    }

    #[test]
    fn scale_covariance() {
        let x: Vec<f64> = (0..30).map(|i| 0.2 + i as f64 * 0.2).collect();
        let y: Vec<f64> = x.iter().map(|&v| 1.0 / (1.0 + v * v)).collect();
        let lam = 3.7;
        let xs: Vec<f64> = x.iter().map(|&v| lam * v).collect();
        let p1 = MonotoneCubic::new(&x, &y).unwrap();
        let p2 = MonotoneCubic::new(&xs, &y).unwrap();
        let c1 = p1.last_downward_crossing(0.3).unwrap();
        let c2 = p2.last_downward_crossing(0.3).unwrap();
        assert!((c2 - lam * c1).abs() < 1e-9 * lam * c1);
    }

    #[test]
    fn oscillatory_takes_final_crossing() {
        let x: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let y: Vec<f64> = x.iter().map(|&v| (-v).exp() * (3.0 * v).cos()).collect();
        let p = MonotoneCubic::new(&x, &y).unwrap();
        let level = 0.01;
        let c = p.last_downward_crossing(level).unwrap();
        // all later samples stay below the level
        for &xi in x.iter().filter(|&&xi| xi > c + 0.05) {
            assert!(p.eval(xi) < level);
        }
    }
}
