//! Pfaffian of a complex skew-symmetric matrix by Gaussian elimination on
//! 2x2 pivot blocks with partial pivoting (Parlett-Reid style). The running
//! product of pivots is kept in mantissa/exponent form so correlators that
//! decay over many orders of magnitude stay representable.

use num_complex::Complex64;

/// Pfaffian as mantissa * 10^log10_scale.
#[derive(Debug, Clone, Copy)]
pub struct ScaledPfaffian {
    pub mantissa: Complex64,
    pub log10_scale: f64,
}

impl ScaledPfaffian {
    pub fn value(&self) -> Complex64 {
        self.mantissa * 10f64.powf(self.log10_scale)
    }

    pub fn log10_abs(&self) -> f64 {
        self.mantissa.norm().log10() + self.log10_scale
    }
}

/// Compute the Pfaffian of the dense row-major skew-symmetric matrix `m`
/// of size `n` (n even; odd n has Pfaffian zero by convention).
pub fn pfaffian_skew(mut m: Vec<Complex64>, n: usize) -> ScaledPfaffian {
    assert_eq!(m.len(), n * n);
    let zero = ScaledPfaffian { mantissa: Complex64::new(0.0, 0.0), log10_scale: 0.0 };
    if n == 0 {
        return ScaledPfaffian { mantissa: Complex64::new(1.0, 0.0), log10_scale: 0.0 };
    }
    if n % 2 == 1 {
        return zero;
    }
    let mut mant = Complex64::new(1.0, 0.0);
    let mut scale = 0.0f64;
    for k in (0..n).step_by(2) {
        // pivot: bring the largest |m[k][j]|, j > k, into column k+1
        let mut best = k + 1;
        let mut best_norm = m[k * n + k + 1].norm();
        for j in k + 2..n {
            let v = m[k * n + j].norm();
            if v > best_norm {
                best = j;
                best_norm = v;
            }
        }
        if best_norm == 0.0 {
            return zero;
        }
        if best != k + 1 {
            for col in 0..n {
                m.swap((k + 1) * n + col, best * n + col);
            }
            for row in 0..n {
                m.swap(row * n + k + 1, row * n + best);
            }
            mant = -mant;
        }
        let pivot = m[k * n + k + 1];
        mant *= pivot;
        let an = mant.norm();
        if an > 1e100 || (an != 0.0 && an < 1e-100) {
            let adj = an.log10().floor();
            scale += adj;
            mant *= 10f64.powf(-adj);
        }
        if k + 2 >= n {
            break;
        }
        // Schur complement update of the trailing block:
        // m[i][j] += (m[k+1][i] m[k][j] - m[k][i] m[k+1][j]) / pivot
        let inv = 1.0 / pivot;
        for i in k + 2..n {
            let rki = m[k * n + i];
            let rk1i = m[(k + 1) * n + i];
            if rki.norm() == 0.0 && rk1i.norm() == 0.0 {
                continue;
            }
            for j in i + 1..n {
                let upd = (rk1i * m[k * n + j] - rki * m[(k + 1) * n + j]) * inv;
                m[i * n + j] += upd;
                m[j * n + i] -= upd;
            }
        }
    }
    ScaledPfaffian { mantissa: mant, log10_scale: scale }
}
