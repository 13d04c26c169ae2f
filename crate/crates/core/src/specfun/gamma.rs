//! Gamma function for real and complex arguments (Lanczos approximation).

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function of a complex argument.
///
/// Poles at non-positive integers return `inf`.
pub fn gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        let s = (PI * z).sin();
        if s.norm() == 0.0 {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        return PI / (s * gamma_complex(Complex64::new(1.0, 0.0) - z));
    }
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(zm1 + 0.5) * (-t).exp() * acc
}

/// Reciprocal gamma, 1/Gamma(z); entire, exactly zero-ish at the poles of
/// Gamma (no infinities are ever formed).
pub fn recip_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
        return (PI * z).sin() * gamma_complex(Complex64::new(1.0, 0.0) - z) / PI;
    }
    1.0 / gamma_complex(z)
}

/// Gamma function of a real argument.
pub fn gamma_real(x: f64) -> f64 {
    gamma_complex(Complex64::new(x, 0.0)).re
}
