//! Special functions for the exact quench solutions: the parabolic cylinder
//! (Weber) function of complex order, the polylogarithm on the unit circle,
//! the Riemann zeta function, and the gamma function backing both.

mod gamma;
mod polylog;
mod weber;
mod zeta;

pub use gamma::{gamma_complex, gamma_real, recip_gamma_complex};
pub use polylog::{polylog_unit_circle, PolylogEval};
pub use weber::{weber_d, weber_d_pair};
pub use zeta::{riemann_zeta, zeta_real};
