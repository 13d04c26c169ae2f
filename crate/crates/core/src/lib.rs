//! Quench dynamics of critical spin systems at desk scale.
//!
//! The crate drives four models through linear ramps across their critical
//! points and extracts Kibble-Zurek scaling collapses and correlation
//! spreading velocities:
//!
//! * [`glauber2d`] -- classical 2D Ising model under Glauber (heat-bath)
//!   dynamics with a linear inverse-temperature ramp (z = 2),
//! * [`xychain`] -- extended quantum XY chain with cubic dispersion (z = 3),
//!   solved exactly through the Landau-Zener mapping,
//! * [`randomising`] -- random transverse-field Ising chain with activated
//!   scaling, integrated by a Suzuki-Trotter split,
//! * [`longrange`] -- long-range extended Ising chain (z < 1) with
//!   polylogarithmic couplings.
//!
//! [`core`]-level types (protocol, scales, profiles) are shared by all
//! models; [`analysis`] handles collapses, threshold ranges, and tail fits.

pub mod analysis;
pub mod error;
pub mod freefermion;
pub mod glauber2d;
pub mod longrange;
pub mod profile;
pub mod protocol;
pub mod randomising;
pub mod specfun;
pub mod sweeps;
pub mod xychain;

pub use error::{Error, Result};
pub use profile::{average_samples, rescale_profile, CorrelationProfile, ScaledProfile};
pub use protocol::{kz_scales, CriticalExponents, KzFlavor, KzScales, QuenchProtocol};

/// Complex number type used throughout (re-exported from `num-complex`).
pub type Complex = num_complex::Complex64;
