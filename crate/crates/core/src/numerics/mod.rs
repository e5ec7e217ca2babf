//! Special functions, quadrature and interpolation used by the analytic
//! outage expressions. Everything here is generic over [`Scalar`](crate::Scalar).

pub mod hypergeometric;
pub mod interp;
pub mod poly;
pub mod quadrature;
pub mod special;

pub use hypergeometric::gauss_2f1;
pub use interp::MonotoneCubic;
pub use quadrature::{simpson, simpson_adaptive, QuadratureSpec, SimpsonEstimate, SimpsonRule};
pub use special::{erf, erf_diff, erfc, gamma, ln_bessel_i0, ln_gamma, log_gamma_ratio, recip_gamma};
