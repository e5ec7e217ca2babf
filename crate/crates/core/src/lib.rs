//! Outage probability and modulation-constrained transmission capacity of
//! frequency-hopping ad hoc networks that use binary CPFSK, including the
//! interference caused by spectral splatter into adjacent frequency channels.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: hypergeometric function, Simpson quadrature, special functions
//! - [`channel`]: network geometry, fading, shadowing and the collision model
//! - [`outage`]: conditional and spatially averaged outage probability
//! - [`cpfsk`]: CPFSK spectrum, fractional-power bandwidth, information rate
//! - [`capacity`]: transmission capacity objective
//! - [`optimize`]: grid search and Nelder–Mead over `(L, R, h, ψ)`
//! - [`simkit`]: independent Monte-Carlo simulator used to validate the analysis
//!
//! The numerical kernels are generic over [`Scalar`]; the network model is
//! fixed to [`Real`].

pub mod capacity;
pub mod channel;
pub mod cpfsk;
mod error;
pub mod numerics;
pub mod optimize;
pub mod outage;
mod scalar;
pub mod simkit;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Scalar type of the network model.
pub type Real = f64;

/// Quadrature settings at model precision.
pub type Quadrature = numerics::QuadratureSpec<Real>;

/// Collision probabilities at model precision.
pub type Collision = channel::CollisionModel<Real>;

/// Collision probabilities in exact rational arithmetic.
pub type ExactCollision = channel::CollisionModel<num_rational::Ratio<i64>>;

/// Monotone cubic at model precision.
pub type Interpolant = numerics::MonotoneCubic<Real>;
