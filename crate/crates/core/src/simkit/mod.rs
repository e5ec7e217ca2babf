//! Monte-Carlo reference for the analytic outage paths.
//!
//! Placements, shadowing, fading and hopping collisions are drawn explicitly
//! and the SINR compared against the threshold, so every estimate here is
//! independent of the series and quadrature used in [`crate::outage`].

pub mod rng;
mod sample;
mod sim;

pub use rng::{blocks, Block, Purpose, RngSpec, BLOCK_LEN};
pub use sample::{sample_annulus, sample_indicator, sample_nakagami_gain, NakagamiGain};
pub use sim::{
    frozen_powers, simulate_conditional_outage, simulate_network_outage,
    simulate_network_outage_with, CollisionDraw, Resample, TrialBatchResult,
};
