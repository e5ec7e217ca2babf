//! Binary CPFSK: power spectrum, fractional-power bandwidth and the SINR
//! threshold implied by a code rate under noncoherent detection.

mod rate;
mod spectrum;

pub use rate::{
    isotonic, sinr_threshold, symmetric_rate, threshold_to_db, tone_correlation, RateEstimate,
    RateThresholdTable, TableSpec, TABLE_FORMAT, TABLE_VERSION,
};
pub use spectrum::{
    cpfsk_psd, fractional_power_bandwidth, spectral_efficiency, SpectrumProfile, H_NEAR_ONE,
};
