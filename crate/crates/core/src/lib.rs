//! Simulation and optimization toolkit for one-bit massive MIMO systems.
//!
//! The crate models a single-cell system whose base station quantizes every
//! antenna to one bit per real dimension. It provides:
//!
//! - user drops, large-scale fading, and power-controlled channels
//!   ([`channel`]);
//! - the sign quantizer with its linearized (Bussgang) model and the
//!   arcsine-law covariances ([`frontend`]);
//! - DFT pilots, quantized training, and LMMSE channel estimation
//!   ([`estimation`]);
//! - MRC/ZF receivers, matched precoders, per-antenna power allocation, and
//!   SINR evaluation for both links ([`transceive`]);
//! - the uplink-downlink SINR duality power solves ([`duality`]);
//! - Monte Carlo and closed-form achievable rates ([`rates`]);
//! - the spectral/energy-efficiency tradeoff optimizer ([`optimizer`]);
//! - reproducible substream seeding ([`rng`]) and validation suites
//!   ([`validate`]).

// Negated float comparisons like `!(x > 0.0)` are deliberate: they also
// reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod duality;
pub mod error;
pub mod estimation;
pub mod frontend;
pub mod linalg;
pub mod optimizer;
pub mod rates;
pub mod rng;
pub mod stats;
pub mod transceive;
pub mod validate;

pub use channel::{average_total_power, draw_channel, drop_users, ChannelRealization, UserDrop};
pub use config::SystemConfig;
pub use error::{Error, Result};
pub use estimation::{
    dft_pilots, estimate_variance, lmmse_estimate, lmmse_estimate_exact, simulate_training,
    ChannelEstimate, PilotMatrix,
};
pub use frontend::{
    arcsine_covariance, one_bit_quantize, quantizer_noise_covariance, BussgangGain, NoiseModel,
    QuantizerNoise,
};
pub use duality::{
    duality_roundtrip, solve_downlink_powers, solve_uplink_powers, DualityProblem,
    DualitySolution, RoundtripReport,
};
pub use optimizer::{
    energy_efficiency, optimize, pareto_sweep, spectral_efficiency, weighted_product_objective,
    OperatingPoint, ParetoPoint, SearchGrid,
};
pub use rates::{
    closed_form_rate, closed_form_rate_mrc, closed_form_rate_zf, downlink_rate, ergodic_rate_mc,
    lemma1_check, Frontend, Link, RateMethod, RateReport,
};
pub use transceive::{
    antenna_power_matrix, downlink_sinr, modified_precoders, mrc_receiver, simulate_downlink,
    simulate_uplink, uplink_sinr, zf_receiver, Processing, ProcessorSet,
};
pub use validate::{run_validation, CheckResult, ValidationOptions, ValidationReport};
