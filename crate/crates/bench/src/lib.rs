//! Shared fixtures for the kernel benchmarks.

use num_complex::Complex64;

use onebit_mimo::linalg::CMat;
use onebit_mimo::rng::{complex_normal_mat, substream, StreamPurpose};
use onebit_mimo::SystemConfig;

/// Scenario used across the benchmarks.
pub fn bench_config(antennas: usize, rho: f64) -> SystemConfig {
    SystemConfig {
        antennas,
        users: 8,
        max_users: 120,
        pilot_ratio: 2,
        coherence: 200,
        operating_power: rho,
        uplink_fraction: 0.5,
        radius_min: 100.0,
        radius_max: 500.0,
        shadowing: 10f64.powf(0.8),
        path_loss_exp: 3.8,
        seed: 3,
    }
}

/// Deterministic effective-channel draw.
pub fn channel_fixture(antennas: usize, users: usize, rho: f64) -> CMat {
    let mut rng = substream(3, StreamPurpose::FastFading, 0);
    complex_normal_mat(&mut rng, antennas, users).mapv(|z| z * Complex64::new(rho.sqrt(), 0.0))
}

/// Hermitian positive-definite covariance fixture.
pub fn covariance_fixture(n: usize) -> CMat {
    let g = channel_fixture(n, 8, 0.1);
    let mut c = g.dot(&onebit_mimo::linalg::hermitian(&g));
    for i in 0..n {
        c[[i, i]] += Complex64::new(1.0, 0.0);
    }
    c
}
