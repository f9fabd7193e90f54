//! User drops, large-scale fading, and power-controlled effective channels.
//!
//! Terminals are dropped uniformly over the annulus area between `r_min` and
//! `r_max` (the radial density is proportional to the distance). Large-scale
//! fading is deterministic given the distance; statistical power control
//! inverts it, so the effective channel seen by the base station is
//! `sqrt(rho_u) * h_k` with unit-variance fast fading `h_k`.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use crate::config::SystemConfig;
use crate::linalg::CMat;
use crate::rng::complex_normal;

/// Distances and large-scale fading coefficients for one drop of terminals.
#[derive(Debug, Clone)]
pub struct UserDrop {
    /// Distance of each active terminal from the base station, meters.
    pub distances: Vec<f64>,
    /// Large-scale fading coefficient of each terminal (linear).
    pub large_scale: Vec<f64>,
}

/// One block-fading channel realization.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// Fast fading `H`, entries i.i.d. CN(0, 1).
    pub fast_fading: CMat,
    /// Channel including geometric attenuation, column `k` is `sqrt(beta_k) h_k`.
    pub channel: CMat,
    /// Power-controlled effective channel, exactly `sqrt(rho_u) * H`.
    pub effective: CMat,
}

/// Large-scale fading at distance `d` for the configured geometry.
pub fn large_scale_fading(config: &SystemConfig, distance: f64) -> f64 {
    config.shadowing / (distance / config.radius_min).powf(config.path_loss_exp)
}

/// Drop `K` terminals uniformly over the annulus area.
pub fn drop_users<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> UserDrop {
    let r2_min = config.radius_min * config.radius_min;
    let r2_max = config.radius_max * config.radius_max;
    let mut distances = Vec::with_capacity(config.users);
    let mut large_scale = Vec::with_capacity(config.users);
    for _ in 0..config.users {
        let u: f64 = rng.random();
        let d = (r2_min + u * (r2_max - r2_min)).sqrt();
        distances.push(d);
        large_scale.push(large_scale_fading(config, d));
    }
    UserDrop { distances, large_scale }
}

/// Draw fast fading and assemble the channel matrices for one drop.
pub fn draw_channel<R: Rng + ?Sized>(
    config: &SystemConfig,
    drop: &UserDrop,
    rng: &mut R,
) -> ChannelRealization {
    assert_eq!(drop.large_scale.len(), config.users, "drop size mismatch");
    let m = config.antennas;
    let k = config.users;
    let fast_fading = Array2::from_shape_fn((m, k), |_| complex_normal(rng));
    let mut channel = fast_fading.clone();
    for (col, &beta) in drop.large_scale.iter().enumerate() {
        let scale = beta.sqrt();
        for row in 0..m {
            channel[[row, col]] *= scale;
        }
    }
    let effective = fast_fading.mapv(|z| z * Complex64::new(config.operating_power.sqrt(), 0.0));
    ChannelRealization { fast_fading, channel, effective }
}

/// Expected total uplink transmit power under statistical power control,
/// averaged over terminal positions.
pub fn average_total_power(config: &SystemConfig) -> f64 {
    let k = config.users as f64;
    let rho = config.operating_power;
    let kappa = config.path_loss_exp;
    let (r_min, r_max) = (config.radius_min, config.radius_max);
    let num = r_max.powf(kappa + 2.0) - r_min.powf(kappa + 2.0);
    let den = config.shadowing
        * (1.0 + kappa / 2.0)
        * (r_max * r_max - r_min * r_min)
        * r_min.powf(kappa);
    k * rho * num / den
}
