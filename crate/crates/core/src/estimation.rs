//! Pilot construction, quantized training, and LMMSE channel estimation.
//!
//! Pilots are the first `K` columns of the `tau x tau` DFT matrix, so they
//! are orthogonal with unit-modulus entries and the training-phase Bussgang
//! gain is exactly the scalar `alpha`. Under the low-SNR structured model of
//! the quantized training covariance, the LMMSE estimator collapses to a
//! per-user correlation with the pilot, `g_hat_k = c (phi_k (x) I_M)^H r_t`.
//! The exact arcsine-law estimator is also available; it exploits the
//! Kronecker structure of the training covariance and only ever factors a
//! `tau x tau` matrix.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::frontend::{one_bit_quantize, scalar_gain, UNCORRELATED_NOISE_VAR};
use crate::linalg::{solve_complex, CMat, CVec};
use crate::rng::complex_normal_vec;

/// Orthogonal unit-modulus pilot matrix, `tau x K`.
#[derive(Debug, Clone)]
pub struct PilotMatrix {
    pub symbols: CMat,
}

impl PilotMatrix {
    pub fn pilot_len(&self) -> usize {
        self.symbols.nrows()
    }

    pub fn users(&self) -> usize {
        self.symbols.ncols()
    }
}

/// First `users` columns of the `pilot_len`-point DFT matrix.
pub fn dft_pilots(pilot_len: usize, users: usize) -> Result<PilotMatrix> {
    if pilot_len < users {
        return Err(Error::InvalidConfig(format!(
            "pilot length {pilot_len} must be at least the user count {users}"
        )));
    }
    let symbols = Array2::from_shape_fn((pilot_len, users), |(n, k)| {
        let phase = -2.0 * std::f64::consts::PI * (n * k) as f64 / pilot_len as f64;
        Complex64::from_polar(1.0, phase)
    });
    Ok(PilotMatrix { symbols })
}

/// Estimated effective channels plus their per-element statistics.
#[derive(Debug, Clone)]
pub struct ChannelEstimate {
    /// `M x K` estimate of the effective channels.
    pub effective: CMat,
    /// Per-element variance of the estimate, `sigma^2`.
    pub element_variance: f64,
    /// Per-element error variance, `rho_u - sigma^2`.
    pub error_variance: f64,
}

/// Noise-free stacked pilot observation `sum_k (phi_k (x) I_M) g_k`, length
/// `M * tau`; block `n` holds the array snapshot for pilot symbol `n`.
pub fn pilot_signal(effective: &CMat, pilots: &PilotMatrix) -> CVec {
    let (m, users) = effective.dim();
    assert_eq!(users, pilots.users(), "pilot/user count mismatch");
    let tau = pilots.pilot_len();
    let mut y = Array1::zeros(m * tau);
    for n in 0..tau {
        for k in 0..users {
            let p = pilots.symbols[[n, k]];
            for i in 0..m {
                y[n * m + i] += p * effective[[i, k]];
            }
        }
    }
    y
}

/// Quantized training observation: `Q(sum_k (phi_k (x) I_M) g_k + n_t)` with
/// `n_t ~ CN(0, I)`.
pub fn simulate_training<R: Rng + ?Sized>(
    effective: &CMat,
    pilots: &PilotMatrix,
    rng: &mut R,
) -> CVec {
    let mut y = pilot_signal(effective, pilots);
    let noise = complex_normal_vec(rng, y.len());
    y += &noise;
    one_bit_quantize(&y)
}

/// Closed-form per-element variance of the LMMSE estimate,
/// `alpha^2 tau rho^2 / (alpha^2 tau rho + alpha^2 + 1 - 2/pi)`.
pub fn estimate_variance(config: &SystemConfig) -> f64 {
    let rho = config.operating_power;
    let tau = config.pilot_len() as f64;
    let a2 = scalar_gain(config.users, rho).powi(2);
    a2 * tau * rho * rho / (a2 * tau * rho + a2 + UNCORRELATED_NOISE_VAR)
}

/// Per-element estimate variance under the exact arcsine-law training
/// covariance, `rho^2 alpha^2 [Phi^H C_r^{-1} Phi]_kk` averaged over users.
/// This is the diagonal of the exact error-covariance expression shifted by
/// `rho`, so the matching mean-squared error per user is
/// `M * (rho - exact_estimate_variance)`.
pub fn exact_estimate_variance(config: &SystemConfig) -> Result<f64> {
    let pilots = dft_pilots(config.pilot_len(), config.users)?;
    let tau = pilots.pilot_len();
    let rho = config.operating_power;
    let alpha = scalar_gain(config.users, rho);
    let phi = &pilots.symbols;
    let phi_h = crate::linalg::hermitian(phi);
    let mut factor = phi.dot(&phi_h).mapv(|z| z * rho);
    for n in 0..tau {
        factor[[n, n]] += Complex64::new(1.0, 0.0);
    }
    let quantized_factor = crate::frontend::arcsine_covariance(&factor)?;
    let weights = solve_complex(&quantized_factor, phi)?;
    let users = pilots.users();
    let mut sigma2 = 0.0;
    for k in 0..users {
        let mut dot = Complex64::new(0.0, 0.0);
        for n in 0..tau {
            dot += phi[[n, k]].conj() * weights[[n, k]];
        }
        sigma2 += rho * rho * alpha * alpha * dot.re;
    }
    Ok(sigma2 / users as f64)
}

/// Correlate the stacked observation against pilot `k`:
/// `(phi_k (x) I_M)^H r`, weighted per block by `weights` when given.
fn pilot_correlate(r_t: &CVec, pilots: &PilotMatrix, m: usize, weights: Option<&CMat>) -> CMat {
    let tau = pilots.pilot_len();
    let users = pilots.users();
    let mut out = Array2::zeros((m, users));
    for k in 0..users {
        for n in 0..tau {
            let w = match weights {
                Some(ws) => ws[[n, k]].conj(),
                None => pilots.symbols[[n, k]].conj(),
            };
            for i in 0..m {
                out[[i, k]] += w * r_t[n * m + i];
            }
        }
    }
    out
}

/// LMMSE estimate under the structured low-SNR training covariance.
pub fn lmmse_estimate(
    r_t: &CVec,
    pilots: &PilotMatrix,
    config: &SystemConfig,
) -> Result<ChannelEstimate> {
    let tau = pilots.pilot_len();
    if tau != config.pilot_len() || pilots.users() != config.users {
        return Err(Error::Dimension("pilot matrix does not match the configuration".into()));
    }
    if !r_t.len().is_multiple_of(tau) || r_t.len() / tau != config.antennas {
        return Err(Error::Dimension(format!(
            "observation length {} does not factor as M*tau = {}*{}",
            r_t.len(),
            config.antennas,
            tau
        )));
    }
    let rho = config.operating_power;
    let alpha = scalar_gain(config.users, rho);
    let a2 = alpha * alpha;
    let coeff = alpha * rho / (a2 * tau as f64 * rho + a2 + UNCORRELATED_NOISE_VAR);
    let mut effective = pilot_correlate(r_t, pilots, config.antennas, None);
    effective.mapv_inplace(|z| z * coeff);
    let element_variance = estimate_variance(config);
    Ok(ChannelEstimate { effective, element_variance, error_variance: rho - element_variance })
}

/// LMMSE estimate using the exact arcsine-law training covariance.
///
/// The unquantized training covariance is `(rho Phi Phi^H + I) (x) I_M`, and
/// the element-wise arcsine preserves the Kronecker factor, so the estimator
/// reduces to a `tau x tau` solve regardless of `M`.
pub fn lmmse_estimate_exact(
    r_t: &CVec,
    pilots: &PilotMatrix,
    config: &SystemConfig,
) -> Result<ChannelEstimate> {
    let tau = pilots.pilot_len();
    if tau != config.pilot_len() || pilots.users() != config.users {
        return Err(Error::Dimension("pilot matrix does not match the configuration".into()));
    }
    if !r_t.len().is_multiple_of(tau) || r_t.len() / tau != config.antennas {
        return Err(Error::Dimension("observation length does not factor as M*tau".into()));
    }
    let rho = config.operating_power;
    let alpha = scalar_gain(config.users, rho);
    // tau x tau unquantized covariance factor rho Phi Phi^H + I.
    let phi = &pilots.symbols;
    let phi_h = crate::linalg::hermitian(phi);
    let mut factor = phi.dot(&phi_h).mapv(|z| z * rho);
    for n in 0..tau {
        factor[[n, n]] += Complex64::new(1.0, 0.0);
    }
    let quantized_factor = crate::frontend::arcsine_covariance(&factor)?;
    // y_k = C_arc^{-1} phi_k; the estimator weight for block n is conj(y_k[n]).
    let weights = solve_complex(&quantized_factor, phi)?;
    let mut effective = pilot_correlate(r_t, pilots, config.antennas, Some(&weights));
    effective.mapv_inplace(|z| z * (rho * alpha));
    // sigma^2_k = rho^2 alpha^2 Re(phi_k^H y_k); equal across users by the
    // circulant symmetry of DFT pilots, so report the mean.
    let users = pilots.users();
    let mut sigma2 = 0.0;
    for k in 0..users {
        let mut dot = Complex64::new(0.0, 0.0);
        for n in 0..tau {
            dot += phi[[n, k]].conj() * weights[[n, k]];
        }
        sigma2 += rho * rho * alpha * alpha * dot.re;
    }
    sigma2 /= users as f64;
    Ok(ChannelEstimate { effective, element_variance: sigma2, error_variance: rho - sigma2 })
}
