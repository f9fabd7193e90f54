//! Ergodic achievable rates: Monte Carlo evaluation of the linearized
//! system and the closed-form low-SNR approximations for MRC and ZF.
//!
//! The closed forms follow the ratio-of-expectations approximation
//! `E{log2(1 + X/Y)} ~ log2(1 + E{X}/E{Y})`, which tightens as the array
//! grows. A reference mode with unit Bussgang gain and no quantizer noise
//! gives the matching unquantized-system closed forms.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::estimation::{dft_pilots, estimate_variance, lmmse_estimate, simulate_training};
use crate::frontend::{
    quantizer_noise_covariance, scalar_gain_sq, BussgangGain, NoiseModel, QuantizerNoise,
    UNCORRELATED_NOISE_VAR,
};
use crate::linalg::hermitian;
use crate::rng::{complex_normal_mat, substream, StreamPurpose};
use crate::stats;
use crate::transceive::{downlink_sinr, receiver, uplink_sinr, Processing};

/// Transmission direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    Uplink,
    Downlink,
}

impl Link {
    pub fn label(&self) -> &'static str {
        match self {
            Link::Uplink => "ul",
            Link::Downlink => "dl",
        }
    }
}

/// How a rate figure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    MonteCarlo,
    ClosedForm,
}

/// Front-end model: the one-bit chain or the unquantized reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frontend {
    OneBit,
    Unquantized,
}

/// A per-user achievable-rate figure and its provenance.
#[derive(Debug, Clone)]
pub struct RateReport {
    /// Rate of each (statistically identical) user, bits/s/Hz.
    pub per_user_rate: f64,
    /// `K` times the per-user rate.
    pub sum_rate: f64,
    pub method: RateMethod,
    pub processing: Processing,
    pub link: Link,
    /// Channel draws behind a Monte Carlo figure; 0 for closed forms.
    pub trials: usize,
    /// Standard error of the per-user rate; 0 for closed forms.
    pub std_err: f64,
    /// Rejected-and-redrawn realizations (ZF singularity policy).
    pub redraws: usize,
}

/// `(alpha^2, sigma^2, quantizer noise variance)` for the selected front end.
pub fn frontend_params(config: &SystemConfig, frontend: Frontend) -> (f64, f64, f64) {
    match frontend {
        Frontend::OneBit => (
            scalar_gain_sq(config.users, config.operating_power),
            estimate_variance(config),
            UNCORRELATED_NOISE_VAR,
        ),
        Frontend::Unquantized => {
            let rho = config.operating_power;
            let tau = config.pilot_len() as f64;
            (1.0, tau * rho * rho / (tau * rho + 1.0), 0.0)
        }
    }
}

/// Closed-form MRC SINR.
pub fn mrc_sinr_closed_form(
    antennas: usize,
    users: usize,
    operating_power: f64,
    alpha_sq: f64,
    sigma_sq: f64,
    quantizer_noise_var: f64,
) -> f64 {
    let m = antennas as f64;
    let k = users as f64;
    alpha_sq * (sigma_sq * m + operating_power)
        / (operating_power * alpha_sq * (k - 1.0) + alpha_sq + quantizer_noise_var)
}

/// Closed-form ZF SINR; requires `M >= K + 2`.
pub fn zf_sinr_closed_form(
    antennas: usize,
    users: usize,
    operating_power: f64,
    alpha_sq: f64,
    sigma_sq: f64,
    quantizer_noise_var: f64,
) -> f64 {
    let m = antennas as f64;
    let k = users as f64;
    (alpha_sq * sigma_sq * (m - k - 1.0) + alpha_sq * operating_power)
        / (alpha_sq * (k - 1.0) * (operating_power - sigma_sq)
            + alpha_sq
            + quantizer_noise_var)
}

fn closed_form_sinr(config: &SystemConfig, processing: Processing, frontend: Frontend) -> Result<f64> {
    let (alpha_sq, sigma_sq, qnv) = frontend_params(config, frontend);
    match processing {
        Processing::Mrc => Ok(mrc_sinr_closed_form(
            config.antennas,
            config.users,
            config.operating_power,
            alpha_sq,
            sigma_sq,
            qnv,
        )),
        Processing::Zf => {
            if config.antennas < config.users + 2 {
                return Err(Error::Domain(format!(
                    "ZF closed form needs M >= K + 2, got M={}, K={}",
                    config.antennas, config.users
                )));
            }
            Ok(zf_sinr_closed_form(
                config.antennas,
                config.users,
                config.operating_power,
                alpha_sq,
                sigma_sq,
                qnv,
            ))
        }
    }
}

/// Closed-form uplink per-user rate for the selected processing and front end.
pub fn closed_form_rate(
    config: &SystemConfig,
    processing: Processing,
    frontend: Frontend,
) -> Result<RateReport> {
    config.validate()?;
    let sinr = closed_form_sinr(config, processing, frontend)?;
    let rate = (1.0 + sinr).log2();
    Ok(RateReport {
        per_user_rate: rate,
        sum_rate: config.users as f64 * rate,
        method: RateMethod::ClosedForm,
        processing,
        link: Link::Uplink,
        trials: 0,
        std_err: 0.0,
        redraws: 0,
    })
}

/// One-bit MRC closed form.
pub fn closed_form_rate_mrc(config: &SystemConfig) -> Result<RateReport> {
    closed_form_rate(config, Processing::Mrc, Frontend::OneBit)
}

/// One-bit ZF closed form.
pub fn closed_form_rate_zf(config: &SystemConfig) -> Result<RateReport> {
    closed_form_rate(config, Processing::Zf, Frontend::OneBit)
}

/// Downlink closed form: identical to the uplink one under SINR duality,
/// reported with downlink provenance.
pub fn downlink_rate(config: &SystemConfig, processing: Processing) -> Result<RateReport> {
    let mut report = closed_form_rate(config, processing, Frontend::OneBit)?;
    report.link = Link::Downlink;
    Ok(report)
}

/// Default quantizer-noise model for a given array size: exact arcsine up to
/// 512 antennas, the uncorrelated approximation beyond.
pub fn default_noise_model(antennas: usize) -> NoiseModel {
    if antennas <= 512 {
        NoiseModel::Exact
    } else {
        NoiseModel::Approx
    }
}

const MAX_REDRAWS_PER_TRIAL: usize = 64;

struct TrialOutcome {
    mean_log_rate: f64,
    redraws: usize,
}

fn run_trial(
    config: &SystemConfig,
    processing: Processing,
    link: Link,
    noise_model: NoiseModel,
    pilots: &crate::estimation::PilotMatrix,
    trial: u64,
) -> Result<TrialOutcome> {
    let mut rng_fading = substream(config.seed, StreamPurpose::FastFading, trial);
    let mut rng_training = substream(config.seed, StreamPurpose::TrainingNoise, trial);
    let rho = config.operating_power;
    let mut redraws = 0usize;
    loop {
        let effective = complex_normal_mat(&mut rng_fading, config.antennas, config.users)
            .mapv(|z| z * Complex64::new(rho.sqrt(), 0.0));
        let observed = simulate_training(&effective, pilots, &mut rng_training);
        let estimate = lmmse_estimate(&observed, pilots, config)?;
        let receiver_mat = match receiver(processing, &estimate.effective) {
            Ok(w) => w,
            Err(Error::Singular(_)) if redraws < MAX_REDRAWS_PER_TRIAL => {
                redraws += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let gain = BussgangGain::uplink_exact(&effective);
        let sinr = match link {
            Link::Uplink => {
                let noise = match noise_model {
                    NoiseModel::Approx => QuantizerNoise::Uncorrelated,
                    NoiseModel::Exact => {
                        let mut c_y = effective.dot(&hermitian(&effective));
                        for i in 0..config.antennas {
                            c_y[[i, i]] += Complex64::new(1.0, 0.0);
                        }
                        quantizer_noise_covariance(&c_y, &gain, NoiseModel::Exact)?
                    }
                };
                uplink_sinr(&effective, &receiver_mat, &gain, &noise, &vec![1.0; config.users])
            }
            Link::Downlink => {
                // Targets achieved in the uplink under the solver's model,
                // mapped to downlink powers through the duality system.
                let (processors, _targets) = crate::duality::downlink_processors(
                    &effective,
                    &receiver_mat,
                    &vec![1.0; config.users],
                )?;
                let dl_gain = BussgangGain::downlink(&processors.precoder)?;
                let noise = match noise_model {
                    NoiseModel::Approx => QuantizerNoise::Uncorrelated,
                    NoiseModel::Exact => {
                        let c_y = processors.precoder.dot(&hermitian(&processors.precoder));
                        quantizer_noise_covariance(&c_y, &dl_gain, NoiseModel::Exact)?
                    }
                };
                downlink_sinr(
                    &effective,
                    &processors.precoder,
                    &processors.antenna_amplitude,
                    &dl_gain,
                    &noise,
                )
            }
        };
        let mean_log_rate =
            sinr.iter().map(|s| (1.0 + s).log2()).sum::<f64>() / config.users as f64;
        return Ok(TrialOutcome { mean_log_rate, redraws });
    }
}

/// Monte Carlo ergodic rate: averages `log2(1 + SINR_k)` over channel draws.
///
/// Receivers and precoders come from LMMSE channel estimates; the SINR
/// formulas use the true channels. Trials are seeded individually from
/// `config.seed`, so the result is bit-identical for a fixed `(seed,
/// trials)` pair regardless of thread count, and channel draws are shared
/// across operating-power sweeps with the same seed.
pub fn ergodic_rate_mc(
    config: &SystemConfig,
    processing: Processing,
    link: Link,
    noise_model: NoiseModel,
    trials: usize,
) -> Result<RateReport> {
    config.validate()?;
    if trials == 0 {
        return Err(Error::Domain("at least one trial required".into()));
    }
    if processing == Processing::Zf && config.antennas < config.users {
        return Err(Error::Dimension("ZF needs M >= K".into()));
    }
    let pilots = dft_pilots(config.pilot_len(), config.users)?;
    let outcomes: Vec<Result<TrialOutcome>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, processing, link, noise_model, &pilots, t))
        .collect();
    let mut rates = Vec::with_capacity(trials);
    let mut redraws = 0usize;
    for outcome in outcomes {
        let o = outcome?;
        rates.push(o.mean_log_rate);
        redraws += o.redraws;
    }
    let per_user_rate = stats::mean(&rates);
    let std_err = stats::std_err_of_mean(&rates);
    Ok(RateReport {
        per_user_rate,
        sum_rate: config.users as f64 * per_user_rate,
        method: RateMethod::MonteCarlo,
        processing,
        link,
        trials,
        std_err,
        redraws,
    })
}

/// Sample-mean `E{log2(1 + X/Y)}` against `log2(1 + E{X}/E{Y})` for paired
/// nonnegative samples; reports how tight the ratio-of-expectations
/// approximation is on the data.
pub fn lemma1_check(x_samples: &[f64], y_samples: &[f64]) -> Result<(f64, f64)> {
    if x_samples.len() != y_samples.len() || x_samples.is_empty() {
        return Err(Error::Dimension("paired nonempty samples required".into()));
    }
    if x_samples.iter().chain(y_samples.iter()).any(|v| *v < 0.0) {
        return Err(Error::Domain("samples must be nonnegative".into()));
    }
    let mean_y = stats::mean(y_samples);
    if mean_y == 0.0 {
        return Err(Error::Domain("denominator samples are all zero".into()));
    }
    let lhs = x_samples
        .iter()
        .zip(y_samples)
        .map(|(x, y)| (1.0 + x / y).log2())
        .sum::<f64>()
        / x_samples.len() as f64;
    let rhs = (1.0 + stats::mean(x_samples) / mean_y).log2();
    Ok((lhs, rhs))
}
