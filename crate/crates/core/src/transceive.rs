//! Linear receivers, modified precoders, per-antenna power allocation, and
//! the uplink/downlink SINR evaluators.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::frontend::{one_bit_quantize, BussgangGain, QuantizerNoise};
use crate::linalg::{hermitian, qr, CMat, CVec};
use crate::rng::complex_normal;

/// Linear processing family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Processing {
    Mrc,
    Zf,
}

impl Processing {
    pub fn label(&self) -> &'static str {
        match self {
            Processing::Mrc => "mrc",
            Processing::Zf => "zf",
        }
    }
}

impl std::str::FromStr for Processing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mrc" | "mf" => Ok(Processing::Mrc),
            "zf" => Ok(Processing::Zf),
            other => Err(Error::InvalidConfig(format!("unknown processing '{other}'"))),
        }
    }
}

/// Receiver, precoder, and power allocation for one channel realization.
#[derive(Debug, Clone)]
pub struct ProcessorSet {
    /// Receiver matrix `W`, `M x K`; stream `k` is decoded with `w_k^T`.
    pub receiver: CMat,
    /// Precoder matrix `T`, `M x K`, column `k` carries power `q_k`.
    pub precoder: CMat,
    /// Per-antenna amplitude, the diagonal of `Q`.
    pub antenna_amplitude: Array1<f64>,
    /// Per-user downlink powers `q`.
    pub user_powers: Array1<f64>,
}

/// Condition-number guard for the zero-forcing solve.
pub const ZF_CONDITION_LIMIT: f64 = 1e12;

/// MRC receiver `W = conj(G_hat)`, so `W^T = G_hat^H`.
pub fn mrc_receiver(estimate: &CMat) -> CMat {
    estimate.mapv(|z| z.conj())
}

/// ZF receiver `W^T = (G_hat^H G_hat)^{-1} G_hat^H` via a QR factorization
/// with an explicit condition guard.
pub fn zf_receiver(estimate: &CMat) -> Result<CMat> {
    let (m, k) = estimate.dim();
    if m < k {
        return Err(Error::Dimension(format!(
            "zero forcing needs at least as many antennas as users, got M={m}, K={k}"
        )));
    }
    let f = qr(estimate)?;
    let cond = f.condition_estimate();
    if !cond.is_finite() || cond > ZF_CONDITION_LIMIT {
        return Err(Error::Singular(format!(
            "estimated channel condition {cond:.3e} exceeds {ZF_CONDITION_LIMIT:.0e}"
        )));
    }
    // W^T = R^{-1} Q^H, solved once per realization.
    let eye: CMat = Array2::eye(k);
    let r_inv = f.solve_r(eye)?;
    let w_t = r_inv.dot(&hermitian(&f.factor_q));
    Ok(w_t.t().to_owned())
}

/// Receiver for the selected processing family.
pub fn receiver(processing: Processing, estimate: &CMat) -> Result<CMat> {
    match processing {
        Processing::Mrc => Ok(mrc_receiver(estimate)),
        Processing::Zf => zf_receiver(estimate),
    }
}

/// Modified precoders `t_k = sqrt(q_k / |A_u w_k|^2) A_u w_k`.
pub fn modified_precoders(
    receiver: &CMat,
    gain: &BussgangGain,
    user_powers: &[f64],
) -> Result<CMat> {
    let (m, k) = receiver.dim();
    if user_powers.len() != k {
        return Err(Error::Dimension("one power per user required".into()));
    }
    let mut precoder = Array2::zeros((m, k));
    for col in 0..k {
        if user_powers[col] < 0.0 {
            return Err(Error::Domain(format!("negative downlink power for user {col}")));
        }
        let mut norm_sq = 0.0;
        for row in 0..m {
            let v = receiver[[row, col]] * gain.at(row);
            precoder[[row, col]] = v;
            norm_sq += v.norm_sqr();
        }
        if norm_sq == 0.0 {
            return Err(Error::Domain(format!("receiver column {col} has zero norm")));
        }
        let scale = (user_powers[col] / norm_sq).sqrt();
        for row in 0..m {
            precoder[[row, col]] *= scale;
        }
    }
    Ok(precoder)
}

/// Per-antenna amplitudes `Q_mm = sqrt(sum_k |T[m,k]|^2)`; `tr(Q Q^H)` equals
/// the total downlink power.
pub fn antenna_power_matrix(precoder: &CMat) -> Array1<f64> {
    let (m, _) = precoder.dim();
    Array1::from_shape_fn(m, |row| {
        precoder.row(row).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    })
}

/// Uplink SINR of every user.
///
/// `SINR_k = p_k |w_k^T A_u g_k|^2 / (sum_{i != k} p_i |w_k^T A_u g_i|^2
///           + |w_k^T A_u|^2 + w_k^T C_eta conj(w_k))`.
pub fn uplink_sinr(
    channels: &CMat,
    receiver: &CMat,
    gain: &BussgangGain,
    noise: &QuantizerNoise,
    powers: &[f64],
) -> Array1<f64> {
    let (m, k) = channels.dim();
    assert_eq!(receiver.dim(), (m, k), "receiver shape mismatch");
    assert_eq!(powers.len(), k, "one power per user required");
    let mut sinr = Array1::zeros(k);
    for user in 0..k {
        // w_k^T A_u as a row vector
        let weighted: CVec =
            Array1::from_shape_fn(m, |row| receiver[[row, user]] * gain.at(row));
        let mut signal = 0.0;
        let mut interference = 0.0;
        for other in 0..k {
            let mut dot = Complex64::new(0.0, 0.0);
            for row in 0..m {
                dot += weighted[row] * channels[[row, other]];
            }
            let term = powers[other] * dot.norm_sqr();
            if other == user {
                signal = term;
            } else {
                interference += term;
            }
        }
        let awgn: f64 = weighted.iter().map(|z| z.norm_sqr()).sum();
        let w_col = receiver.column(user).to_owned();
        let quant = noise.quadratic_form(&w_col);
        sinr[user] = signal / (interference + awgn + quant);
    }
    sinr
}

/// Downlink SINR of every user.
///
/// `SINR_k = |g_k^T Q A_d t_k|^2 / (sum_{i != k} |g_k^T Q A_d t_i|^2
///           + g_k^T Q C_eta Q^H conj(g_k) + 1)`.
pub fn downlink_sinr(
    channels: &CMat,
    precoder: &CMat,
    antenna_amplitude: &Array1<f64>,
    gain: &BussgangGain,
    noise: &QuantizerNoise,
) -> Array1<f64> {
    let (m, k) = channels.dim();
    assert_eq!(precoder.dim(), (m, k), "precoder shape mismatch");
    assert_eq!(antenna_amplitude.len(), m, "one amplitude per antenna required");
    let mut sinr = Array1::zeros(k);
    for user in 0..k {
        // g_k^T Q A_d as a row vector
        let row_vec: CVec = Array1::from_shape_fn(m, |row| {
            channels[[row, user]] * (antenna_amplitude[row] * gain.at(row))
        });
        let mut signal = 0.0;
        let mut interference = 0.0;
        for other in 0..k {
            let mut dot = Complex64::new(0.0, 0.0);
            for row in 0..m {
                dot += row_vec[row] * precoder[[row, other]];
            }
            let term = dot.norm_sqr();
            if other == user {
                signal = term;
            } else {
                interference += term;
            }
        }
        let scaled: CVec =
            Array1::from_shape_fn(m, |row| channels[[row, user]] * antenna_amplitude[row]);
        let quant = noise.quadratic_form(&scaled);
        sinr[user] = signal / (interference + quant + 1.0);
    }
    sinr
}

/// Sample paths of the uplink through the true one-bit quantizer.
#[derive(Debug, Clone)]
pub struct UplinkSample {
    /// Soft symbol estimates, `K x N`.
    pub soft: CMat,
    /// Quantized array observations, `M x N`.
    pub quantized: CMat,
}

/// Sample paths of the downlink through the true one-bit DACs.
#[derive(Debug, Clone)]
pub struct DownlinkSample {
    /// Per-user received samples including unit-variance AWGN, `K x N`.
    pub received: CMat,
    /// Quantized transmit vectors before the per-antenna scaling, `M x N`.
    pub quantized: CMat,
    /// Precoded signal entering the DACs, `M x N`.
    pub precoded: CMat,
}

/// i.i.d. circular Gaussian unit-variance symbols, `K x N`.
pub fn gaussian_symbols<R: Rng + ?Sized>(users: usize, count: usize, rng: &mut R) -> CMat {
    Array2::from_shape_fn((users, count), |_| complex_normal(rng))
}

/// Unit-power QPSK symbols, `K x N`; available for robustness checks.
pub fn qpsk_symbols<R: Rng + ?Sized>(users: usize, count: usize, rng: &mut R) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Array2::from_shape_fn((users, count), |_| {
        let re = if rng.random::<bool>() { s } else { -s };
        let im = if rng.random::<bool>() { s } else { -s };
        Complex64::new(re, im)
    })
}

/// Transmit `symbols` over the effective uplink channel, quantize, and apply
/// the receiver; used for empirical validation of the linearized model.
pub fn simulate_uplink<R: Rng + ?Sized>(
    effective: &CMat,
    receiver: &CMat,
    symbols: &CMat,
    rng: &mut R,
) -> UplinkSample {
    let (m, k) = effective.dim();
    assert_eq!(symbols.nrows(), k, "symbol stream per user required");
    let n = symbols.ncols();
    let mut quantized = Array2::zeros((m, n));
    for col in 0..n {
        let mut y: CVec = Array1::from_shape_fn(m, |_| Complex64::new(0.0, 0.0));
        for user in 0..k {
            let s = symbols[[user, col]];
            for row in 0..m {
                y[row] += effective[[row, user]] * s;
            }
        }
        for row in 0..m {
            y[row] += complex_normal(rng);
        }
        let q = one_bit_quantize(&y);
        for row in 0..m {
            quantized[[row, col]] = q[row];
        }
    }
    let soft = receiver.t().dot(&quantized);
    UplinkSample { soft, quantized }
}

/// Precode `symbols`, quantize with the one-bit DACs, scale per antenna, and
/// propagate to the terminals with unit-variance AWGN.
pub fn simulate_downlink<R: Rng + ?Sized>(
    channels: &CMat,
    precoder: &CMat,
    antenna_amplitude: &Array1<f64>,
    symbols: &CMat,
    rng: &mut R,
) -> DownlinkSample {
    let (m, k) = channels.dim();
    assert_eq!(symbols.nrows(), k, "symbol stream per user required");
    let n = symbols.ncols();
    let precoded = precoder.dot(symbols);
    let mut quantized = Array2::zeros((m, n));
    for col in 0..n {
        for row in 0..m {
            quantized[[row, col]] = crate::frontend::quantize_scalar(precoded[[row, col]]);
        }
    }
    let mut received = Array2::zeros((k, n));
    for col in 0..n {
        for user in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in 0..m {
                acc += channels[[row, user]] * antenna_amplitude[row] * quantized[[row, col]];
            }
            received[[user, col]] = acc + complex_normal(rng);
        }
    }
    DownlinkSample { received, quantized, precoded }
}
