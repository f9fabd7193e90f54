//! One-bit quantization and its statistically equivalent linearization.
//!
//! The sign quantizer applied to a Gaussian vector admits an exact linear
//! model `Q(y) = A y + eta` with `A = sqrt(2/pi) diag(C_y)^{-1/2}` and `eta`
//! uncorrelated with `y`. The covariance of the quantized output follows the
//! arcsine law, which gives the quantizer-noise covariance in closed form.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};

/// Variance of each quantizer-noise element under the uncorrelated
/// approximation, `1 - 2/pi`.
pub const UNCORRELATED_NOISE_VAR: f64 = 1.0 - std::f64::consts::FRAC_2_PI;

/// Largest matrix side for which the exact quantizer-noise covariance is
/// materialized.
pub const EXACT_COVARIANCE_LIMIT: usize = 4096;

fn sign(x: f64) -> f64 {
    // sign(0) := +1 keeps the quantizer total.
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Element-wise one-bit quantization of real and imaginary parts; every
/// output lies in `{(+-1 +-j)/sqrt(2)}`.
pub fn one_bit_quantize(y: &CVec) -> CVec {
    y.mapv(quantize_scalar)
}

/// One-bit quantization of a single sample.
pub fn quantize_scalar(y: Complex64) -> Complex64 {
    Complex64::new(sign(y.re), sign(y.im)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Bussgang gain of the quantizer, either the scalar approximation or the
/// exact per-antenna diagonal.
#[derive(Debug, Clone)]
pub enum BussgangGain {
    Scalar(f64),
    PerAntenna(Array1<f64>),
}

impl BussgangGain {
    /// Training-phase gain for DFT pilots: `sqrt((2/pi) / (K rho_u + 1))`.
    pub fn training(users: usize, operating_power: f64) -> Self {
        BussgangGain::Scalar(scalar_gain(users, operating_power))
    }

    /// Uplink data-phase gain under the i.i.d. large-`K` approximation; the
    /// same scalar as the training gain.
    pub fn uplink_approx(users: usize, operating_power: f64) -> Self {
        BussgangGain::Scalar(scalar_gain(users, operating_power))
    }

    /// Exact uplink gain for one channel realization:
    /// `sqrt(2/pi) diag(G_eff G_eff^H + I)^{-1/2}`.
    pub fn uplink_exact(effective: &CMat) -> Self {
        let m = effective.nrows();
        let mut diag = Array1::zeros(m);
        for i in 0..m {
            let row_power: f64 = effective.row(i).iter().map(|z| z.norm_sqr()).sum();
            diag[i] = (std::f64::consts::FRAC_2_PI / (row_power + 1.0)).sqrt();
        }
        BussgangGain::PerAntenna(diag)
    }

    /// Downlink gain for a precoder matrix: `sqrt(2/pi) diag(T T^H)^{-1/2}`.
    /// Fails if any antenna carries zero precoded power.
    pub fn downlink(precoder: &CMat) -> Result<Self> {
        let m = precoder.nrows();
        let mut diag = Array1::zeros(m);
        for i in 0..m {
            let row_power: f64 = precoder.row(i).iter().map(|z| z.norm_sqr()).sum();
            if row_power <= 0.0 {
                return Err(Error::Domain(format!("antenna {i} has zero precoded power")));
            }
            diag[i] = (std::f64::consts::FRAC_2_PI / row_power).sqrt();
        }
        Ok(BussgangGain::PerAntenna(diag))
    }

    /// Gain applied at antenna `i`.
    pub fn at(&self, i: usize) -> f64 {
        match self {
            BussgangGain::Scalar(a) => *a,
            BussgangGain::PerAntenna(d) => d[i],
        }
    }

    /// The scalar value, if this is the scalar form.
    pub fn scalar(&self) -> Option<f64> {
        match self {
            BussgangGain::Scalar(a) => Some(*a),
            BussgangGain::PerAntenna(_) => None,
        }
    }

    /// Dense diagonal of the gain for dimension `m`.
    pub fn diagonal(&self, m: usize) -> Array1<f64> {
        match self {
            BussgangGain::Scalar(a) => Array1::from_elem(m, *a),
            BussgangGain::PerAntenna(d) => {
                assert_eq!(d.len(), m, "gain dimension mismatch");
                d.clone()
            }
        }
    }
}

/// Scalar Bussgang gain `alpha = sqrt((2/pi)/(K rho_u + 1))`.
pub fn scalar_gain(users: usize, operating_power: f64) -> f64 {
    (std::f64::consts::FRAC_2_PI / (users as f64 * operating_power + 1.0)).sqrt()
}

/// `alpha^2`, the quantity that enters every closed-form rate.
pub fn scalar_gain_sq(users: usize, operating_power: f64) -> f64 {
    std::f64::consts::FRAC_2_PI / (users as f64 * operating_power + 1.0)
}

fn checked_arcsin(x: f64) -> Result<f64> {
    const GUARD: f64 = 1e-12;
    if !(-1.0 - GUARD..=1.0 + GUARD).contains(&x) {
        return Err(Error::Domain(format!("arcsine argument {x} outside [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0).asin())
}

/// Covariance of the quantized output of a Gaussian vector with covariance
/// `C_y`, by the arcsine law.
pub fn arcsine_covariance(c_y: &CMat) -> Result<CMat> {
    let n = c_y.nrows();
    if c_y.ncols() != n {
        return Err(Error::Dimension("arcsine_covariance: square input required".into()));
    }
    let mut inv_root = Array1::zeros(n);
    for i in 0..n {
        let d = c_y[[i, i]].re;
        if d <= 0.0 {
            return Err(Error::Domain(format!("nonpositive diagonal entry {d} at {i}")));
        }
        inv_root[i] = 1.0 / d.sqrt();
    }
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let norm = inv_root[i] * inv_root[j];
            if i == j {
                // The normalized diagonal is exactly one; evaluating it
                // through arcsin would square-root-amplify rounding noise.
                let im = checked_arcsin(c_y[[i, j]].im * norm)?;
                out[[i, j]] = Complex64::new(1.0, im * std::f64::consts::FRAC_2_PI);
            } else {
                let re = checked_arcsin(c_y[[i, j]].re * norm)?;
                let im = checked_arcsin(c_y[[i, j]].im * norm)?;
                out[[i, j]] = Complex64::new(re, im) * std::f64::consts::FRAC_2_PI;
            }
        }
    }
    Ok(out)
}

/// Quantizer-noise second-order model: either the uncorrelated approximation
/// `(1 - 2/pi) I` or the exact arcsine-law covariance.
#[derive(Debug, Clone)]
pub enum QuantizerNoise {
    Uncorrelated,
    Exact(CMat),
}

/// Which quantizer-noise model to evaluate with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    Approx,
    Exact,
}

impl QuantizerNoise {
    /// Real quadratic form `x^T C_eta conj(x)` that appears in the SINR
    /// denominators.
    pub fn quadratic_form(&self, x: &CVec) -> f64 {
        match self {
            QuantizerNoise::Uncorrelated => {
                UNCORRELATED_NOISE_VAR * x.iter().map(|z| z.norm_sqr()).sum::<f64>()
            }
            QuantizerNoise::Exact(c) => {
                let n = x.len();
                assert_eq!(c.nrows(), n, "quantizer noise dimension mismatch");
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    let mut row = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        row += c[[i, j]] * x[j].conj();
                    }
                    acc += x[i] * row;
                }
                acc.re
            }
        }
    }
}

/// Quantizer-noise covariance `C_r - A C_y A^H` (exact) or the uncorrelated
/// approximation.
pub fn quantizer_noise_covariance(
    c_y: &CMat,
    gain: &BussgangGain,
    mode: NoiseModel,
) -> Result<QuantizerNoise> {
    match mode {
        NoiseModel::Approx => Ok(QuantizerNoise::Uncorrelated),
        NoiseModel::Exact => {
            let n = c_y.nrows();
            if n > EXACT_COVARIANCE_LIMIT {
                return Err(Error::TooLarge { size: n, limit: EXACT_COVARIANCE_LIMIT });
            }
            let mut c = arcsine_covariance(c_y)?;
            for i in 0..n {
                for j in 0..n {
                    c[[i, j]] -= c_y[[i, j]] * (gain.at(i) * gain.at(j));
                }
            }
            Ok(QuantizerNoise::Exact(c))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::rng::{complex_normal, substream, StreamPurpose};
    use crate::stats::{mean, sample_variance};
    use ndarray::arr2;

    #[test]
    fn quantizer_hand_values() {
        let q = quantize_scalar(Complex64::new(3.0, -4.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(q, Complex64::new(s, -s));
        // sign(0) = +1 convention
        assert_eq!(quantize_scalar(Complex64::new(0.0, 0.0)), Complex64::new(s, s));
    }

    #[test]
    fn quantizer_is_scale_invariant_and_unit_modulus() {
        let mut rng = substream(5, StreamPurpose::Validation, 0);
        for _ in 0..1000 {
            let z = complex_normal(&mut rng);
            let q = quantize_scalar(z);
            assert!((q.norm() - 1.0).abs() < 1e-15);
            for c in [0.5, 2.0, 1234.5] {
                assert_eq!(quantize_scalar(z * c), q);
            }
        }
    }

    #[test]
    fn scalar_gain_limits_and_values() {
        // rho -> 0 limit is sqrt(2/pi)
        assert!((scalar_gain(8, 1e-15) - 0.7978845608028654).abs() < 1e-9);
        // K=8, rho=1 evaluated independently
        assert!((scalar_gain(8, 1.0) - 0.2659615202676218).abs() < 1e-12);
    }

    #[test]
    fn uplink_exact_gain_approaches_scalar() {
        // M=64, K=32, rho=0.1: per-antenna gains within 5% of the scalar.
        let mut rng = substream(6, StreamPurpose::Validation, 1);
        let (m, k, rho) = (64, 32, 0.1);
        let alpha = scalar_gain(k, rho);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let g = crate::rng::complex_normal_mat(&mut rng, m, k).mapv(|z| z * rho.sqrt());
            if let BussgangGain::PerAntenna(d) = BussgangGain::uplink_exact(&g) {
                let avg = d.iter().sum::<f64>() / m as f64;
                worst = worst.max((avg - alpha).abs() / alpha);
            }
        }
        assert!(worst < 0.05, "worst relative deviation {worst}");
    }

    #[test]
    fn downlink_gain_rejects_silent_antenna() {
        let mut t = crate::rng::complex_normal_mat(
            &mut substream(6, StreamPurpose::Validation, 2),
            4,
            2,
        );
        t.row_mut(2).fill(Complex64::new(0.0, 0.0));
        assert!(BussgangGain::downlink(&t).is_err());
    }

    #[test]
    fn arcsine_of_identity_is_identity() {
        let eye: CMat = Array2::eye(4);
        let c = arcsine_covariance(&eye).unwrap();
        for ((i, j), v) in c.indexed_iter() {
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((v.re - expect).abs() < 1e-15 && v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn arcsine_of_half_correlation_is_one_third() {
        let c_y = arr2(&[
            [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)],
            [Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)],
        ]);
        let c = arcsine_covariance(&c_y).unwrap();
        assert!((c[[0, 1]].re - 1.0 / 3.0).abs() < 1e-15);
        assert!((c[[0, 0]].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn arcsine_rejects_bad_diagonal_and_wild_entries() {
        let zero_diag = arr2(&[
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ]);
        assert!(arcsine_covariance(&zero_diag).is_err());
        let wild = arr2(&[
            [Complex64::new(1.0, 0.0), Complex64::new(1.5, 0.0)],
            [Complex64::new(1.5, 0.0), Complex64::new(1.0, 0.0)],
        ]);
        assert!(arcsine_covariance(&wild).is_err());
    }

    #[test]
    fn arcsine_output_is_hermitian_with_unit_diagonal() {
        let mut rng = substream(6, StreamPurpose::Validation, 8);
        let z = crate::rng::complex_normal_mat(&mut rng, 5, 9);
        let mut c_y = z.dot(&crate::linalg::hermitian(&z));
        for i in 0..5 {
            c_y[[i, i]] += Complex64::new(0.5, 0.0);
        }
        let c = arcsine_covariance(&c_y).unwrap();
        for i in 0..5 {
            assert!((c[[i, i]] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
            for j in 0..5 {
                assert!((c[[i, j]] - c[[j, i]].conj()).norm() < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn arcsine_matches_quantized_gaussian_pairs() {
        // Correlation 0.3, 1e6 samples, 1% tolerance.
        let mut rng = substream(6, StreamPurpose::Validation, 3);
        let corr: f64 = 0.3;
        let b = (1.0 - corr * corr).sqrt();
        let n = 1_000_000;
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let z1 = complex_normal(&mut rng);
            let z2 = complex_normal(&mut rng);
            let y1 = z1;
            let y2 = z1 * corr + z2 * b;
            acc += quantize_scalar(y1) * quantize_scalar(y2).conj();
        }
        let emp = acc / n as f64;
        let expect = std::f64::consts::FRAC_2_PI * corr.asin();
        assert!((emp.re - expect).abs() < 0.01, "emp {emp}, expect {expect}");
        assert!(emp.im.abs() < 0.01);
    }

    #[test]
    fn noise_covariance_identity_case() {
        // C_y = I, A = sqrt(2/pi) I -> C_eta = (1 - 2/pi) I in both modes.
        let eye: CMat = Array2::eye(3);
        let gain = BussgangGain::Scalar(std::f64::consts::FRAC_2_PI.sqrt());
        let exact = quantizer_noise_covariance(&eye, &gain, NoiseModel::Exact).unwrap();
        if let QuantizerNoise::Exact(c) = &exact {
            for ((i, j), v) in c.indexed_iter() {
                let expect = if i == j { UNCORRELATED_NOISE_VAR } else { 0.0 };
                assert!((v.re - expect).abs() < 1e-15 && v.im.abs() < 1e-15);
            }
        } else {
            panic!("expected exact covariance");
        }
        let x = crate::rng::complex_normal_vec(&mut substream(1, StreamPurpose::Validation, 4), 3);
        let qf_exact = exact.quadratic_form(&x);
        let qf_approx = QuantizerNoise::Uncorrelated.quadratic_form(&x);
        assert!((qf_exact - qf_approx).abs() < 1e-12);
    }

    #[test]
    fn exact_noise_diagonal_is_one_minus_two_over_pi() {
        // Holds for any unit-diagonal C_y once the gain matches diag(C_y).
        let mut rng = substream(6, StreamPurpose::Validation, 5);
        let z = crate::rng::complex_normal_mat(&mut rng, 6, 6);
        let mut c_y = crate::linalg::hermitian(&z).dot(&z);
        let scale: Vec<f64> = (0..6).map(|i| c_y[[i, i]].re.sqrt()).collect();
        for i in 0..6 {
            for j in 0..6 {
                c_y[[i, j] ] /= Complex64::new(scale[i] * scale[j], 0.0);
            }
        }
        let gain = BussgangGain::PerAntenna(Array1::from_elem(
            6,
            std::f64::consts::FRAC_2_PI.sqrt(),
        ));
        if let QuantizerNoise::Exact(c) =
            quantizer_noise_covariance(&c_y, &gain, NoiseModel::Exact).unwrap()
        {
            for i in 0..6 {
                assert!((c[[i, i]].re - UNCORRELATED_NOISE_VAR).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_noise_covariance_is_positive_semidefinite() {
        let mut rng = substream(6, StreamPurpose::Validation, 6);
        for trial in 0..10 {
            let z = crate::rng::complex_normal_mat(&mut rng, 8, 12);
            let mut c_y = z.dot(&crate::linalg::hermitian(&z));
            for i in 0..8 {
                c_y[[i, i]] += Complex64::new(1.0, 0.0);
            }
            let gain = {
                let mut d = Array1::zeros(8);
                for i in 0..8 {
                    d[i] = (std::f64::consts::FRAC_2_PI / c_y[[i, i]].re).sqrt();
                }
                BussgangGain::PerAntenna(d)
            };
            if let QuantizerNoise::Exact(c) =
                quantizer_noise_covariance(&c_y, &gain, NoiseModel::Exact).unwrap()
            {
                let eig = hermitian_eigenvalues(&c).unwrap();
                assert!(eig[0] >= -1e-10, "trial {trial}: min eigenvalue {}", eig[0]);
            }
        }
    }

    #[test]
    fn exact_mode_rejects_oversized_input() {
        let n = EXACT_COVARIANCE_LIMIT + 1;
        // Construct lazily; only the dimension check should run.
        let c_y: CMat = Array2::eye(n);
        let gain = BussgangGain::Scalar(1.0);
        assert!(matches!(
            quantizer_noise_covariance(&c_y, &gain, NoiseModel::Exact),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn bussgang_orthogonality_empirical() {
        // eta = Q(y) - A y is uncorrelated with y: every cross-covariance
        // entry within 3 standard errors of zero at 1e6 samples.
        let mut rng = substream(6, StreamPurpose::Validation, 7);
        let corr = Complex64::new(0.4, 0.2);
        let b = (1.0 - corr.norm_sqr()).sqrt();
        let n = 1_000_000usize;
        let a = std::f64::consts::FRAC_2_PI.sqrt(); // unit-variance inputs
        let mut prods: Vec<[f64; 8]> = Vec::with_capacity(n);
        for _ in 0..n {
            let z1 = complex_normal(&mut rng);
            let z2 = complex_normal(&mut rng);
            let y = [z1, z1 * corr + z2 * b];
            let eta = [quantize_scalar(y[0]) - y[0] * a, quantize_scalar(y[1]) - y[1] * a];
            let mut row = [0.0; 8];
            let mut idx = 0;
            for e in &eta {
                for yy in &y {
                    let p = e * yy.conj();
                    row[idx] = p.re;
                    row[idx + 1] = p.im;
                    idx += 2;
                }
            }
            prods.push(row);
        }
        for comp in 0..8 {
            let xs: Vec<f64> = prods.iter().map(|r| r[comp]).collect();
            let m = mean(&xs);
            let se = (sample_variance(&xs) / n as f64).sqrt();
            assert!(m.abs() <= 3.0 * se, "component {comp}: mean {m}, se {se}");
        }
    }
}
