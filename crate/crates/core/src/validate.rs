//! Cross-module validation checks with machine-readable results: Bussgang
//! orthogonality, the arcsine law, duality power equality, the Wishart
//! inverse moment, and the ratio-of-expectations approximation.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::config::SystemConfig;
use crate::frontend::quantize_scalar;
use crate::linalg::{hermitian, solve_complex, CMat};
use crate::rng::{complex_normal, complex_normal_mat, substream, StreamPurpose};
use crate::stats::{mean, sample_variance};

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Threshold the observation is compared against.
    pub tolerance: f64,
    /// Observed statistic (interpretation depends on the check).
    pub observed: f64,
    pub passed: bool,
}

/// Collected validation outcomes.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Knobs for the validation run. `gain_scale` multiplies the Bussgang gain
/// inside the orthogonality check and exists so tests can verify that a
/// corrupted gain is caught; production callers leave it at 1.
#[derive(Debug, Clone)]
pub struct ValidationOptions {
    pub gain_scale: f64,
    pub samples: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { gain_scale: 1.0, samples: 1_000_000 }
    }
}

/// Correlated complex Gaussian test covariances used by the front-end checks.
fn covariance_instances() -> Vec<CMat> {
    let toeplitz = |first_row: [f64; 4]| -> CMat {
        Array2::from_shape_fn((4, 4), |(i, j)| {
            let lag = i.abs_diff(j);
            Complex64::new(first_row[lag], 0.0)
        })
    };
    let mut complex_case: CMat = toeplitz([1.0, 0.5, 0.3, 0.0]);
    // phase-rotated correlations keep the matrix Hermitian PSD
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                let rot = Complex64::from_polar(1.0, 0.4 * (j as f64 - i as f64));
                complex_case[[i, j]] *= rot;
            }
        }
    }
    vec![toeplitz([1.0, 0.5, 0.3, 0.0]), toeplitz([1.0, 0.3, 0.0, 0.0]), complex_case]
}

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
fn cholesky(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut l: CMat = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]].conj();
            }
            if i == j {
                l[[i, j]] = Complex64::new(sum.re.max(0.0).sqrt(), 0.0);
            } else {
                l[[i, j]] = sum / l[[j, j]];
            }
        }
    }
    l
}

fn bussgang_orthogonality_check(
    opts: &ValidationOptions,
    seed: u64,
    results: &mut Vec<CheckResult>,
) {
    for (idx, c_y) in covariance_instances().iter().enumerate() {
        let n = c_y.nrows();
        let l = cholesky(c_y);
        let gain: Vec<f64> = (0..n)
            .map(|i| opts.gain_scale * (std::f64::consts::FRAC_2_PI / c_y[[i, i]].re).sqrt())
            .collect();
        let mut rng = substream(seed, StreamPurpose::Validation, 100 + idx as u64);
        let count = opts.samples;
        // track Re/Im of every eta_i * conj(y_j) product
        let mut sums = vec![0.0f64; 2 * n * n];
        let mut sq_sums = vec![0.0f64; 2 * n * n];
        for _ in 0..count {
            let z: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng)).collect();
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                for k in 0..=i {
                    y[i] += l[[i, k]] * z[k];
                }
            }
            for i in 0..n {
                let eta = quantize_scalar(y[i]) - y[i] * gain[i];
                for (j, y_j) in y.iter().enumerate() {
                    let p = eta * y_j.conj();
                    let slot = 2 * (i * n + j);
                    sums[slot] += p.re;
                    sq_sums[slot] += p.re * p.re;
                    sums[slot + 1] += p.im;
                    sq_sums[slot + 1] += p.im * p.im;
                }
            }
        }
        let mut worst_sigmas = 0.0f64;
        for slot in 0..2 * n * n {
            let m = sums[slot] / count as f64;
            let var = (sq_sums[slot] / count as f64 - m * m).max(f64::MIN_POSITIVE);
            let se = (var / count as f64).sqrt();
            worst_sigmas = worst_sigmas.max(m.abs() / se);
        }
        results.push(CheckResult {
            name: format!("bussgang_orthogonality_{idx}"),
            tolerance: 3.0,
            observed: worst_sigmas,
            passed: worst_sigmas <= 3.0,
        });
    }
}

fn arcsine_law_check(opts: &ValidationOptions, seed: u64, results: &mut Vec<CheckResult>) {
    let c_y = covariance_instances()[0].clone();
    let n = c_y.nrows();
    let l = cholesky(&c_y);
    let expect = crate::frontend::arcsine_covariance(&c_y).unwrap();
    let mut rng = substream(seed, StreamPurpose::Validation, 200);
    let count = opts.samples;
    let mut acc: CMat = Array2::zeros((n, n));
    for _ in 0..count {
        let z: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng)).collect();
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut y = Complex64::new(0.0, 0.0);
            for k in 0..=i {
                y += l[[i, k]] * z[k];
            }
            q[i] = quantize_scalar(y);
        }
        for i in 0..n {
            for j in 0..n {
                acc[[i, j]] += q[i] * q[j].conj();
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let emp = acc[[i, j]] / count as f64;
            worst = worst.max((emp - expect[[i, j]]).norm());
        }
    }
    results.push(CheckResult {
        name: "arcsine_law".into(),
        tolerance: 0.01,
        observed: worst,
        passed: worst <= 0.01,
    });
}

fn duality_power_check(config: &SystemConfig, seed: u64, results: &mut Vec<CheckResult>) {
    let mut worst = 0.0f64;
    let instances = 25;
    for inst in 0..instances {
        let mut rng = substream(seed, StreamPurpose::DualityInstance, 300 + inst);
        let channels = complex_normal_mat(&mut rng, config.antennas, config.users)
            .mapv(|z| z * Complex64::new(config.operating_power.sqrt(), 0.0));
        let receiver = crate::transceive::mrc_receiver(&channels);
        let powers = vec![1.0; config.users];
        match crate::duality::roundtrip_with(
            &channels,
            &receiver,
            &powers,
            crate::frontend::NoiseModel::Approx,
        ) {
            Ok(report) => {
                worst = worst.max(report.power_mismatch).max(report.max_sinr_mismatch);
            }
            Err(_) => {
                worst = f64::INFINITY;
            }
        }
    }
    results.push(CheckResult {
        name: "duality_power_equality".into(),
        tolerance: 1e-9,
        observed: worst,
        passed: worst <= 1e-9,
    });
}

fn wishart_moment_check(seed: u64, results: &mut Vec<CheckResult>) {
    let (m, k) = (32usize, 8usize);
    let sigma_sq: f64 = 0.45;
    let draws = 100_000;
    let mut rng = substream(seed, StreamPurpose::Validation, 400);
    let mut acc = 0.0;
    let eye: CMat = Array2::eye(k);
    for _ in 0..draws {
        let g = complex_normal_mat(&mut rng, m, k).mapv(|z| z * sigma_sq.sqrt());
        let gram = hermitian(&g).dot(&g);
        let inv = solve_complex(&gram, &eye).expect("wishart draw is full rank a.s.");
        acc += (0..k).map(|i| inv[[i, i]].re).sum::<f64>() / k as f64;
    }
    let mc = acc / draws as f64;
    let expect = 1.0 / (sigma_sq * (m - k) as f64);
    let rel = (mc - expect).abs() / expect;
    results.push(CheckResult {
        name: "wishart_inverse_moment".into(),
        tolerance: 0.03,
        observed: rel,
        passed: rel <= 0.03,
    });
}

fn lemma1_check_entry(seed: u64, results: &mut Vec<CheckResult>) {
    let mut rng = substream(seed, StreamPurpose::Validation, 500);
    let n = 50_000;
    let dim = 128;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> f64 {
            (0..dim).map(|_| -(rng.random::<f64>().max(1e-12)).ln()).sum()
        };
        xs.push(draw(&mut rng));
        ys.push(draw(&mut rng));
    }
    let (lhs, rhs) = crate::rates::lemma1_check(&xs, &ys).unwrap();
    let rel = (lhs - rhs).abs() / rhs;
    results.push(CheckResult {
        name: "ratio_of_expectations".into(),
        tolerance: 0.02,
        observed: rel,
        passed: rel <= 0.02,
    });
}

fn quantizer_variance_check(seed: u64, results: &mut Vec<CheckResult>) {
    // per-element quantizer noise variance for unit-variance input
    let mut rng = substream(seed, StreamPurpose::Validation, 600);
    let n = 200_000;
    let a = std::f64::consts::FRAC_2_PI.sqrt();
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let y = complex_normal(&mut rng);
        let eta = quantize_scalar(y) - y * a;
        samples.push(eta.norm_sqr());
    }
    let observed = mean(&samples);
    let expect = crate::frontend::UNCORRELATED_NOISE_VAR;
    let se = (sample_variance(&samples) / n as f64).sqrt();
    let rel = (observed - expect).abs() / expect;
    let tol = (4.0 * se / expect).max(0.01);
    results.push(CheckResult {
        name: "quantizer_noise_variance".into(),
        tolerance: tol,
        observed: rel,
        passed: rel <= tol,
    });
}

/// Run every validation check with substreams of `seed`.
pub fn run_validation(
    config: &SystemConfig,
    seed: u64,
    opts: &ValidationOptions,
) -> ValidationReport {
    let mut checks = Vec::new();
    bussgang_orthogonality_check(opts, seed, &mut checks);
    arcsine_law_check(opts, seed, &mut checks);
    duality_power_check(config, seed, &mut checks);
    wishart_moment_check(seed, &mut checks);
    lemma1_check_entry(seed, &mut checks);
    quantizer_variance_check(seed, &mut checks);
    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> SystemConfig {
        SystemConfig {
            antennas: 32,
            users: 8,
            max_users: 16,
            pilot_ratio: 2,
            coherence: 200,
            operating_power: 0.1,
            uplink_fraction: 0.5,
            radius_min: 100.0,
            radius_max: 500.0,
            shadowing: 10f64.powf(0.8),
            path_loss_exp: 3.8,
            seed: 42,
        }
    }

    #[test]
    fn default_validation_passes() {
        let opts = ValidationOptions { samples: 200_000, ..Default::default() };
        let report = run_validation(&config(), 42, &opts);
        for c in &report.checks {
            assert!(c.passed, "{} failed: observed {} vs tolerance {}", c.name, c.observed, c.tolerance);
        }
        assert!(report.all_passed());
    }

    #[test]
    fn corrupted_gain_is_caught() {
        let opts = ValidationOptions { gain_scale: 2.0, samples: 100_000 };
        let mut checks = Vec::new();
        bussgang_orthogonality_check(&opts, 42, &mut checks);
        assert!(
            checks.iter().any(|c| !c.passed),
            "doubling the gain must break Bussgang orthogonality"
        );
    }

    #[test]
    fn report_serializes_with_tolerances() {
        let opts = ValidationOptions { samples: 50_000, ..Default::default() };
        let report = run_validation(&config(), 1, &opts);
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("tolerance"));
        assert!(json.contains("observed"));
        assert!(json.contains("arcsine_law"));
    }
}
