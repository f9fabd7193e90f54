//! Uplink-downlink SINR duality: coupling system construction, power
//! solves, and the end-to-end roundtrip check.
//!
//! Under uncorrelated quantizer noise, a set of uplink SINRs achieved with
//! receiver columns `w_k` can be reproduced in the downlink with precoder
//! directions `t_hat_k = A_u w_k / |A_u w_k|`, per-user powers
//! `q = (pi/2) (I - D Psi)^{-1} D 1`, and the per-antenna amplitude matrix
//! `Q = diag(sum_k t_k t_k^H)^{1/2}`; the total power matches the uplink.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::estimation::{dft_pilots, lmmse_estimate, simulate_training};
use crate::frontend::{quantizer_noise_covariance, BussgangGain, NoiseModel, QuantizerNoise};
use crate::linalg::{hermitian, solve_real, spectral_radius_nonneg, CMat};
use crate::rng::{complex_normal_mat, substream, StreamPurpose};
use crate::transceive::{
    antenna_power_matrix, downlink_sinr, modified_precoders, receiver, uplink_sinr, Processing,
};

/// Tolerance used in the spectral-radius feasibility check.
pub const FEASIBILITY_TOL: f64 = 1e-6;

/// A duality instance: true channels, unit-norm precoder directions, and the
/// per-user SINR targets.
#[derive(Debug, Clone)]
pub struct DualityProblem {
    /// True channels, `M x K`.
    pub channels: CMat,
    /// Unit-norm precoder directions, `M x K`.
    pub directions: CMat,
    /// Positive SINR targets, one per user.
    pub targets: Array1<f64>,
}

impl DualityProblem {
    pub fn users(&self) -> usize {
        self.targets.len()
    }
}

/// Solved power allocations and the coupling system that produced them.
#[derive(Debug, Clone)]
pub struct DualitySolution {
    pub downlink_powers: Array1<f64>,
    pub uplink_powers: Array1<f64>,
    /// Diagonal of `D`: target over effective-gain magnitude squared.
    pub target_diag: Array1<f64>,
    /// Coupling matrix `Psi`.
    pub coupling: Array2<f64>,
    pub feasible: bool,
}

/// Diagonal of `D`: `D_kk = gamma_k |g_k^T t_hat_k|^{-2}`.
pub fn target_diag(problem: &DualityProblem) -> Result<Array1<f64>> {
    let k = problem.users();
    let mut d = Array1::zeros(k);
    for user in 0..k {
        let mut dot = Complex64::new(0.0, 0.0);
        for row in 0..problem.channels.nrows() {
            dot += problem.channels[[row, user]] * problem.directions[[row, user]];
        }
        let gain = dot.norm_sqr();
        if gain <= 0.0 {
            return Err(Error::InfeasibleGeometry(format!(
                "user {user} has zero effective gain along its precoder direction"
            )));
        }
        d[user] = problem.targets[user] / gain;
    }
    Ok(d)
}

/// Coupling matrix `Psi`:
/// off-diagonal `|g_k^T t_hat_i|^2 + (pi/2 - 1) t_hat_i^H diag(conj(g_k) g_k^T) t_hat_i`,
/// diagonal only the second term.
pub fn coupling_matrix(problem: &DualityProblem) -> Array2<f64> {
    let k = problem.users();
    let m = problem.channels.nrows();
    let excess = std::f64::consts::FRAC_PI_2 - 1.0;
    let mut psi = Array2::zeros((k, k));
    for user in 0..k {
        // diag(conj(g_k) g_k^T) has entries |g_k[m]|^2
        let channel_power: Vec<f64> =
            (0..m).map(|row| problem.channels[[row, user]].norm_sqr()).collect();
        for other in 0..k {
            let mut quad = 0.0;
            for (row, power) in channel_power.iter().enumerate() {
                quad += problem.directions[[row, other]].norm_sqr() * power;
            }
            let mut value = excess * quad;
            if other != user {
                let mut dot = Complex64::new(0.0, 0.0);
                for row in 0..m {
                    dot += problem.channels[[row, user]] * problem.directions[[row, other]];
                }
                value += dot.norm_sqr();
            }
            psi[[user, other]] = value;
        }
    }
    psi
}

fn solve_power_system(
    target: &Array1<f64>,
    coupling: &Array2<f64>,
    transpose: bool,
) -> Result<Array1<f64>> {
    let k = target.len();
    let mut scaled = Array2::zeros((k, k));
    for i in 0..k {
        for j in 0..k {
            let c = if transpose { coupling[[j, i]] } else { coupling[[i, j]] };
            scaled[[i, j]] = target[i] * c;
        }
    }
    // The Neumann series for (I - D Psi)^{-1} is positive only when the
    // spectral radius is below one.
    let radius = spectral_radius_nonneg(&scaled, FEASIBILITY_TOL, 20_000);
    if radius >= 1.0 - FEASIBILITY_TOL {
        return Err(Error::InfeasibleTargets { radius });
    }
    let mut system = scaled.mapv(|v| -v);
    for i in 0..k {
        system[[i, i]] += 1.0;
    }
    let rhs = target.mapv(|d| d * std::f64::consts::FRAC_PI_2);
    let powers = solve_real(&system, &rhs)?;
    if powers.iter().any(|p| !(*p > 0.0)) {
        return Err(Error::InfeasibleTargets { radius });
    }
    Ok(powers)
}

/// Downlink powers `q = (pi/2)(I - D Psi)^{-1} D 1`.
pub fn solve_downlink_powers(
    target: &Array1<f64>,
    coupling: &Array2<f64>,
) -> Result<Array1<f64>> {
    solve_power_system(target, coupling, false)
}

/// Uplink powers `p = (pi/2)(I - D Psi^T)^{-1} D 1`.
pub fn solve_uplink_powers(target: &Array1<f64>, coupling: &Array2<f64>) -> Result<Array1<f64>> {
    solve_power_system(target, coupling, true)
}

/// Build and solve both power systems for a duality instance.
pub fn solve(problem: &DualityProblem) -> Result<DualitySolution> {
    let target = target_diag(problem)?;
    let coupling = coupling_matrix(problem);
    let downlink_powers = solve_downlink_powers(&target, &coupling)?;
    let uplink_powers = solve_uplink_powers(&target, &coupling)?;
    Ok(DualitySolution {
        downlink_powers,
        uplink_powers,
        target_diag: target,
        coupling,
        feasible: true,
    })
}

/// Theorem-1 downlink construction for one realization.
///
/// The SINRs achieved in the uplink under the solver's model (exact
/// per-antenna gain, uncorrelated quantizer noise) become the targets; the
/// returned processors carry the matched precoder directions, the solved
/// per-user powers, and the per-antenna amplitudes. Total downlink power
/// equals the total uplink power `sum(powers)`.
pub fn downlink_processors(
    channels: &CMat,
    receiver_mat: &CMat,
    powers: &[f64],
) -> Result<(crate::transceive::ProcessorSet, Array1<f64>)> {
    let (m, users) = channels.dim();
    if receiver_mat.dim() != (m, users) || powers.len() != users {
        return Err(Error::Dimension("channels, receiver, and powers must agree".into()));
    }
    let mut weighted = channels.clone();
    for (col, &p) in powers.iter().enumerate() {
        if !(p > 0.0) {
            return Err(Error::Domain(format!("nonpositive uplink power for user {col}")));
        }
        let scale = Complex64::new(p.sqrt(), 0.0);
        for row in 0..m {
            weighted[[row, col]] *= scale;
        }
    }
    let gain = BussgangGain::uplink_exact(&weighted);
    let targets =
        uplink_sinr(channels, receiver_mat, &gain, &QuantizerNoise::Uncorrelated, powers);
    let mut directions = Array2::zeros((m, users));
    for k in 0..users {
        let mut norm_sq = 0.0;
        for row in 0..m {
            let v = receiver_mat[[row, k]] * gain.at(row);
            directions[[row, k]] = v;
            norm_sq += v.norm_sqr();
        }
        if norm_sq == 0.0 {
            return Err(Error::InfeasibleGeometry(format!("receiver column {k} is zero")));
        }
        let inv = 1.0 / norm_sq.sqrt();
        for row in 0..m {
            directions[[row, k]] *= inv;
        }
    }
    let problem =
        DualityProblem { channels: channels.clone(), directions, targets: targets.clone() };
    let solution = solve(&problem)?;
    let precoder = modified_precoders(
        receiver_mat,
        &gain,
        solution.downlink_powers.as_slice().expect("contiguous"),
    )?;
    let antenna_amplitude = antenna_power_matrix(&precoder);
    Ok((
        crate::transceive::ProcessorSet {
            receiver: receiver_mat.clone(),
            precoder,
            antenna_amplitude,
            user_powers: solution.downlink_powers,
        },
        targets,
    ))
}

/// Result of one uplink-to-downlink duality roundtrip.
#[derive(Debug, Clone)]
pub struct RoundtripReport {
    /// SINRs achieved in the uplink (the targets handed to the solver).
    pub targets: Array1<f64>,
    /// SINRs achieved in the downlink with the solved powers.
    pub downlink_achieved: Array1<f64>,
    /// `max_k |dl_k - gamma_k| / gamma_k`.
    pub max_sinr_mismatch: f64,
    /// Relative gap between total downlink and total uplink power.
    pub power_mismatch: f64,
    pub total_uplink_power: f64,
    pub total_downlink_power: f64,
}

/// Draw a channel, run the uplink, map the achieved SINRs to the downlink
/// through the duality solver, and report how closely the downlink meets
/// them under the requested quantizer-noise model.
///
/// The receiver is built from an LMMSE channel estimate; every user
/// transmits at the operating power on its unit-variance channel, so the
/// total uplink power is `K * rho_u`.
pub fn duality_roundtrip(
    config: &SystemConfig,
    processing: Processing,
    noise_model: NoiseModel,
    instance: u64,
) -> Result<RoundtripReport> {
    config.validate()?;
    let mut rng_fading = substream(config.seed, StreamPurpose::FastFading, instance);
    let mut rng_training = substream(config.seed, StreamPurpose::TrainingNoise, instance);
    let rho = config.operating_power;
    let channels = complex_normal_mat(&mut rng_fading, config.antennas, config.users);
    let effective = channels.mapv(|z| z * Complex64::new(rho.sqrt(), 0.0));
    let pilots = dft_pilots(config.pilot_len(), config.users)?;
    let observed = simulate_training(&effective, &pilots, &mut rng_training);
    let estimate = lmmse_estimate(&observed, &pilots, config)?;
    let receiver_mat = receiver(processing, &estimate.effective)?;
    roundtrip_with(&channels, &receiver_mat, &vec![rho; config.users], noise_model)
}

/// Roundtrip evaluation for explicit channels, receiver, and per-user
/// uplink powers: record the uplink SINRs under the requested noise model,
/// solve the downlink powers through Theorem-1's coupling system, and
/// re-evaluate the downlink under the same noise model.
pub fn roundtrip_with(
    channels: &CMat,
    receiver_mat: &CMat,
    powers: &[f64],
    noise_model: NoiseModel,
) -> Result<RoundtripReport> {
    let (m, users) = channels.dim();
    if powers.len() != users {
        return Err(Error::Dimension("one uplink power per user required".into()));
    }
    let mut weighted = channels.clone();
    for (col, &p) in powers.iter().enumerate() {
        let scale = Complex64::new(p.sqrt(), 0.0);
        for row in 0..m {
            weighted[[row, col]] *= scale;
        }
    }
    let gain = BussgangGain::uplink_exact(&weighted);
    let uplink_noise = match noise_model {
        NoiseModel::Approx => QuantizerNoise::Uncorrelated,
        NoiseModel::Exact => {
            let mut c_y = weighted.dot(&hermitian(&weighted));
            for i in 0..m {
                c_y[[i, i]] += Complex64::new(1.0, 0.0);
            }
            quantizer_noise_covariance(&c_y, &gain, NoiseModel::Exact)?
        }
    };
    let targets = uplink_sinr(channels, receiver_mat, &gain, &uplink_noise, powers);

    // Unit-norm precoder directions A_u w_k / |A_u w_k|.
    let mut directions = Array2::zeros((m, users));
    for k in 0..users {
        let mut norm_sq = 0.0;
        for row in 0..m {
            let v = receiver_mat[[row, k]] * gain.at(row);
            directions[[row, k]] = v;
            norm_sq += v.norm_sqr();
        }
        if norm_sq == 0.0 {
            return Err(Error::InfeasibleGeometry(format!("receiver column {k} is zero")));
        }
        let inv = 1.0 / norm_sq.sqrt();
        for row in 0..m {
            directions[[row, k]] *= inv;
        }
    }
    let problem =
        DualityProblem { channels: channels.clone(), directions, targets: targets.clone() };
    let solution = solve(&problem)?;

    let precoder = modified_precoders(
        receiver_mat,
        &gain,
        solution.downlink_powers.as_slice().expect("contiguous"),
    )?;
    let amplitude = antenna_power_matrix(&precoder);
    let downlink_gain = BussgangGain::downlink(&precoder)?;
    let downlink_noise = match noise_model {
        NoiseModel::Approx => QuantizerNoise::Uncorrelated,
        NoiseModel::Exact => {
            let c_y = precoder.dot(&hermitian(&precoder));
            quantizer_noise_covariance(&c_y, &downlink_gain, NoiseModel::Exact)?
        }
    };
    let achieved =
        downlink_sinr(channels, &precoder, &amplitude, &downlink_gain, &downlink_noise);

    let mut max_mismatch = 0.0f64;
    for k in 0..users {
        max_mismatch = max_mismatch.max((achieved[k] - targets[k]).abs() / targets[k]);
    }
    let total_uplink: f64 = powers.iter().sum();
    let total_downlink: f64 = solution.downlink_powers.sum();
    let power_mismatch = (total_downlink - total_uplink).abs() / total_uplink;
    Ok(RoundtripReport {
        targets,
        downlink_achieved: achieved,
        max_sinr_mismatch: max_mismatch,
        power_mismatch,
        total_uplink_power: total_uplink,
        total_downlink_power: total_downlink,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_problem(seed: u64, m: usize, users: usize, rho: f64) -> (CMat, CMat) {
        let mut rng = substream(seed, StreamPurpose::DualityInstance, 0);
        let channels = complex_normal_mat(&mut rng, m, users).mapv(|z| z * rho.sqrt());
        (channels.clone(), crate::transceive::mrc_receiver(&channels))
    }

    fn unit_directions(receiver_mat: &CMat, gain: &BussgangGain) -> CMat {
        let (m, k) = receiver_mat.dim();
        let mut d = Array2::zeros((m, k));
        for col in 0..k {
            let mut norm_sq = 0.0;
            for row in 0..m {
                let v = receiver_mat[[row, col]] * gain.at(row);
                d[[row, col]] = v;
                norm_sq += v.norm_sqr();
            }
            let inv = 1.0 / norm_sq.sqrt();
            for row in 0..m {
                d[[row, col]] *= inv;
            }
        }
        d
    }

    #[test]
    fn target_diag_trivial_and_scaling() {
        // gamma=1 and unit gain give D = I; doubling gamma doubles D.
        let mut channels: CMat = Array2::zeros((2, 1));
        channels[[0, 0]] = Complex64::new(1.0, 0.0);
        let mut directions: CMat = Array2::zeros((2, 1));
        directions[[0, 0]] = Complex64::new(1.0, 0.0);
        let p = DualityProblem {
            channels,
            directions,
            targets: Array1::from_elem(1, 1.0),
        };
        let d = target_diag(&p).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-15);
        let mut p2 = p.clone();
        p2.targets[0] = 2.0;
        assert!((target_diag(&p2).unwrap()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn target_diag_rejects_orthogonal_geometry() {
        let mut channels: CMat = Array2::zeros((2, 1));
        channels[[0, 0]] = Complex64::new(1.0, 0.0);
        let mut directions: CMat = Array2::zeros((2, 1));
        directions[[1, 0]] = Complex64::new(1.0, 0.0);
        let p = DualityProblem { channels, directions, targets: Array1::from_elem(1, 1.0) };
        assert!(matches!(target_diag(&p), Err(Error::InfeasibleGeometry(_))));
    }

    #[test]
    fn coupling_matrix_matches_independent_recomputation() {
        let (channels, receiver_mat) = random_problem(31, 6, 3, 0.5);
        let gain = BussgangGain::uplink_exact(&channels);
        let directions = unit_directions(&receiver_mat, &gain);
        let problem = DualityProblem {
            channels: channels.clone(),
            directions: directions.clone(),
            targets: Array1::from_elem(3, 1.0),
        };
        let psi = coupling_matrix(&problem);
        let excess = std::f64::consts::FRAC_PI_2 - 1.0;
        for k in 0..3 {
            for i in 0..3 {
                // slow re-computation straight from the definition
                let mut quad = Complex64::new(0.0, 0.0);
                for row in 0..6 {
                    quad += directions[[row, i]].conj()
                        * channels[[row, k]].conj()
                        * channels[[row, k]]
                        * directions[[row, i]];
                }
                let mut expect = excess * quad.re;
                if i != k {
                    let mut dot = Complex64::new(0.0, 0.0);
                    for row in 0..6 {
                        dot += channels[[row, k]] * directions[[row, i]];
                    }
                    expect += dot.norm_sqr();
                }
                assert!((psi[[k, i]] - expect).abs() < 1e-12, "({k},{i})");
                assert!(psi[[k, i]] >= 0.0);
            }
        }
    }

    #[test]
    fn coupling_diagonal_reduces_to_scalar_form_for_single_antenna() {
        // M = 1: Psi_kk = (pi/2 - 1) |g_k|^2
        let channels = Array2::from_shape_fn((1, 2), |(_, j)| {
            Complex64::new(0.7 + j as f64, -0.2)
        });
        let directions = Array2::from_elem((1, 2), Complex64::new(1.0, 0.0));
        let problem =
            DualityProblem { channels: channels.clone(), directions, targets: Array1::ones(2) };
        let psi = coupling_matrix(&problem);
        for k in 0..2 {
            let expect = (std::f64::consts::FRAC_PI_2 - 1.0) * channels[[0, k]].norm_sqr();
            assert!((psi[[k, k]] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn trace_diag_identity_on_random_matrices() {
        // tr(A diag(B)) = tr(B diag(A)); the step that symmetrizes the
        // downlink quantizer term.
        let mut rng = substream(32, StreamPurpose::DualityInstance, 1);
        let a = complex_normal_mat(&mut rng, 5, 5);
        let b = complex_normal_mat(&mut rng, 5, 5);
        let mut lhs = Complex64::new(0.0, 0.0);
        let mut rhs = Complex64::new(0.0, 0.0);
        for i in 0..5 {
            lhs += a[[i, i]] * b[[i, i]];
            rhs += b[[i, i]] * a[[i, i]];
        }
        // identity is immediate for diag-of-diag; exercise full form too
        let ab: Complex64 = (0..5).map(|i| a[[i, i]] * b[[i, i]]).sum();
        assert!((lhs - rhs).norm() < 1e-12);
        assert!((ab - lhs).norm() < 1e-12);
    }

    #[test]
    fn scalar_closed_form_for_single_user() {
        let (channels, receiver_mat) = random_problem(33, 4, 1, 1.0);
        let gain = BussgangGain::uplink_exact(&channels);
        let directions = unit_directions(&receiver_mat, &gain);
        let problem = DualityProblem {
            channels,
            directions,
            targets: Array1::from_elem(1, 0.8),
        };
        let d = target_diag(&problem).unwrap();
        let psi = coupling_matrix(&problem);
        let q = solve_downlink_powers(&d, &psi).unwrap();
        let expect = std::f64::consts::FRAC_PI_2 * d[0] / (1.0 - d[0] * psi[[0, 0]]);
        assert!((q[0] - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn uplink_and_downlink_totals_agree() {
        for seed in 0..20 {
            let mut rng = substream(40 + seed, StreamPurpose::DualityInstance, 2);
            let channels = complex_normal_mat(&mut rng, 16, 4).mapv(|z| z * 0.4);
            let receiver_mat = crate::transceive::mrc_receiver(&channels);
            let gain = BussgangGain::uplink_exact(&channels);
            let directions = unit_directions(&receiver_mat, &gain);
            let targets = Array1::from_shape_fn(4, |i| 0.5 + 0.3 * i as f64);
            let problem = DualityProblem { channels, directions, targets };
            let sol = solve(&problem).unwrap();
            let up: f64 = sol.uplink_powers.sum();
            let down: f64 = sol.downlink_powers.sum();
            assert!((up - down).abs() / up < 1e-9, "seed {seed}: {up} vs {down}");
        }
    }

    #[test]
    fn raising_one_target_raises_total_power() {
        let (channels, receiver_mat) = random_problem(34, 16, 4, 0.2);
        let gain = BussgangGain::uplink_exact(&channels);
        let directions = unit_directions(&receiver_mat, &gain);
        let targets = Array1::from_elem(4, 0.5);
        let problem =
            DualityProblem { channels: channels.clone(), directions: directions.clone(), targets };
        let base: f64 = solve(&problem).unwrap().downlink_powers.sum();
        let mut bumped = problem.clone();
        bumped.targets[2] *= 1.2;
        let more: f64 = solve(&bumped).unwrap().downlink_powers.sum();
        assert!(more > base, "{more} vs {base}");
    }

    #[test]
    fn solutions_are_phase_invariant_in_directions() {
        let (channels, receiver_mat) = random_problem(35, 8, 3, 0.5);
        let gain = BussgangGain::uplink_exact(&channels);
        let directions = unit_directions(&receiver_mat, &gain);
        let targets = Array1::from_elem(3, 0.7);
        let base = solve(&DualityProblem {
            channels: channels.clone(),
            directions: directions.clone(),
            targets: targets.clone(),
        })
        .unwrap();
        let rotated = directions.mapv(|z| z * Complex64::from_polar(1.0, 1.234));
        let turned = solve(&DualityProblem { channels, directions: rotated, targets }).unwrap();
        for k in 0..3 {
            assert!(
                (base.downlink_powers[k] - turned.downlink_powers[k]).abs()
                    < 1e-10 * base.downlink_powers[k]
            );
        }
    }

    #[test]
    fn infeasible_targets_are_reported() {
        let (channels, receiver_mat) = random_problem(36, 8, 4, 1.0);
        let gain = BussgangGain::uplink_exact(&channels);
        let directions = unit_directions(&receiver_mat, &gain);
        // absurd targets push the spectral radius past one
        let targets = Array1::from_elem(4, 1e4);
        let problem = DualityProblem { channels, directions, targets };
        assert!(matches!(solve(&problem), Err(Error::InfeasibleTargets { .. })));
    }

    #[test]
    fn approx_roundtrip_is_algebraically_exact() {
        let (channels, receiver_mat) = random_problem(37, 32, 6, 0.3);
        let report =
            roundtrip_with(&channels, &receiver_mat, &[1.0; 6], NoiseModel::Approx).unwrap();
        assert!(report.max_sinr_mismatch < 1e-10, "mismatch {}", report.max_sinr_mismatch);
        assert!(report.power_mismatch < 1e-12, "power {}", report.power_mismatch);
    }

    #[test]
    fn exact_model_mismatch_grows_with_operating_power() {
        // Quantifies the uncorrelated-noise approximation: small at low
        // power, larger at high power.
        let mut low = 0.0f64;
        let mut high = 0.0f64;
        for inst in 0..10u64 {
            let mut rng = substream(38, StreamPurpose::DualityInstance, inst);
            let h = complex_normal_mat(&mut rng, 64, 8);
            let g_low = h.mapv(|z| z * 0.1f64.sqrt());
            let g_high = h.mapv(|z| z * 10f64.sqrt());
            let w_low = crate::transceive::mrc_receiver(&g_low);
            let w_high = crate::transceive::mrc_receiver(&g_high);
            let ones = vec![1.0; 8];
            low += roundtrip_with(&g_low, &w_low, &ones, NoiseModel::Exact)
                .unwrap()
                .max_sinr_mismatch;
            high += roundtrip_with(&g_high, &w_high, &ones, NoiseModel::Exact)
                .unwrap()
                .max_sinr_mismatch;
        }
        assert!(
            high > low,
            "exact-model mismatch should grow with power: low {low}, high {high}"
        );
    }

    #[test]
    fn full_pipeline_roundtrip_runs() {
        let cfg = SystemConfig {
            antennas: 32,
            users: 4,
            max_users: 8,
            pilot_ratio: 2,
            coherence: 100,
            operating_power: 0.1,
            uplink_fraction: 0.5,
            radius_min: 100.0,
            radius_max: 500.0,
            shadowing: 10f64.powf(0.8),
            path_loss_exp: 3.8,
            seed: 5,
        };
        let report = duality_roundtrip(&cfg, Processing::Mrc, NoiseModel::Approx, 0).unwrap();
        assert!(report.max_sinr_mismatch < 1e-9);
        let zf = duality_roundtrip(&cfg, Processing::Zf, NoiseModel::Approx, 1).unwrap();
        assert!(zf.max_sinr_mismatch < 1e-9);
    }
}
