//! The experiment implementations behind each `--experiment` name.

use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};

use onebit_mimo::duality::{downlink_processors, duality_roundtrip};
use onebit_mimo::estimation::{dft_pilots, lmmse_estimate, simulate_training};
use onebit_mimo::optimizer::{optimize, pareto_sweep, weight_schedule, SearchGrid};
use onebit_mimo::rates::{closed_form_rate, default_noise_model, ergodic_rate_mc, Frontend, Link};
use onebit_mimo::rng::{complex_normal_mat, substream, StreamPurpose};
use onebit_mimo::stats::percentile;
use onebit_mimo::transceive::receiver;
use onebit_mimo::validate::{run_validation, ValidationOptions};
use onebit_mimo::NoiseModel;

use crate::output::{db, sci, CsvFile, RunLog};
use crate::{ExperimentName, ExperimentSpec};

pub struct RunResult {
    pub outputs: Vec<PathBuf>,
    pub checks_passed: bool,
}

pub fn run(spec: &ExperimentSpec) -> Result<RunResult> {
    spec.config.validate().map_err(|e| anyhow!("{e}"))?;
    let mut log = RunLog::new(&spec.out_dir)?;
    let mut checks_passed = true;
    match spec.name {
        ExperimentName::Fig2 => fig2(spec, &mut log)?,
        ExperimentName::Fig3 => fig3(spec, &mut log)?,
        ExperimentName::Pareto => pareto(spec, &mut log)?,
        ExperimentName::OptimalK | ExperimentName::OptimalTau0 | ExperimentName::OptimalRho => {
            optimal_sweep(spec, &mut log)?
        }
        ExperimentName::DualityCheck => duality_check(spec, &mut log)?,
        ExperimentName::Validation => checks_passed = validation(spec, &mut log)?,
    }
    let outputs = log.finish(
        spec.name.label(),
        &spec.config,
        spec.trials,
        spec.processing.label(),
    )?;
    Ok(RunResult { outputs, checks_passed })
}

/// Monte Carlo and closed-form sum spectral efficiency against operating
/// power, one CSV per antenna count.
fn fig2(spec: &ExperimentSpec, log: &mut RunLog) -> Result<()> {
    for &m in &spec.antennas {
        let mut csv = CsvFile::new(
            log.file(&format!("fig2_{}_m{}.csv", spec.processing.label(), m)),
            "rho_db,rho_linear,mc_sum_se_bit_per_s_per_hz,mc_std_err,cf_sum_se_bit_per_s_per_hz,rel_gap,trials,redraws",
        );
        for &rho_db in &spec.power_db {
            let cfg = spec.config.with_antennas(m).with_operating_power(10f64.powf(rho_db / 10.0));
            let mc = ergodic_rate_mc(
                &cfg,
                spec.processing,
                Link::Uplink,
                default_noise_model(m),
                spec.trials,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let cf = closed_form_rate(&cfg, spec.processing, Frontend::OneBit)
                .map_err(|e| anyhow!("{e}"))?;
            let scale = cfg.data_len() as f64 / cfg.coherence as f64;
            let mc_se = scale * mc.sum_rate;
            let cf_se = scale * cf.sum_rate;
            csv.row(&[
                db(rho_db),
                sci(cfg.operating_power),
                sci(mc_se),
                sci(scale * mc.std_err * cfg.users as f64),
                sci(cf_se),
                sci((mc_se - cf_se) / cf_se),
                mc.trials.to_string(),
                mc.redraws.to_string(),
            ]);
        }
        log.record(csv.write()?);
        log.stage(&format!("fig2_m{m}"));
    }
    Ok(())
}

/// CDF of the per-antenna downlink transmit power under the duality power
/// allocation, one CDF file per antenna count plus a spread summary.
fn fig3(spec: &ExperimentSpec, log: &mut RunLog) -> Result<()> {
    let total_power = 10f64.powf(spec.total_power_db / 10.0);
    let mut summary = CsvFile::new(
        log.file(&format!("fig3_{}_summary.csv", spec.processing.label())),
        "m,p10_of_m_q2,p90_of_m_q2,normalized_spread,raw_spread",
    );
    for &m in &spec.antennas {
        let k = spec.config.users;
        let cfg = spec
            .config
            .with_antennas(m)
            .with_operating_power(total_power / k as f64);
        let pilots = dft_pilots(cfg.pilot_len(), cfg.users).map_err(|e| anyhow!("{e}"))?;
        let mut samples = Vec::with_capacity(m * spec.trials);
        for inst in 0..spec.trials as u64 {
            let mut rng_h = substream(cfg.seed, StreamPurpose::FastFading, inst);
            let mut rng_n = substream(cfg.seed, StreamPurpose::TrainingNoise, inst);
            let channels = complex_normal_mat(&mut rng_h, m, k);
            let effective = channels.mapv(|z| z * cfg.operating_power.sqrt());
            let observed = simulate_training(&effective, &pilots, &mut rng_n);
            let estimate = lmmse_estimate(&observed, &pilots, &cfg).map_err(|e| anyhow!("{e}"))?;
            let receiver_mat =
                receiver(spec.processing, &estimate.effective).map_err(|e| anyhow!("{e}"))?;
            let (processors, _) =
                downlink_processors(&channels, &receiver_mat, &vec![cfg.operating_power; k])
                    .map_err(|e| anyhow!("{e}"))?;
            samples.extend(processors.antenna_amplitude.iter().map(|a| m as f64 * a * a));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut cdf = CsvFile::new(
            log.file(&format!("fig3_{}_m{}_cdf.csv", spec.processing.label(), m)),
            "m_times_antenna_power_linear,cdf",
        );
        let n = samples.len();
        for (i, v) in samples.iter().enumerate() {
            cdf.row(&[sci(*v), sci((i + 1) as f64 / n as f64)]);
        }
        log.record(cdf.write()?);
        let lo = percentile(&samples, 10.0);
        let hi = percentile(&samples, 90.0);
        summary.row(&[
            m.to_string(),
            sci(lo),
            sci(hi),
            sci(hi - lo),
            sci((hi - lo) / m as f64),
        ]);
        log.stage(&format!("fig3_m{m}"));
    }
    log.record(summary.write()?);
    Ok(())
}

fn frontier_csv(
    log: &RunLog,
    name: &str,
    points: &[onebit_mimo::ParetoPoint],
) -> Result<PathBuf> {
    let mut csv = CsvFile::new(
        log.file(name),
        "w_se,w_ee,se_bit_per_s_per_hz,ee_bit_per_s_per_hz_per_power,users,tau0,rho_db",
    );
    for p in points {
        csv.row(&[
            sci(p.weights.0),
            sci(p.weights.1),
            sci(p.spectral),
            sci(p.energy),
            p.point.users.to_string(),
            p.point.pilot_ratio.to_string(),
            db(10.0 * p.point.operating_power.log10()),
        ]);
    }
    csv.write()
}

/// Pareto frontiers: jointly optimized one-bit, the fixed-allocation
/// benchmark, and the unquantized reference, per antenna count.
fn pareto(spec: &ExperimentSpec, log: &mut RunLog) -> Result<()> {
    let weights = weight_schedule(spec.weight_pairs);
    for &m in &spec.antennas {
        let cfg = spec.config.with_antennas(m);
        let grid = SearchGrid {
            power_db: spec.power_db.clone(),
            ..SearchGrid::default_for(&cfg)
        };
        let optimized = pareto_sweep(&cfg, spec.processing, Frontend::OneBit, &weights, &grid)
            .map_err(|e| anyhow!("{e}"))?;
        let path = frontier_csv(
            log,
            &format!("pareto_onebit_{}_m{}.csv", spec.processing.label(), m),
            &optimized,
        )?;
        log.record(path);

        let bench_users = (m / 10).max(1).min(cfg.max_users);
        let bench_grid = SearchGrid::fixed_allocation(bench_users, 1, spec.power_db.clone());
        let benchmark =
            pareto_sweep(&cfg, spec.processing, Frontend::OneBit, &weights, &bench_grid)
                .map_err(|e| anyhow!("{e}"))?;
        let path = frontier_csv(
            log,
            &format!("pareto_benchmark_{}_m{}.csv", spec.processing.label(), m),
            &benchmark,
        )?;
        log.record(path);

        let reference =
            pareto_sweep(&cfg, spec.processing, Frontend::Unquantized, &weights, &grid)
                .map_err(|e| anyhow!("{e}"))?;
        let path = frontier_csv(
            log,
            &format!("pareto_unquantized_{}_m{}.csv", spec.processing.label(), m),
            &reference,
        )?;
        log.record(path);
        log.stage(&format!("pareto_m{m}"));
    }
    Ok(())
}

/// Weighted-product optimum per antenna count; the three `optimal-*`
/// experiment names emit the same table under their own file name.
fn optimal_sweep(spec: &ExperimentSpec, log: &mut RunLog) -> Result<()> {
    let name = match spec.name {
        ExperimentName::OptimalK => "optimal_k",
        ExperimentName::OptimalTau0 => "optimal_tau0",
        _ => "optimal_rho",
    };
    let mut csv = CsvFile::new(
        log.file(&format!("{name}_{}.csv", spec.processing.label())),
        "m,coherence,k_star,k_over_m,tau0_star,rho_star_db,se_bit_per_s_per_hz,ee_bit_per_s_per_hz_per_power",
    );
    for &m in &spec.antennas {
        let cfg = spec.config.with_antennas(m);
        let grid =
            SearchGrid { power_db: spec.power_db.clone(), ..SearchGrid::default_for(&cfg) };
        let (point, pareto) = optimize(&cfg, spec.processing, Frontend::OneBit, 1.0, 1.0, &grid)
            .map_err(|e| anyhow!("{e}"))?;
        csv.row(&[
            m.to_string(),
            cfg.coherence.to_string(),
            point.users.to_string(),
            sci(point.users as f64 / m as f64),
            point.pilot_ratio.to_string(),
            db(10.0 * point.operating_power.log10()),
            sci(pareto.spectral),
            sci(pareto.energy),
        ]);
    }
    log.record(csv.write()?);
    log.stage("optimal_sweep");
    Ok(())
}

/// Duality roundtrips under the solver's model and the exact arcsine model
/// at the configured power and at 100x that power.
fn duality_check(spec: &ExperimentSpec, log: &mut RunLog) -> Result<()> {
    let mut csv = CsvFile::new(
        log.file(&format!("duality_{}.csv", spec.processing.label())),
        "noise_model,rho_u_linear,instance,max_sinr_mismatch_rel,power_mismatch_rel",
    );
    let mut summary = CsvFile::new(
        log.file(&format!("duality_{}_summary.csv", spec.processing.label())),
        "noise_model,rho_u_linear,max_sinr_mismatch_rel,mean_sinr_mismatch_rel,max_power_mismatch_rel",
    );
    let cases = [
        ("approx", spec.config.operating_power, NoiseModel::Approx),
        ("exact", spec.config.operating_power, NoiseModel::Exact),
        ("exact", spec.config.operating_power * 100.0, NoiseModel::Exact),
    ];
    for (label, rho, model) in cases {
        let cfg = spec.config.with_operating_power(rho);
        let mut worst: f64 = 0.0;
        let mut worst_power: f64 = 0.0;
        let mut sum = 0.0;
        for inst in 0..spec.trials as u64 {
            let report = duality_roundtrip(&cfg, spec.processing, model, inst)
                .map_err(|e| anyhow!("{e}"))?;
            csv.row(&[
                label.to_string(),
                sci(rho),
                inst.to_string(),
                sci(report.max_sinr_mismatch),
                sci(report.power_mismatch),
            ]);
            worst = worst.max(report.max_sinr_mismatch);
            worst_power = worst_power.max(report.power_mismatch);
            sum += report.max_sinr_mismatch;
        }
        summary.row(&[
            label.to_string(),
            sci(rho),
            sci(worst),
            sci(sum / spec.trials as f64),
            sci(worst_power),
        ]);
    }
    log.record(csv.write()?);
    log.record(summary.write()?);
    log.stage("duality_check");
    Ok(())
}

/// Statistical validation suite; returns whether every check passed.
fn validation(spec: &ExperimentSpec, log: &mut RunLog) -> Result<bool> {
    let report = run_validation(&spec.config, spec.config.seed, &ValidationOptions::default());
    for check in &report.checks {
        println!(
            "  {:32} {} observed {:.6e} tolerance {:.6e}",
            check.name,
            if check.passed { "PASS" } else { "FAIL" },
            check.observed,
            check.tolerance
        );
    }
    let path = log.file("validation_report.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report)?)
        .with_context(|| format!("writing {}", path.display()))?;
    log.record(path);
    log.stage("validation");
    Ok(report.all_passed())
}
