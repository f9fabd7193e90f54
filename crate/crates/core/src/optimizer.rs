//! Spectral/energy-efficiency objectives and the weighted-product grid
//! search over the number of users, the relative pilot length, and the
//! operating power.
//!
//! Spectral efficiency charges the pilot overhead against the sum rate;
//! energy efficiency divides it by the expected total transmit power of the
//! power-controlled uplink, so the two are tied exactly by
//! `F_EE * E{P_total} = F_SE`. Sweeping the weight pair of the scalarized
//! product traces the Pareto boundary of the two objectives.

use serde::Serialize;

use crate::channel::average_total_power;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::rates::{closed_form_rate, Frontend};
use crate::transceive::Processing;

/// A candidate system operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub users: usize,
    pub pilot_ratio: usize,
    pub operating_power: f64,
}

/// An (SE, EE) pair with the operating point and weights that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct ParetoPoint {
    /// Spectral efficiency, bits/s/Hz, training overhead included.
    pub spectral: f64,
    /// Energy efficiency: spectral efficiency per unit average transmit power.
    pub energy: f64,
    pub point: OperatingPoint,
    /// `(w_SE, w_EE)` used in the scalarization.
    pub weights: (f64, f64),
}

/// Search ranges for the exhaustive grid.
#[derive(Debug, Clone)]
pub struct SearchGrid {
    /// Smallest user count to consider.
    pub min_users: usize,
    /// Largest user count to consider (further capped by `K_max` and, for
    /// ZF, by `M - 2`).
    pub max_users: usize,
    /// Smallest relative pilot length.
    pub min_pilot_ratio: usize,
    /// Largest relative pilot length.
    pub max_pilot_ratio: usize,
    /// Operating-power grid in dB.
    pub power_db: Vec<f64>,
}

impl SearchGrid {
    /// Default grid: users up to `K_max`, pilot ratio up to 8, power from
    /// -30 dB to +10 dB in 0.5 dB steps.
    pub fn default_for(config: &SystemConfig) -> Self {
        SearchGrid {
            min_users: 1,
            max_users: config.max_users,
            min_pilot_ratio: 1,
            max_pilot_ratio: 8,
            power_db: Self::power_range(-30.0, 10.0, 0.5),
        }
    }

    /// Grid over users and pilot ratio with the default power range.
    pub fn new(max_users: usize, max_pilot_ratio: usize, power_db: Vec<f64>) -> Self {
        SearchGrid { min_users: 1, max_users, min_pilot_ratio: 1, max_pilot_ratio, power_db }
    }

    /// Grid that pins the user count and pilot ratio and only sweeps power;
    /// the benchmark configuration of the frontier studies.
    pub fn fixed_allocation(users: usize, pilot_ratio: usize, power_db: Vec<f64>) -> Self {
        SearchGrid {
            min_users: users,
            max_users: users,
            min_pilot_ratio: pilot_ratio,
            max_pilot_ratio: pilot_ratio,
            power_db,
        }
    }

    /// Inclusive dB range with the given step.
    pub fn power_range(lo_db: f64, hi_db: f64, step_db: f64) -> Vec<f64> {
        assert!(step_db > 0.0 && hi_db >= lo_db, "bad power range");
        let n = ((hi_db - lo_db) / step_db).round() as usize;
        (0..=n).map(|i| lo_db + i as f64 * step_db).collect()
    }
}

fn point_config(point: &OperatingPoint, config: &SystemConfig) -> SystemConfig {
    let mut cfg = config.clone();
    cfg.users = point.users;
    cfg.max_users = config.max_users.max(point.users);
    cfg.pilot_ratio = point.pilot_ratio;
    cfg.operating_power = point.operating_power;
    cfg
}

fn check_point(point: &OperatingPoint, config: &SystemConfig, processing: Processing) -> Result<()> {
    if point.users == 0 || point.pilot_ratio == 0 {
        return Err(Error::InvalidConfig("users and pilot ratio must be positive".into()));
    }
    if point.users > config.max_users {
        return Err(Error::InvalidConfig(format!(
            "K = {} exceeds the terminal pool K_max = {}",
            point.users, config.max_users
        )));
    }
    if point.pilot_ratio * point.users >= config.coherence {
        return Err(Error::InvalidConfig("pilot interval must fit in the coherence time".into()));
    }
    if !(point.operating_power > 0.0) {
        return Err(Error::InvalidConfig("operating power must be positive".into()));
    }
    if processing == Processing::Zf && point.users + 2 > config.antennas {
        return Err(Error::Domain("ZF needs K <= M - 2".into()));
    }
    Ok(())
}

/// Spectral efficiency `((T - tau)/T) K R_A` at an operating point.
pub fn spectral_efficiency(
    point: &OperatingPoint,
    config: &SystemConfig,
    processing: Processing,
    frontend: Frontend,
) -> Result<f64> {
    check_point(point, config, processing)?;
    let cfg = point_config(point, config);
    let rate = closed_form_rate(&cfg, processing, frontend)?.per_user_rate;
    let overhead = (cfg.coherence - cfg.pilot_len()) as f64 / cfg.coherence as f64;
    Ok(overhead * cfg.users as f64 * rate)
}

/// Energy efficiency: spectral efficiency per unit expected total transmit
/// power of the power-controlled uplink.
pub fn energy_efficiency(
    point: &OperatingPoint,
    config: &SystemConfig,
    processing: Processing,
    frontend: Frontend,
) -> Result<f64> {
    check_point(point, config, processing)?;
    let cfg = point_config(point, config);
    let rate = closed_form_rate(&cfg, processing, frontend)?.per_user_rate;
    let overhead = (cfg.coherence - cfg.pilot_len()) as f64 / cfg.coherence as f64;
    // K R / E{P_total} collapses to R over the per-user expected power.
    Ok(overhead * cfg.users as f64 * rate / average_total_power(&cfg))
}

/// Weighted-product scalarization `F_SE^{w_SE} * F_EE^{w_EE}`.
pub fn weighted_product_objective(
    point: &OperatingPoint,
    config: &SystemConfig,
    processing: Processing,
    frontend: Frontend,
    w_se: f64,
    w_ee: f64,
) -> Result<f64> {
    if w_se < 0.0 || w_ee < 0.0 || (w_se == 0.0 && w_ee == 0.0) {
        return Err(Error::InvalidConfig("weights must be nonnegative, not both zero".into()));
    }
    let se = spectral_efficiency(point, config, processing, frontend)?;
    let ee = energy_efficiency(point, config, processing, frontend)?;
    Ok(scalarize(se, ee, w_se, w_ee))
}

fn scalarize(se: f64, ee: f64, w_se: f64, w_ee: f64) -> f64 {
    let f1 = if w_se == 0.0 { 1.0 } else { se.powf(w_se) };
    let f2 = if w_ee == 0.0 { 1.0 } else { ee.powf(w_ee) };
    f1 * f2
}

/// Exhaustive weighted-product maximization over the grid.
///
/// Iterates users, pilot ratio, and power in ascending order and keeps the
/// first strict maximum, so ties break toward smaller `K`, then smaller
/// `tau0`, then smaller `rho_u`, independent of evaluation order.
pub fn optimize(
    config: &SystemConfig,
    processing: Processing,
    frontend: Frontend,
    w_se: f64,
    w_ee: f64,
    grid: &SearchGrid,
) -> Result<(OperatingPoint, ParetoPoint)> {
    if w_se < 0.0 || w_ee < 0.0 || (w_se == 0.0 && w_ee == 0.0) {
        return Err(Error::InvalidConfig("weights must be nonnegative, not both zero".into()));
    }
    let user_cap = match processing {
        Processing::Zf => grid.max_users.min(config.max_users).min(config.antennas.saturating_sub(2)),
        Processing::Mrc => grid.max_users.min(config.max_users),
    };
    let mut best: Option<(f64, OperatingPoint, f64, f64)> = None;
    for users in grid.min_users.max(1)..=user_cap {
        for pilot_ratio in grid.min_pilot_ratio.max(1)..=grid.max_pilot_ratio {
            if pilot_ratio * users >= config.coherence {
                break;
            }
            for &db in &grid.power_db {
                let point = OperatingPoint {
                    users,
                    pilot_ratio,
                    operating_power: 10f64.powf(db / 10.0),
                };
                let se = match spectral_efficiency(&point, config, processing, frontend) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let ee = energy_efficiency(&point, config, processing, frontend)?;
                let objective = scalarize(se, ee, w_se, w_ee);
                if !objective.is_finite() {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((incumbent, ..)) => objective > *incumbent,
                };
                if better {
                    best = Some((objective, point, se, ee));
                }
            }
        }
    }
    match best {
        Some((_, point, se, ee)) => Ok((
            point,
            ParetoPoint { spectral: se, energy: ee, point, weights: (w_se, w_ee) },
        )),
        None => Err(Error::EmptyGrid(format!(
            "no feasible operating point for M={}, T={}",
            config.antennas, config.coherence
        ))),
    }
}

/// Remove points dominated in both objectives and sort by spectral
/// efficiency; the survivors have strictly increasing SE and strictly
/// decreasing EE.
pub fn prune_dominated(mut points: Vec<ParetoPoint>) -> Vec<ParetoPoint> {
    points.sort_by(|a, b| {
        a.spectral
            .partial_cmp(&b.spectral)
            .unwrap()
            .then(b.energy.partial_cmp(&a.energy).unwrap())
    });
    let mut frontier: Vec<ParetoPoint> = Vec::with_capacity(points.len());
    for p in points {
        // ascending SE: anything already kept with no more EE is dominated
        while let Some(last) = frontier.last() {
            if p.energy >= last.energy {
                frontier.pop();
            } else {
                break;
            }
        }
        if let Some(last) = frontier.last() {
            if last.spectral >= p.spectral && last.energy >= p.energy {
                continue;
            }
        }
        frontier.push(p);
    }
    frontier
}

/// Optimize once per weight pair and keep the non-dominated results,
/// ordered by increasing spectral efficiency.
pub fn pareto_sweep(
    config: &SystemConfig,
    processing: Processing,
    frontend: Frontend,
    weights: &[(f64, f64)],
    grid: &SearchGrid,
) -> Result<Vec<ParetoPoint>> {
    if weights.is_empty() {
        return Err(Error::InvalidConfig("at least one weight pair required".into()));
    }
    let mut points = Vec::with_capacity(weights.len());
    for &(w_se, w_ee) in weights {
        let (_, p) = optimize(config, processing, frontend, w_se, w_ee, grid)?;
        points.push(p);
    }
    Ok(prune_dominated(points))
}

/// Evenly spread weight pairs `(t, 1 - t)` for a frontier sweep.
pub fn weight_schedule(count: usize) -> Vec<(f64, f64)> {
    assert!(count >= 2, "need at least two weight pairs");
    (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            (t, 1.0 - t)
        })
        .collect()
}
