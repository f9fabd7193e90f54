//! Scenario configuration.
//!
//! A [`SystemConfig`] carries every parameter of a simulated cell: array and
//! user counts, the pilot/coherence split, the operating power, and the cell
//! geometry that drives large-scale fading. Configurations are ingested from
//! JSON with exactly the field names below; unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// All scenario parameters for one simulated cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Number of base-station antennas.
    #[serde(rename = "M")]
    pub antennas: usize,
    /// Number of active terminals served simultaneously.
    #[serde(rename = "K")]
    pub users: usize,
    /// Size of the terminal pool the active set is drawn from.
    #[serde(rename = "K_max")]
    pub max_users: usize,
    /// Relative pilot length; the training interval is `tau0 * K` symbols.
    #[serde(rename = "tau0")]
    pub pilot_ratio: usize,
    /// Coherence interval in symbols.
    #[serde(rename = "T")]
    pub coherence: usize,
    /// System operating power (linear units) after statistical power control.
    #[serde(rename = "rho_u")]
    pub operating_power: f64,
    /// Fraction of the data interval allocated to the uplink.
    #[serde(rename = "gamma")]
    pub uplink_fraction: f64,
    /// Inner exclusion radius of the cell annulus, meters.
    #[serde(rename = "r_min")]
    pub radius_min: f64,
    /// Outer cell radius, meters.
    #[serde(rename = "r_max")]
    pub radius_max: f64,
    /// Non-logarithmic shadowing value in the large-scale fading model.
    #[serde(rename = "d_bar")]
    pub shadowing: f64,
    /// Path-loss exponent.
    #[serde(rename = "kappa")]
    pub path_loss_exp: f64,
    /// Master RNG seed; every random quantity derives from it.
    #[serde(rename = "seed")]
    pub seed: u64,
}

impl SystemConfig {
    /// Parse a JSON document, rejecting unknown keys, and validate it.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SystemConfig =
            serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Serialize back to JSON with the canonical field names.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// Training interval length `tau = tau0 * K`.
    pub fn pilot_len(&self) -> usize {
        self.pilot_ratio * self.users
    }

    /// Number of data symbols per coherence interval, `T - tau`.
    pub fn data_len(&self) -> usize {
        self.coherence - self.pilot_len()
    }

    /// Check every invariant; call sites assume a validated config.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.antennas == 0 {
            return fail("M must be positive".into());
        }
        if self.users == 0 {
            return fail("K must be positive".into());
        }
        if self.users > self.max_users {
            return fail(format!("K = {} exceeds K_max = {}", self.users, self.max_users));
        }
        if self.pilot_ratio == 0 {
            return fail("tau0 must be positive".into());
        }
        if self.pilot_len() >= self.coherence {
            return fail(format!(
                "pilot interval tau = tau0*K = {} must be shorter than T = {}",
                self.pilot_len(),
                self.coherence
            ));
        }
        if !(self.operating_power > 0.0) {
            return fail("rho_u must be strictly positive".into());
        }
        if !(self.uplink_fraction > 0.0 && self.uplink_fraction < 1.0) {
            return fail("gamma must lie in (0, 1)".into());
        }
        if !(self.radius_min > 0.0) {
            return fail("r_min must be strictly positive".into());
        }
        if !(self.radius_min < self.radius_max) {
            return fail("r_min must be smaller than r_max".into());
        }
        if !(self.shadowing > 0.0) {
            return fail("d_bar must be strictly positive".into());
        }
        if !(self.path_loss_exp > 0.0) {
            return fail("kappa must be strictly positive".into());
        }
        Ok(())
    }

    /// Copy with a different operating power (sweep helper).
    pub fn with_operating_power(&self, operating_power: f64) -> Self {
        Self { operating_power, ..self.clone() }
    }

    /// Copy with a different antenna count (sweep helper).
    pub fn with_antennas(&self, antennas: usize) -> Self {
        Self { antennas, ..self.clone() }
    }

    /// Copy with a different active-user count and pilot ratio (sweep helper).
    pub fn with_users_and_pilot(&self, users: usize, pilot_ratio: usize) -> Self {
        Self { users, pilot_ratio, ..self.clone() }
    }
}
