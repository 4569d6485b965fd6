use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::allocation::Method;
use crate::channel::FadingSpec;
use crate::codec::{select_m, select_m_ln, MPolicy, Rounding};
use crate::error::{Error, Result};

/// Rule choosing how many best channels each user reports, as a function of K.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum MRule {
    /// `round((b+1)(1+epsilon) ln K)`; needs a single `b`.
    Policy { epsilon: f64, rounding: Rounding },
    /// `round(coefficient ln K)`.
    Ln { coefficient: f64, rounding: Rounding },
    Fixed { m: usize },
}

impl Default for MRule {
    fn default() -> Self {
        MRule::Policy { epsilon: 0.5, rounding: Rounding::Ceil }
    }
}

impl MRule {
    pub fn m(&self, k: usize, b: Option<usize>) -> Result<usize> {
        match *self {
            MRule::Policy { epsilon, rounding } => {
                let b = b.ok_or_else(|| Error::Config {
                    field: "m_rule".into(),
                    reason: "policy rule needs a single b; use rule = \"ln\" with classes".into(),
                })?;
                Ok(select_m(k, &MPolicy::new(b, epsilon, rounding)?))
            }
            MRule::Ln { coefficient, rounding } => Ok(select_m_ln(k, coefficient, rounding)),
            MRule::Fixed { m } => Ok(m.min(k)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateUnits {
    /// bits per channel use times the channel bandwidth, in kbit/s.
    #[default]
    Kbps,
    BitsPerUse,
}

/// Pilot-based tuning of the one-bit threshold baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThresholdTuning {
    pub pilots: usize,
    pub grid_points: usize,
    pub quantile: f64,
}

impl Default for ThresholdTuning {
    fn default() -> Self {
        Self { pilots: 20, grid_points: 30, quantile: 0.999 }
    }
}

/// Optional statistical gates evaluated by `simulate --check`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckSpec {
    /// Lower bound on mean PM sum-rate over mean Hungarian sum-rate, per N.
    pub min_pm_to_optimal: Option<f64>,
    /// Upper bound on the empirical probability that no PM exists, per N.
    pub max_no_pm_fraction: Option<f64>,
    /// Lower bound on the empirical probability that no PM exists, per N.
    pub min_no_pm_fraction: Option<f64>,
    /// Upper bound on the water-filling relative gain of any trial.
    pub max_wf_gain: Option<f64>,
    /// PM mean minimum rate must exceed every other method's, per N.
    pub pm_best_min_rate: bool,
}

fn default_bandwidth() -> f64 {
    15_000.0
}

fn default_trials() -> usize {
    100
}

fn default_snr() -> f64 {
    20.0
}

fn default_methods() -> Vec<Method> {
    vec![Method::Pm, Method::Hungarian, Method::Random]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub fading: FadingSpec,
    pub n_list: Vec<usize>,
    /// Channels per user when every user gets the same number.
    #[serde(default)]
    pub b: Option<usize>,
    /// Channel counts of equally sized user classes; replaces `b`.
    #[serde(default)]
    pub classes: Option<Vec<usize>>,
    #[serde(default)]
    pub m_rule: MRule,
    #[serde(default = "default_snr")]
    pub snr_db: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_bandwidth")]
    pub bandwidth_hz: f64,
    #[serde(default)]
    pub units: RateUnits,
    /// Width in dB of the uniform spread of per-user mean channel power.
    #[serde(default)]
    pub user_spread_db: Option<f64>,
    #[serde(default)]
    pub threshold: ThresholdTuning,
    #[serde(default)]
    pub check: CheckSpec,
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config { field: field.into(), reason: reason.into() }
}

impl ExperimentConfig {
    /// Defaults for everything but the fading law, population and `b`.
    pub fn new(fading: FadingSpec, n_list: Vec<usize>, b: usize) -> Self {
        Self {
            name: None,
            fading,
            n_list,
            b: Some(b),
            classes: None,
            m_rule: MRule::default(),
            snr_db: default_snr(),
            trials: default_trials(),
            master_seed: 0,
            methods: default_methods(),
            bandwidth_hz: default_bandwidth(),
            units: RateUnits::Kbps,
            user_spread_db: None,
            threshold: ThresholdTuning::default(),
            check: CheckSpec::default(),
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| config_err("<file>", e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err("<file>", e.to_string()))
    }

    /// Every problem found, each tagged with its field.
    pub fn problems(&self) -> Vec<Error> {
        let mut out = Vec::new();
        if let Err(e) = self.fading.validate() {
            out.push(config_err("fading", e.to_string()));
        }
        if self.fading.user_scales.is_some() {
            out.push(config_err("fading.user_scales", "set per-user power through user_spread_db"));
        }
        if self.n_list.is_empty() {
            out.push(config_err("n_list", "must be nonempty"));
        }
        if self.n_list.contains(&0) {
            out.push(config_err("n_list", "N must be positive"));
        }
        match (&self.b, &self.classes) {
            (Some(_), Some(_)) => out.push(config_err("classes", "give either b or classes, not both")),
            (None, None) => out.push(config_err("b", "missing; give b or classes")),
            (Some(0), _) => out.push(config_err("b", "must be at least 1")),
            (None, Some(c)) => {
                if c.is_empty() || c.contains(&0) {
                    out.push(config_err("classes", "needs at least one class, each with b >= 1"));
                } else if let Some(n) = self.n_list.iter().find(|&&n| n % c.len() != 0) {
                    out.push(config_err("n_list", format!("N = {n} not divisible into {} classes", c.len())));
                }
            }
            _ => {}
        }
        match self.m_rule {
            MRule::Policy { epsilon, .. } if !(epsilon > 0.0) => out.push(config_err("m_rule.epsilon", "must be positive")),
            MRule::Policy { .. } if self.b.is_none() => {
                out.push(config_err("m_rule", "policy rule needs a single b; use rule = \"ln\" with classes"))
            }
            MRule::Ln { coefficient, .. } if !(coefficient > 0.0) => {
                out.push(config_err("m_rule.coefficient", "must be positive"))
            }
            MRule::Fixed { m: 0 } => out.push(config_err("m_rule.m", "must be at least 1")),
            _ => {}
        }
        if !self.snr_db.is_finite() {
            out.push(config_err("snr_db", "must be finite"));
        }
        if self.trials == 0 {
            out.push(config_err("trials", "must be at least 1"));
        }
        if self.methods.is_empty() {
            out.push(config_err("methods", "must name at least one method"));
        }
        let one_channel = self.b == Some(1);
        if !one_channel && self.methods.iter().any(|m| matches!(m, Method::LeinonenSet | Method::LeinonenOrdered)) {
            out.push(config_err("methods", "leinonen methods need b = 1"));
        }
        if !(self.bandwidth_hz > 0.0) {
            out.push(config_err("bandwidth_hz", "must be positive"));
        }
        if let Some(s) = self.user_spread_db {
            if !(s >= 0.0) || !s.is_finite() {
                out.push(config_err("user_spread_db", "must be finite and nonnegative"));
            }
        }
        let t = &self.threshold;
        if t.pilots == 0 || t.grid_points < 2 || !(t.quantile > 0.0 && t.quantile <= 1.0) {
            out.push(config_err("threshold", "needs pilots >= 1, grid_points >= 2, 0 < quantile <= 1"));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.problems().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Channel count of each of `n` users.
    pub fn b_per_user(&self, n: usize) -> Vec<usize> {
        match (&self.classes, self.b) {
            (Some(classes), _) => {
                let per = n / classes.len();
                classes.iter().flat_map(|&b| std::iter::repeat_n(b, per)).collect()
            }
            (None, Some(b)) => vec![b; n],
            (None, None) => Vec::new(),
        }
    }

    pub fn rate_scale(&self) -> f64 {
        match self.units {
            RateUnits::Kbps => self.bandwidth_hz / 1000.0,
            RateUnits::BitsPerUse => 1.0,
        }
    }
}
