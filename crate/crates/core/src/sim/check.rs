use std::fmt;

use super::config::ExperimentConfig;
use super::experiments::{summarize, MethodSummary};
use super::runner::TrialRecord;
use crate::allocation::Method;

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn gate(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Gate {
    Gate { name: name.into(), passed, detail: detail.into() }
}

fn find(s: &[MethodSummary], n: usize, m: Method) -> Option<&MethodSummary> {
    s.iter().find(|x| x.n == n && x.method == m)
}

/// Built-in sanity gates plus the optional ones configured under `[check]`.
pub fn evaluate_checks(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Vec<Gate> {
    let mut out = Vec::new();
    let bad = records.iter().filter(|r| !(r.min_rate >= 0.0 && r.sum_rate.is_finite())).count();
    out.push(gate("rates_nonnegative", bad == 0, format!("{bad} records with negative or non-finite rates")));
    let worst = records.iter().map(|r| r.wf_gain).fold(f64::INFINITY, f64::min);
    out.push(gate("wf_gain_nonnegative", records.is_empty() || worst >= -1e-9, format!("smallest gain {worst:.3e}")));

    // PM never beats the optimum on the same realization
    let mut above = 0;
    for pm in records.iter().filter(|r| r.method == Method::Pm) {
        if let Some(h) = records.iter().find(|h| h.method == Method::Hungarian && h.seed == pm.seed && h.n == pm.n) {
            if pm.sum_rate > h.sum_rate * (1.0 + 1e-9) {
                above += 1;
            }
        }
    }
    if cfg.methods.contains(&Method::Pm) && cfg.methods.contains(&Method::Hungarian) {
        out.push(gate("pm_below_optimal", above == 0, format!("{above} trials where PM exceeded the optimum")));
    }

    let summary = summarize(records);
    let c = &cfg.check;
    for &n in &cfg.n_list {
        if let Some(min) = c.min_pm_to_optimal {
            if let (Some(p), Some(h)) = (find(&summary, n, Method::Pm), find(&summary, n, Method::Hungarian)) {
                let ratio = p.mean_sum_rate / h.mean_sum_rate;
                out.push(gate(format!("pm_to_optimal[N={n}]"), ratio >= min, format!("{ratio:.4} >= {min}")));
            }
        }
        let frac = find(&summary, n, Method::Pm).and_then(|p| p.no_pm_fraction);
        if let (Some(max), Some(f)) = (c.max_no_pm_fraction, frac) {
            out.push(gate(format!("no_pm_fraction_max[N={n}]"), f <= max, format!("{f:.4} <= {max}")));
        }
        if let (Some(min), Some(f)) = (c.min_no_pm_fraction, frac) {
            out.push(gate(format!("no_pm_fraction_min[N={n}]"), f >= min, format!("{f:.4} >= {min}")));
        }
        if c.pm_best_min_rate {
            if let Some(p) = find(&summary, n, Method::Pm) {
                let rivals: Vec<&MethodSummary> = summary
                    .iter()
                    .filter(|s| s.n == n && !matches!(s.method, Method::Pm | Method::Hungarian))
                    .collect();
                let ok = rivals.iter().all(|r| p.mean_min_rate > r.mean_min_rate);
                out.push(gate(format!("pm_best_min_rate[N={n}]"), ok, format!("PM mean min rate {:.3}", p.mean_min_rate)));
            }
        }
    }
    if let Some(max) = c.max_wf_gain {
        let top = records.iter().map(|r| r.wf_gain).fold(0.0, f64::max);
        out.push(gate("wf_gain_max", top <= max, format!("{top:.3e} <= {max}")));
    }
    out
}
