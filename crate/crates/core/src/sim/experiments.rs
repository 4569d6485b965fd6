use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use super::config::{ExperimentConfig, MRule};
use super::runner::{run_experiment, TrialRecord};
use super::stats::{binomial_se, mean, std_err};
use crate::allocation::Method;
use crate::bounds::{theorem1_bound, BoundInput};
use crate::channel::FadingSpec;
use crate::codec::Rounding;
use crate::error::{Error, Result};

/// Per `(N, method)` aggregates of a record stream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub n: usize,
    pub method: Method,
    pub k: usize,
    pub m: usize,
    pub trials: usize,
    pub mean_sum_rate: f64,
    pub se_sum_rate: f64,
    pub mean_rate: f64,
    pub se_mean_rate: f64,
    pub mean_min_rate: f64,
    pub se_min_rate: f64,
    pub no_pm_fraction: Option<f64>,
    pub feedback_bits_per_channel: Option<f64>,
    pub mean_wf_gain: f64,
    pub max_wf_gain: f64,
}

/// Groups records by `(N, method)` in order of first appearance.
pub fn summarize(records: &[TrialRecord]) -> Vec<MethodSummary> {
    let mut order: Vec<(usize, Method)> = Vec::new();
    let mut groups: BTreeMap<(usize, Method), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.n, r.method);
        groups.entry(key).or_insert_with(|| {
            order.push(key);
            Vec::new()
        });
        groups.get_mut(&key).expect("inserted").push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            let col = |f: fn(&TrialRecord) -> f64| g.iter().map(|r| f(r)).collect::<Vec<f64>>();
            let sums = col(|r| r.sum_rate);
            let means = col(|r| r.mean_rate);
            let mins = col(|r| r.min_rate);
            let wf = col(|r| r.wf_gain);
            let pm: Vec<f64> = g.iter().filter_map(|r| r.pm_exists).map(|e| if e { 0.0 } else { 1.0 }).collect();
            MethodSummary {
                n: key.0,
                method: key.1,
                k: g[0].k,
                m: g[0].m,
                trials: g.len(),
                mean_sum_rate: mean(&sums),
                se_sum_rate: std_err(&sums),
                mean_rate: mean(&means),
                se_mean_rate: std_err(&means),
                mean_min_rate: mean(&mins),
                se_min_rate: std_err(&mins),
                no_pm_fraction: (!pm.is_empty()).then(|| mean(&pm)),
                feedback_bits_per_channel: g[0].feedback_bits.map(|b| b / g[0].k as f64),
                mean_wf_gain: mean(&wf),
                max_wf_gain: wf.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect()
}

pub fn write_rows<T: Serialize, W: Write>(rows: &[T], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

/// Per-class rates of one method at one population size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRates {
    pub method: Method,
    pub b: usize,
    pub rates: Vec<f64>,
}

pub fn class_rates(records: &[TrialRecord], n: usize) -> Vec<ClassRates> {
    let mut map: BTreeMap<(Method, usize), Vec<f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.n == n) {
        for (rate, &b) in r.per_user_rate.iter().zip(&r.b_per_user) {
            map.entry((r.method, b)).or_default().push(*rate);
        }
    }
    map.into_iter().map(|((method, b), rates)| ClassRates { method, b, rates }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table2Row {
    pub n: usize,
    pub k: usize,
    pub m_low: usize,
    pub no_pm_low: f64,
    pub se_low: f64,
    pub m_high: usize,
    pub no_pm_high: f64,
    pub se_high: f64,
    pub upper_bound: f64,
}

pub const TABLE2_N: [usize; 5] = [10, 25, 50, 75, 100];

/// PM-only Rayleigh experiment with `b = 4` under an `M = floor(c ln K)` rule.
pub fn table2_config(coefficient: f64, n_list: Vec<usize>, trials: usize, master_seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(FadingSpec::unit_rayleigh(), n_list, 4);
    cfg.m_rule = MRule::Ln { coefficient, rounding: Rounding::Floor };
    cfg.methods = vec![Method::Pm];
    cfg.trials = trials;
    cfg.master_seed = master_seed;
    cfg
}

/// Empirical probability that no PM exists for `M = floor(b ln K)` and
/// `M = floor(1.5 (b+1) ln K)`, beside the two-term bound at `eps = 0.5`.
pub fn table2(n_list: &[usize], trials: usize, master_seed: u64) -> Result<Vec<Table2Row>> {
    let b = 4usize;
    let low = run_experiment(&table2_config(b as f64, n_list.to_vec(), trials, master_seed))?;
    let high = run_experiment(&table2_config(1.5 * (b as f64 + 1.0), n_list.to_vec(), trials, master_seed))?;
    let (low, high) = (summarize(&low), summarize(&high));
    n_list
        .iter()
        .zip(low.iter().zip(&high))
        .map(|(&n, (l, h))| {
            let k = b * n;
            let pl = l.no_pm_fraction.unwrap_or(f64::NAN);
            let ph = h.no_pm_fraction.unwrap_or(f64::NAN);
            Ok(Table2Row {
                n,
                k,
                m_low: l.m,
                no_pm_low: pl,
                se_low: binomial_se(pl, trials),
                m_high: h.m,
                no_pm_high: ph,
                se_high: binomial_se(ph, trials),
                upper_bound: theorem1_bound(&BoundInput::new(k, b, 0.5)?),
            })
        })
        .collect()
}

/// Named experiment setups of the rate comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Rayleigh, `b = 4`, `M = ceil(1.5 (b+1) ln K)`.
    Uncorrelated,
    /// Rayleigh, `b = 1`, `N = K`, `M = ceil(3 ln K)`, with the sequential baselines.
    OneChannel,
    /// EPA resource blocks, `b = 4`, `M = ceil(2 (b+1) ln K)`.
    Correlated,
    /// EPA resource blocks, `b = 1`, with the sequential baselines.
    CorrelatedOneChannel,
    /// Four classes with `b = 1..4`, `M = ceil(3.75 ln K)`.
    Classes,
    /// Four classes on EPA resource blocks, `M = ceil(5 ln K)`.
    ClassesCorrelated,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Uncorrelated,
        Figure::OneChannel,
        Figure::Correlated,
        Figure::CorrelatedOneChannel,
        Figure::Classes,
        Figure::ClassesCorrelated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Uncorrelated => "uncorrelated",
            Figure::OneChannel => "b1",
            Figure::Correlated => "correlated",
            Figure::CorrelatedOneChannel => "correlated-b1",
            Figure::Classes => "classes",
            Figure::ClassesCorrelated => "classes-correlated",
        }
    }

    /// Spread of per-user mean power in the correlated setups, in dB.
    pub const USER_SPREAD_DB: f64 = 6.0;

    pub fn config(self, trials: usize, master_seed: u64) -> ExperimentConfig {
        use Method::*;
        let ceil = |c: f64| MRule::Ln { coefficient: c, rounding: Rounding::Ceil };
        let mut cfg = match self {
            Figure::Uncorrelated => {
                let mut c = ExperimentConfig::new(FadingSpec::unit_rayleigh(), vec![10, 25, 50, 75, 100], 4);
                c.methods = vec![Pm, Hungarian, Random, Threshold];
                c
            }
            Figure::OneChannel => {
                let mut c = ExperimentConfig::new(FadingSpec::unit_rayleigh(), vec![20, 40, 60, 80, 100], 1);
                c.m_rule = ceil(3.0);
                c.methods = vec![Pm, Hungarian, Random, Threshold, LeinonenSet, LeinonenOrdered];
                c
            }
            Figure::Correlated => {
                let mut c = ExperimentConfig::new(FadingSpec::epa(), vec![32, 64, 96, 128], 4);
                c.m_rule = ceil(10.0);
                c.methods = vec![Pm, Hungarian, Random, Threshold];
                c.user_spread_db = Some(Self::USER_SPREAD_DB);
                c
            }
            Figure::CorrelatedOneChannel => {
                let mut c = ExperimentConfig::new(FadingSpec::epa(), vec![32, 64, 96, 128], 1);
                c.m_rule = ceil(4.0);
                c.methods = vec![Pm, Hungarian, Random, Threshold, LeinonenSet, LeinonenOrdered];
                c.user_spread_db = Some(Self::USER_SPREAD_DB);
                c
            }
            Figure::Classes | Figure::ClassesCorrelated => {
                let correlated = self == Figure::ClassesCorrelated;
                let fading = if correlated { FadingSpec::epa() } else { FadingSpec::unit_rayleigh() };
                let n_list = if correlated { vec![32, 64, 96, 128] } else { vec![12, 20, 48, 72, 100] };
                let mut c = ExperimentConfig::new(fading, n_list, 1);
                c.b = None;
                c.classes = Some(vec![1, 2, 3, 4]);
                c.m_rule = ceil(if correlated { 5.0 } else { 3.75 });
                c.methods = vec![Pm, Hungarian, Random];
                c.user_spread_db = correlated.then_some(Self::USER_SPREAD_DB);
                c
            }
        };
        cfg.name = Some(self.name().to_string());
        cfg.trials = trials;
        cfg.master_seed = master_seed;
        cfg
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown figure `{s}`")))
    }
}

/// Mean and minimum rate per method and `N` for one figure setup.
pub fn rate_figures(figure: Figure, trials: usize, master_seed: u64) -> Result<(ExperimentConfig, Vec<TrialRecord>, Vec<MethodSummary>)> {
    let cfg = figure.config(trials, master_seed);
    let records = run_experiment(&cfg)?;
    let summary = summarize(&records);
    Ok((cfg, records, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WfGainRow {
    pub b: usize,
    pub k: usize,
    pub m: usize,
    pub snr_db: f64,
    pub method: Method,
    pub mean_gain: f64,
    pub max_gain: f64,
    pub min_gain: f64,
}

pub const WF_B: [usize; 7] = [2, 4, 6, 8, 10, 12, 14];

/// Relative mean-rate gain of water-filling for PM and Hungarian allocations,
/// `N` users, `M = ceil(2 (b+1) ln K)`.
pub fn wf_gain_sweep(n: usize, b_list: &[usize], snr_db: f64, trials: usize, master_seed: u64) -> Result<Vec<WfGainRow>> {
    let mut rows = Vec::new();
    for &b in b_list {
        let mut cfg = ExperimentConfig::new(FadingSpec::unit_rayleigh(), vec![n], b);
        cfg.m_rule = MRule::Ln { coefficient: 2.0 * (b as f64 + 1.0), rounding: Rounding::Ceil };
        cfg.methods = vec![Method::Pm, Method::Hungarian];
        cfg.snr_db = snr_db;
        cfg.trials = trials;
        cfg.master_seed = master_seed;
        let records = run_experiment(&cfg)?;
        for method in [Method::Pm, Method::Hungarian] {
            let r: Vec<&TrialRecord> = records.iter().filter(|r| r.method == method).collect();
            // gain of the trial-averaged mean rate
            let wf_means: Vec<f64> = r.iter().map(|r| r.mean_rate * (1.0 + r.wf_gain)).collect();
            let means: Vec<f64> = r.iter().map(|r| r.mean_rate).collect();
            let gains: Vec<f64> = r.iter().map(|r| r.wf_gain).collect();
            rows.push(WfGainRow {
                b,
                k: b * n,
                m: r[0].m,
                snr_db,
                method,
                mean_gain: mean(&wf_means) / mean(&means) - 1.0,
                max_gain: gains.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                min_gain: gains.iter().copied().fold(f64::INFINITY, f64::min),
            });
        }
    }
    Ok(rows)
}
