use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::allocation::{
    optimal_allocate, pm_allocate, random_allocate, sequential_mbest_allocate, threshold_allocate,
    threshold_grid_search, water_filling_gain, Allocation, LinkBudget, Method, RateReport,
};
use crate::channel::{sample_gains, FadingSpec};
use crate::codec::feedback_bits;
use crate::error::Result;

const PILOT_SALT: u64 = 0x7069_6c6f_7473_0001;
const RANDOM_SALT: u64 = 1;
const QUEUE_SALT: u64 = 2;
const SPREAD_SALT: u64 = 3;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at population `n`; independent of execution order.
pub fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    splitmix(splitmix(splitmix(master) ^ n as u64) ^ trial as u64)
}

fn sub_seed(seed: u64, salt: u64) -> u64 {
    splitmix(seed ^ salt.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// One method's outcome on one channel realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub method: Method,
    pub n: usize,
    pub k: usize,
    /// Empty when users belong to classes with different `b`.
    pub b: Option<usize>,
    pub m: usize,
    pub seed: u64,
    pub sum_rate: f64,
    pub min_rate: f64,
    pub mean_rate: f64,
    /// Only filled for the PM method.
    pub pm_exists: Option<bool>,
    /// Feedback per user in bits; empty for full-CSI allocation.
    pub feedback_bits: Option<f64>,
    pub wf_gain: f64,
    #[serde(skip)]
    pub per_user_rate: Vec<f64>,
    #[serde(skip)]
    pub b_per_user: Vec<usize>,
}

pub const CSV_HEADER: &str = "method,n,k,b,m,seed,sum_rate,min_rate,mean_rate,pm_exists,feedback_bits,wf_gain";

/// Per-user feedback load of a method with `K` channels and `M`-subsets.
pub fn method_feedback_bits(method: Method, k: usize, m: usize) -> Result<Option<f64>> {
    Ok(match method {
        Method::Pm | Method::LeinonenSet => Some(feedback_bits(k, m)?),
        // M indices of ceil(log2 K) bits each
        Method::LeinonenOrdered => Some((m as f64) * (k as f64).log2().ceil()),
        Method::Threshold => Some(k as f64),
        Method::Random => Some(0.0),
        Method::Hungarian => None,
    })
}

/// Everything shared by the trials of one population size.
#[derive(Debug, Clone)]
pub struct PopulationSetup {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub b_per_user: Vec<usize>,
    pub budget: LinkBudget,
    pub threshold: Option<f64>,
}

fn fading_for(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<FadingSpec> {
    match cfg.user_spread_db {
        Some(s) if s > 0.0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, SPREAD_SALT));
            let scales = (0..n).map(|_| 10f64.powf(s * (rng.random::<f64>() - 0.5) / 20.0)).collect();
            cfg.fading.clone().with_user_scales(scales)
        }
        _ => Ok(cfg.fading.clone()),
    }
}

pub fn population_setup(cfg: &ExperimentConfig, n: usize) -> Result<PopulationSetup> {
    let b_per_user = cfg.b_per_user(n);
    let k: usize = b_per_user.iter().sum();
    let m = cfg.m_rule.m(k, cfg.b)?;
    let budget = LinkBudget::calibrated(cfg.snr_db, cfg.fading.mean_square_gain(), cfg.b.unwrap_or(1))?;
    let threshold = if cfg.methods.contains(&Method::Threshold) {
        let pilots = (0..cfg.threshold.pilots)
            .map(|i| {
                let seed = trial_seed(cfg.master_seed ^ PILOT_SALT, n, i);
                sample_gains(&fading_for(cfg, n, seed)?, n, k, seed)
            })
            .collect::<Result<Vec<_>>>()?;
        Some(threshold_grid_search(&pilots, &b_per_user, &budget, cfg.threshold.grid_points, cfg.threshold.quantile)?)
    } else {
        None
    };
    Ok(PopulationSetup { n, k, m, b_per_user, budget, threshold })
}

/// Runs every configured method on the realization of `trial`.
pub fn run_trial(cfg: &ExperimentConfig, setup: &PopulationSetup, trial: usize) -> Result<Vec<TrialRecord>> {
    let PopulationSetup { n, k, m, ref b_per_user, ref budget, threshold } = *setup;
    let seed = trial_seed(cfg.master_seed, n, trial);
    let gains = sample_gains(&fading_for(cfg, n, seed)?, n, k, seed)?;
    let scale = cfg.rate_scale();
    let mut out = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let mut pm_exists = None;
        let alloc: Allocation = match method {
            Method::Pm => {
                let (a, matching) = pm_allocate(&gains, m, b_per_user)?;
                pm_exists = Some(matching.is_perfect());
                a
            }
            Method::Hungarian => optimal_allocate(&gains, budget, b_per_user)?,
            Method::Random => random_allocate(k, b_per_user, sub_seed(seed, RANDOM_SALT))?,
            Method::Threshold => threshold_allocate(&gains, threshold.unwrap_or(0.0), b_per_user)?,
            Method::LeinonenSet | Method::LeinonenOrdered => {
                let mut queue: Vec<usize> = (0..n).collect();
                queue.shuffle(&mut ChaCha8Rng::seed_from_u64(sub_seed(seed, QUEUE_SALT)));
                sequential_mbest_allocate(&gains, m, b_per_user, &queue, method == Method::LeinonenOrdered)?
            }
        };
        let report = RateReport::evaluate(&gains, &alloc, budget).scaled(scale);
        out.push(TrialRecord {
            method,
            n,
            k,
            b: cfg.b,
            m,
            seed,
            sum_rate: report.sum_rate,
            min_rate: report.min_rate,
            mean_rate: report.mean_rate,
            pm_exists,
            feedback_bits: method_feedback_bits(method, k, m)?,
            wf_gain: water_filling_gain(&gains, &alloc, budget)?,
            per_user_rate: report.per_user_rate,
            b_per_user: b_per_user.clone(),
        });
    }
    Ok(out)
}

/// All records of an experiment, ordered by `N`, trial, then method.
///
/// Trials run in parallel; the output does not depend on the thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let mut all = Vec::new();
    for &n in &cfg.n_list {
        let setup = population_setup(cfg, n)?;
        let per_trial = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, &setup, t))
            .collect::<Result<Vec<_>>>()?;
        all.extend(per_trial.into_iter().flatten());
    }
    Ok(all)
}

pub fn write_csv<W: Write>(records: &[TrialRecord], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::FadingSpec;

    fn small() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(FadingSpec::unit_rayleigh(), vec![5, 10], 2);
        cfg.trials = 3;
        cfg.master_seed = 11;
        cfg.methods = vec![Method::Pm, Method::Hungarian, Method::Random, Method::Threshold];
        cfg.threshold.pilots = 3;
        cfg
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a = trial_seed(1, 10, 0);
        assert_eq!(a, trial_seed(1, 10, 0));
        assert_ne!(a, trial_seed(1, 10, 1));
        assert_ne!(a, trial_seed(1, 11, 0));
        assert_ne!(a, trial_seed(2, 10, 0));
    }

    #[test]
    fn deterministic_csv() {
        let cfg = small();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&run_experiment(&cfg).unwrap(), &mut a).unwrap();
        write_csv(&run_experiment(&cfg).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().count(), 1 + 2 * 3 * 4);
    }

    #[test]
    fn trial_order_irrelevant() {
        let cfg = small();
        let setup = population_setup(&cfg, 10).unwrap();
        let fwd: Vec<_> = (0..3).map(|t| run_trial(&cfg, &setup, t).unwrap()).collect();
        let mut rev: Vec<_> = (0..3).rev().map(|t| run_trial(&cfg, &setup, t).unwrap()).collect();
        rev.reverse();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn records_are_sane() {
        for r in run_experiment(&small()).unwrap() {
            assert!(r.min_rate >= 0.0 && r.sum_rate >= r.min_rate);
            assert!(r.wf_gain >= -1e-12);
            assert_eq!(r.pm_exists.is_some(), r.method == Method::Pm);
            assert_eq!(r.k, 2 * r.n);
        }
    }

    #[test]
    fn feedback_loads() {
        assert_eq!(method_feedback_bits(Method::Threshold, 20, 9).unwrap(), Some(20.0));
        assert_eq!(method_feedback_bits(Method::Hungarian, 20, 9).unwrap(), None);
        let ordered = method_feedback_bits(Method::LeinonenOrdered, 20, 9).unwrap().unwrap();
        assert_eq!(ordered / 20.0, 2.25);
        let ordered = method_feedback_bits(Method::LeinonenOrdered, 100, 14).unwrap().unwrap();
        assert_eq!(ordered / 100.0, 0.98);
    }
}
