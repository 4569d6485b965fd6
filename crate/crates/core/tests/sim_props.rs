use pm_feedback::allocation::Method;
use pm_feedback::channel::FadingSpec;
use pm_feedback::sim::{
    evaluate_checks, run_experiment, summarize, trial_seed, wf_gain_sweep, write_csv, ExperimentConfig, MRule, CSV_HEADER,
};

fn small_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(FadingSpec::unit_rayleigh(), vec![5, 10], 2);
    cfg.trials = 12;
    cfg.master_seed = 99;
    cfg.methods = Method::ALL.to_vec();
    cfg.b = Some(1);
    cfg.m_rule = MRule::Fixed { m: 3 };
    cfg
}

#[test]
fn experiments_are_reproducible() {
    let cfg = small_config();
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 2 * 12 * Method::ALL.len());
    let mut other = cfg.clone();
    other.master_seed = 100;
    assert_ne!(run_experiment(&other).unwrap(), a);
}

#[test]
fn seeds_are_distinct() {
    let mut seeds: Vec<u64> = (0..50).flat_map(|n| (0..50).map(move |t| trial_seed(1, n, t))).collect();
    seeds.sort_unstable();
    seeds.dedup();
    assert_eq!(seeds.len(), 2500);
}

#[test]
fn csv_has_header_and_one_row_per_record() {
    let records = run_experiment(&small_config()).unwrap();
    let mut out = Vec::new();
    write_csv(&records, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    assert_eq!(lines.count(), records.len());
}

#[test]
fn records_are_consistent() {
    let records = run_experiment(&small_config()).unwrap();
    for r in &records {
        assert!(r.min_rate <= r.mean_rate + 1e-9 && r.mean_rate * r.n as f64 - r.sum_rate < 1e-6);
        assert!(r.wf_gain >= 0.0);
        assert_eq!(r.pm_exists.is_some(), r.method == Method::Pm);
        assert_eq!(r.feedback_bits.is_none(), r.method == Method::Hungarian);
    }
    let summary = summarize(&records);
    assert_eq!(summary.len(), 2 * Method::ALL.len());
    assert!(evaluate_checks(&small_config(), &records).iter().all(|g| g.passed));
}

#[test]
fn water_filling_gain_shrinks_with_snr() {
    let low = wf_gain_sweep(10, &[2, 6], 0.0, 20, 3).unwrap();
    let high = wf_gain_sweep(10, &[2, 6], 20.0, 20, 3).unwrap();
    for (l, h) in low.iter().zip(&high) {
        assert!(h.mean_gain < l.mean_gain, "b={}: {} vs {}", l.b, h.mean_gain, l.mean_gain);
    }
}
