//! Channel allocators and rate evaluation.
//!
//! All allocators return an [`Allocation`]: per-user, pairwise disjoint sets
//! of 0-indexed channels. Rates follow the equal-power model
//! `R_n = sum_k log2(1 + g_{n,k}^2 P / (b N0))`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{m_best_ranked, m_best_reports, ChannelGainMatrix};
use crate::error::{Error, Result};
use crate::matching::{build_graph, maximum_matching, optimal_assignment, Matching, WeightMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pm,
    Hungarian,
    Random,
    Threshold,
    LeinonenSet,
    LeinonenOrdered,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Pm,
        Method::Hungarian,
        Method::Random,
        Method::Threshold,
        Method::LeinonenSet,
        Method::LeinonenOrdered,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Pm => "pm",
            Method::Hungarian => "hungarian",
            Method::Random => "random",
            Method::Threshold => "threshold",
            Method::LeinonenSet => "leinonen_set",
            Method::LeinonenOrdered => "leinonen_ordered",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    /// Channels of each user, 0-indexed and ascending.
    pub per_user: Vec<Vec<usize>>,
    pub method: Method,
    /// Every user got `b_n` channels, all from its reported M-best set.
    pub pm_flag: bool,
}

impl Allocation {
    fn new(mut per_user: Vec<Vec<usize>>, method: Method, pm_flag: bool) -> Self {
        per_user.iter_mut().for_each(|s| s.sort_unstable());
        Self { per_user, method, pm_flag }
    }

    /// Checks disjointness, range, and `|A_n| = b_n`.
    pub fn validate(&self, k: usize, b_per_user: &[usize]) -> Result<()> {
        if self.per_user.len() != b_per_user.len() {
            return Err(Error::Dimension(format!("{} users allocated, {} expected", self.per_user.len(), b_per_user.len())));
        }
        let mut taken = vec![false; k];
        for (u, (set, &b)) in self.per_user.iter().zip(b_per_user).enumerate() {
            if set.len() != b {
                return Err(Error::InvalidArgument(format!("user {u} holds {} channels, wants {b}", set.len())));
            }
            for &c in set {
                if c >= k {
                    return Err(Error::ChannelOutOfRange { index: c + 1, k });
                }
                if std::mem::replace(&mut taken[c], true) {
                    return Err(Error::InvalidArgument(format!("channel {} allocated twice", c + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn user_of_channel(&self, k: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; k];
        for (u, set) in self.per_user.iter().enumerate() {
            for &c in set {
                owner[c] = Some(u);
            }
        }
        owner
    }
}

/// Per-user power and receiver noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub p_max: f64,
    pub n0: f64,
    pub b: usize,
    pub target_mean_snr_db: Option<f64>,
}

impl LinkBudget {
    pub fn new(p_max: f64, n0: f64, b: usize) -> Result<Self> {
        if !(p_max > 0.0 && n0 > 0.0) || b == 0 {
            return Err(Error::InvalidArgument("p_max, n0 must be positive and b >= 1".into()));
        }
        Ok(Self { p_max, n0, b, target_mean_snr_db: None })
    }

    /// Unit noise and `p_max` chosen so that `p_max/(b N0) * E[g^2]` equals
    /// the target mean link SNR.
    pub fn calibrated(snr_db: f64, mean_square_gain: f64, b: usize) -> Result<Self> {
        if !(mean_square_gain > 0.0) {
            return Err(Error::InvalidArgument("mean square gain must be positive".into()));
        }
        let p_max = b as f64 * 10f64.powf(snr_db / 10.0) / mean_square_gain;
        let mut budget = Self::new(p_max, 1.0, b)?;
        budget.target_mean_snr_db = Some(snr_db);
        Ok(budget)
    }

    /// `P_max / (b N0)`, the SNR per unit squared gain on each channel.
    pub fn snr_factor(&self) -> f64 {
        self.p_max / (self.b as f64 * self.n0)
    }

    pub fn link_rate(&self, g: f64) -> f64 {
        (1.0 + g * g * self.snr_factor()).log2()
    }
}

/// Equal-power rate of one user over the gains of its allocated channels.
pub fn rate(gains_of_user: &[f64], budget: &LinkBudget) -> f64 {
    gains_of_user.iter().map(|&g| budget.link_rate(g)).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub per_user_rate: Vec<f64>,
    pub sum_rate: f64,
    pub min_rate: f64,
    pub mean_rate: f64,
}

impl RateReport {
    pub fn from_rates(per_user_rate: Vec<f64>) -> Self {
        let sum_rate: f64 = per_user_rate.iter().sum();
        let min_rate = per_user_rate.iter().copied().fold(f64::INFINITY, f64::min);
        let mean_rate = if per_user_rate.is_empty() { 0.0 } else { sum_rate / per_user_rate.len() as f64 };
        Self { per_user_rate, sum_rate, min_rate: if min_rate.is_finite() { min_rate } else { 0.0 }, mean_rate }
    }

    pub fn evaluate(gains: &ChannelGainMatrix, alloc: &Allocation, budget: &LinkBudget) -> Self {
        let rates = alloc
            .per_user
            .iter()
            .enumerate()
            .map(|(u, set)| set.iter().map(|&c| budget.link_rate(gains.get(u, c))).sum())
            .collect();
        Self::from_rates(rates)
    }

    /// Rates read directly from a user-by-channel utility table.
    pub fn from_utility(utility: &[Vec<f64>], alloc: &Allocation) -> Self {
        let rates = alloc.per_user.iter().enumerate().map(|(u, set)| set.iter().map(|&c| utility[u][c]).sum()).collect();
        Self::from_rates(rates)
    }

    /// Scales every rate by `factor` (e.g. channel bandwidth).
    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_rates(self.per_user_rate.iter().map(|r| r * factor).collect())
    }
}

fn check_b(k: usize, b_per_user: &[usize]) -> Result<()> {
    let total: usize = b_per_user.iter().sum();
    if total != k {
        return Err(Error::Dimension(format!("sum(b) = {total} but K = {k}")));
    }
    if b_per_user.iter().any(|&b| b == 0) {
        return Err(Error::InvalidArgument("every user needs b >= 1".into()));
    }
    Ok(())
}

/// Perfect-matching allocation from M-best reports.
///
/// Agents left unmatched by a maximum matching take the free channels in
/// ascending order and the result is flagged as not perfect.
pub fn pm_allocate(gains: &ChannelGainMatrix, m: usize, b_per_user: &[usize]) -> Result<(Allocation, Matching)> {
    let k = gains.k_channels();
    check_b(k, b_per_user)?;
    if gains.n_users() != b_per_user.len() {
        return Err(Error::Dimension(format!("{} gain rows for {} users", gains.n_users(), b_per_user.len())));
    }
    let reports = m_best_reports(gains, m)?;
    let graph = build_graph(&reports, b_per_user)?;
    let matching = maximum_matching(&graph);

    let mut per_user = vec![Vec::new(); b_per_user.len()];
    let mut taken = vec![false; k];
    for (agent, c) in matching.pairs().iter().enumerate() {
        if let Some(c) = *c {
            per_user[graph.agent_user(agent)].push(c);
            taken[c] = true;
        }
    }
    let mut free = (0..k).filter(|&c| !taken[c]);
    for (agent, c) in matching.pairs().iter().enumerate() {
        if c.is_none() {
            let c = free.next().expect("balanced graph has a free channel per unmatched agent");
            per_user[graph.agent_user(agent)].push(c);
        }
    }
    Ok((Allocation::new(per_user, Method::Pm, matching.is_perfect()), matching))
}

/// Max-sum allocation over an `N x K` utility table; user `n` is replicated
/// into `b_n` rows of a square assignment problem.
pub fn optimal_allocate_utility(utility: &[Vec<f64>], b_per_user: &[usize]) -> Result<Allocation> {
    let k = utility.first().map_or(0, Vec::len);
    check_b(k, b_per_user)?;
    if utility.len() != b_per_user.len() || utility.iter().any(|r| r.len() != k) {
        return Err(Error::Dimension("utility table must be N x K".into()));
    }
    let mut data = Vec::with_capacity(k * k);
    let mut row_user = Vec::with_capacity(k);
    for (u, &b) in b_per_user.iter().enumerate() {
        for _ in 0..b {
            data.extend_from_slice(&utility[u]);
            row_user.push(u);
        }
    }
    let w = WeightMatrix::new(k, data)?;
    let a = optimal_assignment(&w, true);
    let mut per_user = vec![Vec::new(); b_per_user.len()];
    for (row, &u) in row_user.iter().enumerate() {
        per_user[u].push(a.column_of(row));
    }
    Ok(Allocation::new(per_user, Method::Hungarian, false))
}

/// Sum-rate optimal allocation with full CSI.
pub fn optimal_allocate(gains: &ChannelGainMatrix, budget: &LinkBudget, b_per_user: &[usize]) -> Result<Allocation> {
    let utility: Vec<Vec<f64>> = gains.rows().map(|row| row.iter().map(|&g| budget.link_rate(g)).collect()).collect();
    optimal_allocate_utility(&utility, b_per_user)
}

/// Uniformly random partition of the channels with sizes `b_per_user`.
pub fn random_allocate(k: usize, b_per_user: &[usize], seed: u64) -> Result<Allocation> {
    check_b(k, b_per_user)?;
    let mut channels: Vec<usize> = (0..k).collect();
    channels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut rest = channels.as_slice();
    let per_user = b_per_user
        .iter()
        .map(|&b| {
            let (mine, tail) = rest.split_at(b);
            rest = tail;
            mine.to_vec()
        })
        .collect();
    Ok(Allocation::new(per_user, Method::Random, false))
}

/// One-bit threshold scheduling with load balancing.
///
/// Channels are visited in ascending order. Among users with spare capacity
/// whose gain exceeds `threshold`, the one holding the fewest channels wins
/// (lower index on ties); if nobody exceeds it, the least-loaded user with
/// spare capacity gets the channel.
pub fn threshold_allocate(gains: &ChannelGainMatrix, threshold: f64, b_per_user: &[usize]) -> Result<Allocation> {
    let k = gains.k_channels();
    check_b(k, b_per_user)?;
    if !(threshold >= 0.0) {
        return Err(Error::InvalidArgument(format!("threshold must be >= 0, got {threshold}")));
    }
    let n = b_per_user.len();
    let mut per_user: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in 0..k {
        let open = |u: &usize| per_user[*u].len() < b_per_user[*u];
        let pick = |above: bool| {
            (0..n)
                .filter(open)
                .filter(|&u| !above || gains.get(u, c) > threshold)
                .min_by_key(|&u| (per_user[u].len(), u))
        };
        let u = pick(true).or_else(|| pick(false)).expect("capacity remains while channels remain");
        per_user[u].push(c);
    }
    Ok(Allocation::new(per_user, Method::Threshold, false))
}

/// Sequential M-best scheduling for one channel per user.
///
/// Users are served in `queue_order`. The ordered variant knows the ranking
/// inside each report and takes the best free channel of the M; the set
/// variant only knows the set and takes its lowest-indexed free member. A user
/// whose whole set is taken gets the lowest-indexed free channel.
pub fn sequential_mbest_allocate(
    gains: &ChannelGainMatrix,
    m: usize,
    b_per_user: &[usize],
    queue_order: &[usize],
    ordered: bool,
) -> Result<Allocation> {
    let k = gains.k_channels();
    if b_per_user.iter().any(|&b| b != 1) {
        return Err(Error::Unsupported("sequential M-best scheduling serves one channel per user".into()));
    }
    check_b(k, b_per_user)?;
    let n = gains.n_users();
    if n != b_per_user.len() {
        return Err(Error::Dimension(format!("{n} gain rows for {} users", b_per_user.len())));
    }
    let mut seen = vec![false; n];
    if queue_order.len() != n || queue_order.iter().any(|&u| u >= n || std::mem::replace(&mut seen[u], true)) {
        return Err(Error::InvalidArgument("queue order must be a permutation of the users".into()));
    }
    let mut taken = vec![false; k];
    let mut per_user = vec![Vec::new(); n];
    let mut all_from_report = true;
    for &u in queue_order {
        let mut report = m_best_ranked(gains.row(u), m)?;
        if !ordered {
            report.sort_unstable();
        }
        let c = match report.into_iter().find(|&c| !taken[c]) {
            Some(c) => c,
            None => {
                all_from_report = false;
                (0..k).find(|&c| !taken[c]).expect("a free channel remains")
            }
        };
        taken[c] = true;
        per_user[u].push(c);
    }
    let method = if ordered { Method::LeinonenOrdered } else { Method::LeinonenSet };
    Ok(Allocation::new(per_user, method, all_from_report))
}

/// Water-filling over one user's channels under a total power budget.
///
/// Returns the per-channel powers and `sum log2(1 + g^2 p / n0)`.
pub fn water_fill(gains_of_user: &[f64], p_total: f64, n0: f64) -> Result<(Vec<f64>, f64)> {
    if !(p_total > 0.0 && n0 > 0.0) {
        return Err(Error::InvalidArgument("total power and noise must be positive".into()));
    }
    if gains_of_user.iter().any(|g| !(*g >= 0.0)) {
        return Err(Error::InvalidArgument("gains must be nonnegative".into()));
    }
    let n = gains_of_user.len();
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    // inverse channel quality n0/g^2; zero-gain channels never get power
    let mut order: Vec<usize> = (0..n).filter(|&i| gains_of_user[i] > 0.0).collect();
    if order.is_empty() {
        return Ok((vec![p_total / n as f64; n], 0.0));
    }
    let floor = |i: usize| n0 / (gains_of_user[i] * gains_of_user[i]);
    order.sort_by(|&a, &b| floor(a).total_cmp(&floor(b)));
    let mut active = order.len();
    let mut level;
    loop {
        let sum: f64 = order[..active].iter().map(|&i| floor(i)).sum();
        level = (p_total + sum) / active as f64;
        if level > floor(order[active - 1]) || active == 1 {
            break;
        }
        active -= 1;
    }
    let mut powers = vec![0.0; n];
    for &i in &order[..active] {
        powers[i] = (level - floor(i)).max(0.0);
    }
    let rate = gains_of_user.iter().zip(&powers).map(|(g, p)| (1.0 + g * g * p / n0).log2()).sum();
    Ok((powers, rate))
}

/// Relative mean-rate gain `(R_wf - R) / R` of per-user water-filling over
/// equal power, for a fixed allocation.
///
/// Each user's total power is the equal-power level times its channel count,
/// i.e. `P_max` whenever the user holds `b` channels.
pub fn water_filling_gain(gains: &ChannelGainMatrix, alloc: &Allocation, budget: &LinkBudget) -> Result<f64> {
    let mut equal = 0.0;
    let mut filled = 0.0;
    for (u, set) in alloc.per_user.iter().enumerate() {
        if set.is_empty() {
            continue;
        }
        let g: Vec<f64> = set.iter().map(|&c| gains.get(u, c)).collect();
        equal += rate(&g, budget);
        let p_total = budget.snr_factor() * budget.n0 * set.len() as f64;
        filled += water_fill(&g, p_total, budget.n0)?.1;
    }
    Ok(if equal > 0.0 { (filled - equal) / equal } else { 0.0 })
}

/// Threshold maximizing mean rate over pilot realizations, on a grid of
/// `points` values spanning `[0, q]` where `q` is the pooled empirical
/// `quantile` of the pilot gains.
pub fn threshold_grid_search(
    pilots: &[ChannelGainMatrix],
    b_per_user: &[usize],
    budget: &LinkBudget,
    points: usize,
    quantile: f64,
) -> Result<f64> {
    if pilots.is_empty() || points < 2 {
        return Err(Error::InvalidArgument("need pilot realizations and at least two grid points".into()));
    }
    let mut pooled: Vec<f64> = pilots.iter().flat_map(|g| g.as_slice().iter().copied()).collect();
    pooled.sort_by(f64::total_cmp);
    let top = pooled[((quantile * pooled.len() as f64) as usize).min(pooled.len() - 1)];
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..points {
        let t = top * i as f64 / (points - 1) as f64;
        let mut total = 0.0;
        for g in pilots {
            let a = threshold_allocate(g, t, b_per_user)?;
            total += RateReport::evaluate(g, &a, budget).mean_rate;
        }
        if total > best.0 {
            best = (total, t);
        }
    }
    Ok(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_gains, FadingSpec};

    fn unit_budget() -> LinkBudget {
        LinkBudget::new(1.0, 1.0, 1).unwrap()
    }

    fn example_one(k: usize, delta: f64) -> Vec<Vec<f64>> {
        (0..k)
            .map(|u| {
                (0..k)
                    .map(|c| match (u, c) {
                        (1, 0) => 1.0,
                        (1, 1) => 2.0,
                        (_, 0) => delta,
                        _ => 1.0,
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rate_examples() {
        let b = unit_budget();
        assert_eq!(rate(&[1.0], &b), 1.0);
        assert_eq!(rate(&[0.0, 0.0], &LinkBudget::new(7.0, 0.3, 2).unwrap()), 0.0);
        assert!((rate(&[1.0, 3f64.sqrt()], &b) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn calibrated_budget_hits_target_snr() {
        let b = LinkBudget::calibrated(20.0, 2.0, 4).unwrap();
        assert!((b.snr_factor() * 2.0 - 100.0).abs() < 1e-9);
    }

    #[test]
    fn example_one_hungarian_vs_pm() {
        let u = example_one(4, 0.1);
        let opt = optimal_allocate_utility(&u, &[1; 4]).unwrap();
        let r = RateReport::from_utility(&u, &opt);
        assert!((r.sum_rate - 4.1).abs() < 1e-12);
        assert!((r.min_rate - 0.1).abs() < 1e-12);

        let gains = ChannelGainMatrix::from_rows(&u).unwrap();
        let (pm, _) = pm_allocate(&gains, 2, &[1; 4]).unwrap();
        pm.validate(4, &[1; 4]).unwrap();
        assert_eq!(pm.per_user[1], vec![0]);
        let r = RateReport::from_utility(&u, &pm);
        assert!((r.sum_rate - 4.0).abs() < 1e-12);
        assert!((r.min_rate - 1.0).abs() < 1e-12);
        assert!(r.per_user_rate.iter().all(|&x| x >= 1.0));
    }

    #[test]
    fn diagonal_gains_give_identity() {
        let rows: Vec<Vec<f64>> = (0..4).map(|u| (0..4).map(|c| if u == c { 5.0 } else { 1.0 }).collect()).collect();
        let g = ChannelGainMatrix::from_rows(&rows).unwrap();
        let (a, m) = pm_allocate(&g, 1, &[1; 4]).unwrap();
        assert!(a.pm_flag && m.is_perfect());
        assert_eq!(a.per_user, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn orphan_channel_falls_back() {
        // both users rank channels 0..2 above channel 3
        let rows = vec![vec![4.0, 3.0, 2.0, 0.1], vec![2.0, 4.0, 3.0, 0.2]];
        let g = ChannelGainMatrix::from_rows(&rows).unwrap();
        let (a, m) = pm_allocate(&g, 2, &[2, 2]).unwrap();
        assert!(!a.pm_flag && !m.is_perfect());
        a.validate(4, &[2, 2]).unwrap();
        assert!(a.per_user.iter().flatten().any(|&c| c == 3));
    }

    #[test]
    fn all_equal_gains() {
        let g = ChannelGainMatrix::from_rows(&vec![vec![1.0; 4]; 2]).unwrap();
        let budget = LinkBudget::new(2.0, 1.0, 2).unwrap();
        let a = optimal_allocate(&g, &budget, &[2, 2]).unwrap();
        a.validate(4, &[2, 2]).unwrap();
        let r = RateReport::evaluate(&g, &a, &budget);
        assert!((r.sum_rate - 4.0).abs() < 1e-12);
    }

    #[test]
    fn random_partition() {
        let a = random_allocate(6, &[6], 1).unwrap();
        assert_eq!(a.per_user, vec![(0..6).collect::<Vec<_>>()]);
        let x = random_allocate(8, &[2; 4], 1).unwrap();
        x.validate(8, &[2; 4]).unwrap();
        let distinct = (0..20).map(|s| random_allocate(8, &[2; 4], s).unwrap().per_user).collect::<std::collections::HashSet<_>>();
        assert!(distinct.len() > 15);
        assert!(random_allocate(5, &[2, 2], 0).is_err());
    }

    #[test]
    fn threshold_cases() {
        let g = sample_gains(&FadingSpec::unit_rayleigh(), 3, 6, 2).unwrap();
        // zero threshold: load-balanced round robin
        let a = threshold_allocate(&g, 0.0, &[2; 3]).unwrap();
        assert_eq!(a.per_user, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        let b = threshold_allocate(&g, 1e9, &[2; 3]).unwrap();
        assert_eq!(b.per_user, a.per_user);
        assert!(threshold_allocate(&g, -1.0, &[2; 3]).is_err());
    }

    #[test]
    fn threshold_hot_user_capped() {
        // user 0 beats the threshold everywhere, user 1 and 2 nowhere
        let rows = vec![vec![9.0, 9.0, 9.0], vec![0.1, 0.1, 0.1], vec![0.1, 0.1, 0.1]];
        let g = ChannelGainMatrix::from_rows(&rows).unwrap();
        let a = threshold_allocate(&g, 1.0, &[1, 1, 1]).unwrap();
        // channel 0 -> user 0; then user 0 is full, fallback to fewest-loaded
        assert_eq!(a.per_user, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn sequential_cases() {
        // users 0 and 1 both prefer channel 4 then 2 (0-indexed)
        let rows = vec![
            vec![0.0, 0.1, 0.8, 0.2, 0.9],
            vec![0.1, 0.0, 0.7, 0.2, 0.9],
            vec![0.9, 0.8, 0.0, 0.1, 0.0],
            vec![0.1, 0.9, 0.0, 0.8, 0.0],
            vec![0.0, 0.2, 0.1, 0.9, 0.8],
        ];
        let g = ChannelGainMatrix::from_rows(&rows).unwrap();
        let order = [0, 1, 2, 3, 4];
        let a = sequential_mbest_allocate(&g, 2, &[1; 5], &order, true).unwrap();
        assert_eq!(a.per_user[0], vec![4]);
        assert_eq!(a.per_user[1], vec![2]);
        a.validate(5, &[1; 5]).unwrap();
        let s = sequential_mbest_allocate(&g, 2, &[1; 5], &order, false).unwrap();
        assert_eq!(s.per_user[0], vec![2]);
        assert_eq!(s.per_user[1], vec![4]);
        assert!(sequential_mbest_allocate(&g, 2, &[1; 5], &[0, 1, 2, 3, 3], true).is_err());
    }

    #[test]
    fn sequential_fallback_and_b_check() {
        let rows = vec![vec![1.0, 0.0, 0.0]; 3];
        let g = ChannelGainMatrix::from_rows(&rows).unwrap();
        let a = sequential_mbest_allocate(&g, 1, &[1; 3], &[0, 1, 2], true).unwrap();
        assert_eq!(a.per_user, vec![vec![0], vec![1], vec![2]]);
        assert!(!a.pm_flag);
        let g4 = ChannelGainMatrix::from_rows(&[vec![1.0; 4], vec![1.0; 4]]).unwrap();
        assert!(matches!(
            sequential_mbest_allocate(&g4, 1, &[2, 2], &[0, 1], true),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn water_fill_cases() {
        let (p, r) = water_fill(&[1.0, 1.0], 2.0, 1.0).unwrap();
        assert_eq!(p, vec![1.0, 1.0]);
        assert!((r - rate(&[1.0, 1.0], &LinkBudget::new(2.0, 1.0, 2).unwrap())).abs() < 1e-12);
        let (p, r) = water_fill(&[1.0, 0.0], 1.0, 1.0).unwrap();
        assert_eq!(p, vec![1.0, 0.0]);
        assert!((r - 1.0).abs() < 1e-12);
        let (p, r) = water_fill(&[0.0, 0.0], 1.0, 1.0).unwrap();
        assert_eq!((p, r), (vec![0.5, 0.5], 0.0));
        assert!(water_fill(&[1.0], 0.0, 1.0).is_err());
    }

    #[test]
    fn water_fill_drops_weak_channel() {
        // floors 1 and 100 with total power 2: level 3 covers only the first
        let (p, _) = water_fill(&[1.0, 0.1], 2.0, 1.0).unwrap();
        assert!((p[0] - 2.0).abs() < 1e-12 && p[1] == 0.0);
    }
}
