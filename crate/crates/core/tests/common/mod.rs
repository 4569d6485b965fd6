//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use pm_feedback::matching::{UserChannelGraph, WeightMatrix};
use rand::seq::index::sample;
use rand::Rng;

/// Maximum matching size by exhaustive search over channel masks.
pub fn brute_force_matching(g: &UserChannelGraph) -> usize {
    fn go(g: &UserChannelGraph, agent: usize, used: u32, memo: &mut Vec<Vec<Option<usize>>>) -> usize {
        if agent == g.n_agents() {
            return 0;
        }
        if let Some(v) = memo[agent][used as usize] {
            return v;
        }
        let mut best = go(g, agent + 1, used, memo);
        for &c in g.neighbors(agent) {
            if used & (1 << c) == 0 {
                best = best.max(1 + go(g, agent + 1, used | (1 << c), memo));
            }
        }
        memo[agent][used as usize] = Some(best);
        best
    }
    let mut memo = vec![vec![None; 1 << g.k_channels()]; g.n_agents()];
    go(g, 0, 0, &mut memo)
}

/// `agents` really is a Hall-deficient set whose neighbourhood is `nbhd`.
pub fn verify_hall_set(g: &UserChannelGraph, agents: &[usize], nbhd: &[usize]) -> bool {
    let mut union: Vec<usize> = agents.iter().flat_map(|&a| g.neighbors(a).iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    union == nbhd && agents.len() > union.len()
}

/// Exhaustive Hall check: some agent subset has a smaller neighbourhood.
pub fn hall_violated_somewhere(g: &UserChannelGraph) -> bool {
    let a = g.n_agents();
    (1u32..(1 << a)).any(|mask| {
        let mut nb = 0u32;
        for i in 0..a {
            if mask & (1 << i) != 0 {
                for &c in g.neighbors(i) {
                    nb |= 1 << c;
                }
            }
        }
        nb.count_ones() < mask.count_ones()
    })
}

/// Random user-channel graph: `K <= k_max` channels split into users with
/// mixed `b`, each user adjacent to a random subset.
pub fn random_graph<R: Rng>(rng: &mut R, k_max: usize) -> UserChannelGraph {
    let k = rng.random_range(1..=k_max);
    let mut b = Vec::new();
    let mut left = k;
    while left > 0 {
        let take = rng.random_range(1..=left.min(3));
        b.push(take);
        left -= take;
    }
    let adj = b
        .iter()
        .map(|_| {
            let size = rng.random_range(0..=k);
            sample(rng, k, size).into_vec()
        })
        .collect();
    UserChannelGraph::from_adjacency(b, adj).unwrap()
}

/// Best total over all permutations (Heap's algorithm).
pub fn brute_force_assignment(w: &WeightMatrix, maximize: bool) -> f64 {
    let n = w.size();
    let mut perm: Vec<usize> = (0..n).collect();
    let score = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| w.get(i, j)).sum::<f64>();
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let mut best = score(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let s = score(&perm);
            if better(s, best) {
                best = s;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Example 1 utilities: user 2 (index 1) is indifferent between channels
/// 1 and 2 but everyone else values channel 1 at only `delta`.
pub fn example_one(k: usize, delta: f64) -> Vec<Vec<f64>> {
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

/// Fraction of trials in which some channel is in no user's M-subset,
/// with every user's subset uniform (the M-best set of i.i.d. gains).
pub fn uncovered_fraction<R: Rng>(rng: &mut R, k: usize, n: usize, m: usize, trials: usize) -> f64 {
    let mut hits = 0;
    let mut seen = vec![0u32; k];
    for t in 1..=trials as u32 {
        let mut covered = 0;
        for _ in 0..n {
            for c in sample(rng, k, m) {
                if seen[c] != t {
                    seen[c] = t;
                    covered += 1;
                }
            }
        }
        if covered < k {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}
