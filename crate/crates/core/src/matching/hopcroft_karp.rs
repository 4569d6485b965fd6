//! Maximum-cardinality matching by shortest augmenting paths (Hopcroft–Karp).
//!
//! Agents and channels are scanned in ascending order, so the matching for a
//! given graph is the same on every run.

use std::collections::VecDeque;

use super::graph::UserChannelGraph;

const FREE: usize = usize::MAX;

/// Agent-to-channel matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<Option<usize>>,
    cardinality: usize,
    is_perfect: bool,
}

impl Matching {
    /// Wraps an agent-to-channel map over `k` channels.
    pub fn from_pairs(pairs: Vec<Option<usize>>, k_channels: usize) -> Self {
        let cardinality = pairs.iter().flatten().count();
        let is_perfect = cardinality == k_channels && pairs.len() == k_channels;
        Self { pairs, cardinality, is_perfect }
    }

    pub fn pairs(&self) -> &[Option<usize>] {
        &self.pairs
    }

    pub fn channel_of(&self, agent: usize) -> Option<usize> {
        self.pairs[agent]
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn is_perfect(&self) -> bool {
        self.is_perfect
    }

    /// Channel-to-agent view.
    pub fn owners(&self, k_channels: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; k_channels];
        for (a, c) in self.pairs.iter().enumerate() {
            if let Some(c) = c {
                owner[*c] = Some(a);
            }
        }
        owner
    }
}

struct Search<'g> {
    g: &'g UserChannelGraph,
    agent_match: Vec<usize>,
    channel_match: Vec<usize>,
    dist: Vec<usize>,
}

impl Search<'_> {
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for a in 0..self.g.n_agents() {
            if self.agent_match[a] == FREE {
                self.dist[a] = 0;
                queue.push_back(a);
            } else {
                self.dist[a] = FREE;
            }
        }
        let mut found = false;
        while let Some(a) = queue.pop_front() {
            for &c in self.g.neighbors(a) {
                let next = self.channel_match[c];
                if next == FREE {
                    found = true;
                } else if self.dist[next] == FREE {
                    self.dist[next] = self.dist[a] + 1;
                    queue.push_back(next);
                }
            }
        }
        found
    }

    // Iterative layered DFS from a free agent; returns true if it augmented.
    fn augment_from(&mut self, root: usize, cursor: &mut [usize]) -> bool {
        let mut stack = vec![root];
        while let Some(&a) = stack.last() {
            let adj = self.g.neighbors(a);
            let mut advanced = false;
            while cursor[a] < adj.len() {
                let c = adj[cursor[a]];
                let next = self.channel_match[c];
                if next == FREE {
                    // flip the path root .. a -> c
                    let mut chan = c;
                    while let Some(agent) = stack.pop() {
                        let prev = self.agent_match[agent];
                        self.agent_match[agent] = chan;
                        self.channel_match[chan] = agent;
                        chan = prev;
                    }
                    return true;
                }
                if self.dist[next] == self.dist[a] + 1 {
                    stack.push(next);
                    advanced = true;
                    break;
                }
                cursor[a] += 1;
            }
            if !advanced {
                self.dist[a] = FREE;
                stack.pop();
                if let Some(&parent) = stack.last() {
                    cursor[parent] += 1;
                }
            }
        }
        false
    }
}

/// A maximum-cardinality matching of `g`.
pub fn maximum_matching(g: &UserChannelGraph) -> Matching {
    let n = g.n_agents();
    let mut s = Search {
        g,
        agent_match: vec![FREE; n],
        channel_match: vec![FREE; g.k_channels()],
        dist: vec![FREE; n],
    };
    let mut cursor = vec![0usize; n];
    while s.bfs() {
        cursor.iter_mut().for_each(|c| *c = 0);
        for a in 0..n {
            if s.agent_match[a] == FREE {
                s.augment_from(a, &mut cursor);
            }
        }
    }
    let pairs = s.agent_match.iter().map(|&c| (c != FREE).then_some(c)).collect();
    Matching::from_pairs(pairs, g.k_channels())
}

/// A set of agents whose joint neighbourhood is smaller than the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallViolation {
    pub agents: Vec<usize>,
    pub neighborhood: Vec<usize>,
}

impl HallViolation {
    pub fn deficiency(&self) -> usize {
        self.agents.len() - self.neighborhood.len()
    }
}

/// Hall certificate for a graph without a perfect matching.
pub fn hall_violation(g: &UserChannelGraph) -> Option<HallViolation> {
    hall_violation_for(g, &maximum_matching(g))
}

/// Extracts the certificate from a maximum matching: every agent reachable
/// from a free agent along alternating paths, together with the channels
/// reached. All those channels are matched back into the set, so the set is
/// larger than its neighbourhood by the number of free agents.
///
/// Returns `None` when `m` is perfect. `m` must be maximum for `g`.
pub fn hall_violation_for(g: &UserChannelGraph, m: &Matching) -> Option<HallViolation> {
    if m.is_perfect() {
        return None;
    }
    let owner = m.owners(g.k_channels());
    let mut seen_agent = vec![false; g.n_agents()];
    let mut seen_channel = vec![false; g.k_channels()];
    let mut queue: VecDeque<usize> = (0..g.n_agents()).filter(|&a| m.channel_of(a).is_none()).collect();
    for &a in &queue {
        seen_agent[a] = true;
    }
    while let Some(a) = queue.pop_front() {
        for &c in g.neighbors(a) {
            if seen_channel[c] {
                continue;
            }
            seen_channel[c] = true;
            if let Some(next) = owner[c] {
                if !seen_agent[next] {
                    seen_agent[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    let agents: Vec<usize> = (0..g.n_agents()).filter(|&a| seen_agent[a]).collect();
    let neighborhood: Vec<usize> = (0..g.k_channels()).filter(|&c| seen_channel[c]).collect();
    if agents.len() > neighborhood.len() {
        Some(HallViolation { agents, neighborhood })
    } else {
        // only reachable when m was not maximum
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(b: Vec<usize>, adj: Vec<Vec<usize>>) -> UserChannelGraph {
        UserChannelGraph::from_adjacency(b, adj).unwrap()
    }

    #[test]
    fn identity_graph_is_perfect() {
        let g = graph(vec![1; 5], (0..5).map(|i| vec![i]).collect());
        let m = maximum_matching(&g);
        assert!(m.is_perfect());
        assert_eq!(m.cardinality(), 5);
        for a in 0..5 {
            assert_eq!(m.channel_of(a), Some(a));
        }
        assert!(hall_violation(&g).is_none());
    }

    #[test]
    fn uncovered_channel_blocks_pm() {
        // two users, b = 2, M = 2, nobody reports channel 4
        let g = graph(vec![2, 2], vec![vec![0, 1], vec![1, 2]]);
        let m = maximum_matching(&g);
        assert_eq!(m.cardinality(), 3);
        assert!(!m.is_perfect());
        let h = hall_violation(&g).unwrap();
        assert!(!h.neighborhood.contains(&3));
        assert!(h.agents.len() > h.neighborhood.len());
    }

    #[test]
    fn three_users_two_agents_each_has_pm() {
        // each user shares one channel with the next, cyclically
        let g = graph(vec![2, 2, 2], vec![vec![0, 1, 2, 5], vec![1, 2, 3, 4], vec![0, 3, 4, 5]]);
        let m = maximum_matching(&g);
        assert!(m.is_perfect());
        for a in 0..6 {
            assert!(g.has_edge(a, m.channel_of(a).unwrap()));
        }
    }

    #[test]
    fn matching_needs_augmentation() {
        // greedy would give agent 0 channel 0 and strand agent 1
        let g = graph(vec![1, 1], vec![vec![0, 1], vec![0]]);
        let m = maximum_matching(&g);
        assert!(m.is_perfect());
        assert_eq!(m.channel_of(1), Some(0));
        assert_eq!(m.channel_of(0), Some(1));
    }

    #[test]
    fn empty_adjacency() {
        let g = graph(vec![1, 1], vec![vec![], vec![]]);
        let m = maximum_matching(&g);
        assert_eq!(m.cardinality(), 0);
        let h = hall_violation(&g).unwrap();
        assert_eq!(h.agents, vec![0, 1]);
        assert!(h.neighborhood.is_empty());
    }
}
