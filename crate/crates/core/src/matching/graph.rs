use std::fmt::Write as _;

use crate::channel::MBestReport;
use crate::codec::ChannelSubset;
use crate::error::{Error, Result};

/// Balanced bipartite graph between agents and channels.
///
/// User `n` owns `b_n` agents, all adjacent to the channels in that user's
/// report. Agents are numbered user by user: user 0's agents first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserChannelGraph {
    b_per_user: Vec<usize>,
    k_channels: usize,
    // 0-indexed, ascending, one list per user
    user_adjacency: Vec<Vec<usize>>,
    agent_user: Vec<usize>,
}

impl UserChannelGraph {
    /// Builds the graph from 0-indexed adjacency lists, one per user.
    pub fn from_adjacency(b_per_user: Vec<usize>, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        if b_per_user.len() != adjacency.len() {
            return Err(Error::InvalidGraph(format!(
                "{} users in b_per_user, {} adjacency lists",
                b_per_user.len(),
                adjacency.len()
            )));
        }
        if b_per_user.iter().any(|&b| b == 0) {
            return Err(Error::InvalidGraph("every user needs b >= 1".into()));
        }
        let k: usize = b_per_user.iter().sum();
        let mut user_adjacency = Vec::with_capacity(adjacency.len());
        for mut adj in adjacency {
            adj.sort_unstable();
            adj.dedup();
            if let Some(&c) = adj.iter().find(|&&c| c >= k) {
                return Err(Error::ChannelOutOfRange { index: c + 1, k });
            }
            user_adjacency.push(adj);
        }
        let agent_user = b_per_user.iter().enumerate().flat_map(|(u, &b)| std::iter::repeat_n(u, b)).collect();
        Ok(Self { b_per_user, k_channels: k, user_adjacency, agent_user })
    }

    pub fn n_users(&self) -> usize {
        self.b_per_user.len()
    }

    pub fn n_agents(&self) -> usize {
        self.agent_user.len()
    }

    pub fn k_channels(&self) -> usize {
        self.k_channels
    }

    pub fn b_per_user(&self) -> &[usize] {
        &self.b_per_user
    }

    pub fn agent_user(&self, agent: usize) -> usize {
        self.agent_user[agent]
    }

    /// Agents owned by `user`.
    pub fn agents_of(&self, user: usize) -> std::ops::Range<usize> {
        let start: usize = self.b_per_user[..user].iter().sum();
        start..start + self.b_per_user[user]
    }

    /// 0-indexed channels adjacent to `agent`, ascending.
    pub fn neighbors(&self, agent: usize) -> &[usize] {
        &self.user_adjacency[self.agent_user[agent]]
    }

    pub fn user_neighbors(&self, user: usize) -> &[usize] {
        &self.user_adjacency[user]
    }

    pub fn has_edge(&self, agent: usize, channel: usize) -> bool {
        self.neighbors(agent).binary_search(&channel).is_ok()
    }

    /// One `user agent channel` line per edge, 1-indexed.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# users {} agents {} channels {}\n", self.n_users(), self.n_agents(), self.k_channels);
        for agent in 0..self.n_agents() {
            for &c in self.neighbors(agent) {
                let _ = writeln!(out, "{} {} {}", self.agent_user[agent] + 1, agent + 1, c + 1);
            }
        }
        out
    }
}

/// Builds the user-channel graph from M-best reports (users 0-indexed in the reports).
pub fn build_graph(reports: &[MBestReport], b_per_user: &[usize]) -> Result<UserChannelGraph> {
    let n = b_per_user.len();
    let k: usize = b_per_user.iter().sum();
    let mut adjacency: Vec<Option<&ChannelSubset>> = vec![None; n];
    for r in reports {
        let slot = adjacency
            .get_mut(r.user)
            .ok_or_else(|| Error::InvalidGraph(format!("report for unknown user {}", r.user)))?;
        if slot.is_some() {
            return Err(Error::InvalidGraph(format!("duplicate report for user {}", r.user)));
        }
        if r.channels.k() != k {
            return Err(Error::InvalidGraph(format!(
                "report over {} channels but sum(b) = {k}",
                r.channels.k()
            )));
        }
        *slot = Some(&r.channels);
    }
    let lists = adjacency
        .into_iter()
        .enumerate()
        .map(|(u, s)| {
            s.map(|s| s.zero_based().collect())
                .ok_or_else(|| Error::InvalidGraph(format!("no report from user {u}")))
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    UserChannelGraph::from_adjacency(b_per_user.to_vec(), lists)
}
