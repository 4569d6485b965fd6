//! M-best subset feedback codec.
//!
//! A user reports the set of its `M` strongest channels out of `K`. The set is
//! ranked in the combinatorial number system, so the report costs exactly
//! `log2 C(K, M)` bits:
//!
//! ```text
//! E(S) = sum_i C(s_i - 1, i)      s_1 < s_2 < ... < s_M, 1-indexed
//! ```
//!
//! Subsets are 1-indexed at this API boundary. Everything downstream of the
//! codec (gain rows, graphs) is 0-indexed.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A subset of `{1, ..., k}` held as strictly increasing members.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChannelSubset {
    k: usize,
    members: Vec<usize>,
}

impl ChannelSubset {
    /// Builds a subset from 1-indexed members, which must be strictly increasing.
    pub fn new(k: usize, members: Vec<usize>) -> Result<Self> {
        for (i, &c) in members.iter().enumerate() {
            if c == 0 || c > k {
                return Err(Error::ChannelOutOfRange { index: c, k });
            }
            if i > 0 && members[i - 1] >= c {
                return Err(Error::UnsortedSubset);
            }
        }
        Ok(Self { k, members })
    }

    /// Builds a subset from 0-indexed channel positions in any order.
    pub fn from_zero_based<I: IntoIterator<Item = usize>>(k: usize, idx: I) -> Result<Self> {
        let mut members: Vec<usize> = idx.into_iter().map(|i| i + 1).collect();
        members.sort_unstable();
        Self::new(k, members)
    }

    pub fn empty(k: usize) -> Self {
        Self { k, members: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// 1-indexed members, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// 0-indexed members, ascending.
    pub fn zero_based(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&c| c - 1)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership test on a 1-indexed channel.
    pub fn contains(&self, channel: usize) -> bool {
        self.members.binary_search(&channel).is_ok()
    }
}

impl fmt::Display for ChannelSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Rank of a size-`m` subset of `{1..k}`, always `< C(k, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeedbackIndex {
    value: BigUint,
    k: usize,
    m: usize,
}

impl FeedbackIndex {
    pub fn new(value: BigUint, k: usize, m: usize) -> Result<Self> {
        if m > k {
            return Err(Error::SubsetSize { m, k });
        }
        if value >= binomial(k, m) {
            return Err(Error::IndexOutOfRange { value: value.to_string(), k, m });
        }
        Ok(Self { value, k, m })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// Exact binomial coefficient by the multiplicative formula.
pub fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Pascal table of `C(n, r)` for `n <= k_max`, `r <= r_max`. Immutable once built.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    k_max: usize,
    r_max: usize,
    rows: Vec<Vec<BigUint>>,
}

impl BinomialTable {
    pub fn new(k_max: usize, r_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(k_max + 1);
        for n in 0..=k_max {
            let width = n.min(r_max) + 1;
            let mut row = Vec::with_capacity(width);
            for r in 0..width {
                let v = if r == 0 || r == n {
                    BigUint::one()
                } else {
                    let prev = &rows[n - 1];
                    let left = &prev[r - 1];
                    match prev.get(r) {
                        Some(right) => left + right,
                        None => left.clone(),
                    }
                };
                row.push(v);
            }
            rows.push(row);
        }
        Self { k_max, r_max, rows }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    /// `C(n, r)`; zero when `r > n`. Panics if `(n, r)` lies outside the table.
    pub fn get(&self, n: usize, r: usize) -> BigUint {
        if r > n {
            return BigUint::zero();
        }
        assert!(n <= self.k_max && r <= self.r_max, "C({n}, {r}) outside table");
        self.rows[n][r].clone()
    }

    fn get_ref(&self, n: usize, r: usize) -> Option<&BigUint> {
        if r > n {
            None
        } else {
            Some(&self.rows[n][r])
        }
    }
}

/// Encoder/decoder for size-`m` subsets of `{1..k}` backed by a shared table.
#[derive(Debug, Clone)]
pub struct SubsetCodec {
    k: usize,
    m: usize,
    table: BinomialTable,
}

impl SubsetCodec {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if m > k {
            return Err(Error::SubsetSize { m, k });
        }
        Ok(Self { k, m, table: BinomialTable::new(k, m) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of distinct reports, `C(k, m)`.
    pub fn cardinality(&self) -> BigUint {
        self.table.get(self.k, self.m)
    }

    pub fn encode(&self, s: &ChannelSubset) -> Result<FeedbackIndex> {
        if s.k() != self.k {
            return Err(Error::Dimension(format!("subset over {} channels, codec over {}", s.k(), self.k)));
        }
        if s.len() != self.m {
            return Err(Error::SubsetSize { m: s.len(), k: self.k });
        }
        let value = rank(&self.table, s.members());
        Ok(FeedbackIndex { value, k: self.k, m: self.m })
    }

    pub fn decode(&self, e: &FeedbackIndex) -> Result<ChannelSubset> {
        if e.k != self.k || e.m != self.m {
            return Err(Error::Dimension(format!(
                "index for C({}, {}), codec for C({}, {})",
                e.k, e.m, self.k, self.m
            )));
        }
        unrank(&self.table, &e.value, self.k, self.m)
    }
}

// Iterative form of the recursion: peeling the largest member K contributes
// C(K-1, |S|) and leaves S \ {K} over K-1 channels.
fn rank(table: &BinomialTable, members: &[usize]) -> BigUint {
    let mut acc = BigUint::zero();
    for (i, &c) in members.iter().enumerate() {
        if let Some(v) = table.get_ref(c - 1, i + 1) {
            acc += v;
        }
    }
    acc
}

fn unrank(table: &BinomialTable, value: &BigUint, k: usize, m: usize) -> Result<ChannelSubset> {
    if *value >= table.get(k, m) {
        return Err(Error::IndexOutOfRange { value: value.to_string(), k, m });
    }
    let mut rest = value.clone();
    let mut remaining = m;
    let mut members = Vec::with_capacity(m);
    let mut top = k;
    while remaining > 0 {
        // top >= remaining always holds since rest < C(top, remaining)
        let below = table.get_ref(top - 1, remaining);
        match below {
            Some(c) if rest < *c => {}
            Some(c) => {
                rest -= c;
                members.push(top);
                remaining -= 1;
            }
            None => {
                members.push(top);
                remaining -= 1;
            }
        }
        top -= 1;
    }
    members.reverse();
    ChannelSubset::new(k, members)
}

/// Ranks `s` among all `|s|`-subsets of `{1..k}`.
pub fn encode_subset(s: &ChannelSubset) -> FeedbackIndex {
    let table = BinomialTable::new(s.k(), s.len());
    FeedbackIndex { value: rank(&table, s.members()), k: s.k(), m: s.len() }
}

/// Inverse of [`encode_subset`].
pub fn decode_subset(e: &FeedbackIndex) -> Result<ChannelSubset> {
    let table = BinomialTable::new(e.k, e.m);
    unrank(&table, &e.value, e.k, e.m)
}

/// `log2 C(k, m)` from the exact integer.
pub fn feedback_bits(k: usize, m: usize) -> Result<f64> {
    if m > k {
        return Err(Error::SubsetSize { m, k });
    }
    Ok(log2_biguint(&binomial(k, m)))
}

/// Feedback bits per user per channel, `log2 C(k, m) / k`.
pub fn feedback_bits_per_channel(k: usize, m: usize) -> Result<f64> {
    Ok(feedback_bits(k, m)? / k as f64)
}

fn log2_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().map_or(0.0, |x| (x as f64).log2());
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("64 significant bits");
    (top as f64).log2() + shift as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    Ceil,
    Floor,
}

impl Rounding {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Rounding::Ceil => x.ceil(),
            Rounding::Floor => x.floor(),
        }
    }
}

/// How many best channels each user reports: `round((b+1)(1+eps) ln K)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MPolicy {
    pub b: usize,
    pub epsilon: f64,
    pub rounding: Rounding,
}

impl MPolicy {
    pub fn new(b: usize, epsilon: f64, rounding: Rounding) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidArgument("b must be at least 1".into()));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Self { b, epsilon, rounding })
    }

    /// Default ceil rounding.
    pub fn ceil(b: usize, epsilon: f64) -> Result<Self> {
        Self::new(b, epsilon, Rounding::Ceil)
    }

    pub fn coefficient(&self) -> f64 {
        (self.b as f64 + 1.0) * (1.0 + self.epsilon)
    }
}

pub fn select_m(k: usize, policy: &MPolicy) -> usize {
    select_m_ln(k, policy.coefficient(), policy.rounding)
}

/// `round(coefficient * ln k)` clamped to `[1, k]`.
pub fn select_m_ln(k: usize, coefficient: f64, rounding: Rounding) -> usize {
    let raw = rounding.apply(coefficient * (k as f64).ln());
    (raw.max(1.0) as usize).clamp(1, k.max(1))
}
