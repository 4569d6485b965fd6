use std::cmp::Ordering;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::codec::ChannelSubset;
use crate::error::{Error, Result};

/// How subcarrier responses inside one resource block collapse to a block gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockAggregation {
    /// `sqrt(mean |H|^2)` over the block's subcarriers (energy preserving).
    #[default]
    Rms,
    /// `|H|` at the centre subcarrier.
    Center,
}

/// Tapped-delay-line profile for frequency-correlated resource blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdlProfile {
    pub delays_ns: Vec<f64>,
    pub powers_db: Vec<f64>,
    #[serde(default = "default_subcarriers_per_block")]
    pub subcarriers_per_block: usize,
    #[serde(default = "default_spacing_hz")]
    pub subcarrier_spacing_hz: f64,
    #[serde(default)]
    pub aggregation: BlockAggregation,
}

fn default_subcarriers_per_block() -> usize {
    12
}

fn default_spacing_hz() -> f64 {
    15_000.0
}

impl TdlProfile {
    /// LTE Extended Pedestrian A: 7 taps, 410 ns maximum excess delay.
    pub fn epa() -> Self {
        Self {
            delays_ns: vec![0.0, 30.0, 70.0, 90.0, 110.0, 190.0, 410.0],
            powers_db: vec![0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8],
            subcarriers_per_block: 12,
            subcarrier_spacing_hz: 15_000.0,
            aggregation: BlockAggregation::Rms,
        }
    }

    /// Linear tap powers scaled to unit sum.
    pub fn normalized_powers(&self) -> Vec<f64> {
        let lin: Vec<f64> = self.powers_db.iter().map(|p| 10f64.powf(p / 10.0)).collect();
        let total: f64 = lin.iter().sum();
        lin.into_iter().map(|p| p / total).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.delays_ns.is_empty() || self.delays_ns.len() != self.powers_db.len() {
            return Err(Error::InvalidFading("tap delays and powers must be nonempty and equal length".into()));
        }
        if self.delays_ns.iter().chain(&self.powers_db).any(|v| !v.is_finite()) {
            return Err(Error::InvalidFading("non-finite tap parameter".into()));
        }
        if self.subcarriers_per_block == 0 || !(self.subcarrier_spacing_hz > 0.0) {
            return Err(Error::InvalidFading("block needs at least one subcarrier and positive spacing".into()));
        }
        Ok(())
    }
}

/// Marginal law of a single channel gain `g` (an amplitude, not a power).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FadingKind {
    Rayleigh { sigma: f64 },
    Nakagami { m: f64, omega: f64 },
    Rician { v: f64, sigma: f64 },
    HalfNormal { sigma: f64 },
    CorrelatedTdl(TdlProfile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingSpec {
    #[serde(flatten)]
    pub kind: FadingKind,
    /// Per-user amplitude multipliers; makes users non-identically distributed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub user_scales: Option<Vec<f64>>,
}

impl FadingSpec {
    pub fn new(kind: FadingKind) -> Result<Self> {
        let spec = Self { kind, user_scales: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn rayleigh(sigma: f64) -> Result<Self> {
        Self::new(FadingKind::Rayleigh { sigma })
    }

    /// Rayleigh amplitudes whose powers `g^2` are `Exp(1)`.
    pub fn unit_rayleigh() -> Self {
        Self { kind: FadingKind::Rayleigh { sigma: std::f64::consts::FRAC_1_SQRT_2 }, user_scales: None }
    }

    pub fn nakagami(m: f64, omega: f64) -> Result<Self> {
        Self::new(FadingKind::Nakagami { m, omega })
    }

    pub fn rician(v: f64, sigma: f64) -> Result<Self> {
        Self::new(FadingKind::Rician { v, sigma })
    }

    pub fn half_normal(sigma: f64) -> Result<Self> {
        Self::new(FadingKind::HalfNormal { sigma })
    }

    pub fn epa() -> Self {
        Self { kind: FadingKind::CorrelatedTdl(TdlProfile::epa()), user_scales: None }
    }

    pub fn with_user_scales(mut self, scales: Vec<f64>) -> Result<Self> {
        self.user_scales = Some(scales);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidFading(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match &self.kind {
            FadingKind::Rayleigh { sigma } | FadingKind::HalfNormal { sigma } => pos("sigma", *sigma)?,
            FadingKind::Nakagami { m, omega } => {
                pos("omega", *omega)?;
                if !(*m >= 0.5) || !m.is_finite() {
                    return Err(Error::InvalidFading(format!("Nakagami m must be >= 0.5, got {m}")));
                }
            }
            FadingKind::Rician { v, sigma } => {
                pos("sigma", *sigma)?;
                if !(*v >= 0.0) || !v.is_finite() {
                    return Err(Error::InvalidFading(format!("Rician v must be >= 0, got {v}")));
                }
            }
            FadingKind::CorrelatedTdl(p) => p.validate()?,
        }
        if let Some(s) = &self.user_scales {
            for &c in s {
                pos("user scale", c)?;
            }
        }
        Ok(())
    }

    /// `E[g^2]` of the unscaled law.
    pub fn mean_square_gain(&self) -> f64 {
        match &self.kind {
            FadingKind::Rayleigh { sigma } => 2.0 * sigma * sigma,
            FadingKind::Nakagami { omega, .. } => *omega,
            FadingKind::Rician { v, sigma } => v * v + 2.0 * sigma * sigma,
            FadingKind::HalfNormal { sigma } => sigma * sigma,
            FadingKind::CorrelatedTdl(_) => 1.0,
        }
    }

    pub fn is_correlated(&self) -> bool {
        matches!(self.kind, FadingKind::CorrelatedTdl(_))
    }
}

/// Row-major `N x K` matrix of nonnegative channel gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelGainMatrix {
    n_users: usize,
    k_channels: usize,
    gains: Vec<f64>,
}

impl ChannelGainMatrix {
    pub fn new(n_users: usize, k_channels: usize, gains: Vec<f64>) -> Result<Self> {
        if gains.len() != n_users * k_channels {
            return Err(Error::Dimension(format!(
                "{} gains for a {n_users}x{k_channels} matrix",
                gains.len()
            )));
        }
        if let Some(g) = gains.iter().find(|g| !(**g >= 0.0) || !g.is_finite()) {
            return Err(Error::InvalidArgument(format!("gain {g} is not a finite nonnegative value")));
        }
        Ok(Self { n_users, k_channels, gains })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(rows.len(), k, rows.concat())
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn k_channels(&self) -> usize {
        self.k_channels
    }

    pub fn row(&self, user: usize) -> &[f64] {
        &self.gains[user * self.k_channels..(user + 1) * self.k_channels]
    }

    pub fn get(&self, user: usize, channel: usize) -> f64 {
        self.gains[user * self.k_channels + channel]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.gains.chunks(self.k_channels.max(1)).take(self.n_users)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gains
    }
}

/// Draws an `n x k` gain matrix. Deterministic in `seed`.
pub fn sample_gains(spec: &FadingSpec, n: usize, k: usize, seed: u64) -> Result<ChannelGainMatrix> {
    spec.validate()?;
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("need at least one user and one channel".into()));
    }
    if let Some(s) = &spec.user_scales {
        if s.len() != n {
            return Err(Error::Dimension(format!("{} user scales for {n} users", s.len())));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gains = Vec::with_capacity(n * k);
    match &spec.kind {
        FadingKind::Rayleigh { sigma } => {
            for _ in 0..n * k {
                let x: f64 = StandardNormal.sample(&mut rng);
                let y: f64 = StandardNormal.sample(&mut rng);
                gains.push(sigma * x.hypot(y));
            }
        }
        FadingKind::Nakagami { m, omega } => {
            // g^2 ~ Gamma(shape m, scale omega/m)
            let power = Gamma::new(*m, omega / m).map_err(|e| Error::InvalidFading(e.to_string()))?;
            for _ in 0..n * k {
                let p: f64 = power.sample(&mut rng);
                gains.push(p.sqrt());
            }
        }
        FadingKind::Rician { v, sigma } => {
            for _ in 0..n * k {
                let x: f64 = StandardNormal.sample(&mut rng);
                let y: f64 = StandardNormal.sample(&mut rng);
                gains.push((v + sigma * x).hypot(sigma * y));
            }
        }
        FadingKind::HalfNormal { sigma } => {
            for _ in 0..n * k {
                let x: f64 = StandardNormal.sample(&mut rng);
                gains.push(sigma * x.abs());
            }
        }
        FadingKind::CorrelatedTdl(profile) => sample_tdl(profile, n, k, &mut rng, &mut gains),
    }
    if let Some(scales) = &spec.user_scales {
        for (row, s) in gains.chunks_mut(k).zip(scales) {
            row.iter_mut().for_each(|g| *g *= s);
        }
    }
    ChannelGainMatrix::new(n, k, gains)
}

fn sample_tdl(profile: &TdlProfile, n: usize, k: usize, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) {
    let powers = profile.normalized_powers();
    let spb = profile.subcarriers_per_block;
    let taps = powers.len();
    let subcarriers: Vec<usize> = match profile.aggregation {
        BlockAggregation::Rms => (0..k * spb).collect(),
        BlockAggregation::Center => (0..k).map(|b| b * spb + spb / 2).collect(),
    };
    // phase rotation of each tap at each used subcarrier, shared by all users
    let mut rot = Vec::with_capacity(subcarriers.len() * taps);
    for &s in &subcarriers {
        let f = s as f64 * profile.subcarrier_spacing_hz;
        for &d in &profile.delays_ns {
            let phi = -2.0 * PI * f * d * 1e-9;
            rot.push((phi.cos(), phi.sin()));
        }
    }
    let per_block = subcarriers.len() / k;
    let mut h = vec![(0.0, 0.0); taps];
    for _ in 0..n {
        for (tap, p) in h.iter_mut().zip(&powers) {
            let a = (p / 2.0).sqrt();
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *tap = (a * re, a * im);
        }
        for block in 0..k {
            let mut energy = 0.0;
            for s in block * per_block..(block + 1) * per_block {
                let (mut re, mut im) = (0.0, 0.0);
                for (t, &(hr, hi)) in h.iter().enumerate() {
                    let (c, sn) = rot[s * taps + t];
                    re += hr * c - hi * sn;
                    im += hr * sn + hi * c;
                }
                energy += re * re + im * im;
            }
            out.push((energy / per_block as f64).sqrt());
        }
    }
}

// Descending by gain, ties toward the lower channel index.
fn rank_cmp(row: &[f64], a: usize, b: usize) -> Ordering {
    row[b].total_cmp(&row[a]).then(a.cmp(&b))
}

/// The `m` best channels of `row` as 0-indexed positions, best first.
pub fn m_best_ranked(row: &[f64], m: usize) -> Result<Vec<usize>> {
    if m == 0 || m > row.len() {
        return Err(Error::SubsetSize { m, k: row.len() });
    }
    let mut idx: Vec<usize> = (0..row.len()).collect();
    if m < row.len() {
        idx.select_nth_unstable_by(m - 1, |&a, &b| rank_cmp(row, a, b));
        idx.truncate(m);
    }
    idx.sort_unstable_by(|&a, &b| rank_cmp(row, a, b));
    Ok(idx)
}

/// Indices of the `m` largest gains, ties broken toward the lower index.
pub fn m_best(row: &[f64], m: usize) -> Result<ChannelSubset> {
    ChannelSubset::from_zero_based(row.len(), m_best_ranked(row, m)?)
}

/// The `i`-th smallest entry of `row`, 1-indexed.
pub fn order_statistic(row: &[f64], i: usize) -> Result<f64> {
    if i == 0 || i > row.len() {
        return Err(Error::InvalidArgument(format!("order statistic {i} of {} values", row.len())));
    }
    let mut v = row.to_vec();
    let (_, x, _) = v.select_nth_unstable_by(i - 1, f64::total_cmp);
    Ok(*x)
}

/// One user's feedback: the set of its `M` best channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MBestReport {
    pub user: usize,
    pub channels: ChannelSubset,
}

impl MBestReport {
    pub fn from_row(user: usize, row: &[f64], m: usize) -> Result<Self> {
        Ok(Self { user, channels: m_best(row, m)? })
    }
}

/// Reports for every user of `gains`.
pub fn m_best_reports(gains: &ChannelGainMatrix, m: usize) -> Result<Vec<MBestReport>> {
    gains.rows().enumerate().map(|(u, row)| MBestReport::from_row(u, row, m)).collect()
}
