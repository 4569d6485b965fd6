//! Closed-form bounds on the probability that no perfect matching exists.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::channel::special::log_sum_exp;
use crate::codec::{select_m, MPolicy};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInput {
    pub k: usize,
    pub b: usize,
    pub epsilon: f64,
    /// Overrides the `ceil((b+1)(1+eps) ln K)` rule.
    pub m: Option<usize>,
}

impl BoundInput {
    pub fn new(k: usize, b: usize, epsilon: f64) -> Result<Self> {
        let inp = Self { k, b, epsilon, m: None };
        inp.validate()?;
        Ok(inp)
    }

    pub fn with_m(mut self, m: usize) -> Result<Self> {
        self.m = Some(m);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b == 0 || self.k < 2 || self.k % self.b != 0 {
            return Err(Error::InvalidArgument(format!("K = {} must be a multiple of b = {} and >= 2", self.k, self.b)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if let Some(m) = self.m {
            if m == 0 || m > self.k {
                return Err(Error::SubsetSize { m, k: self.k });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.k / self.b
    }

    pub fn m(&self) -> usize {
        self.m.unwrap_or_else(|| {
            let policy = MPolicy::ceil(self.b, self.epsilon).expect("validated input");
            select_m(self.k, &policy)
        })
    }
}

/// Two-term asymptotic bound on `Pr(no PM)`.
pub fn theorem1_bound(inp: &BoundInput) -> f64 {
    let (k, b, e) = (inp.k as f64, inp.b as f64, inp.epsilon);
    let first = k.powf(-(e + (e + 1.0) / b));
    let coeff = PI * b.sqrt() * 3f64.exp() / 12.0;
    let second = coeff * k.powf(-(1.5 * e + (1.5 * e + 1.0) / b));
    first + second
}

/// Binary entropy in bits.
pub fn entropy_b(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    let q = p.min(1.0 - p);
    if q == 0.0 {
        0.0
    } else if q < 1e-12 {
        // -(1-q) log2(1-q) = q/ln2 + O(q^2)
        -q * q.log2() + q / LN_2
    } else {
        -q * q.log2() - (1.0 - q) * (1.0 - q).log2()
    }
}

/// `f(x) = K (1 + 1/b) h_b((x+1)/K) ln 2 - M/(K b) (K-x)(x+1)`, for `M <= x <= K-1`.
pub fn lemma4_f(x: f64, k: usize, m: usize, b: usize) -> Result<f64> {
    if b == 0 || !(x >= m as f64 && x <= (k as f64) - 1.0) {
        return Err(Error::InvalidArgument(format!("x = {x} outside [M, K-1] = [{m}, {}]", k as f64 - 1.0)));
    }
    let (kf, mf, bf) = (k as f64, m as f64, b as f64);
    Ok(kf * (1.0 + 1.0 / bf) * entropy_b((x + 1.0) / kf) * LN_2 - mf / (kf * bf) * (kf - x) * (x + 1.0))
}

/// Right-hand side `3 - (1 + 1/b)(1 + 1.5 eps) ln K`.
pub fn lemma4_rhs(k: usize, b: usize, epsilon: f64) -> f64 {
    3.0 - (1.0 + 1.0 / b as f64) * (1.0 + 1.5 * epsilon) * (k as f64).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma4Scan {
    pub k: usize,
    pub m: usize,
    pub argmax: usize,
    pub max_f: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Exhaustive scan of `f` over the integers `M..=K-2`, the range entering
/// the union-bound sum.
pub fn lemma4_scan(inp: &BoundInput) -> Result<Lemma4Scan> {
    inp.validate()?;
    let m = inp.m();
    if m + 2 > inp.k {
        return Err(Error::InvalidArgument(format!("empty scan range: M = {m}, K = {}", inp.k)));
    }
    let mut best = (m, f64::NEG_INFINITY);
    for x in m..=inp.k - 2 {
        let f = lemma4_f(x as f64, inp.k, m, inp.b)?;
        if f > best.1 {
            best = (x, f);
        }
    }
    let rhs = lemma4_rhs(inp.k, inp.b, inp.epsilon);
    Ok(Lemma4Scan { k: inp.k, m, argmax: best.0, max_f: best.1, rhs, holds: best.1 <= rhs })
}

/// Smallest multiple of `b` in `[k_min, k_max]` from which the scan passes for
/// every larger multiple in the range.
pub fn lemma4_threshold_k(b: usize, epsilon: f64, k_min: usize, k_max: usize) -> Result<Option<usize>> {
    let mut first_of_run = None;
    let start = k_min.div_ceil(b).max(1) * b;
    for k in (start..=k_max).step_by(b) {
        let inp = BoundInput::new(k, b, epsilon)?;
        let passes = match lemma4_scan(&inp) {
            Ok(s) => s.holds,
            Err(_) => false,
        };
        match (passes, first_of_run) {
            (true, None) => first_of_run = Some(k),
            (false, _) => first_of_run = None,
            _ => {}
        }
    }
    Ok(first_of_run)
}

/// Log of the `l`-th union-bound term, `M <= l <= K-2`.
pub fn log_union_term(k: usize, m: usize, b: usize, l: usize) -> f64 {
    let (kf, mf, bf, lf) = (k as f64, m as f64, b as f64, l as f64);
    (bf.sqrt() / (2.0 * PI)).ln() - (kf - lf).ln() - (1.0 - (lf + 1.0) / kf).ln()
        + LN_2 * kf * (1.0 + 1.0 / bf) * entropy_b((lf + 1.0) / kf)
        - mf / (kf * bf) * (kf - lf) * (lf + 1.0)
}

/// Natural log of the finite-K union bound.
pub fn log_finite_k_union_bound(inp: &BoundInput) -> Result<f64> {
    inp.validate()?;
    let (k, b, m) = (inp.k, inp.b, inp.m());
    let mut terms = vec![(k as f64).ln() - m as f64 / b as f64];
    if m + 2 <= k {
        terms.extend((m..=k - 2).map(|l| log_union_term(k, m, b, l)));
    }
    Ok(log_sum_exp(&terms))
}

/// `K e^{-M/b} + sum_{l=M}^{K-2}` of the per-cover-size bound, summed in log space.
pub fn finite_k_union_bound(inp: &BoundInput) -> Result<f64> {
    log_finite_k_union_bound(inp).map(f64::exp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageBounds {
    pub upper: f64,
    pub lower: f64,
    /// Lower bound before clipping at zero.
    pub raw_lower: f64,
}

/// Bounds on the probability that some channel is in nobody's M-best set.
pub fn lemma2_bounds(k: usize, b: usize, m: usize) -> Result<CoverageBounds> {
    if b == 0 || k == 0 || k % b != 0 {
        return Err(Error::InvalidArgument(format!("K = {k} must be a positive multiple of b = {b}")));
    }
    if m == 0 || m > k {
        return Err(Error::SubsetSize { m, k });
    }
    let (kf, mf) = (k as f64, m as f64);
    let n = (k / b) as f64;
    let upper = kf * (1.0 - mf / kf).powf(n);
    let pair = if k >= 2 { kf * kf / 2.0 * (1.0 - 2.0 / kf).powf(mf * kf / b as f64) } else { 0.0 };
    let raw_lower = upper - pair;
    Ok(CoverageBounds { upper, lower: raw_lower.max(0.0), raw_lower })
}

/// Exact probability that some channel is uncovered by N independent uniform
/// M-subsets, by inclusion-exclusion; summed in log space per sign.
pub fn exact_uncovered_probability(k: usize, b: usize, m: usize) -> Result<f64> {
    lemma2_bounds(k, b, m)?;
    let n = (k / b) as f64;
    let ln_choose = |a: usize, r: usize| -> f64 {
        statrs::function::factorial::ln_binomial(a as u64, r as u64)
    };
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for j in 1..=k - m {
        let t = ln_choose(k, j) + n * (ln_choose(k - j, m) - ln_choose(k, m));
        if j % 2 == 1 { pos.push(t) } else { neg.push(t) }
    }
    let p = log_sum_exp(&pos).exp() - if neg.is_empty() { 0.0 } else { log_sum_exp(&neg).exp() };
    Ok(p.clamp(0.0, 1.0))
}
