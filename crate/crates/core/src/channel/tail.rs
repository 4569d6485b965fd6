//! Exponentially-dominated tails.
//!
//! A gain law has an exponentially-dominated tail when its survival function
//! behaves like `alpha * x^beta * exp(-lambda * x^gamma)` as `x` grows. Every
//! quantity here is evaluated in log space so the ratio stays meaningful long
//! after `1 - F(x)` has underflowed an `f64`.

use statrs::function::gamma::ln_gamma;

use super::fading::{FadingKind, FadingSpec};
use super::special::{ln_bessel_i0, ln_erfc, ln_gamma_q};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub gamma: f64,
}

impl TailParams {
    pub fn new(alpha: f64, beta: f64, lambda: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && lambda > 0.0 && gamma > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tail params need alpha, lambda, gamma > 0 (got {alpha}, {lambda}, {gamma})"
            )));
        }
        Ok(Self { alpha, beta, lambda, gamma })
    }

    /// Envelope parameters for which the tail ratio tends to one.
    ///
    /// Rician uses the variable shifted down by its line-of-sight amplitude
    /// `v` (see [`log_survival`]); half-normal is twice the normal tail.
    pub fn canonical(spec: &FadingSpec) -> Result<Self> {
        use std::f64::consts::PI;
        match &spec.kind {
            FadingKind::Rayleigh { sigma } => Self::new(1.0, 0.0, 1.0 / (2.0 * sigma * sigma), 2.0),
            FadingKind::Nakagami { m, omega } => {
                let ln_alpha = (m - 1.0) * m.ln() - ln_gamma(*m) - (m - 1.0) * omega.ln();
                Self::new(ln_alpha.exp(), 2.0 * m - 2.0, m / omega, 2.0)
            }
            FadingKind::Rician { v, sigma } => {
                if *v <= 0.0 {
                    return Err(Error::Tail("Rician tail params need v > 0 (v = 0 is Rayleigh)".into()));
                }
                Self::new(sigma * (1.0 / (2.0 * PI * v)).sqrt(), -0.5, 1.0 / (2.0 * sigma * sigma), 2.0)
            }
            FadingKind::HalfNormal { sigma } => {
                Self::new(sigma * (2.0 / PI).sqrt(), -1.0, 1.0 / (2.0 * sigma * sigma), 2.0)
            }
            FadingKind::CorrelatedTdl(_) => Err(Error::Tail("no closed-form marginal for TDL blocks".into())),
        }
    }

    /// `ln(alpha * x^beta * exp(-lambda * x^gamma))`.
    pub fn log_envelope(&self, x: f64) -> f64 {
        self.alpha.ln() + self.beta * x.ln() - self.lambda * pow(x, self.gamma)
    }
}

// integral exponents go through powi so the Rayleigh ratio is bit-exact
fn pow(x: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() < 64.0 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

/// `ln(1 - F(x))` for the marginal of `spec`.
///
/// For Rician this is the survival of `Y - v`, i.e. `P(Y > x + v)` for a Rice
/// variable `Y` with parameters `(v, sigma)`.
pub fn log_survival(spec: &FadingSpec, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("tail evaluated at x = {x}")));
    }
    match &spec.kind {
        FadingKind::Rayleigh { sigma } => Ok(-(1.0 / (2.0 * sigma * sigma)) * x.powi(2)),
        FadingKind::Nakagami { m, omega } => Ok(ln_gamma_q(*m, m / omega * x * x)),
        FadingKind::Rician { v, sigma } => Ok(rice_log_survival(*v, *sigma, x + v)),
        FadingKind::HalfNormal { sigma } => Ok(ln_erfc(x / (sigma * std::f64::consts::SQRT_2))),
        FadingKind::CorrelatedTdl(_) => Err(Error::Tail("no closed-form marginal for TDL blocks".into())),
    }
}

fn rice_log_pdf(v: f64, sigma: f64, t: f64) -> f64 {
    let s2 = sigma * sigma;
    t.ln() - s2.ln() - (t * t + v * v) / (2.0 * s2) + ln_bessel_i0(t * v / s2)
}

/// `ln P(Y > y)` for a Rice variable by Simpson quadrature of the density,
/// normalized by the density at `y`.
pub fn rice_log_survival(v: f64, sigma: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let panels = 40_000;
    let width = 40.0 * sigma;
    let h = width / panels as f64;
    let anchor = rice_log_pdf(v, sigma, y);
    let f = |t: f64| (rice_log_pdf(v, sigma, t) - anchor).exp();
    let mut acc = f(y) + f(y + width);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(y + i as f64 * h);
    }
    anchor + (acc * h / 3.0).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailRatio {
    pub ratio: f64,
    pub log_survival: f64,
    pub log_envelope: f64,
    /// `1 - F(x)` is below the smallest positive `f64`; direct evaluation would
    /// have returned zero.
    pub underflow: bool,
}

/// `(1 - F(x)) / (alpha x^beta e^{-lambda x^gamma})`.
pub fn tail_ratio(spec: &FadingSpec, params: &TailParams, x: f64) -> Result<TailRatio> {
    let ls = log_survival(spec, x)?;
    let le = params.log_envelope(x);
    let ratio = (ls - le).exp();
    if !ratio.is_finite() {
        return Err(Error::Tail(format!("ratio not representable at x = {x} (log ratio {})", ls - le)));
    }
    Ok(TailRatio { ratio, log_survival: ls, log_envelope: le, underflow: ls < f64::MIN_POSITIVE.ln() })
}

/// Largest `x` at which `1 - F(x)` is still a normal `f64`.
pub fn largest_representable_tail_x(spec: &FadingSpec) -> Result<f64> {
    let floor = f64::MIN_POSITIVE.ln();
    let mut hi = 1.0;
    while log_survival(spec, hi)? > floor {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Tail("survival does not decay".into()));
        }
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if log_survival(spec, mid)? > floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
