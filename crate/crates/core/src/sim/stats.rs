//! Small summary statistics with order-stable summation.

/// Pairwise summation; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        pairwise_sum(xs) / xs.len() as f64
    }
}

/// Standard error of the mean (sample standard deviation over `sqrt(n)`).
pub fn std_err(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let dev: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    (pairwise_sum(&dev) / (n - 1) as f64).sqrt() / (n as f64).sqrt()
}

/// `sqrt(p (1 - p) / n)`.
pub fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Least-squares slope of `y` on `x` and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trend {
    pub slope: f64,
    pub se: f64,
}

impl Trend {
    /// Slope is not significantly negative at `z` standard errors.
    pub fn nondecreasing(&self, z: f64) -> bool {
        self.slope >= -z * self.se
    }

    pub fn nonincreasing(&self, z: f64) -> bool {
        self.slope <= z * self.se
    }
}

pub fn ols_trend(x: &[f64], y: &[f64]) -> Trend {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let mx = mean(x);
    let my = mean(y);
    let sxx = pairwise_sum(&x.iter().map(|a| (a - mx) * (a - mx)).collect::<Vec<_>>());
    let sxy = pairwise_sum(&x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect::<Vec<_>>());
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let se = if n > 2 {
        let rss = pairwise_sum(&x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).collect::<Vec<_>>());
        (rss / (n - 2) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    Trend { slope, se }
}

/// Empirical CDF points `(value, fraction <= value)`.
pub fn ecdf(xs: &[f64]) -> Vec<(f64, f64)> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.into_iter().enumerate().map(|(i, x)| (x, (i + 1) as f64 / n)).collect()
}
