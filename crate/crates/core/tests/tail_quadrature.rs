use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use statrs::function::gamma::ln_gamma;

use pm_feedback::channel::{log_survival, FadingSpec};

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn nakagami_survival_matches_quadrature() {
    let (m, omega) = (2.5, 1.7);
    let spec = FadingSpec::nakagami(m, omega).unwrap();
    let pdf = |x: f64| {
        (std::f64::consts::LN_2 + m * (m / omega).ln() - ln_gamma(m) + (2.0 * m - 1.0) * x.ln() - m / omega * x * x).exp()
    };
    for x in [0.3, 1.0, 2.0, 3.5] {
        let q = simpson(pdf, x, x + 15.0, 20_000);
        let got = log_survival(&spec, x).unwrap().exp();
        assert!((got / q - 1.0).abs() < 1e-6, "x={x}: {got} vs {q}");
    }
}

#[test]
fn half_normal_survival_matches_quadrature() {
    let s = 1.3;
    let spec = FadingSpec::half_normal(s).unwrap();
    let pdf = |x: f64| (2.0 / std::f64::consts::PI).sqrt() / s * (-x * x / (2.0 * s * s)).exp();
    for x in [0.2, 1.0, 4.0, 8.0] {
        let q = simpson(pdf, x, x + 20.0 * s, 20_000);
        let got = log_survival(&spec, x).unwrap().exp();
        assert!((got / q - 1.0).abs() < 1e-6, "x={x}: {got} vs {q}");
    }
}

#[test]
fn rician_survival_matches_sampling() {
    let (v, sigma) = (1.0, 1.0);
    let spec = FadingSpec::rician(v, sigma).unwrap();
    let normal = Normal::new(0.0, sigma).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let draws = 400_000;
    let samples: Vec<f64> = (0..draws)
        .map(|_| {
            let (a, b) = (v + normal.sample(&mut rng), normal.sample(&mut rng));
            (a * a + b * b).sqrt() - v
        })
        .collect();
    for x in [0.5, 1.5, 2.5] {
        let p = samples.iter().filter(|&&y| y > x).count() as f64 / draws as f64;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        let got = log_survival(&spec, x).unwrap().exp();
        assert!((got - p).abs() < 4.0 * se, "x={x}: {got} vs {p}");
    }
}
