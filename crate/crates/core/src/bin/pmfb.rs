use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;

use pm_feedback::bounds::{finite_k_union_bound, lemma2_bounds, theorem1_bound, BoundInput};
use pm_feedback::codec::{decode_subset, encode_subset, feedback_bits, ChannelSubset, FeedbackIndex};
use pm_feedback::sim::{
    class_rates, evaluate_checks, plot, rate_figures, run_experiment, summarize, table2, wf_gain_sweep, write_csv,
    write_rows, ExperimentConfig, Figure, RateUnits, TABLE2_N, WF_B,
};
use pm_feedback::Result;

#[derive(Parser)]
#[command(name = "pmfb", version, about = "Limited-feedback perfect-matching channel allocation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a TOML-configured experiment and write per-trial CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Evaluate statistical gates; exit nonzero if any fails.
        #[arg(long)]
        check: bool,
        /// Also write an SVG chart of mean and minimum rates.
        #[arg(long)]
        plot: bool,
        /// CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical probability that no PM exists, both M rules, with the bound.
    Table2 {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean and minimum rates per method and N for a figure setup.
    Rates {
        /// uncorrelated | b1 | correlated | correlated-b1 | classes | classes-correlated
        #[arg(long, default_value = "uncorrelated")]
        figure: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        plot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Water-filling relative mean-rate gain against b.
    Wfgain {
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 10.0)]
        snr: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form bounds for (K, b, epsilon) or an explicit M.
    Bound {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Feedback index of a channel subset (1-indexed, comma separated, any order).
    Encode {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        channels: Vec<usize>,
    },
    /// Channel subset of a feedback index.
    Decode {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        index: String,
    },
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn svg_path(out: &Option<PathBuf>, fallback: &str) -> PathBuf {
    out.as_ref().map_or_else(|| PathBuf::from(fallback), |p| p.with_extension("svg"))
}

fn write_svg(path: &Path, svg: &str) -> Result<()> {
    fs::write(path, svg)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct BoundRow {
    k: usize,
    b: usize,
    epsilon: f64,
    m: usize,
    theorem1: f64,
    finite_k_union: f64,
    lemma2_upper: f64,
    lemma2_lower: f64,
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Simulate { config, check, plot: want_plot, out } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let records = run_experiment(&cfg)?;
            write_csv(&records, sink(&out)?)?;
            if want_plot {
                let units = units_label(cfg.units);
                let title = cfg.name.clone().unwrap_or_else(|| "rates".into());
                let default = config.with_extension("svg");
                let path = out.as_ref().map_or(default, |p| p.with_extension("svg"));
                write_svg(&path, &plot::rates_chart(&title, &summarize(&records), units))?;
            }
            if check {
                let gates = evaluate_checks(&cfg, &records);
                for g in &gates {
                    eprintln!("{g}");
                }
                return Ok(gates.iter().all(|g| g.passed));
            }
        }
        Cmd::Table2 { trials, seed, out } => {
            write_rows(&table2(&TABLE2_N, trials, seed)?, sink(&out)?)?;
        }
        Cmd::Rates { figure, trials, seed, plot: want_plot, out } => {
            let fig: Figure = figure.parse()?;
            let (cfg, records, summary) = rate_figures(fig, trials, seed)?;
            write_rows(&summary, sink(&out)?)?;
            if want_plot {
                let units = units_label(cfg.units);
                write_svg(&svg_path(&out, &format!("{}.svg", fig.name())), &plot::rates_chart(fig.name(), &summary, units))?;
                if cfg.classes.is_some() {
                    let n = *cfg.n_list.last().expect("nonempty");
                    let path = svg_path(&out, fig.name()).with_file_name(format!("{}-cdf.svg", fig.name()));
                    write_svg(&path, &plot::class_cdf_chart(&format!("{} N={n}", fig.name()), &class_rates(&records, n), units))?;
                }
            }
        }
        Cmd::Wfgain { n, snr, trials, seed, out } => {
            write_rows(&wf_gain_sweep(n, &WF_B, snr, trials, seed)?, sink(&out)?)?;
        }
        Cmd::Bound { k, b, epsilon, m } => {
            let mut inp = BoundInput::new(k, b, epsilon)?;
            if let Some(m) = m {
                inp = inp.with_m(m)?;
            }
            let cov = lemma2_bounds(k, b, inp.m())?;
            let row = BoundRow {
                k,
                b,
                epsilon,
                m: inp.m(),
                theorem1: theorem1_bound(&inp),
                finite_k_union: finite_k_union_bound(&inp)?,
                lemma2_upper: cov.upper,
                lemma2_lower: cov.lower,
            };
            write_rows(&[row], io::stdout().lock())?;
        }
        Cmd::Encode { k, mut channels } => {
            channels.sort_unstable();
            let subset = ChannelSubset::new(k, channels)?;
            let idx = encode_subset(&subset);
            println!("{}", idx.value());
            eprintln!("{:.3} bits", feedback_bits(k, subset.len())?);
        }
        Cmd::Decode { k, m, index } => {
            let value: BigUint = index
                .trim()
                .parse()
                .map_err(|_| pm_feedback::Error::InvalidArgument(format!("`{index}` is not a nonnegative integer")))?;
            println!("{}", decode_subset(&FeedbackIndex::new(value, k, m)?)?);
        }
    }
    Ok(true)
}

fn units_label(u: RateUnits) -> &'static str {
    match u {
        RateUnits::Kbps => "kbps",
        RateUnits::BitsPerUse => "bits/use",
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
