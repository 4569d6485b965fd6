//! Mean and minimum user rate of every allocator on one-channel-per-user systems.

use pm_feedback::sim::{rate_figures, Figure};

fn main() -> pm_feedback::Result<()> {
    let (cfg, _, summary) = rate_figures(Figure::OneChannel, 40, 1)?;
    println!("fading {:?}, {} trials per point", cfg.fading.kind, cfg.trials);
    for s in summary {
        println!(
            "N={:3} {:17} mean {:7.1} kbps  min {:7.1} kbps  feedback {}",
            s.n,
            s.method.name(),
            s.mean_rate,
            s.mean_min_rate,
            s.feedback_bits_per_channel.map_or("full CSI".into(), |b| format!("{b:.2} bits/ch")),
        );
    }
    Ok(())
}
