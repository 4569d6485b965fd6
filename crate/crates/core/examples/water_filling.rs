//! Gain of per-user water-filling over equal power on the allocated channels.

use pm_feedback::allocation::water_fill;
use pm_feedback::sim::{wf_gain_sweep, WF_B};

fn main() -> pm_feedback::Result<()> {
    let (p, r) = water_fill(&[1.2, 0.4, 0.05], 1.0, 0.1)?;
    println!("powers {p:.3?} rate {r:.3} bits/use");

    for row in wf_gain_sweep(30, &WF_B, 10.0, 30, 1)? {
        println!("b={:2} {:9} mean gain {:.4}%  worst trial {:.4}%", row.b, row.method.name(), 100.0 * row.mean_gain, 100.0 * row.max_gain);
    }
    Ok(())
}
