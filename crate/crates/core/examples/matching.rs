//! Perfect matching from M-best reports, with a Hall certificate when none exists.

use pm_feedback::channel::{m_best_reports, sample_gains, FadingSpec};
use pm_feedback::matching::{build_graph, hall_violation_for, maximum_matching};

fn main() -> pm_feedback::Result<()> {
    let (n, b) = (5, 2);
    let k = n * b;
    let gains = sample_gains(&FadingSpec::unit_rayleigh(), n, k, 7)?;
    for m in [3, 6] {
        let reports = m_best_reports(&gains, m)?;
        let g = build_graph(&reports, &vec![b; n])?;
        let matching = maximum_matching(&g);
        println!("M={m}: matched {} of {} agents", matching.cardinality(), g.n_agents());
        match hall_violation_for(&g, &matching) {
            None => {
                for u in 0..n {
                    let ch: Vec<usize> = g.agents_of(u).filter_map(|a| matching.channel_of(a)).map(|c| c + 1).collect();
                    println!("  user {} -> channels {:?}", u + 1, ch);
                }
            }
            Some(h) => println!(
                "  no PM: {} agents only reach channels {:?}",
                h.agents.len(),
                h.neighborhood.iter().map(|c| c + 1).collect::<Vec<_>>()
            ),
        }
    }
    Ok(())
}
