//! Empirical probability that no perfect matching exists under two M rules.

use pm_feedback::sim::table2;

fn main() -> pm_feedback::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    println!("{:>4} {:>4} {:>4} {:>8} {:>4} {:>8} {:>8}", "N", "K", "M", "no PM", "M", "no PM", "bound");
    for r in table2(&[10, 25, 50, 75, 100], trials, 1)? {
        println!(
            "{:4} {:4} {:4} {:8.3} {:4} {:8.4} {:8.4}",
            r.n, r.k, r.m_low, r.no_pm_low, r.m_high, r.no_pm_high, r.upper_bound
        );
    }
    Ok(())
}
