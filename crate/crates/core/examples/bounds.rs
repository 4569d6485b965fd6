//! Analytic bounds on the probability that no perfect matching exists.

use pm_feedback::bounds::{
    exact_uncovered_probability, finite_k_union_bound, lemma2_bounds, lemma4_scan, lemma4_threshold_k, theorem1_bound,
    BoundInput,
};

fn main() -> pm_feedback::Result<()> {
    println!("{:>5} {:>3} {:>10} {:>10}", "K", "M", "two-term", "union");
    for k in [40, 100, 200, 300, 400, 1000] {
        let inp = BoundInput::new(k, 4, 0.5)?;
        println!("{k:5} {:3} {:10.4} {:10.4}", inp.m(), theorem1_bound(&inp), finite_k_union_bound(&inp)?);
    }

    let scan = lemma4_scan(&BoundInput::new(1000, 4, 1.0)?)?;
    println!("K=1000 b=4 eps=1: max f = {:.3} at x={} vs {:.3}, holds={}", scan.max_f, scan.argmax, scan.rhs, scan.holds);
    println!("smallest K where it holds: {:?}", lemma4_threshold_k(4, 1.0, 8, 2000)?);

    for m in [6, 7, 11] {
        let c = lemma2_bounds(1000, 1, m)?;
        let exact = exact_uncovered_probability(1000, 1, m)?;
        println!("K=1000 M={m:2}: uncovered {exact:.4} in [{:.4}, {:.4}] (raw lower {:.3})", c.lower, c.upper, c.raw_lower);
    }
    Ok(())
}
