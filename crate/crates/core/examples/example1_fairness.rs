//! Four users, four channels: sum-rate optimal allocation starves one user,
//! while the PM fallback keeps everyone at rate 1.

use pm_feedback::allocation::{optimal_allocate_utility, pm_allocate, RateReport};
use pm_feedback::channel::ChannelGainMatrix;

fn main() -> pm_feedback::Result<()> {
    let delta = 0.1;
    let utility: Vec<Vec<f64>> = (0..4)
        .map(|u| {
            (0..4)
                .map(|c| match (u, c) {
                    (1, 0) => 1.0,
                    (1, 1) => 2.0,
                    (_, 0) => delta,
                    _ => 1.0,
                })
                .collect()
        })
        .collect();

    let opt = optimal_allocate_utility(&utility, &[1; 4])?;
    let r = RateReport::from_utility(&utility, &opt);
    println!("optimal: {:?} sum {:.2} min {:.2}", opt.per_user, r.sum_rate, r.min_rate);

    let gains = ChannelGainMatrix::from_rows(&utility)?;
    for m in [2, 3] {
        let (pm, _) = pm_allocate(&gains, m, &[1; 4])?;
        let r = RateReport::from_utility(&utility, &pm);
        println!("PM M={m}: {:?} sum {:.2} min {:.2} perfect={}", pm.per_user, r.sum_rate, r.min_rate, pm.pm_flag);
    }
    Ok(())
}
