//! Sample each fading law and compare its tail with the fitted envelope.

use pm_feedback::channel::{largest_representable_tail_x, sample_gains, tail_ratio, FadingSpec, TailParams};

fn main() -> pm_feedback::Result<()> {
    let laws = [
        ("rayleigh", FadingSpec::rayleigh(std::f64::consts::FRAC_1_SQRT_2)?),
        ("nakagami m=2", FadingSpec::nakagami(2.0, 1.0)?),
        ("rician v=1", FadingSpec::rician(1.0, 1.0)?),
        ("half-normal", FadingSpec::half_normal(1.0)?),
    ];
    for (name, spec) in &laws {
        let g = sample_gains(spec, 200, 50, 1)?;
        let ms = g.as_slice().iter().map(|x| x * x).sum::<f64>() / g.as_slice().len() as f64;
        let p = TailParams::canonical(spec)?;
        let x_max = largest_representable_tail_x(spec)?;
        print!("{name:14} E[g^2] sample {ms:.3} exact {:.3} | ratio", spec.mean_square_gain());
        for x in [1.0, x_max / 4.0, x_max] {
            print!(" x={x:.1}:{:.4}", tail_ratio(spec, &p, x)?.ratio);
        }
        println!();
    }

    let epa = sample_gains(&FadingSpec::epa(), 1, 16, 3)?;
    let row: Vec<String> = epa.row(0).iter().map(|g| format!("{g:.2}")).collect();
    println!("EPA resource blocks: {}", row.join(" "));
    Ok(())
}
