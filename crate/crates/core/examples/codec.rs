//! Encode a user's M-best set into a single feedback index and back.

use pm_feedback::codec::{feedback_bits, select_m_ln, ChannelSubset, Rounding, SubsetCodec};

fn main() -> pm_feedback::Result<()> {
    let k = 20;
    let best = ChannelSubset::new(k, vec![2, 3, 5, 8, 11, 13, 17, 19, 20])?;
    let codec = SubsetCodec::new(k, best.len())?;
    let idx = codec.encode(&best)?;
    println!("{best} -> {} of {} indices", idx.value(), codec.cardinality());
    println!("decoded: {}", codec.decode(&idx)?);
    println!("{:.3} bits per channel", feedback_bits(k, best.len())? / k as f64);

    for k in [64, 128, 256, 512, 1024] {
        let m = select_m_ln(k, 7.5, Rounding::Ceil);
        let bits = feedback_bits(k, m)?;
        println!("K={k:5} M={m:3} bits={bits:8.2} per channel={:.3}", bits / k as f64);
    }
    Ok(())
}
