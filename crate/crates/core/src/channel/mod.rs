//! Channel gains: fading laws, M-best extraction and tail behaviour.

mod fading;
pub mod special;
mod tail;

pub use fading::{
    m_best, m_best_ranked, m_best_reports, order_statistic, sample_gains, BlockAggregation,
    ChannelGainMatrix, FadingKind, FadingSpec, MBestReport, TdlProfile,
};
pub use tail::{
    largest_representable_tail_x, log_survival, rice_log_survival, tail_ratio, TailParams, TailRatio,
};
