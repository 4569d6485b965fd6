//! User-channel graphs, maximum matchings and weighted assignment.

mod graph;
mod hopcroft_karp;
mod hungarian;

pub use graph::{build_graph, UserChannelGraph};
pub use hopcroft_karp::{hall_violation, hall_violation_for, maximum_matching, HallViolation, Matching};
pub use hungarian::{optimal_assignment, Assignment, WeightMatrix};
