//! Channels, GKLS generators, classical rate matrices, and the flow of
//! Fisher information along an evolution.

pub mod channel;
pub mod classical;
pub mod flux;
pub mod lindblad;
pub mod markov;

pub use channel::{CptpReport, QuantumChannel};
pub use classical::{
    classical_db_check, negative_rate_counterexample, trace_distance_derivative, RateMatrix,
};
pub use flux::{count_sign_changes, fisher_trajectory, flux_currents, FluxEntry, FluxReport};
pub use lindblad::{
    canonical_form, evolve, trajectory, trajectory_channels, DepolarizingFamily, DepolarizingKind,
    Evolution, Lindbladian, ScheduledLindbladian, WithAncilla,
};
pub use markov::{fisher_expansion_search, markov_report, MarkovReport, MarkovVerdict};
