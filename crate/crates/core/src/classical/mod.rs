//! Classical n→1 codes assisted by one shared bit per party.

pub mod lp;
pub mod search;
pub mod strategy;

pub use lp::{maximin_distribution, optimal_distribution, LpSolution, MarginalConstraint};
pub use search::{
    concatenated_classical_search, exhaustive_search, pruned_search, random_strategy, BestCode, ConcatenatedCode,
    EncodingFilter, SearchMode, SearchReport,
};
pub use strategy::{
    evaluate_strategy, guess_point, has_duplicate_encoding, ClassicalStrategy, DecodingTable, EncodingFn,
    SharedDistribution,
};
