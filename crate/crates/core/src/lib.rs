//! Random access codes with finite shared randomness.
//!
//! Classical n→1 codes assisted by two shared bits are optimized exhaustively
//! (with an exact LP over the bits' joint distribution); quantum codes assisted
//! by a shared two-qubit state are evaluated exactly in the Bloch picture.

pub mod bits;
pub mod classical;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod linalg;
pub mod optimize;
pub mod parallel;
pub mod qstate;
pub mod quantum_rac;
pub mod reproduce;
pub mod rng;

pub use error::{RacError, Result};
pub use evaluation::EvaluationResult;
