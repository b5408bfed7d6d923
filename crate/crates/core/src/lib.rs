//! Probabilistic erasure measures for finite frames and their duals: weight
//! numbers, worst-case error operators, optimal dual search, optimality
//! certificates, optimal dual pairs and a Monte Carlo erasure channel.

pub mod cli;
pub mod dual_pairs;
pub mod erasure;
pub mod error;
pub mod frame;
pub mod golden;
pub mod io;
pub mod linalg;
pub mod optimality;
pub mod random;
pub mod sim;
pub mod tolerance;

pub use erasure::{weights_from_probabilities, MeasureKind, MeasureReport, ProbabilityModel};
pub use error::{FrameError, Result};
pub use frame::Frame;
pub use tolerance::Tolerances;
