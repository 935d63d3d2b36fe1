//! Fixed-budget thresholding bandits with shape constraints.
//!
//! Given `K` arms with unknown means and a threshold `tau`, the learner
//! classifies every arm as above (`+1`) or below (`-1`) `tau` after a fixed
//! number of pulls, and is scored by the largest gap `|mu_k - tau|` among the
//! arms it got wrong. When the means are known to be monotone, unimodal or
//! concave in the arm index, far fewer pulls are needed than in the
//! unstructured case.

pub mod baseline;
pub mod cli;
pub mod ctb;
pub mod env;
pub mod error;
pub mod harness;
pub mod instances;
pub mod mtb;
pub mod problem;
pub mod rng;
pub mod tree;
pub mod utb;

pub use env::{ArmRef, Environment};
pub use error::{Error, Result};
pub use problem::{simple_regret, true_classification, ArmDistribution, BanditInstance, Classification, Shape};
