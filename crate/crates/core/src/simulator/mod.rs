//! Branching density-matrix simulator with parametric noise and shot sampling.

mod branch;
mod noise;
mod sampling;

pub use branch::{evolve, key_string, output_state, reduced_density, BranchState, ClassicalKey, PRUNE_TOL};
pub use noise::NoiseModel;
pub use sampling::{outcome_distribution, sample_counts, sample_from_state};
