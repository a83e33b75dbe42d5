//! Exact Gromov-Hausdorff distances between finite metric spaces.
//!
//! All quantities are exact rationals. The crate provides validated spaces
//! and their elementary transformations ([`space`]), correspondences and
//! distortion ([`correspondence`]), an exhaustive oracle, a branch-and-bound
//! solver and bounds ([`search`]), scaling identities and stabilizer probes
//! ([`cloud`]), parameterized example spaces ([`constructions`]), and the
//! reproducible check suite behind `ghcloud verify paper` ([`verify`]).

#![allow(clippy::result_large_err, clippy::needless_range_loop)]

pub mod cloud;
pub mod constructions;
pub mod correspondence;
pub mod io;
pub mod random;
pub mod rational;
pub mod search;
pub mod space;
pub mod verify;

pub use correspondence::{distortion, image_diameter, Correspondence};
pub use rational::Rational;
pub use search::{gh_exact, gh_exact_with, gh_lower_bound, gh_oracle, gh_upper_bound_greedy, ExactOptions, GhResult, SolveStatus};
pub use space::{diameter, hausdorff_in_ambient, scale, FiniteMetricSpace, Realization};
