//! Finite-alphabet pressure sums, the `s_n(B, M)` root solver and the
//! growth-rate classifier that maps `φ` to a dimension.

pub(crate) mod dimension;
mod phi;
mod solve;
mod sum;

pub use dimension::{
    dimension, liminf_exponents, Diagnostics, DimensionResult, GrowthExponents, Method, Regime,
    SolverBudget,
};
pub use phi::PhiSpec;
pub use solve::{pressure_approx, sn_sequence, solve_sn, solve_with, PressureApprox, BRACKET_HI, BRACKET_LO};
pub use sum::{cylinder_sum, SnQuery, Spectrum, DEFAULT_TOL, DEFAULT_WORD_CAP};
