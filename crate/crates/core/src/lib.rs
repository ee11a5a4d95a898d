//! Metric theory of continued fractions with large prime partial quotients:
//! exact cylinder geometry, prime statistics, a finite-alphabet dimension
//! solver, Monte Carlo event probes and a Cantor-set mass audit.

pub mod cantor;
pub mod cf;
pub mod error;
pub mod measure;
pub mod pressure;
pub mod primes;

pub use cf::{Cylinder, Word};
pub use error::{Category, Error, Result};
pub use primes::PrimeTable;
pub use rug::{Float, Integer, Rational};

/// Default mantissa precision for high-precision reals.
pub const DEFAULT_PRECISION_BITS: u32 = 80;
