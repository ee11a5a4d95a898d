//! Event checkers, a seeded Monte Carlo estimator, the convergence
//! classifier and the Chung–Erdős diagnostic.

mod chung_erdos;
mod event;
mod mc;
mod sampler;
mod series;

pub use chung_erdos::{chung_erdos_ratio, CeReport};
pub use event::{check_event, event_holds, EventKind};
pub use mc::{first_digit_prime_measure, mc_measure, scaling_term, wilson_interval, McReport, Z95};
pub use sampler::{draw_bits, DigitSampler};
pub use series::{series_classifier, PartialSum, SeriesReport, Verdict};
