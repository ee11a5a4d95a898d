//! Cantor-type subsets with prescribed large prime partial quotients, and
//! the audit of their mass distribution.

mod audit;
mod construction;
mod model;
mod params;
mod validate;

pub use audit::{
    audit, default_max_level, gap_audit, holder_audit, length_audit, AuditSummary, CantorReport, LengthBand,
    LevelRow, GENERIC_BAND, MASS_TOLERANCE, PRIME_BAND,
};
pub use construction::{enumerate_level, plan_levels, LevelPlan, MassNode};
pub use model::{admissible, mass_of, MassState, WeightTable};
pub use params::{Block, CantorParams, Layout, Slot};
pub use validate::{required_limit, validate_params, Condition, PrimeBlock, Status, Validated};
