//! Exact continued-fraction kernel.

mod cylinder;
mod expand;
mod word;

pub use cylinder::{
    cylinder, digit_range_endpoints, digit_range_measure, digit_slice_measure, tail_union_measure,
    Cylinder,
};
pub use expand::{canonicalize, expand, rational_approximation};
pub use word::{convergents, Convergent, Word};
