use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::PrimeTable;
use crate::error::{Error, Result};

/// Integer range `[ceil(γⁿ), floor(2γⁿ)]`, computed exactly from the binary
/// value of `gamma`.
pub fn power_interval(gamma: f64, n: u32) -> Result<(u64, u64)> {
    if !gamma.is_finite() || gamma <= 1.0 {
        return Err(Error::domain(format!("base must be a finite real > 1, got {gamma}")));
    }
    let x = Rational::from_f64(gamma).unwrap().pow(n);
    let lo = Integer::from(x.ceil_ref());
    let hi = Integer::from((x * 2u32).floor_ref());
    match (lo.to_u64(), hi.to_u64()) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::domain(format!("{gamma}^{n} does not fit in 64 bits"))),
    }
}

/// `#(P ∩ [γⁿ, 2γⁿ])`.
pub fn interval_prime_count(gamma: f64, n: u32, table: &PrimeTable) -> Result<u64> {
    let (lo, hi) = power_interval(gamma, n)?;
    table.count_between(lo, hi)
}

/// `c_n(γ)`, defined by `#(P ∩ [γⁿ, 2γⁿ]) = c_n(γ) γⁿ / (n log γ)`.
pub fn large_interval_constant(gamma: f64, n: u32, table: &PrimeTable, precision_bits: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let count = interval_prime_count(gamma, n, table)?;
    let prec = precision_bits.max(crate::DEFAULT_PRECISION_BITS);
    let g = Float::with_val(prec, gamma);
    let scale = Float::with_val(prec, g.ln_ref()) * n;
    let power = Float::with_val(prec, gamma).pow(n);
    Ok((Float::with_val(prec, count) * scale / power).to_f64())
}

/// Below this point the small-interval statement carries no guarantee.
pub const SMALL_INTERVAL_THRESHOLD: f64 = 485_165_195.409_790_3; // e^20

/// Whether `[0.999 x, x)` contains a prime.
pub fn small_interval_nonempty(x: f64, table: &PrimeTable) -> Result<bool> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("x must be a positive real, got {x}")));
    }
    let xr = Rational::from_f64(x).unwrap();
    let lo = Integer::from((Rational::from((999, 1000)) * &xr).ceil_ref());
    let hi = Integer::from(xr.ceil_ref()) - 1u32;
    let (lo, hi) = (lo.to_u64().unwrap_or(u64::MAX), hi.to_u64().unwrap_or(u64::MAX));
    if hi > table.limit() {
        return Err(Error::OutOfTable {
            requested: hi,
            limit: table.limit(),
        });
    }
    Ok(hi >= lo && table.count_between(lo, hi)? > 0)
}
