use rug::{Assign, Float};

use super::PrimeTable;
use crate::error::{Error, Result};

/// Bracket for `Σ_{p ≥ M} 1/p²`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailSumResult {
    pub m: u64,
    /// Sum over primes in `[M, limit]`.
    pub lower: Float,
    /// `lower + 1/limit`, which bounds every integer beyond the table.
    pub upper: Float,
    /// Midpoint times `M ln M`.
    pub normalized: f64,
}

impl TailSumResult {
    pub fn midpoint(&self) -> Float {
        Float::with_val(self.lower.prec(), &self.lower + &self.upper) / 2u32
    }
}

/// Sums `1/p²` over the table's primes `p ≥ m` in ascending order, so the
/// result does not depend on scheduling.
pub fn prime_square_tail(m: u64, table: &PrimeTable, precision_bits: u32) -> Result<TailSumResult> {
    if m < 2 {
        return Err(Error::domain(format!("tail start must be >= 2, got {m}")));
    }
    if m > table.limit() {
        return Err(Error::OutOfTable {
            requested: m,
            limit: table.limit(),
        });
    }
    let prec = precision_bits.max(crate::DEFAULT_PRECISION_BITS);
    let mut lower = Float::new(prec);
    let mut term = Float::new(prec);
    for p in table.primes_between(m, table.limit())? {
        term.assign(1u32);
        term /= p;
        term /= p;
        lower += &term;
    }
    let upper = Float::with_val(prec, 1u32) / Float::with_val(prec, table.limit()) + &lower;
    let mid = Float::with_val(prec, &lower + &upper) / 2u32;
    let scale = Float::with_val(prec, m) * Float::with_val(prec, m).ln();
    let normalized = (mid * scale).to_f64();
    Ok(TailSumResult {
        m,
        lower,
        upper,
        normalized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve;
    use rug::Rational;

    #[test]
    fn tiny_table_is_direct_sum() {
        let t = sieve(10).unwrap();
        let r = prime_square_tail(2, &t, 80).unwrap();
        let exact = Rational::from((1, 4)) + Rational::from((1, 9)) + Rational::from((1, 25)) + Rational::from((1, 49));
        let diff = Float::with_val(200, &r.lower - &Float::with_val(200, &exact)).abs();
        assert!(diff < 1e-22);
        assert!(r.upper > r.lower);
    }

    #[test]
    fn decreasing_in_start() {
        let t = sieve(100_000).unwrap();
        let mut prev: Option<Float> = None;
        for m in [2u64, 3, 4, 100, 101, 1000, 99_000] {
            let r = prime_square_tail(m, &t, 80).unwrap();
            if let Some(p) = prev {
                assert!(r.lower <= p);
            }
            prev = Some(r.lower);
        }
        assert!(prime_square_tail(100_001, &t, 80).is_err());
        assert!(prime_square_tail(1, &t, 80).is_err());
    }
}
