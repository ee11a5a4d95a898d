use serde::Serialize;

use super::mc::tally_seeded;
use crate::error::{Error, Result};
use crate::pressure::PhiSpec;
use crate::primes::PrimeTable;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CeReport {
    pub n_max: usize,
    pub samples: u64,
    pub seed: u64,
    /// `(Σ_n P(E_n))² / Σ_{m,n} P(E_m ∩ E_n)`, or 0 when nothing was hit.
    pub ratio: f64,
    pub zero_hits: bool,
    /// Estimate of `Σ_{n ≤ N} P(E_n)`.
    pub first_moment: f64,
    /// Estimate of `Σ_{m,n ≤ N} P(E_m ∩ E_n)`.
    pub second_moment: f64,
    pub redraws: u64,
}

/// Chung–Erdős lower-bound diagnostic for the two-prime events `n ≤ N`.
///
/// Each trajectory is expanded once; with `h` the number of indices whose
/// event holds, `Σ h` and `Σ h²` estimate the first and second moments.
pub fn chung_erdos_ratio(
    phi: &PhiSpec,
    n_max: usize,
    samples: u64,
    seed: u64,
    table: &PrimeTable,
    precision_bits: u32,
) -> Result<CeReport> {
    phi.validate()?;
    if n_max == 0 || samples == 0 {
        return Err(Error::domain("N and samples must be >= 1"));
    }
    let thresholds: Vec<Option<u64>> = (1..=n_max as u64)
        .map(|n| phi.integer_threshold(n, precision_bits))
        .collect::<Result<_>>()?;
    let ([s1, s2], redraws) = tally_seeded(samples, n_max, seed, |digits| {
        // largest prime digit seen so far
        let mut best = 0u64;
        let mut h = 0u64;
        for (i, &a) in digits.iter().enumerate() {
            let prime = table.is_prime_any(a);
            if let Some(t) = thresholds[i] {
                if prime && a >= t && best >= t {
                    h += 1;
                }
            }
            if prime {
                best = best.max(a);
            }
        }
        [h, h * h]
    });
    let s = samples as f64;
    let zero_hits = s1 == 0;
    let ratio = if zero_hits {
        0.0
    } else {
        (s1 as f64) * (s1 as f64) / (s * s2 as f64)
    };
    Ok(CeReport {
        n_max,
        samples,
        seed,
        ratio,
        zero_hits,
        first_moment: s1 as f64 / s,
        second_moment: s2 as f64 / s,
        redraws,
    })
}
