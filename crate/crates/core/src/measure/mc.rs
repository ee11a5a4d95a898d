use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::event::{event_holds, EventKind};
use super::sampler::DigitSampler;
use crate::error::{Error, Result};
use crate::pressure::PhiSpec;
use crate::primes::PrimeTable;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

// Samples per parallel task; hit counts are integers, so the split does not
// affect the result.
const CHUNK: u64 = 512;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub kind: EventKind,
    pub n: usize,
    pub phi_n: f64,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
    /// Draws discarded because their expansion ran out or overflowed.
    pub redraws: u64,
}

/// Wilson score interval at normal quantile `z`.
pub fn wilson_interval(hits: u64, samples: u64, z: f64) -> (f64, f64) {
    let n = samples as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Fraction of uniform points of `(0, 1)` in the event, with a Wilson 95%
/// interval.
pub fn mc_measure(
    kind: EventKind,
    phi: &PhiSpec,
    n: usize,
    samples: u64,
    seed: u64,
    table: &PrimeTable,
    precision_bits: u32,
) -> Result<McReport> {
    phi.validate()?;
    if n == 0 {
        return Err(Error::domain("event index n must be >= 1"));
    }
    if samples == 0 {
        return Err(Error::domain("samples must be >= 1"));
    }
    let prec = precision_bits.max(crate::DEFAULT_PRECISION_BITS);
    let value = phi.value_float(n as u64, prec)?;
    if value < 2 {
        return Err(Error::domain(format!(
            "φ({n}) = {} < 2, so ln φ(n) is not bounded away from 0",
            value.to_f64()
        )));
    }
    let threshold = phi.integer_threshold(n as u64, prec)?;
    let ([hits, _], redraws) = tally_seeded(samples, n, seed, |d| {
        [event_holds(d, n, kind, threshold, table) as u64, 0]
    });
    let (ci_lo, ci_hi) = wilson_interval(hits, samples, Z95);
    Ok(McReport {
        kind,
        n,
        phi_n: value.to_f64(),
        samples,
        hits,
        estimate: hits as f64 / samples as f64,
        ci_lo,
        ci_hi,
        seed,
        redraws,
    })
}

/// Runs `f` over sample indices `0..samples` in fixed chunks and adds the
/// per-sample tallies; returns the totals and the number of discarded draws.
pub(crate) fn tally_seeded<F>(samples: u64, n: usize, seed: u64, f: F) -> ([u64; 2], u64)
where
    F: Fn(&[u64]) -> [u64; 2] + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map_init(
            || DigitSampler::new(n),
            |sampler, c| {
                let end = ((c + 1) * CHUNK).min(samples);
                let mut acc = ([0u64; 2], 0u64);
                for i in c * CHUNK..end {
                    let (digits, r) = sampler.sample(seed, i);
                    let v = f(digits);
                    acc.0[0] += v[0];
                    acc.0[1] += v[1];
                    acc.1 += r as u64;
                }
                acc
            },
        )
        .reduce(
            || ([0, 0], 0),
            |a, b| ([a.0[0] + b.0[0], a.0[1] + b.0[1]], a.1 + b.1),
        )
}

/// `n / (φ(n)² ln² φ(n))`, the size of the two-prime event up to constants.
pub fn scaling_term(phi: &PhiSpec, n: u64) -> Result<f64> {
    let l = phi.ln_value(n)?;
    if l <= 0.0 {
        return Err(Error::domain(format!("ln φ({n}) <= 0")));
    }
    Ok(((n as f64).ln() - 2.0 * l - 2.0 * l.ln()).exp())
}

/// Exact measure of `{x : a_1(x) is a prime ≥ t}`, i.e. `Σ_{p ≥ t} 1/(p(p+1))`,
/// bracketed by the table's primes below and `1/(limit+1)` for the rest.
pub fn first_digit_prime_measure(t: u64, table: &PrimeTable, precision_bits: u32) -> Result<(Float, Float)> {
    let prec = precision_bits.max(crate::DEFAULT_PRECISION_BITS);
    let mut lower = Float::new(prec);
    if t <= table.limit() {
        for p in table.primes_between(t, table.limit())? {
            let den = Float::with_val(prec, p) * (p + 1);
            lower += Float::with_val(prec, 1) / den;
        }
    }
    let rest = Float::with_val(prec, 1) / Float::with_val(prec, table.limit() + 1);
    let upper = Float::with_val(prec, &lower + &rest);
    Ok((lower, upper))
}
