use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of words `Mⁿ` a cylinder sum may enumerate.
pub const DEFAULT_WORD_CAP: u128 = 10_000_000;

pub const DEFAULT_TOL: f64 = 1e-10;

/// One finite-alphabet root problem: words of length `n` over `{1..m}`,
/// exponential weight base `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnQuery {
    pub n: u32,
    pub m: u64,
    pub b: f64,
    pub tol: f64,
    pub cap: u128,
}

impl SnQuery {
    pub fn new(n: u32, m: u64, b: f64) -> Self {
        SnQuery {
            n,
            m,
            b,
            tol: DEFAULT_TOL,
            cap: DEFAULT_WORD_CAP,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("word length n must be >= 1"));
        }
        if self.m == 0 {
            return Err(Error::domain("alphabet size M must be >= 1"));
        }
        if !self.b.is_finite() || self.b <= 1.0 {
            return Err(Error::domain(format!("B must be a finite real > 1, got {}", self.b)));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::domain(format!("tol must be positive, got {}", self.tol)));
        }
        self.word_count()?;
        Ok(())
    }

    /// `Mⁿ`, or a cap error.
    pub fn word_count(&self) -> Result<u128> {
        let total = (self.m as u128).checked_pow(self.n).unwrap_or(u128::MAX);
        if total > self.cap {
            return Err(Error::CapExceeded {
                what: "word count M^n",
                requested: total,
                cap: self.cap,
            });
        }
        Ok(total)
    }
}

// (q_{i-1}, q_i)
type State = (u128, u128);

fn step(state: State, a: u64) -> Result<State> {
    let q = state
        .1
        .checked_mul(a as u128)
        .and_then(|v| v.checked_add(state.0))
        .ok_or_else(|| Error::NonFinite("continuant exceeds 128 bits".into()))?;
    Ok((state.1, q))
}

/// Prefixes of length `depth` in lexicographic order, with their states.
fn prefixes(m: u64, depth: u32) -> Result<Vec<State>> {
    let mut level = vec![(0u128, 1u128)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * m as usize);
        for &st in &level {
            for a in 1..=m {
                next.push(step(st, a)?);
            }
        }
        level = next;
    }
    Ok(level)
}

/// Prefix depth giving enough independent subtrees to keep every worker busy.
fn split_depth(m: u64, n: u32) -> u32 {
    let mut d = 0;
    let mut width: u128 = 1;
    while d < n && width < 256 {
        width *= m as u128;
        d += 1;
    }
    d
}

fn visit(state: State, depth: u32, m: u64, f: &mut impl FnMut(u128) -> Result<()>) -> Result<()> {
    if depth == 0 {
        return f(state.1);
    }
    for a in 1..=m {
        visit(step(state, a)?, depth - 1, m, f)?;
    }
    Ok(())
}

/// `Σ_{w ∈ {1..M}ⁿ} B^{-(3s-1)n} q_n(w)^{-2s}` at `precision_bits`.
///
/// Words are enumerated depth first in lexicographic order carrying
/// `(q_{i-1}, q_i)`; subtrees run in parallel and their partial sums are
/// added back in lexicographic order, so the result does not depend on the
/// number of threads.
pub fn cylinder_sum(q: &SnQuery, s: f64, precision_bits: u32) -> Result<Float> {
    q.validate()?;
    if !(0.0..=2.0).contains(&s) {
        return Err(Error::domain(format!("s must lie in [0, 2], got {s}")));
    }
    let prec = precision_bits.max(crate::DEFAULT_PRECISION_BITS);
    let d = split_depth(q.m, q.n);
    let roots = prefixes(q.m, d)?;
    let exponent = Float::with_val(prec, -2.0 * s);
    let partials: Vec<Float> = roots
        .par_iter()
        .map(|&root| {
            let mut acc = Float::new(prec);
            let mut lnq = Float::new(prec);
            visit(root, q.n - d, q.m, &mut |qn| {
                use rug::Assign;
                lnq.assign(qn);
                lnq.ln_mut();
                lnq *= &exponent;
                lnq.exp_mut();
                acc += &lnq;
                Ok(())
            })?;
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = Float::new(prec);
    for p in &partials {
        total += p;
    }
    let ln_b = Float::with_val(prec, q.b).ln();
    let weight = (ln_b * (-(3.0 * s - 1.0) * q.n as f64)).exp();
    let out = total * weight;
    if !out.is_finite() {
        return Err(Error::NonFinite(format!("cylinder sum at s={s}")));
    }
    Ok(out)
}

/// Multiset of continuants `q_n(w)` over `{1..M}ⁿ`, as `(ln q, multiplicity)`
/// pairs in ascending `q`.
///
/// Evaluating the cylinder sum from this table costs one exponential per
/// distinct denominator, which is what makes bisection affordable.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub n: u32,
    pub m: u64,
    entries: Vec<(f64, u64)>,
}

impl Spectrum {
    pub fn build(q: &SnQuery) -> Result<Self> {
        q.validate()?;
        let d = split_depth(q.m, q.n);
        let roots = prefixes(q.m, d)?;
        let mut all: Vec<u128> = roots
            .par_iter()
            .map(|&root| {
                let mut out = Vec::new();
                visit(root, q.n - d, q.m, &mut |qn| {
                    out.push(qn);
                    Ok(())
                })?;
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .concat();
        all.par_sort_unstable();
        let mut entries: Vec<(f64, u64)> = Vec::new();
        let mut i = 0;
        while i < all.len() {
            let mut j = i;
            while j < all.len() && all[j] == all[i] {
                j += 1;
            }
            entries.push(((all[i] as f64).ln(), (j - i) as u64));
            i = j;
        }
        Ok(Spectrum {
            n: q.n,
            m: q.m,
            entries,
        })
    }

    pub fn entries(&self) -> &[(f64, u64)] {
        &self.entries
    }

    /// `ln Σ_w q_n(w)^{-2s}`, evaluated relative to the smallest continuant so
    /// that large `s` cannot underflow.
    pub fn ln_sum(&self, s: f64) -> f64 {
        let base = self.entries[0].0;
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for &(lnq, count) in &self.entries {
            let term = count as f64 * (-2.0 * s * (lnq - base)).exp();
            // Neumaier compensation
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        (sum + comp).ln() - 2.0 * s * base
    }

    /// `ln` of the full cylinder sum with weight base `b`.
    pub fn ln_pressure_sum(&self, s: f64, b: f64) -> f64 {
        self.ln_sum(s) - (3.0 * s - 1.0) * self.n as f64 * b.ln()
    }
}
