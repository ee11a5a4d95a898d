use serde::Serialize;

use super::sum::{cylinder_sum, SnQuery, Spectrum};
use crate::error::{Error, Result};

pub const BRACKET_LO: f64 = 1.0 / 3.0;
pub const BRACKET_HI: f64 = 2.0;

/// Root in `s` of `Σ_{{1..M}ⁿ} B^{-(3s-1)n} q_n^{-2s} = 1`, by bisection on
/// `[1/3, 2]` until the bracket is no wider than `tol`.
///
/// A one-letter alphabet returns `1/3` without solving.
pub fn solve_sn(q: &SnQuery) -> Result<f64> {
    q.validate()?;
    if q.m == 1 {
        return Ok(BRACKET_LO);
    }
    let spectrum = Spectrum::build(q)?;
    solve_with(&spectrum, q.b, q.tol)
}

/// Bisection against a prebuilt spectrum; the spectrum does not depend on `B`,
/// so one table serves a whole sweep.
pub fn solve_with(spectrum: &Spectrum, b: f64, tol: f64) -> Result<f64> {
    if spectrum.m == 1 {
        return Ok(BRACKET_LO);
    }
    let f = |s: f64| spectrum.ln_pressure_sum(s, b);
    let (mut lo, mut hi) = (BRACKET_LO, BRACKET_HI);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(Error::NonFinite(format!(
            "cylinder sum at the bracket ends (n={}, M={}, B={b})",
            spectrum.n, spectrum.m
        )));
    }
    if f_lo < 0.0 {
        return Err(Error::Bracket(format!(
            "sum < 1 at s=1/3 (n={}, M={}, B={b})",
            spectrum.n, spectrum.m
        )));
    }
    if f_hi > 0.0 {
        return Err(Error::Bracket(format!(
            "sum > 1 at s=2 (n={}, M={}, B={b})",
            spectrum.n, spectrum.m
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `s_k(B, M)` for `k = 1..=n`.
pub fn sn_sequence(n: u32, m: u64, b: f64, tol: f64, cap: u128) -> Result<Vec<f64>> {
    (1..=n)
        .map(|k| solve_sn(&SnQuery::new(k, m, b).with_tol(tol).with_cap(cap)))
        .collect()
}

/// `(1/n) ln Σ_w exp(sup_{I_n(w)} S_n f)` for the potential
/// `f = -(3s-1) ln B - s ln|T'|`, with its distortion band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PressureApprox {
    pub value: f64,
    /// The same sum with the pointwise infimum `(q_n + q_{n-1})^{-2s} ≥ 4^{-s} q_n^{-2s}`,
    /// bounded below by `value - (s/n) ln 4`.
    pub lower: f64,
    pub upper: f64,
}

pub fn pressure_approx(n: u32, m: u64, s: f64, b: f64, precision_bits: u32) -> Result<PressureApprox> {
    let q = SnQuery::new(n, m, b);
    let sum = cylinder_sum(&q, s, precision_bits)?;
    let value = sum.ln().to_f64() / n as f64;
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("pressure at s={s}")));
    }
    Ok(PressureApprox {
        value,
        lower: value - s * 4f64.ln() / n as f64,
        upper: value,
    })
}
