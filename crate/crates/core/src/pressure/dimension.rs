use serde::Serialize;

use super::phi::PhiSpec;
use super::solve::sn_sequence;
use super::sum::{DEFAULT_TOL, DEFAULT_WORD_CAP};
use crate::error::{Error, Result};

/// `liminf ln φ(n) / n` and `liminf ln ln φ(n) / n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthExponents {
    /// `ln B`; `+∞` for super-exponential growth.
    #[serde(rename = "logB", serialize_with = "ser_extended")]
    pub log_growth: f64,
    /// `ln b`; `+∞` when even `ln φ` grows super-exponentially.
    #[serde(rename = "logb", serialize_with = "ser_extended")]
    pub log_log_growth: f64,
    /// Tail minimum over a finite horizon rather than an exact limit.
    pub horizon_approximate: bool,
}

/// JSON has no infinity; write it as the string `"inf"`.
pub(crate) fn ser_extended<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

pub fn liminf_exponents(phi: &PhiSpec, horizon: (u64, u64)) -> Result<GrowthExponents> {
    phi.validate()?;
    let bounded_by_one = || Error::domain("ln ln φ is undefined: φ(n) <= 1 for every n");
    let exact = |g: f64, l: f64| GrowthExponents {
        log_growth: g,
        log_log_growth: l,
        horizon_approximate: false,
    };
    match *phi {
        PhiSpec::Power { c, k } => {
            if k == 0.0 && c <= 1.0 {
                return Err(bounded_by_one());
            }
            Ok(exact(0.0, 0.0))
        }
        PhiSpec::Geometric { c, b } => {
            if b == 1.0 && c <= 1.0 {
                return Err(bounded_by_one());
            }
            Ok(exact(b.ln(), 0.0))
        }
        PhiSpec::Doubly { c, b } => {
            if c == 1.0 {
                return Err(bounded_by_one());
            }
            if b == 1.0 {
                Ok(exact(0.0, 0.0))
            } else {
                Ok(exact(f64::INFINITY, b.ln()))
            }
        }
        PhiSpec::Table { ref values } => {
            let (lo, hi) = horizon;
            if lo < 2 || hi < lo {
                return Err(Error::domain(format!("horizon must satisfy 2 <= n_min <= n_max, got ({lo}, {hi})")));
            }
            if hi as usize > values.len() {
                return Err(Error::domain(format!(
                    "horizon end {hi} beyond table length {}",
                    values.len()
                )));
            }
            let mut g = f64::INFINITY;
            let mut l = f64::INFINITY;
            for n in lo..=hi {
                let v = values[n as usize - 1];
                if v <= 1.0 {
                    return Err(Error::domain(format!("ln ln φ({n}) undefined: φ({n}) = {v} <= 1")));
                }
                g = g.min(v.ln() / n as f64);
                l = l.min(v.ln().ln() / n as f64);
            }
            Ok(GrowthExponents {
                log_growth: g,
                log_log_growth: l,
                horizon_approximate: true,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "B_eq_1")]
    Subexponential,
    #[serde(rename = "B_finite")]
    Exponential,
    #[serde(rename = "B_inf_b_finite")]
    DoublyExponential,
    #[serde(rename = "B_inf_b_inf")]
    Faster,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SnExtrapolation,
    ClosedForm,
}

/// Finite-alphabet budget for the exponential regime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverBudget {
    pub n: u32,
    pub m: u64,
    pub tol: f64,
    pub cap: u128,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            n: 3,
            m: 8,
            tol: DEFAULT_TOL,
            cap: DEFAULT_WORD_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub n: u32,
    pub m: u64,
    /// `s_k(B, M)` for `k = 1..=n`, unclamped.
    pub sn_sequence: Vec<f64>,
    /// Set when the raw finite-alphabet root fell outside `[0, 1]`.
    pub clamped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionResult {
    #[serde(flatten)]
    pub exponents: GrowthExponents,
    pub regime: Regime,
    pub dim: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

/// Hausdorff dimension of the set of points with two prime partial
/// quotients above `φ(n)` for infinitely many `n`.
///
/// Exponential growth has no closed form; the result is the finite-alphabet
/// root `s_n(B, M)` at the given budget, clamped to `[0, 1]`.
pub fn dimension(phi: &PhiSpec, budget: SolverBudget, horizon: (u64, u64)) -> Result<DimensionResult> {
    let ex = liminf_exponents(phi, horizon)?;
    let closed = |regime, dim| DimensionResult {
        exponents: ex,
        regime,
        dim,
        method: Method::ClosedForm,
        diagnostics: None,
    };
    if ex.log_growth.is_infinite() {
        if ex.log_log_growth.is_infinite() {
            return Ok(closed(Regime::Faster, 0.0));
        }
        let b = ex.log_log_growth.exp();
        return Ok(closed(Regime::DoublyExponential, 1.0 / (b + 1.0)));
    }
    if ex.log_growth < 0.0 {
        return Err(Error::domain(format!(
            "liminf ln φ(n)/n = {} < 0; φ must not decay",
            ex.log_growth
        )));
    }
    if ex.log_growth == 0.0 {
        return Ok(closed(Regime::Subexponential, 1.0));
    }
    let b = ex.log_growth.exp();
    let seq = sn_sequence(budget.n, budget.m, b, budget.tol, budget.cap)?;
    let raw = *seq.last().unwrap();
    let dim = raw.clamp(0.0, 1.0);
    Ok(DimensionResult {
        exponents: ex,
        regime: Regime::Exponential,
        dim,
        method: Method::SnExtrapolation,
        diagnostics: Some(Diagnostics {
            n: budget.n,
            m: budget.m,
            sn_sequence: seq,
            clamped: dim != raw,
        }),
    })
}
