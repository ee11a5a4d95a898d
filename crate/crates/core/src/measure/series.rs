use serde::Serialize;

use crate::error::{Error, Result};
use crate::pressure::PhiSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PartialSum {
    pub n: u64,
    pub sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesReport {
    pub verdict: Verdict,
    pub rule: String,
    /// First index with `φ(n) ≥ 2`; terms before it are skipped.
    pub start: Option<u64>,
    /// Running sums of `n / (φ(n)² ln² φ(n))` at powers of two and at the horizon.
    pub partial_sums: Vec<PartialSum>,
    pub last_term: Option<f64>,
}

fn analytic(phi: &PhiSpec) -> Result<(Verdict, String)> {
    use Verdict::*;
    let constant = |c: f64| -> Result<(Verdict, String)> {
        if c <= 1.0 {
            return Err(Error::domain(format!("constant φ = {c} <= 1 makes ln φ non-positive")));
        }
        Ok((Divergent, format!("constant φ = {c}: terms grow like n")))
    };
    Ok(match *phi {
        PhiSpec::Power { c, k } if k == 0.0 => constant(c)?,
        PhiSpec::Power { k, .. } if k > 1.0 => (
            Convergent,
            format!("terms ≍ n^{}/ln² n, exponent below -1", 1.0 - 2.0 * k),
        ),
        PhiSpec::Power { k, .. } if k == 1.0 => (
            Convergent,
            "terms ≍ 1/(n ln² n), summable by the integral test".to_string(),
        ),
        PhiSpec::Power { k, .. } => (
            Divergent,
            format!("terms ≍ n^{}/ln² n, which is not o(1/n)", 1.0 - 2.0 * k),
        ),
        PhiSpec::Geometric { c, b } if b == 1.0 => constant(c)?,
        PhiSpec::Geometric { .. } => (Convergent, "geometric φ: terms decay exponentially".to_string()),
        PhiSpec::Doubly { c, b } if b == 1.0 => constant(c)?,
        PhiSpec::Doubly { c, .. } if c == 1.0 => constant(c)?,
        PhiSpec::Doubly { .. } => (Convergent, "doubly exponential φ: terms decay super-exponentially".to_string()),
        PhiSpec::Table { .. } => (Inconclusive, "tabulated φ: partial sums only".to_string()),
    })
}

/// Decides whether `Σ n / (φ(n)² ln² φ(n))` converges.
///
/// Symbolic forms are classified by comparison with `Σ 1/(n ln² n)`;
/// tabulated forms only get partial sums up to `horizon`.
pub fn series_classifier(phi: &PhiSpec, horizon: u64) -> Result<SeriesReport> {
    phi.validate()?;
    if horizon == 0 {
        return Err(Error::domain("horizon must be >= 1"));
    }
    let (verdict, rule) = analytic(phi)?;
    let end = match phi {
        PhiSpec::Table { values } => horizon.min(values.len() as u64),
        _ => horizon,
    };
    let mut start = None;
    let mut sum = 0.0f64;
    let mut last = None;
    let mut partial_sums = Vec::new();
    for n in 1..=end {
        let l = phi.ln_value(n)?;
        if start.is_none() && l >= std::f64::consts::LN_2 {
            start = Some(n);
        }
        if start.is_some() {
            let term = ((n as f64).ln() - 2.0 * l - 2.0 * l.ln()).exp();
            sum += term;
            last = Some(term);
        }
        if n.is_power_of_two() || n == end {
            partial_sums.push(PartialSum { n, sum });
        }
    }
    if phi.is_table() && start.is_none() {
        return Err(Error::domain("φ(n) < 2 on the whole table"));
    }
    Ok(SeriesReport {
        verdict,
        rule,
        start,
        partial_sums,
        last_term: last,
    })
}
