use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-decreasing threshold function `φ: ℕ → ℝ⁺`.
///
/// JSON form: `{"form": "power", "c": 1, "k": 2}`,
/// `{"form": "geometric", "c": 1, "b": 2}`, `{"form": "doubly", "c": 2.718281828, "b": 2}`
/// or `{"form": "table", "values": [..]}` where `values[i]` is `φ(i + 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase", deny_unknown_fields)]
pub enum PhiSpec {
    /// `c · n^k`
    Power { c: f64, k: f64 },
    /// `c · bⁿ`
    Geometric { c: f64, b: f64 },
    /// `c^(bⁿ)`
    Doubly { c: f64, b: f64 },
    Table { values: Vec<f64> },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be a positive finite real, got {v}")))
    }
}

impl PhiSpec {
    pub fn power(c: f64, k: f64) -> Self {
        PhiSpec::Power { c, k }
    }

    pub fn geometric(c: f64, b: f64) -> Self {
        PhiSpec::Geometric { c, b }
    }

    pub fn doubly(c: f64, b: f64) -> Self {
        PhiSpec::Doubly { c, b }
    }

    /// Checks parameter ranges and monotonicity.
    pub fn validate(&self) -> Result<()> {
        match *self {
            PhiSpec::Power { c, k } => {
                positive("c", c)?;
                if !k.is_finite() || k < 0.0 {
                    return Err(Error::domain(format!("exponent k must be >= 0, got {k}")));
                }
            }
            PhiSpec::Geometric { c, b } => {
                positive("c", c)?;
                positive("b", b)?;
                if b < 1.0 {
                    return Err(Error::domain(format!("ratio b must be >= 1, got {b}")));
                }
            }
            PhiSpec::Doubly { c, b } => {
                positive("c", c)?;
                positive("b", b)?;
                if c < 1.0 || b < 1.0 {
                    return Err(Error::domain(format!(
                        "c^(b^n) needs c >= 1 and b >= 1 to be non-decreasing, got c={c}, b={b}"
                    )));
                }
            }
            PhiSpec::Table { ref values } => {
                if values.is_empty() {
                    return Err(Error::domain("table must not be empty"));
                }
                for &v in values {
                    positive("table value", v)?;
                }
                if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
                    return Err(Error::domain(format!(
                        "table decreases between n={} and n={}",
                        i + 1,
                        i + 2
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_table(&self) -> bool {
        matches!(self, PhiSpec::Table { .. })
    }

    fn table_value(values: &[f64], n: u64) -> Result<f64> {
        if n == 0 || n as usize > values.len() {
            return Err(Error::domain(format!(
                "n={n} outside the table horizon 1..={}",
                values.len()
            )));
        }
        Ok(values[n as usize - 1])
    }

    /// `ln φ(n)`, which stays finite where `φ(n)` itself overflows.
    pub fn ln_value(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::domain("φ is defined for n >= 1"));
        }
        let nf = n as f64;
        Ok(match *self {
            PhiSpec::Power { c, k } => c.ln() + k * nf.ln(),
            PhiSpec::Geometric { c, b } => c.ln() + nf * b.ln(),
            PhiSpec::Doubly { c, b } => b.powf(nf) * c.ln(),
            PhiSpec::Table { ref values } => Self::table_value(values, n)?.ln(),
        })
    }

    /// `φ(n)` in double precision; may be `+∞` for the doubly exponential form.
    pub fn value(&self, n: u64) -> Result<f64> {
        match *self {
            PhiSpec::Table { ref values } => Self::table_value(values, n),
            PhiSpec::Power { c, k } if n > 0 => Ok(c * (n as f64).powf(k)),
            _ => Ok(self.ln_value(n)?.exp()),
        }
    }

    /// `φ(n)` at the given precision.
    pub fn value_float(&self, n: u64, precision_bits: u32) -> Result<Float> {
        if n == 0 {
            return Err(Error::domain("φ is defined for n >= 1"));
        }
        let prec = precision_bits;
        Ok(match *self {
            PhiSpec::Power { c, k } => {
                let base = Float::with_val(prec, n);
                Float::with_val(prec, c) * base.pow(Float::with_val(prec, k))
            }
            PhiSpec::Geometric { c, b } => {
                Float::with_val(prec, c) * Float::with_val(prec, b).pow(Float::with_val(prec, n))
            }
            PhiSpec::Doubly { c, b } => {
                let e = Float::with_val(prec, b).pow(Float::with_val(prec, n));
                Float::with_val(prec, c).pow(e)
            }
            PhiSpec::Table { ref values } => Float::with_val(prec, Self::table_value(values, n)?),
        })
    }

    /// Smallest integer `t` with `a ≥ φ(n) ⇔ a ≥ t` for integers `a`;
    /// `None` when `t` exceeds `u64::MAX`.
    pub fn integer_threshold(&self, n: u64, precision_bits: u32) -> Result<Option<u64>> {
        // enough bits that a value within 2^-60 of an integer still rounds correctly
        let v = self.value_float(n, precision_bits.max(128))?;
        if v.is_infinite() {
            return Ok(None);
        }
        if v.is_nan() {
            return Err(Error::NonFinite(format!("φ({n}) is NaN")));
        }
        let t = v.ceil().to_integer().unwrap_or_else(|| Integer::from(0));
        Ok(if t <= 0 { Some(0) } else { t.to_u64() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(PhiSpec::power(1.0, 2.0).value(7).unwrap(), 49.0);
        assert_eq!(PhiSpec::geometric(1.0, 2.0).value(10).unwrap(), 1024.0);
        let d = PhiSpec::doubly(std::f64::consts::E, 2.0);
        assert!((d.ln_value(3).unwrap() - 8.0).abs() < 1e-12);
        assert!(d.value(20).unwrap().is_infinite());
        assert!((d.ln_value(20).unwrap() - (1u64 << 20) as f64).abs() < 1e-3);
        let t = PhiSpec::Table { values: vec![1.0, 2.0, 2.0, 5.0] };
        assert_eq!(t.value(4).unwrap(), 5.0);
        assert!(t.value(5).is_err());
        assert!(t.value(0).is_err());
    }

    #[test]
    fn thresholds() {
        let root = PhiSpec::power(1.0, 0.5);
        assert_eq!(root.integer_threshold(64, 80).unwrap(), Some(8));
        assert_eq!(root.integer_threshold(65, 80).unwrap(), Some(9));
        assert_eq!(root.integer_threshold(1024, 80).unwrap(), Some(32));
        assert_eq!(PhiSpec::power(1e9, 0.0).integer_threshold(1, 80).unwrap(), Some(1_000_000_000));
        assert_eq!(PhiSpec::doubly(2.0, 2.0).integer_threshold(7, 80).unwrap(), None);
        assert_eq!(PhiSpec::doubly(2.0, 2.0).integer_threshold(5, 80).unwrap(), Some(1 << 32));
    }

    #[test]
    fn validation() {
        assert!(PhiSpec::power(1.0, 2.0).validate().is_ok());
        assert!(PhiSpec::power(0.0, 2.0).validate().is_err());
        assert!(PhiSpec::power(1.0, -1.0).validate().is_err());
        assert!(PhiSpec::geometric(1.0, 0.5).validate().is_err());
        assert!(PhiSpec::doubly(0.5, 2.0).validate().is_err());
        assert!(PhiSpec::Table { values: vec![3.0, 2.0] }.validate().is_err());
        assert!(PhiSpec::Table { values: vec![] }.validate().is_err());
    }

    #[test]
    fn json_shape() {
        let p: PhiSpec = serde_json::from_str(r#"{"form":"doubly","c":2.718281828,"b":2}"#).unwrap();
        assert_eq!(p, PhiSpec::doubly(2.718281828, 2.0));
        let bad = serde_json::from_str::<PhiSpec>(r#"{"form":"power","c":1,"k":2,"x":0}"#);
        assert!(bad.is_err());
    }
}
