use serde::{Deserialize, Serialize};

use crate::cf::Word;
use crate::error::{Error, Result};
use crate::pressure::PhiSpec;
use crate::primes::PrimeTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    /// `a_n` and some earlier `a_k` are both primes `≥ φ(n)`.
    #[serde(rename = "Eprime_n")]
    TwoPrime,
    /// `a_n` and some earlier `a_k` are both `≥ φ(n)`.
    #[serde(rename = "E_n")]
    Two,
    /// `a_n` is a prime `≥ φ(n)`.
    #[serde(rename = "Fprime_n")]
    OnePrime,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::TwoPrime => "Eprime_n",
            EventKind::Two => "E_n",
            EventKind::OnePrime => "Fprime_n",
        }
    }
}

impl std::str::FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Eprime_n" => Ok(EventKind::TwoPrime),
            "E_n" => Ok(EventKind::Two),
            "Fprime_n" => Ok(EventKind::OnePrime),
            _ => Err(Error::domain(format!(
                "unknown event kind {s:?}; expected Eprime_n, E_n or Fprime_n"
            ))),
        }
    }
}

/// Event test on raw digits against an integer threshold.
///
/// `threshold = None` means `φ(n)` exceeds every 64-bit digit.
pub fn event_holds(
    digits: &[u64],
    n: usize,
    kind: EventKind,
    threshold: Option<u64>,
    table: &PrimeTable,
) -> bool {
    let Some(t) = threshold else {
        return false;
    };
    let last = digits[n - 1];
    let big = |a: u64| a >= t;
    let big_prime = |a: u64| a >= t && table.is_prime_any(a);
    match kind {
        EventKind::OnePrime => big_prime(last),
        EventKind::Two => big(last) && digits[..n - 1].iter().any(|&a| big(a)),
        EventKind::TwoPrime => big_prime(last) && digits[..n - 1].iter().any(|&a| big_prime(a)),
    }
}

pub fn check_event(w: &Word, kind: EventKind, phi: &PhiSpec, n: usize, table: &PrimeTable) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain("event index n must be >= 1"));
    }
    if w.len() < n {
        return Err(Error::domain(format!("word has {} digits, event needs {n}", w.len())));
    }
    let t = phi.integer_threshold(n as u64, crate::DEFAULT_PRECISION_BITS)?;
    Ok(event_holds(w.digits(), n, kind, t, table))
}
