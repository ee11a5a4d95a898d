use rug::{Integer, Rational};

use super::word::Word;
use crate::error::{Error, Result};

/// The set of `x` in `[0, 1)` whose expansion starts with `word`.
///
/// `lo`/`hi` are the exact endpoints. For even `n` the cylinder is
/// `[p_n/q_n, (p_n+p_{n-1})/(q_n+q_{n-1}))`, for odd `n` the mirror image
/// `((p_n+p_{n-1})/(q_n+q_{n-1}), p_n/q_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub word: Word,
    pub lo: Rational,
    pub hi: Rational,
    /// `true` iff `n` is even, i.e. the left endpoint belongs to the set.
    pub closed_left: bool,
    pub length: Rational,
}

impl Cylinder {
    pub fn contains(&self, x: &Rational) -> bool {
        let left = if self.closed_left {
            *x >= self.lo
        } else {
            *x > self.lo
        };
        let right = if self.closed_left {
            *x < self.hi
        } else {
            *x <= self.hi
        };
        left && right
    }
}

pub fn cylinder(word: &Word) -> Cylinder {
    let a = word.evaluate();
    let b = Rational::from((
        Integer::from(word.p_n() + word.p_prev()),
        Integer::from(word.q_n() + word.q_prev()),
    ));
    let closed_left = word.len() % 2 == 0;
    let (lo, hi) = if closed_left { (a, b) } else { (b, a) };
    let length = Rational::from((
        Integer::from(1),
        Integer::from(word.q_n() * Integer::from(word.q_n() + word.q_prev())),
    ));
    Cylinder {
        word: word.clone(),
        lo,
        hi,
        closed_left,
        length,
    }
}

fn abs_diff(a: Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

/// Exact Lebesgue measure of `{x in I_n(w) : a_{n+1}(x) >= m}`.
///
/// Evaluated from the Möbius endpoints `h(1/m)` and `h(0) = p_n/q_n`; equals
/// `1 / (q_n (m q_n + q_{n-1}))`.
pub fn tail_union_measure(word: &Word, m: u64) -> Result<Rational> {
    if m == 0 {
        return Err(Error::domain("tail threshold must be >= 1"));
    }
    let edge = word.mobius(&Rational::from((1, m)));
    Ok(abs_diff(edge, &word.evaluate()))
}

/// Exact Lebesgue measure of `{x in I_n(w) : a_{n+1}(x) = m}`, i.e.
/// `|h(1/m) - h(1/(m+1))|`.
pub fn digit_slice_measure(word: &Word, m: u64) -> Result<Rational> {
    if m == 0 {
        return Err(Error::domain("digit must be >= 1"));
    }
    let a = word.mobius(&Rational::from((1, m)));
    let b = word.mobius(&Rational::from((Integer::from(1), Integer::from(m) + 1)));
    Ok(abs_diff(a, &b))
}

/// Exact measure of `{x in I_n(w) : lo <= a_{n+1}(x) <= hi}`; this set is an
/// interval, the hull of the corresponding `(n+1)`-cylinders.
pub fn digit_range_measure(word: &Word, lo: u64, hi: u64) -> Result<Rational> {
    let (a, b) = digit_range_endpoints(word, lo, hi)?;
    Ok(b - a)
}

/// Ordered endpoints of `{x in I_n(w) : lo <= a_{n+1}(x) <= hi}`.
pub fn digit_range_endpoints(word: &Word, lo: u64, hi: u64) -> Result<(Rational, Rational)> {
    if lo == 0 || hi < lo {
        return Err(Error::domain(format!("invalid digit range [{lo}, {hi}]")));
    }
    let a = word.mobius(&Rational::from((1, lo)));
    let b = word.mobius(&Rational::from((Integer::from(1), Integer::from(hi) + 1)));
    Ok(if a <= b { (a, b) } else { (b, a) })
}
