use rug::{Integer, Rational};

use super::word::Word;
use crate::error::{Error, Result};

/// Continued-fraction expansion of a rational `x` in `(0, 1)`, truncated to
/// at most `max_terms` partial quotients.
///
/// Runs the Euclidean algorithm on `(den, num)`, which is the Gauss map
/// `x -> {1/x}` in exact arithmetic. A complete (untruncated) expansion
/// never ends in a partial quotient 1 at position >= 2, so it is canonical
/// and evaluates back to `x`. A truncated result is a prefix of the
/// expansion and is returned as is, even when its last digit is 1.
pub fn expand(x: &Rational, max_terms: usize) -> Result<Word> {
    if max_terms == 0 {
        return Err(Error::domain("max_terms must be positive"));
    }
    if *x <= 0 || *x >= 1 {
        return Err(Error::domain(format!("expand needs 0 < x < 1, got {x}")));
    }
    let (num, den) = x.clone().into_numer_denom();
    let mut word = Word::empty();
    let (mut a, mut b) = (den, num);
    while b != 0 && word.len() < max_terms {
        let (quot, rem) = a.div_rem(b.clone());
        let digit = quot
            .to_u64()
            .ok_or_else(|| Error::domain(format!("partial quotient {quot} exceeds u64")))?;
        word.push(digit)?;
        a = b;
        b = rem;
    }
    Ok(word)
}

fn canonical(word: Word) -> Word {
    let d = word.digits();
    if d.len() >= 2 && d[d.len() - 1] == 1 {
        let mut digits = d[..d.len() - 1].to_vec();
        *digits.last_mut().unwrap() += 1;
        Word::new(digits).expect("positive digits")
    } else {
        word
    }
}

/// Rewrites `[.., a, 1]` as `[.., a + 1]`; both denote the same rational.
pub fn canonicalize(word: &Word) -> Word {
    canonical(word.clone())
}

/// Best rational approximation to a machine real with denominator at most
/// `max_den`, via convergents and semiconvergents of its exact binary value.
///
/// The result `r` satisfies `|r - x| < 1 / (q * max_den)` where `q` is its
/// denominator; deep partial quotients of `x` itself are not recoverable this
/// way and callers should expand `r` only to the depth that bound supports.
pub fn rational_approximation(x: f64, max_den: u64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::domain("cannot approximate a non-finite value"));
    }
    if max_den == 0 {
        return Err(Error::domain("max_den must be positive"));
    }
    let exact = Rational::from_f64(x).unwrap();
    let (num, den) = exact.clone().into_numer_denom();
    let (mut a, mut b) = (num, den);
    // (p_{i-1}, q_{i-1}), (p_i, q_i)
    let (mut p0, mut q0) = (Integer::from(0), Integer::from(1));
    let (mut p1, mut q1) = (Integer::from(1), Integer::from(0));
    while b != 0 {
        let (quot, rem) = a.div_rem_floor(b.clone());
        let q2 = Integer::from(&quot * &q1) + &q0;
        if q2 > max_den {
            // best semiconvergent with denominator <= max_den
            let k = (Integer::from(max_den) - &q0) / &q1;
            let ps = Integer::from(&k * &p1) + &p0;
            let qs = Integer::from(&k * &q1) + &q0;
            let semi = Rational::from((ps, qs));
            let conv = Rational::from((p1.clone(), q1.clone()));
            let ds = Rational::from(&semi - &exact).abs();
            let dc = Rational::from(&conv - &exact).abs();
            return Ok(if ds < dc { semi } else { conv });
        }
        let p2 = Integer::from(&quot * &p1) + &p0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        a = b;
        b = rem;
    }
    Ok(exact)
}
