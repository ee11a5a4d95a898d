use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// A finite sequence of partial quotients `a_1..a_n` together with its
/// convergents `p_i/q_i` for `i = -1..=n`.
///
/// The convergents follow `p_{-1} = 1, q_{-1} = 0, p_0 = 0, q_0 = 1` and
/// `p_{i+1} = a_{i+1} p_i + p_{i-1}` (same for `q`). The empty word stands for
/// the whole interval `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    digits: Vec<u64>,
    // index i + 1 holds p_i / q_i
    p: Vec<Integer>,
    q: Vec<Integer>,
}

/// One convergent `p_i / q_i`, kept as an unreduced integer pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: Integer,
    pub q: Integer,
}

impl Default for Word {
    fn default() -> Self {
        Word::empty()
    }
}

impl Word {
    pub fn empty() -> Self {
        Word {
            digits: Vec::new(),
            p: vec![Integer::from(1), Integer::from(0)],
            q: vec![Integer::from(0), Integer::from(1)],
        }
    }

    pub fn new(digits: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut w = Word::empty();
        for a in digits {
            w.push(a)?;
        }
        Ok(w)
    }

    pub fn push(&mut self, a: u64) -> Result<()> {
        if a == 0 {
            return Err(Error::domain("partial quotients must be >= 1"));
        }
        let k = self.p.len();
        let p = Integer::from(&self.p[k - 1] * a) + &self.p[k - 2];
        let q = Integer::from(&self.q[k - 1] * a) + &self.q[k - 2];
        self.p.push(p);
        self.q.push(q);
        self.digits.push(a);
        Ok(())
    }

    /// Removes and returns the last digit.
    pub fn pop(&mut self) -> Option<u64> {
        let a = self.digits.pop()?;
        self.p.pop();
        self.q.pop();
        Some(a)
    }

    /// Returns a copy of `self` with `a` appended.
    pub fn extended(&self, a: u64) -> Result<Self> {
        let mut w = self.clone();
        w.push(a)?;
        Ok(w)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &a in other.digits() {
            w.push(a).expect("digits of a word are positive");
        }
        w
    }

    /// The word with the `k`-th digit (1-based) deleted.
    pub fn without(&self, k: usize) -> Result<Word> {
        if k == 0 || k > self.len() {
            return Err(Error::domain(format!("index {k} outside 1..={}", self.len())));
        }
        Word::new(
            self.digits
                .iter()
                .enumerate()
                .filter(|&(i, _)| i + 1 != k)
                .map(|(_, &a)| a),
        )
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `p_i` for `-1 <= i <= n`.
    pub fn p(&self, i: isize) -> &Integer {
        &self.p[(i + 1) as usize]
    }

    /// `q_i` for `-1 <= i <= n`.
    pub fn q(&self, i: isize) -> &Integer {
        &self.q[(i + 1) as usize]
    }

    pub fn p_n(&self) -> &Integer {
        self.p.last().unwrap()
    }

    pub fn q_n(&self) -> &Integer {
        self.q.last().unwrap()
    }

    pub fn p_prev(&self) -> &Integer {
        &self.p[self.p.len() - 2]
    }

    pub fn q_prev(&self) -> &Integer {
        &self.q[self.q.len() - 2]
    }

    /// Value of the finite continued fraction, `p_n / q_n`.
    pub fn evaluate(&self) -> Rational {
        Rational::from((self.p_n().clone(), self.q_n().clone()))
    }

    /// `(p_n + p_{n-1} t) / (q_n + q_{n-1} t)`: the point of the cylinder whose
    /// image under the `n`-th iterate of the Gauss map is `t`.
    pub fn mobius(&self, t: &Rational) -> Rational {
        let num = Rational::from(self.p_prev() * t) + self.p_n();
        let den = Rational::from(self.q_prev() * t) + self.q_n();
        num / den
    }
}

/// Convergents `(p_i, q_i)` for `i = 1..=n`.
pub fn convergents(w: &Word) -> Result<Vec<Convergent>> {
    if w.is_empty() {
        return Err(Error::domain("convergents of an empty word"));
    }
    Ok((1..=w.len() as isize)
        .map(|i| Convergent {
            p: w.p(i).clone(),
            q: w.q(i).clone(),
        })
        .collect())
}
