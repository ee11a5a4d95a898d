use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest sieve limit accepted by [`sieve`]; about 1.3 GB of bitset and
/// counts. Use [`sieve_with_cap`] to choose a different cap.
pub const DEFAULT_SIEVE_CAP: u64 = 10_000_000_000;

// Words per parallel segment: 2^15 words = 2^21 odd numbers = 256 KiB.
const SEGMENT_WORDS: usize = 1 << 15;

/// Primality table for `2..=limit`.
///
/// Only odd numbers are stored: bit `j` of word `w` stands for
/// `2 * (64 w + j) + 1`. `before[w]` holds the number of odd primes in words
/// `0..w`, so `pi` is one lookup plus one popcount.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    words: Vec<u64>,
    before: Vec<u64>,
}

pub fn sieve(limit: u64) -> Result<PrimeTable> {
    sieve_with_cap(limit, DEFAULT_SIEVE_CAP)
}

pub fn sieve_with_cap(limit: u64, cap: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::domain(format!("sieve limit must be >= 2, got {limit}")));
    }
    if limit > cap {
        return Err(Error::CapExceeded {
            what: "sieve limit",
            requested: limit as u128,
            cap: cap as u128,
        });
    }
    let n_words = word_count(limit);
    let base = small_odd_primes(isqrt(limit));
    let mut words = vec![!0u64; n_words];
    words
        .par_chunks_mut(SEGMENT_WORDS)
        .enumerate()
        .for_each(|(seg, chunk)| sieve_segment(chunk, seg * SEGMENT_WORDS, &base));
    Ok(PrimeTable::from_words(limit, words))
}

fn word_count(limit: u64) -> usize {
    // odd numbers 1..=limit have indices 0..=(limit-1)/2
    (((limit - 1) / 2) / 64 + 1) as usize
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn small_odd_primes(up_to: u64) -> Vec<u64> {
    let n = up_to as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

fn sieve_segment(chunk: &mut [u64], first_word: usize, base: &[u64]) {
    let lo_idx = first_word as u64 * 64;
    let hi_idx = lo_idx + chunk.len() as u64 * 64;
    for &p in base {
        // index of p*p, or of the first odd multiple of p at or after lo_idx
        let mut idx = (p * p - 1) / 2;
        if idx < lo_idx {
            let lo_num = 2 * lo_idx + 1;
            let mut m = lo_num.div_ceil(p) * p;
            if m % 2 == 0 {
                m += p;
            }
            idx = (m - 1) / 2;
        }
        if idx >= hi_idx {
            continue;
        }
        let mut k = idx - lo_idx;
        let end = hi_idx - lo_idx;
        while k < end {
            chunk[(k / 64) as usize] &= !(1u64 << (k % 64));
            k += p;
        }
    }
}

impl PrimeTable {
    pub(crate) fn from_words(limit: u64, mut words: Vec<u64>) -> Self {
        // 1 is not prime
        words[0] &= !1;
        // clear indices past the limit
        let last_idx = (limit - 1) / 2;
        let tail = (last_idx % 64) + 1;
        if tail < 64 {
            *words.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
        let mut before = Vec::with_capacity(words.len());
        let mut acc = 0u64;
        for w in &words {
            before.push(acc);
            acc += w.count_ones() as u64;
        }
        PrimeTable {
            limit,
            words,
            before,
        }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::OutOfTable {
                requested: n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        Ok(match n {
            0 | 1 => false,
            2 => true,
            _ if n % 2 == 0 => false,
            _ => {
                let idx = (n - 1) / 2;
                self.words[(idx / 64) as usize] >> (idx % 64) & 1 == 1
            }
        })
    }

    /// Primality for any `u64`: table lookup up to the limit, Miller–Rabin above.
    pub fn is_prime_any(&self, n: u64) -> bool {
        if n <= self.limit {
            self.is_prime(n).unwrap()
        } else {
            super::is_prime_u64(n)
        }
    }

    /// Prime-counting function `π(x)`.
    pub fn pi(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        if x < 2 {
            return Ok(0);
        }
        let odd = if x % 2 == 1 { x } else { x - 1 };
        let idx = (odd - 1) / 2;
        let w = (idx / 64) as usize;
        let bit = idx % 64;
        let mask = if bit == 63 { !0 } else { (1u64 << (bit + 1)) - 1 };
        Ok(1 + self.before[w] + (self.words[w] & mask).count_ones() as u64)
    }

    pub fn count(&self) -> u64 {
        self.pi(self.limit).unwrap()
    }

    /// Number of primes in the closed range `[lo, hi]`.
    pub fn count_between(&self, lo: u64, hi: u64) -> Result<u64> {
        self.check(hi)?;
        if hi < lo {
            return Ok(0);
        }
        let below = if lo == 0 { 0 } else { self.pi(lo - 1)? };
        Ok(self.pi(hi)? - below)
    }

    /// Ascending iterator over the primes in `[lo, hi]`.
    pub fn primes_between(&self, lo: u64, hi: u64) -> Result<PrimeIter<'_>> {
        self.check(hi)?;
        Ok(PrimeIter::new(self, lo, hi))
    }
}

pub struct PrimeIter<'a> {
    table: &'a PrimeTable,
    emit_two: bool,
    word: usize,
    bits: u64,
    hi: u64,
}

impl<'a> PrimeIter<'a> {
    fn new(table: &'a PrimeTable, lo: u64, hi: u64) -> Self {
        let emit_two = lo <= 2 && hi >= 2;
        let start = lo.max(3);
        let first_odd = if start % 2 == 1 { start } else { start + 1 };
        let idx = (first_odd - 1) / 2;
        let word = (idx / 64) as usize;
        let bits = if word < table.words.len() && hi >= first_odd {
            table.words[word] & (!0u64 << (idx % 64))
        } else {
            0
        };
        PrimeIter {
            table,
            emit_two,
            word,
            bits,
            hi,
        }
    }
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emit_two {
            self.emit_two = false;
            return Some(2);
        }
        loop {
            if self.bits != 0 {
                let j = self.bits.trailing_zeros() as u64;
                self.bits &= self.bits - 1;
                let n = 2 * (self.word as u64 * 64 + j) + 1;
                if n > self.hi {
                    self.bits = 0;
                    self.word = self.table.words.len();
                    return None;
                }
                return Some(n);
            }
            self.word += 1;
            if self.word >= self.table.words.len() || 2 * (self.word as u64 * 64) + 1 > self.hi {
                return None;
            }
            self.bits = self.table.words[self.word];
        }
    }
}
