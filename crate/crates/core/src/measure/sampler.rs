use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::integer::Order;
use rug::{Assign, Integer};

/// Random bits per draw for an `n`-digit expansion.
///
/// A dyadic rational `X / 2^K` reproduces the digits of the real it
/// approximates while `q_n² ≲ 2^K`, and `log2 q_n ≈ 1.71 n` for typical
/// points, so `K ≈ 4n + 128` leaves a wide margin. Rounded up to whole words.
pub fn draw_bits(n: usize) -> u32 {
    (((4 * n + 128) as u32).div_ceil(64)) * 64
}

/// Uniform dyadic points of `(0, 1)` expanded to a fixed number of partial
/// quotients.
///
/// Sample `i` under seed `s` always reads the ChaCha8 stream `(s, i)`, so a
/// sample's digits never depend on which thread draws it. A draw whose
/// expansion ends early, or that has a partial quotient of 2^64 or more, is
/// discarded and the next block of the same stream is used.
pub struct DigitSampler {
    n: usize,
    words: usize,
    buf: Vec<u64>,
    a: Integer,
    b: Integer,
    q: Integer,
    r: Integer,
    digits: Vec<u64>,
}

impl DigitSampler {
    pub fn new(n: usize) -> Self {
        let words = (draw_bits(n) / 64) as usize;
        DigitSampler {
            n,
            words,
            buf: vec![0; words],
            a: Integer::new(),
            b: Integer::new(),
            q: Integer::new(),
            r: Integer::new(),
            digits: Vec::with_capacity(n),
        }
    }

    /// Digits `a_1..a_n` of sample `index`, and how many draws were discarded.
    pub fn sample(&mut self, seed: u64, index: u64) -> (&[u64], u32) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut redraws = 0;
        loop {
            for w in self.buf.iter_mut() {
                *w = rng.next_u64();
            }
            if self.expand_current() {
                return (&self.digits, redraws);
            }
            redraws += 1;
        }
    }

    fn expand_current(&mut self) -> bool {
        self.b.assign_digits(&self.buf, Order::Lsf);
        if self.b == 0 {
            return false;
        }
        self.a.assign(1);
        self.a <<= (self.words * 64) as u32;
        self.digits.clear();
        while self.digits.len() < self.n {
            if self.b == 0 {
                return false;
            }
            (&mut self.q, &mut self.r).assign(self.a.div_rem_ref(&self.b));
            match self.q.to_u64() {
                Some(d) => self.digits.push(d),
                None => return false,
            }
            std::mem::swap(&mut self.a, &mut self.b);
            std::mem::swap(&mut self.b, &mut self.r);
        }
        true
    }
}
