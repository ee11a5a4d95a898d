use rug::Float;

use super::params::Slot;
use super::validate::Validated;
use crate::error::{Error, Result};
use crate::pressure::DEFAULT_WORD_CAP;

/// Normalized weights of the free `N`-letter words and their prefix sums.
///
/// Words are indexed in base `M` with digit `a` stored as `a - 1`.
/// `prefix[len][idx]` is the total weight of the words that start with the
/// `len`-letter prefix `idx`; `prefix[N]` holds the word weights themselves.
#[derive(Clone, Debug)]
pub struct WeightTable {
    pub m: u64,
    pub n: usize,
    prefix: Vec<Vec<Float>>,
}

impl WeightTable {
    pub fn new(v: &Validated) -> Result<Self> {
        let p = &v.params;
        let prec = v.precision_bits;
        let n = p.n_block as usize;
        let count = (p.m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if count > DEFAULT_WORD_CAP {
            return Err(Error::CapExceeded {
                what: "free words M^N",
                requested: count,
                cap: DEFAULT_WORD_CAP,
            });
        }
        let count = count as usize;
        let factor = (Float::with_val(prec, p.b_tilde).ln() * (-(3.0 * p.s - 1.0) * n as f64)).exp();
        let mut raw = Vec::with_capacity(count);
        for idx in 0..count {
            let (mut q0, mut q1) = (0u128, 1u128);
            let mut rest = idx;
            let mut digits = vec![0u64; n];
            for slot in digits.iter_mut().rev() {
                *slot = (rest % p.m as usize) as u64 + 1;
                rest /= p.m as usize;
            }
            for a in digits {
                (q0, q1) = (q1, q1 * a as u128 + q0);
            }
            let lnq = Float::with_val(prec, q1).ln();
            raw.push((lnq * (-2.0 * p.s)).exp() * &factor);
        }
        let mut total = Float::new(prec);
        for w in &raw {
            total += w;
        }
        for w in raw.iter_mut() {
            *w /= &total;
        }
        let mut prefix = vec![raw];
        for _ in 0..n {
            let prev = prefix.last().unwrap();
            let next: Vec<Float> = prev
                .chunks(p.m as usize)
                .map(|c| {
                    let mut s = Float::new(prec);
                    for x in c {
                        s += x;
                    }
                    s
                })
                .collect();
            prefix.push(next);
        }
        prefix.reverse();
        Ok(WeightTable { m: p.m, n, prefix })
    }

    pub fn prefix_weight(&self, len: usize, idx: usize) -> &Float {
        &self.prefix[len][idx]
    }

    pub fn word_weight(&self, idx: usize) -> &Float {
        &self.prefix[self.n][idx]
    }
}

/// Mass bookkeeping along one path of the construction.
#[derive(Clone, Debug)]
pub struct MassState {
    /// Mass at the start of the current `N`-letter group (or of the filler /
    /// prime stretch).
    pub base: Float,
    pub group_idx: usize,
    pub group_len: usize,
}

impl MassState {
    pub fn root(prec: u32) -> Self {
        MassState {
            base: Float::with_val(prec, 1),
            group_idx: 0,
            group_len: 0,
        }
    }

    /// State after appending digit `a` at 1-based position `pos`.
    pub fn step(&self, v: &Validated, w: &WeightTable, pos: u64, a: u64) -> MassState {
        let (b, slot) = v.slot(pos);
        let mut next = self.clone();
        match slot {
            Slot::Free => {
                next.group_idx = self.group_idx * w.m as usize + (a - 1) as usize;
                next.group_len += 1;
                if next.group_len == w.n {
                    next.base *= w.word_weight(next.group_idx);
                    next.group_idx = 0;
                    next.group_len = 0;
                }
            }
            Slot::Filler => {}
            Slot::Prime => {
                next.base /= v.prime_blocks[b].count;
            }
        }
        next
    }

    /// `μ(J_n)` of the node this state belongs to.
    pub fn mass(&self, w: &WeightTable) -> Float {
        let mut m = self.base.clone();
        if self.group_len > 0 {
            m *= w.prefix_weight(self.group_len, self.group_idx);
        }
        m
    }
}

/// `μ(J_n(digits))` from scratch. Digits must form an admissible word.
pub fn mass_of(v: &Validated, w: &WeightTable, digits: &[u64]) -> Result<Float> {
    let mut st = MassState::root(v.precision_bits);
    for (i, &a) in digits.iter().enumerate() {
        let pos = i as u64 + 1;
        if !admissible(v, pos, a) {
            return Err(Error::domain(format!("digit {a} not allowed at position {pos}")));
        }
        st = st.step(v, w, pos, a);
    }
    Ok(st.mass(w))
}

pub fn admissible(v: &Validated, pos: u64, a: u64) -> bool {
    let (b, slot) = v.slot(pos);
    match slot {
        Slot::Free => (1..=v.params.m).contains(&a),
        Slot::Filler => a == 2,
        Slot::Prime => v.prime_blocks[b].primes.binary_search(&a).is_ok(),
    }
}

