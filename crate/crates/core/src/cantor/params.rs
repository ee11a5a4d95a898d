use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_true() -> bool {
    true
}

fn default_cap() -> u64 {
    1_000_000
}

/// Parameters of the Cantor construction.
///
/// Digits run in blocks. Block `k` has `ell[k] · n_block` free digits in
/// `1..=m`, then `n_block + i_seq[k]` filler digits equal to 2, then two
/// prime digits in `[b_tilde^{n_k}, 2 b_tilde^{n_k}]`. Missing entries of
/// `ell` default to `24 · n_block`, missing entries of `i_seq` to 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorParams {
    #[serde(rename = "Btilde")]
    pub b_tilde: f64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n_block: u64,
    pub s: f64,
    pub delta: f64,
    #[serde(default)]
    pub ell: Vec<u64>,
    #[serde(default)]
    pub i_seq: Vec<u64>,
    /// Downgrade unattainable hypotheses to warnings.
    #[serde(default = "default_true")]
    pub audit_mode: bool,
    /// Most nodes visited at any one level.
    #[serde(default = "default_cap")]
    pub cap: u64,
}

impl CantorParams {
    pub fn ell_at(&self, k: usize) -> u64 {
        self.ell.get(k - 1).copied().unwrap_or(24 * self.n_block)
    }

    pub fn i_at(&self, k: usize) -> u64 {
        self.i_seq.get(k - 1).copied().unwrap_or(0)
    }

    /// Exponent `s(1-δ) - δ` used for the Hölder ratios.
    pub fn holder_exponent(&self) -> f64 {
        self.s * (1.0 - self.delta) - self.delta
    }

    /// Range checks that hold regardless of audit mode.
    pub fn check_hard(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Params(m));
        if !self.b_tilde.is_finite() || self.b_tilde <= 1.0 {
            return bad(format!("Btilde must be > 1, got {}", self.b_tilde));
        }
        if self.m < 2 {
            return bad(format!("M must be >= 2, got {}", self.m));
        }
        if self.n_block < 1 {
            return bad("N must be >= 1".into());
        }
        if !(self.s > 0.5 && self.s < 1.0) {
            return bad(format!("s must lie in (1/2, 1), got {}", self.s));
        }
        if !(self.delta > 0.0) || !(self.s - self.delta > 0.5) {
            return bad(format!(
                "need delta > 0 and s - delta > 1/2, got s={}, delta={}",
                self.s, self.delta
            ));
        }
        if let Some(k) = self.ell.iter().position(|&l| l == 0) {
            return bad(format!("ell_{} must be >= 1", k + 1));
        }
        if let Some(k) = self.i_seq.iter().position(|&i| i >= self.n_block) {
            return bad(format!("i_{} must be < N = {}", k + 1, self.n_block));
        }
        if self.cap == 0 {
            return bad("cap must be >= 1".into());
        }
        Ok(())
    }
}

/// Positions (1-based) of one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub k: usize,
    pub ell: u64,
    pub i: u64,
    /// Last position of the previous block, `n_{k-1} + 2` (0 for the first).
    pub start: u64,
    /// Last free position, `m_k`.
    pub free_end: u64,
    /// Last filler position, `n_k`; the prime digits sit at `n_k + 1`, `n_k + 2`.
    pub filler_end: u64,
}

impl Block {
    pub fn end(&self) -> u64 {
        self.filler_end + 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Free,
    Filler,
    Prime,
}

/// Block boundaries covering positions `1..=up_to`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Layout {
    pub blocks: Vec<Block>,
}

impl Layout {
    pub fn new(p: &CantorParams, up_to: u64) -> Self {
        let mut blocks = Vec::new();
        let mut start = 0;
        let mut k = 1;
        while start < up_to {
            let ell = p.ell_at(k);
            let i = p.i_at(k);
            let free_end = start + ell * p.n_block;
            let filler_end = free_end + p.n_block + i;
            blocks.push(Block {
                k,
                ell,
                i,
                start,
                free_end,
                filler_end,
            });
            start = filler_end + 2;
            k += 1;
        }
        Layout { blocks }
    }

    /// Block index (0-based) and slot kind of a 1-based position.
    pub fn locate(&self, pos: u64) -> (usize, Slot) {
        let b = self
            .blocks
            .iter()
            .position(|b| pos <= b.end())
            .expect("position beyond layout");
        let blk = &self.blocks[b];
        let slot = if pos <= blk.free_end {
            Slot::Free
        } else if pos <= blk.filler_end {
            Slot::Filler
        } else {
            Slot::Prime
        };
        (b, slot)
    }
}

#[cfg(test)]
pub(crate) fn toy() -> CantorParams {
    CantorParams {
        b_tilde: 2.0,
        m: 2,
        n_block: 2,
        s: 0.6,
        delta: 0.05,
        ell: vec![4],
        i_seq: vec![1],
        audit_mode: true,
        cap: 1_000_000,
    }
}
