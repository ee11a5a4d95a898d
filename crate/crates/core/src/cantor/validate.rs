use rug::Float;
use serde::Serialize;

use super::params::{CantorParams, Layout, Slot};
use crate::error::{Error, Result};
use crate::pressure::{cylinder_sum, solve_sn, SnQuery};
use crate::primes::{large_interval_constant, power_interval, PrimeTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condition {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

/// The admissible primes of one block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeBlock {
    pub k: usize,
    /// `n_k`; the primes lie in `[Btilde^{n_k}, 2 Btilde^{n_k}]`.
    pub exponent: u64,
    pub lo: u64,
    pub hi: u64,
    pub count: u64,
    /// Smallest and largest admissible prime.
    pub p1: u64,
    pub p2: u64,
    /// `count · n_k ln Btilde / Btilde^{n_k}`.
    pub density_constant: f64,
    #[serde(skip)]
    pub primes: Vec<u64>,
}

/// Parameters checked against the hypotheses of the construction, with the
/// data the enumerator needs.
#[derive(Clone, Debug)]
pub struct Validated {
    pub params: CantorParams,
    pub max_level: u64,
    pub layout: Layout,
    /// One entry per block whose prime digits occur at positions `<= max_level + 1`.
    pub prime_blocks: Vec<PrimeBlock>,
    /// `Σ_{w ∈ {1..M}^N} Btilde^{-(3s-1)N} q_N(w)^{-2s}`.
    pub normalizer: Float,
    pub finite_alphabet_root: Option<f64>,
    pub conditions: Vec<Condition>,
    pub warnings: Vec<String>,
    pub precision_bits: u32,
}

impl Validated {
    pub fn slot(&self, pos: u64) -> (usize, Slot) {
        self.layout.locate(pos)
    }

    /// Allowed digits at a position, as an inclusive hull `[lo, hi]`.
    pub fn digit_hull(&self, pos: u64) -> (u64, u64) {
        let (b, slot) = self.slot(pos);
        match slot {
            Slot::Free => (1, self.params.m),
            Slot::Filler => (2, 2),
            Slot::Prime => {
                let pb = &self.prime_blocks[b];
                (pb.p1, pb.p2)
            }
        }
    }

    pub fn branching(&self, pos: u64) -> u64 {
        let (b, slot) = self.slot(pos);
        match slot {
            Slot::Free => self.params.m,
            Slot::Filler => 1,
            Slot::Prime => self.prime_blocks[b].count,
        }
    }

    /// Sieve limit needed to list the primes of every audited block.
    pub fn required_limit(params: &CantorParams, max_level: u64) -> Result<u64> {
        required_limit(params, max_level)
    }
}

pub fn required_limit(params: &CantorParams, max_level: u64) -> Result<u64> {
    let layout = Layout::new(params, max_level + 1);
    let mut limit = 2;
    for b in &layout.blocks {
        if b.filler_end < max_level + 1 {
            let exp = u32::try_from(b.filler_end).map_err(|_| Error::Params("n_k too large".into()))?;
            limit = limit.max(power_interval(params.b_tilde, exp)?.1);
        }
    }
    Ok(limit)
}

/// Checks the construction's hypotheses. In audit mode the asymptotic ones
/// become warnings; range errors and an empty or over-dense prime block are
/// always fatal.
pub fn validate_params(
    params: &CantorParams,
    max_level: u64,
    table: &PrimeTable,
    precision_bits: u32,
) -> Result<Validated> {
    params.check_hard()?;
    if max_level == 0 {
        return Err(Error::Params("max_level must be >= 1".into()));
    }
    let prec = precision_bits.max(crate::DEFAULT_PRECISION_BITS);
    let layout = Layout::new(params, max_level + 1);
    let mut conditions = Vec::new();
    let mut push = |name: String, ok: bool, detail: String| {
        conditions.push(Condition {
            name,
            status: if ok { Status::Pass } else { Status::Warn },
            detail,
        });
    };

    let n = u32::try_from(params.n_block).map_err(|_| Error::Params("N too large".into()))?;
    let q = SnQuery::new(n, params.m, params.b_tilde);
    let root = match solve_sn(&q) {
        Ok(r) => Some(r),
        Err(Error::Bracket(_)) => None,
        Err(e) => return Err(e),
    };
    push(
        "s_N(Btilde, M) > s".into(),
        root.is_some_and(|r| r > params.s),
        match root {
            Some(r) => format!("s_N = {r:.6}, s = {}", params.s),
            None => "root outside [1/3, 2]".into(),
        },
    );
    let e20 = 20f64.exp();
    let need = e20.max(2.0 / params.delta + 1.0);
    push(
        "N > max(e^20, 2/delta + 1)".into(),
        params.n_block as f64 > need,
        format!("N = {}, bound = {need:.6e}", params.n_block),
    );
    let normalizer = cylinder_sum(&q, params.s, prec)?;
    push(
        "u > 1".into(),
        normalizer > 1,
        format!("u = {}", normalizer.to_f64()),
    );

    let mut prime_blocks = Vec::new();
    for b in &layout.blocks {
        let nk = b.filler_end;
        let k = b.k;
        let r1 = (params.n_block * b.ell) as f64 / nk as f64;
        push(
            format!("N ell_{k} / n_{k} >= 1 - delta"),
            r1 >= 1.0 - params.delta,
            format!("{r1:.6} vs {:.6}", 1.0 - params.delta),
        );
        let r2 = (nk as f64).ln() / nk as f64;
        push(
            format!("ln n_{k} / n_{k} < delta"),
            r2 < params.delta,
            format!("{r2:.6} vs {}", params.delta),
        );
        push(
            format!("ell_{k} >= 24 N"),
            b.ell >= 24 * params.n_block,
            format!("ell_{k} = {}, 24 N = {}", b.ell, 24 * params.n_block),
        );
        if b.filler_end >= max_level + 1 {
            continue;
        }
        let exp = u32::try_from(nk).map_err(|_| Error::Params(format!("n_{k} too large")))?;
        let (lo, hi) = power_interval(params.b_tilde, exp)?;
        let primes: Vec<u64> = table.primes_between(lo, hi)?.collect();
        if primes.is_empty() {
            return Err(Error::Params(format!(
                "no primes in [{lo}, {hi}] for block {k}; raise Btilde^n_{k}"
            )));
        }
        let c = large_interval_constant(params.b_tilde, exp, table, prec)?;
        if c >= 2.0 {
            return Err(Error::Params(format!(
                "block {k}: prime density constant c = {c} >= 2 on [{lo}, {hi}]"
            )));
        }
        push(format!("c_n_{k}(Btilde) < 2"), true, format!("c = {c:.6}"));
        prime_blocks.push(PrimeBlock {
            k,
            exponent: nk,
            lo,
            hi,
            count: primes.len() as u64,
            p1: primes[0],
            p2: *primes.last().unwrap(),
            density_constant: c,
            primes,
        });
    }

    let warnings: Vec<String> = conditions
        .iter()
        .filter(|c| c.status == Status::Warn)
        .map(|c| format!("{} fails: {}", c.name, c.detail))
        .collect();
    if !params.audit_mode && !warnings.is_empty() {
        return Err(Error::Params(warnings.join("; ")));
    }
    Ok(Validated {
        params: params.clone(),
        max_level,
        layout,
        prime_blocks,
        normalizer,
        finite_alphabet_root: root,
        conditions,
        warnings,
        precision_bits: prec,
    })
}
