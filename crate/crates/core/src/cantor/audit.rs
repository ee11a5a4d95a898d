use serde::Serialize;

use super::construction::{plan_levels, Engine, LevelPlan};
use super::params::{CantorParams, Slot};
use super::validate::{Condition, PrimeBlock, Validated};
use crate::error::Result;
use crate::pressure::dimension::ser_extended;

/// Band on the normalized length of `J_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthBand {
    /// `generic`: `|J_n| q_n^2`; `prime`: `|J_n| Btilde^{n_k} q_n^2` when the
    /// next digit is prime.
    pub kind: &'static str,
    pub min: f64,
    pub max: f64,
    pub lower: f64,
    pub upper: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelRow {
    pub level: u64,
    pub slot: Slot,
    pub next_slot: Slot,
    /// Nodes in the full construction.
    pub nodes: u128,
    pub visited: u64,
    pub sampled: bool,
    /// Estimated `Σ μ(J_n)`; exact when nothing above was sampled.
    pub total_mass: f64,
    pub mass_error: f64,
    /// Largest `|Σ μ(children) - μ(parent)| / μ(parent)` over parents at this level.
    pub child_sum_error: Option<f64>,
    /// Smallest gap to a positional neighbour divided by `|J_n|`.
    pub min_gap_ratio: Option<f64>,
    pub gap_bound: f64,
    pub gap_ok: bool,
    pub overlaps: u64,
    /// `max μ(J_n) / |J_n|^α`.
    pub holder_max: f64,
    /// `holder_max` over the previous level's value.
    #[serde(serialize_with = "ser_opt")]
    pub holder_growth: Option<f64>,
    pub length_band: LengthBand,
    /// `|I_n| q_n^2` range; always inside `[1/2, 1]`.
    pub cylinder_min: f64,
    pub cylinder_max: f64,
    pub cylinder_ok: bool,
    pub nested_ok: bool,
}

fn ser_opt<S: serde::Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => ser_extended(x, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditSummary {
    pub mass_ok: bool,
    pub gaps_ok: bool,
    pub lengths_ok: bool,
    pub cylinders_ok: bool,
    pub nested_ok: bool,
    pub max_holder_growth: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CantorReport {
    pub params: CantorParams,
    pub max_level: u64,
    pub seed: u64,
    pub holder_exponent: f64,
    pub normalizer: f64,
    pub finite_alphabet_root: Option<f64>,
    pub prime_blocks: Vec<PrimeBlock>,
    pub conditions: Vec<Condition>,
    pub warnings: Vec<String>,
    pub plan: Vec<LevelPlan>,
    pub levels: Vec<LevelRow>,
    pub summary: AuditSummary,
}

/// Generic band for `|J_n| q_n^2`: a free hull covers at least the slice of
/// digit 1 and a filler slice is at least `1/12` of the cylinder.
pub const GENERIC_BAND: (f64, f64) = (1.0 / 12.0, 1.0);
/// Band for `|J_n| Btilde^{n_k} q_n^2` ahead of a prime digit.
pub const PRIME_BAND: (f64, f64) = (1.0 / 64.0, 8.0);
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Walks the construction to `v.max_level` and checks mass conservation,
/// separation, Hölder ratios, lengths and nesting level by level.
pub fn audit(v: &Validated, seed: u64) -> Result<CantorReport> {
    let plan = plan_levels(v)?;
    let engine = Engine::new(v, seed, v.max_level, None)?;
    let out = engine.run();
    let gap_bound = 1.0 / (8.0 * v.params.m as f64);
    let mut levels = Vec::new();
    let mut prev_holder: Option<f64> = None;
    let mut sampled_above = false;
    for (acc, lp) in out.levels.iter().zip(&plan) {
        let level = lp.level;
        sampled_above |= lp.sampled();
        let next_slot = v.slot(level + 1).1;
        let (kind, (lower, upper)) = if next_slot == Slot::Prime {
            ("prime", PRIME_BAND)
        } else {
            ("generic", GENERIC_BAND)
        };
        let total_mass = acc.mass_sum.to_f64();
        let mass_error = (total_mass - 1.0).abs();
        let gap_ok = acc.min_gap_ratio.map_or(true, |g| g >= gap_bound) && acc.overlaps == 0;
        levels.push(LevelRow {
            level,
            slot: v.slot(level).1,
            next_slot,
            nodes: lp.nodes,
            visited: acc.visited,
            sampled: sampled_above,
            total_mass,
            mass_error,
            child_sum_error: acc.child_sum_max_rel,
            min_gap_ratio: acc.min_gap_ratio,
            gap_bound,
            gap_ok,
            overlaps: acc.overlaps,
            holder_max: acc.holder_max,
            holder_growth: prev_holder.map(|p| acc.holder_max / p),
            length_band: LengthBand {
                kind,
                min: acc.len_min,
                max: acc.len_max,
                lower,
                upper,
                ok: acc.len_min >= lower && acc.len_max <= upper,
            },
            cylinder_min: acc.cyl_min,
            cylinder_max: acc.cyl_max,
            cylinder_ok: acc.cyl_min >= 0.5 && acc.cyl_max <= 1.0,
            nested_ok: acc.nested_violations == 0,
        });
        prev_holder = Some(acc.holder_max);
    }
    let summary = AuditSummary {
        mass_ok: levels.iter().all(|r| {
            // sampled levels carry Monte Carlo error; only their children sums are exact
            (r.sampled || r.mass_error <= MASS_TOLERANCE)
                && r.child_sum_error.map_or(true, |e| e <= MASS_TOLERANCE)
        }),
        gaps_ok: levels.iter().all(|r| r.gap_ok),
        lengths_ok: levels.iter().all(|r| r.length_band.ok),
        cylinders_ok: levels.iter().all(|r| r.cylinder_ok),
        nested_ok: levels.iter().all(|r| r.nested_ok),
        max_holder_growth: levels
            .iter()
            .filter_map(|r| r.holder_growth)
            .fold(0.0, f64::max),
    };
    Ok(CantorReport {
        params: v.params.clone(),
        max_level: v.max_level,
        seed,
        holder_exponent: v.params.holder_exponent(),
        normalizer: v.normalizer.to_f64(),
        finite_alphabet_root: v.finite_alphabet_root,
        prime_blocks: v.prime_blocks.clone(),
        conditions: v.conditions.clone(),
        warnings: v.warnings.clone(),
        plan,
        levels,
        summary,
    })
}

/// Smallest gap ratio per level.
pub fn gap_audit(v: &Validated, seed: u64) -> Result<Vec<(u64, Option<f64>)>> {
    Ok(audit(v, seed)?.levels.iter().map(|r| (r.level, r.min_gap_ratio)).collect())
}

/// Largest Hölder ratio per level.
pub fn holder_audit(v: &Validated, seed: u64) -> Result<Vec<(u64, f64)>> {
    Ok(audit(v, seed)?.levels.iter().map(|r| (r.level, r.holder_max)).collect())
}

/// Normalized length band per level.
pub fn length_audit(v: &Validated, seed: u64) -> Result<Vec<(u64, LengthBand)>> {
    Ok(audit(v, seed)?.levels.into_iter().map(|r| (r.level, r.length_band)).collect())
}

/// Default audit depth: two levels past the first block, so the prime
/// digits are included.
pub fn default_max_level(p: &CantorParams) -> u64 {
    let l = super::params::Layout::new(p, 1);
    l.blocks[0].end()
}
