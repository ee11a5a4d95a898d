use rand::seq::index;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::model::{MassState, WeightTable};
use super::params::Slot;
use super::validate::Validated;
use crate::cf::{digit_range_endpoints, Word};
use crate::error::{Error, Result};

/// One fundamental interval of the construction.
#[derive(Clone, Debug, PartialEq)]
pub struct MassNode {
    pub digits: Vec<u64>,
    pub level: u64,
    /// Hull of the admissible `(level + 1)`-cylinders inside `I_level(digits)`.
    pub lo: Rational,
    pub hi: Rational,
    pub mass: Float,
    /// Number of true nodes this one stands for (1 unless prime choices were sampled).
    pub weight: Float,
}

/// How many children of each parent a level keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelPlan {
    pub level: u64,
    pub branching: u64,
    pub kept: u64,
    /// Nodes of the full construction at this level.
    pub nodes: u128,
    pub visited: u64,
}

impl LevelPlan {
    pub fn sampled(&self) -> bool {
        self.kept < self.branching
    }
}

/// Levels whose node count exceeds `cap` keep a seeded uniform sample of
/// prime choices per parent; free and filler levels never sample.
pub fn plan_levels(v: &Validated) -> Result<Vec<LevelPlan>> {
    let cap = v.params.cap;
    let mut out = Vec::new();
    let (mut visited, mut nodes) = (1u64, 1u128);
    for level in 1..=v.max_level {
        let br = v.branching(level);
        let kept = if (visited as u128) * (br as u128) <= cap as u128 {
            br
        } else if v.slot(level).1 == Slot::Prime {
            (cap / visited).clamp(1, br)
        } else {
            return Err(Error::CapExceeded {
                what: "Cantor level size",
                requested: visited as u128 * br as u128,
                cap: cap as u128,
            });
        };
        visited *= kept;
        nodes = nodes.saturating_mul(br as u128);
        out.push(LevelPlan {
            level,
            branching: br,
            kept,
            nodes,
            visited,
        });
    }
    Ok(out)
}

/// Digit with positional rank `j` in its family: `x` grows with `a_i` for even
/// `i` and shrinks for odd `i`.
pub(crate) fn family_digit(v: &Validated, pos: u64, j: u64) -> u64 {
    let len = v.branching(pos);
    let asc = if pos % 2 == 0 { j } else { len - 1 - j };
    let (b, slot) = v.slot(pos);
    match slot {
        Slot::Free => asc + 1,
        Slot::Filler => 2,
        Slot::Prime => v.prime_blocks[b].primes[asc as usize],
    }
}

pub(crate) fn family_rank(v: &Validated, pos: u64, a: u64) -> u64 {
    let len = v.branching(pos);
    let (b, slot) = v.slot(pos);
    let asc = match slot {
        Slot::Free => a - 1,
        Slot::Filler => 0,
        Slot::Prime => v.prime_blocks[b].primes.binary_search(&a).expect("admissible prime") as u64,
    };
    if pos % 2 == 0 {
        asc
    } else {
        len - 1 - asc
    }
}

/// Digits of the next node to the left (`right = false`) or right of
/// `digits` among all nodes of the same level.
pub(crate) fn positional_neighbor(v: &Validated, digits: &[u64], right: bool) -> Option<Vec<u64>> {
    let n = digits.len();
    for i in (0..n).rev() {
        let pos = i as u64 + 1;
        let len = v.branching(pos);
        let j = family_rank(v, pos, digits[i]);
        let target = if right {
            (j + 1 < len).then_some(j + 1)
        } else {
            j.checked_sub(1)
        };
        if let Some(t) = target {
            let mut out = digits.to_vec();
            out[i] = family_digit(v, pos, t);
            for (k, d) in out.iter_mut().enumerate().skip(i + 1) {
                let p = k as u64 + 1;
                let edge = if right { 0 } else { v.branching(p) - 1 };
                *d = family_digit(v, p, edge);
            }
            return Some(out);
        }
    }
    None
}

/// Fundamental interval of a node given its word.
pub(crate) fn fundamental_interval(v: &Validated, word: &Word) -> (Rational, Rational) {
    let (lo, hi) = v.digit_hull(word.len() as u64 + 1);
    digit_range_endpoints(word, lo, hi).expect("hull digits are positive")
}

#[derive(Clone)]
pub(crate) struct NodeState {
    pub word: Word,
    pub mass: MassState,
    pub weight: Float,
    pub rank: u64,
}

/// Per-level running statistics.
#[derive(Clone, Debug)]
pub(crate) struct LevelAcc {
    pub visited: u64,
    pub mass_sum: Float,
    pub min_gap_ratio: Option<f64>,
    pub overlaps: u64,
    pub holder_max: f64,
    pub len_min: f64,
    pub len_max: f64,
    pub cyl_min: f64,
    pub cyl_max: f64,
    pub nested_violations: u64,
    pub child_sum_max_rel: Option<f64>,
}

impl LevelAcc {
    fn new(prec: u32) -> Self {
        LevelAcc {
            visited: 0,
            mass_sum: Float::new(prec),
            min_gap_ratio: None,
            overlaps: 0,
            holder_max: 0.0,
            len_min: f64::INFINITY,
            len_max: 0.0,
            cyl_min: f64::INFINITY,
            cyl_max: 0.0,
            nested_violations: 0,
            child_sum_max_rel: None,
        }
    }

    fn merge(&mut self, o: &LevelAcc) {
        self.visited += o.visited;
        self.mass_sum += &o.mass_sum;
        self.min_gap_ratio = opt_min(self.min_gap_ratio, o.min_gap_ratio);
        self.overlaps += o.overlaps;
        self.holder_max = self.holder_max.max(o.holder_max);
        self.len_min = self.len_min.min(o.len_min);
        self.len_max = self.len_max.max(o.len_max);
        self.cyl_min = self.cyl_min.min(o.cyl_min);
        self.cyl_max = self.cyl_max.max(o.cyl_max);
        self.nested_violations += o.nested_violations;
        self.child_sum_max_rel = opt_max(self.child_sum_max_rel, o.child_sum_max_rel);
    }
}

fn opt_min(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn opt_max(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone)]
pub(crate) struct Output {
    pub levels: Vec<LevelAcc>,
    pub nodes: Vec<MassNode>,
}

pub(crate) struct Engine<'a> {
    pub v: &'a Validated,
    pub weights: WeightTable,
    pub plan: Vec<LevelPlan>,
    pub seed: u64,
    pub exponent: f64,
    pub collect: Option<u64>,
    /// Stop at this level (inclusive).
    pub depth: u64,
}

fn fnv1a(digits: &[u64]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for d in digits {
        for b in d.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

impl<'a> Engine<'a> {
    pub fn new(v: &'a Validated, seed: u64, depth: u64, collect: Option<u64>) -> Result<Self> {
        Ok(Engine {
            v,
            weights: WeightTable::new(v)?,
            plan: plan_levels(v)?,
            seed,
            exponent: v.params.holder_exponent(),
            collect,
            depth: depth.min(v.max_level),
        })
    }

    fn prec(&self) -> u32 {
        self.v.precision_bits
    }

    fn empty_output(&self) -> Output {
        Output {
            levels: (0..self.depth).map(|_| LevelAcc::new(self.prec())).collect(),
            nodes: Vec::new(),
        }
    }

    /// Ranks of the children kept under a parent, in positional order.
    fn kept_ranks(&self, parent: &Word, level: u64) -> Vec<u64> {
        let lp = &self.plan[level as usize - 1];
        if !lp.sampled() {
            return (0..lp.branching).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(fnv1a(parent.digits()));
        let mut picked: Vec<u64> = index::sample(&mut rng, lp.branching as usize, lp.kept as usize)
            .into_iter()
            .map(|i| i as u64)
            .collect();
        picked.sort_unstable();
        picked
    }

    fn children(&self, node: &NodeState) -> Vec<NodeState> {
        let level = node.word.len() as u64 + 1;
        let lp = &self.plan[level as usize - 1];
        let ranks = self.kept_ranks(&node.word, level);
        let w = Float::with_val(self.prec(), &node.weight) * lp.branching / lp.kept;
        ranks
            .into_iter()
            .map(|r| {
                let a = family_digit(self.v, level, r);
                NodeState {
                    word: node.word.extended(a).unwrap(),
                    mass: node.mass.step(self.v, &self.weights, level, a),
                    weight: w.clone(),
                    rank: r,
                }
            })
            .collect()
    }

    fn neighbor_interval(&self, node: &NodeState, right: bool) -> Option<(Rational, Rational)> {
        let level = node.word.len() as u64;
        let len = self.v.branching(level);
        let sibling = if right {
            (node.rank + 1 < len).then_some(node.rank + 1)
        } else {
            node.rank.checked_sub(1)
        };
        let word = match sibling {
            Some(r) => {
                let mut w = node.word.clone();
                w.pop();
                w.push(family_digit(self.v, level, r)).unwrap();
                w
            }
            None => Word::new(positional_neighbor(self.v, node.word.digits(), right)?).unwrap(),
        };
        Some(fundamental_interval(self.v, &word))
    }

    fn record(&self, node: &NodeState, parent_j: Option<&(Rational, Rational)>, out: &mut Output) -> (Rational, Rational) {
        let level = node.word.len() as u64;
        let prec = self.prec();
        let acc = &mut out.levels[level as usize - 1];
        let (lo, hi) = fundamental_interval(self.v, &node.word);
        let len = Rational::from(&hi - &lo);
        let mass = node.mass.mass(&self.weights);
        acc.visited += 1;
        acc.mass_sum += Float::with_val(prec, &mass * &node.weight);

        for right in [false, true] {
            if let Some((nlo, nhi)) = self.neighbor_interval(node, right) {
                let gap = if right { Rational::from(&nlo - &hi) } else { Rational::from(&lo - &nhi) };
                if gap < 0 {
                    acc.overlaps += 1;
                }
                let r = (gap / &len).to_f64();
                acc.min_gap_ratio = opt_min(acc.min_gap_ratio, Some(r));
            }
        }

        let len_f = Float::with_val(prec, &len);
        let holder = Float::with_val(prec, &mass / (len_f.clone().ln() * self.exponent).exp()).to_f64();
        acc.holder_max = acc.holder_max.max(holder);

        let qn = node.word.q_n();
        let q2 = Integer::from(qn * qn);
        let mut norm = Float::with_val(prec, &len) * &q2;
        let (b, slot) = self.v.slot(level + 1);
        if slot == Slot::Prime {
            let e = self.v.prime_blocks[b].exponent;
            norm *= Float::with_val(prec, self.v.params.b_tilde).pow(e as u32);
        }
        let norm = norm.to_f64();
        acc.len_min = acc.len_min.min(norm);
        acc.len_max = acc.len_max.max(norm);
        let cyl = Rational::from((qn.clone(), Integer::from(qn + node.word.q_prev()))).to_f64();
        acc.cyl_min = acc.cyl_min.min(cyl);
        acc.cyl_max = acc.cyl_max.max(cyl);

        if let Some((plo, phi)) = parent_j {
            if lo < *plo || hi > *phi {
                acc.nested_violations += 1;
            }
        }
        if self.collect == Some(level) {
            out.nodes.push(MassNode {
                digits: node.word.digits().to_vec(),
                level,
                lo: lo.clone(),
                hi: hi.clone(),
                mass: mass.clone(),
                weight: node.weight.clone(),
            });
        }
        (lo, hi)
    }

    /// Visits `node` and its subtree; nodes at `frontier` are handed back
    /// unvisited instead.
    fn walk(
        &self,
        node: &NodeState,
        parent_j: Option<&(Rational, Rational)>,
        frontier: Option<u64>,
        out: &mut Output,
        pending: &mut Vec<(NodeState, (Rational, Rational))>,
    ) {
        let level = node.word.len() as u64;
        let j = self.record(node, parent_j, out);
        if level >= self.depth {
            return;
        }
        let kids = self.children(node);
        if !self.plan[level as usize].sampled() {
            let prec = self.prec();
            let mut total = Float::new(prec);
            for k in &kids {
                total += k.mass.mass(&self.weights);
            }
            let parent = node.mass.mass(&self.weights);
            let rel = Float::with_val(prec, (total - &parent) / &parent).abs().to_f64();
            let acc = &mut out.levels[level as usize - 1];
            acc.child_sum_max_rel = opt_max(acc.child_sum_max_rel, Some(rel));
        }
        for k in kids {
            if Some(level + 1) == frontier {
                pending.push((k, j.clone()));
            } else {
                self.walk(&k, Some(&j), frontier, out, pending);
            }
        }
    }

    /// Runs the whole tree: a sequential pass down to the first level with at
    /// least 64 nodes, then the subtrees below it in parallel, merged in
    /// positional order.
    pub fn run(&self) -> Output {
        let prec = self.prec();
        let root = NodeState {
            word: Word::empty(),
            mass: MassState::root(prec),
            weight: Float::with_val(prec, 1),
            rank: 0,
        };
        let split = self
            .plan
            .iter()
            .find(|p| p.visited >= 64)
            .map(|p| p.level)
            .filter(|&l| l <= self.depth);
        let mut out = self.empty_output();
        let mut pending = Vec::new();
        for k in self.children(&root) {
            if Some(1) == split {
                pending.push((k, (Rational::new(), Rational::from(1))));
            } else {
                self.walk(&k, None, split, &mut out, &mut pending);
            }
        }
        let parts: Vec<Output> = pending
            .par_iter()
            .map(|(node, pj)| {
                let mut o = self.empty_output();
                self.walk(node, Some(pj), None, &mut o, &mut Vec::new());
                o
            })
            .collect();
        for p in parts {
            for (a, b) in out.levels.iter_mut().zip(&p.levels) {
                a.merge(b);
            }
            out.nodes.extend(p.nodes);
        }
        out
    }
}

/// All nodes of one level in positional order, with masses and intervals.
/// Prime levels above the cap are sampled (see [`plan_levels`]).
pub fn enumerate_level(v: &Validated, level: u64, seed: u64) -> Result<Vec<MassNode>> {
    if level == 0 || level > v.max_level {
        return Err(Error::domain(format!("level must lie in 1..={}", v.max_level)));
    }
    let engine = Engine::new(v, seed, level, Some(level))?;
    Ok(engine.run().nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::params::toy;
    use crate::cantor::validate::{required_limit, validate_params};
    use crate::cf::cylinder;
    use crate::primes::sieve;

    fn toy_validated(max_level: u64) -> Validated {
        let p = toy();
        let table = sieve(required_limit(&p, max_level).unwrap()).unwrap();
        validate_params(&p, max_level, &table, 96).unwrap()
    }

    #[test]
    fn toy_plan() {
        let v = toy_validated(13);
        let plan = plan_levels(&v).unwrap();
        let nodes: Vec<u128> = plan.iter().map(|p| p.nodes).collect();
        assert_eq!(&nodes[..11], &[2, 4, 8, 16, 32, 64, 128, 256, 256, 256, 256]);
        assert_eq!(nodes[11], 65_280);
        assert_eq!(nodes[12], 65_280 * 255);
        assert!(!plan[11].sampled());
        assert_eq!(plan[12].kept, 15);
        assert_eq!(plan[12].visited, 65_280 * 15);
    }

    #[test]
    fn free_level_over_cap_is_refused() {
        let mut p = toy();
        p.cap = 100;
        let table = sieve(required_limit(&p, 8).unwrap()).unwrap();
        let v = validate_params(&p, 8, &table, 96).unwrap();
        assert!(matches!(plan_levels(&v), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn level_masses_sum_to_one_and_are_ordered() {
        let v = toy_validated(12);
        for level in [1, 5, 8, 11, 12] {
            let nodes = enumerate_level(&v, level, 7).unwrap();
            let mut total = Float::new(96);
            for n in &nodes {
                total += &n.mass;
            }
            assert!((total.to_f64() - 1.0).abs() < 1e-20, "level {level}");
            for pair in nodes.windows(2) {
                assert!(pair[0].hi < pair[1].lo, "level {level}");
            }
            for n in &nodes {
                let c = cylinder(&Word::new(n.digits.iter().copied()).unwrap());
                assert!(n.lo >= c.lo && n.hi <= c.hi);
            }
        }
    }

    #[test]
    fn neighbours_match_sorted_order() {
        let v = toy_validated(12);
        let nodes = enumerate_level(&v, 12, 0).unwrap();
        for i in [0usize, 1, 254, 255, 256, 40_000, nodes.len() - 1] {
            let d = &nodes[i].digits;
            let right = positional_neighbor(&v, d, true);
            let left = positional_neighbor(&v, d, false);
            assert_eq!(right.as_ref(), nodes.get(i + 1).map(|n| &n.digits));
            assert_eq!(left.as_ref(), i.checked_sub(1).map(|j| &nodes[j].digits));
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let mut p = toy();
        p.cap = 65_280 * 2;
        let table = sieve(required_limit(&p, 13).unwrap()).unwrap();
        let v = validate_params(&p, 13, &table, 96).unwrap();
        let a = enumerate_level(&v, 13, 5).unwrap();
        let b = enumerate_level(&v, 13, 5).unwrap();
        let c = enumerate_level(&v, 13, 6).unwrap();
        assert_eq!(a.len(), 65_280 * 2);
        assert_eq!(a.iter().map(|n| &n.digits).collect::<Vec<_>>(), b.iter().map(|n| &n.digits).collect::<Vec<_>>());
        assert_ne!(a[0].digits, c[0].digits);
        assert_eq!(a[0].weight, 255.0 / 2.0);
    }
}
