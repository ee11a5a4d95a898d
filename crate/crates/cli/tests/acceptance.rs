//! Acceptance suite: one line per criterion, checked at full tolerance.
//!
//! Criteria whose targets are out of reach at desk scale are listed in
//! `KNOWN_RED` together with the clauses that fail. They are still run and
//! still print FAIL; the process only exits non-zero when the outcome differs
//! from that list (or on any failure when `CFML_ACCEPTANCE_STRICT=1`).

use std::collections::BTreeSet;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use cfml_core::cantor::{audit, required_limit, validate_params, CantorParams};
use cfml_core::cf::{cylinder, digit_slice_measure, tail_union_measure, Word};
use cfml_core::measure::{chung_erdos_ratio, mc_measure, scaling_term, series_classifier, EventKind, Verdict};
use cfml_core::pressure::{cylinder_sum, dimension, solve_sn, PhiSpec, SnQuery, SolverBudget};
use cfml_core::primes::{prime_square_tail, sieve};
use cfml_core::{Integer, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_RED: &[(u32, &[&str])] = &[
    (5, &["large-B value within 0.1 of 1/2"]),
    (10, &["Hölder growth factor <= 2"]),
];

struct Check {
    clauses: Vec<(String, bool)>,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            clauses: vec![],
            notes: vec![],
        }
    }

    fn clause(&mut self, name: &str, ok: bool) {
        self.clauses.push((name.to_string(), ok));
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    fn failing(&self) -> BTreeSet<&str> {
        self.clauses.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect()
    }
}

/// Plain sieve of Eratosthenes, independent of the library's segmented one.
fn oracle_primes(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut out = vec![];
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn exact_cylinder_suite(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let (mut det, mut len, mut quasi, mut part) = (true, true, true, true);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=60);
        let d: Vec<u64> = (0..n).map(|_| rng.random_range(1..=1_000_000)).collect();
        let w = Word::new(d.iter().copied()).unwrap();
        for i in 0..=n as isize {
            let v = Integer::from(w.p(i) * w.q(i - 1)) - Integer::from(w.p(i - 1) * w.q(i));
            det &= v == if (i - 1).rem_euclid(2) == 0 { 1 } else { -1 };
        }
        let cyl = cylinder(&w);
        let qq = Integer::from(w.q_n() * Integer::from(w.q_n() + w.q_prev()));
        len &= cyl.length == Rational::from((Integer::from(1), qq)) && Rational::from(&cyl.hi - &cyl.lo) == cyl.length;
        let k = rng.random_range(0..n);
        if k > 0 {
            let u = Word::new(d[..k].iter().copied()).unwrap();
            let v = Word::new(d[k..].iter().copied()).unwrap();
            let prod = Integer::from(u.q_n() * v.q_n());
            quasi &= *w.q_n() >= prod && *w.q_n() <= Integer::from(&prod * 2u32);
        }
        let kk = rng.random_range(1..=50u64);
        let mut total = tail_union_measure(&w, kk + 1).unwrap();
        for m in 1..=kk {
            total += digit_slice_measure(&w, m).unwrap();
        }
        part &= total == cyl.length;
    }
    c.clause("determinant identity", det);
    c.clause("length formula", len);
    c.clause("quasi-multiplicativity in [1, 2]", quasi);
    c.clause("partition identity", part);
}

fn prime_tail(c: &mut Check) {
    let table = sieve(100_000_000).unwrap();
    let mut vals = vec![];
    for m in [1_000u64, 10_000, 100_000, 1_000_000] {
        let r = prime_square_tail(m, &table, 96).unwrap();
        c.note(format!("M={m}: {:.6}", r.normalized));
        vals.push(r.normalized);
    }
    c.clause("normalized tail in [0.5, 2]", vals.iter().all(|v| (0.5..=2.0).contains(v)));
    c.clause(
        "closer to 1 at 1e6 than at 1e3",
        (vals[3] - 1.0).abs() < (vals[0] - 1.0).abs(),
    );
}

fn prime_zeta(c: &mut Check) {
    let reference = 0.452_247_420_0;
    // oracle: plain sieve to 1e7, tail bounded by 1/1e7
    let oracle: f64 = oracle_primes(10_000_000).iter().rev().map(|&p| 1.0 / (p as f64 * p as f64)).sum();
    c.note(format!("oracle {oracle:.10}"));
    c.clause(
        "oracle agrees with reference",
        oracle <= reference + 1e-6 && oracle + 1e-7 >= reference - 1e-6,
    );
    let table = sieve(100_000_000).unwrap();
    let r = prime_square_tail(2, &table, 96).unwrap();
    let (lo, hi) = (r.lower.to_f64(), r.upper.to_f64());
    c.note(format!("bracket [{lo:.10}, {hi:.10}]"));
    c.clause(
        "bracket meets reference ± 1e-6",
        lo <= reference + 1e-6 && hi >= reference - 1e-6,
    );
}

/// `Σ B^{-(3s-1)n} q^{-2s}` by direct enumeration in `f64`.
fn brute_sum(n: u32, m: u64, b: f64, s: f64) -> f64 {
    let count = m.pow(n);
    let mut total = 0.0;
    for idx in 0..count {
        let mut rest = idx;
        let mut digits = vec![];
        for _ in 0..n {
            digits.push(rest % m + 1);
            rest /= m;
        }
        digits.reverse();
        let (mut q0, mut q1) = (0f64, 1f64);
        for a in digits {
            (q0, q1) = (q1, a as f64 * q1 + q0);
        }
        total += q1.powf(-2.0 * s);
    }
    total * b.powf(-(3.0 * s - 1.0) * n as f64)
}

fn sn_solver(c: &mut Check) {
    let mut one_third = true;
    for b in [1.1, 2.0, 10.0] {
        for n in 1..=3 {
            one_third &= (solve_sn(&SnQuery::new(n, 1, b)).unwrap() - 1.0 / 3.0).abs() <= 1e-10;
        }
    }
    c.clause("s_n(B, 1) = 1/3", one_third);
    let s12 = solve_sn(&SnQuery::new(1, 2, 2.0)).unwrap();
    c.note(format!("s_1(2,2) = {s12:.10}"));
    c.clause("s_1(2, 2) in (0.50, 0.55)", s12 > 0.50 && s12 < 0.55);
    let bs = [1.1, 2.0, 4.0, 16.0, 256.0];
    let mut anti = true;
    let mut mono = true;
    for n in 1..=3 {
        let grid: Vec<Vec<f64>> = (1..=8)
            .map(|m| bs.iter().map(|&b| solve_sn(&SnQuery::new(n, m, b)).unwrap()).collect())
            .collect();
        for row in &grid {
            anti &= row.windows(2).all(|w| w[1] <= w[0]);
        }
        for pair in grid.windows(2) {
            mono &= pair[0].iter().zip(&pair[1]).all(|(a, b)| b >= a);
        }
    }
    c.clause("antitone in B", anti);
    c.clause("monotone in M", mono);
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for m in 1..=4 {
            for b in [1.1, 2.0, 16.0] {
                for s in [0.34, 0.5, 0.75, 1.0, 1.7] {
                    let lib = cylinder_sum(&SnQuery::new(n, m, b), s, 128).unwrap().to_f64();
                    let brute = brute_sum(n, m, b, s);
                    worst = worst.max((lib - brute).abs() / brute);
                }
            }
        }
    }
    c.note(format!("max rel err {worst:.2e}"));
    c.clause("cylinder_sum matches brute force to 1e-12", worst <= 1e-12);
}

fn dimension_endpoints(c: &mut Check) {
    let lo = solve_sn(&SnQuery::new(3, 8, 1.05)).unwrap();
    let hi = solve_sn(&SnQuery::new(3, 8, 1e6)).unwrap();
    c.note(format!("s_3(1.05, 8) = {lo:.6}, s_3(1e6, 8) = {hi:.6}"));
    c.clause("difference >= 0.2", lo - hi >= 0.2);
    c.clause("large-B value within 0.1 of 1/2", (hi - 0.5).abs() <= 0.1);
}

fn closed_forms(c: &mut Check) {
    let b = SolverBudget::default();
    let dim = |phi: PhiSpec| dimension(&phi, b, (2, 2)).unwrap().dim;
    c.clause("n^2 -> 1", (dim(PhiSpec::power(1.0, 2.0)) - 1.0).abs() <= 1e-12);
    c.clause(
        "e^(2^n) -> 1/3",
        (dim(PhiSpec::doubly(std::f64::consts::E, 2.0)) - 1.0 / 3.0).abs() <= 1e-12,
    );
    c.clause("2^(2^n) -> 1/3", (dim(PhiSpec::doubly(2.0, 2.0)) - 1.0 / 3.0).abs() <= 1e-12);
    c.clause("10^(3^n) -> 1/4", (dim(PhiSpec::doubly(10.0, 3.0)) - 0.25).abs() <= 1e-12);
}

fn series(c: &mut Check) {
    let v = |phi: PhiSpec| series_classifier(&phi, 1 << 16).unwrap().verdict;
    c.clause("n^2 convergent", v(PhiSpec::power(1.0, 2.0)) == Verdict::Convergent);
    c.clause("sqrt n divergent", v(PhiSpec::power(1.0, 0.5)) == Verdict::Divergent);
    c.clause("n convergent", v(PhiSpec::power(1.0, 1.0)) == Verdict::Convergent);
}

fn mc_scaling(c: &mut Check) {
    let table = sieve(1_000_000).unwrap();
    let phi = PhiSpec::power(1.0, 0.5);
    let mut normalized = vec![];
    for seed in [1u64, 2, 3] {
        for n in [64usize, 256, 1024] {
            let r = mc_measure(EventKind::TwoPrime, &phi, n, 100_000, seed, &table, 80).unwrap();
            normalized.push(r.estimate / scaling_term(&phi, n as u64).unwrap());
        }
    }
    let (lo, hi) = normalized.iter().fold((f64::INFINITY, 0f64), |(a, b), &x| (a.min(x), b.max(x)));
    c.note(format!("normalized range [{lo:.4}, {hi:.4}]"));
    c.clause("normalized estimates in [1/20, 20]", lo >= 0.05 && hi <= 20.0);

    // exact value of P(a_1 prime >= 2) from an independent sieve and exact slices
    // primes past 1e7 add less than 1e-7, far below the interval widths
    let primes = oracle_primes(10_000_000);
    let exact: f64 = primes
        .iter()
        .rev()
        .map(|&p| digit_slice_measure(&Word::empty(), p).unwrap().to_f64())
        .sum();
    let phi1 = PhiSpec::power(2.0, 0.5);
    let covered = (0..100u64)
        .filter(|&seed| {
            let r = mc_measure(EventKind::OnePrime, &phi1, 1, 10_000, 1000 + seed, &table, 80).unwrap();
            r.ci_lo <= exact && exact <= r.ci_hi
        })
        .count();
    c.note(format!("Fprime_1 exact {exact:.8}, covered {covered}/100"));
    c.clause("Fprime_1 inside Wilson CI for >= 90 of 100 seeds", covered >= 90);
}

fn chung_erdos(c: &mut Check) {
    let table = sieve(1_000_000).unwrap();
    let phi = PhiSpec::power(1.0, 0.5);
    let mut runs = vec![];
    for w in [1usize, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(w).build().unwrap();
        let r = pool.install(|| chung_erdos_ratio(&phi, 512, 100_000, 1, &table, 80).unwrap());
        runs.push(r);
    }
    c.note(format!("ratio {}", runs[0].ratio));
    c.clause("ratio > 0", runs[0].ratio > 0.0 && !runs[0].zero_hits);
    c.clause(
        "bit-identical across 1, 4, 8 workers",
        runs.iter().all(|r| r.ratio.to_bits() == runs[0].ratio.to_bits() && r == &runs[0]),
    );
}

fn toy_params() -> CantorParams {
    serde_json::from_str(r#"{"Btilde":2,"M":2,"N":2,"s":0.6,"delta":0.05,"ell":[4],"i_seq":[1]}"#).unwrap()
}

fn cantor(c: &mut Check) {
    let p = toy_params();
    let max_level = 13;
    let table = sieve(required_limit(&p, max_level).unwrap()).unwrap();
    let v = validate_params(&p, max_level, &table, 96).unwrap();
    let nj = v.prime_blocks[0].exponent;
    c.clause("Btilde^n_1 >= 2048", 2f64.powi(nj as i32) >= 2048.0);
    let r = audit(&v, 1).unwrap();
    c.clause("enumeration <= 1e6 nodes per level", r.levels.iter().all(|l| l.visited <= 1_000_000));
    c.clause(
        "mass conservation <= 1e-9",
        r.levels.iter().all(|l| l.mass_error <= 1e-9 && l.child_sum_error.map_or(true, |e| e <= 1e-9)),
    );
    let min_gap = r.levels.iter().filter_map(|l| l.min_gap_ratio).fold(f64::INFINITY, f64::min);
    c.note(format!("min gap ratio {min_gap:.4}"));
    c.clause("gap ratio >= 1/16", min_gap >= 1.0 / 16.0 && r.levels.iter().all(|l| l.overlaps == 0));
    c.clause("Hölder ratios finite", r.levels.iter().all(|l| l.holder_max.is_finite()));
    let growth = r.summary.max_holder_growth;
    c.note(format!("max Hölder growth {growth:.3}"));
    c.clause("Hölder growth factor <= 2", growth <= 2.0);
    let lo = 1u64 << nj;
    let oracle = oracle_primes(2 * lo as usize).iter().filter(|&&q| q >= lo).count() as u128;
    let level = |k: u64| r.levels[k as usize - 1].nodes;
    c.note(format!("#P = {oracle}"));
    c.clause(
        "prime-block multiplicity equals sieve count",
        level(nj + 1) == level(nj) * oracle && level(nj + 2) == level(nj) * oracle * oracle,
    );
}

fn determinism(c: &mut Check) {
    let dir = tempfile::tempdir().unwrap();
    let phi = r#"{"form":"power","c":1,"k":0.5}"#;
    let toy = r#"{"Btilde":2,"M":2,"N":2,"s":0.6,"delta":0.05,"ell":[4],"i_seq":[1],"max_level":13}"#;
    let configs = [
        ("mc", format!(r#"{{"command":"mc-measure","seed":7,"params":{{"kind":"Eprime_n","phi":{phi},"n":[64,256],"samples":20000}}}}"#)),
        ("ce", format!(r#"{{"command":"ce-ratio","seed":7,"params":{{"phi":{phi},"N":256,"samples":20000}}}}"#)),
        ("cantor", format!(r#"{{"command":"cantor-audit","seed":7,"params":{toy}}}"#)),
    ];
    for (name, cfg) in configs {
        let cfg_path = dir.path().join(format!("{name}.json"));
        fs::write(&cfg_path, cfg).unwrap();
        let mut outputs = vec![];
        for w in ["1", "4"] {
            let out = dir.path().join(format!("{name}-{w}.out"));
            let status = Command::new(env!("CARGO_BIN_EXE_cfml"))
                .args(["run", "--config", cfg_path.to_str().unwrap(), "--workers", w, "--out"])
                .arg(&out)
                .output()
                .unwrap();
            c.clause(&format!("{name} exits 0"), status.status.success());
            outputs.push(fs::read(&out).unwrap_or_default());
        }
        c.clause(
            &format!("{name} byte-identical"),
            !outputs[0].is_empty() && outputs[0] == outputs[1],
        );
    }
}

fn main() {
    let strict = std::env::var("CFML_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    type Criterion = (u32, &'static str, u64, fn(&mut Check));
    let criteria: [Criterion; 11] = [
        (1, "exact cylinder suite", 30, exact_cylinder_suite),
        (2, "prime tail normalization", 120, prime_tail),
        (3, "prime zeta check", 120, prime_zeta),
        (4, "s_n solver", 60, sn_solver),
        (5, "dimension endpoints", 120, dimension_endpoints),
        (6, "closed-form dimensions", 1, closed_forms),
        (7, "series classifier", 1, series),
        (8, "Monte Carlo scaling", 300, mc_scaling),
        (9, "Chung-Erdos ratio", 300, chung_erdos),
        (10, "Cantor audit", 300, cantor),
        (11, "determinism", 60, determinism),
    ];
    let mut unexpected = 0;
    for (id, name, budget, run) in criteria {
        let mut c = Check::new();
        let t0 = Instant::now();
        run(&mut c);
        let took = t0.elapsed();
        c.clause(&format!("runtime < {budget} s"), took < Duration::from_secs(budget));
        let failing = c.failing();
        let pass = failing.is_empty();
        let known: BTreeSet<&str> = KNOWN_RED
            .iter()
            .find(|k| k.0 == id)
            .map(|k| k.1.iter().copied().collect())
            .unwrap_or_default();
        let as_expected = failing == known;
        println!(
            "criterion {id:>2} {}: {name} ({:.1} s){}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            if !pass && as_expected { " [known, see notes]" } else { "" }
        );
        for (clause, ok) in &c.clauses {
            if !ok {
                println!("    failed: {clause}");
            }
        }
        for n in &c.notes {
            println!("    {n}");
        }
        if !as_expected || (strict && !pass) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria deviate from the expected outcome");
        std::process::exit(1);
    }
}
