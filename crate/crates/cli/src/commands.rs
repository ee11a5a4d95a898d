use cfml_core::cantor::{self, CantorParams};
use cfml_core::cf::{cylinder, digit_slice_measure, expand, tail_union_measure, Word};
use cfml_core::measure::{chung_erdos_ratio, mc_measure, scaling_term, series_classifier, EventKind};
use cfml_core::pressure::{dimension, sn_sequence, PhiSpec, SolverBudget, DEFAULT_TOL, DEFAULT_WORD_CAP};
use cfml_core::primes::{load_or_sieve, prime_square_tail};
use cfml_core::{Error, Integer, Rational};
use serde::Deserialize;
use serde_json::Value;

use crate::config::{CliError, CommandName, Run};
use crate::output::{big, json, ratio, real, Outcome, Table};

const DEFAULT_MC_LIMIT: u64 = 1_000_000;
const DEFAULT_TAIL_LIMIT: u64 = 10_000_000;

pub fn execute(run: &Run) -> Result<Outcome, CliError> {
    match run.command {
        CommandName::Expand => run_expand(run),
        CommandName::Cylinder => run_cylinder(run),
        CommandName::Dimension => run_dimension(run),
        CommandName::Sn => run_sn(run),
        CommandName::PrimeTail => run_prime_tail(run),
        CommandName::McMeasure => run_mc(run),
        CommandName::Series => run_series(run),
        CommandName::CeRatio => run_ce(run),
        CommandName::CantorAudit => run_cantor(run),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Exact value of `p/q` or of a finite decimal such as `0.4142`.
fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Core(Error::Domain(format!("cannot read {s:?} as a rational")));
    let s = s.trim();
    if s.contains('/') {
        return s.parse::<Rational>().map_err(|_| bad());
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) || int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let int = if int.is_empty() { "0" } else { int };
    let num: Integer = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
    Ok(Rational::from((num, den)))
}

fn default_max_terms() -> usize {
    64
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpandParams {
    x: String,
    #[serde(default = "default_max_terms")]
    max_terms: usize,
}

fn run_expand(run: &Run) -> Result<Outcome, CliError> {
    let p: ExpandParams = run.params()?;
    let x = parse_rational(&p.x)?;
    let w = expand(&x, p.max_terms)?;
    let mut t = Table::new(&["i", "digit", "p", "q"])?;
    for (i, a) in w.digits().iter().enumerate() {
        let k = i as isize + 1;
        t.row([(i + 1).to_string(), a.to_string(), w.p(k).to_string(), w.q(k).to_string()])?;
    }
    let digits: Vec<String> = w.digits().iter().map(u64::to_string).collect();
    Ok(Outcome {
        body: t.finish()?,
        summary: format!("expand: {} = [{}]", x, digits.join(", ")),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CylinderParams {
    digits: Vec<u64>,
    next_digit: Option<u64>,
}

fn run_cylinder(run: &Run) -> Result<Outcome, CliError> {
    let p: CylinderParams = run.params()?;
    let w = Word::new(p.digits.iter().copied())?;
    let c = cylinder(&w);
    let (slice, tail) = match p.next_digit {
        Some(m) => (
            ratio(&digit_slice_measure(&w, m)?),
            ratio(&tail_union_measure(&w, m)?),
        ),
        None => (String::new(), String::new()),
    };
    let mut t = Table::new(&[
        "digits", "n", "lo", "hi", "closed_left", "length", "q_n", "q_prev", "next_digit", "slice_measure",
        "tail_measure",
    ])?;
    let digits: Vec<String> = p.digits.iter().map(u64::to_string).collect();
    t.row([
        digits.join(" "),
        w.len().to_string(),
        ratio(&c.lo),
        ratio(&c.hi),
        c.closed_left.to_string(),
        ratio(&c.length),
        w.q_n().to_string(),
        w.q_prev().to_string(),
        p.next_digit.map(|m| m.to_string()).unwrap_or_default(),
        slice,
        tail,
    ])?;
    Ok(Outcome {
        body: t.finish()?,
        summary: format!("cylinder: n = {}, length = {}", w.len(), c.length),
    })
}

fn default_n() -> u32 {
    3
}

fn default_m() -> u64 {
    8
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_cap() -> u128 {
    DEFAULT_WORD_CAP
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DimensionParams {
    phi: PhiSpec,
    #[serde(default = "default_n")]
    n: u32,
    #[serde(rename = "M", default = "default_m")]
    m: u64,
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default = "default_cap")]
    cap: u128,
    /// Index range for tabulated φ; defaults to the whole table.
    horizon: Option<(u64, u64)>,
}

fn run_dimension(run: &Run) -> Result<Outcome, CliError> {
    let p: DimensionParams = run.params()?;
    let horizon = p.horizon.unwrap_or(match &p.phi {
        PhiSpec::Table { values } => (2, values.len() as u64),
        _ => (2, 2),
    });
    let budget = SolverBudget {
        n: p.n,
        m: p.m,
        tol: p.tol,
        cap: p.cap,
    };
    let r = dimension(&p.phi, budget, horizon)?;
    Ok(Outcome {
        summary: format!("dimension: {} ({:?})", r.dim, r.method),
        body: json(&r)?,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SnParams {
    n: u32,
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "B")]
    b: f64,
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default = "default_cap")]
    cap: u128,
    #[serde(default)]
    sequence: bool,
}

fn run_sn(run: &Run) -> Result<Outcome, CliError> {
    let p: SnParams = run.params()?;
    let seq = sn_sequence(p.n, p.m, p.b, p.tol, p.cap)?;
    let mut t = Table::new(&["n", "M", "B", "s_n"])?;
    let first = if p.sequence { 0 } else { seq.len() - 1 };
    for (i, s) in seq.iter().enumerate().skip(first) {
        t.row([(i + 1).to_string(), p.m.to_string(), real(p.b), real(*s)])?;
    }
    Ok(Outcome {
        body: t.finish()?,
        summary: format!("sn: s_{}(B={}, M={}) = {}", p.n, p.b, p.m, seq.last().unwrap()),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimeTailParams {
    #[serde(rename = "M")]
    m: OneOrMany<u64>,
    limit: Option<u64>,
}

fn run_prime_tail(run: &Run) -> Result<Outcome, CliError> {
    let p: PrimeTailParams = run.params()?;
    let ms = p.m.into_vec();
    let top = ms.iter().copied().max().unwrap_or(2);
    let limit = p.limit.unwrap_or(DEFAULT_TAIL_LIMIT.max(top.saturating_mul(100)));
    let table = load_or_sieve(limit)?;
    let mut t = Table::new(&["M", "limit", "lower", "upper", "normalized"])?;
    let mut last = None;
    for m in ms {
        let r = prime_square_tail(m, &table, run.precision_bits)?;
        t.row([m.to_string(), limit.to_string(), big(&r.lower), big(&r.upper), real(r.normalized)])?;
        last = Some((m, r.normalized));
    }
    let summary = match last {
        Some((m, v)) => format!("prime-tail: normalized tail at M = {m} is {v}"),
        None => "prime-tail: no M given".into(),
    };
    Ok(Outcome {
        body: t.finish()?,
        summary,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct McParams {
    kind: EventKind,
    phi: PhiSpec,
    n: OneOrMany<usize>,
    samples: u64,
    limit: Option<u64>,
}

fn run_mc(run: &Run) -> Result<Outcome, CliError> {
    let p: McParams = run.params()?;
    let seed = run.seed()?;
    let table = load_or_sieve(p.limit.unwrap_or(DEFAULT_MC_LIMIT))?;
    let mut t = Table::new(&[
        "kind", "n", "phi_n", "samples", "hits", "estimate", "ci_lo", "ci_hi", "scaling", "normalized", "seed",
        "redraws",
    ])?;
    let mut parts = Vec::new();
    for n in p.n.into_vec() {
        let r = mc_measure(p.kind, &p.phi, n, p.samples, seed, &table, run.precision_bits)?;
        let scale = scaling_term(&p.phi, n as u64)?;
        t.row([
            r.kind.name().to_string(),
            n.to_string(),
            real(r.phi_n),
            r.samples.to_string(),
            r.hits.to_string(),
            real(r.estimate),
            real(r.ci_lo),
            real(r.ci_hi),
            real(scale),
            real(r.estimate / scale),
            seed.to_string(),
            r.redraws.to_string(),
        ])?;
        parts.push(format!("n={n}: {}", r.estimate));
    }
    Ok(Outcome {
        body: t.finish()?,
        summary: format!("mc-measure {}: {}", p.kind.name(), parts.join(", ")),
    })
}

fn default_horizon() -> u64 {
    1 << 20
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesParams {
    phi: PhiSpec,
    #[serde(default = "default_horizon")]
    horizon: u64,
}

fn run_series(run: &Run) -> Result<Outcome, CliError> {
    let p: SeriesParams = run.params()?;
    let r = series_classifier(&p.phi, p.horizon)?;
    Ok(Outcome {
        summary: format!("series: {:?} ({})", r.verdict, r.rule),
        body: json(&r)?,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CeParams {
    phi: PhiSpec,
    #[serde(rename = "N")]
    n_max: usize,
    samples: u64,
    limit: Option<u64>,
}

fn run_ce(run: &Run) -> Result<Outcome, CliError> {
    let p: CeParams = run.params()?;
    let seed = run.seed()?;
    let table = load_or_sieve(p.limit.unwrap_or(DEFAULT_MC_LIMIT))?;
    let r = chung_erdos_ratio(&p.phi, p.n_max, p.samples, seed, &table, run.precision_bits)?;
    let mut t = Table::new(&[
        "N", "samples", "seed", "ratio", "zero_hits", "first_moment", "second_moment", "redraws",
    ])?;
    t.row([
        r.n_max.to_string(),
        r.samples.to_string(),
        seed.to_string(),
        real(r.ratio),
        r.zero_hits.to_string(),
        real(r.first_moment),
        real(r.second_moment),
        r.redraws.to_string(),
    ])?;
    Ok(Outcome {
        body: t.finish()?,
        summary: format!("ce-ratio: {}{}", r.ratio, if r.zero_hits { " (no hits)" } else { "" }),
    })
}

fn run_cantor(run: &Run) -> Result<Outcome, CliError> {
    let seed = run.seed()?;
    let mut map = run.params.clone();
    let max_level = match map.remove("max_level") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            serde_json::from_value::<u64>(v).map_err(|e| CliError::Config(format!("max_level: {e}")))?,
        ),
    };
    let params: CantorParams = serde_json::from_value(Value::Object(map))
        .map_err(|e| CliError::Config(format!("cantor-audit params: {e}")))?;
    params.check_hard()?;
    let max_level = max_level.unwrap_or_else(|| cantor::default_max_level(&params));
    let table = load_or_sieve(cantor::required_limit(&params, max_level)?.max(2))?;
    let v = cantor::validate_params(&params, max_level, &table, run.precision_bits)?;
    let report = cantor::audit(&v, seed)?;
    let s = &report.summary;
    Ok(Outcome {
        summary: format!(
            "cantor-audit: {} levels, mass {}, gaps {}, max Hölder growth {:.4}, {} warnings",
            report.levels.len(),
            ok(s.mass_ok),
            ok(s.gaps_ok),
            s.max_holder_growth,
            report.warnings.len()
        ),
        body: json(&report)?,
    })
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}
