mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CliError, CommandName};

#[derive(Parser)]
#[command(name = "cfml", version, about = "Continued fractions with large prime partial quotients")]
struct Cli {
    /// JSON run configuration; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued-fraction digits and convergents of a rational in (0, 1).
    Expand(ExpandFlags),
    /// Exact endpoints and length of a cylinder.
    Cylinder(CylinderFlags),
    /// Hausdorff dimension for a threshold function.
    Dimension(DimensionFlags),
    /// Finite-alphabet root s_n(B, M).
    Sn(SnFlags),
    /// Bracketed tail sums of 1/p^2.
    PrimeTail(PrimeTailFlags),
    /// Monte Carlo measure of the large-digit events.
    McMeasure(McFlags),
    /// Convergence of the event-probability series.
    Series(SeriesFlags),
    /// Chung-Erdos second-moment ratio.
    CeRatio(CeFlags),
    /// Mass-distribution audit of the Cantor construction.
    CantorAudit(CantorFlags),
    /// Run the command named in --config.
    Run,
}

#[derive(Args, Default)]
struct ExpandFlags {
    /// Rational as p/q or a finite decimal.
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Args, Default)]
struct CylinderFlags {
    #[arg(long, value_delimiter = ',')]
    digits: Option<Vec<u64>>,
    /// Also report the slice and tail measures for this next digit.
    #[arg(long)]
    next_digit: Option<u64>,
}

#[derive(Args, Default)]
struct DimensionFlags {
    /// Threshold function as JSON, e.g. '{"form":"power","c":1,"k":2}'.
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "m")]
    m: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    cap: Option<u128>,
    #[arg(long, value_delimiter = ',', num_args = 2)]
    horizon: Option<Vec<u64>>,
}

#[derive(Args, Default)]
struct SnFlags {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "m")]
    m: Option<u64>,
    #[arg(long = "b")]
    b: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    cap: Option<u128>,
    /// Emit s_k for every k <= n.
    #[arg(long)]
    sequence: bool,
}

#[derive(Args, Default)]
struct PrimeTailFlags {
    #[arg(long = "m", value_delimiter = ',')]
    m: Option<Vec<u64>>,
    #[arg(long)]
    limit: Option<u64>,
}

#[derive(Args, Default)]
struct McFlags {
    /// Eprime_n, E_n or Fprime_n.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    phi: Option<String>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    limit: Option<u64>,
}

#[derive(Args, Default)]
struct SeriesFlags {
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    horizon: Option<u64>,
}

#[derive(Args, Default)]
struct CeFlags {
    #[arg(long)]
    phi: Option<String>,
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    limit: Option<u64>,
}

#[derive(Args, Default)]
struct CantorFlags {
    #[arg(long)]
    btilde: Option<f64>,
    #[arg(long = "m")]
    m: Option<u64>,
    #[arg(long = "n-block")]
    n_block: Option<u64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    ell: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    i_seq: Option<Vec<u64>>,
    #[arg(long)]
    audit_mode: Option<bool>,
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    max_level: Option<u64>,
}

fn flag_overrides(cmd: &Cmd) -> Result<(Option<CommandName>, config::Overrides), CliError> {
    use CommandName as C;
    let mut o = config::Overrides::default();
    let name = match cmd {
        Cmd::Expand(f) => {
            o.set("x", &f.x);
            o.set("max_terms", &f.max_terms);
            C::Expand
        }
        Cmd::Cylinder(f) => {
            o.set("digits", &f.digits);
            o.set("next_digit", &f.next_digit);
            C::Cylinder
        }
        Cmd::Dimension(f) => {
            o.set_json("phi", &f.phi)?;
            o.set("n", &f.n);
            o.set("M", &f.m);
            o.set("tol", &f.tol);
            o.set("cap", &f.cap);
            o.set("horizon", &f.horizon);
            C::Dimension
        }
        Cmd::Sn(f) => {
            o.set("n", &f.n);
            o.set("M", &f.m);
            o.set("B", &f.b);
            o.set("tol", &f.tol);
            o.set("cap", &f.cap);
            if f.sequence {
                o.set("sequence", &Some(true));
            }
            C::Sn
        }
        Cmd::PrimeTail(f) => {
            o.set("M", &f.m);
            o.set("limit", &f.limit);
            C::PrimeTail
        }
        Cmd::McMeasure(f) => {
            o.set("kind", &f.kind);
            o.set_json("phi", &f.phi)?;
            o.set("n", &f.n);
            o.set("samples", &f.samples);
            o.set("limit", &f.limit);
            C::McMeasure
        }
        Cmd::Series(f) => {
            o.set_json("phi", &f.phi)?;
            o.set("horizon", &f.horizon);
            C::Series
        }
        Cmd::CeRatio(f) => {
            o.set_json("phi", &f.phi)?;
            o.set("N", &f.n_max);
            o.set("samples", &f.samples);
            o.set("limit", &f.limit);
            C::CeRatio
        }
        Cmd::CantorAudit(f) => {
            o.set("Btilde", &f.btilde);
            o.set("M", &f.m);
            o.set("N", &f.n_block);
            o.set("s", &f.s);
            o.set("delta", &f.delta);
            o.set("ell", &f.ell);
            o.set("i_seq", &f.i_seq);
            o.set("audit_mode", &f.audit_mode);
            o.set("cap", &f.cap);
            o.set("max_level", &f.max_level);
            C::CantorAudit
        }
        Cmd::Run => return Ok((None, o)),
    };
    Ok((Some(name), o))
}

fn real_main() -> Result<(), CliError> {
    let cli = Cli::parse();
    let (name, overrides) = match &cli.command {
        Some(cmd) => flag_overrides(cmd)?,
        None => (None, config::Overrides::default()),
    };
    let globals = config::Globals {
        out: cli.out,
        seed: cli.seed,
        workers: cli.workers,
        precision_bits: cli.precision_bits,
    };
    let run = config::resolve(cli.config.as_deref(), name, overrides, globals)?;
    if let Some(w) = run.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot start {w} workers: {e}")))?;
    }
    let result = commands::execute(&run)?;
    output::emit(&result.body, run.output_path.as_deref())?;
    eprintln!("{}", result.summary);
    Ok(())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
