//! `schur-ample`: bounds, vanishing and seeded audits from the command line.
//!
//! Exit codes: 0 pass, 1 counterexample found, 2 usage or input error.

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Deserialize;
use serde_json::{json, Value};

use schur_ample::bounds::{
    corollary_bound, corollary_route, coup_product_plan, decompose_degree, hyperbolicity_bounds,
    nakayama_m, theorem_params, BoundVariant, LedgerOverrides,
};
use schur_ample::partition::{br_vanishes, optimality_audit, Partition};
use schur_ample::poly::{Fp, PrimeField, Rational, Scalar};
use schur_ample::universal::{Instance, StratumLabel, DEFAULT_BUDGET};
use schur_ample::verify::{self, SuiteReport};

#[derive(Parser, Debug)]
#[command(name = "schur-ample", version, about = "Schur-power ampleness toolkit")]
struct Cli {
    /// Run seed; falls back to SCHUR_AMPLE_SEED, then the config file, then 0.
    #[arg(long, global = true, env = "SCHUR_AMPLE_SEED")]
    seed: Option<u64>,
    /// `Q`, `p` (the default prime 2^61-1) or an explicit prime.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Bound on numerators and denominators of random coefficients.
    #[arg(long, global = true)]
    height: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// TOML file with defaults for the options above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Effective degree bound for S^λ Ω_X on a complete intersection.
    Bounds {
        #[arg(value_name = "N")]
        n: u32,
        c: u32,
        lambda: String,
        /// Also report the bound with exponent c(k+1).
        #[arg(long)]
        intro_variant: bool,
        /// Also report the theorem's parameter ledger.
        #[arg(long)]
        ledger: bool,
        /// Degrees d_1,…,d_c to decompose (default: the bound, c times).
        #[arg(long)]
        degrees: Option<String>,
    },
    /// Seeded audits; exit 1 when a counterexample is found.
    Verify(VerifyArgs),
    /// Vanishing predicate λ*₁ + ⋯ + λ*_c < N − c.
    Vanishing {
        #[arg(value_name = "N")]
        n: u32,
        c: u32,
        lambda: String,
        /// Check mλ for c ≤ m ≤ M (sub-critical regime only).
        #[arg(long, value_name = "M")]
        audit: Option<u32>,
    },
    /// Write d₀ = p(d+1) + q(d+2).
    Decompose { d: String, d0: String },
    /// The hyperbolicity degree bounds d_N and d_N′.
    Hyperbolicity {
        #[arg(value_name = "N")]
        n: u32,
    },
    /// ⌈∏δ_j^{k+1}/δ_i⌉ for the comma list δ and 1-based i.
    Nakayama { deltas: String, k: u32, i: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Star,
    RankOracle,
    Cocycle,
    #[value(name = "psi-in-Y")]
    PsiInY,
    MinorTransition,
    Dims,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Grid {
    Small,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Defaults to k+1.
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long)]
    eps: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    /// Number of sections in the cocycle check.
    #[arg(long)]
    l: Option<u32>,
    /// Samples; frames per cell for rank-oracle, per stratum for star.
    #[arg(long)]
    samples: Option<usize>,
    /// Parameter points for star.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum)]
    grid: Option<Grid>,
    /// Use a = 0 instead of random parameters.
    #[arg(long)]
    zero_params: bool,
    /// Restrict star to M_I (comma list of vanishing coordinates).
    #[arg(long = "I")]
    i_set: Option<String>,
    /// Together with --I, restrict star to Σ(I, I′).
    #[arg(long = "Iprime")]
    i_prime: Option<String>,
    /// Maximal number of entries of an explicit φ_η matrix.
    #[arg(long)]
    budget: Option<usize>,
}

/// Defaults read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    field: Option<String>,
    height: Option<u64>,
    format: Option<Format>,
    samples: Option<usize>,
    budget: Option<usize>,
}

#[derive(Clone, Debug)]
enum Field {
    Q,
    P(PrimeField),
}

#[derive(Clone, Debug)]
struct RunConfig {
    seed: u64,
    field: Field,
    height: u64,
    format: Format,
    samples: Option<usize>,
    budget: usize,
}

enum Failure {
    Input(String),
    Counterexample(Value),
}

type Outcome = Result<Value, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn parse_field(s: &str) -> Result<Field, Failure> {
    match s {
        "Q" | "q" => Ok(Field::Q),
        "p" => Ok(Field::P(PrimeField::default())),
        other => {
            let p: u64 = other.parse().map_err(|_| {
                Failure::Input(format!("field must be Q, p or a prime, got {other}"))
            })?;
            Ok(Field::P(PrimeField::new(p).map_err(input)?))
        }
    }
}

fn run_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let field = cli
        .field
        .clone()
        .or(file.field)
        .unwrap_or_else(|| "Q".into());
    Ok(RunConfig {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        field: parse_field(&field)?,
        height: cli.height.or(file.height).unwrap_or(100),
        format: cli.format.or(file.format).unwrap_or(Format::Json),
        samples: file.samples,
        budget: file.budget.unwrap_or(DEFAULT_BUDGET),
    })
}

fn parse_lambda(s: &str) -> Result<Partition, Failure> {
    Partition::from_str(s).map_err(input)
}

fn parse_big(s: &str) -> Result<BigUint, Failure> {
    BigUint::from_str(s.trim()).map_err(|_| Failure::Input(format!("not a natural number: {s}")))
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::Input(format!("bad list entry {t:?}")))
        })
        .collect()
}

fn strings(v: &[BigUint]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn cmd_bounds(
    n: u32,
    c: u32,
    lambda: &str,
    intro: bool,
    ledger: bool,
    degrees: Option<&str>,
) -> Outcome {
    let lambda = parse_lambda(lambda)?;
    let bound = corollary_bound(n, c, &lambda, BoundVariant::Corollary).map_err(input)?;
    let route = corollary_route(n, c, &lambda).map_err(input)?;
    let ds = match degrees {
        Some(s) => parse_list::<String>(s)?
            .iter()
            .map(|d| parse_big(d))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![bound.clone(); c as usize],
    };
    let plan = coup_product_plan(n, c, &lambda, &ds).map_err(input)?;
    let mut out = json!({
        "N": n,
        "c": c,
        "lambda": lambda,
        "primitive_lambda": route.primitive,
        "k": lambda.len(),
        "weight": route.weight,
        "variant": "corollary",
        "bound": bound.to_string(),
        "route": route,
        "plan": plan.entries,
    });
    if intro {
        let b = corollary_bound(n, c, &lambda, BoundVariant::IntroVariant).map_err(input)?;
        out["intro-variant"] = json!({ "variant": "intro-variant", "bound": b.to_string() });
    }
    if ledger {
        let l = theorem_params(n, c, &lambda, &LedgerOverrides::default()).map_err(input)?;
        out["ledger"] = serde_json::to_value(&l).map_err(input)?;
    }
    Ok(out)
}

fn cmd_vanishing(n: u32, c: u32, lambda: &str, audit: Option<u32>) -> Outcome {
    let lambda = parse_lambda(lambda)?;
    let vanishes = br_vanishes(n, c, &lambda).map_err(input)?;
    let conj = lambda.conjugate();
    let sum: u64 = (1..=c as usize).map(|j| conj.part(j) as u64).sum();
    let k = lambda.len() as u64;
    let ample_possible = (k + 1) * c as u64 >= n as u64;
    let mut out = json!({
        "N": n,
        "c": c,
        "lambda": lambda,
        "conjugate": conj,
        "conjugate_sum": sum,
        "N_minus_c": n - c,
        "vanishes": vanishes,
        "regime": if ample_possible { "ample-possible" } else { "sub-critical" },
    });
    if let Some(m_max) = audit {
        if ample_possible {
            eprintln!("note: the optimality audit only applies when (k+1)c < N");
            out["audit"] = Value::Null;
        } else {
            let report = optimality_audit(n, c, &lambda, m_max).map_err(input)?;
            let ok = report.all_vanish();
            out["audit"] = serde_json::to_value(&report).map_err(input)?;
            if !ok {
                return Err(Failure::Counterexample(out));
            }
        }
    }
    Ok(out)
}

fn instance(args: &VerifyArgs) -> Result<Option<Instance>, Failure> {
    let Some(n) = args.n else {
        if args.k.is_some() || args.delta.is_some() || args.eps.is_some() || args.r.is_some() {
            return Err(Failure::Input("instance flags need --N".into()));
        }
        return Ok(None);
    };
    let k = args.k.unwrap_or(1);
    let delta = args.delta.unwrap_or(k + 1);
    let inst =
        Instance::new(n, k, delta, args.eps.unwrap_or(1), args.r.unwrap_or(1)).map_err(input)?;
    for w in inst.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(Some(inst))
}

fn run_verify<F: Scalar>(ctx: &F::Ctx, args: &VerifyArgs, cfg: &RunConfig) -> Outcome {
    let inst = instance(args)?;
    let samples = |default: usize| args.samples.or(cfg.samples).unwrap_or(default);
    let need =
        |inst: Option<Instance>| inst.ok_or_else(|| Failure::Input("this check needs --N".into()));
    let (seed, height) = (cfg.seed, cfg.height);
    if args.i_set.is_none() && args.i_prime.is_some() {
        return Err(Failure::Input("--Iprime needs --I".into()));
    }
    let report: SuiteReport = match args.check {
        Check::RankOracle => {
            let cells = match (args.grid, inst) {
                (Some(Grid::Small), None) => verify::small_grid(),
                (None, Some(i)) => vec![i],
                (Some(_), Some(_)) => {
                    return Err(Failure::Input("--grid and --N are exclusive".into()))
                }
                (None, None) => return Err(Failure::Input("give --grid small or --N".into())),
            };
            verify::rank_oracle::<F>(
                ctx,
                &cells,
                samples(10),
                seed,
                height,
                args.budget.unwrap_or(cfg.budget),
            )
        }
        Check::Cocycle => verify::cocycle::<F>(ctx, args.n, args.l, samples(100), seed, height),
        Check::MinorTransition => {
            verify::minor_transition::<F>(ctx, inst, samples(100), seed, height)
        }
        Check::PsiInY => verify::psi_in_y::<F>(ctx, inst, samples(50), seed, height),
        Check::Star => {
            let inst = need(inst)?;
            let label = match &args.i_set {
                Some(i) => {
                    let ip = match &args.i_prime {
                        Some(s) => Some(parse_list(s)?),
                        None => None,
                    };
                    Some(StratumLabel::new(inst.n, parse_list(i)?, ip).map_err(input)?)
                }
                None => None,
            };
            verify::star::<F>(
                ctx,
                &inst,
                args.points.unwrap_or(1),
                samples(100),
                args.zero_params,
                label.as_ref(),
                seed,
                height,
            )
        }
        Check::Dims => verify::dims::<F>(ctx, &need(inst)?, seed, height),
    }
    .map_err(input)?;
    let passed = report.passed;
    let mut value = serde_json::to_value(&report).map_err(input)?;
    let warnings = inst.map(|i| i.warnings()).unwrap_or_default();
    if !warnings.is_empty() {
        value["warnings"] = json!(warnings);
    }
    if passed {
        Ok(value)
    } else {
        Err(Failure::Counterexample(value))
    }
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Outcome {
    match &cli.command {
        Command::Bounds {
            n,
            c,
            lambda,
            intro_variant,
            ledger,
            degrees,
        } => cmd_bounds(*n, *c, lambda, *intro_variant, *ledger, degrees.as_deref()),
        Command::Vanishing {
            n,
            c,
            lambda,
            audit,
        } => cmd_vanishing(*n, *c, lambda, *audit),
        Command::Verify(args) => match &cfg.field {
            Field::Q => run_verify::<Rational>(&(), args, cfg),
            Field::P(p) => run_verify::<Fp>(p, args, cfg),
        },
        Command::Decompose { d, d0 } => {
            let (d, d0) = (parse_big(d)?, parse_big(d0)?);
            let (p, q) = decompose_degree(&d, &d0).map_err(input)?;
            Ok(
                json!({ "d": d.to_string(), "d0": d0.to_string(), "p": p.to_string(), "q": q.to_string() }),
            )
        }
        Command::Hyperbolicity { n } => {
            serde_json::to_value(hyperbolicity_bounds(*n)).map_err(input)
        }
        Command::Nakayama { deltas, k, i } => {
            let ds: Vec<BigUint> = parse_list::<String>(deltas)?
                .iter()
                .map(|d| parse_big(d))
                .collect::<Result<_, _>>()?;
            if *i == 0 {
                return Err(Failure::Input("i is 1-based".into()));
            }
            let (m, integral) = nakayama_m(&ds, *k, i - 1).map_err(input)?;
            Ok(
                json!({ "delta": strings(&ds), "k": k, "i": i, "m": m.to_string(), "integral": integral }),
            )
        }
    }
}

fn emit(v: &Value, format: Format) {
    let text = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(v).expect("JSON value")),
        Format::Table => render::render_table(v),
    };
    // a closed pipe is not an error of the run
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match run_config(&cli) {
        Ok(c) => c,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Counterexample(_)) => unreachable!("config never reports counterexamples"),
    };
    match dispatch(&cli, &cfg) {
        Ok(v) => {
            emit(&v, cfg.format);
            ExitCode::SUCCESS
        }
        Err(Failure::Counterexample(v)) => {
            emit(&v, cfg.format);
            eprintln!("counterexample found");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
