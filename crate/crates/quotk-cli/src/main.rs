//! `quotk` command-line front end.
//!
//! stdout carries data, stderr diagnostics. Exit codes: 0 success, 1 a
//! check reported FAIL, 2 invalid input, 3 internal inconsistency, 4 q-degree
//! overflow, 5 numeric failure or degenerate weights.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use quotk::combinatorics::Partition;
use quotk::emit;
use quotk::exact_poly::{parse_rational_list, to_integer, BigRat};
use quotk::exec::Parallelism;
use quotk::grothendieck::{grothendieck_char, SchurVector};
use quotk::localization::oracle_total;
use quotk::qk_ring::QkRing;
use quotk::quot_invariants::{vanishing_class, Invariants, Route, Series};
use quotk::schur_eval::{default_alpha, RootParams};
use quotk::{Error, Result};

#[derive(Parser)]
#[command(name = "quotk", version, about = "Quot-scheme invariants and quantum K-rings of Grassmannians")]
struct Cli {
    /// Worker threads for table sweeps (1 runs sequentially).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format (each command has its own default).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Plain,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    GeneralizedSchur,
    Character,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::GeneralizedSchur => Route::GeneralizedSchur,
            RouteArg::Character => Route::Character,
        }
    }
}

#[derive(Args, Clone, Debug)]
struct Space {
    /// Ambient dimension N.
    #[arg(long)]
    n: usize,
    /// Rank r of the subbundle.
    #[arg(long)]
    r: usize,
}

#[derive(Subcommand)]
enum Command {
    /// One-pointed invariant of a Schur insertion.
    Invariant {
        #[command(flatten)]
        space: Space,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        level: i64,
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        degree: usize,
        /// Use the dual insertion S^λ((C^r)^∨).
        #[arg(long)]
        dual: bool,
        /// Comma-separated rational torus weights.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// One-pointed invariant of a Schubert structure sheaf.
    Grothendieck {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "generalized-schur")]
        route: RouteArg,
    },
    /// Correlation series of a Schubert structure sheaf.
    Series {
        #[command(flatten)]
        space: Space,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        level: i64,
        #[arg(long)]
        lambda: Partition,
        /// Truncation order (used when no closed form applies).
        #[arg(long)]
        qmax: Option<usize>,
        #[arg(long, value_enum, default_value = "generalized-schur")]
        route: RouteArg,
    },
    /// Full quantum K multiplication table.
    QkTable {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        qmax: Option<usize>,
    },
    /// A single quantum K product O_lhs • O_rhs.
    Product {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        lhs: Partition,
        #[arg(long)]
        rhs: Partition,
        #[arg(long)]
        qmax: Option<usize>,
    },
    /// Quantized pairing matrix (or its inverse).
    Pairing {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        inverse: bool,
    },
    /// Compare the localization oracle with the root-table engine.
    OracleCheck {
        #[command(flatten)]
        space: Space,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        level: i64,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        lambda: Partition,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Check that every invariant forced to vanish does vanish.
    VanishSweep {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        dmax: usize,
        /// Largest first part of the swept partitions.
        #[arg(long = "box")]
        width: i64,
    },
}

/// What a command produced: data to print and whether a check failed.
struct Outcome {
    text: String,
    failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failed: false }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn params(space: &Space, level: i64, alpha: Option<&str>) -> Result<RootParams> {
    match alpha {
        None => RootParams::new(space.n, space.r, level),
        Some(a) => RootParams::equivariant(space.n, space.r, level, parse_rational_list(a)?),
    }
}

fn rational_text(x: &BigRat, equivariant: bool) -> Result<String> {
    if equivariant {
        Ok(x.to_string())
    } else {
        Ok(to_integer(x)?.to_string())
    }
}

fn run(cli: &Cli, mode: Parallelism) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Invariant {
            space,
            level,
            lambda,
            degree,
            dual,
            alpha,
        } => {
            let p = params(space, *level, alpha.as_deref())?;
            let inv = Invariants::new(p)?;
            let value = if *dual {
                inv.one_point_dual(lambda.parts(), *degree)?
            } else {
                inv.one_point(&SchurVector::schur(lambda, space.r)?, *degree)?
            };
            let text = rational_text(&value, alpha.is_some())?;
            Ok(Outcome::ok(match fmt {
                Some(Format::Json) => pretty(&json!({ "value": text })),
                _ => text,
            }))
        }
        Command::Grothendieck {
            space,
            lambda,
            degree,
            route,
        } => {
            let inv = Invariants::new(RootParams::new(space.n, space.r, 0)?)?;
            let value = inv.grothendieck_one_point(lambda, *degree, (*route).into())?;
            let text = rational_text(&value, false)?;
            Ok(Outcome::ok(match fmt {
                Some(Format::Json) => pretty(&json!({ "value": text })),
                _ => text,
            }))
        }
        Command::Series {
            space,
            level,
            lambda,
            qmax,
            route,
        } => {
            let inv = Invariants::new(RootParams::new(space.n, space.r, *level)?)?;
            let series = if *level == 0 {
                Series::Closed(inv.grothendieck_series(lambda, (*route).into())?)
            } else {
                let q_max = qmax.unwrap_or(space.r + 1);
                inv.correlator(&grothendieck_char(lambda, space.r)?, q_max)?
            };
            Ok(Outcome::ok(match fmt {
                Some(Format::Json) => pretty(&emit::series_to_json(&series)),
                _ => emit::series_plain(&series),
            }))
        }
        Command::QkTable { space, qmax } => {
            let ring = QkRing::with_q_max(space.n, space.r, qmax.unwrap_or(space.r + 1))?;
            let table = ring.table(mode)?;
            Ok(Outcome::ok(match fmt {
                Some(Format::Latex) => emit::table_latex(&table),
                Some(Format::Plain) => emit::table_plain(&table),
                _ => pretty(&emit::table_to_json(&table)),
            }))
        }
        Command::Product {
            space,
            lhs,
            rhs,
            qmax,
        } => {
            let ring = QkRing::with_q_max(space.n, space.r, qmax.unwrap_or(space.r + 1))?;
            let x = ring.quantum_product(lhs, rhs)?;
            Ok(Outcome::ok(match fmt {
                Some(Format::Plain) => x.to_string(),
                Some(Format::Latex) => emit::latex_exact(&x.exact()),
                _ => pretty(&emit::element_to_json(&x)),
            }))
        }
        Command::Pairing { space, inverse } => {
            let ring = QkRing::new(space.n, space.r)?;
            let m = if *inverse {
                ring.pairing_inverse()?
            } else {
                ring.quantized_pairing()?
            };
            Ok(Outcome::ok(match fmt {
                Some(Format::Latex) => emit::matrix_latex(m),
                Some(Format::Plain) => emit::matrix_plain(m),
                _ => pretty(&emit::matrix_to_json(m)),
            }))
        }
        Command::OracleCheck {
            space,
            level,
            degree,
            lambda,
            alpha,
        } => {
            let weights = match alpha {
                Some(a) => parse_rational_list(a)?,
                None => default_alpha(space.n),
            };
            let p = RootParams::equivariant(space.n, space.r, *level, weights.clone())?;
            let key = lambda.padded(space.r);
            let oracle = oracle_total(&key, *level, *degree, space.n, space.r, &weights, mode)?;
            let engine = Invariants::new(p)?.one_point(&SchurVector::schur(lambda, space.r)?, *degree)?;
            let pass = oracle == engine;
            let verdict = if pass { "PASS" } else { "FAIL" };
            let text = match fmt {
                Some(Format::Json) => pretty(&json!({
                    "result": verdict,
                    "oracle": oracle.to_string(),
                    "bialternant": engine.to_string(),
                })),
                _ => format!("{verdict} oracle={oracle} bialternant={engine}"),
            };
            Ok(Outcome { text, failed: !pass })
        }
        Command::VanishSweep { space, dmax, width } => {
            let inv = Invariants::new(RootParams::new(space.n, space.r, 0)?)?;
            let mut cells = Vec::new();
            for d in 0..=*dmax {
                for lambda in Partition::in_box(space.r, *width) {
                    if vanishing_class(&lambda, d, space.n, space.r).forced() {
                        cells.push((lambda, d));
                    }
                }
            }
            let values = quotk::exec::try_map(mode, &cells, |(lambda, d)| {
                inv.one_point_dual(lambda.parts(), *d)
            })?;
            let violations: Vec<String> = cells
                .iter()
                .zip(&values)
                .filter(|(_, v)| !num_is_zero(v))
                .map(|((lambda, d), v)| format!("lambda={lambda} d={d} value={v}"))
                .collect();
            let text = match fmt {
                Some(Format::Json) => pretty(&json!({
                    "checked": cells.len(),
                    "violations": violations,
                })),
                _ => {
                    let mut s = format!("checked {} forced-zero cases, {} violations", cells.len(), violations.len());
                    for v in &violations {
                        s.push('\n');
                        s.push_str(v);
                    }
                    s
                }
            };
            Ok(Outcome {
                text,
                failed: !violations.is_empty(),
            })
        }
    }
}

fn num_is_zero(x: &BigRat) -> bool {
    *x.numer() == 0.into()
}

fn configure_threads(threads: Option<usize>) -> Result<Parallelism> {
    match threads {
        None => Ok(Parallelism::Parallel),
        Some(0) => Err(Error::InvalidParams("--threads must be at least 1".into())),
        Some(1) => Ok(Parallelism::Sequential),
        Some(_t) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(_t)
                .build_global()
                .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
            Ok(Parallelism::Parallel)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|mode| run(&cli, mode));
    match result {
        Ok(out) => {
            println!("{}", out.text);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
