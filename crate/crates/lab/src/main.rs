//! Command-line front end: embedding verdicts, quasi-norms of stored grid
//! functions, witness sweeps, region diagrams and the multiplier probe.

use std::path::PathBuf;
use std::process::ExitCode;

use besov_core::{
    embed_iso_into_mixed, embed_mixed_into_iso, make_params, region_diagram, Figure, GrowthModel,
};
use besov_lab::config::Config;
use besov_lab::container::read_grid_function;
use besov_lab::harness::{
    self, cases_for_id, emit_report, fit_table, probe_multiplier, ReportFormat, WitnessTable,
};
use besov_lab::norms::{iso_besov_norm, mixed_besov_norm};
use besov_lab::partition::{build_cube_partition, build_tensor_partition};
use besov_lab::ExtendedExponent;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "besov-lab",
    about = "Numerical laboratory for isotropic and dominating-mixed Besov quasi-norms",
    version
)]
struct Cli {
    /// JSON config overriding tolerances, memory budget and ladder defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every randomized trial; identical seeds give byte-identical
    /// reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    /// mixed scale into isotropic scale
    S2b,
    /// isotropic scale into mixed scale
    B2s,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Iso,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Embedding verdict at a parameter point.
    Verdict(VerdictArgs),
    /// Quasi-norm of a stored grid function.
    Norm(NormArgs),
    /// Run a named witness case and emit its ratio table.
    Witness(WitnessArgs),
    /// Region diagram of one of the two embedding questions.
    Regions(RegionArgs),
    /// Empirical sweep of the mixed-multiplier bounds.
    ProbeMultiplier(ProbeArgs),
}

#[derive(Args)]
struct VerdictArgs {
    #[arg(long)]
    direction: Direction,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, value_parser = parse_exponent)]
    p: f64,
    #[arg(long, value_parser = parse_exponent)]
    q: f64,
    #[arg(long)]
    d: u32,
}

#[derive(Args)]
struct NormArgs {
    /// Binary grid-function container (see the container docs).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    space: Space,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, value_parser = parse_exponent)]
    p: f64,
    #[arg(long, value_parser = parse_exponent)]
    q: f64,
    /// Partition levels; defaults to the deepest family the grid holds.
    #[arg(long)]
    levels: Option<u32>,
}

#[derive(Args)]
struct WitnessArgs {
    /// Case id, e.g. T31-pinf-q-gt-1; opt-* ids expand to both phases.
    #[arg(long)]
    case: String,
    #[arg(long)]
    lmin: Option<u32>,
    #[arg(long)]
    lmax: Option<u32>,
    /// Override the per-row refinement ladder, e.g. "1024:3.1416,2048:6.2832"
    /// as n:R rungs applied to every level.
    #[arg(long)]
    grid_schedule: Option<String>,
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    emit: Emit,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RegionArgs {
    /// 1 = mixed into iso, 2 = iso into mixed.
    #[arg(long)]
    figure: u8,
    #[arg(long, allow_negative_numbers = true)]
    extent: f64,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long, value_parser = parse_exponent)]
    p: f64,
    #[arg(long, default_value_t = 8)]
    jmax: u32,
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "Inf" | "INF" | "infinity" | "Infinity" | "∞" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|e| format!("not a number or 'inf': {e}")),
    }
}

enum Failure {
    Validation(String),
    Runtime(String),
}

impl Failure {
    fn validation(e: impl std::fmt::Display) -> Self {
        Failure::Validation(e.to_string())
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<Config, Failure> {
    match path {
        None => Ok(Config::default()),
        Some(p) => Config::load(p).map_err(Failure::validation),
    }
}

fn exponent(v: f64) -> Result<ExtendedExponent, Failure> {
    ExtendedExponent::new(v).map_err(Failure::validation)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = load_config(&cli.config)?;
    match cli.command {
        Command::Verdict(args) => {
            let point =
                make_params(args.t, args.p, args.q, args.d).map_err(Failure::validation)?;
            let verdict = match args.direction {
                Direction::S2b => embed_mixed_into_iso(&point),
                Direction::B2s => embed_iso_into_mixed(&point),
            };
            println!(
                "{}",
                serde_json::to_string(&verdict).map_err(Failure::runtime)?
            );
            Ok(())
        }
        Command::Norm(args) => {
            let f = read_grid_function(&args.input).map_err(Failure::runtime)?;
            let grid = *f.grid();
            let levels = match args.levels {
                Some(l) => l,
                None => {
                    // deepest level whose band fits under the Nyquist cube
                    let mut l = 0u32;
                    while 1.5 * (2.0f64).powi(l as i32 + 1) <= grid.nyquist() + 1e-9 {
                        l += 1;
                    }
                    l
                }
            };
            let p = exponent(args.p)?;
            let q = exponent(args.q)?;
            let result = match args.space {
                Space::Iso => {
                    let partition =
                        build_cube_partition(&grid, levels).map_err(Failure::validation)?;
                    iso_besov_norm(&f, args.t, p, q, &partition).map_err(Failure::runtime)?
                }
                Space::Mixed => {
                    let partition =
                        build_tensor_partition(&grid, levels).map_err(Failure::validation)?;
                    mixed_besov_norm(&f, args.t, p, q, &partition).map_err(Failure::runtime)?
                }
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&result).map_err(Failure::runtime)?
            );
            Ok(())
        }
        Command::Witness(args) => {
            let cases = cases_for_id(&args.case).map_err(Failure::validation)?;
            let schedule = args
                .grid_schedule
                .as_deref()
                .map(parse_schedule)
                .transpose()?;
            let mut tables: Vec<WitnessTable> = Vec::new();
            for case in &cases {
                let (lo, hi) = case.default_levels;
                let lmin = args.lmin.unwrap_or(lo);
                let lmax = args.lmax.unwrap_or(hi);
                let table =
                    harness::run_witness_with(case, lmin, lmax, &config, schedule.as_deref())
                        .map_err(Failure::runtime)?;
                if let Ok(fit) = fit_table(&table, case.model) {
                    eprintln!(
                        "{}: fitted {} exponent {:.4} (max residual {:.2e})",
                        case.id,
                        match case.model {
                            GrowthModel::PowerInEll => "power",
                            GrowthModel::ExponentialBase2InEll => "base-2",
                        },
                        fit.exponent,
                        fit.max_residual
                    );
                }
                tables.push(table);
            }
            let format = match args.emit {
                Emit::Csv => ReportFormat::Csv,
                Emit::Json => ReportFormat::Json,
            };
            let out = config.resolve_output(&args.out);
            emit_report(&tables, format, &out).map_err(Failure::runtime)?;
            Ok(())
        }
        Command::Regions(args) => {
            let figure = match args.figure {
                1 => Figure::MixedIntoIso,
                2 => Figure::IsoIntoMixed,
                other => {
                    return Err(Failure::Validation(format!(
                        "figure must be 1 or 2, got {other}"
                    )))
                }
            };
            let diagram =
                region_diagram(figure, args.d, args.extent).map_err(Failure::validation)?;
            let out = config.resolve_output(&args.out);
            let text = serde_json::to_string_pretty(&diagram).map_err(Failure::runtime)?;
            std::fs::write(&out, text)
                .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", out.display())))?;
            Ok(())
        }
        Command::ProbeMultiplier(args) => {
            let p = exponent(args.p)?;
            if args.jmax < 2 {
                return Err(Failure::Validation("jmax must be at least 2".into()));
            }
            let rows =
                probe_multiplier(p, args.jmax, args.trials, cli.seed).map_err(Failure::runtime)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&rows).map_err(Failure::runtime)?
            );
            let slope = harness::probe_trend(&rows, |r| r.max_tensor_on_cube_normalized);
            eprintln!("normalized tensor-on-cube trend per level: {slope:.4}");
            Ok(())
        }
    }
}

fn parse_schedule(text: &str) -> Result<Vec<(usize, f64)>, Failure> {
    text.split(',')
        .map(|rung| {
            let (n, r) = rung
                .split_once(':')
                .ok_or_else(|| Failure::Validation(format!("bad schedule rung `{rung}`")))?;
            let n = n
                .trim()
                .parse::<usize>()
                .map_err(|e| Failure::Validation(format!("bad rung size `{n}`: {e}")))?;
            let r = r
                .trim()
                .parse::<f64>()
                .map_err(|e| Failure::Validation(format!("bad rung extent `{r}`: {e}")))?;
            Ok((n, r))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
