//! Command-line front end: analyze ring instances, verify LP duality
//! certificates, search for extremal instances, and run experiments.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 size-limit refusal,
//! 3 certificate failure.

use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ringcast::equilibrium::TieBreak;
use ringcast::sequential::{extremal_search, two_permutation_experiment, SearchObjective};
use ringcast::report::{
    self, two_permutation_csv, AnalyzeOptions, CertifyParams, CertifyTarget,
};
use ringcast::{parse_rational, Error, RingGame};

#[derive(Parser)]
#[command(
    name = "ringcast",
    about = "Exact analysis of multicast network design games on rings",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Left,
    Right,
    Stay,
}

impl From<Tie> for TieBreak {
    fn from(t: Tie) -> Self {
        match t {
            Tie::Left => TieBreak::PreferLeft,
            Tie::Right => TieBreak::PreferRight,
            Tie::Stay => TieBreak::Stay,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a ring instance given as edge costs (rationals c_0..c_n),
    /// or read a JSON instance from --file / stdin.
    Analyze {
        /// Edge costs, e.g. `2 1 2` or `6/19 10/19 3/19 10/19`.
        costs: Vec<String>,
        /// JSON instance file, either {"n": 2, "edges": ["1","0","4"]} or a
        /// raw ring to canonicalize (use "-" for stdin).
        #[arg(long)]
        file: Option<String>,
        /// Tie-breaking for sequential play.
        #[arg(long, value_enum, default_value_t = Tie::Left)]
        tie: Tie,
        /// Refuse exhaustive enumeration above this n.
        #[arg(long, default_value_t = ringcast::equilibrium::ENUMERATION_LIMIT)]
        limit_n: usize,
        /// Seed for sampled estimates on large instances.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include a best-response dynamics trace from the optimum profile.
        #[arg(long)]
        trace: bool,
    },
    /// Verify an LP duality certificate and re-solve the LP from scratch.
    Certify {
        /// Target: pos43, mspos2619 or popoa.
        target: String,
        /// Family parameter k for pos43.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Ring size (edges are 0..=n).
        #[arg(long)]
        n: Option<usize>,
        /// Unused-edge index.
        #[arg(long)]
        o: Option<usize>,
        /// Boundary player index for mspos2619.
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Candidate dropped edge for popoa.
        #[arg(long, default_value_t = 3)]
        p: usize,
    },
    /// Search for extremal instances (objectives: mspoa, mspos, popoa).
    Search {
        objective: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a randomized experiment (two-perm or popoa-family).
    Experiment {
        name: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Family depth for popoa-family.
        #[arg(long, default_value_t = 1)]
        l: usize,
    },
}

fn parse_costs(costs: &[String], file: &Option<String>) -> ringcast::Result<RingGame> {
    if let Some(path) = file {
        let text = if path == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        } else {
            std::fs::read_to_string(path)?
        };
        return RingGame::from_json(&text);
    }
    if costs.is_empty() {
        return Err(Error::Parse(
            "no edge costs given (pass them as arguments or via --file)".into(),
        ));
    }
    let parsed = costs
        .iter()
        .map(|s| parse_rational(s))
        .collect::<ringcast::Result<Vec<_>>>()?;
    RingGame::new(parsed)
}

fn emit(cli: &Cli, json: String, csv: Option<String>) -> ringcast::Result<()> {
    let body = match cli.format {
        Format::Json => json,
        Format::Csv => csv.ok_or_else(|| {
            Error::Parse("csv output is only available for experiment and search".into())
        })?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body)?,
        None if body.ends_with('\n') => print!("{body}"),
        None => println!("{body}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> ringcast::Result<u8> {
    match &cli.command {
        Command::Analyze {
            costs,
            file,
            tie,
            limit_n,
            seed,
            trace,
        } => {
            let game = parse_costs(costs, file)?;
            let opts = AnalyzeOptions {
                tie: (*tie).into(),
                limit_n: *limit_n,
                seed: *seed,
                trace: *trace,
                ..AnalyzeOptions::default()
            };
            let rep = report::analyze(&game, &opts)?;
            emit(cli, serde_json::to_string_pretty(&rep)?, None)?;
            Ok(0)
        }
        Command::Certify { target, k, n, o, i, p } => {
            let target: CertifyTarget = target.parse()?;
            let params = CertifyParams {
                k: *k,
                n: *n,
                o: *o,
                i: *i,
                p: *p,
            };
            let verdict = report::certify(target, &params)?;
            let ok = verdict.certified;
            emit(cli, serde_json::to_string_pretty(&verdict)?, None)?;
            Ok(if ok { 0 } else { 3 })
        }
        Command::Search {
            objective,
            n,
            trials,
            seed,
        } => {
            match objective.as_str() {
                "mspoa" | "mspos" => {
                    let obj = if objective == "mspoa" {
                        SearchObjective::MsPoa
                    } else {
                        SearchObjective::MsPos
                    };
                    let r = extremal_search(obj, *n, *trials, *seed)?;
                    emit(
                        cli,
                        serde_json::to_string_pretty(&r)?,
                        Some(report::search_csv(&r)),
                    )?;
                }
                _ => {
                    let value = report::run_search(objective, *n, *trials, *seed)?;
                    emit(cli, serde_json::to_string_pretty(&value)?, None)?;
                }
            }
            Ok(0)
        }
        Command::Experiment {
            name,
            n,
            trials,
            seed,
            l,
        } => {
            if name == "two-perm" {
                let rep = two_permutation_experiment(*n, *trials, *seed)?;
                emit(
                    cli,
                    serde_json::to_string_pretty(&rep)?,
                    Some(two_permutation_csv(&rep)),
                )?;
            } else {
                let value = report::run_experiment(name, *n, *trials, *seed, *l)?;
                emit(cli, serde_json::to_string_pretty(&value)?, None)?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(w) = std::env::var("RINGCAST_WORKERS") {
        if let Ok(n) = w.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help/version requests are success; everything else is usage.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::LimitExceeded { .. } => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
