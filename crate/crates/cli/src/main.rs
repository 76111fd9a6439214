use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use minimax_lab_cli::{exit_code, run, Command, HyperMode, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "minimax-lab",
    version,
    about = "Exact analysis of win-lose games by finite truncation"
)]
struct Cli {
    /// Report format; grid defaults to csv, everything else to json
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Write the report here instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a game file exactly: value and optimal strategies
    Solve {
        /// Game JSON: {"rows": [...], "cols": [...], "payoff": [["a/b", ...], ...]}
        game: String,
    },
    /// Exact truncated values over schedules, with a duality-gap report
    Grid {
        /// Zoo oracle name or game file
        oracle: String,
        /// Row schedule, e.g. 1,2,4,8 (strictly increasing)
        #[arg(long)]
        rows: String,
        /// Column schedule, e.g. 1,2,4,8
        #[arg(long)]
        cols: String,
        /// Convergence tolerance as an exact rational
        #[arg(long, default_value = "1/100")]
        tol: String,
        /// Worker threads for grid cells; output is identical for any count
        #[arg(long, default_value_t = 1)]
        threads: u64,
    },
    /// Alternating extraction of a violating core between two value bounds
    Extract {
        /// Zoo oracle name or game file
        oracle: String,
        /// Lower value bound as an exact rational
        #[arg(long = "vlow")]
        v_low: String,
        /// Upper value bound as an exact rational
        #[arg(long = "vbar")]
        v_bar: String,
        /// Alternation rounds past the seeded first pair
        #[arg(long)]
        depth: u64,
    },
    /// Find a largest staircase (exact) or grow one greedily
    Detect {
        /// Game file or zoo oracle name
        input: String,
        /// Exhaustive search for the maximum staircase (default)
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        /// Greedy alternating construction against an oracle
        #[arg(long)]
        greedy: bool,
        /// Target staircase size for the greedy construction
        #[arg(long, default_value_t = 10, requires = "greedy")]
        budget: u64,
    },
    /// VC, Littlestone, and threshold dimensions of a game file
    Dims {
        game: String,
    },
    /// Fractional matching and cover numbers of a hypergraph
    Hyper {
        /// Hypergraph JSON: {"vertices": [...], "edges": [[...], ...]}
        input: String,
        /// Report only the fractional matching number
        #[arg(long, conflicts_with_all = ["tau", "game"])]
        nu: bool,
        /// Report only the fractional cover number
        #[arg(long, conflicts_with = "game")]
        tau: bool,
        /// Emit the incidence game as a game file
        #[arg(long)]
        game: bool,
    },
    /// Build a fooling series against a convergence-enforcing family
    Series {
        /// Family name (initial-segments, even-odd, min-bounded, residue-<m>) or family file
        #[arg(long)]
        family: String,
        /// Divergence demand: total mass reaches 1/eps
        #[arg(long)]
        eps: String,
        /// Terms live on {1..horizon}
        #[arg(long)]
        horizon: u64,
    },
    /// Prefix density estimates for the separation candidate pair
    Density {
        /// Zoo oracle name or game file
        oracle: String,
        /// Density denominators run over {1..prefix}
        #[arg(long)]
        prefix: u64,
        /// Rows sampled for the row-density estimates
        #[arg(long, default_value_t = 20)]
        rows: u64,
        /// Columns sampled for the column-density estimates
        #[arg(long, default_value_t = 20)]
        cols: u64,
    },
}

fn to_config(cli: Cli) -> RunConfig {
    let command = match cli.command {
        Cmd::Solve { game } => Command::Solve { game },
        Cmd::Grid { oracle, rows, cols, tol, threads } => {
            Command::Grid { oracle, rows, cols, tol, threads }
        }
        Cmd::Extract { oracle, v_low, v_bar, depth } => {
            Command::Extract { oracle, v_low, v_bar, depth }
        }
        Cmd::Detect { input, exact: _, greedy, budget } => {
            Command::Detect { input, greedy, budget }
        }
        Cmd::Dims { game } => Command::Dims { game },
        Cmd::Hyper { input, nu, tau, game } => Command::Hyper {
            input,
            mode: match (nu, tau, game) {
                (true, _, _) => Some(HyperMode::Nu),
                (_, true, _) => Some(HyperMode::Tau),
                (_, _, true) => Some(HyperMode::Game),
                _ => None,
            },
        },
        Cmd::Series { family, eps, horizon } => Command::Series { family, eps, horizon },
        Cmd::Density { oracle, prefix, rows, cols } => {
            Command::Density { oracle, prefix, rows, cols }
        }
    };
    RunConfig {
        command,
        format: cli.format.map(|f| match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }),
        output: cli.output,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = to_config(cli);
    match run(&config) {
        Ok(report) => match &config.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, report + "\n") {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
                ExitCode::SUCCESS
            }
            None => {
                let mut out = std::io::stdout().lock();
                match writeln!(out, "{report}") {
                    Ok(()) => ExitCode::SUCCESS,
                    // A closed pipe (output | head) is not our error.
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                    Err(e) => {
                        eprintln!("error: cannot write report: {e}");
                        ExitCode::from(1)
                    }
                }
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
