//! Report construction behind the `minimax-lab` binary. Everything here is
//! deterministic: JSON objects serialize with sorted keys, rationals are
//! lowest-terms strings, and thread counts never change a byte of output.

use std::path::{Path, PathBuf};

use minimax_lab::zoo::{self, FiniteOracle};
use minimax_lab::{
    check_premise, extract_violating_core, family_from_json, fooling_series, game_from_json,
    game_of_hypergraph, game_to_json, gap_report, hypergraph_from_json, littlestone_dimension,
    nu_star, parse_rat, solve, staircase_exact, staircase_greedy, tau_star, threshold_dimension,
    truncate, value_grid_threaded, vc_dimension, CellWitness, Error, FiniteGame,
    FractionalSolution, GameOracle, Hypergraph, MixedStrategy, Rat, Result, SetFamily,
    SolutionKind,
};
use serde_json::{json, Value};

/// Exact detection scans this window when the input is an infinite oracle
/// rather than a game file.
pub const DETECT_WINDOW: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperMode {
    Nu,
    Tau,
    Game,
}

#[derive(Debug, Clone)]
pub enum Command {
    Solve {
        game: String,
    },
    Grid {
        oracle: String,
        rows: String,
        cols: String,
        tol: String,
        threads: u64,
    },
    Extract {
        oracle: String,
        v_low: String,
        v_bar: String,
        depth: u64,
    },
    Detect {
        input: String,
        greedy: bool,
        budget: u64,
    },
    Dims {
        game: String,
    },
    Hyper {
        input: String,
        mode: Option<HyperMode>,
    },
    Series {
        family: String,
        eps: String,
        horizon: u64,
    },
    Density {
        oracle: String,
        prefix: u64,
        rows: u64,
        cols: u64,
    },
}

/// Numeric options stay as the exact strings the user typed; `run` parses
/// them and rejects anything that is not an integer or "a/b".
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Resource(_) => 2,
        _ => 1,
    }
}

pub fn run(config: &RunConfig) -> Result<String> {
    match &config.command {
        Command::Solve { game } => {
            json_only(config, "solve")?;
            run_solve(game)
        }
        Command::Grid { oracle, rows, cols, tol, threads } => {
            run_grid(oracle, rows, cols, tol, *threads, config.format.unwrap_or(OutputFormat::Csv))
        }
        Command::Extract { oracle, v_low, v_bar, depth } => {
            json_only(config, "extract")?;
            run_extract(oracle, v_low, v_bar, *depth)
        }
        Command::Detect { input, greedy, budget } => {
            json_only(config, "detect")?;
            run_detect(input, *greedy, *budget)
        }
        Command::Dims { game } => {
            json_only(config, "dims")?;
            run_dims(game)
        }
        Command::Hyper { input, mode } => {
            json_only(config, "hyper")?;
            run_hyper(input, *mode)
        }
        Command::Series { family, eps, horizon } => {
            json_only(config, "series")?;
            run_series(family, eps, *horizon)
        }
        Command::Density { oracle, prefix, rows, cols } => {
            json_only(config, "density")?;
            run_density(oracle, *prefix, *rows, *cols)
        }
    }
}

fn json_only(config: &RunConfig, command: &str) -> Result<()> {
    if config.format == Some(OutputFormat::Csv) {
        return Err(Error::Domain(format!("{command} reports have no CSV form; use json")));
    }
    Ok(())
}

fn load_text(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path))
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
}

fn load_game(path: &str) -> Result<FiniteGame> {
    game_from_json(&load_text(path)?)
}

/// Oracle inputs accept a zoo name or a game file; a file becomes an oracle
/// that loses everywhere outside its matrix.
fn resolve_oracle(input: &str) -> Result<Box<dyn GameOracle>> {
    if let Some(oracle) = zoo::by_name(input) {
        return Ok(oracle);
    }
    if Path::new(input).exists() {
        return Ok(Box::new(FiniteOracle::new(input, load_game(input)?)?));
    }
    Err(Error::Domain(format!(
        "{input} is neither a zoo oracle ({}) nor a readable file",
        zoo::ORACLE_NAMES.join(", ")
    )))
}

fn resolve_family(input: &str) -> Result<SetFamily> {
    if let Some(family) = SetFamily::by_name(input) {
        return Ok(family);
    }
    if Path::new(input).exists() {
        return family_from_json(&load_text(input)?);
    }
    Err(Error::Domain(format!(
        "{input} is neither a named family ({}, residue-<m>) nor a readable file",
        minimax_lab::setfam::FAMILY_NAMES.join(", ")
    )))
}

fn parse_option(field: &str, text: &str) -> Result<Rat> {
    parse_rat(text).map_err(|e| Error::Parse(format!("{field}: {e}")))
}

fn parse_schedule(field: &str, text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("{field}: {part:?} is not a positive integer")))
        })
        .collect()
}

fn rat_str(value: &Rat) -> Value {
    Value::String(minimax_lab::format_rat(value))
}

fn strategy_value(p: &MixedStrategy) -> Value {
    Value::Object(
        p.iter()
            .map(|(i, w)| (i.to_string(), rat_str(w)))
            .collect(),
    )
}

fn labeled_strategy(p: &MixedStrategy, labels: &[String]) -> Value {
    Value::Object(
        p.iter()
            .map(|(&i, w)| (labels[(i - 1) as usize].clone(), rat_str(w)))
            .collect(),
    )
}

fn witness_value(w: &CellWitness) -> Value {
    json!({
        "rows": w.rows,
        "cols": w.cols,
        "value": rat_str(&w.value),
        "p": strategy_value(&w.row_strategy),
        "q": strategy_value(&w.col_strategy),
    })
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn run_solve(path: &str) -> Result<String> {
    let game = load_game(path)?;
    let r = solve(&game)?;
    Ok(pretty(&json!({
        "value": rat_str(&r.value),
        "p": labeled_strategy(&r.p_opt, game.row_labels()),
        "q": labeled_strategy(&r.q_opt, game.col_labels()),
    })))
}

fn run_grid(
    oracle_name: &str,
    rows: &str,
    cols: &str,
    tol: &str,
    threads: u64,
    format: OutputFormat,
) -> Result<String> {
    let oracle = resolve_oracle(oracle_name)?;
    let row_schedule = parse_schedule("--rows", rows)?;
    let col_schedule = parse_schedule("--cols", cols)?;
    let tol = parse_option("--tol", tol)?;
    let grid = value_grid_threaded(oracle.as_ref(), &row_schedule, &col_schedule, threads as usize)?;
    let report = gap_report(&grid, &tol)?;
    let gap = json!({
        "upper_estimate": rat_str(&report.upper_estimate),
        "lower_estimate": rat_str(&report.lower_estimate),
        "lower_exact": report.lower_exact,
        "converged": report.converged,
        "tol": rat_str(&report.tol),
        "upper_witness": witness_value(&report.upper_witness),
        "lower_witness": witness_value(&report.lower_witness),
    });
    match format {
        OutputFormat::Json => Ok(pretty(&json!({
            "oracle": oracle.name(),
            "rows": row_schedule,
            "cols": col_schedule,
            "values": grid
                .values
                .iter()
                .map(|row| row.iter().map(rat_str).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "gap": gap,
        }))),
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str("n\\m");
            for m in &col_schedule {
                out.push_str(&format!(",{m}"));
            }
            out.push('\n');
            for (k, n) in row_schedule.iter().enumerate() {
                out.push_str(&n.to_string());
                for cell in &grid.values[k] {
                    out.push_str(&format!(",{}", minimax_lab::format_rat(cell)));
                }
                out.push('\n');
            }
            out.push('\n');
            out.push_str(&pretty(&json!({
                "oracle": oracle.name(),
                "rows": row_schedule,
                "cols": col_schedule,
                "gap": gap,
            })));
            Ok(out)
        }
    }
}

fn run_extract(oracle_name: &str, v_low: &str, v_bar: &str, depth: u64) -> Result<String> {
    let oracle = resolve_oracle(oracle_name)?;
    let v_low = parse_option("--vlow", v_low)?;
    let v_bar = parse_option("--vbar", v_bar)?;
    let core = extract_violating_core(oracle.as_ref(), &v_low, &v_bar, depth)?;
    Ok(pretty(&json!({
        "oracle": oracle.name(),
        "vlow": rat_str(&v_low),
        "vbar": rat_str(&v_bar),
        "depth": depth,
        "rounds": core
            .pairs
            .iter()
            .map(|(p, q)| json!({ "p": strategy_value(p), "q": strategy_value(q) }))
            .collect::<Vec<_>>(),
        "row_support": core.row_support,
        "col_support": core.col_support,
    })))
}

fn run_detect(input: &str, greedy: bool, budget: u64) -> Result<String> {
    if greedy {
        let oracle = resolve_oracle(input)?;
        let result = staircase_greedy(oracle.as_ref(), budget)?;
        return Ok(pretty(&json!({
            "input": oracle.name(),
            "mode": "greedy",
            "budget": budget,
            "size": result.witness.len(),
            "rows": result.witness.rows,
            "cols": result.witness.cols,
            "stalled": result.stalled,
        })));
    }
    let (game, window) = if zoo::by_name(input).is_some() {
        let oracle = zoo::by_name(input).unwrap();
        (truncate(oracle.as_ref(), DETECT_WINDOW, DETECT_WINDOW)?, Some(DETECT_WINDOW))
    } else {
        (load_game(input)?, None)
    };
    let (size, witness) = staircase_exact(&game)?;
    let mut report = json!({
        "input": input,
        "mode": "exact",
        "size": size,
        "rows": witness.rows,
        "cols": witness.cols,
    });
    if let Some(window) = window {
        report["window"] = json!([window, window]);
    }
    Ok(pretty(&report))
}

fn run_dims(path: &str) -> Result<String> {
    let game = load_game(path)?;
    Ok(pretty(&json!({
        "vc": vc_dimension(&game)?,
        "littlestone": littlestone_dimension(&game)?,
        "threshold": threshold_dimension(&game)?,
    })))
}

fn solution_value(s: &FractionalSolution, h: &Hypergraph) -> Value {
    Value::Object(
        s.weights
            .iter()
            .map(|(&i, w)| {
                let key = match s.kind {
                    SolutionKind::Cover => h.vertex_labels()[(i - 1) as usize].clone(),
                    SolutionKind::Matching => i.to_string(),
                };
                (key, rat_str(w))
            })
            .collect(),
    )
}

fn run_hyper(path: &str, mode: Option<HyperMode>) -> Result<String> {
    let h = hypergraph_from_json(&load_text(path)?)?;
    if mode == Some(HyperMode::Game) {
        return Ok(game_to_json(&game_of_hypergraph(&h)?));
    }
    let mut report = serde_json::Map::new();
    if mode != Some(HyperMode::Tau) {
        let (nu, matching) = nu_star(&h)?;
        report.insert("nu_star".into(), rat_str(&nu));
        report.insert("matching".into(), solution_value(&matching, &h));
    }
    if mode != Some(HyperMode::Nu) {
        let (tau, cover) = tau_star(&h)?;
        report.insert("tau_star".into(), rat_str(&tau));
        report.insert("cover".into(), solution_value(&cover, &h));
    }
    Ok(pretty(&Value::Object(report)))
}

fn run_series(family_name: &str, eps: &str, horizon: u64) -> Result<String> {
    let family = resolve_family(family_name)?;
    let eps = parse_option("--eps", eps)?;
    let series = fooling_series(&family, &eps, horizon)?;
    let terms: Vec<Rat> = (1..=horizon).map(|i| series.term(i)).collect();
    let mass: Rat = terms.iter().cloned().sum();
    let violations = check_premise(&family, &series, horizon)?;
    Ok(pretty(&json!({
        "family": family.name(),
        "eps": rat_str(&eps),
        "horizon": horizon,
        "series": series.name(),
        "terms": terms.iter().map(rat_str).collect::<Vec<_>>(),
        "mass": rat_str(&mass),
        "violations": violations
            .iter()
            .map(|v| json!({
                "set": v.set.iter().copied().collect::<Vec<_>>(),
                "sum": rat_str(&v.sum),
            }))
            .collect::<Vec<_>>(),
    })))
}

fn run_density(oracle_name: &str, prefix: u64, rows: u64, cols: u64) -> Result<String> {
    let oracle = resolve_oracle(oracle_name)?;
    let report = minimax_lab::density_report(oracle.as_ref(), rows, cols, prefix)?;
    Ok(pretty(&json!({
        "oracle": oracle.name(),
        "prefix": prefix,
        "rows": rows,
        "cols": cols,
        "row_estimates": report.row_estimates.iter().map(rat_str).collect::<Vec<_>>(),
        "col_estimates": report.col_estimates.iter().map(rat_str).collect::<Vec<_>>(),
        "candidate": match &report.candidate {
            Some((alpha, beta)) => json!([rat_str(alpha), rat_str(beta)]),
            None => Value::Null,
        },
    })))
}
