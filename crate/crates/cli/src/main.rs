//! `cubology` command-line front end.
//!
//! Exit codes: 0 success, 1 domain error or negative verdict (the error
//! name is printed first on stderr), 2 usage error.
//!
//! JSON outputs carry `"version": 1`. The state-file format, shared by
//! `scramble` output and `--state-file` input, is
//! `{"n": N, "stickers": ["W", "W", ...]}` with the stickers face-major
//! in face order U L F R B D, row-major within a face.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubology::counting::{
    gods_number_lower_bound, group_order, orbit_count, s_conf_size, s_phys_size, stabilizer_order, tuned_lower_bound,
};
use cubology::cubology_law::{lift_colors, random_valid_configuration, validity_of_state};
use cubology::group_oracle::{generators, schreier_sims_order};
use cubology::move_library::library;
use cubology::solver::solve;
use cubology::{cube_model::render_net_with, decompose, decomposition::cached_atlas};
use cubology::{Color, CubeError, CubeSpec, CubeState, MoveSequence};
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "cubology", version, about = "n x n x n cube group toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StateInput {
    /// Cube size; taken from the state file when one is given
    #[arg(long)]
    n: Option<usize>,
    /// Moves applied to the solved cube
    #[arg(long, conflicts_with = "state_file")]
    moves: Option<String>,
    /// State document path, or - for stdin
    #[arg(long)]
    state_file: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a seeded random state as a state document
    Scramble {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random move count; without it the state is uniform over valid states
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Check the solvability conditions; exit 0 iff solvable
    Validate {
        #[command(flatten)]
        input: StateInput,
        #[arg(long)]
        json: bool,
    },
    /// Solve a state, or a seeded random state when no input is given
    Solve {
        #[command(flatten)]
        input: StateInput,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Exact counts
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = What::Group)]
        what: What,
        #[arg(long, default_value_t = 64)]
        precision: u32,
        #[arg(long)]
        json: bool,
    },
    /// Group order from the closed form, the Schreier-Sims oracle, or both
    Order {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Lower bound on the quarter-turn diameter
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        precision: u32,
        /// Count only reduced words
        #[arg(long)]
        tuned: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check every library move's effect
    VerifyMoves {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Draw the unfolded cube
    Render {
        #[command(flatten)]
        input: StateInput,
        #[arg(long)]
        ansi: bool,
    },
    /// Print the configuration tuple of a state
    Decompose {
        #[command(flatten)]
        input: StateInput,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    SConf,
    Orbits,
    Group,
    Stabilizer,
    SPhys,
    Bound,
    TunedBound,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Oracle,
    Both,
}

enum Failure {
    Domain(CubeError),
    Verdict,
    Usage(String),
}

impl From<CubeError> for Failure {
    fn from(e: CubeError) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<(), Failure>;

fn spec(n: usize) -> Result<CubeSpec, Failure> {
    Ok(CubeSpec::new(n)?)
}

fn state_document(state: &CubeState) -> Value {
    let stickers: Vec<String> = state.colors().iter().map(|c| c.letter().to_string()).collect();
    json!({ "n": state.n(), "stickers": stickers })
}

fn read_state_file(path: &str) -> Result<(usize, Vec<Color>), Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?
    };
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| CubeError::NotAConfiguration(format!("state document is not JSON: {e}")))?;
    let n = doc["n"]
        .as_u64()
        .ok_or_else(|| CubeError::NotAConfiguration("state document lacks n".into()))? as usize;
    let stickers = doc["stickers"]
        .as_array()
        .ok_or_else(|| CubeError::NotAConfiguration("state document lacks stickers".into()))?;
    let colors = stickers
        .iter()
        .map(|v| {
            let mut chars = v.as_str().unwrap_or("").chars();
            match (chars.next().and_then(Color::from_letter), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(CubeError::NotAConfiguration(format!("bad sticker {v}"))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((n, colors))
}

fn load_state(input: &StateInput) -> Result<CubeState, Failure> {
    if let Some(path) = &input.state_file {
        let (n, colors) = read_state_file(path)?;
        if input.n.is_some_and(|m| m != n) {
            return Err(CubeError::ShapeMismatch(format!("--n {} but the state file has n = {n}", input.n.unwrap())).into());
        }
        return Ok(lift_colors(spec(n)?, &colors)?);
    }
    let n = input.n.ok_or_else(|| Failure::Usage("--n is required without --state-file".into()))?;
    let spec = spec(n)?;
    let moves = MoveSequence::parse(input.moves.as_deref().unwrap_or(""), spec)?;
    Ok(CubeState::solved(spec).apply_sequence(&moves)?)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn versioned(mut v: Value) -> Value {
    v["version"] = json!(SCHEMA_VERSION);
    v
}

fn scramble(n: usize, seed: u64, length: Option<usize>) -> Outcome {
    let spec = spec(n)?;
    let mut doc = match length {
        Some(len) => {
            let moves = cubology::group_oracle::random_word(spec, len, seed);
            let state = CubeState::solved(spec).apply_sequence(&moves)?;
            let mut d = state_document(&state);
            d["moves"] = json!(moves.to_notation(n));
            d
        }
        None => state_document(&random_valid_configuration(spec, seed)),
    };
    doc["seed"] = json!(seed);
    println!("{}", serde_json::to_string(&versioned(doc)).expect("values serialize"));
    Ok(())
}

fn validate(input: &StateInput, as_json: bool) -> Outcome {
    let state = load_state(input)?;
    let report = validity_of_state(&state)?;
    if as_json {
        print_json(&versioned(serde_json::to_value(&report).expect("report serializes")));
    } else {
        for c in &report.conditions {
            let mark = if c.holds { "pass" } else { "FAIL" };
            if c.witnesses.is_empty() {
                println!("{mark}  {}", c.id);
            } else {
                println!("{mark}  {}  {}", c.id, c.witnesses.join(" "));
            }
        }
        println!("{}", if report.valid { "solvable" } else { "not solvable" });
    }
    if report.valid {
        Ok(())
    } else {
        eprintln!("NotSolvable");
        Err(Failure::Verdict)
    }
}

fn solve_cmd(input: &StateInput, seed: Option<u64>, as_json: bool) -> Outcome {
    let state = if input.moves.is_none() && input.state_file.is_none() {
        let n = input.n.ok_or_else(|| Failure::Usage("--n is required".into()))?;
        random_valid_configuration(spec(n)?, seed.unwrap_or(0))
    } else {
        load_state(input)?
    };
    let n = state.n();
    let trace = solve(&state)?;
    let verified = state.apply_sequence(&trace.total)?.is_solved();
    if as_json {
        let stages: Vec<Value> = trace
            .stages
            .iter()
            .map(|r| {
                json!({
                    "stage": r.stage.name(),
                    "moves": r.sequence.to_notation(n),
                    "length": r.sequence.len(),
                    "tuple": r.tuple,
                })
            })
            .collect();
        print_json(&versioned(json!({
            "n": n,
            "stages": stages,
            "total": trace.total.to_notation(n),
            "length": trace.total.len(),
            "verified": verified,
        })));
    } else {
        let mut cumulative = 0;
        for r in &trace.stages {
            cumulative += r.sequence.len();
            println!("{:<5} {:>6} {:>7}", r.stage.name(), r.sequence.len(), cumulative);
        }
        println!("total {} moves, verified: {verified}", trace.total.len());
        println!("{}", trace.total.to_notation(n));
    }
    if verified {
        Ok(())
    } else {
        Err(CubeError::InvalidState("solution does not solve the cube".into()).into())
    }
}

fn count(n: usize, what: What, precision: u32, as_json: bool) -> Outcome {
    spec(n)?;
    let exact = match what {
        What::SConf => Some(("s_conf", s_conf_size(n))),
        What::Orbits => Some(("orbits", orbit_count(n))),
        What::Group => Some(("group", group_order(n))),
        What::Stabilizer => Some(("stabilizer", stabilizer_order(n))),
        What::SPhys => Some(("s_phys", s_phys_size(n))),
        What::Bound | What::TunedBound => None,
    };
    match exact {
        Some((name, value)) if as_json => {
            print_json(&versioned(json!({ "n": n, "what": name, "value": value.to_str_radix(10) })));
            Ok(())
        }
        Some((_, value)) => {
            println!("{value}");
            Ok(())
        }
        None => bound(n, precision, matches!(what, What::TunedBound), as_json),
    }
}

fn order(n: usize, method: Method, as_json: bool) -> Outcome {
    let spec = spec(n)?;
    let formula = (method != Method::Oracle).then(|| group_order(n));
    let oracle = (method != Method::Formula).then(|| schreier_sims_order(&generators(spec)));
    let verdict = match (&formula, &oracle) {
        (Some(f), Some(o)) => Some(f == o),
        _ => None,
    };
    if as_json {
        print_json(&versioned(json!({
            "n": n,
            "formula": formula.as_ref().map(|v| v.to_str_radix(10)),
            "oracle": oracle.as_ref().map(|v| v.to_str_radix(10)),
            "match": verdict,
        })));
    } else {
        if let Some(f) = &formula {
            println!("formula {f}");
        }
        if let Some(o) = &oracle {
            println!("oracle  {o}");
        }
        match verdict {
            Some(true) => println!("MATCH"),
            Some(false) => println!("MISMATCH"),
            None => {}
        }
    }
    if verdict == Some(false) {
        eprintln!("Mismatch");
        Err(Failure::Verdict)
    } else {
        Ok(())
    }
}

fn bound(n: usize, precision: u32, tuned: bool, as_json: bool) -> Outcome {
    spec(n)?;
    let r = if tuned {
        tuned_lower_bound(n, precision)?
    } else {
        gods_number_lower_bound(n, precision)?
    };
    if as_json {
        let mut v = serde_json::to_value(&r).expect("bound serializes");
        v["kind"] = json!(if tuned { "tuned" } else { "plain" });
        print_json(&versioned(v));
    } else {
        println!("{}", r.ceiling);
        println!("bound in [{:.6}, {:.6}] at {} bits, {} basic moves", r.lower, r.upper, r.precision, r.basic_moves);
    }
    Ok(())
}

fn verify_moves(n: usize, as_json: bool) -> Outcome {
    let moves = library(spec(n)?)?;
    let all_pass = moves.iter().all(|m| m.report.pass);
    if as_json {
        let list: Vec<Value> = moves
            .iter()
            .map(|m| {
                json!({
                    "name": m.label(),
                    "moves": m.sequence.to_notation(n),
                    "expected": m.report.descriptor,
                    "pass": m.report.pass,
                    "observed": m.report.observed,
                    "problems": m.report.problems,
                })
            })
            .collect();
        print_json(&versioned(json!({ "n": n, "moves": list, "pass": all_pass })));
    } else {
        for m in &moves {
            let mark = if m.report.pass { "pass" } else { "FAIL" };
            println!("{mark}  {:<14} {}", m.label(), m.report.descriptor);
            for p in &m.report.problems {
                println!("      {p}");
            }
        }
    }
    if all_pass {
        Ok(())
    } else {
        eprintln!("ContractFailure");
        Err(Failure::Verdict)
    }
}

fn decompose_cmd(input: &StateInput, as_json: bool) -> Outcome {
    let state = load_state(input)?;
    let tuple = decompose(&state, &cached_atlas(state.spec()))?;
    if as_json {
        print_json(&versioned(serde_json::to_value(&tuple).expect("tuple serializes")));
        return Ok(());
    }
    println!("sigma {:?} x {:?}", tuple.sigma.images(), tuple.x);
    if let (Some(t), Some(z)) = (&tuple.tau_s, &tuple.z) {
        println!("tau_s {:?} z {:?}", t.images(), z);
    }
    for (t, y) in tuple.tau_c.iter().zip(&tuple.y) {
        println!("tau_c[{}] {:?} y {:?}", t.i, t.perm.images(), y.values);
    }
    for r in &tuple.rho_c {
        println!("rho_c[{}] {:?}", r.i, r.perm.images());
    }
    for r in &tuple.rho_e {
        println!("rho_e[{},{}] {:?}", r.i, r.j, r.perm.images());
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Scramble { n, seed, length, json: _ } => scramble(n, seed, length),
        Command::Validate { input, json } => validate(&input, json),
        Command::Solve { input, seed, json } => solve_cmd(&input, seed, json),
        Command::Count { n, what, precision, json } => count(n, what, precision, json),
        Command::Order { n, method, json } => order(n, method, json),
        Command::Bound { n, precision, tuned, json } => bound(n, precision, tuned, json),
        Command::VerifyMoves { n, json } => verify_moves(n, json),
        Command::Render { input, ansi } => {
            print!("{}", render_net_with(&load_state(&input)?, ansi));
            Ok(())
        }
        Command::Decompose { input, json } => decompose_cmd(&input, json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("usage: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            let name = e.name();
            let text = e.to_string();
            let detail = text.strip_prefix(name).map_or(text.as_str(), |t| t.trim_start_matches([':', ' ']));
            eprintln!("{name}: {detail}");
            ExitCode::from(1)
        }
    }
}
