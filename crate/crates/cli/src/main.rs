//! `pursuit`: command-line front end for the pursuit game solvers.
//!
//! Every command prints `{"schema":1,"command":..,"params":..,"results":..}`
//! (or a CSV table with `--format csv`). Exit codes: 0 on success, 2 on
//! invalid input, 3 when a solver fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use pursuit_core::distribution::Distribution;
use pursuit_core::experiments::{
    experiment_constructions, experiment_enumerate, experiment_products, experiment_random_stalemate,
    EnumerationChecks, ExperimentError, ExperimentReport, BASE_GRAPHS,
};
use pursuit_core::framework::{Action, FrameworkError};
use pursuit_core::gambler::{
    capture_time_delays, evasion, evasion_time_varying, multicop_capture_time, EdgeDelays, GamblerError,
    TimeVaryingDistribution,
};
use pursuit_core::graph::{emit_graph6, generate, parse_edge_list, parse_graph6, FamilySpec, Graph, GraphError};
use pursuit_core::pursuit::{solve, SolveError};
use pursuit_core::random_killer::{
    best_first_position, cop_value, evaluate_policy, killer_best_distribution, OptimizerConfig, RandomKillerError,
};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "pursuit", version, about = "Exact solvers for cop-and-killer and gambler pursuit games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the cop-and-killer game.
    Solve {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimal expected time to catch a gambler.
    GamblerTime {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        gambler: GamblerArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimal probability that a gambler survives m rounds.
    Evade {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        gambler: GamblerArgs,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Expected capture time for several cops.
    Multicop {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = 2)]
        cops: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cop against a random killer; searches the killer's distribution when
    /// --dist is omitted.
    RandomKiller {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build a graph and print it.
    Generate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Product verdicts against their predictions.
    Products {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive checks over all labeled graphs up to n vertices.
    Enumerate {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Stalemate rate of random graphs.
    RandomExperiment {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verdicts of the fixed constructions.
    Constructions {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphArgs {
    /// Edge list file (`n m` then `u v` lines); `.g6` files are read as graph6.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    g6: Option<String>,
    /// e.g. `cycle:5`, `grid:2,3`, `gnp:10,0.4,7`.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct GamblerArgs {
    /// `{"p": [..]}`, one probability per line, or `{"layers": [[..], ..]}`
    /// for evade.
    #[arg(long)]
    dist: PathBuf,
    /// Lines `u v n`: crossing u -> v costs n extra rounds.
    #[arg(long)]
    delays: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure::Solver(e.to_string())
    }
}

impl From<FrameworkError> for Failure {
    fn from(e: FrameworkError) -> Self {
        Failure::Solver(e.to_string())
    }
}

impl From<GamblerError> for Failure {
    fn from(e: GamblerError) -> Self {
        match e {
            GamblerError::Framework(inner) => inner.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<RandomKillerError> for Failure {
    fn from(e: RandomKillerError) -> Self {
        match e {
            RandomKillerError::Framework(inner) => inner.into(),
            RandomKillerError::CyclicPolicy { .. } => Failure::Solver(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Solve(inner) => inner.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// Command output: the JSON results plus the rows of its CSV form.
struct Output {
    params: Value,
    results: Value,
    rows: Vec<Value>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, output_args, result) = run(cli.command);
    let outcome = result.and_then(|out| emit(name, &out, output_args));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> (&'static str, OutputArgs, Result<Output, Failure>) {
    match command {
        Command::Solve { graph, output } => ("solve", output, cmd_solve(&graph)),
        Command::GamblerTime { graph, gambler, output } => ("gambler-time", output, cmd_gambler_time(&graph, &gambler)),
        Command::Evade { graph, gambler, m, output } => ("evade", output, cmd_evade(&graph, &gambler, m)),
        Command::Multicop { graph, dist, cops, output } => ("multicop", output, cmd_multicop(&graph, &dist, cops)),
        Command::RandomKiller {
            graph,
            dist,
            start,
            seed,
            output,
        } => ("random-killer", output, cmd_random_killer(&graph, dist.as_deref(), start, seed)),
        Command::Generate { graph, output } => ("generate", output, cmd_generate(&graph)),
        Command::Products { output } => ("products", output, report(json!({}), experiment_products(&BASE_GRAPHS))),
        Command::Enumerate { n, output } => (
            "enumerate",
            output,
            report(json!({ "n": n }), experiment_enumerate(n, EnumerationChecks::default())),
        ),
        Command::RandomExperiment {
            n,
            c,
            samples,
            seed,
            output,
        } => (
            "random-experiment",
            output,
            report(
                json!({ "n": n, "c": c, "samples": samples, "seed": seed }),
                experiment_random_stalemate(n, c, samples, seed),
            ),
        ),
        Command::Constructions { output } => ("constructions", output, report(json!({}), experiment_constructions())),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(args: &GraphArgs) -> Result<(Graph, Value), Failure> {
    if let Some(path) = &args.graph {
        let text = read(path)?;
        let graph = if path.extension().is_some_and(|e| e == "g6") {
            parse_graph6(&text)?
        } else {
            let parsed = parse_edge_list(&text)?;
            if parsed.has_duplicates() {
                eprintln!("warning: {} duplicate edges ignored", parsed.duplicate_edges);
            }
            parsed.graph
        };
        return Ok((graph, json!({ "graph": path })));
    }
    if let Some(g6) = &args.g6 {
        return Ok((parse_graph6(g6)?, json!({ "g6": g6 })));
    }
    let name = args.family.as_deref().expect("clap enforces one graph source");
    let spec: FamilySpec = name.parse()?;
    Ok((generate(spec)?, json!({ "family": name })))
}

fn load_dist(path: &Path) -> Result<Distribution, Failure> {
    Distribution::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_delays(graph: &Graph, path: Option<&Path>) -> Result<EdgeDelays, Failure> {
    match path {
        Some(path) => Ok(EdgeDelays::parse(graph, &read(path)?)?),
        None => Ok(EdgeDelays::zero(graph)),
    }
}

fn with(mut params: Value, extra: Value) -> Value {
    if let (Value::Object(base), Value::Object(more)) = (&mut params, extra) {
        base.extend(more);
    }
    params
}

fn action_value(action: Action) -> Value {
    match action {
        Action::Stay => json!("stay"),
        Action::MoveTo(u) => json!(u),
    }
}

fn cmd_solve(args: &GraphArgs) -> Result<Output, Failure> {
    let (graph, params) = load_graph(args)?;
    let outcome = solve(&graph)?;
    let results = json!({
        "verdict": outcome.verdict.verdict(),
        "plies": outcome.verdict.plies(),
        "cop_start": outcome.cop_start,
        "killer_reply": outcome.killer_reply,
        "witness": outcome.witness,
    });
    let rows = outcome
        .witness
        .iter()
        .map(|m| json!({ "cop": m.state.cop, "killer": m.state.killer, "turn": m.state.turn, "to": m.to }))
        .collect();
    Ok(Output { params, results, rows })
}

fn vertex_rows(values: &[f64], actions: &[Action]) -> Vec<Value> {
    values
        .iter()
        .zip(actions)
        .enumerate()
        .map(|(v, (t, a))| json!({ "vertex": v, "value": t, "action": action_value(*a) }))
        .collect()
}

fn cmd_gambler_time(args: &GraphArgs, gambler: &GamblerArgs) -> Result<Output, Failure> {
    let (graph, params) = load_graph(args)?;
    let dist = load_dist(&gambler.dist)?;
    let delays = load_delays(&graph, gambler.delays.as_deref())?;
    let policy = capture_time_delays(&graph, &dist, &delays)?;
    let params = with(params, json!({ "dist": gambler.dist, "delays": gambler.delays }));
    let results = json!({
        "values": policy.values,
        "actions": policy.actions.iter().map(|&a| action_value(a)).collect::<Vec<_>>(),
    });
    let rows = vertex_rows(&policy.values, &policy.actions);
    Ok(Output { params, results, rows })
}

fn cmd_evade(args: &GraphArgs, gambler: &GamblerArgs, m: usize) -> Result<Output, Failure> {
    let (graph, params) = load_graph(args)?;
    let delays = load_delays(&graph, gambler.delays.as_deref())?;
    let text = read(&gambler.dist)?;
    let layered: Option<Vec<Vec<f64>>> = serde_json::from_str::<Value>(&text)
        .ok()
        .and_then(|doc| doc.get("layers").cloned())
        .map(|layers| serde_json::from_value(layers).map_err(|e| Failure::Input(format!("layers: {e}"))))
        .transpose()?;
    let table = match layered {
        Some(layers) => {
            let layers = layers
                .into_iter()
                .map(Distribution::new)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Input(e.to_string()))?;
            evasion_time_varying(&graph, &TimeVaryingDistribution::new(layers), m, &delays)?
        }
        None => evasion(&graph, &load_dist(&gambler.dist)?, m, &delays)?,
    };
    let params = with(params, json!({ "dist": gambler.dist, "delays": gambler.delays, "m": m }));
    let rows = table
        .values
        .iter()
        .enumerate()
        .flat_map(|(rounds, layer)| {
            layer
                .iter()
                .enumerate()
                .map(move |(v, e)| json!({ "m": rounds, "vertex": v, "value": e }))
        })
        .collect();
    let results = json!({ "values": table.values[m], "table": table.values });
    Ok(Output { params, results, rows })
}

fn cmd_multicop(args: &GraphArgs, dist: &Path, cops: usize) -> Result<Output, Failure> {
    let (graph, params) = load_graph(args)?;
    let result = multicop_capture_time(&graph, &load_dist(dist)?, cops)?;
    let params = with(params, json!({ "dist": dist, "cops": cops }));
    let n = graph.order();
    let rows: Vec<Value> = result
        .policy
        .values
        .iter()
        .zip(&result.policy.actions)
        .enumerate()
        .map(|(id, (t, a))| {
            let target = match a {
                Action::Stay => Value::Null,
                Action::MoveTo(u) => json!(pursuit_core::gambler::decode_tuple(*u, n, cops)),
            };
            json!({
                "cops": pursuit_core::gambler::decode_tuple(id, n, cops),
                "value": t,
                "move_to": target,
            })
        })
        .collect();
    let best = result
        .policy
        .values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let results = json!({ "best": best, "states": rows });
    Ok(Output { params, results, rows })
}

fn cmd_random_killer(args: &GraphArgs, dist: Option<&Path>, start: usize, seed: u64) -> Result<Output, Failure> {
    let (graph, params) = load_graph(args)?;
    let (dist, searched) = match dist {
        Some(path) => (load_dist(path)?, None),
        None => {
            let config = OptimizerConfig {
                seed,
                ..OptimizerConfig::default()
            };
            let (d, value) = killer_best_distribution(&graph, start, &config)?;
            (d, Some(value))
        }
    };
    let value = cop_value(&graph, &dist)?;
    let first = best_first_position(&graph, &value.policy.values, start)?;
    let mut rows = Vec::new();
    for v in 0..graph.order() {
        let triple = evaluate_policy(&graph, &dist, &value.policy.actions, v)?;
        rows.push(json!({
            "vertex": v,
            "value": value.policy.values[v],
            "action": action_value(value.policy.actions[v]),
            "stalemate_terminal": value.stalemate_terminal[v],
            "win": triple.win,
            "lose": triple.lose,
            "stalemate": triple.stalemate,
        }));
    }
    let params = with(params, json!({ "dist": dist_source(dist.probs(), searched.is_some()), "start": start, "seed": seed }));
    let results = json!({
        "distribution": dist,
        "searched": searched.is_some(),
        "game_value": value.policy.values[first],
        "first_move": first,
        "outcome": evaluate_policy(&graph, &dist, &value.policy.actions, first)?,
        "vertices": rows,
    });
    Ok(Output { params, results, rows })
}

fn dist_source(p: &[f64], searched: bool) -> Value {
    if searched {
        json!("optimized")
    } else {
        json!(p)
    }
}

fn cmd_generate(args: &GraphArgs) -> Result<Output, Failure> {
    let (graph, params) = load_graph(args)?;
    let edges: Vec<(usize, usize)> = graph.edges().collect();
    let results = json!({
        "order": graph.order(),
        "size": graph.size(),
        "graph6": emit_graph6(&graph).ok(),
        "edges": edges,
    });
    let rows = edges.iter().map(|(u, v)| json!({ "u": u, "v": v })).collect();
    Ok(Output { params, results, rows })
}

fn report(params: Value, result: Result<ExperimentReport, ExperimentError>) -> Result<Output, Failure> {
    let report = result?;
    eprintln!(
        "{}: {} in {:.2?}",
        report.experiment,
        if report.passed() { "all checks passed" } else { "some checks failed" },
        report.duration
    );
    let rows = report.cases.clone();
    Ok(Output {
        params,
        results: serde_json::to_value(&report).expect("reports serialize"),
        rows,
    })
}

fn emit(command: &str, out: &Output, args: OutputArgs) -> Result<(), Failure> {
    let text = match args.format {
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA,
                "command": command,
                "params": out.params,
                "results": out.results,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&out.rows)?,
    };
    match &args.out {
        Some(path) => fs::write(path, &text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(e.to_string())),
    }
}

/// One column per key seen in any row, in sorted order. Nested values are
/// written as JSON.
fn to_csv(rows: &[Value]) -> Result<String, Failure> {
    let mut columns: Vec<String> = Vec::new();
    for row in rows {
        if let Value::Object(map) = row {
            for key in map.keys() {
                if !columns.contains(key) {
                    columns.push(key.clone());
                }
            }
        }
    }
    columns.sort();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Failure::Input(e.to_string());
    writer.write_record(&columns).map_err(fail)?;
    let empty = Map::new();
    for row in rows {
        let map = row.as_object().unwrap_or(&empty);
        let record: Vec<String> = columns
            .iter()
            .map(|key| match map.get(key) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(other) => other.to_string(),
            })
            .collect();
        writer.write_record(&record).map_err(fail)?;
    }
    let bytes = writer.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
