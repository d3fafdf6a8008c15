use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use udg_core::analysis::sq_witness;
use udg_core::census::{run as census_run, CensusConfig, CensusSample};
use udg_core::error::Error;
use udg_core::euler::{
    euler_circuit, euler_circuits_per_component, hamiltonian_cycle_in_line_digraph,
};
use udg_core::io::{edge_list_string, parse_input, Input, InputFormat};
use udg_core::matrix::Tolerances;
use udg_core::oracle::{decide, OracleParams};
use udg_core::report::{analyze, AnalyzeOptions};
use udg_core::synthesis::{synthesize_coined, synthesize_specular, CoinSet};
use udg_core::walk::{distributions_csv, run as walk_run, Grouping, StartMode};
use udg_core::Pattern;

/// Exit codes: 0 success, 2 unreadable or unparsable input, 3 violated
/// precondition or invalid parameters, 4 no applicable constructive method,
/// 5 census invariant breach.
#[derive(Parser)]
#[command(name = "udg", version, about = "Digraphs of unitary matrices: analysis, synthesis, oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every randomized component.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Unitarity tolerance (default 1e-10).
    #[arg(long, global = true)]
    unitary_tol: Option<f64>,

    /// Zero threshold when reading supports (default 1e-12; oracle 1e-8).
    #[arg(long, global = true)]
    zero_tol: Option<f64>,

    /// Emit machine-readable JSON instead of text where applicable.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// `n m` header, then `tail head` per line.
    EdgeList,
    /// Square rows of 0/1 characters.
    Pattern,
}

impl FormatArg {
    fn to_format(self) -> InputFormat {
        match self {
            FormatArg::EdgeList => InputFormat::EdgeList,
            FormatArg::Pattern => InputFormat::PatternRows,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Pick a route from the input: coined with --line, specular otherwise.
    Auto,
    /// Block Fourier construction on a specular pattern.
    Specular,
    /// Coined-walk construction for the line digraph of the input.
    Coined,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Head,
    Tail,
}

#[derive(Args)]
struct InputArg {
    /// Path to the input file.
    input: PathBuf,

    /// Force the input format instead of detecting it.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct OracleArgs {
    /// Independent seeded restarts (default 32).
    #[arg(long)]
    restarts: Option<usize>,

    /// Projection iterations per restart (default 2000).
    #[arg(long)]
    max_iters: Option<usize>,

    /// Smallest modulus enforced on nonzero entries (default 1e-3).
    #[arg(long)]
    support_floor: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an input: well-formedness, quadrangularity, strong
    /// quadrangularity, specularity, balance, connectivity.
    Analyze {
        #[command(flatten)]
        input: InputArg,
        /// Also run the feasibility oracle and attach its verdict.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        oracle_args: OracleArgs,
    },
    /// Construct a unitary with a prescribed pattern, when a constructive
    /// route applies.
    Synthesize {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Synthesize for the line digraph of the input digraph.
        #[arg(long)]
        line: bool,
    },
    /// Decide feasibility of a pattern numerically, with combinatorial
    /// refutation.
    Oracle {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        oracle_args: OracleArgs,
    },
    /// Compute the line digraph of a digraph.
    Linedigraph {
        #[command(flatten)]
        input: InputArg,
    },
    /// Euler circuits of a degree-balanced digraph, and their lift to a
    /// Hamiltonian cycle of the line digraph.
    Euler {
        #[command(flatten)]
        input: InputArg,
        /// One circuit per component with arcs, instead of requiring strong
        /// connectivity.
        #[arg(long)]
        per_component: bool,
        /// Print the lifted Hamiltonian cycle of the line digraph.
        #[arg(long)]
        hamiltonian: bool,
    },
    /// Simulate the coined walk on a degree-balanced digraph; prints CSV.
    Walk {
        #[command(flatten)]
        input: InputArg,
        /// Number of steps; distributions for 0..=steps are printed.
        #[arg(long)]
        steps: usize,
        /// `uniform` or `arc:K` for a point mass on arc K.
        #[arg(long, default_value = "uniform")]
        start: String,
        /// Group arc probabilities by head (arrival) or tail (departure).
        #[arg(long, value_enum, default_value = "head")]
        group: GroupArg,
    },
    /// Classify every pattern of a given size (sampled for n = 4); rows as
    /// CSV on stdout, summary as JSON on stderr.
    Census {
        /// Pattern size.
        #[arg(long)]
        n: usize,
        /// Sample this many candidate patterns instead of exhausting.
        #[arg(long)]
        sample: Option<usize>,
        /// Write the CSV rows to a file instead of stdout.
        #[arg(long)]
        rows: Option<PathBuf>,
        /// Write the JSON summary to a file instead of stderr.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        oracle_args: OracleArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::InvariantBreach { .. } => 5,
        _ => 3,
    }
}

fn fail(e: Error) -> Failure {
    Failure::new(exit_code(&e), e.to_string())
}

fn read_input(arg: &InputArg) -> Result<Input, Failure> {
    let text = fs::read_to_string(&arg.input).map_err(|e| {
        Failure::new(2, format!("cannot read {}: {e}", arg.input.display()))
    })?;
    parse_input(&text, arg.format.map(FormatArg::to_format)).map_err(fail)
}

impl Cli {
    fn tolerances(&self) -> Tolerances {
        let defaults = Tolerances::default();
        Tolerances {
            unitary_tol: self.unitary_tol.unwrap_or(defaults.unitary_tol),
            zero_tol: self.zero_tol.unwrap_or(defaults.zero_tol),
        }
    }

    fn oracle_params(&self, args: &OracleArgs) -> OracleParams {
        let defaults = OracleParams::default();
        OracleParams {
            restarts: args.restarts.unwrap_or(defaults.restarts),
            max_iters: args.max_iters.unwrap_or(defaults.max_iters),
            unitary_tol: self.unitary_tol.unwrap_or(defaults.unitary_tol),
            support_floor: args.support_floor.unwrap_or(defaults.support_floor),
            zero_tol: self.zero_tol.unwrap_or(defaults.zero_tol),
            seed: self.seed,
        }
    }
}

fn yes_no(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

fn cmd_analyze(cli: &Cli, input: &InputArg, oracle: bool, args: &OracleArgs) -> Result<(), Failure> {
    let parsed = read_input(input)?;
    let options = AnalyzeOptions {
        oracle: oracle.then(|| cli.oracle_params(args)),
        ..AnalyzeOptions::default()
    };
    let report = analyze(&parsed, &options).map_err(fail)?;
    if cli.json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
        return Ok(());
    }
    println!("pattern: {}", report.pattern.join("/"));
    if report.well_formed {
        println!("well-formed: yes");
    } else {
        println!("well-formed: no (offenders: {:?})", report.offenders);
    }
    println!("quadrangular: {}", yes_no(report.quadrangular));
    if let Some(v) = &report.quadrangular_violation {
        println!(
            "  violated by {} {} and {} sharing only index {}",
            v.side, v.first, v.second, v.shared
        );
    }
    if report.sq_undecided {
        println!("strongly quadrangular: undecided (search cap exceeded)");
    } else {
        println!(
            "strongly quadrangular: {}",
            yes_no(report.strongly_quadrangular)
        );
    }
    if let Some(w) = &report.sq_witness {
        println!(
            "  witness: {} {:?} share only indices {:?}",
            w.side, w.set, w.shared
        );
    }
    println!("specular (line digraph): {}", yes_no(report.specular));
    println!("square blocks: {}", yes_no(report.square_blocks));
    println!("degree-balanced: {}", if report.degree_balanced { "yes" } else { "no" });
    println!(
        "strongly connected: {}",
        if report.strongly_connected { "yes" } else { "no" }
    );
    if let Some(verdict) = &report.verdict {
        println!(
            "oracle verdict: {}",
            serde_json::to_string(verdict).expect("verdict serializes")
        );
    }
    Ok(())
}

fn attach_witness(p: &Pattern) -> Option<udg_core::SqWitness> {
    sq_witness(p, udg_core::analysis::DEFAULT_SQ_CAP)
        .ok()
        .flatten()
}

fn cmd_synthesize(cli: &Cli, input: &InputArg, method: MethodArg, line: bool) -> Result<(), Failure> {
    let parsed = read_input(input)?;
    let tols = cli.tolerances();
    let no_method = |e: Error, target: &Pattern| -> Failure {
        let mut message = format!("no applicable constructive method: {e}");
        if let Some(w) = attach_witness(target) {
            message.push_str(&format!(
                "; strong quadrangularity witness: {} {:?} share only {:?}",
                w.side, w.set, w.shared
            ));
        }
        Failure::new(4, message)
    };
    let coined_route = matches!(method, MethodArg::Coined)
        || (matches!(method, MethodArg::Auto) && line);
    if coined_route {
        let d = parsed.digraph();
        let target = match d.line_digraph() {
            Ok((l, _)) => l.pattern(),
            Err(_) => d.pattern(),
        };
        let (cert, labeling) = synthesize_coined(&d, &CoinSet::fourier(), &tols)
            .map_err(|e| match e {
                Error::NotDegreeBalanced { .. } | Error::EmptyArcSet => no_method(e, &target),
                other => fail(other),
            })?;
        let arcs: Vec<[usize; 2]> = labeling
            .arcs()
            .iter()
            .map(|a| [a.tail, a.head])
            .collect();
        if cli.json {
            let out = json!({
                "method": "coined",
                "certificate": cert,
                "labeling": arcs,
            });
            println!("{out}");
        } else {
            println!("method: coined");
            println!("order: {}", cert.matrix.n());
            println!("unitarity residual: {:.3e}", cert.unitarity_residual);
            println!("support exact: {}", cert.support_exact);
            println!("labeling: {arcs:?}");
        }
        return Ok(());
    }
    let target = parsed.pattern();
    let cert = synthesize_specular(&target, &tols).map_err(|e| match e {
        Error::NotSpecular { .. } | Error::NonSquareBlock { .. } => no_method(e, &target),
        other => fail(other),
    })?;
    if cli.json {
        let out = json!({
            "method": "specular",
            "certificate": cert,
        });
        println!("{out}");
    } else {
        println!("method: specular");
        println!("order: {}", cert.matrix.n());
        println!("unitarity residual: {:.3e}", cert.unitarity_residual);
        println!("support exact: {}", cert.support_exact);
    }
    Ok(())
}

fn cmd_oracle(cli: &Cli, input: &InputArg, args: &OracleArgs) -> Result<(), Failure> {
    let parsed = read_input(input)?;
    let mut params = cli.oracle_params(args);
    if cli.zero_tol.is_none() {
        params.zero_tol = OracleParams::default().zero_tol;
    }
    let verdict = decide(&parsed.pattern(), &params).map_err(fail)?;
    println!("{}", serde_json::to_string(&verdict).expect("verdict serializes"));
    Ok(())
}

fn cmd_linedigraph(cli: &Cli, input: &InputArg) -> Result<(), Failure> {
    let parsed = read_input(input)?;
    let d = parsed.digraph();
    let (line, labeling) = d.line_digraph().map_err(fail)?;
    if cli.json {
        let arcs: Vec<[usize; 2]> = line.arcs().iter().map(|a| [a.tail, a.head]).collect();
        let labels: Vec<[usize; 2]> = labeling
            .arcs()
            .iter()
            .map(|a| [a.tail, a.head])
            .collect();
        let out = json!({
            "n": line.vertex_count(),
            "arcs": arcs,
            "labeling": labels,
        });
        println!("{out}");
    } else {
        print!("{}", edge_list_string(&line));
    }
    Ok(())
}

fn cmd_euler(
    cli: &Cli,
    input: &InputArg,
    per_component: bool,
    hamiltonian: bool,
) -> Result<(), Failure> {
    let parsed = read_input(input)?;
    let d = parsed.digraph();
    if hamiltonian {
        let cycle = hamiltonian_cycle_in_line_digraph(&d).map_err(fail)?;
        if cli.json {
            println!(
                "{}",
                json!({ "hamiltonian_cycle": cycle.vertices })
            );
        } else {
            let words: Vec<String> = cycle.vertices.iter().map(|v| v.to_string()).collect();
            println!("{}", words.join(" "));
        }
        return Ok(());
    }
    let circuits = if per_component {
        euler_circuits_per_component(&d).map_err(fail)?
    } else {
        vec![euler_circuit(&d).map_err(fail)?]
    };
    if cli.json {
        let arcs: Vec<&Vec<usize>> = circuits.iter().map(|c| &c.arcs).collect();
        println!("{}", json!({ "circuits": arcs }));
    } else {
        for c in &circuits {
            let words: Vec<String> = c.arcs.iter().map(|a| a.to_string()).collect();
            println!("{}", words.join(" "));
        }
    }
    Ok(())
}

fn parse_start(start: &str) -> Result<StartMode, Failure> {
    if start == "uniform" {
        return Ok(StartMode::Uniform);
    }
    if let Some(rest) = start.strip_prefix("arc:") {
        if let Ok(arc) = rest.parse::<usize>() {
            return Ok(StartMode::Delta(arc));
        }
    }
    Err(Failure::new(
        3,
        format!("invalid --start {start:?}: expected \"uniform\" or \"arc:K\""),
    ))
}

fn cmd_walk(
    cli: &Cli,
    input: &InputArg,
    steps: usize,
    start: &str,
    group: GroupArg,
) -> Result<(), Failure> {
    let parsed = read_input(input)?;
    let d = parsed.digraph();
    let mode = parse_start(start)?;
    let grouping = match group {
        GroupArg::Head => Grouping::Head,
        GroupArg::Tail => Grouping::Tail,
    };
    let dists = walk_run(&d, steps, mode, &CoinSet::fourier(), grouping, &cli.tolerances())
        .map_err(fail)?;
    print!("{}", distributions_csv(&dists));
    Ok(())
}

fn cmd_census(
    cli: &Cli,
    n: usize,
    sample: Option<usize>,
    rows_path: Option<&PathBuf>,
    summary_path: Option<&PathBuf>,
    args: &OracleArgs,
) -> Result<(), Failure> {
    let mut oracle = cli.oracle_params(args);
    if cli.zero_tol.is_none() {
        oracle.zero_tol = OracleParams::default().zero_tol;
    }
    let config = CensusConfig {
        n,
        sample: sample.map(|count| CensusSample {
            count,
            seed: cli.seed,
        }),
        oracle,
        sq_cap: udg_core::analysis::DEFAULT_SQ_CAP,
    };
    let outcome = census_run(&config).map_err(fail)?;
    let csv = udg_core::census::rows_csv(&outcome.rows);
    match rows_path {
        Some(path) => fs::write(path, &csv)
            .map_err(|e| Failure::new(3, format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    let summary =
        serde_json::to_string(&outcome.summary).expect("summary serializes");
    match summary_path {
        Some(path) => fs::write(path, summary + "\n")
            .map_err(|e| Failure::new(3, format!("cannot write {}: {e}", path.display())))?,
        None => eprintln!("{summary}"),
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze {
            input,
            oracle,
            oracle_args,
        } => cmd_analyze(cli, input, *oracle, oracle_args),
        Command::Synthesize {
            input,
            method,
            line,
        } => cmd_synthesize(cli, input, *method, *line),
        Command::Oracle { input, oracle_args } => cmd_oracle(cli, input, oracle_args),
        Command::Linedigraph { input } => cmd_linedigraph(cli, input),
        Command::Euler {
            input,
            per_component,
            hamiltonian,
        } => cmd_euler(cli, input, *per_component, *hamiltonian),
        Command::Walk {
            input,
            steps,
            start,
            group,
        } => cmd_walk(cli, input, *steps, start, *group),
        Command::Census {
            n,
            sample,
            rows,
            summary,
            oracle_args,
        } => cmd_census(cli, *n, *sample, rows.as_ref(), summary.as_ref(), oracle_args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
