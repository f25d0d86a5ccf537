//! Command line front end.
//!
//! Subcommands mirror the library pipeline: `parse` normalizes a
//! network, `encode` emits DIMACS, `transitions`/`stg`/`fixedpoints`
//! run the SAT analysis, `classic-stg` builds the baseline semantics and
//! `compare` diffs two graph JSON files. Exit codes: 0 on success, 1
//! when a size guard stops the run, 2 on invalid input. Timings go to
//! stderr; stdout stays deterministic and machine-readable.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fobnn_sat::{
    backend_from_env, build_fobnn, build_stg, classic_stg, compare, detect_mass_action,
    emit_dimacs, encode, flatten, open_session, parse_coresbml, parse_native, render_native,
    BaseState, Fobnn, ReactionNetwork, Result, TransitionGraph, DEFAULT_LOOP_LIMIT,
};

#[derive(Parser)]
#[command(
    name = "fobnn-sat",
    version,
    about = "Sign-abstracted boolean transition analysis of reaction networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a network and print its canonical native form.
    Parse(InputArgs),
    /// Compile the transition formula to CNF and print DIMACS.
    Encode {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        formula: FormulaArgs,
    },
    /// Enumerate boolean transitions, one `from -> to` per line.
    Transitions {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Only transitions out of this state, e.g. `S=+,E=+,C=0,P=0`.
        #[arg(long)]
        from: Option<String>,
        /// Stop after this many transitions.
        #[arg(long)]
        limit: Option<usize>,
        /// Include derivative signs (each witness listed separately).
        #[arg(long)]
        extended: bool,
    },
    /// Build the full state transition graph.
    Stg {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        formula: FormulaArgs,
        #[command(flatten)]
        output: GraphOutputArgs,
        /// Graph over states extended with derivative signs.
        #[arg(long)]
        extended: bool,
    },
    /// List the fixed points: states that can only step to themselves.
    #[command(name = "fixedpoints")]
    FixedPoints {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Abort after examining this many self-loop candidates.
        #[arg(long, default_value_t = DEFAULT_LOOP_LIMIT)]
        loop_limit: usize,
    },
    /// Build the state transition graph of the classic semantics.
    ClassicStg {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: GraphOutputArgs,
    },
    /// Compare two graph JSON files node by node and edge by edge.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Network file: native text (`.rn`) or XML (`.xml`).
    file: PathBuf,
    /// Override the format inferred from the file extension.
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    /// Native reaction network text.
    Rn,
    /// The XML dialect.
    Coresbml,
}

#[derive(Args)]
struct FormulaArgs {
    /// Add `X' >= X` constraints: `off`, `all`, `auto` (species whose
    /// consuming reactions all follow mass action), or a comma-separated
    /// species list.
    #[arg(long, default_value = "off")]
    mass_action: String,
    /// File with extra constraints over `X`/`X'`, `=` or `>=` atoms
    /// joined by `and`.
    #[arg(long)]
    constraints: Option<PathBuf>,
}

#[derive(Args)]
struct GraphOutputArgs {
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    format: GraphFormat,
    /// Drop `=0` entries from DOT node labels.
    #[arg(long)]
    dot_zero: bool,
    /// Build the graph even above the species guard.
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into()
    })
}

fn load_network(args: &InputArgs) -> Result<ReactionNetwork> {
    let text = read_file(&args.file)?;
    let format = match args.input_format {
        Some(f) => f,
        None => match args.file.extension().and_then(|e| e.to_str()) {
            Some("xml") => InputFormat::Coresbml,
            _ => InputFormat::Rn,
        },
    };
    match format {
        InputFormat::Rn => parse_native(&text),
        InputFormat::Coresbml => parse_coresbml(&text),
    }
}

fn build_formula(rn: &ReactionNetwork, args: &FormulaArgs) -> Result<Fobnn> {
    let mut f = build_fobnn(rn)?;
    let mass_action: Vec<String> = match args.mass_action.as_str() {
        "off" => vec![],
        "all" => rn.species.clone(),
        "auto" => detect_mass_action(rn),
        list => list.split(',').map(|s| s.trim().to_string()).collect(),
    };
    if !mass_action.is_empty() {
        f.add_mass_action_constraints(&mass_action)?;
    }
    if let Some(path) = &args.constraints {
        let text = read_file(path)?;
        f.add_constraint_text(&text, &rn.constants)?;
    }
    Ok(f)
}

fn parse_from(state: Option<&str>, species: &[String]) -> Result<Option<BaseState>> {
    state.map(|s| BaseState::parse(s, species)).transpose()
}

/// Record where a graph came from so exported artifacts are self-describing.
fn stamp_graph(graph: &mut TransitionGraph, input: &InputArgs, formula: Option<&FormulaArgs>) {
    if let Some(stem) = input.file.file_stem().and_then(|s| s.to_str()) {
        graph.metadata.insert("model".into(), stem.to_string());
    }
    if let Some(formula) = formula {
        graph.metadata.insert("mass-action".into(), formula.mass_action.clone());
        if let Some(path) = &formula.constraints {
            graph.metadata.insert("constraints".into(), path.display().to_string());
        }
    }
}

fn print_graph(graph: &TransitionGraph, output: &GraphOutputArgs) {
    match output.format {
        GraphFormat::Dot => print!("{}", graph.to_dot(output.dot_zero)),
        GraphFormat::Json => print!("{}", graph.to_json()),
    }
}

fn run(cli: Cli) -> Result<()> {
    let start = Instant::now();
    match cli.command {
        Command::Parse(input) => {
            let rn = load_network(&input)?;
            print!("{}", render_native(&rn));
        }
        Command::Encode { input, formula } => {
            let rn = load_network(&input)?;
            let f = build_formula(&rn, &formula)?;
            let (cnf, registry) = encode(&flatten(&f));
            print!("{}", emit_dimacs(&cnf, &registry));
        }
        Command::Transitions { input, formula, from, limit, extended } => {
            let rn = load_network(&input)?;
            let f = build_formula(&rn, &formula)?;
            let mut session = open_session(&f, backend_from_env()?);
            let from = parse_from(from.as_deref(), &f.species)?;
            let mut lines: Vec<String> = if extended {
                session
                    .enumerate_extended_transitions(from.as_ref(), limit)?
                    .iter()
                    .map(|t| {
                        format!(
                            "{} -> {}",
                            t.from.render(&f.species),
                            t.to.render(&f.species)
                        )
                    })
                    .collect()
            } else {
                session
                    .enumerate_transitions(from.as_ref(), limit)?
                    .iter()
                    .map(|t| {
                        format!(
                            "{} -> {}",
                            t.from.render(&f.species),
                            t.to.render(&f.species)
                        )
                    })
                    .collect()
            };
            let truncated = limit.is_some_and(|n| lines.len() == n);
            lines.sort();
            for line in lines {
                println!("{line}");
            }
            if truncated {
                eprintln!("note: stopped at --limit; the enumeration may be incomplete");
            }
        }
        Command::Stg { input, formula, output, extended } => {
            let rn = load_network(&input)?;
            let f = build_formula(&rn, &formula)?;
            let mut graph = build_stg(&f, backend_from_env()?, extended, output.force)?;
            stamp_graph(&mut graph, &input, Some(&formula));
            print_graph(&graph, &output);
        }
        Command::FixedPoints { input, formula, loop_limit } => {
            let rn = load_network(&input)?;
            let f = build_formula(&rn, &formula)?;
            let mut session = open_session(&f, backend_from_env()?);
            let mut lines: Vec<String> = session
                .find_fixed_points(loop_limit)?
                .iter()
                .map(|s| s.render(&f.species))
                .collect();
            lines.sort();
            for line in lines {
                println!("{line}");
            }
        }
        Command::ClassicStg { input, output } => {
            let rn = load_network(&input)?;
            let mut graph = classic_stg(&rn, output.force)?;
            stamp_graph(&mut graph, &input, None);
            print_graph(&graph, &output);
        }
        Command::Compare { left, right, format } => {
            let lg = TransitionGraph::from_json(&read_file(&left)?)?;
            let rg = TransitionGraph::from_json(&read_file(&right)?)?;
            let report = compare(&lg, &rg)?;
            match format {
                ReportFormat::Text => println!("{report}"),
                ReportFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
            }
        }
    }
    eprintln!("time: {} ms", start.elapsed().as_millis());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_guard() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
