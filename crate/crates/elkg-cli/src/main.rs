//! Command-line interface: convert event logs into trace graphs,
//! flatten object-centric logs through a perspective, query traces, and
//! report graph statistics.
//!
//! Payload goes to standard output, diagnostics and `--stats` to
//! standard error, so commands compose in pipelines. Exit codes:
//! 0 success, 1 input/validation error, 2 I/O error, 64 usage error.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use elkg::term::Term;
use elkg::vocab;
use elkg::{Graph, IriScheme, ResultFormat, TraceIndex};

#[derive(Parser)]
#[command(name = "elkg", version, about = "Event log knowledge graphs: convert, flatten, query")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert an event log into a Turtle trace graph.
    Convert {
        /// Input file, or `-` for standard input.
        input: PathBuf,
        /// Input log format.
        #[arg(long, value_enum)]
        format: LogFormat,
        /// Base namespace for minted IRIs (default: derived from the
        /// input file name).
        #[arg(long)]
        base_iri: Option<String>,
        /// Output file (default: standard output).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Report phase timings and counts on standard error.
        #[arg(long)]
        stats: bool,
    },
    /// Flatten an OCEL 2.0 log into traces through a perspective.
    Flatten {
        /// OCEL 2.0 JSON input, or `-` for standard input.
        input: PathBuf,
        /// Perspective definition (JSON).
        #[arg(long)]
        perspective: PathBuf,
        #[arg(long)]
        base_iri: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        stats: bool,
    },
    /// Evaluate a trace query against a Turtle graph.
    Query {
        /// Turtle graph file.
        graph: PathBuf,
        /// Query file.
        #[arg(short, long)]
        query: PathBuf,
        /// Result format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Ids)]
        output: OutputFormat,
        #[arg(long)]
        stats: bool,
    },
    /// Print triple, trace, event, and activity counts of a graph.
    Stats {
        /// Turtle graph file.
        graph: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LogFormat {
    Xes,
    Ocel2,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Ids,
    Json,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<elkg::Error> for CliError {
    fn from(error: elkg::Error) -> CliError {
        match error {
            elkg::Error::Io(e) => CliError::io(e.to_string()),
            other => CliError::input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            use clap::error::ErrorKind;
            let code = match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = error.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {}", error.message);
            ExitCode::from(error.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Convert {
            input,
            format,
            base_iri,
            output,
            stats,
        } => cmd_convert(&input, format, base_iri, output.as_deref(), stats),
        Command::Flatten {
            input,
            perspective,
            base_iri,
            output,
            stats,
        } => cmd_flatten(&input, &perspective, base_iri, output.as_deref(), stats),
        Command::Query {
            graph,
            query,
            output,
            stats,
        } => cmd_query(&graph, &query, output, stats),
        Command::Stats { graph } => cmd_stats(&graph),
    }
}

/// Timings and counts reported by `--stats`.
#[derive(Default)]
struct RunStats {
    parse_ms: Option<u128>,
    convert_ms: Option<u128>,
    extract_ms: Option<u128>,
    load_ms: Option<u128>,
    query_ms: Option<u128>,
    traces: Option<usize>,
    events: Option<usize>,
    triples: Option<usize>,
    instances: Option<usize>,
    results: Option<usize>,
}

impl RunStats {
    fn report(&self) {
        let line = |name: &str, value: Option<u128>| {
            if let Some(v) = value {
                eprintln!("{name}: {v}");
            }
        };
        line("parse_ms", self.parse_ms);
        line("convert_ms", self.convert_ms);
        line("extract_ms", self.extract_ms);
        line("load_ms", self.load_ms);
        line("query_ms", self.query_ms);
        line("traces", self.traces.map(|v| v as u128));
        line("events", self.events.map(|v| v as u128));
        line("triples", self.triples.map(|v| v as u128));
        line("instances", self.instances.map(|v| v as u128));
        line("results", self.results.map(|v| v as u128));
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::io(format!("reading standard input: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))
    }
}

fn write_output(path: Option<&Path>, payload: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| CliError::io(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn scheme_for(path: &Path, base_iri: Option<String>) -> Result<IriScheme, CliError> {
    match base_iri {
        Some(base) => Ok(IriScheme::new(base)?),
        None => {
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .filter(|s| *s != "-")
                .unwrap_or("log");
            Ok(IriScheme::for_log_name(stem))
        }
    }
}

fn cmd_convert(
    input: &Path,
    format: LogFormat,
    base_iri: Option<String>,
    output: Option<&Path>,
    stats: bool,
) -> Result<(), CliError> {
    let mut run_stats = RunStats::default();
    let text = read_input(input)?;
    let mut scheme = scheme_for(input, base_iri)?;

    let graph = match format {
        LogFormat::Xes => {
            let started = Instant::now();
            let log = elkg::parse_xes(&text)?;
            run_stats.parse_ms = Some(started.elapsed().as_millis());
            run_stats.traces = Some(log.traces.len());
            run_stats.events = Some(log.event_count());
            let started = Instant::now();
            let graph = elkg::ccel_to_elkg(&log, &mut scheme)?;
            run_stats.convert_ms = Some(started.elapsed().as_millis());
            graph
        }
        LogFormat::Ocel2 => {
            let started = Instant::now();
            let log = elkg::parse_ocel2_json(&text)?;
            run_stats.parse_ms = Some(started.elapsed().as_millis());
            run_stats.events = Some(log.events.len());
            let started = Instant::now();
            let graph = elkg::ocel2_to_elkg(&log, &mut scheme)?;
            run_stats.convert_ms = Some(started.elapsed().as_millis());
            graph
        }
    };
    run_stats.triples = Some(graph.len());
    write_output(output, &elkg::serialize_turtle(&graph))?;
    if stats {
        run_stats.report();
    }
    Ok(())
}

fn cmd_flatten(
    input: &Path,
    perspective_path: &Path,
    base_iri: Option<String>,
    output: Option<&Path>,
    stats: bool,
) -> Result<(), CliError> {
    let mut run_stats = RunStats::default();
    let text = read_input(input)?;
    let perspective_text = read_input(perspective_path)?;
    let perspective = elkg::parse_perspective(&perspective_text)?;
    let mut scheme = scheme_for(input, base_iri)?;

    let started = Instant::now();
    let log = elkg::parse_ocel2_json(&text)?;
    run_stats.parse_ms = Some(started.elapsed().as_millis());
    run_stats.events = Some(log.events.len());

    let started = Instant::now();
    let flattened = elkg::flatten(&log, &perspective, &mut scheme)?;
    run_stats.extract_ms = Some(started.elapsed().as_millis());
    run_stats.instances = Some(flattened.instances.len());
    run_stats.traces = Some(flattened.instances.len());
    run_stats.triples = Some(flattened.graph.len());

    if flattened.instances.is_empty() {
        eprintln!(
            "warning: no objects of type {:?} in the log; no traces extracted",
            perspective.start_object_type
        );
    }
    if flattened.empty_traces > 0 {
        eprintln!(
            "warning: {} trace(s) have no linked events",
            flattened.empty_traces
        );
    }
    write_output(output, &elkg::serialize_turtle(&flattened.graph))?;
    if stats {
        run_stats.report();
    }
    Ok(())
}

fn cmd_query(
    graph_path: &Path,
    query_path: &Path,
    output: OutputFormat,
    stats: bool,
) -> Result<(), CliError> {
    let mut run_stats = RunStats::default();
    let query_text = read_input(query_path)?;
    let ast = elkg::parse_query(&query_text)?;
    for warning in &ast.warnings {
        eprintln!("warning: {warning}");
    }

    let started = Instant::now();
    let graph = elkg::parse_turtle(&read_input(graph_path)?)?;
    let index = TraceIndex::build(&graph)?;
    run_stats.load_ms = Some(started.elapsed().as_millis());
    run_stats.triples = Some(graph.len());
    run_stats.traces = Some(index.trace_count());

    let started = Instant::now();
    let results = elkg::evaluate(&ast, &index)?;
    run_stats.query_ms = Some(started.elapsed().as_millis());
    run_stats.results = Some(results.traces.len());
    for warning in &results.warnings {
        eprintln!("warning: {warning}");
    }

    let format = match output {
        OutputFormat::Ids => ResultFormat::Ids,
        OutputFormat::Json => ResultFormat::BindingsJson,
    };
    print!("{}", elkg::query::serialize_results(&results, format));
    if matches!(output, OutputFormat::Json) {
        println!();
    }
    if stats {
        run_stats.report();
    }
    Ok(())
}

fn cmd_stats(graph_path: &Path) -> Result<(), CliError> {
    let graph = elkg::parse_turtle(&read_input(graph_path)?)?;
    let rdf_type = Term::Resource(vocab::RDF_TYPE.to_owned());
    let tr_trace = Term::Resource(vocab::TR_TRACE.to_owned());
    let tr_in = Term::Resource(vocab::TR_IN.to_owned());
    let tr_activity = Term::Resource(vocab::TR_ACTIVITY.to_owned());

    let traces = graph.subjects_matching(&rdf_type, &tr_trace).len();
    let events = count_events(&graph, &tr_in, &tr_activity);
    let activities: std::collections::HashSet<&Term> = graph
        .triples_matching(None, Some(&tr_activity), None)
        .into_iter()
        .map(|t| &t.object)
        .collect();

    println!("triples: {}", graph.len());
    println!("traces: {traces}");
    println!("events: {events}");
    println!("activities: {}", activities.len());
    Ok(())
}

/// Events are the distinct subjects carrying a trace membership or an
/// activity.
fn count_events(graph: &Graph, tr_in: &Term, tr_activity: &Term) -> usize {
    let mut events: std::collections::HashSet<&Term> = graph
        .triples_matching(None, Some(tr_in), None)
        .into_iter()
        .map(|t| &t.subject)
        .collect();
    events.extend(
        graph
            .triples_matching(None, Some(tr_activity), None)
            .into_iter()
            .map(|t| &t.subject),
    );
    events.len()
}
