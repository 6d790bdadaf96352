//! The `scg-cli` command line: argument parsing and command dispatch.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::crucial::{self, CrucialConfig};
use crate::error::Error;
use crate::export::{self, report, GraphFormat, ReportFormat};
use crate::java;
use crate::partition::{self, PartitionConfig};
use crate::store::{self, RecordFormat};
use crate::summary;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "SCG_CLI_SEED";

/// Where file-producing formats go without `--out-dir`.
pub const DEFAULT_OUT_DIR: &str = "scg-output";

pub const SUPPORTED_LANGUAGES: &[&str] = &["java"];

const HELP: &str = "\
Usage: scg-cli [COMMAND]
CLI to analyze projects based on SCG data
Commands:
  help       Display help information about the specified command.
  crucial    Find crucial code entities.
  generate   Generate SCG metadata.
  partition  Suggest project partitioning.
  summary    Summarize the project.
  export     Export SCG metadata to various output formats.

Run `scg-cli help <COMMAND>` for the options of a command.
";

#[derive(Parser, Debug)]
#[command(name = "scg-cli", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Display help information about the specified command.
    Help {
        /// Command to describe.
        command: Option<String>,
    },
    /// Find crucial code entities.
    Crucial(CrucialArgs),
    /// Generate SCG metadata.
    Generate(GenerateArgs),
    /// Suggest project partitioning.
    Partition(PartitionArgs),
    /// Summarize the project.
    Summary(SummaryArgs),
    /// Export SCG metadata to various output formats.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Directory for file outputs [default: ./scg-output]
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Project root containing the `.semanticgraphs` folder.
    workspace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Source language.
    #[arg(short = 'l', long, default_value = "java")]
    language: String,
    /// Record encoding: binary or json.
    #[arg(long, default_value = "binary", value_name = "FORMAT")]
    record_format: RecordFormatArg,
    /// Project root to scan.
    workspace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SummaryArgs {
    /// Output format: txt, html, tex, csv or json.
    #[arg(short = 'o', long = "output", default_value = "txt", value_name = "FORMAT")]
    output: ReportFormat,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CrucialArgs {
    /// Number of top entities per metric.
    #[arg(short = 'n', long = "top", default_value_t = 10)]
    n: usize,
    /// Output format: txt, html, tex, csv or json.
    #[arg(short = 'o', long = "output", default_value = "txt", value_name = "FORMAT")]
    output: ReportFormat,
    /// Katz attenuation factor.
    #[arg(long)]
    alpha: Option<f64>,
    /// PageRank damping factor.
    #[arg(long)]
    damping: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    /// Output format: csv, json, html, txt, tex or gml.
    #[arg(short = 'o', long = "output", default_value = "txt", value_name = "FORMAT")]
    output: PartitionOutput,
    /// Random seed [default: $SCG_CLI_SEED or 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Allowed part-size imbalance.
    #[arg(long)]
    epsilon: Option<f64>,
    #[command(flatten)]
    common: Common,
    /// Largest number of partitions; every k from 2 to n is computed.
    n: Option<usize>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    /// Output format: gdf, dot, graphml, gml or jupyter.
    #[arg(short = 'o', long = "output", value_name = "FORMAT")]
    output: ExportOutput,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy)]
struct RecordFormatArg(RecordFormat);

impl FromStr for RecordFormatArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "binary" => Ok(RecordFormatArg(RecordFormat::Binary)),
            "json" => Ok(RecordFormatArg(RecordFormat::Json)),
            _ => Err(format!("unknown record format `{s}` (expected binary or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PartitionOutput {
    Report(ReportFormat),
    Gml,
}

impl FromStr for PartitionOutput {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("gml") {
            return Ok(PartitionOutput::Gml);
        }
        s.parse()
            .map(PartitionOutput::Report)
            .map_err(|_| format!("unknown partition format `{s}` (expected csv, json, html, txt, tex or gml)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ExportOutput {
    Graph(GraphFormat),
    Jupyter,
}

impl FromStr for ExportOutput {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("jupyter") {
            return Ok(ExportOutput::Jupyter);
        }
        s.parse()
            .map(ExportOutput::Graph)
            .map_err(|_| format!("unknown export format `{s}` (expected gdf, dot, graphml, gml or jupyter)"))
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedLanguage(_) => Failure::Usage(e.to_string()),
            e => Failure::Data(e),
        }
    }
}

type Outcome = Result<(), Failure>;

const COMMANDS: &[&str] = &["help", "crucial", "generate", "partition", "summary", "export"];
const VALUE_FLAGS: &[&str] =
    &["-o", "--output", "-n", "--top", "-l", "--language", "--seed", "--alpha", "--damping", "--epsilon", "--out-dir", "--record-format"];

/// Moves options written before the command (`scg-cli -o tex partition ...`)
/// behind it, where the command's parser expects them.
fn normalize(args: Vec<OsString>) -> Vec<OsString> {
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy();
        if COMMANDS.contains(&a.as_ref()) {
            break;
        }
        if !a.starts_with('-') {
            return args;
        }
        i += if VALUE_FLAGS.contains(&a.as_ref()) { 2 } else { 1 };
    }
    if i <= 1 || i >= args.len() {
        return args;
    }
    let mut out = vec![args[0].clone(), args[i].clone()];
    out.extend_from_slice(&args[1..i]);
    out.extend_from_slice(&args[i + 1..]);
    out
}

/// Parses `args` (program name first) and runs the command, printing to the
/// process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = normalize(args);
    let first = args.get(1).map(|a| a.to_string_lossy().into_owned());
    match first.as_deref() {
        None => {
            let _ = err.write_all(HELP.as_bytes());
            return EXIT_USAGE;
        }
        Some("-h" | "--help") if args.len() == 2 => {
            let _ = out.write_all(HELP.as_bytes());
            return EXIT_OK;
        }
        _ => {}
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Help { command } => help(command.as_deref(), out),
        Command::Generate(a) => generate(a, out, err),
        Command::Summary(a) => summary(a, out),
        Command::Crucial(a) => crucial(a, out),
        Command::Partition(a) => partition(a, out),
        Command::Export(a) => export(a, out),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

fn help(command: Option<&str>, out: &mut dyn Write) -> Outcome {
    let Some(name) = command else {
        let _ = out.write_all(HELP.as_bytes());
        return Ok(());
    };
    let mut cmd = Cli::command();
    cmd.build();
    let Some(sub) = cmd.find_subcommand_mut(name) else {
        return Err(Failure::Usage(format!("unknown command `{name}`; run `scg-cli help` for the list")));
    };
    let _ = write!(out, "{}", sub.render_help());
    Ok(())
}

fn require_workspace(ws: Option<PathBuf>, command: &str) -> Result<PathBuf, Failure> {
    ws.ok_or_else(|| Failure::Usage(format!("missing <WORKSPACE> argument\n\nhint: scg-cli {command} ./my-project")))
}

fn out_dir(common: &Common) -> PathBuf {
    common.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

/// Writes a rendered report: txt goes to stdout unless `--out-dir` is given,
/// everything else to `<out-dir>/<file_name>`.
fn deliver(common: &Common, txt: bool, file_name: &str, contents: &str, out: &mut dyn Write) -> Outcome {
    if txt && common.out_dir.is_none() {
        let _ = out.write_all(contents.as_bytes());
        return Ok(());
    }
    let path = export::write_output(&out_dir(common).join(file_name), contents)?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(())
}

fn generate(a: GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if !SUPPORTED_LANGUAGES.contains(&a.language.to_ascii_lowercase().as_str()) {
        return Err(Error::UnsupportedLanguage(a.language).into());
    }
    let ws = require_workspace(a.workspace, "generate -l java")?;
    if !ws.is_dir() {
        return Err(Failure::Data(Error::Io {
            path: ws,
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "workspace directory not found"),
        }));
    }
    let (graph, rep) = java::extract_project(&ws)?;
    let written = store::save_graph_as(&graph, &ws, a.record_format.0)?;
    let _ = writeln!(
        out,
        "Parsed {} files ({} failed), {} nodes, {} edges, {} unresolved references.",
        rep.files_parsed,
        rep.files_failed,
        graph.node_count(),
        graph.edge_count(),
        rep.unresolved_references
    );
    for f in &rep.failures {
        let _ = writeln!(out, "  {}:{}:{}: {}", f.file, f.line, f.column, f.message);
    }
    let _ = writeln!(out, "Wrote {} records to {}", written.len(), store::data_dir(&ws).display());
    let _ = writeln!(err, "done in {} ms", rep.elapsed_ms);
    Ok(())
}

fn load(common: &Common, command: &str) -> Result<(PathBuf, crate::SemanticCodeGraph), Failure> {
    let ws = require_workspace(common.workspace.clone(), command)?;
    let graph = store::load_graph(&ws)?;
    Ok((ws, graph))
}

fn stem(project: &str) -> String {
    export::file_stem(project)
}

fn summary(a: SummaryArgs, out: &mut dyn Write) -> Outcome {
    let (_, graph) = load(&a.common, "summary")?;
    let stats = summary::summarize(&graph);
    let text = report::render_summary(graph.project_name(), &stats, a.output);
    let name = format!("{}-summary.{}", stem(graph.project_name()), a.output.extension());
    deliver(&a.common, a.output == ReportFormat::Txt, &name, &text, out)
}

fn crucial(a: CrucialArgs, out: &mut dyn Write) -> Outcome {
    if a.n == 0 {
        return Err(Failure::Usage("-n must be at least 1".into()));
    }
    let mut cfg = CrucialConfig::default();
    if let Some(d) = a.damping {
        if !(d > 0.0 && d < 1.0) {
            return Err(Failure::Usage(format!("--damping must lie in (0, 1), got {d}")));
        }
        cfg.pagerank.damping = d;
    }
    if let Some(alpha) = a.alpha {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Failure::Usage(format!("--alpha must be positive, got {alpha}")));
        }
        cfg.katz.alpha = alpha;
    }
    let (_, graph) = load(&a.common, "crucial -n 10")?;
    let rep = crucial::crucial(&graph, a.n, &cfg);
    let text = report::render_crucial(graph.project_name(), &rep, a.output);
    let name = format!("{}-crucial.{}", stem(graph.project_name()), a.output.extension());
    deliver(&a.common, a.output == ReportFormat::Txt, &name, &text, out)
}

/// Seed from `--seed`, else [`SEED_ENV`], else 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn partition(a: PartitionArgs, out: &mut dyn Write) -> Outcome {
    let Some(n) = a.n else {
        return Err(Failure::Usage("missing <N> argument\n\nhint: scg-cli partition ./my-project 10".into()));
    };
    if n < 2 {
        return Err(Failure::Usage(format!("<N> must be at least 2, got {n}")));
    }
    let mut cfg = PartitionConfig { seed: resolve_seed(a.seed)?, ..Default::default() };
    if let Some(eps) = a.epsilon {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Failure::Usage(format!("--epsilon must be non-negative, got {eps}")));
        }
        cfg.epsilon = eps;
    }
    let (_, graph) = load(&a.common, "partition")?;
    let results = partition::partition_sweep(&graph, n, &cfg)?;
    let project = graph.project_name();
    let base = stem(project);
    match a.output {
        PartitionOutput::Report(ReportFormat::Csv) => {
            let dir = out_dir(&a.common);
            for r in &results {
                let path = export::write_output(&dir.join(export::partition_csv_name(&base, r)), &report::partition_csv(r))?;
                let _ = writeln!(out, "wrote {}", path.display());
            }
            Ok(())
        }
        PartitionOutput::Report(f) => {
            let text = report::render_partition(project, &graph, &results, f);
            deliver(&a.common, f == ReportFormat::Txt, &format!("{base}-partition.{}", f.extension()), &text, out)
        }
        PartitionOutput::Gml => {
            let text = GraphFormat::Gml.render(&graph, &export::partition_columns(&results));
            deliver(&a.common, false, &format!("{base}-partition.gml"), &text, out)
        }
    }
}

fn export(a: ExportArgs, out: &mut dyn Write) -> Outcome {
    let ws = require_workspace(a.common.workspace.clone(), "export -o graphml")?;
    let dir = out_dir(&a.common);
    let path = match a.output {
        ExportOutput::Jupyter => export::export_jupyter_bundle(&ws, &dir)?,
        ExportOutput::Graph(f) => export::export_graph(&store::load_graph(&ws)?, f, &dir)?,
    };
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(())
}
