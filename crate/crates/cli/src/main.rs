//! `lzg`: reachability checking for networks of timed automata.
//!
//! Exit codes: 0 unreachable (or success), 10 reachable, 1 failed oracle
//! checks, 2 usage or input error, 3 internal abort (timeout, bound
//! overflow).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lzg::batch::Execution;
use lzg::bench::{self, BenchSpec, Family};
use lzg::explore::{run, Algorithm, SearchOptions, Verdict};
use lzg::model::{parse_network, Network, TargetSpec};
use lzg::oracle::suites;
use serde_json::json;
use tracing::{debug, info};
use tracing_subscriber::EnvFilter;

const EXIT_UNREACHABLE: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ABORT: u8 = 3;
const EXIT_REACHABLE: u8 = 10;

#[derive(Parser)]
#[command(name = "lzg", version, about = "Reachability for networks of timed automata with global and local-time zone graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a target state is reachable.
    Check(CheckArgs),
    /// Build the zone graph and optionally export it as DOT.
    Explore(ExploreArgs),
    /// Write benchmark models.
    Gen(GenArgs),
    /// Run oracle checks and print a JSON report.
    Oracle(OracleArgs),
    /// Compare both engines on benchmark families.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Global,
    Local,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Algorithm {
        match a {
            AlgorithmArg::Global => Algorithm::Global,
            AlgorithmArg::Local => Algorithm::Local,
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "local")]
    algorithm: AlgorithmArg,
    /// Keep exploring after the target is found.
    #[arg(long)]
    exhaustive: bool,
    /// Do not mark stored nodes covered by later, larger ones.
    #[arg(long)]
    no_retro_cover: bool,
    /// Abort after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Write statistics as JSON to this path.
    #[arg(long)]
    stats_json: Option<PathBuf>,
    /// Include wall-clock seconds in the JSON statistics.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct CheckArgs {
    model: PathBuf,
    /// Comma-separated `process=state` pairs.
    #[arg(long)]
    target: String,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct ExploreArgs {
    model: PathBuf,
    #[arg(long)]
    target: Option<String>,
    /// Write the final graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: String,
    /// Inclusive range `a..b` or a single size.
    #[arg(long)]
    sizes: String,
    /// Directory for the model files; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Aggregation,
    Runs,
    Flaws,
    Commutativity,
    Properties,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of random networks or samples.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Run batches on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// One family; the standard suite when absent.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, requires = "family")]
    sizes: Option<String>,
    /// Per-instance timeout in seconds.
    #[arg(long, default_value_t = 90.0)]
    timeout: f64,
    /// Directory for generated models and `report.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    timing: bool,
}

/// A failure reported to the user with an exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn main() -> ExitCode {
    let filter = EnvFilter::try_from_env("LZG_LOG").unwrap_or_else(|_| EnvFilter::new("warn"));
    tracing_subscriber::fmt().with_env_filter(filter).with_writer(std::io::stderr).with_target(false).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_UNREACHABLE };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Explore(a) => cmd_explore(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_model(path: &Path) -> Result<Network, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_network(&text).map_err(|e| usage(format!("{}:{e}", path.display())))
}

fn parse_target(net: &Network, text: &str) -> Result<TargetSpec, Failure> {
    TargetSpec::parse(net, text).map_err(|e| usage(format!("invalid target '{text}': {e} (expected PROC=STATE[,PROC=STATE...])")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn seconds(s: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(s).map_err(|_| usage(format!("invalid timeout {s}")))
}

/// Run a search and report it; returns the verdict exit code.
fn search_and_report(
    net: &Network,
    target: Option<&TargetSpec>,
    args: &SearchArgs,
    dot: Option<&Path>,
) -> Result<u8, Failure> {
    let algorithm: Algorithm = args.algorithm.into();
    let opts = SearchOptions {
        exhaustive: args.exhaustive || target.is_none(),
        retro_cover: !args.no_retro_cover,
        timeout: args.timeout.map(seconds).transpose()?,
    };
    info!(%algorithm, model = %net.name, "search started");
    let outcome = run(net, algorithm, target, &opts, dot.is_some())
        .map_err(|e| Failure { code: EXIT_ABORT, message: e.to_string() })?;
    let stats = &outcome.stats;
    debug!(frontier_max = stats.frontier_max, "search done");

    if target.is_some() {
        println!("{}", stats.verdict);
        if let Some(w) = &outcome.witness {
            println!("witness: {}", if w.is_empty() { "(empty)".to_string() } else { net.word_label(w) });
        }
    }
    println!("algorithm: {algorithm}");
    println!("visited: {}", stats.visited);
    println!("stored: {}", stats.stored);

    if let Some(path) = dot {
        write_file(path, &outcome.dot)?;
    }
    if let Some(path) = &args.stats_json {
        let mut v = json!({
            "model": net.name,
            "algorithm": algorithm,
            "verdict": stats.verdict,
            "visited": stats.visited,
            "stored": stats.stored,
            "frontier_max": stats.frontier_max,
            "witness": outcome.witness.as_ref().map(|w| net.word_label(w)),
        });
        if args.timing {
            v["seconds"] = json!(stats.seconds);
        }
        write_file(path, &format!("{}\n", serde_json::to_string_pretty(&v).expect("stats serialize")))?;
    }
    Ok(match stats.verdict {
        Verdict::Reachable => EXIT_REACHABLE,
        Verdict::Unreachable => EXIT_UNREACHABLE,
    })
}

fn cmd_check(a: CheckArgs) -> Result<u8, Failure> {
    let net = load_model(&a.model)?;
    let target = parse_target(&net, &a.target)?;
    search_and_report(&net, Some(&target), &a.search, None)
}

fn cmd_explore(a: ExploreArgs) -> Result<u8, Failure> {
    let net = load_model(&a.model)?;
    let target = a.target.as_deref().map(|t| parse_target(&net, t)).transpose()?;
    if let Some(path) = &a.dot {
        // Fail before a long search rather than after it.
        write_file(path, "")?;
    }
    search_and_report(&net, target.as_ref(), &a.search, a.dot.as_deref())
}

fn specs_for(family: &str, sizes: &str) -> Result<Vec<BenchSpec>, Failure> {
    let family: Family = family.parse().map_err(|e: bench::BenchError| usage(e.to_string()))?;
    let sizes = bench::parse_sizes(sizes).map_err(|e| usage(e.to_string()))?;
    let specs: Vec<BenchSpec> = sizes.into_iter().map(|size| BenchSpec { family, size }).collect();
    for s in &specs {
        bench::generate(*s).map_err(|e| usage(e.to_string()))?;
    }
    Ok(specs)
}

fn write_models(dir: &Path, specs: &[BenchSpec]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    for s in specs {
        let (text, _) = bench::generate(*s).map_err(|e| usage(e.to_string()))?;
        write_file(&dir.join(format!("{}{}.ta", s.family, s.size)), &text)?;
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<u8, Failure> {
    let specs = specs_for(&a.family, &a.sizes)?;
    match &a.out {
        Some(dir) => {
            write_models(dir, &specs)?;
            for s in &specs {
                println!("{}", dir.join(format!("{}{}.ta", s.family, s.size)).display());
            }
        }
        None => {
            for s in &specs {
                print!("{}", bench::generate(*s).map_err(|e| usage(e.to_string()))?.0);
            }
        }
    }
    Ok(EXIT_UNREACHABLE)
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn cmd_oracle(a: OracleArgs) -> Result<u8, Failure> {
    let exec = execution(a.sequential);
    let report = match a.suite {
        Suite::Aggregation => suites::aggregation_suite(a.count, a.seed, exec),
        Suite::Runs => suites::runs_suite(a.count, a.seed),
        Suite::Flaws => suites::flaws_suite(),
        Suite::Commutativity => suites::commutativity_suite(5, exec),
        Suite::Properties => suites::property_suite(a.seed, exec),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(if report.passed { EXIT_UNREACHABLE } else { EXIT_CHECK_FAILED })
}

fn cmd_bench(a: BenchArgs) -> Result<u8, Failure> {
    let specs = match (&a.family, &a.sizes) {
        (Some(f), Some(s)) => specs_for(f, s)?,
        (Some(f), None) => {
            let family: Family = f.parse().map_err(|e: bench::BenchError| usage(e.to_string()))?;
            bench::standard_suite().into_iter().filter(|s| s.family == family).collect()
        }
        _ => bench::standard_suite(),
    };
    let timeout = seconds(a.timeout)?;
    if let Some(dir) = &a.out {
        write_models(dir, &specs)?;
    }
    let report = bench::run_suite(&specs, timeout, execution(a.sequential));
    // Wall-clock time only reaches the JSON on request, so reruns diff cleanly.
    let mut stable = report.clone();
    if !a.timing {
        for row in &mut stable.rows {
            row.seconds = 0.0;
        }
    }
    if let Some(dir) = &a.out {
        write_file(&dir.join("report.json"), &format!("{}\n", stable.to_json()))?;
    }
    if a.json {
        println!("{}", stable.to_json());
    } else {
        print!("{}", report.render_table());
    }
    let mismatch = report.pairs().iter().any(|(g, l)| match (g.counts(), l.counts()) {
        (Some((a, ..)), Some((b, ..))) => a != b,
        _ => false,
    });
    if mismatch {
        return Err(Failure { code: EXIT_ABORT, message: "engines disagree on a verdict".into() });
    }
    Ok(EXIT_UNREACHABLE)
}
