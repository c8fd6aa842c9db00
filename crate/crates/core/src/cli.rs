//! Command-line front end.
//!
//! Every subcommand returns a [`CliOutput`] instead of printing, so the whole
//! interface can be driven from tests. Exit codes: `0` success, `2` the graph
//! is not fully identified (or verification found violations), `1` input
//! errors.

use crate::engine::{run_treeid, verify_report, EdgeStatus, EngineConfig, IdReport, DEFAULT_SEED};
use crate::graph::{
    canonicalize_path_graph, enumerate_missing_cycles, parse_graph, parse_graph_doc, GraphDoc,
    TreeGraph,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCOMPLETE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl CliOutput {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        CliOutput {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_INPUT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "treeid", version, about = "Identify edge weights of tree-shaped linear causal models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Identify every edge weight and print the formulas.
    Identify(IdentifyArgs),
    /// Identify, then check the formulas against sampled models.
    Verify(VerifyArgs),
    /// List the missing cycles.
    Cycles(CyclesArgs),
    /// Compact a root-confounded path graph.
    Canon(CanonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Edgelist,
    Doc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Doc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl SeedArg {
    fn resolve(self) -> u64 {
        match self {
            SeedArg::Fixed(s) => s,
            SeedArg::Random => rand::random(),
        }
    }
}

impl std::fmt::Display for SeedArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeedArg::Fixed(s) => write!(f, "{s}"),
            SeedArg::Random => f.write_str("random"),
        }
    }
}

fn parse_seed(s: &str) -> Result<SeedArg, String> {
    if s == "random" {
        return Ok(SeedArg::Random);
    }
    s.parse()
        .map(SeedArg::Fixed)
        .map_err(|_| format!("expected an integer or `random`, got `{s}`"))
}

fn parse_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got `{s}`")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graph file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Edgelist)]
    pub format: InputFormat,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    /// Integer seed, or `random`.
    #[arg(long, value_parser = parse_seed, default_value_t = SeedArg::Fixed(DEFAULT_SEED))]
    pub seed: SeedArg,
    #[arg(long, value_parser = parse_count, default_value_t = crate::engine::DEFAULT_PIT_TRIALS)]
    pub pit_trials: usize,
    /// Longest cycle considered [default: number of non-root nodes].
    #[arg(long, value_parser = parse_count)]
    pub max_cycle_len: Option<usize>,
    /// Cycles considered per node.
    #[arg(long, value_parser = parse_count, default_value_t = crate::engine::DEFAULT_MAX_CYCLES)]
    pub max_cycles: usize,
}

impl EngineArgs {
    pub fn config(&self) -> EngineConfig {
        EngineConfig {
            pit_trials: self.pit_trials,
            seed: self.seed.resolve(),
            max_cycle_len: self.max_cycle_len,
            max_cycles: self.max_cycles,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct IdentifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Sampled models.
    #[arg(long, value_parser = parse_count, default_value_t = 100)]
    pub models: usize,
    /// Check this report document instead of running identification.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CyclesArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Longest cycle listed [default: number of non-root nodes].
    #[arg(long, value_parser = parse_count)]
    pub max_cycle_len: Option<usize>,
    /// Cycles listed in total.
    #[arg(long, value_parser = parse_count, default_value_t = crate::engine::DEFAULT_MAX_CYCLES)]
    pub max_cycles: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CanonArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
}

/// Parses arguments (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match &cli.command {
            Command::Identify(a) => cmd_identify(a),
            Command::Verify(a) => cmd_verify(a),
            Command::Cycles(a) => cmd_cycles(a),
            Command::Canon(a) => cmd_canon(a),
        },
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                CliOutput {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_INPUT,
                }
            } else {
                CliOutput {
                    stdout: text,
                    stderr: String::new(),
                    code: EXIT_OK,
                }
            }
        }
    }
}

pub fn load_graph(args: &GraphArgs) -> Result<TreeGraph, String> {
    let text = std::fs::read_to_string(&args.graph)
        .map_err(|e| format!("cannot read {}: {e}", args.graph.display()))?;
    let g = match args.format {
        InputFormat::Edgelist => parse_graph(&text),
        InputFormat::Doc => parse_graph_doc(&text),
    };
    g.map_err(|e| format!("{}: {e}", args.graph.display()))
}

fn edge_name(from: usize, to: usize) -> String {
    format!("λ({from}→{to})")
}

/// Human-readable report.
pub fn report_text(r: &IdReport) -> String {
    let mut s = String::new();
    for e in &r.edges {
        let name = edge_name(e.from, e.to);
        let _ = match e.status {
            EdgeStatus::Unique => writeln!(s, "{name} = {}", e.pretty[0]),
            EdgeStatus::TwoCandidates => {
                writeln!(s, "{name} is one of:").and_then(|_| {
                    e.pretty.iter().try_for_each(|p| writeln!(s, "    {p}"))
                })
            }
            EdgeStatus::Unidentified => writeln!(s, "{name}: unidentified"),
            EdgeStatus::Unknown => writeln!(s, "{name}: unknown (zero testing failed)"),
        };
    }
    if let Some(omega) = &r.omega {
        for w in omega {
            let _ = writeln!(s, "ω({},{}) = {}", w.i, w.j, w.pretty);
        }
    }
    let _ = writeln!(
        s,
        "{}/{} edges unique (seed {}, {} zero-test trials, error bound {:.3e})",
        r.unique_count(),
        r.edges.len(),
        r.config.seed,
        r.config.pit_trials,
        r.config.pit_failure_bound
    );
    s
}

fn warnings(r: &IdReport) -> String {
    let mut s = String::new();
    if r.truncated_cycles {
        let _ = writeln!(s, "warning: cycle enumeration was truncated; results may be incomplete");
    }
    for d in &r.diagnostics {
        let _ = writeln!(s, "warning: {d}");
    }
    s
}

pub fn cmd_identify(a: &IdentifyArgs) -> CliOutput {
    let g = match load_graph(&a.graph) {
        Ok(g) => g,
        Err(e) => return CliOutput::input_error(e),
    };
    let r = run_treeid(&g, &a.engine.config());
    let stdout = match a.graph.output {
        OutputFormat::Text => report_text(&r),
        OutputFormat::Doc => r.to_json() + "\n",
    };
    CliOutput {
        stdout,
        stderr: warnings(&r),
        code: if r.all_unique() { EXIT_OK } else { EXIT_INCOMPLETE },
    }
}

pub fn cmd_verify(a: &VerifyArgs) -> CliOutput {
    let g = match load_graph(&a.graph) {
        Ok(g) => g,
        Err(e) => return CliOutput::input_error(e),
    };
    let cfg = a.engine.config();
    let r = match &a.report {
        Some(path) => {
            let parsed = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))
                .and_then(|t| IdReport::from_json(&t).map_err(|e| format!("{}: {e}", path.display())));
            match parsed {
                Ok(r) => r,
                Err(e) => return CliOutput::input_error(e),
            }
        }
        None => run_treeid(&g, &cfg),
    };
    let summary = match verify_report(&g, &r, a.models, cfg.seed) {
        Ok(s) => s,
        Err(e) => return CliOutput::input_error(e),
    };
    let stdout = match a.graph.output {
        OutputFormat::Doc => serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
        OutputFormat::Text => {
            let mut s = format!("{}/{} exact\n", summary.exact_models, summary.models);
            for v in &summary.violations {
                let what = v.edge.map_or("ω".to_string(), |(f, t)| edge_name(f, t));
                let _ = writeln!(s, "violation: model seed {}: {what}: {}", v.model_seed, v.message);
            }
            s
        }
    };
    CliOutput {
        stdout,
        stderr: String::new(),
        code: if summary.is_sound() { EXIT_OK } else { EXIT_INCOMPLETE },
    }
}

#[derive(Serialize)]
struct CycleListing {
    cycles: Vec<Vec<usize>>,
    truncated: bool,
}

pub fn cmd_cycles(a: &CyclesArgs) -> CliOutput {
    let g = match load_graph(&a.graph) {
        Ok(g) => g,
        Err(e) => return CliOutput::input_error(e),
    };
    let max_len = a.max_cycle_len.unwrap_or(g.n());
    let mut seen = BTreeSet::new();
    let mut listed: Vec<Vec<usize>> = Vec::new();
    let mut truncated = false;
    'nodes: for i in 1..g.node_count() {
        let e = enumerate_missing_cycles(&g, i, max_len, a.max_cycles);
        for c in e.cycles {
            let key = c.normalized().nodes().to_vec();
            if seen.insert(key.clone()) {
                if listed.len() == a.max_cycles {
                    truncated = true;
                    break 'nodes;
                }
                listed.push(key);
            }
        }
        truncated |= e.truncated && listed.len() == a.max_cycles;
    }
    let labeled: Vec<Vec<usize>> = listed
        .iter()
        .map(|c| c.iter().map(|&v| g.label(v)).collect())
        .collect();
    let stdout = match a.graph.output {
        OutputFormat::Doc => {
            serde_json::to_string_pretty(&CycleListing {
                cycles: labeled,
                truncated,
            })
            .expect("listing serializes")
                + "\n"
        }
        OutputFormat::Text if labeled.is_empty() => "no missing cycles\n".to_string(),
        OutputFormat::Text => labeled
            .iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                parts.join("<->") + "\n"
            })
            .collect(),
    };
    CliOutput {
        stdout,
        stderr: if truncated {
            format!("warning: listing truncated at {} cycles\n", a.max_cycles)
        } else {
            String::new()
        },
        code: EXIT_OK,
    }
}

#[derive(Serialize)]
struct CanonListing {
    graph: GraphDoc,
    permutation: Vec<Option<usize>>,
}

pub fn cmd_canon(a: &CanonArgs) -> CliOutput {
    let g = match load_graph(&a.graph) {
        Ok(g) => g,
        Err(e) => return CliOutput::input_error(e),
    };
    let c = match canonicalize_path_graph(&g) {
        Ok(c) => c,
        Err(e) => return CliOutput::input_error(e),
    };
    let stdout = match a.graph.output {
        OutputFormat::Doc => {
            serde_json::to_string_pretty(&CanonListing {
                graph: GraphDoc::from_graph(&c.graph),
                permutation: c.permutation.clone(),
            })
            .expect("listing serializes")
                + "\n"
        }
        OutputFormat::Text => {
            let mut s = c.graph.to_edge_list() + "\n";
            for (old, new) in c.permutation.iter().enumerate() {
                let _ = match new {
                    Some(n) => writeln!(s, "{} -> {n}", g.label(old)),
                    None => writeln!(s, "{} dropped", g.label(old)),
                };
            }
            s
        }
    };
    CliOutput {
        stdout,
        stderr: String::new(),
        code: EXIT_OK,
    }
}
