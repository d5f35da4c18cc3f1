//! Command-line interface. `run` does all the work and returns the process
//! exit code so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 usage or IO error, 2 unparsable input,
//! 3 invalid encoding or square pair, 4 exhausted budget.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdim_core::degenerate::{
    degenerate_bound, encode_degenerate, DegenerateError, DegenerateParams,
};
use pdim_core::encoding::ViolationKind;
use pdim_core::exact::{pdim_exact, SearchBudget};
use pdim_core::forest::{default_epsilon, encode_forest_with, forest_bound};
use pdim_core::latin::{choose_ols_order, mols};
use pdim_core::treedecomp::{decompose_heuristic, TreeDecomposition};
use pdim_core::treewidth::{encode_treewidth_with, TwError, TwOptions};
use pdim_core::{verify_encoding, Encoding, Graph};
use serde::Serialize;

use crate::bench::{run_bench, write_csv, BenchConfig, Family};
use crate::formats::{parse_graph, parse_td, GraphFormat};
use crate::json::{encoding_from_json, encoding_to_json, JsonError};
use crate::mols_io::{format_pair, parse_pair, GridError};

/// Largest treewidth for which `auto` prefers the treewidth encoder.
pub const AUTO_TREEWIDTH_LIMIT: usize = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pdim",
    version,
    about = "Product-dimension encodings of graphs"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a graph and write the encoding as JSON.
    Encode(EncodeArgs),
    /// Check an encoding against a graph.
    Verify(VerifyArgs),
    /// Compute the exact product dimension of a small graph.
    Pdim(PdimArgs),
    /// Print or check a pair of orthogonal Latin squares.
    Mols(MolsArgs),
    /// Run encoders over random graph families and write CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph file; standard input when absent.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long, value_enum, default_value_t = GraphFormat::Edgelist)]
    pub format: GraphFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Forest,
    Treewidth,
    Degenerate,
    Exact,
    Auto,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Forest => "forest",
            Method::Treewidth => "treewidth",
            Method::Degenerate => "degenerate",
            Method::Exact => "exact",
            Method::Auto => "auto",
        }
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(short, long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Encoding JSON destination; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Metadata JSON destination; standard error when absent.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    /// Split parameter (forest).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// RNG seed (degenerate).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Scale factor on the number of random colorings (degenerate).
    #[arg(long)]
    pub p_multiplier: Option<f64>,
    /// Redraws before giving up (degenerate).
    #[arg(long)]
    pub max_retries: Option<u32>,
    /// Tree decomposition in PACE .td format (treewidth).
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Time limit for exact searches (exact, treewidth).
    #[arg(long)]
    pub timeout_ms: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Encoding JSON file.
    #[arg(short, long)]
    pub encoding: PathBuf,
    /// Violations to print.
    #[arg(long, default_value_t = 20)]
    pub max_violations: usize,
}

#[derive(Debug, Args)]
pub struct PdimArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long, default_value_t = pdim_core::exact::DEFAULT_DEADLINE_MS)]
    pub timeout_ms: u64,
    /// Also write an optimal encoding as JSON here.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MolsArgs {
    /// Order of the squares.
    #[arg(required_unless_present = "verify")]
    pub order: Option<usize>,
    /// Read two grids (from --input or standard input) and check them.
    #[arg(long, conflicts_with_all = ["order", "bump"])]
    pub verify: bool,
    /// Replace an unsupported order by the next one that is supported.
    #[arg(long)]
    pub bump: bool,
    #[arg(short, long, requires = "verify")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Family::Forest, Family::Ktree, Family::Degenerate])]
    pub families: Vec<Family>,
    #[arg(long, value_delimiter = ',', default_values_t = [16usize, 64, 256])]
    pub sizes: Vec<usize>,
    /// Values of k for the ktree and degenerate families.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3])]
    pub params: Vec<usize>,
    /// Seeds 0..seeds.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    /// Edge deletion probability for partial k-trees.
    #[arg(long, default_value_t = 0.2)]
    pub drop: f64,
    /// CSV destination; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Parse(String),
    Invalid(String),
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Io(m)
            | CliError::Parse(m)
            | CliError::Invalid(m)
            | CliError::Budget(m) => m,
        }
    }
}

fn io_error(path: Option<&Path>, e: io::Error) -> CliError {
    match path {
        Some(p) => CliError::Io(format!("{}: {e}", p.display())),
        None => CliError::Io(e.to_string()),
    }
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| io_error(Some(p), e)),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| io_error(None, e))?;
            Ok(s)
        }
    }
}

fn write_to(path: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_error(Some(p), e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| io_error(None, e)),
    }
}

fn load_graph(input: &GraphInput) -> Result<Graph, CliError> {
    let text = read_input(input.input.as_deref())?;
    parse_graph(&text, input.format).map_err(|e| CliError::Parse(format!("{}: {e}", input.format)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EncodeMeta {
    pub method: String,
    pub dimension: usize,
    pub bound: Option<f64>,
    pub bound_certified: bool,
    pub retries: u32,
    pub elapsed_ms: u64,
}

struct Encoded {
    encoding: Encoding,
    method: Method,
    bound: Option<f64>,
    bound_certified: bool,
    retries: u32,
}

fn check_flags(a: &EncodeArgs) -> Result<(), CliError> {
    let allowed: &[(&str, bool, &[Method])] = &[
        ("--epsilon", a.epsilon.is_some(), &[Method::Forest]),
        ("--seed", a.seed.is_some(), &[Method::Degenerate]),
        (
            "--p-multiplier",
            a.p_multiplier.is_some(),
            &[Method::Degenerate],
        ),
        (
            "--max-retries",
            a.max_retries.is_some(),
            &[Method::Degenerate],
        ),
        ("--td", a.td.is_some(), &[Method::Treewidth]),
        (
            "--timeout-ms",
            a.timeout_ms.is_some(),
            &[Method::Exact, Method::Treewidth],
        ),
    ];
    for (flag, given, methods) in allowed {
        if *given && a.method != Method::Auto && !methods.contains(&a.method) {
            return Err(CliError::Usage(format!(
                "{flag} does not apply to --method {}",
                a.method.name()
            )));
        }
    }
    if let Some(eps) = a.epsilon {
        if !(0.0..0.5).contains(&eps) {
            return Err(CliError::Usage(format!(
                "--epsilon must lie in [0, 0.5), got {eps}"
            )));
        }
    }
    Ok(())
}

fn encode_with(
    g: &Graph,
    a: &EncodeArgs,
    method: Method,
    td: Option<TreeDecomposition>,
) -> Result<Encoded, CliError> {
    match method {
        Method::Forest => {
            let eps = a.epsilon.unwrap_or_else(default_epsilon);
            let encoding =
                encode_forest_with(g, eps).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Encoded {
                encoding,
                method,
                bound: Some(forest_bound(g.order())),
                bound_certified: true,
                retries: 0,
            })
        }
        Method::Treewidth => {
            let mut opts = TwOptions::default();
            if let Some(ms) = a.timeout_ms {
                opts.small_deadline_ms = ms;
            }
            let tw = encode_treewidth_with(g, td.as_ref(), opts).map_err(|e| match e {
                TwError::InvalidDecomposition(p) => {
                    CliError::Invalid(format!("tree decomposition is invalid: {p:?}"))
                }
                other => CliError::Usage(other.to_string()),
            })?;
            Ok(Encoded {
                bound: Some(tw.bound()),
                bound_certified: tw.bound_certified,
                encoding: tw.encoding,
                method,
                retries: 0,
            })
        }
        Method::Degenerate => {
            let defaults = DegenerateParams::default();
            let params = DegenerateParams {
                k: None,
                seed: a.seed.unwrap_or(defaults.seed),
                multiplier: a.p_multiplier.unwrap_or(defaults.multiplier),
                max_retries: a.max_retries.unwrap_or(defaults.max_retries),
            };
            let d = encode_degenerate(g, params).map_err(|e| match e {
                DegenerateError::RetriesExhausted { .. } => CliError::Budget(e.to_string()),
                other => CliError::Usage(other.to_string()),
            })?;
            let bound = degenerate_bound(d.k, g.order());
            Ok(Encoded {
                bound: Some(bound as f64),
                bound_certified: d.encoding.dimension() <= bound,
                encoding: d.encoding,
                method,
                retries: d.retries,
            })
        }
        Method::Exact => {
            let mut budget = SearchBudget::for_graph(g);
            if let Some(ms) = a.timeout_ms {
                budget = budget.with_deadline(ms);
            }
            let r = pdim_exact(g, budget).map_err(|e| CliError::Budget(e.to_string()))?;
            Ok(Encoded {
                bound: Some(r.dimension as f64),
                bound_certified: true,
                encoding: r.witness,
                method,
                retries: 0,
            })
        }
        Method::Auto => {
            if g.is_forest() {
                return encode_with(g, a, Method::Forest, None);
            }
            if td.is_some() {
                return encode_with(g, a, Method::Treewidth, td);
            }
            let heuristic = decompose_heuristic(g);
            if heuristic.width() <= AUTO_TREEWIDTH_LIMIT {
                encode_with(g, a, Method::Treewidth, Some(heuristic))
            } else {
                encode_with(g, a, Method::Degenerate, None)
            }
        }
    }
}

fn cmd_encode(a: &EncodeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    check_flags(a)?;
    let g = load_graph(&a.graph)?;
    let td = match &a.td {
        Some(p) => Some(
            parse_td(&read_input(Some(p))?)
                .map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    let start = Instant::now();
    let enc = encode_with(&g, a, a.method, td)?;
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let json = encoding_to_json(&enc.encoding).map_err(|e| CliError::Usage(e.to_string()))?;
    write_to(a.output.as_deref(), out, &json)?;
    let meta = EncodeMeta {
        method: enc.method.name().to_string(),
        dimension: enc.encoding.dimension(),
        bound: enc.bound,
        bound_certified: enc.bound_certified,
        retries: enc.retries,
        elapsed_ms,
    };
    let mut meta_json = serde_json::to_string(&meta).map_err(|e| CliError::Io(e.to_string()))?;
    meta_json.push('\n');
    write_to(a.meta.as_deref(), err, &meta_json)
}

fn describe(kind: ViolationKind) -> String {
    match kind {
        ViolationKind::NotInjective => "NotInjective".to_string(),
        ViolationKind::EdgeAgrees { coordinate } => format!("EdgeAgrees coordinate={coordinate}"),
        ViolationKind::NonEdgeDisagreesEverywhere => "NonEdgeDisagreesEverywhere".to_string(),
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    let text = read_input(Some(&a.encoding))?;
    let e = encoding_from_json(&text).map_err(|e| match e {
        JsonError::Encoding(inner) => CliError::Invalid(inner.to_string()),
        other => CliError::Parse(format!("{}: {other}", a.encoding.display())),
    })?;
    let report = verify_encoding(&g, &e).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut text = String::new();
    if report.valid {
        text.push_str(&format!(
            "valid {}-encoding of {} vertices\n",
            e.dimension(),
            g.order()
        ));
    } else {
        text.push_str(&format!("invalid: {} violations\n", report.violation_count));
        for v in report.violations.iter().take(a.max_violations) {
            text.push_str(&format!("{} {} {}\n", v.u, v.v, describe(v.kind)));
        }
    }
    write_to(None, out, &text)?;
    if report.valid {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "{} violations",
            report.violation_count
        )))
    }
}

fn cmd_pdim(a: &PdimArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    let budget = SearchBudget::for_graph(&g).with_deadline(a.timeout_ms);
    let r = pdim_exact(&g, budget).map_err(|e| CliError::Budget(e.to_string()))?;
    if let Some(p) = &a.witness {
        let json = encoding_to_json(&r.witness).map_err(|e| CliError::Usage(e.to_string()))?;
        write_to(Some(p), out, &json)?;
    }
    write_to(None, out, &format!("{}\n", r.dimension))
}

fn cmd_mols(a: &MolsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.verify {
        let text = read_input(a.input.as_deref())?;
        return match parse_pair(&text) {
            Ok(p) => write_to(None, out, &format!("valid pair of order {}\n", p.order())),
            Err(GridError::Invalid(e)) => Err(CliError::Invalid(e.to_string())),
            Err(e) => Err(CliError::Parse(e.to_string())),
        };
    }
    let requested = a.order.expect("clap requires an order without --verify");
    let order = if a.bump {
        choose_ols_order(requested)
    } else {
        requested
    };
    let pair = mols(order).map_err(|e| CliError::Usage(format!("{e} (use --bump)")))?;
    write_to(None, out, &format_pair(&pair))
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&a.drop) {
        return Err(CliError::Usage(format!(
            "--drop must lie in [0, 1], got {}",
            a.drop
        )));
    }
    let config = BenchConfig {
        families: a.families.clone(),
        sizes: a.sizes.clone(),
        params: a.params.clone(),
        seeds: (0..a.seeds).collect(),
        drop: a.drop,
    };
    let rows = run_bench(&config).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).map_err(|e| CliError::Io(e.to_string()))?;
    write_to(a.output.as_deref(), out, &String::from_utf8_lossy(&buf))
}

/// Runs a parsed command, printing errors to `err`. Returns the exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &config.command {
        Command::Encode(a) => cmd_encode(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Pdim(a) => cmd_pdim(a, out),
        Command::Mols(a) => cmd_mols(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "pdim: {}", e.message());
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first) and runs. Usage errors exit with 1 so
/// that 2 stays reserved for unparsable input files.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config, out, err),
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            1
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        RunConfig::command().debug_assert();
    }

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_from_args(
            std::iter::once("pdim").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn method_specific_flags_are_checked() {
        let (code, _, err) = run_args(&[
            "encode",
            "--method",
            "forest",
            "--seed",
            "3",
            "-i",
            "/nonexistent",
        ]);
        assert_eq!(code, 1);
        assert!(err.contains("--seed does not apply"), "{err}");
        let (code, _, err) = run_args(&[
            "encode",
            "--method",
            "exact",
            "--td",
            "x.td",
            "-i",
            "/nonexistent",
        ]);
        assert_eq!(code, 1);
        assert!(err.contains("--td"), "{err}");
        let (code, _, _) = run_args(&[
            "encode",
            "--method",
            "forest",
            "--epsilon",
            "0.7",
            "-i",
            "/nonexistent",
        ]);
        assert_eq!(code, 1);
    }

    #[test]
    fn mols_orders() {
        let (code, out, _) = run_args(&["mols", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0 1 2\n1 2 0\n2 0 1\n\n0 2 1\n1 0 2\n2 1 0\n");
        let (code, _, err) = run_args(&["mols", "6"]);
        assert_eq!(code, 1, "{err}");
        let (code, out, _) = run_args(&["mols", "6", "--bump"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next().unwrap().split_whitespace().count(), 7);
    }

    #[test]
    fn bad_usage_exits_one() {
        assert_eq!(run_args(&["frobnicate"]).0, 1);
        assert_eq!(run_args(&["mols"]).0, 1);
        assert_eq!(run_args(&["--help"]).0, 0);
    }
}
