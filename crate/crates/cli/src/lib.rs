//! The `lpa` command line.
//!
//! Exit codes: 0 success, 1 malformed input, 2 the graph has a cycle with an
//! exit (no block decomposition), 3 an internal verification failed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use lpa_core::lpa::Degree;
use lpa_core::regularity::{self, IdempotentReport};
use lpa_core::sample::Sampler;
use lpa_core::structure::{self, DecompositionReport, PhiMap, StructureError};
use lpa_core::{Field, Graph, LeavittPathAlgebra, LpaElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lpa", version, about = "Leavitt path algebras of finite graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Graph JSON file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Degree bound N.
    #[arg(long, global = true, default_value_t = 10)]
    pub bound: u32,
    /// Coefficient field: `q` or `fp:P` with P prime.
    #[arg(long, global = true, default_value = "q")]
    pub field: Field,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub samples: usize,
    /// Element JSON file (a list of terms).
    #[arg(long, global = true)]
    pub element: Option<PathBuf>,
    /// Replace the image of this edge (and its ghost) by zero before
    /// verifying; a negative control for `verify-iso`.
    #[arg(long, global = true, hide = true)]
    pub corrupt_edge: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Decide the graded type.
    Classify,
    /// Print the blocks of the graded matrix decomposition.
    Decompose,
    /// Compare graded dimensions with the block product for |n| ≤ N.
    Dims,
    /// Check every defining relation on the generator images.
    VerifyIso,
    /// Inner inverses of homogeneous elements with an a·b·a = a transcript.
    RegularWitness,
    /// Idempotent type data for the element given by --element.
    IdempotentReport,
    /// A faithful abelian idempotent and its report.
    TypeWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Verification(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Precondition(_) => EXIT_PRECONDITION,
            Failure::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

impl From<StructureError> for Failure {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::ExitsPresent => Failure::Precondition(e.to_string()),
            StructureError::Internal(_) => Failure::Verification(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<regularity::RegularityError> for Failure {
    fn from(e: regularity::RegularityError) -> Self {
        use regularity::RegularityError as R;
        match e {
            R::Structure(s) => s.into(),
            R::Internal(_) => Failure::Verification(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A report body: JSON plus a text rendering, and whether it signals a
/// verification failure (still printed, then exit 3).
struct Report {
    json: Value,
    text: String,
    failed: Option<String>,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, failed: None }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("reports serialize");
                    s.push('\n');
                    s
                }
                Format::Text => report.text,
            };
            match report.failed {
                None => Outcome { code: EXIT_OK, stdout, stderr: String::new() },
                Some(msg) => Outcome {
                    code: EXIT_VERIFICATION,
                    stdout,
                    stderr: format!("verification failed: {msg}\n"),
                },
            }
        }
        Err(f) => Outcome {
            code: f.code(),
            stdout: String::new(),
            stderr: format!("error: {f}\n"),
        },
    }
}

fn load_graph(cli: &Cli) -> Result<Graph, Failure> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Failure::Input("--input is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Graph::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_element(cli: &Cli, alg: &LeavittPathAlgebra) -> Result<Option<LpaElement>, Failure> {
    let Some(path) = &cli.element else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    alg.element_from_json(&value)
        .map(Some)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn decomposed(alg: &LeavittPathAlgebra) -> Result<(DecompositionReport, PhiMap), Failure> {
    let d = structure::decompose(alg)?;
    let map = structure::phi(alg, &d)?;
    Ok((d, map))
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let graph = load_graph(cli)?;
    let alg = LeavittPathAlgebra::new(graph, cli.field);
    match cli.command {
        Command::Classify => classify(&alg),
        Command::Decompose => decompose(&alg),
        Command::Dims => dims(&alg, cli.bound),
        Command::VerifyIso => verify_iso(&alg, cli.corrupt_edge.as_deref()),
        Command::RegularWitness => regular_witness(cli, &alg),
        Command::IdempotentReport => idempotent(cli, &alg),
        Command::TypeWitness => type_witness(&alg),
    }
}

fn classify(alg: &LeavittPathAlgebra) -> Result<Report, Failure> {
    let t = structure::classify(alg)?;
    let mut text = String::new();
    let _ = writeln!(text, "gr_type_I: {}", t.gr_type_i);
    let _ = writeln!(text, "graded_self_injective: {}", t.graded_self_injective);
    let _ = writeln!(text, "no_exit: {}", t.no_exit);
    let _ = writeln!(text, "sigma_V: {}", t.sigma_v);
    if let Some(p) = t.graded_prime {
        let _ = writeln!(text, "graded_prime: {p}");
    }
    if let Some(c) = &t.central_triple {
        let g = alg.graph();
        let _ = writeln!(
            text,
            "central_triple: ({}, {}, {})",
            c.type_i.display(g),
            c.type_ii.display(g),
            c.type_iii.display(g)
        );
    }
    if let Some(n) = &t.note {
        let _ = writeln!(text, "note: {n}");
    }
    Ok(Report::ok(t.to_json(alg), text))
}

fn decompose(alg: &LeavittPathAlgebra) -> Result<Report, Failure> {
    let d = structure::decompose(alg)?;
    let g = alg.graph();
    let mut text = String::new();
    for b in d.blocks() {
        let paths: Vec<String> = b.index_paths().iter().map(|p| p.display(g).to_string()).collect();
        let head = match b.kind() {
            structure::BlockKind::Sink(v) => format!("sink {}: M_{}(K)", g.vertex_name(*v), b.size()),
            structure::BlockKind::Cycle(c) => format!(
                "cycle {} at {}: M_{}(K[x^{t}, x^-{t}])",
                c.path().display(g),
                g.vertex_name(c.base()),
                b.size(),
                t = c.len()
            ),
        };
        let _ = writeln!(text, "{head}");
        let _ = writeln!(text, "  shifts {:?}", b.shifts());
        let _ = writeln!(text, "  paths  {}", paths.join(", "));
    }
    Ok(Report::ok(d.to_json(), text))
}

fn dims(alg: &LeavittPathAlgebra, bound: u32) -> Result<Report, Failure> {
    let table = structure::dim_series_check(alg, bound)?;
    let mut text = String::from("degree  lpa  blocks\n");
    for r in &table.rows {
        let _ = writeln!(text, "{:>6}  {:>3}  {:>6}", r.degree, r.algebra, r.blocks);
    }
    let failed = (!table.passed()).then(|| "graded dimensions disagree".to_owned());
    Ok(Report {
        json: table.to_json(),
        text,
        failed,
    })
}

fn verify_iso(alg: &LeavittPathAlgebra, corrupt: Option<&str>) -> Result<Report, Failure> {
    let (d, mut map) = decomposed(alg)?;
    if let Some(name) = corrupt {
        let e = alg
            .graph()
            .edge_by_name(name)
            .map_err(|e| Failure::Input(e.to_string()))?;
        map.edges[e.0] = d.zero_tuple();
        map.ghosts[e.0] = d.zero_tuple();
    }
    let report = structure::verify_phi(alg.graph(), &d, &map);
    let mut text = format!(
        "{} relation instances, {} failed\n",
        report.checks.len(),
        report.failures().count()
    );
    for c in report.failures() {
        let _ = writeln!(text, "  FAIL {} {}", c.relation, c.instance);
    }
    let failed = (!report.all_passed()).then(|| "a relation fails on the generator images".to_owned());
    Ok(Report {
        json: report.to_json(),
        text,
        failed,
    })
}

fn degree_json(d: Degree) -> Value {
    match d {
        Degree::Zero => json!("zero"),
        Degree::Homogeneous(n) => json!(n),
        Degree::Inhomogeneous => json!("inhomogeneous"),
    }
}

fn regular_witness(cli: &Cli, alg: &LeavittPathAlgebra) -> Result<Report, Failure> {
    let (d, map) = decomposed(alg)?;
    let elements = match load_element(cli, alg)? {
        Some(a) => vec![a],
        None => {
            let sampler = Sampler::new(alg, cli.bound, None).map_err(|e| Failure::Input(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            (0..cli.samples).map(|_| sampler.homogeneous(&mut rng, 3)).collect()
        }
    };
    let g = alg.graph();
    let mut witnesses = Vec::new();
    let mut text = format!("seed {}\n", cli.seed);
    let mut failures = 0;
    for a in &elements {
        let inv = regularity::graded_inner_inverse(alg, &d, &map, a)?;
        let ab = alg.mul(a, &inv.b);
        let aba = alg.mul(&ab, a);
        let verified = aba == *a;
        let degree_ok = inv.b.is_zero() || inv.b.degree() == Degree::Homogeneous(inv.degree);
        if !(verified && degree_ok) {
            failures += 1;
        }
        witnesses.push(json!({
            "a": alg.element_to_json(a),
            "b": alg.element_to_json(&inv.b),
            "ab": alg.element_to_json(&ab),
            "aba": alg.element_to_json(&aba),
            "deg_a": degree_json(a.degree()),
            "deg_b": degree_json(inv.b.degree()),
            "verified": verified && degree_ok,
        }));
        let _ = writeln!(text, "a     = {}", a.display(g));
        let _ = writeln!(text, "b     = {}", inv.b.display(g));
        let _ = writeln!(text, "a·b   = {}", ab.display(g));
        let _ = writeln!(text, "a·b·a = {}", aba.display(g));
        let _ = writeln!(text, "{}", if verified && degree_ok { "verified" } else { "FAILED" });
    }
    let json = json!({
        "seed": cli.seed,
        "field": alg.field().to_string(),
        "witnesses": witnesses,
        "all_verified": failures == 0,
    });
    let failed = (failures > 0).then(|| format!("{failures} inner inverse(s) failed a·b·a = a"));
    Ok(Report { json, text, failed })
}

fn report_text(r: &IdempotentReport) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "is_idempotent: {}", r.is_idempotent);
    let _ = writeln!(text, "is_homogeneous_deg0: {}", r.is_homogeneous_deg0);
    if let Some(t) = &r.types {
        let _ = writeln!(text, "block_ranks: {:?}", t.block_ranks);
        let _ = writeln!(text, "abelian: {}", t.abelian);
        let _ = writeln!(text, "directly_finite: {}", t.directly_finite);
        let _ = writeln!(text, "faithful: {}", t.faithful);
    }
    text
}

fn idempotent(cli: &Cli, alg: &LeavittPathAlgebra) -> Result<Report, Failure> {
    let e = load_element(cli, alg)?.ok_or_else(|| Failure::Input("--element is required".into()))?;
    let (d, map) = decomposed(alg)?;
    let r = regularity::idempotent_report(alg, &d, &map, &e)?;
    Ok(Report::ok(r.to_json(), report_text(&r)))
}

fn type_witness(alg: &LeavittPathAlgebra) -> Result<Report, Failure> {
    let (d, map) = decomposed(alg)?;
    let w = regularity::type_i_witness(alg, &d)?;
    let r = regularity::idempotent_report(alg, &d, &map, &w)?;
    let good = r.is_idempotent
        && r.is_homogeneous_deg0
        && r.types.as_ref().is_some_and(|t| t.abelian && t.faithful);
    let json = json!({
        "witness": alg.element_to_json(&w),
        "report": r.to_json(),
    });
    let text = format!("witness: {}\n{}", w.display(alg.graph()), report_text(&r));
    let failed = (!good).then(|| "witness is not a faithful abelian idempotent".to_owned());
    Ok(Report { json, text, failed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_definition_is_valid() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn help_exits_zero() {
        let out = run(["lpa", "--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("classify"));
    }

    #[test]
    fn bad_flags_exit_one_without_report() {
        let out = run(["lpa", "classify", "--field", "fp:10"]);
        assert_eq!(out.code, EXIT_INPUT);
        assert!(out.stdout.is_empty());
        let out = run(["lpa", "classify"]);
        assert_eq!(out.code, EXIT_INPUT);
        assert!(out.stdout.is_empty());
    }
}
