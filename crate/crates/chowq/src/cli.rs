//! The `chowq` command line.
//!
//! Exit codes: 0 on success, 1 when a verification check does not come out
//! as expected, 2 for usage, parse and engine errors.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use chowq_core::catalog::KIND_NAMES;
use chowq_core::ring::DEFAULT_STEP_BUDGET;
use chowq_core::verify::{self, Parity, Report, VerifyError};
use chowq_core::{make_ring, CatalogError, RingElement, RingError, RingKind, RingPresentation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::expr::{parse_polynomial, ParseError};
use crate::{json as js, tables};

pub const BUDGET_VAR: &str = "CHOWQ_STEP_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "chowq", version, about = "Exact Chow ring arithmetic for quadric and isotropic flag bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print generators, rewrite rules, relations and the normal-form basis.
    Present(RingArgs),
    /// Print the normal form of an expression.
    Normalize(ExprArgs),
    /// Multiply two expressions in the ring.
    Mul(MulArgs),
    /// Push an expression forward to the base.
    Push(ExprArgs),
    /// Degree of a top-degree class in a ring over a point.
    Degree(ExprArgs),
    /// Products of all pairs of basis elements.
    Table(RingArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct RingArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(KIND_NAMES))]
    kind: String,
    #[arg(long)]
    n: u32,
    /// Send every base generator to zero first.
    #[arg(long)]
    point: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ExprArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, allow_hyphen_values = true)]
    expr: String,
}

#[derive(Args, Debug)]
struct MulArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, allow_hyphen_values = true)]
    left: String,
    #[arg(long, allow_hyphen_values = true)]
    right: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Fulton,
    Whitney,
    Euler,
    Comparison,
    Pushpull,
    Oracle,
    Example,
    OddIdentity,
    Structure,
    All,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(ParseError),
    Catalog(CatalogError),
    Ring(RingError),
    Verify(VerifyError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Catalog(e) => write!(f, "{e}"),
            CliError::Ring(e) => write!(f, "{e}"),
            CliError::Verify(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Catalog(e)
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::Ring(e)
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::Verify(e)
    }
}

/// Runs one command line. `args` includes the program name; `budget` is the
/// value of `CHOWQ_STEP_BUDGET`, if set.
pub fn run<I, T>(args: I, budget: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let outcome = parse_budget(budget).and_then(|b| dispatch(cli.command, b));
    match outcome {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn parse_budget(raw: Option<&str>) -> Result<u64, CliError> {
    match raw {
        None => Ok(DEFAULT_STEP_BUDGET),
        Some(s) => match s.trim().parse::<u64>() {
            Ok(b) if b > 0 => Ok(b),
            _ => Err(CliError::Usage(format!("{BUDGET_VAR} must be a positive integer, got {s:?}"))),
        },
    }
}

fn open_ring(args: &RingArgs) -> Result<Arc<RingPresentation>, CliError> {
    let ring = make_ring(RingKind::from_name(&args.kind, args.n)?)?;
    Ok(if args.point && !ring.is_point() { ring.specialize_to_point()? } else { ring })
}

fn normalize(ring: &Arc<RingPresentation>, text: &str, budget: u64) -> Result<RingElement, CliError> {
    let raw = parse_polynomial(text, ring)?;
    Ok(ring.normal_form_with_budget(&raw, budget)?)
}

fn element_output(e: &RingElement, args: &RingArgs) -> String {
    if args.json {
        js::render(&js::element(e, args.point))
    } else {
        format!("{e}\n")
    }
}

fn dispatch(command: Command, budget: u64) -> Result<(String, i32), CliError> {
    let text = match command {
        Command::Present(args) => {
            let ring = open_ring(&args)?;
            if args.json {
                js::render(&js::presentation(&ring, args.point))
            } else {
                presentation_text(&ring)
            }
        }
        Command::Normalize(a) => {
            let ring = open_ring(&a.ring)?;
            element_output(&normalize(&ring, &a.expr, budget)?, &a.ring)
        }
        Command::Mul(a) => {
            let ring = open_ring(&a.ring)?;
            let x = normalize(&ring, &a.left, budget)?;
            let y = normalize(&ring, &a.right, budget)?;
            element_output(&ring.ring_mul_with_budget(&x, &y, budget)?, &a.ring)
        }
        Command::Push(a) => {
            let ring = open_ring(&a.ring)?;
            let image = ring.pushforward(&normalize(&ring, &a.expr, budget)?)?;
            if a.ring.json {
                js::render(&js::polynomial(&image))
            } else {
                format!("{image}\n")
            }
        }
        Command::Degree(a) => {
            let ring = open_ring(&a.ring)?;
            let deg = ring.point_degree(&normalize(&ring, &a.expr, budget)?)?;
            if a.ring.json {
                js::render(&json!({ "ring": js::ring_header(&ring, a.ring.point), "degree": deg.to_string() }))
            } else {
                format!("{deg}\n")
            }
        }
        Command::Table(args) => {
            let ring = open_ring(&args)?;
            let entries = tables::multiplication_table(&ring, budget)?;
            if args.json {
                let fiber = ring.fiber_table();
                let rows: Vec<Value> = entries
                    .iter()
                    .map(|e| {
                        json!({
                            "left": ring.basis()[e.left].text(fiber),
                            "right": ring.basis()[e.right].text(fiber),
                            "product": js::element(&e.product, args.point)["terms"].clone(),
                        })
                    })
                    .collect();
                js::render(&json!({ "ring": js::ring_header(&ring, args.point), "products": rows }))
            } else {
                tables::table_text(&ring, &entries)
            }
        }
        Command::Verify(a) => {
            let reports = suite_reports(a.suite, a.n)?;
            let code = exit_code(&reports);
            let text = if a.json {
                js::render(&Value::Array(reports.iter().map(js::report).collect()))
            } else {
                let mut s = String::new();
                for r in &reports {
                    s.push_str(&format!("{r}\n"));
                }
                let good = reports.iter().filter(|r| r.as_expected()).count();
                s.push_str(&format!("summary: {good} of {} checks as expected\n", reports.len()));
                s
            };
            return Ok((text, code));
        }
    };
    Ok((text, 0))
}

/// 0 when every report has its expected status, 1 otherwise.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().all(Report::as_expected) {
        0
    } else {
        1
    }
}

const ORACLE_KINDS: [&str; 7] = [
    "flag_dn",
    "flag_bn",
    "quadric_halves",
    "flag_tower",
    "quadric_integral_even",
    "projective_bundle",
    "quadric_odd_integral_plain",
];

fn in_range(kind: RingKind) -> bool {
    let (lo, hi) = kind.supported_range();
    (lo..=hi).contains(&kind.n())
}

/// Reports of one suite, in a fixed order. Without `n` each suite runs over
/// a small default range.
pub fn suite_reports(suite: Suite, n: Option<u32>) -> Result<Vec<Report>, CliError> {
    let ns = |lo: u32, hi: u32| -> Vec<u32> { n.map_or_else(|| (lo..=hi).collect(), |n| vec![n]) };
    let mut out = Vec::new();
    match suite {
        Suite::Fulton => {
            for n in ns(1, 4) {
                out.push(verify::fulton_all_pairs(n, Parity::Even)?);
                out.push(verify::fulton_all_pairs(n, Parity::Odd)?);
            }
        }
        Suite::Whitney => {
            for n in ns(1, 4) {
                out.push(verify::whitney_invariance_check(n, Parity::Even)?);
                out.push(verify::whitney_invariance_check(n, Parity::Odd)?);
            }
        }
        Suite::Euler => {
            for n in ns(2, 3) {
                out.push(verify::euler_axioms_check(n)?);
            }
        }
        Suite::Comparison => {
            for n in ns(2, 3) {
                out.push(verify::comparison_check(n)?);
            }
        }
        Suite::Pushpull => {
            for n in ns(2, 4) {
                out.push(verify::pushpull_check(n)?);
            }
        }
        Suite::Oracle => {
            for n in ns(1, 3) {
                for name in ORACLE_KINDS {
                    let kind = RingKind::from_name(name, n)?;
                    if in_range(kind) {
                        out.push(verify::oracle_relations_check(kind)?);
                    }
                }
                out.push(verify::integral_odd_diagnostic(n)?);
            }
        }
        Suite::Example => {
            if n.is_some() {
                return Err(CliError::Usage("the example suite takes no --n".into()));
            }
            out.push(verify::no_subbundle_check()?);
            out.push(verify::no_subbundle_control()?);
        }
        Suite::OddIdentity => {
            for n in ns(1, 3) {
                out.push(verify::odd_chern_identity_check(n)?);
            }
        }
        Suite::Structure => {
            for n in ns(1, 2) {
                let mut any = false;
                for name in KIND_NAMES {
                    let kind = RingKind::from_name(name, n)?;
                    if in_range(kind) {
                        any = true;
                        out.push(verify::ring_structure_check(kind)?);
                    }
                }
                if !any {
                    return Err(CliError::Usage(format!("no catalog ring supports n = {n}")));
                }
            }
        }
        Suite::All => {
            if n.is_some() {
                return Err(CliError::Usage("the all suite takes no --n".into()));
            }
            for s in [
                Suite::Fulton,
                Suite::Whitney,
                Suite::Euler,
                Suite::Comparison,
                Suite::Pushpull,
                Suite::Oracle,
                Suite::Example,
                Suite::OddIdentity,
                Suite::Structure,
            ] {
                out.extend(suite_reports(s, None)?);
            }
        }
    }
    Ok(out)
}

fn presentation_text(ring: &RingPresentation) -> String {
    let fiber = ring.fiber_table();
    let gens = |t: &chowq_core::GeneratorTable| -> String {
        if t.is_empty() {
            return "none".into();
        }
        (0..t.len()).map(|i| format!("{} ({})", t.name(i), t.degree(i))).collect::<Vec<_>>().join(", ")
    };
    let kind = ring.kind();
    let mut s = format!("ring: {} n={}\n", kind.name(), kind.n());
    s.push_str(&format!("coefficients: {}\n", ring.coeff_kind()));
    s.push_str(&format!("fiber generators: {}\n", gens(fiber)));
    s.push_str(&format!("base generators: {}\n", gens(ring.base_table())));
    if !ring.aliases().is_empty() {
        s.push_str("named elements:\n");
        for (name, p) in ring.aliases() {
            s.push_str(&format!("  {name} = {p}\n"));
        }
    }
    s.push_str("rules:\n");
    for r in ring.rules() {
        s.push_str(&format!("  {} -> {}\n", r.lhs.text(fiber), r.rhs));
    }
    if !ring.relations().is_empty() {
        s.push_str("relations:\n");
        for (label, p) in ring.relations() {
            s.push_str(&format!("  {label}: {p}\n"));
        }
    }
    let basis: Vec<String> = ring.basis().iter().map(|m| m.text(fiber)).collect();
    s.push_str(&format!("basis ({}): {}\n", basis.len(), basis.join(", ")));
    if let Some(data) = ring.pushforward_data() {
        s.push_str("pushforward:\n");
        for (m, img) in data {
            s.push_str(&format!("  {} -> {img}\n", m.text(fiber)));
        }
    }
    s
}
