//! Command-line front end: `construct`, `verify`, `table`, `sweep`.
//!
//! Every machine-readable report is a single JSON document carrying
//! `schema_version`. Exit codes are fixed: 0 pass, 1 verification failure,
//! 2 usage error, 3 parse error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use z2cover::construction::{construct_family, relations_table, RelationsTable};
use z2cover::cover::{BuildingData, SmoothnessReport, VerificationReport, SCHEMA_VERSION};
use z2cover::curve_oracle::{
    find_assignment, realize, Assignment, CurveOverFp, GroupStructure, IdentityCheck, DEFAULT_A, DEFAULT_B,
    DEFAULT_PRIME,
};
use z2cover::invariants::{
    canonical_map_degree, compute_invariants, minimality, CanonicalMapReport, CoverInvariants, MinimalityReport,
};
use z2cover::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PARSE: u8 = 3;

pub const SWEEP_MAX_N: u32 = 64;

#[derive(Debug, Parser)]
#[command(name = "z2cover", version, about = "Build and verify Z2^3-covers of P1 x C")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the building data of the family member with parameter n.
    Construct {
        #[arg(long)]
        n: u32,
        /// Halving choices, one of 0..=3 per index, comma separated.
        #[arg(long, value_delimiter = ',')]
        halving: Option<Vec<u8>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check relations and smoothness, then report invariants.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Render the six basis relations of a family file.
    Table {
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate invariants of the family over a range of n.
    Sweep {
        #[arg(long)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Re-check the identities on an elliptic curve over a prime field.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub oracle_prime: u64,
    #[arg(long, default_value_t = DEFAULT_A, allow_negative_numbers = true)]
    pub oracle_a: i64,
    #[arg(long, default_value_t = DEFAULT_B, allow_negative_numbers = true)]
    pub oracle_b: i64,
    #[arg(long, default_value_t = 0)]
    pub oracle_seed: u64,
}

impl Default for OracleArgs {
    fn default() -> Self {
        OracleArgs {
            oracle: false,
            oracle_prime: DEFAULT_PRIME,
            oracle_a: DEFAULT_A,
            oracle_b: DEFAULT_B,
            oracle_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// A failed command: exit code plus message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure::usage(format!("{}: {err}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Parse(_) | Error::Malformed(_) | Error::InvalidBits(_) | Error::InvalidGroupSpec(_) => {
                EXIT_PARSE
            }
            Error::Precondition(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

/// What a successful dispatch produced: the text for standard output and
/// the exit code (0 or 1).
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub prime: u64,
    pub a: u64,
    pub b: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupStructure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Assignment>,
    pub agrees: bool,
    pub relations_hold_realized: bool,
    pub injective_realized: bool,
    pub checks: Vec<IdentityCheck>,
    pub discrepancies: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl OracleSummary {
    fn ok(&self) -> bool {
        self.error.is_none() && self.agrees
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub ok: bool,
    pub relations: VerificationReport,
    pub smoothness: SmoothnessReport,
    pub invariants: Option<CoverInvariants>,
    pub canonical_map: Option<CanonicalMapReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_map_note: Option<String>,
    pub minimality: Option<MinimalityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub all_equal: bool,
    #[serde(flatten)]
    pub table: RelationsTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub k_squared: i64,
    pub p_g: u64,
    pub q: i64,
    pub image_degree: Option<i64>,
    pub degree: Option<u64>,
    pub base_point_free: Option<bool>,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub n_min: u32,
    pub n_max: u32,
    pub rows: Vec<SweepRow>,
}

fn oracle_summary(bd: &BuildingData, args: &OracleArgs) -> OracleSummary {
    let mut summary = OracleSummary {
        prime: args.oracle_prime,
        a: args.oracle_a.rem_euclid(args.oracle_prime.max(1) as i64) as u64,
        b: args.oracle_b.rem_euclid(args.oracle_prime.max(1) as i64) as u64,
        seed: args.oracle_seed,
        group: None,
        assignment: None,
        agrees: false,
        relations_hold_realized: false,
        injective_realized: false,
        checks: Vec::new(),
        discrepancies: Vec::new(),
        error: None,
    };
    let run = |summary: &mut OracleSummary| -> z2cover::Result<()> {
        let curve = CurveOverFp::new(args.oracle_prime, args.oracle_a, args.oracle_b)?;
        summary.group = Some(curve.group_structure()?);
        let assignment = find_assignment(bd, &curve, args.oracle_seed)?;
        let report = realize(bd, &curve, &assignment)?;
        summary.assignment = Some(assignment);
        summary.agrees = report.agrees();
        summary.relations_hold_realized = report.relations_hold_realized;
        summary.injective_realized = report.injective_realized;
        summary.checks = report.checks;
        summary.discrepancies = report.discrepancies;
        Ok(())
    };
    if let Err(err) = run(&mut summary) {
        summary.error = Some(err.to_string());
    }
    summary
}

/// Full verification of a building datum, independent of how it was loaded.
pub fn verify_report(bd: &BuildingData, oracle: &OracleArgs) -> Result<VerifyReport, Failure> {
    let relations = bd.verify_relations()?;
    let smoothness = bd.verify_smoothness();
    let (invariants, canonical_map, canonical_map_note, minimality) = if relations.ok {
        let inv = compute_invariants(bd)?;
        let (map, note) = match canonical_map_degree(bd) {
            Ok(map) => (Some(map), None),
            Err(Error::Precondition(msg)) => (None, Some(msg)),
            Err(err) => return Err(err.into()),
        };
        (Some(inv), map, note, Some(minimality(bd)?))
    } else {
        (None, None, None, None)
    };
    let oracle = oracle.oracle.then(|| oracle_summary(bd, oracle));
    let ok = relations.ok && smoothness.ok() && oracle.as_ref().is_none_or(OracleSummary::ok);
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        ok,
        relations,
        smoothness,
        invariants,
        canonical_map,
        canonical_map_note,
        minimality,
        oracle,
    })
}

pub fn table_report(bd: &BuildingData) -> Result<TableReport, Failure> {
    let table = relations_table(bd)?;
    Ok(TableReport {
        schema_version: SCHEMA_VERSION,
        command: "table",
        all_equal: table.all_equal(),
        table,
    })
}

pub fn sweep_report(n_min: u32, n_max: u32) -> Result<SweepReport, Failure> {
    if n_min < 2 || n_min > n_max || n_max > SWEEP_MAX_N {
        return Err(Failure::usage(format!(
            "sweep range {n_min}..{n_max} must satisfy 2 <= n-min <= n-max <= {SWEEP_MAX_N}"
        )));
    }
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let bd = construct_family(n, None)?;
        let verified = bd.verify_relations()?.ok && bd.verify_smoothness().ok();
        let inv = compute_invariants(&bd)?;
        let map = canonical_map_degree(&bd)?;
        rows.push(SweepRow {
            n,
            k_squared: inv.k_squared,
            p_g: inv.p_g,
            q: inv.q,
            image_degree: map.image_degree,
            degree: map.degree,
            base_point_free: map.base_point_free,
            verified,
        });
    }
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        command: "sweep",
        n_min,
        n_max,
        rows,
    })
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

pub fn verify_text(r: &VerifyReport) -> String {
    let mut s = String::new();
    let rel = &r.relations;
    let _ = writeln!(
        s,
        "relations: {}/{} pairs hold",
        rel.pairs_checked - rel.failures.len(),
        rel.pairs_checked
    );
    for f in &rel.failures {
        let _ = writeln!(s, "  FAIL (L{}, L{}): {} vs {}", f.chi, f.chi_prime, f.lhs, f.rhs);
    }
    if !rel.trivial_l.is_empty() {
        let list: Vec<String> = rel.trivial_l.iter().map(|c| format!("L{c}")).collect();
        let _ = writeln!(s, "  trivial: {}", list.join(", "));
    }
    let sm = &r.smoothness;
    let _ = writeln!(
        s,
        "smoothness: reduced={} snc={} injective_points={}",
        sm.reduced, sm.snc, sm.injective_points
    );
    if let Some(inv) = &r.invariants {
        let _ = writeln!(
            s,
            "invariants: K^2={} p_g={} chi={} q={}",
            inv.k_squared, inv.p_g, inv.chi, inv.q
        );
    }
    if let Some(m) = &r.canonical_map {
        let _ = writeln!(
            s,
            "canonical map: degree={} image_degree={} base_point_free={}",
            opt(&m.degree),
            opt(&m.image_degree),
            opt(&m.base_point_free)
        );
    }
    if let Some(note) = &r.canonical_map_note {
        let _ = writeln!(s, "canonical map: {note}");
    }
    if let Some(m) = &r.minimality {
        let _ = writeln!(s, "minimality: S^2={} nef_and_big={}", m.s_squared, m.nef_and_big);
    }
    if let Some(o) = &r.oracle {
        let _ = write!(s, "oracle: y^2 = x^3 + {}x + {} over F_{}", o.a, o.b, o.prime);
        if let Some(g) = &o.group {
            let _ = write!(s, " (N = {} = {} x {})", g.order, g.d1, g.d2);
        }
        let _ = writeln!(s);
        match &o.error {
            Some(err) => {
                let _ = writeln!(s, "  error: {err}");
            }
            None => {
                let _ = writeln!(
                    s,
                    "  {} identities, agrees={} relations_hold={} injective={}",
                    o.checks.len(),
                    o.agrees,
                    o.relations_hold_realized,
                    o.injective_realized
                );
                for d in &o.discrepancies {
                    let _ = writeln!(s, "  discrepancy: {d}");
                }
            }
        }
    }
    let _ = writeln!(s, "result: {}", if r.ok { "PASS" } else { "FAIL" });
    s
}

pub fn table_text(r: &TableReport) -> String {
    format!("relations for n = {}\n{}", r.table.n, r.table)
}

pub fn sweep_text(r: &SweepReport) -> String {
    let mut s = format!(
        "{:>4} {:>6} {:>5} {:>3} {:>8} {:>7} {:>5} {:>8}\n",
        "n", "K^2", "p_g", "q", "deg(Im)", "degree", "bpf", "verified"
    );
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{:>4} {:>6} {:>5} {:>3} {:>8} {:>7} {:>5} {:>8}",
            row.n,
            row.k_squared,
            row.p_g,
            row.q,
            opt(&row.image_degree),
            opt(&row.degree),
            opt(&row.base_point_free),
            row.verified
        );
    }
    s
}

pub fn load(path: &Path) -> Result<BuildingData, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    BuildingData::from_json(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

/// Writes `body` to `--out` when given and returns what goes to stdout.
fn emit(out: &Option<PathBuf>, body: String, summary: impl FnOnce() -> String) -> Result<String, Failure> {
    match out {
        Some(path) => {
            fs::write(path, body).map_err(|e| Failure::io(path, e))?;
            Ok(summary())
        }
        None => Ok(body),
    }
}

fn render<T: Serialize>(output: &OutputArgs, report: &T, text: impl FnOnce(&T) -> String) -> String {
    match output.format {
        Format::Json => to_json(report),
        Format::Text => text(report),
    }
}

pub fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Construct { n, halving, out } => {
            if n < 2 {
                return Err(Failure::usage(format!("--n must be at least 2, got {n}")));
            }
            let bd = construct_family(n, halving.as_deref())?;
            let mut body = bd.to_json();
            body.push('\n');
            let stdout = emit(&out, body, || {
                format!("wrote family n = {n} to {}\n", out.as_ref().unwrap().display())
            })?;
            Ok(Outcome { stdout, code: EXIT_PASS })
        }
        Command::Verify { file, oracle, output } => {
            let bd = load(&file)?;
            let report = verify_report(&bd, &oracle)?;
            let code = if report.ok { EXIT_PASS } else { EXIT_FAIL };
            let body = render(&output, &report, verify_text);
            let stdout = emit(&output.out, body, || {
                format!("verify: {}\n", if report.ok { "PASS" } else { "FAIL" })
            })?;
            Ok(Outcome { stdout, code })
        }
        Command::Table { file, output } => {
            let bd = load(&file)?;
            let report = table_report(&bd)?;
            let code = if report.all_equal { EXIT_PASS } else { EXIT_FAIL };
            let body = render(&output, &report, table_text);
            let stdout = emit(&output.out, body, || {
                format!("table: {} rows, all_equal={}\n", report.table.rows.len(), report.all_equal)
            })?;
            Ok(Outcome { stdout, code })
        }
        Command::Sweep { n_min, n_max, output } => {
            let report = sweep_report(n_min, n_max)?;
            let code = if report.rows.iter().all(|r| r.verified) {
                EXIT_PASS
            } else {
                EXIT_FAIL
            };
            let body = render(&output, &report, sweep_text);
            let stdout = emit(&output.out, body, || format!("sweep: {} rows\n", report.rows.len()))?;
            Ok(Outcome { stdout, code })
        }
    }
}
