//! `mfk`: catalog browsing, verification suites, blowup charts, Gröbner
//! cross-checks and deterministic exports.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 internal
//! error (including Gröbner caps being exceeded).

pub mod export;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mfk_core::blowup::oracle::{a_oracle, d4_oracle, OracleOutcome};
use mfk_core::blowup::pipeline::{a_chart, dn_chart1, dn_chart2, flop_chart, ChartRun};
use mfk_core::blowup::{classify_residual, make_chart, BlowupError, Side};
use mfk_core::catalog::{manifest, FamilySpec, Series};
use mfk_core::ideal::{Caps, IdealError};
use mfk_core::mcm::Report;

use export::{Format, Target};
use report::{Record, RunReport};
use suites::{Filter, Suite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mfk", version, about = "Matrix factorizations of ADE singularities and their Grassmann blowups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Browse the catalog of factorizations.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Build one blowup chart and run its pipeline.
    Blowup(BlowupArgs),
    /// Compare a closed-form chart residual with a Gröbner elimination.
    Oracle(OracleArgs),
    /// Print catalog matrices in a canonical format.
    Export(ExportArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    /// List catalog entries.
    List {
        #[arg(long, default_value_t = suites::A_FACTORIZATION_MAX)]
        max_a: u32,
        #[arg(long, default_value_t = suites::D_FACTORIZATION_MAX)]
        max_d: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print the matrices of one entry.
    Show {
        #[command(flatten)]
        entry: EntryArgs,
        /// Undeformed (origin) member of an A or D family.
        #[arg(long)]
        origin: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Args)]
pub struct EntryArgs {
    #[arg(long)]
    pub series: Series,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub label: Option<String>,
}

impl EntryArgs {
    fn spec(&self, deformed: bool) -> FamilySpec {
        FamilySpec { series: self.series, n: self.n, k: self.k, deformed, label: self.label.clone() }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long)]
    pub series: Option<Series>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print only failures and the summary.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Psi,
    Phi,
}

#[derive(Debug, Args)]
pub struct BlowupArgs {
    #[command(flatten)]
    pub entry: EntryArgs,
    /// Comma-separated pivot rows, 1-based.
    #[arg(long, value_delimiter = ',')]
    pub pivots: Vec<usize>,
    #[arg(long, value_enum, default_value_t = SideArg::Psi)]
    pub side: SideArg,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub series: Series,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 1)]
    pub chart: u8,
    /// Gröbner caps `deg,basis` or `max_degree=..,max_basis=..`; overrides MFK_CAPS.
    #[arg(long)]
    pub caps: Option<String>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Target::All)]
    pub target: Target,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let mut out = std::io::stdout().lock();
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(String),
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn io(e: std::io::Error) -> Failure {
    Failure::Internal(e.to_string())
}

pub fn dispatch(cmd: Command, out: &mut impl Write) -> Result<i32, Failure> {
    match cmd {
        Command::Catalog(c) => cmd_catalog(c, out),
        Command::Verify(v) => cmd_verify(v, out),
        Command::Blowup(b) => cmd_blowup(b, out),
        Command::Oracle(o) => cmd_oracle(o, out),
        Command::Export(e) => cmd_export(e, out),
    }
}

fn cmd_catalog(cmd: CatalogCmd, out: &mut impl Write) -> Result<i32, Failure> {
    match cmd {
        CatalogCmd::List { max_a, max_d, json } => {
            let entries = manifest(max_a, max_d);
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&entries).map_err(internal)?).map_err(io)?;
            } else {
                for e in entries {
                    let tag = e.degenerate.map(|t| format!("  [{t}]")).unwrap_or_default();
                    writeln!(out, "{:<16} length {}  size {}{tag}", e.id, e.length, e.size).map_err(io)?;
                }
            }
        }
        CatalogCmd::Show { entry, origin, format } => {
            let m = entry.spec(!origin).build().map_err(|e| Failure::Usage(e.to_string()))?;
            write!(out, "{}", export::render(&export::show_items(entry.series, &m), format)).map_err(io)?;
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_verify(args: VerifyArgs, out: &mut impl Write) -> Result<i32, Failure> {
    if args.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    let filter = Filter { series: args.series, n: args.n, k: args.k };
    let report = suites::run(args.suite, &filter, args.threads);
    if report.records.is_empty() {
        return Err(Failure::Usage(format!("suite {} has no checks for this selection", args.suite.name())));
    }
    print_report(&report, args.quiet, out)?;
    if let Some(path) = &args.report {
        write_json(path, &report)?;
    }
    Ok(report.exit_code())
}

fn print_report(report: &RunReport, quiet: bool, out: &mut impl Write) -> Result<(), Failure> {
    if quiet {
        for r in report.records.iter().filter(|r| !r.pass()) {
            writeln!(out, "[{:?}] {} ({})", r.outcome, r.id, r.detail).map_err(io)?;
        }
        let s = &report.summary;
        writeln!(out, "suite {}: {} checks, {} passed, {} failed, {} errors", report.suite, s.total, s.passed, s.failed, s.errors)
            .map_err(io)
    } else {
        writeln!(out, "{report}").map_err(io)
    }
}

fn write_json(path: &PathBuf, value: &impl Serialize) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(internal)?;
    s.push('\n');
    fs::write(path, s).map_err(io)
}

#[derive(Serialize)]
struct ChartDump<'a> {
    chart: &'a mfk_core::blowup::Chart,
    classification: &'a mfk_core::blowup::ResidualClass,
    report: &'a Report,
}

/// The pipeline with known closed forms, when this entry and pivot set has one.
fn known_pipeline(spec: &FamilySpec, pivots: &[usize], side: Side) -> Option<Result<ChartRun, BlowupError>> {
    if side != Side::Psi || !spec.deformed {
        return None;
    }
    let which = match pivots {
        [0, 1] => 1,
        [0, 2] => 2,
        [1] => 1,
        [0] => 2,
        _ => return None,
    };
    match (spec.series, spec.n, spec.k, pivots.len()) {
        (Series::UniversalFlop2, _, _, 2) => Some(flop_chart(which)),
        (Series::D, Some(n), Some(k), 2) => Some(if which == 1 { dn_chart1(n, k) } else { dn_chart2(n, k) }),
        (Series::A, Some(n), Some(k), 1) => Some(a_chart(n, k, which)),
        _ => None,
    }
}

fn cmd_blowup(args: BlowupArgs, out: &mut impl Write) -> Result<i32, Failure> {
    let spec = args.entry.spec(true);
    let m = spec.build().map_err(|e| Failure::Usage(e.to_string()))?;
    if args.pivots.contains(&0) {
        return Err(Failure::Usage("pivot rows are 1-based".into()));
    }
    let pivots: Vec<usize> = args.pivots.iter().map(|r| r - 1).collect();
    let side = match args.side {
        SideArg::Psi => Side::Psi,
        SideArg::Phi => Side::Phi,
    };
    let run = match known_pipeline(&spec, &pivots, side) {
        Some(r) => r.map_err(internal)?,
        None => {
            let chart = make_chart(&m, side, &pivots, "alpha", "lambda").map_err(|e| match e {
                BlowupError::BadPivot { .. } => Failure::Usage(e.to_string()),
                e => internal(e),
            })?;
            let mut report = Report::new(chart.label());
            report.push(chart.membership_certificate());
            let mut chart = chart;
            chart.residual = chart.raw_gens.clone();
            let class = classify_residual(&chart);
            ChartRun { chart, report, class }
        }
    };
    if args.json {
        let dump = ChartDump { chart: &run.chart, classification: &run.class, report: &run.report };
        writeln!(out, "{}", serde_json::to_string_pretty(&dump).map_err(internal)?).map_err(io)?;
    } else {
        write!(out, "{}", run.report).map_err(io)?;
        for g in &run.chart.raw_gens {
            writeln!(out, "  {} = {}", g.name, g.poly).map_err(io)?;
        }
        for g in &run.chart.extended_gens {
            writeln!(out, "  {} = {}", g.name, g.poly).map_err(io)?;
        }
        for e in &run.chart.elim_log {
            writeln!(out, "  eliminate {} via {}: {} = {}", e.var, e.generator, e.var, e.value).map_err(io)?;
        }
        for r in &run.chart.residual {
            writeln!(out, "  residual {} = {}", r.name, r.poly).map_err(io)?;
        }
        writeln!(out, "classification: {}", run.class).map_err(io)?;
    }
    Ok(if run.report.pass() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_oracle(args: OracleArgs, out: &mut impl Write) -> Result<i32, Failure> {
    let caps = match &args.caps {
        Some(s) => Caps::parse(s).map_err(Failure::Usage)?,
        None => Caps::from_env().map_err(Failure::Usage)?,
    };
    let outcome: Result<OracleOutcome, BlowupError> = match (args.series, args.n, args.k, args.chart) {
        (Series::A, n, k, c @ (1 | 2)) if (2..=mfk_core::catalog::MAX_RANK).contains(&n) && (1..n).contains(&k) => {
            a_oracle(n, k, c, caps)
        }
        (Series::D, 4, 2, 1) => d4_oracle(caps),
        _ => {
            return Err(Failure::Usage(
                "oracle supports A (any n, k, chart 1 or 2) and D with n = 4, k = 2, chart 1".into(),
            ))
        }
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(BlowupError::Ideal(e @ IdealError::CapExceeded { .. })) => return Err(internal(e)),
        Err(e) => return Err(internal(e)),
    };
    let records = Record::from_report(&outcome.report)
        .into_iter()
        .map(|mut r| {
            r.wall_ms = outcome.elapsed_ms;
            r
        })
        .collect();
    let report = RunReport::new("oracle", records);
    writeln!(out, "{report}").map_err(io)?;
    writeln!(out, "closed form: {}", outcome.closed_form).map_err(io)?;
    writeln!(out, "elimination: {}", outcome.elimination.join(", ")).map_err(io)?;
    if let Some(path) = &args.report {
        write_json(path, &report)?;
    }
    Ok(report.exit_code())
}

fn cmd_export(args: ExportArgs, out: &mut impl Write) -> Result<i32, Failure> {
    let text = export::export(args.target, args.format).map_err(internal)?;
    match &args.out {
        Some(path) => fs::write(path, text).map_err(io)?,
        None => out.write_all(text.as_bytes()).map_err(io)?,
    }
    Ok(EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (Result<i32, Failure>, String) {
        let cli = Cli::try_parse_from(std::iter::once("mfk").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let code = dispatch(cli.command, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn catalog_bounds() {
        let (r, _) = run_capture(&["catalog", "show", "--series", "A", "--n", "99999", "--k", "1"]);
        assert!(matches!(r, Err(Failure::Usage(m)) if m.contains("n <= 40")));
    }

    #[test]
    fn show_flop() {
        let (r, s) = run_capture(&["catalog", "show", "--series", "UF2"]);
        assert_eq!(r.unwrap(), 0);
        assert!(s.contains("Xi =\n[-t*v, y, z, t]"));
    }

    #[test]
    fn oracle_cap() {
        let (r, _) = run_capture(&["oracle", "--series", "D", "--n", "4", "--k", "2", "--caps", "24,1"]);
        assert!(matches!(r, Err(Failure::Internal(m)) if m.contains("cap exceeded")));
    }

    #[test]
    fn blowup_known() {
        let (r, s) = run_capture(&["blowup", "--series", "UF2", "--pivots", "1,2"]);
        assert_eq!(r.unwrap(), 0, "{s}");
        assert!(s.contains("classification: smooth"));
    }
}
