//! `gkcoh`: run the verification suites and the elliptic-curve period experiments.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or parse errors.
//! `GKCOH_WORKERS` sets the worker-pool size.

mod report;
mod suites;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gkcoh::error::Error;
use gkcoh::periods::{
    ap_table, lvalue_center_with, oda_bsd_report, periods_agm, root_number, root_number_twist, terms_needed,
    twist_search, CurveQ, RationalityReport, TwistSpec,
};

use report::{CurveReport, Fraction, PeriodsJson, RationalityJson, SuiteReport, TwistJson};

pub const WORKERS_ENV: &str = "GKCOH_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "gkcoh", version, about = "Cocycle, cup-product and period verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a symbolic or numeric verification suite.
    Verify(VerifyArgs),
    /// Period lattice, twisted central values and rationality reports for a curve.
    Periods(PeriodsArgs),
    /// Both rationality reports, with twists chosen automatically or given explicitly.
    Oda(OdaArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    GkReal,
    GkComplex,
    QuatInvariants,
    Gauss,
    Whittaker,
    AppendixA,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Weight at a real place.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Weight pair at a complex place.
    #[arg(long, default_value_t = 2)]
    k_id: usize,
    #[arg(long, default_value_t = 2)]
    k_c: usize,
    /// Quaternion algebra (a, b).
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    a: i64,
    #[arg(long, default_value_t = -11, allow_hyphen_values = true)]
    b: i64,
    /// Largest weight for the invariant-vector checks.
    #[arg(long, default_value_t = 12)]
    k_max: i64,
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// Conductor exponent.
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Number of random characters.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Primes for the Whittaker suite.
    #[arg(long, value_delimiter = ',', default_value = "5,7")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ReportKind {
    Bsd,
    Oda,
    Both,
    None,
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Weierstrass coefficients "a1,a2,a3,a4,a6", optionally followed by ",N=<conductor>".
    #[arg(long, allow_hyphen_values = true)]
    curve: String,
    #[arg(long)]
    conductor: Option<u64>,
}

#[derive(Args, Debug)]
struct PeriodsArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, value_enum, default_value_t = ReportKind::None)]
    report: ReportKind,
    /// Extra twists to evaluate, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    twists: Vec<i64>,
    /// Search bound for automatic twists.
    #[arg(long, default_value_t = 200)]
    budget: u64,
    #[arg(long, default_value_t = 1000)]
    max_den: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OdaArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Pick the smallest admissible twists of each sign.
    #[arg(long)]
    auto_twists: bool,
    #[arg(long, allow_hyphen_values = true)]
    dplus: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    dminus: Option<i64>,
    #[arg(long, default_value_t = 200)]
    budget: u64,
    #[arg(long, default_value_t = 1000)]
    max_den: u64,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Check(e.to_string())
    }
}

fn emit(output: &Output, text: String, json: String) -> Result<(), Failure> {
    let body = match output.format {
        Format::Text => text,
        Format::Json => json + "\n",
    };
    match &output.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let mut reports: Vec<SuiteReport> = match args.suite {
        Suite::GkReal => vec![suites::gk_real(args.k)],
        Suite::GkComplex => vec![suites::gk_complex(args.k_id, args.k_c, args.seed)],
        Suite::QuatInvariants => vec![suites::quat_invariants(args.a, args.b, args.k_max)],
        Suite::Gauss => vec![suites::gauss(args.p, args.n, args.count, args.seed)],
        Suite::Whittaker => vec![suites::whittaker(&args.primes, args.seed)],
        Suite::AppendixA => vec![suites::appendix_a(args.samples, args.seed)],
        Suite::All => suites::all(args.seed),
    };
    if args.timing {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut reports {
            r.wall_time_ms = Some(ms);
        }
    }
    let text: String = reports.iter().map(SuiteReport::render_text).collect();
    let json = if reports.len() == 1 { to_json(&reports[0]) } else { to_json(&reports) };
    emit(&args.output, text, json)?;
    let failing: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failing().map(|c| format!("{}:{} ({})", r.suite, c.check_id, c.anchor)))
        .collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failing checks: {}", failing.join(", "))))
    }
}

fn parse_curve(c: &CurveArgs) -> Result<CurveQ, Failure> {
    let spec = match c.conductor {
        Some(n) if !c.curve.contains("N=") => format!("{},N={n}", c.curve),
        _ => c.curve.clone(),
    };
    CurveQ::parse(&spec).map_err(|e| Failure::Usage(e.to_string()))
}

fn rationality_json(r: &RationalityReport) -> RationalityJson {
    RationalityJson {
        name: r.name.clone(),
        raw: Some(r.raw.re),
        detected: r.detected.as_ref().map(|q| Fraction { num: q.numer().to_string(), den: q.denom().to_string() }),
        residual: r.detected.as_ref().map(|_| r.residual),
        error: None,
    }
}

fn failed_report(name: &str, e: &Error) -> RationalityJson {
    RationalityJson { name: name.into(), raw: None, detected: None, residual: None, error: Some(e.to_string()) }
}

struct Pipeline {
    e: CurveQ,
    report: CurveReport,
}

fn base_report(e: &CurveQ) -> Result<Pipeline, Failure> {
    let p = periods_agm(e, 53)?;
    let curve = e.a.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    let report = CurveReport {
        curve,
        conductor: e.conductor,
        periods: PeriodsJson {
            omega1: p.omega1,
            omega2_im: p.omega2_im,
            eta1: p.eta1,
            eta2_im: p.eta2_im,
            legendre_residual: p.legendre_residual,
        },
        twists: Vec::new(),
        reports: Vec::new(),
    };
    Ok(Pipeline { e: e.clone(), report })
}

impl Pipeline {
    fn add_twists(&mut self, ds: &[i64]) -> Result<(), Failure> {
        if ds.is_empty() {
            return Ok(());
        }
        let w = root_number(&self.e)?;
        let mut seen = std::collections::BTreeSet::new();
        let twists: Vec<TwistSpec> = ds
            .iter()
            .filter(|&&d| seen.insert(d))
            .map(|&d| TwistSpec::new(d)).collect::<Result<_, _>>().map_err(|e| Failure::Usage(e.to_string()))?;
        let m = twists.iter().map(|t| t.twisted_conductor(self.e.conductor)).fold(1.0, f64::max);
        let terms = terms_needed(m, 1e-12);
        let table = ap_table(&self.e, terms)?;
        for t in twists {
            let (sign, l, note) = match root_number_twist(w, t, self.e.conductor) {
                Ok(s) => {
                    let l = lvalue_center_with(&self.e, t, w, &table, terms)?.re;
                    let note = if s == -1 { "odd functional equation" } else if l.abs() > 1e-6 { "nonvanishing" } else { "vanishes" };
                    (s, Some(l), note.to_string())
                }
                Err(e) => (0, None, e.to_string()),
            };
            self.report.twists.push(TwistJson { d: t.d, sign_pred: sign, l, note });
        }
        Ok(())
    }

    fn add_reports(&mut self, kind: ReportKind, dplus: TwistSpec, dminus: TwistSpec, max_den: u64) {
        match oda_bsd_report(&self.e, dplus, dminus, max_den) {
            Ok((bsd, oda)) => {
                if matches!(kind, ReportKind::Bsd | ReportKind::Both) {
                    self.report.reports.push(rationality_json(&bsd));
                }
                if matches!(kind, ReportKind::Oda | ReportKind::Both) {
                    self.report.reports.push(rationality_json(&oda));
                }
            }
            Err(e) => {
                for name in ["bsd", "oda"] {
                    let wanted = match kind {
                        ReportKind::Bsd => name == "bsd",
                        ReportKind::Oda => name == "oda",
                        ReportKind::Both => true,
                        ReportKind::None => false,
                    };
                    if wanted {
                        self.report.reports.push(failed_report(name, &e));
                    }
                }
            }
        }
    }

    fn finish(self, output: &Output) -> Result<(), Failure> {
        emit(output, self.report.render_text(), to_json(&self.report))?;
        let bad_twist = self.report.twists.iter().any(|t| t.sign_pred == 0);
        if self.report.all_detected() && !bad_twist {
            Ok(())
        } else {
            Err(Failure::Check("a rationality report or twist failed".into()))
        }
    }
}

fn auto_twists(e: &CurveQ, budget: u64) -> Result<(TwistSpec, TwistSpec), Failure> {
    Ok((twist_search(e, 1, budget)?, twist_search(e, -1, budget)?))
}

fn run_periods(args: &PeriodsArgs) -> Result<(), Failure> {
    let e = parse_curve(&args.curve)?;
    let mut pipe = base_report(&e)?;
    let mut ds = args.twists.clone();
    if args.report == ReportKind::Bsd {
        // BSD-type report on the untwisted curve; the imaginary twist is still needed for the pair
        let dminus = twist_search(&e, -1, args.budget)?;
        ds.insert(0, 1);
        pipe.add_twists(&ds)?;
        pipe.add_reports(ReportKind::Bsd, TwistSpec::trivial(), dminus, args.max_den);
    } else if args.report != ReportKind::None {
        let (dp, dm) = auto_twists(&e, args.budget)?;
        ds.extend([dp.d, dm.d]);
        pipe.add_twists(&ds)?;
        pipe.add_reports(args.report, dp, dm, args.max_den);
    } else {
        pipe.add_twists(&ds)?;
    }
    pipe.finish(&args.output)
}

fn run_oda(args: &OdaArgs) -> Result<(), Failure> {
    let e = parse_curve(&args.curve)?;
    let (dp, dm) = match (args.auto_twists, args.dplus, args.dminus) {
        (true, None, None) => auto_twists(&e, args.budget)?,
        (false, Some(p), Some(m)) => (
            TwistSpec::new(p).map_err(|e| Failure::Usage(e.to_string()))?,
            TwistSpec::new(m).map_err(|e| Failure::Usage(e.to_string()))?,
        ),
        _ => return Err(Failure::Usage("pass --auto-twists or both --dplus and --dminus".into())),
    };
    let mut pipe = base_report(&e)?;
    pipe.add_twists(&[dp.d, dm.d])?;
    pipe.add_reports(ReportKind::Both, dp, dm, args.max_den);
    pipe.finish(&args.output)
}

fn configure_workers() -> Result<(), Failure> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| Failure::Usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_workers().and_then(|_| match &cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Periods(a) => run_periods(a),
        Command::Oda(a) => run_oda(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
