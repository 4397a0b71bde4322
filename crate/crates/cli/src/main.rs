//! `detperm`: exact verification of structured-matrix determinants,
//! spectra, reductions and permanent congruences from the command line.
//!
//! Output goes to stdout as JSON lines, CSV or a plain table; everything
//! on stdout is deterministic (timings and progress go to stderr), so
//! identical commands produce byte-identical output across runs and
//! thread budgets. Exit codes: 0 all checks passed, 1 a verification or
//! internal assertion failed, 2 usage error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use detperm::closedforms::{
    charpoly_closed, det_closed, hankel_transform_check, verify_spectrum,
};
use detperm::error::Error;
use detperm::families::{gen, FamilyId, GenMatrix};
use detperm::matrix::charpoly;
use detperm::permanent::{
    per_naive, per_ryser, per_ryser_mod_threaded, scan_conjecture, ConjectureId,
};
use detperm::reduction::reduce_and_evaluate;
use detperm::selftest;

/// Desk-scale ceiling for conjecture scans; beyond it the subset space
/// of the Ryser engine grows past comfortable interactive runtimes.
const DESK_PMAX: u64 = 23;

#[derive(Parser)]
#[command(
    name = "detperm",
    about = "Exact determinants, spectra, reductions and permanent congruences of structured matrix families",
    after_help = "Families: a1, a2, b, absdiff, t:j0,k0, ttilde:j0,k0, hankel\n\
                  Sizes:    --n takes a single value (\"15\") or an inclusive range (\"1..40\")\n\
                  Threads:  the THREADS environment variable caps workers; --threads overrides it"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format for stdout
    #[arg(long, global = true, value_enum, default_value_t = Output::Pretty)]
    output: Output,
    /// Write stdout content to a file instead
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
    /// Worker budget for parallel scans (overrides the THREADS env var)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include the generated matrix in each item (json / pretty only)
    #[arg(long, global = true)]
    dump: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
    Pretty,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Closed-form value only
    Closed,
    /// Computed value only (Bareiss determinant / trace recurrence)
    Bareiss,
    /// Both, with a match flag
    Both,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PermMethod {
    Naive,
    Ryser,
    Both,
}

#[derive(Args)]
struct FamilyN {
    /// Matrix family (a1, a2, b, absdiff, t:j0,k0, ttilde:j0,k0, hankel)
    #[arg(long)]
    family: String,
    /// Size or inclusive range ("9" or "1..40")
    #[arg(long)]
    n: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Determinants: closed form, Bareiss oracle, or both compared
    Det {
        #[command(flatten)]
        fam_n: FamilyN,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Characteristic polynomials of a1 / a2 (closed factorization vs computed)
    Charpoly {
        #[command(flatten)]
        fam_n: FamilyN,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Full spectrum verification for a1 / a2 (n >= 3)
    Spectrum {
        #[command(flatten)]
        fam_n: FamilyN,
    },
    /// Permanents, exact or modular
    Permanent {
        #[command(flatten)]
        fam_n: FamilyN,
        #[arg(long, value_enum, default_value_t = PermMethod::Ryser)]
        method: PermMethod,
        /// Reduce modulo this value (integer families only)
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Scan a permanent congruence over primes
    Conjecture {
        /// 4.1i, 4.1ii, 4.2 or s11.23
        #[arg(long)]
        id: String,
        /// Largest prime to scan
        #[arg(long)]
        pmax: u64,
        /// Permit scans past the desk-scale ceiling of p <= 23
        #[arg(long)]
        allow_large: bool,
    },
    /// Hankel-transform comparison over A025276
    Hankel {
        /// Check n = 1..nmax
        #[arg(long)]
        nmax: usize,
    },
    /// Replay the determinant reduction pipeline for B
    ReduceB {
        /// Size or inclusive range (n >= 3)
        #[arg(long)]
        n: String,
        /// Include per-stage records (and snapshots for n <= 12)
        #[arg(long)]
        trace: bool,
    },
    /// Run the complete verification suite
    Selftest,
}

/// Outcome of a subcommand: ordered output items plus the overall flag.
struct Report {
    columns: &'static [&'static str],
    items: Vec<Value>,
    pass: bool,
}

enum CliError {
    Usage(String),
    Internal(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownFamily(_)
            | Error::BadFactorIndex { .. }
            | Error::EmptySize
            | Error::BadModulus(_)
            | Error::UnknownConjecture(_)
            | Error::SizeLimit { .. }
            | Error::UnsupportedFamily { .. }
            | Error::SpectrumUndefined { .. } => CliError::Usage(e.to_string()),
            other => CliError::Internal(other),
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("invalid size or range {s:?} (use \"9\" or \"1..40\")"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let n: usize = s.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok((n, n))
    }
}

fn parse_family(s: &str) -> Result<FamilyId, CliError> {
    FamilyId::from_str(s).map_err(CliError::from)
}

fn matrix_json(m: &GenMatrix) -> Value {
    json!({
        "rows": m.size(),
        "cols": m.size(),
        "kind": m.kind(),
        "entries": m.entry_strings(),
    })
}

fn with_dump(mut item: Value, fam: &FamilyId, n: usize, dump: bool) -> Result<Value, CliError> {
    if dump {
        let m = gen(fam, n)?;
        item.as_object_mut()
            .expect("items are objects")
            .insert("matrix".to_string(), matrix_json(&m));
    }
    Ok(item)
}

fn run_det(fam_n: &FamilyN, method: Method, dump: bool) -> Result<Report, CliError> {
    let fam = parse_family(&fam_n.family)?;
    let (lo, hi) = parse_range(&fam_n.n)?;
    let mut items = Vec::new();
    let mut pass = true;
    for n in lo..=hi {
        let mut obj = Map::new();
        obj.insert("family".into(), json!(fam.to_string()));
        obj.insert("n".into(), json!(n));
        let closed = match method {
            Method::Closed | Method::Both => Some(det_closed(&fam, n)?),
            Method::Bareiss => None,
        };
        let computed = match method {
            Method::Bareiss | Method::Both => Some(gen(&fam, n)?.det_bareiss()?),
            Method::Closed => None,
        };
        if let Some(c) = &closed {
            obj.insert("closed".into(), json!(c.to_string()));
        }
        if let Some(c) = &computed {
            obj.insert("computed".into(), json!(c.to_string()));
        }
        if let (Some(a), Some(b)) = (&closed, &computed) {
            let ok = a == b;
            pass &= ok;
            obj.insert("match".into(), json!(ok));
        }
        items.push(with_dump(Value::Object(obj), &fam, n, dump)?);
    }
    Ok(Report {
        columns: &["family", "n", "closed", "computed", "match"],
        items,
        pass,
    })
}

fn run_charpoly(fam_n: &FamilyN, method: Method, dump: bool) -> Result<Report, CliError> {
    let fam = parse_family(&fam_n.family)?;
    let (lo, hi) = parse_range(&fam_n.n)?;
    let mut items = Vec::new();
    let mut pass = true;
    for n in lo..=hi {
        let mut obj = Map::new();
        obj.insert("family".into(), json!(fam.to_string()));
        obj.insert("n".into(), json!(n));
        let closed = match method {
            Method::Closed | Method::Both => Some(charpoly_closed(&fam, n)?),
            Method::Bareiss => None,
        };
        let computed = match method {
            Method::Bareiss | Method::Both => Some(charpoly(&gen(&fam, n)?.to_rat())?),
            Method::Closed => None,
        };
        if let Some(p) = &closed {
            obj.insert("closed".into(), json!(p.to_string()));
        }
        if let Some(p) = &computed {
            obj.insert("computed".into(), json!(p.to_string()));
            obj.insert(
                "coefficients".into(),
                json!(p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            );
        }
        if let (Some(a), Some(b)) = (&closed, &computed) {
            let ok = a == b;
            pass &= ok;
            obj.insert("match".into(), json!(ok));
        }
        items.push(with_dump(Value::Object(obj), &fam, n, dump)?);
    }
    Ok(Report {
        columns: &["family", "n", "closed", "computed", "match"],
        items,
        pass,
    })
}

fn run_spectrum(fam_n: &FamilyN, dump: bool) -> Result<Report, CliError> {
    let fam = parse_family(&fam_n.family)?;
    let (lo, hi) = parse_range(&fam_n.n)?;
    let mut items = Vec::new();
    let mut pass = true;
    for n in lo..=hi {
        let rep = verify_spectrum(&fam, n)?;
        let verified = rep.verified();
        pass &= verified;
        let mut item = serde_json::to_value(&rep).expect("report serializes");
        item.as_object_mut()
            .unwrap()
            .insert("verified".into(), json!(verified));
        items.push(with_dump(item, &fam, n, dump)?);
    }
    Ok(Report {
        columns: &[
            "family",
            "n",
            "eigen_equation_ok",
            "independence_rank",
            "rank_expected",
            "charpoly_match",
            "det_product_match",
            "trace_match",
            "verified",
        ],
        items,
        pass,
    })
}

fn run_permanent(
    fam_n: &FamilyN,
    method: PermMethod,
    modulus: Option<u64>,
    dump: bool,
) -> Result<Report, CliError> {
    let fam = parse_family(&fam_n.family)?;
    let (lo, hi) = parse_range(&fam_n.n)?;
    let mut items = Vec::new();
    let mut pass = true;
    for n in lo..=hi {
        let m = gen(&fam, n)?;
        let mut obj = Map::new();
        obj.insert("family".into(), json!(fam.to_string()));
        obj.insert("n".into(), json!(n));
        if let Some(md) = modulus {
            let GenMatrix::Int(im) = &m else {
                return Err(CliError::Usage(format!(
                    "--modulus requires an integer family, but {fam} is rational"
                )));
            };
            obj.insert("modulus".into(), json!(md));
            obj.insert(
                "value".into(),
                json!(per_ryser_mod_threaded(im, md, 1)?.to_string()),
            );
        } else {
            let (naive, ryser) = match (&m, method) {
                (GenMatrix::Int(im), PermMethod::Naive) => (Some(per_naive(im)?.to_string()), None),
                (GenMatrix::Int(im), PermMethod::Ryser) => (None, Some(per_ryser(im)?.to_string())),
                (GenMatrix::Int(im), PermMethod::Both) => (
                    Some(per_naive(im)?.to_string()),
                    Some(per_ryser(im)?.to_string()),
                ),
                (GenMatrix::Rat(rm), PermMethod::Naive) => (Some(per_naive(rm)?.to_string()), None),
                (GenMatrix::Rat(rm), PermMethod::Ryser) => (None, Some(per_ryser(rm)?.to_string())),
                (GenMatrix::Rat(rm), PermMethod::Both) => (
                    Some(per_naive(rm)?.to_string()),
                    Some(per_ryser(rm)?.to_string()),
                ),
            };
            match (naive, ryser) {
                (Some(a), Some(b)) => {
                    let ok = a == b;
                    pass &= ok;
                    obj.insert("value".into(), json!(b));
                    obj.insert("naive".into(), json!(a));
                    obj.insert("match".into(), json!(ok));
                }
                (Some(a), None) => {
                    obj.insert("value".into(), json!(a));
                }
                (None, Some(b)) => {
                    obj.insert("value".into(), json!(b));
                }
                (None, None) => unreachable!(),
            }
        }
        items.push(with_dump(Value::Object(obj), &fam, n, dump)?);
    }
    Ok(Report {
        columns: &["family", "n", "modulus", "value", "naive", "match"],
        items,
        pass,
    })
}

fn run_conjecture(
    id: &str,
    pmax: u64,
    allow_large: bool,
    threads: usize,
) -> Result<Report, CliError> {
    let id = ConjectureId::from_str(id)?;
    if pmax < 2 {
        return Err(CliError::Usage("--pmax must be at least 2".to_string()));
    }
    if pmax > DESK_PMAX && !allow_large {
        return Err(CliError::Usage(format!(
            "--pmax {pmax} exceeds the desk-scale ceiling {DESK_PMAX}; pass --allow-large to proceed"
        )));
    }
    let rep = scan_conjecture(id, pmax, threads)?;
    eprintln!(
        "# scan {id} over primes <= {pmax}: {} rows in {:.2?}",
        rep.rows.len(),
        rep.runtime
    );
    let items = rep
        .rows
        .iter()
        .map(|r| serde_json::to_value(r).expect("row serializes"))
        .collect();
    Ok(Report {
        columns: &["p", "computed", "expected", "pass"],
        items,
        pass: rep.pass,
    })
}

fn run_hankel(nmax: usize) -> Result<Report, CliError> {
    if nmax == 0 {
        return Err(CliError::Usage("--nmax must be at least 1".to_string()));
    }
    let rep = hankel_transform_check(nmax);
    let items = rep
        .rows
        .iter()
        .map(|r| serde_json::to_value(r).expect("row serializes"))
        .collect();
    Ok(Report {
        columns: &["n", "hankel_det", "expected", "pass"],
        items,
        pass: rep.pass,
    })
}

fn run_reduce_b(n: &str, trace: bool) -> Result<Report, CliError> {
    let (lo, hi) = parse_range(n)?;
    if lo < 3 {
        return Err(CliError::Usage(
            "the reduction pipeline requires n >= 3".to_string(),
        ));
    }
    let mut items = Vec::new();
    let mut pass = true;
    for n in lo..=hi {
        let t = reduce_and_evaluate(n)?;
        pass &= t.ok;
        let mut item = serde_json::to_value(&t).expect("trace serializes");
        if !trace {
            item.as_object_mut().unwrap().remove("steps");
        }
        items.push(item);
    }
    Ok(Report {
        columns: &["n", "final_case", "final_value", "ok"],
        items,
        pass,
    })
}

fn run_selftest() -> Result<Report, CliError> {
    let outs = selftest::run_all();
    let pass = outs.iter().all(|o| o.pass);
    for o in &outs {
        eprintln!("# criterion {:2} finished in {:.2?}", o.id, o.elapsed);
    }
    let items = outs
        .iter()
        .map(|o| {
            json!({
                "criterion": o.id,
                "pass": o.pass,
                "label": o.label,
                "detail": o.detail,
            })
        })
        .collect();
    Ok(Report {
        columns: &["criterion", "pass", "label", "detail"],
        items,
        pass,
    })
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn value_to_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(value_to_cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn render(report: &Report, output: Output) -> Result<String, CliError> {
    let mut out = String::new();
    match output {
        Output::Json => {
            for item in &report.items {
                writeln!(out, "{}", serde_json::to_string(item).expect("valid json")).unwrap();
            }
        }
        Output::Csv => {
            writeln!(out, "{}", report.columns.join(",")).unwrap();
            for item in &report.items {
                let row: Vec<String> = report
                    .columns
                    .iter()
                    .map(|c| csv_escape(&value_to_cell(item.get(*c).unwrap_or(&Value::Null))))
                    .collect();
                writeln!(out, "{}", row.join(",")).unwrap();
            }
        }
        // ordered "key=value" rows; drops nothing that json carries except
        // bulky matrix/step payloads, which get their own indented lines
        Output::Pretty => {
            for item in &report.items {
                let obj = item.as_object().expect("items are objects");
                let mut parts = Vec::new();
                for c in report.columns {
                    if let Some(v) = obj.get(*c) {
                        parts.push(format!("{c}={}", value_to_cell(v)));
                    }
                }
                // anything outside the fixed columns, in key order
                for (k, v) in obj {
                    if !report.columns.contains(&k.as_str()) && k != "matrix" && k != "steps" {
                        parts.push(format!("{k}={}", value_to_cell(v)));
                    }
                }
                writeln!(out, "{}", parts.join("  ")).unwrap();
                if let Some(m) = obj.get("matrix") {
                    for row in m["entries"].as_array().unwrap() {
                        writeln!(out, "    [{}]", value_to_cell(row)).unwrap();
                    }
                }
                if let Some(steps) = obj.get("steps") {
                    for s in steps.as_array().unwrap() {
                        writeln!(
                            out,
                            "    stage dim={} det={} sign={} {}",
                            s["dim"], value_to_cell(&s["det"]), s["sign"], value_to_cell(&s["label"])
                        )
                        .unwrap();
                    }
                }
            }
            writeln!(
                out,
                "overall: {} ({} items)",
                if report.pass { "PASS" } else { "FAIL" },
                report.items.len()
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let threads = resolve_threads(cli.threads);

    if cli.dump && cli.output == Output::Csv {
        eprintln!("error: --dump is not representable in CSV output");
        return ExitCode::from(2);
    }

    let result = match &cli.cmd {
        Cmd::Det { fam_n, method } => run_det(fam_n, *method, cli.dump),
        Cmd::Charpoly { fam_n, method } => run_charpoly(fam_n, *method, cli.dump),
        Cmd::Spectrum { fam_n } => run_spectrum(fam_n, cli.dump),
        Cmd::Permanent { fam_n, method, modulus } => {
            run_permanent(fam_n, *method, *modulus, cli.dump)
        }
        Cmd::Conjecture { id, pmax, allow_large } => {
            run_conjecture(id, *pmax, *allow_large, threads)
        }
        Cmd::Hankel { nmax } => run_hankel(*nmax),
        Cmd::ReduceB { n, trace } => run_reduce_b(n, *trace),
        Cmd::Selftest => run_selftest(),
    };

    let report = match result {
        Ok(r) => r,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Internal(e)) => {
            println!("{}", json!({ "error": e.to_string() }));
            return ExitCode::from(1);
        }
    };

    let rendered = match render(&report, cli.output) {
        Ok(s) => s,
        Err(_) => unreachable!("rendering is infallible"),
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, rendered.as_bytes()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        print!("{rendered}");
        let _ = std::io::stdout().flush();
    }
    let echo: Vec<String> = std::env::args().skip(1).collect();
    eprintln!(
        "# detperm {}: {} ({} items) in {:.2?}",
        echo.join(" "),
        if report.pass { "PASS" } else { "FAIL" },
        report.items.len(),
        start.elapsed()
    );
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
