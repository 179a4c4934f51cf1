//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails (the report is still
//! printed), 2 on usage, input or budget errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{format_rational, ESym};
use crate::certify::{certify_y0, certify_y1, certify_y2, CertificateReport};
use crate::combinatorics::Partition;
use crate::csf::{csf_oracle_with_budget, csf_path, csf_spider_abc, csf_trinacria, DEFAULT_ORACLE_BUDGET};
use crate::decomposition::{check_b, YDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Terms shown per expansion in table output.
const TABLE_CAP: usize = 50;

const BUDGET_VAR: &str = "CSFKIT_ORACLE_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "csfkit",
    version,
    about = "Chromatic symmetric functions in the elementary basis"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Y0,
    Y1,
    Y2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// X of the path on N vertices.
    Path { n: usize },
    /// X of the cycle on N vertices (oracle).
    Cycle { n: usize },
    /// X of the spider with legs A, B, C.
    Spider {
        a: usize,
        b: usize,
        c: usize,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// X of the trinacria with legs A, B, C.
    Trinacria {
        a: usize,
        b: usize,
        c: usize,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// X of a graph read from an edge-list file (oracle).
    Graph {
        #[arg(long)]
        file: PathBuf,
    },
    /// The pieces Y2, Y1, Y0 of the trinacria (b+2, b, 2).
    Decompose {
        #[arg(long)]
        b: usize,
    },
    /// Runs one positivity certificate.
    Certify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        b: usize,
    },
    /// Runs all certificates and the reconstruction for a range of b.
    VerifyTheorem {
        #[arg(long)]
        b_min: usize,
        #[arg(long)]
        b_max: usize,
    },
}

/// Rendered output and its exit code.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }

    fn verdict(text: String, passed: bool) -> Self {
        Outcome {
            text,
            code: if passed { 0 } else { 1 },
        }
    }
}

/// Parses `argv` (program name first), runs the command, prints its output
/// once, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.text.as_bytes());
            let _ = stdout.flush();
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn oracle_budget() -> Result<u64> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{BUDGET_VAR} must be a positive integer, found {v:?}"))),
        Err(_) => Ok(DEFAULT_ORACLE_BUDGET),
    }
}

fn check_legs(a: usize, b: usize, c: usize) -> Result<()> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::InvalidLegs(a, b, c));
    }
    Ok(())
}

fn oracle(g: &Graph) -> Result<ESym> {
    csf_oracle_with_budget(g, oracle_budget()?)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Path { n } => {
            if *n == 0 {
                return Err(Error::Usage("a path needs at least one vertex".into()));
            }
            let x = csf_path(*n).project();
            Ok(Outcome::ok(expansion_output(format, &format!("path {n}"), &x)))
        }
        Command::Cycle { n } => {
            let x = oracle(&Graph::cycle(*n)?)?;
            Ok(Outcome::ok(expansion_output(format, &format!("cycle {n}"), &x)))
        }
        Command::Spider { a, b, c, method } => {
            let x = match method {
                Method::Formula => csf_spider_abc(*a, *b, *c)?,
                Method::Oracle => {
                    check_legs(*a, *b, *c)?;
                    let legs = Partition::new(vec![*a as u32, *b as u32, *c as u32])?;
                    oracle(&Graph::spider(&legs))?
                }
            };
            Ok(Outcome::ok(expansion_output(
                format,
                &format!("spider {a} {b} {c}"),
                &x,
            )))
        }
        Command::Trinacria { a, b, c, method } => {
            let x = match method {
                Method::Formula => csf_trinacria(*a, *b, *c)?,
                Method::Oracle => {
                    check_legs(*a, *b, *c)?;
                    oracle(&Graph::trinacria(*a, *b, *c))?
                }
            };
            Ok(Outcome::ok(expansion_output(
                format,
                &format!("trinacria {a} {b} {c}"),
                &x,
            )))
        }
        Command::Graph { file } => {
            let text = std::fs::read_to_string(file)?;
            let g = Graph::from_edge_list(&text)?;
            let x = oracle(&g)?;
            Ok(Outcome::ok(expansion_output(format, &file.display().to_string(), &x)))
        }
        Command::Decompose { b } => decompose(format, *b),
        Command::Certify { target, b } => {
            let report = match target {
                Target::Y0 => certify_y0(*b)?,
                Target::Y1 => certify_y1(*b)?,
                Target::Y2 => certify_y2(*b)?,
            };
            let text = match format {
                Format::Json => format!("{}\n", report.to_json()),
                Format::Table => report.to_table(),
            };
            Ok(Outcome::verdict(text, report.verified))
        }
        Command::VerifyTheorem { b_min, b_max } => verify_theorem(format, *b_min, *b_max),
    }
}

fn witness_json(x: &ESym) -> Value {
    match x.is_e_positive().witness {
        Some((p, c)) => json!({ "index": p.parts(), "coeff": format_rational(&c) }),
        None => Value::Null,
    }
}

fn positivity_line(x: &ESym) -> String {
    match x.is_e_positive().witness {
        None => "e-positive: true".to_string(),
        Some((p, c)) => format!("e-positive: false, witness e{p} = {c}"),
    }
}

fn expansion_output(format: Format, label: &str, x: &ESym) -> String {
    match format {
        Format::Json => {
            let v = json!({
                "input": label,
                "expansion": x.to_json_value(),
                "e_positive": x.is_e_positive().positive,
                "witness": witness_json(x),
            });
            format!("{v}\n")
        }
        Format::Table => format!("{}\n{}\n", x.to_table(Some(TABLE_CAP)), positivity_line(x)),
    }
}

fn decompose(format: Format, b: usize) -> Result<Outcome> {
    check_b(b)?;
    let d = YDecomposition::compute(b)?;
    let target = csf_trinacria(b + 2, b, 2)?;
    let matches = d.reconstruct()? == target;
    let pieces = [("Y2", d.y2.project()), ("Y1", d.y1.project()), ("Y0", d.y0.project())];
    let text = match format {
        Format::Json => {
            let mut v = json!({ "b": b, "reconstruction_matches": matches });
            for (name, x) in &pieces {
                v[name.to_lowercase()] = json!({
                    "expansion": x.to_json_value(),
                    "e_positive": x.is_e_positive().positive,
                });
            }
            format!("{v}\n")
        }
        Format::Table => {
            let mut out = String::new();
            for (name, x) in &pieces {
                writeln!(out, "{name} = {}", x.to_table(Some(TABLE_CAP))).unwrap();
                writeln!(out, "  {}", positivity_line(x)).unwrap();
            }
            writeln!(out, "reconstruction matches trinacria ({}, {b}, 2): {matches}", b + 2).unwrap();
            out
        }
    };
    Ok(Outcome::verdict(text, matches))
}

struct TheoremRow {
    b: usize,
    reports: [CertificateReport; 3],
    reconstruction: bool,
    e_positive: bool,
}

impl TheoremRow {
    fn passed(&self) -> bool {
        self.reconstruction && self.e_positive && self.reports.iter().all(|r| r.verified)
    }
}

fn verify_theorem(format: Format, b_min: usize, b_max: usize) -> Result<Outcome> {
    check_b(b_min)?;
    if b_max < b_min {
        return Err(Error::Usage(format!(
            "--b-max ({b_max}) is smaller than --b-min ({b_min})"
        )));
    }
    let mut rows = Vec::new();
    for b in b_min..=b_max {
        let d = YDecomposition::compute(b)?;
        let target = csf_trinacria(b + 2, b, 2)?;
        rows.push(TheoremRow {
            b,
            reports: [certify_y2(b)?, certify_y1(b)?, certify_y0(b)?],
            reconstruction: d.reconstruct()? == target,
            e_positive: target.is_e_positive().positive,
        });
    }
    let all = rows.iter().all(TheoremRow::passed);
    let text = match format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "b": r.b,
                        "y2": r.reports[0].verified,
                        "y1": r.reports[1].verified,
                        "y0": r.reports[2].verified,
                        "reconstruction": r.reconstruction,
                        "e_positive": r.e_positive,
                    })
                })
                .collect();
            format!("{}\n", json!({ "verified": all, "rows": rows }))
        }
        Format::Table => {
            let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
            let mut out = String::new();
            writeln!(
                out,
                "{:>4}  {:<4}  {:<4}  {:<4}  {:<14}  e-positive",
                "b", "Y2", "Y1", "Y0", "reconstruction"
            )
            .unwrap();
            for r in &rows {
                writeln!(
                    out,
                    "{:>4}  {:<4}  {:<4}  {:<4}  {:<14}  {}",
                    r.b,
                    mark(r.reports[0].verified),
                    mark(r.reports[1].verified),
                    mark(r.reports[2].verified),
                    mark(r.reconstruction),
                    mark(r.e_positive),
                )
                .unwrap();
            }
            writeln!(out, "{}", if all { "all verified" } else { "verification FAILED" }).unwrap();
            out
        }
    };
    Ok(Outcome::verdict(text, all))
}
