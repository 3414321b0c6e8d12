//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;

use crate::degree::{
    bound_scan, decimal, goursat_verify, j_degree, j_degree_bruteforce, pgl_lower_bound_constant, DegreeReport,
    GaloisImageSpec,
};
use crate::error::{Error, Result};
use crate::goursat::property_suite;
use crate::group::DEFAULT_CAP;
use crate::ideal::{Ideal, RingSpec};
use crate::orders::{gl_order, pgl_order, units_order};
use crate::specs;

pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_INVALID_SPEC: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "projdiv",
    version,
    about = "Degrees of projective division fields from Galois image data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Largest group the tool may enumerate.
    #[arg(long, global = true, env = "PROJDIV_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Also render ratios as decimals with this many digits.
    #[arg(long, global = true)]
    pub decimal_digits: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor an ideal, optionally splitting it relative to a conductor.
    Factor {
        #[arg(long)]
        ideal: String,
        /// Conductor for the a11 * a12 * a2 split.
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Orders of the unit group, GL_r and PGL_r of A/a.
    Order {
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Degree at one ideal, by both methods when enumeration fits the cap.
    Degree {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        ideal: String,
    },
    /// Degrees at every ideal up to a norm bound.
    Scan {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        norm_bound: u64,
    },
    /// Check the full chain of identities at one ideal.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        ideal: String,
    },
    /// Seeded random checks of fibered-product decompositions.
    GoursatCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Box subgroups intersected per sample.
        #[arg(long, default_value_t = 3)]
        boxes: usize,
    },
    /// Truncated Euler product prod_{|p| <= bound} prod_{i=2}^r (1 - |p|^-i).
    Constant {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// `Z` or `F<q>[T]`, e.g. `F3[T]`.
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long)]
        norm_bound: u64,
    },
}

/// Maps an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidSpec(_) => EXIT_INVALID_SPEC,
        Error::CapExceeded { .. } | Error::FactorBudget { .. } => EXIT_CAP,
        Error::IdentityFailed(_) => EXIT_VERIFICATION,
        _ => EXIT_MALFORMED,
    }
}

pub fn parse_ring(s: &str) -> Result<RingSpec> {
    let t = s.trim();
    if t == "Z" {
        return Ok(RingSpec::Integers);
    }
    let q = t
        .strip_prefix("F")
        .and_then(|r| r.strip_suffix("[T]").or_else(|| r.strip_suffix('T')))
        .map(|r| r.trim_start_matches('_'))
        .and_then(|r| r.parse::<u32>().ok())
        .ok_or_else(|| Error::Parse(format!("expected Z or F<q>[T], got {s:?}")))?;
    RingSpec::polynomial(q)
}

/// Loads a spec file; a missing path whose stem names a bundled spec
/// falls back to the bundled copy.
pub fn load_spec(path: &Path, cap: usize) -> Result<GaloisImageSpec> {
    if !path.exists() {
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            if let Some(spec) = specs::bundled(stem) {
                return spec;
            }
        }
    }
    GaloisImageSpec::load(path, cap)
}

struct Output<'a> {
    out: &'a mut dyn Write,
    format: Format,
    digits: Option<usize>,
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("cannot write output: {e}"))
}

fn ratio_text(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl Output<'_> {
    fn line(&mut self, text: &str) -> Result<()> {
        writeln!(self.out, "{text}").map_err(io_err)
    }

    fn json(&mut self, value: serde_json::Value) -> Result<()> {
        let text = serde_json::to_string_pretty(&value).map_err(io_err)?;
        self.line(&text)
    }

    fn csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(io_err)?;
        for row in rows {
            w.write_record(row).map_err(io_err)?;
        }
        let bytes = w.into_inner().map_err(io_err)?;
        self.out.write_all(&bytes).map_err(io_err)
    }

    fn report_header(&self) -> Vec<&'static str> {
        let mut h = vec![
            "a",
            "norm",
            "group_order",
            "scalar_order",
            "degree",
            "ratio_num",
            "ratio_den",
            "method",
        ];
        if self.digits.is_some() {
            h.push("ratio_decimal");
        }
        h
    }

    fn report_row(&self, d: &DegreeReport) -> Vec<String> {
        let mut row = vec![
            d.a.to_string(),
            d.norm.to_string(),
            d.group_order.to_string(),
            d.scalar_order.to_string(),
            d.degree.to_string(),
            d.ratio.numer().to_string(),
            d.ratio.denom().to_string(),
            d.method.to_string(),
        ];
        if let Some(k) = self.digits {
            row.push(decimal(&d.ratio, k));
        }
        row
    }

    fn report_json(&self, d: &DegreeReport) -> serde_json::Value {
        let mut v = json!({
            "a": d.a.to_string(),
            "norm": d.norm.to_string(),
            "group_order": d.group_order.to_string(),
            "scalar_order": d.scalar_order.to_string(),
            "degree": d.degree.to_string(),
            "ratio": ratio_text(&d.ratio),
            "method": d.method.to_string(),
        });
        if let Some(k) = self.digits {
            v["ratio_decimal"] = json!(decimal(&d.ratio, k));
        }
        v
    }

    fn reports(&mut self, rows: &[DegreeReport]) -> Result<()> {
        match self.format {
            Format::Csv => {
                let header = self.report_header();
                let rows: Vec<Vec<String>> = rows.iter().map(|d| self.report_row(d)).collect();
                self.csv(&header, &rows)
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = rows.iter().map(|d| self.report_json(d)).collect();
                self.json(json!(rows))
            }
        }
    }
}

/// Runs one command, writing its artifact to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let common = &cli.common;
    let cap = common.cap;
    let mut o = Output {
        out,
        format: common.format,
        digits: common.decimal_digits,
    };
    match &cli.command {
        Command::Factor { ideal, modulus } => {
            let a: Ideal = ideal.parse()?;
            let mut rows: Vec<Vec<String>> = a
                .factor()?
                .iter()
                .map(|(p, e)| vec!["prime".into(), p.to_string(), e.to_string()])
                .collect();
            if let Some(m) = modulus {
                let m = Ideal::parse_in(a.ring(), m)?;
                let d = a.decompose(&m)?;
                for (part, i) in [("a11", &d.a11), ("a12", &d.a12), ("a2", &d.a2)] {
                    rows.push(vec![part.into(), i.to_string(), "1".into()]);
                }
            }
            match o.format {
                Format::Csv => o.csv(&["kind", "ideal", "exponent"], &rows),
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|r| json!({"kind": r[0], "ideal": r[1], "exponent": r[2]}))
                        .collect();
                    o.json(json!({"ideal": a.to_string(), "norm": a.norm().to_string(), "rows": v}))
                }
            }
        }
        Command::Order { ideal, rank } => {
            if *rank == 0 {
                return Err(Error::Parse("rank must be positive".into()));
            }
            let a: Ideal = ideal.parse()?;
            let row = vec![
                rank.to_string(),
                a.to_string(),
                a.norm().to_string(),
                units_order(&a)?.to_string(),
                gl_order(*rank, &a)?.to_string(),
                pgl_order(*rank, &a)?.to_string(),
            ];
            let header = ["r", "a", "norm", "units", "gl", "pgl"];
            match o.format {
                Format::Csv => o.csv(&header, &[row]),
                Format::Json => o.json(serde_json::Value::Object(
                    header.iter().zip(row).map(|(k, v)| (k.to_string(), json!(v))).collect(),
                )),
            }
        }
        Command::Degree { spec, ideal } => {
            let spec = load_spec(spec, cap)?;
            let a = Ideal::parse_in(spec.ring(), ideal)?;
            let fast = j_degree(&spec, &a)?;
            let mut rows = vec![fast.clone()];
            match j_degree_bruteforce(&spec, &a, cap) {
                Ok(brute) => {
                    let agree = brute.agrees_with(&fast);
                    rows.push(brute);
                    o.reports(&rows)?;
                    if !agree {
                        return Err(Error::IdentityFailed(format!("fast and brute degrees differ at {a}")));
                    }
                    Ok(())
                }
                Err(Error::CapExceeded { .. }) => o.reports(&rows),
                Err(e) => Err(e),
            }
        }
        Command::Scan { spec, norm_bound } => {
            let spec = load_spec(spec, cap)?;
            let scan = bound_scan(&spec, *norm_bound)?;
            let violations: Vec<String> = scan.violations.iter().map(|a| a.to_string()).collect();
            match o.format {
                Format::Csv => {
                    o.reports(&scan.rows)?;
                    let mut summary = format!(
                        "# min_ratio={} argmin={} violations={}",
                        ratio_text(&scan.min_ratio),
                        scan.argmin,
                        violations.len()
                    );
                    if let Some(k) = o.digits {
                        summary.push_str(&format!(" min_ratio_decimal={}", decimal(&scan.min_ratio, k)));
                    }
                    o.line(&summary)?;
                }
                Format::Json => {
                    let rows: Vec<_> = scan.rows.iter().map(|d| o.report_json(d)).collect();
                    o.json(json!({
                        "rows": rows,
                        "min_ratio": ratio_text(&scan.min_ratio),
                        "argmin": scan.argmin.to_string(),
                        "violations": violations,
                    }))?;
                }
            }
            if !violations.is_empty() {
                return Err(Error::IdentityFailed(format!(
                    "ratio outside (0, 1] at {}",
                    violations.join(", ")
                )));
            }
            Ok(())
        }
        Command::Verify { spec, ideal } => {
            let spec = load_spec(spec, cap)?;
            let a = Ideal::parse_in(spec.ring(), ideal)?;
            let t = goursat_verify(&spec, &a, cap)?;
            match o.format {
                Format::Csv => o.line(&t.to_string())?,
                Format::Json => {
                    let checks: Vec<_> = t
                        .checks
                        .iter()
                        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                        .collect();
                    let d = &t.decomposition;
                    o.json(json!({
                        "a": a.to_string(),
                        "a11": d.a11.to_string(),
                        "a12": d.a12.to_string(),
                        "a2": d.a2.to_string(),
                        "checks": checks,
                        "passed": t.passed(),
                    }))?;
                }
            }
            if !t.passed() {
                let names: Vec<&str> = t.failures().map(|c| c.name).collect();
                return Err(Error::IdentityFailed(format!("failed checks: {}", names.join(", "))));
            }
            Ok(())
        }
        Command::GoursatCheck { seed, samples, boxes } => {
            let report = property_suite(*seed, *samples, *boxes)?;
            match o.format {
                Format::Csv => {
                    o.csv(
                        &["seed", "samples", "draws", "intersections", "failures"],
                        &[vec![
                            seed.to_string(),
                            report.samples.to_string(),
                            report.draws.to_string(),
                            report.intersections.to_string(),
                            report.failures.len().to_string(),
                        ]],
                    )?;
                    for f in &report.failures {
                        o.line(&format!("# {f}"))?;
                    }
                }
                Format::Json => o.json(json!({
                    "seed": seed,
                    "samples": report.samples,
                    "draws": report.draws,
                    "intersections": report.intersections,
                    "failures": report.failures,
                }))?,
            }
            if !report.failures.is_empty() {
                return Err(Error::IdentityFailed(format!(
                    "{} failed checks",
                    report.failures.len()
                )));
            }
            Ok(())
        }
        Command::Constant { rank, ring, norm_bound } => {
            let ring = parse_ring(ring)?;
            let value = pgl_lower_bound_constant(*rank, &ring, *norm_bound)?;
            let mut header = vec!["r", "ring", "norm_bound", "value_num", "value_den"];
            let mut row = vec![
                rank.to_string(),
                ring.to_string(),
                norm_bound.to_string(),
                value.numer().to_string(),
                value.denom().to_string(),
            ];
            if let Some(k) = o.digits {
                header.push("value_decimal");
                row.push(decimal(&value, k));
            }
            match o.format {
                Format::Csv => o.csv(&header, &[row]),
                Format::Json => o.json(serde_json::Value::Object(
                    header.iter().zip(row).map(|(k, v)| (k.to_string(), json!(v))).collect(),
                )),
            }
        }
    }
}

/// Parses arguments and runs; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.common.output {
        Some(path) => match File::create(path) {
            Ok(f) => {
                let mut w = BufWriter::new(f);
                execute(&cli, &mut w).and_then(|_| w.flush().map_err(io_err))
            }
            Err(e) => Err(Error::Parse(format!("cannot create {}: {e}", path.display()))),
        },
        None => execute(&cli, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    run(std::env::args_os(), &mut out, &mut io::stderr())
}
