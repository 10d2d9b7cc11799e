//! Command-line front end: argument parsing, dispatch, and report output.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use htdyn::algebraic::AlgebraicNumber;
use htdyn::dynamics::{
    canonical_height, chebyshev, is_preperiodic, preimages, Point, RationalMap, DEFAULT_ITERATE_CAP,
};
use htdyn::experiments::{
    approx_common_point, bogomolov_classify, conjugate_points, discrepancy_curve, enumerate_totally_real_preperiodic,
    equidistribution_report, salem_bridge, salem_check, schinzel_search, small_height_sequence, Reference,
    SequenceRecord, Trichotomy,
};
use htdyn::heights::{height_algebraic, height_quad, HeightEstimate};
use htdyn::julia::{certify_reality, sample_invariant_measure, verify_certificate, JuliaVerdict};
use htdyn::parse::{parse_poly, parse_rational};
use htdyn::{Error, Rational};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "htdyn", version, about = "Heights and dynamics of rational maps over Q and Q(sqrt D)")]
pub struct Cli {
    /// Working precision in bits for ball arithmetic.
    #[arg(long, global = true, default_value_t = 256, env = "HTDYN_PRECISION")]
    pub precision: u32,
    /// Search depth: periods for Julia certificates, steps for sequences.
    #[arg(long, global = true, default_value_t = 4, env = "HTDYN_DEPTH")]
    pub depth: usize,
    /// Target error for heights.
    #[arg(long, global = true, default_value_t = 1e-9, env = "HTDYN_EPS")]
    pub eps: f64,
    #[arg(long, global = true, default_value_t = 0, env = "HTDYN_SEED")]
    pub seed: u64,
    /// Largest number of candidates an exhaustive search may examine.
    #[arg(long, global = true, env = "HTDYN_BUDGET")]
    pub budget: Option<u64>,
    /// Exit with status 4 on inconclusive verdicts.
    #[arg(long, global = true, env = "HTDYN_STRICT")]
    pub strict: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "HTDYN_FORMAT")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weil height of an algebraic number.
    Height { point: String },
    /// Canonical height of a point under a map.
    CanonicalHeight { map: String, point: String },
    /// Decide whether a point is preperiodic.
    Preperiodic { map: String, point: String },
    /// Solutions of f^n(x) = point.
    Preimages { map: String, point: String, n: usize },
    /// Bogomolov property of the totally real numbers for the map's canonical height.
    Classify { map: String },
    /// Certify whether the Julia set lies in the real line.
    JuliaCertify { map: String },
    /// Totally real points of small canonical height above a rational point.
    Sequence { map: String, eps_point: String, n: usize },
    /// Discrepancy against a reference measure.
    Equidist { map: String, point_or_file: String, reference: String },
    /// Smallest height of a totally real number in a coefficient box.
    Schinzel { deg: usize, coeff: u64 },
    /// The normalized Chebyshev polynomial of degree d.
    Chebyshev { d: usize },
    /// Salem test and the trace identity.
    Salem { poly: String },
    /// Totally real preperiodic points up to a degree.
    EnumeratePreperiodic { map: String, deg: usize },
    /// An element of Q(sqrt D) with both real embeddings in given intervals.
    CommonPoint { d: i64, i1: String, i2: String },
    /// Samples from the canonical measure by inverse iteration.
    MeasureSample { map: String, n: usize, seed: u64 },
}

/// Everything that determines a report besides the subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub depth: usize,
    pub eps: String,
    pub seed: u64,
    pub budget: Option<u64>,
    pub strict: bool,
    pub format: Format,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, Error> {
        if cli.precision < 53 {
            return Err(Error::InvalidArgument("precision must be at least 53 bits".into()));
        }
        if cli.depth == 0 {
            return Err(Error::InvalidArgument("depth must be positive".into()));
        }
        if !(cli.eps > 0.0 && cli.eps < 1.0) {
            return Err(Error::InvalidArgument("eps must lie in (0, 1)".into()));
        }
        if cli.budget == Some(0) {
            return Err(Error::InvalidArgument("budget must be positive".into()));
        }
        Ok(RunConfig {
            precision_bits: cli.precision,
            depth: cli.depth,
            eps: format!("{:e}", cli.eps),
            seed: cli.seed,
            budget: cli.budget,
            strict: cli.strict,
            format: cli.format,
        })
    }
}

/// Result of one invocation: exit status plus the text for each stream.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Status {
    Ok,
    Inconclusive,
    Partial,
}

struct Output {
    result: Value,
    csv: Option<String>,
    status: Status,
}

impl Output {
    fn json(result: Value) -> Self {
        Output { result, csv: None, status: Status::Ok }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) | Error::PrecisionExhausted { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let fail = |e: Error| Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") };
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let out = match dispatch(&cli.command, cli) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let stdout = match cli.format {
        Format::Json => {
            let report = json!({
                "schema": SCHEMA_VERSION,
                "command": command_name(&cli.command),
                "config": config,
                "result": out.result,
            });
            let mut s = serde_json::to_string_pretty(&report).expect("JSON values always serialize");
            s.push('\n');
            s
        }
        Format::Csv => match out.csv {
            Some(s) => s,
            None => {
                return fail(Error::InvalidArgument(format!(
                    "CSV output is not available for {}",
                    command_name(&cli.command)
                )))
            }
        },
    };
    let (code, stderr) = match out.status {
        Status::Ok => (EXIT_OK, String::new()),
        Status::Inconclusive if cli.strict => (EXIT_INCONCLUSIVE, "inconclusive verdict\n".to_string()),
        Status::Inconclusive => (EXIT_OK, String::new()),
        Status::Partial => (EXIT_BUDGET, "budget exhausted; the result is partial\n".to_string()),
    };
    Outcome { code, stdout, stderr }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Height { .. } => "height",
        Command::CanonicalHeight { .. } => "canonical-height",
        Command::Preperiodic { .. } => "preperiodic",
        Command::Preimages { .. } => "preimages",
        Command::Classify { .. } => "classify",
        Command::JuliaCertify { .. } => "julia-certify",
        Command::Sequence { .. } => "sequence",
        Command::Equidist { .. } => "equidist",
        Command::Schinzel { .. } => "schinzel",
        Command::Chebyshev { .. } => "chebyshev",
        Command::Salem { .. } => "salem",
        Command::EnumeratePreperiodic { .. } => "enumerate-preperiodic",
        Command::CommonPoint { .. } => "common-point",
        Command::MeasureSample { .. } => "measure-sample",
    }
}

fn parse_map(s: &str) -> Result<RationalMap, Error> {
    RationalMap::parse(s)
}

fn point_height(p: &Point, eps: f64) -> Result<HeightEstimate, Error> {
    match p {
        Point::Infinity => Ok(HeightEstimate::zero()),
        Point::Quad(e) => Ok(height_quad(e)),
        Point::Algebraic(a) => height_algebraic(a, eps),
    }
}

fn sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.17e}")
}

fn dispatch(cmd: &Command, cli: &Cli) -> Result<Output, Error> {
    let eps = cli.eps;
    let depth = cli.depth;
    match cmd {
        Command::Height { point } => {
            let p = Point::parse(point)?;
            let h = point_height(&p, eps)?;
            Ok(Output::json(json!({ "point": to_value(&p)?, "height": to_value(&h)? })))
        }
        Command::CanonicalHeight { map, point } => {
            let f = parse_map(map)?;
            let p = Point::parse(point)?;
            let h = canonical_height(&f, &p, eps)?;
            Ok(Output::json(json!({ "map": to_value(&f)?, "point": to_value(&p)?, "canonical_height": to_value(&h)? })))
        }
        Command::Preperiodic { map, point } => {
            let f = parse_map(map)?;
            let p = Point::parse(point)?;
            let v = is_preperiodic(&f, &p)?;
            Ok(Output::json(json!({ "map": to_value(&f)?, "point": to_value(&p)?, "preperiodicity": to_value(&v)? })))
        }
        Command::Preimages { map, point, n } => {
            let f = parse_map(map)?;
            let p = Point::parse(point)?;
            let pre = preimages(&f, &p, *n, DEFAULT_ITERATE_CAP)?;
            let approx: Vec<[String; 2]> = pre
                .roots
                .iter()
                .map(|(a, _)| {
                    let z = a.approx();
                    [sci(z.re), sci(z.im)]
                })
                .collect();
            Ok(Output::json(json!({
                "map": to_value(&f)?,
                "point": to_value(&p)?,
                "n": n,
                "preimages": to_value(&pre)?,
                "approx": approx,
            })))
        }
        Command::Classify { map } => {
            let f = parse_map(map)?;
            let r = bogomolov_classify(&f, depth)?;
            let status = match r.verdict {
                Trichotomy::Inconclusive { .. } => Status::Inconclusive,
                _ => Status::Ok,
            };
            Ok(Output { result: to_value(&r)?, csv: None, status })
        }
        Command::JuliaCertify { map } => {
            let f = parse_map(map)?;
            let cert = certify_reality(&f, depth)?;
            let verified = match cert.verdict {
                JuliaVerdict::Inconclusive { .. } => None,
                _ => Some(verify_certificate(&cert)?),
            };
            let status = if verified.is_none() { Status::Inconclusive } else { Status::Ok };
            Ok(Output { result: json!({ "certificate": to_value(&cert)?, "verified": verified }), csv: None, status })
        }
        Command::Sequence { map, eps_point, n } => {
            let f = parse_map(map)?;
            let e = parse_rational(eps_point)?;
            let recs = small_height_sequence(&f, &e, *n, eps)?;
            let consistent: Vec<bool> = recs.iter().map(SequenceRecord::consistent).collect();
            Ok(Output {
                result: json!({
                    "map": to_value(&f)?,
                    "epsilon": e.to_string(),
                    "records": to_value(&recs)?,
                    "consistent": consistent,
                }),
                csv: Some(sequence_csv(&recs)),
                status: Status::Ok,
            })
        }
        Command::Equidist { map, point_or_file, reference } => {
            let f = parse_map(map)?;
            let reference = parse_reference(reference, &f, cli.seed)?;
            let (points, source) = equidist_points(&f, point_or_file, depth, eps)?;
            let report = equidistribution_report(&points, &reference)?;
            let mut csv = String::from("x,cdf_empirical,cdf_reference\n");
            for [x, a, b] in discrepancy_curve(&points, &reference) {
                let _ = writeln!(csv, "{},{},{}", sci(x), sci(a), sci(b));
            }
            Ok(Output {
                result: json!({
                    "map": to_value(&f)?,
                    "source": source,
                    "reference": reference.name(),
                    "report": to_value(&report)?,
                }),
                csv: Some(csv),
                status: Status::Ok,
            })
        }
        Command::Schinzel { deg, coeff } => {
            let r = schinzel_search(*deg, *coeff, cli.budget)?;
            let status = if r.partial { Status::Partial } else { Status::Ok };
            Ok(Output { result: to_value(&r)?, csv: None, status })
        }
        Command::Chebyshev { d } => {
            let p = chebyshev(*d)?;
            Ok(Output::json(json!({ "d": d, "polynomial": p.to_string() })))
        }
        Command::Salem { poly } => {
            let p = parse_poly(poly)?;
            let r = salem_check(&p)?;
            let bridge = match &r.root {
                Some(a) if r.is_salem => Some(to_value(&salem_bridge(a, eps)?)?),
                _ => None,
            };
            Ok(Output::json(json!({ "salem": to_value(&r)?, "bridge": bridge })))
        }
        Command::EnumeratePreperiodic { map, deg } => {
            let f = parse_map(map)?;
            let r = enumerate_totally_real_preperiodic(&f, *deg, cli.budget)?;
            let mut csv = String::from("point,approx,minimal_polynomial,tail,period\n");
            for p in &r.points {
                let _ = writeln!(
                    csv,
                    "\"{}\",{},\"{}\",{},{}",
                    p.point,
                    sci(p.point.approx().re),
                    p.minimal_polynomial,
                    p.tail,
                    p.period
                );
            }
            let status = if r.partial { Status::Partial } else { Status::Ok };
            Ok(Output { result: json!({ "map": to_value(&f)?, "enumeration": to_value(&r)? }), csv: Some(csv), status })
        }
        Command::CommonPoint { d, i1, i2 } => {
            let (a, b) = parse_interval(i1)?;
            let (c, e) = parse_interval(i2)?;
            let x = approx_common_point(*d, (&a, &b), (&c, &e))?;
            let (re1, _) = x.to_complex_f64();
            let (re2, _) = x.conj().to_complex_f64();
            Ok(Output::json(json!({
                "d": d,
                "i1": [a.to_string(), b.to_string()],
                "i2": [c.to_string(), e.to_string()],
                "c": x.to_string(),
                "conjugate": x.conj().to_string(),
                "approx": [sci(re1), sci(re2)],
            })))
        }
        Command::MeasureSample { map, n, seed } => {
            let f = parse_map(map)?;
            let pts = sample_invariant_measure(&f, *n, *seed)?;
            let mut csv = String::from("re,im\n");
            for z in &pts {
                let _ = writeln!(csv, "{},{}", sci(z.re), sci(z.im));
            }
            let samples: Vec<[String; 2]> = pts.iter().map(|z| [sci(z.re), sci(z.im)]).collect();
            Ok(Output {
                result: json!({ "map": to_value(&f)?, "n": n, "seed": seed, "samples": samples }),
                csv: Some(csv),
                status: Status::Ok,
            })
        }
    }
}

fn sequence_csv(recs: &[SequenceRecord]) -> String {
    let mut csv = String::from("n,degree,real_roots,totally_real,canonical_height,err,expected,gamma\n");
    for r in recs {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            r.n,
            r.degree,
            r.real_roots,
            r.totally_real,
            sci(r.canonical_height.value),
            sci(r.canonical_height.err),
            sci(r.expected.value),
            sci(r.gamma.approx().re)
        );
    }
    csv
}

/// Number of measure samples drawn for the sampled reference.
const REFERENCE_SAMPLES: usize = 10_000;

fn parse_reference(s: &str, f: &RationalMap, seed: u64) -> Result<Reference, Error> {
    match s.trim().to_ascii_lowercase().as_str() {
        "circle" | "circle-uniform" => Ok(Reference::CircleUniform),
        "arcsine" => Ok(Reference::Arcsine),
        "cauchy" => Ok(Reference::Cauchy),
        "sampled" => Ok(Reference::Sampled { seed, samples: sample_invariant_measure(f, REFERENCE_SAMPLES, seed)? }),
        other => Err(Error::InvalidArgument(format!(
            "unknown reference {other:?}; expected circle-uniform, arcsine, cauchy or sampled"
        ))),
    }
}

/// Either the conjugates of `γ_depth` above a rational point, or complex
/// numbers read from a file, one `re [im]` pair per line.
fn equidist_points(f: &RationalMap, arg: &str, depth: usize, eps: f64) -> Result<(Vec<Complex64>, Value), Error> {
    let path = Path::new(arg);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {arg}: {e}")))?;
        let pts = parse_samples(&text)?;
        return Ok((pts, json!({ "file": arg })));
    }
    let e = parse_rational(arg)?;
    let recs = small_height_sequence(f, &e, depth, eps)?;
    let gamma: &AlgebraicNumber = &recs.last().expect("depth is positive").gamma;
    let pts = conjugate_points(std::slice::from_ref(gamma))?;
    Ok((pts, json!({ "epsilon": e.to_string(), "n": depth, "gamma": to_value(gamma)? })))
}

fn parse_samples(text: &str) -> Result<Vec<Complex64>, Error> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("re") {
            continue;
        }
        let nums: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        match nums.as_slice() {
            [re] => out.push(Complex64::new(*re, 0.0)),
            [re, im] => out.push(Complex64::new(*re, *im)),
            _ => return Err(Error::Parse(format!("line {}: expected one or two numbers", i + 1))),
        }
    }
    Ok(out)
}

/// `lo,hi`, optionally wrapped in parentheses or brackets.
fn parse_interval(s: &str) -> Result<(Rational, Rational), Error> {
    let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let parts: Vec<&str> = t.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("interval {s:?} must look like (lo,hi)")));
    }
    Ok((parse_rational(parts[0].trim())?, parse_rational(parts[1].trim())?))
}
