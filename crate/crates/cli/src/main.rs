//! `kron`: command-line front end for the exact Kronecker-structure toolkit.
//!
//! Exit codes: 0 success, 1 a checked property fails, 2 invalid input or usage.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kron_core::blowup::BlowupSection;
use kron_core::bundles::{generic_section_splitting, recursion_values, RecursionVariant};
use kron_core::curves::{quaternionic_report, random_curve, RationalCurve, ValidCurve};
use kron_core::io::{self, LineFile};
use kron_core::kronecker::DEFAULT_TRIALS;
use kron_core::quadric::{
    self, certification, fibration, h_action, metric_signature, orbit_equivalent, QuatTuple, RealLineData,
};
use kron_core::scalar::parse_list;
use kron_core::selftest::{run_selftest, SelftestOptions, Suite};
use kron_core::QuaternionValue;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "kron", version, about = "Exact computations with Kronecker structures")]
struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, env = "KRON_SEED", default_value_t = 0)]
    seed: u64,
    /// Samples for randomized slice certificates.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rational curves in P^n.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Bundles on P^1 given by Steiner resolutions.
    #[command(subcommand)]
    Bundle(BundleCmd),
    /// Lines on the incidence quadric and its quaternionic description.
    #[command(subcommand)]
    Quadric(QuadricCmd),
    /// Sections of the blown-up P^3.
    #[command(subcommand)]
    Blowup(BlowupCmd),
    /// Run the acceptance criteria.
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug)]
enum CurveCmd {
    /// Full report for a curve file or a random curve.
    Analyze {
        /// Curve file or inline JSON.
        input: Option<String>,
        /// Random curve of degree D in P^N from seed S.
        #[arg(long, num_args = 3, value_names = ["D", "N", "S"], conflicts_with = "input")]
        random: Option<Vec<u64>>,
    },
    /// Emit a random valid curve as a curve file.
    Random {
        #[arg(long)]
        degree: i64,
        #[arg(long, default_value_t = 3)]
        ambient: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BundleCmd {
    /// h^0 (and h^1) of twists.
    H0 {
        #[arg(long)]
        resolution: String,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
        /// Table over LO..=HI.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        range: Option<Vec<i64>>,
    },
    /// Splitting type of the cokernel.
    Splitting {
        #[arg(long)]
        resolution: String,
    },
    /// Generic section splitting from a list of h^0(N(-i)).
    GenericSection {
        #[arg(long, value_delimiter = ',')]
        h0: Vec<usize>,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value_t = Recursion::Corrected)]
        recursion: Recursion,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Recursion {
    Corrected,
    Printed,
}

#[derive(Subcommand, Debug)]
enum QuadricCmd {
    /// Validate and classify a line file.
    Classify { line: String },
    /// The real line through `x` and `y`.
    Real {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Orbit comparison of two quaternion tuples.
    Orbit { t1: String, t2: String },
    /// Image of a quaternion tuple in HP^1 x HP^1, optionally after acting by `u`.
    Fibration {
        tuple: String,
        #[arg(long)]
        act: Option<String>,
    },
    /// Signature of the metric, and the X frame Gram matrix at a point.
    Metric {
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
    /// Certified quaternionic identification.
    Convention,
}

#[derive(Subcommand, Debug)]
enum BlowupCmd {
    Classify { section: String },
    Module { section: String },
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
    suite: String,
    #[arg(long, hide = true)]
    corrupt_recursion: bool,
}

/// A rendered report and whether every checked property held.
struct Report {
    value: Value,
    ok: bool,
    csv: Option<String>,
    text: Option<String>,
}

impl Report {
    fn ok(value: Value) -> Self {
        Self::new(value, true)
    }

    fn new(value: Value, ok: bool) -> Self {
        Self {
            value,
            ok,
            csv: None,
            text: None,
        }
    }
}

/// Invalid input; mapped to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(e: impl std::fmt::Display) -> anyhow::Error {
    InputError(e.to_string()).into()
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_input(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg)
        .with_context(|| format!("reading {arg}"))
        .map_err(|e| input_err(format!("{e:#}")))
}

fn load<T>(arg: &str, parse: impl Fn(&str) -> kron_core::Result<T>) -> Result<T> {
    parse(&read_input(arg)?).map_err(input_err)
}

fn vector(arg: &str, len: usize) -> Result<Vec<kron_core::Gq>> {
    let v = parse_list(arg).map_err(input_err)?;
    if v.len() != len {
        return Err(input_err(format!("expected {len} scalars, got {}", v.len())));
    }
    Ok(v)
}

fn curve_report(vc: &ValidCurve, trials: usize, seed: u64) -> Result<Report> {
    let split = vc.normal_splitting()?;
    let dims = vc.dimension_report();
    let h0 = vc.h0_list();
    let twistor = vc.twistor_generic_splitting();
    let quaternionic = if vc.n() == 3 {
        Some(quaternionic_report(vc.curve())?)
    } else {
        None
    };
    let certificate = vc.tangent_space()?.kronecker_module()?.certificate(seed, trials)?;
    let ok = split.ghione_sacchiero != Some(false)
        && dims.passed()
        && twistor.is_ok()
        && certificate.passed()
        && quaternionic.as_ref().is_none_or(|q| q.variant.is_none() || q.passed());
    let value = json!({
        "curve": vc.curve(),
        "validation": vc.diagnostics(),
        "splitting": split.degrees,
        "ab": split.ab,
        "ghione_sacchiero": split.ghione_sacchiero,
        "h0": h0,
        "dimension": dims,
        "twistor_rank": vc.twistor_rank(),
        "twistor_splitting": twistor.as_ref().ok(),
        "twistor_error": twistor.as_ref().err().map(ToString::to_string),
        "slice_certificate": certificate,
        "quaternionic": quaternionic.map(|q| json!({
            "equivariance": q.equivariance,
            "variant": q.variant,
            "check": q.check,
            "negative_control_rejected": q.negative_control_rejected,
            "passed": q.passed(),
        })),
    });
    let mut report = Report::new(value, ok);
    report.csv = Some(format!(
        "d,n,splitting,h0,twistor_rank,expected_rank\n{},{},\"{:?}\",\"{:?}\",{},{}\n",
        vc.d(),
        vc.n(),
        split.degrees,
        h0,
        vc.twistor_rank(),
        dims.expected_rank
    ));
    Ok(report)
}

fn curve(cmd: CurveCmd, seed: u64, trials: usize) -> Result<Report> {
    match cmd {
        CurveCmd::Analyze { input, random } => {
            let vc = match (input, random) {
                (Some(path), None) => {
                    let c: RationalCurve = load(&path, io::parse_curve)?;
                    let diag = c.validate().map_err(input_err)?;
                    if !diag.valid() {
                        return Ok(Report::new(json!({ "curve": c, "validation": diag }), false));
                    }
                    c.analyze()?
                }
                (None, Some(r)) => {
                    let (d, n, s) = (r[0] as i64, r[1] as usize, r[2]);
                    let mut rng = ChaCha8Rng::seed_from_u64(s);
                    random_curve(&mut rng, n, d).map_err(input_err)?
                }
                _ => bail!(InputError("give a curve file or --random D N S".into())),
            };
            curve_report(&vc, trials, seed)
        }
        CurveCmd::Random { degree, ambient } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vc = random_curve(&mut rng, ambient, degree).map_err(input_err)?;
            Ok(Report::ok(serde_json::to_value(vc.curve())?))
        }
    }
}

fn bundle(cmd: BundleCmd) -> Result<Report> {
    match cmd {
        BundleCmd::H0 {
            resolution,
            twist,
            range,
        } => {
            let res = load(&resolution, io::parse_resolution)?;
            let diag = res.diagnostics()?;
            if !diag.generically_injective {
                return Ok(Report::new(json!({ "diagnostics": diag }), false));
            }
            let v = res.validated()?;
            match (twist, range) {
                (Some(k), None) => {
                    let t = v.twist(k);
                    let mut r = Report::ok(json!({ "twist": k, "h0": t.h0, "h1": t.h1 }));
                    r.csv = Some(format!("k,h0,h1\n{},{},{}\n", t.k, t.h0, t.h1));
                    Ok(r)
                }
                (None, Some(lr)) => {
                    let table = v.cohomology_table(lr[0], lr[1]);
                    let mut csv = String::from("k,h0,h1\n");
                    for t in &table {
                        csv.push_str(&format!("{},{},{}\n", t.k, t.h0, t.h1));
                    }
                    let mut r = Report::ok(json!({ "table": table }));
                    r.csv = Some(csv);
                    Ok(r)
                }
                _ => bail!(InputError("give exactly one of --twist or --range".into())),
            }
        }
        BundleCmd::Splitting { resolution } => {
            let res = load(&resolution, io::parse_resolution)?;
            let diag = res.diagnostics()?;
            if !(diag.generically_injective && diag.cokernel_locally_free) {
                return Ok(Report::new(json!({ "diagnostics": diag }), false));
            }
            let v = res.validated()?;
            Ok(Report::ok(json!({ "diagnostics": diag, "splitting": v.splitting_type()? })))
        }
        BundleCmd::GenericSection { h0, rank, recursion } => {
            let variant = match recursion {
                Recursion::Corrected => RecursionVariant::Corrected,
                Recursion::Printed => RecursionVariant::Printed,
            };
            let raw = recursion_values(&h0, variant);
            match generic_section_splitting(&h0, rank, variant) {
                Ok(m) => Ok(Report::ok(json!({ "h0": h0, "rank": rank, "splitting": m, "recursion_values": raw }))),
                Err(e) => Ok(Report::new(
                    json!({ "h0": h0, "rank": rank, "recursion_values": raw, "error": e.to_string() }),
                    false,
                )),
            }
        }
    }
}

fn quaternion_arg(arg: &str) -> Result<QuaternionValue> {
    let v = vector(arg, 2)?;
    Ok(QuaternionValue::new(v[0].clone(), v[1].clone()))
}

fn quadric_cmd(cmd: QuadricCmd) -> Result<Report> {
    match cmd {
        QuadricCmd::Classify { line } => {
            let lf: LineFile = load(&line, io::parse_line)?;
            let l = lf.to_line().map_err(input_err)?;
            let diag = l.validate();
            if !diag.valid() {
                return Ok(Report::new(json!({ "line": l, "diagnostics": diag }), false));
            }
            let class = l.classify()?;
            Ok(Report::ok(json!({
                "line": l,
                "diagnostics": diag,
                "class": class,
                "normal_degrees": class.normal_degrees(),
            })))
        }
        QuadricCmd::Real { x, y } => {
            let data = RealLineData::new(vector(&x, 4)?, vector(&y, 4)?)?;
            let cond = data.conditions();
            let Ok(line) = data.line() else {
                return Ok(Report::new(json!({ "conditions": cond }), false));
            };
            let id = certification().certified_id()?;
            let tuple = id.tuple(&data.x, &data.y)?;
            Ok(Report::ok(json!({
                "conditions": cond,
                "line": line,
                "class": line.classify()?,
                "x_infinity": data.is_x_infinity(),
                "tuple": tuple,
                "tuple_x_infinity": tuple.is_x_infinity(),
            })))
        }
        QuadricCmd::Orbit { t1, t2 } => {
            let a: QuatTuple = load(&t1, io::parse_tuple)?;
            let b: QuatTuple = load(&t2, io::parse_tuple)?;
            let w = orbit_equivalent(&a, &b).map_err(input_err)?;
            Ok(Report::ok(json!({ "same_orbit": w.is_some(), "witness": w })))
        }
        QuadricCmd::Fibration { tuple, act } => {
            let mut t: QuatTuple = load(&tuple, io::parse_tuple)?;
            if let Some(u) = act {
                t = h_action(&quaternion_arg(&u)?, &t).map_err(input_err)?;
            }
            let (f1, f2) = fibration(&t).map_err(input_err)?;
            Ok(Report::ok(json!({
                "tuple": t,
                "product": t.product(),
                "x_infinity": t.is_x_infinity(),
                "fibration": [f1, f2],
            })))
        }
        QuadricCmd::Metric { x, y } => {
            let (p, n) = metric_signature();
            let mut value = json!({ "signature": [p, n] });
            let mut ok = (p, n) == (8, 8);
            if let (Some(x), Some(y)) = (x, y) {
                let g = quadric::hx_gram(&vector(&x, 4)?, &vector(&y, 4)?)?;
                ok &= g.nondegenerate == g.scalar_part_nonzero;
                value["hx_gram"] = serde_json::to_value(&g)?;
            }
            Ok(Report::new(value, ok))
        }
        QuadricCmd::Convention => {
            let rep = certification();
            Ok(Report::new(serde_json::to_value(rep)?, rep.certified.is_some()))
        }
    }
}

fn blowup(cmd: BlowupCmd, seed: u64, trials: usize) -> Result<Report> {
    match cmd {
        BlowupCmd::Classify { section } => {
            let s: BlowupSection = load(&section, io::parse_section)?;
            Ok(Report::ok(json!({
                "section": s,
                "class": s.classify(),
                "real": s.is_real(),
                "real_normal_form": s.real_normal_form(),
            })))
        }
        BlowupCmd::Module { section } => {
            let s: BlowupSection = load(&section, io::parse_section)?;
            let km = s.module()?;
            let cert = km.certificate(seed, trials)?;
            Ok(Report::new(json!({ "module": km, "certificate": cert }), cert.passed()))
        }
    }
}

fn selftest(args: SelftestArgs, seed: u64) -> Result<Report> {
    let opts = SelftestOptions {
        seed,
        suite: args.suite.parse().map_err(input_err)?,
        corrupt_recursion: args.corrupt_recursion,
    };
    let rep = run_selftest(&opts);
    let mut csv = String::from("id,name,passed\n");
    for c in &rep.criteria {
        csv.push_str(&format!("{},{},{}\n", c.id, c.name, c.passed));
    }
    let mut text = rep.summary_lines().join("\n");
    text.push('\n');
    let mut r = Report::new(serde_json::to_value(&rep)?, rep.passed);
    r.csv = Some(csv);
    r.text = Some(text);
    Ok(r)
}

fn text_lines(value: &Value) -> String {
    match value {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}: {}\n", serde_json::to_string(v).expect("json")))
            .collect(),
        other => format!("{other}\n"),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let Cli {
        seed,
        trials,
        format,
        output,
        command,
    } = cli;
    let (name, report) = match command {
        Command::Curve(c) => ("curve", curve(c, seed, trials)?),
        Command::Bundle(c) => ("bundle", bundle(c)?),
        Command::Quadric(c) => ("quadric", quadric_cmd(c)?),
        Command::Blowup(c) => ("blowup", blowup(c, seed, trials)?),
        Command::Selftest(a) => ("selftest", selftest(a, seed)?),
    };
    let body = match format {
        Format::Json => io::to_json(&json!({ "seed": seed, "command": name, "report": report.value })),
        Format::Csv => report
            .csv
            .ok_or_else(|| input_err(anyhow!("csv output is only available for tables")))?,
        Format::Text => {
            let mut s = format!("seed: {seed}\n");
            s.push_str(&report.text.unwrap_or_else(|| text_lines(&report.value)));
            s
        }
    };
    match &output {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{body}"),
    }
    Ok(report.ok)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<InputError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<kron_core::Error>() {
        Some(kron_core::Error::Inconsistent(_) | kron_core::Error::Uncertified(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
