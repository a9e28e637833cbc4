//! Command-line front end. Every subcommand prints one JSON document on
//! stdout; figures go to the output directory. Usage errors exit with 2,
//! domain errors with 1 and a `{"error", "message"}` object on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use arithdyn::config::RunConfig;
use arithdyn::elliptic::{
    ap_count, conductor, factorize, formal_expansion, l_coefficients, series_to_curve, tate_parameter,
    tate_parameter_coefficients, tate_reduce, WeierstrassCurve,
};
use arithdyn::field::{extract_streamlines, fit_series, load_field, ExtractConfig};
use arithdyn::formation::formation_report;
use arithdyn::json::parse_rational;
use arithdyn::modular::{CoefficientVector, MetricConfig};
use arithdyn::padic::PadicNumber;
use arithdyn::planar::{portrait, render, EmbedConfig, OrbitImage, PortraitConfig};
use arithdyn::series::TruncatedSeries;
use arithdyn::surface::{distance_plot, precursor_report, scan, select_geodesic, FiberFamily, FiberRecord, PathSelection};
use arithdyn::tfilter::{base_for, generate_hole_sequence, verify_specs};

#[derive(Parser)]
#[command(name = "arithdyn", version, about = "p-adic dynamics, elliptic curves and elliptic surfaces")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate a series on a seed in Z_p.
    Orbit(OrbitArgs),
    /// Draw orbits (or portraits) of one or more series as SVG.
    Render(RenderArgs),
    /// Recover the Weierstrass curve whose formal group law is the series.
    CurveFromSeries {
        #[arg(long)]
        series: String,
    },
    /// Formal-group expansion of a curve.
    SeriesFromCurve {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Local reduction data at one prime.
    Tate {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        p: u64,
    },
    /// Coefficients a(1..=nmax) of the L-series.
    Lseries {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Tate-parameter series, or its value at a given j.
    Qparam {
        #[arg(long, allow_hyphen_values = true)]
        j: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Glue two semistable curves at a shared multiplicative prime.
    Factorize {
        #[arg(long)]
        e1: String,
        #[arg(long)]
        e2: String,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Character built from L-series coefficients and its formation counts.
    Formation(FormationArgs),
    /// Classify every fiber of the linear family joining two curves.
    SurfaceScan(SurfaceArgs),
    /// Only the extremal path through the family.
    Geodesic(SurfaceArgs),
    /// Rank candidate series against the field lines of a sampled field.
    MatchField(MatchArgs),
    /// Build a decreasing hole sequence and check it.
    TfilterCheck {
        #[arg(long)]
        r: String,
        #[arg(long = "r-star")]
        r_star: String,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    series: String,
    #[arg(long)]
    p: Option<u64>,
    /// Rational seed; defaults to p.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    #[arg(long, default_value_t = 5)]
    steps: usize,
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long, required = true)]
    series: Vec<String>,
    #[arg(long)]
    p: Option<u64>,
    /// Rational seeds; defaults to p and 2p.
    #[arg(long, allow_hyphen_values = true)]
    seed: Vec<String>,
    #[arg(long, default_value_t = 4)]
    steps: usize,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Draw the fixed-layout portraits used for field matching.
    #[arg(long)]
    portrait: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FormationArgs {
    /// JSON array a(1), a(2), ... or a coefficient-vector object.
    #[arg(long)]
    coeffs: PathBuf,
    #[arg(long)]
    nstar: u64,
    #[arg(long, default_value_t = 3.0)]
    s: f64,
    #[arg(long)]
    growth: Option<f64>,
    #[arg(long = "axiom-x", default_value_t = 100_000)]
    axiom_x: u64,
    #[arg(long = "pnt-x", default_value_t = 1_000_000)]
    pnt_x: u64,
}

#[derive(Args)]
struct SurfaceArgs {
    #[arg(long)]
    e1: String,
    #[arg(long)]
    e2: String,
    /// Number of steps; the grid has K + 1 fibers.
    #[arg(long)]
    grid: Option<usize>,
    /// Working prime, or `auto` for the smallest shared multiplicative prime.
    #[arg(long, default_value = "auto")]
    p: String,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    /// Also write the distance plot here.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    field: PathBuf,
    /// Candidate series; defaults to the 27 series with A1..A3 in {0, 1, 2}.
    #[arg(long)]
    series: Vec<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long = "core-fraction", default_value_t = 0.2)]
    core_fraction: f64,
    #[arg(long = "seed-offset", default_value_t = 0.015)]
    seed_offset: f64,
}

/// A domain failure: error name plus human-readable message.
struct Failure {
    name: String,
    message: String,
}

impl<E: Into<arithdyn::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        Self {
            name: e.name(),
            message: e.to_string(),
        }
    }
}

fn failure(name: &str, message: impl ToString) -> Failure {
    Failure {
        name: name.to_string(),
        message: message.to_string(),
    }
}

type Outcome = Result<Value, Failure>;

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn integers(xs: &[BigInt]) -> Value {
    xs.iter().map(|x| arithdyn::json::rational_to_value(&BigRational::from_integer(x.clone()))).collect()
}

fn rational(s: &str) -> Result<BigRational, Failure> {
    parse_rational(s).map_err(|m| failure("Parse", m))
}

fn curve(s: &str) -> Result<WeierstrassCurve, Failure> {
    Ok(s.parse::<WeierstrassCurve>()?)
}

fn series(s: &str) -> Result<TruncatedSeries, Failure> {
    Ok(s.parse::<TruncatedSeries>()?)
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| failure("Io", format!("{}: {e}", dir.display())))
}

fn orbit(cfg: &RunConfig, a: OrbitArgs) -> Outcome {
    let p = a.p.unwrap_or(cfg.prime);
    let precision = a.precision.unwrap_or(cfg.precision);
    let u = series(&a.series)?;
    let seed = match a.seed {
        Some(s) => rational(&s)?,
        None => BigRational::from_integer(p.into()),
    };
    let x = PadicNumber::from_rational(p, precision, &seed)?;
    let record = u.iterate(&x, a.steps)?;
    Ok(json!({
        "series": u.to_string(),
        "prime": p,
        "precision": precision,
        "attracted_to_zero": record.attracted_to_zero(),
        "orbit": to_json(&record),
    }))
}

fn render_cmd(cfg: &RunConfig, a: RenderArgs) -> Outcome {
    let p = a.p.unwrap_or(cfg.prime);
    let seeds: Vec<BigRational> = if a.seed.is_empty() {
        vec![BigRational::from_integer(p.into()), BigRational::from_integer((2 * p).into())]
    } else {
        a.seed.iter().map(|s| rational(s)).collect::<Result<_, _>>()?
    };
    let mut images = Vec::new();
    for s in &a.series {
        let u = series(s)?;
        if a.portrait {
            images.push(portrait(&u, &PortraitConfig::new(p))?);
            continue;
        }
        let embed_cfg = EmbedConfig::new(p, a.depth);
        for seed in &seeds {
            let x = PadicNumber::from_rational(p, cfg.precision, seed)?;
            let record = u.iterate(&x, a.steps)?;
            images.push(OrbitImage::from_orbit(format!("{u} @ {seed}"), &record, &embed_cfg)?);
        }
    }
    let out = match a.out {
        Some(path) => path,
        None => {
            ensure_dir(&cfg.output_dir)?;
            cfg.output_dir.join("orbits.svg")
        }
    };
    render(&images, &out)?;
    Ok(json!({ "path": out.display().to_string(), "layers": to_json(&images) }))
}

fn tate_cmd(a: &str, p: u64) -> Outcome {
    let e = curve(a)?;
    let r = tate_reduce(&e, p)?;
    let ap = ap_count(&e, p)?;
    Ok(json!({
        "p": p,
        "kind": r.kind.to_string(),
        "f_p": r.conductor_exponent,
        "f": r.conductor_exponent,
        "ap": ap,
        "kodaira": r.kodaira.to_string(),
        "tamagawa": r.tamagawa,
        "split": r.split,
    }))
}

/// `a(1), a(2), ...` from either accepted file shape.
fn read_coefficients(path: &Path) -> Result<Vec<BigInt>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| failure("Io", format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| failure("Parse", e))?;
    let rationals: Vec<BigRational> = if value.is_array() {
        let items: Vec<Value> = serde_json::from_value(value).map_err(|e| failure("Parse", e))?;
        items
            .iter()
            .map(|v| match v {
                Value::Number(n) => rational(&n.to_string()),
                Value::String(s) => rational(s),
                other => Err(failure("Parse", format!("not a coefficient: {other}"))),
            })
            .collect::<Result<_, _>>()?
    } else {
        let v: CoefficientVector = serde_json::from_value(value).map_err(|e| failure("Parse", e))?;
        v.coeffs
    };
    rationals
        .into_iter()
        .map(|r| {
            if r.is_integer() {
                Ok(r.to_integer())
            } else {
                Err(failure("Parse", format!("coefficient {r} is not an integer")))
            }
        })
        .collect()
}

fn formation_cmd(a: FormationArgs) -> Outcome {
    let all = read_coefficients(&a.coeffs)?;
    let n_star = a.nstar as usize;
    if n_star < 2 || n_star > all.len() {
        return Err(failure(
            "InvalidNStar",
            format!("nstar must lie in 2..={} for this file", all.len()),
        ));
    }
    let report = formation_report(&all[1..n_star], a.s, a.growth, a.axiom_x, a.pnt_x)?;
    Ok(to_json(&report))
}

struct Surface {
    family: FiberFamily,
    records: Vec<FiberRecord>,
    path: Result<PathSelection, Failure>,
}

fn surface(cfg: &RunConfig, a: &SurfaceArgs) -> Result<Surface, Failure> {
    let prime = match a.p.as_str() {
        "auto" => None,
        s => Some(s.parse::<u64>().map_err(|_| failure("Parse", format!("bad prime {s:?}")))?),
    };
    let n_max = a.nmax.unwrap_or(cfg.n_max);
    let family = FiberFamily::uniform(curve(&a.e1)?, curve(&a.e2)?, a.grid.unwrap_or(cfg.grid), prime)?;
    let records = scan(&family, n_max)?;
    let metric = MetricConfig {
        weight_exponent: cfg.weight_exponent,
        ..MetricConfig::new(n_max)
    };
    let path = select_geodesic(&records, &metric, a.window.unwrap_or(cfg.window)).map_err(Failure::from);
    if let (Some(plot), Ok(path)) = (&a.plot, &path) {
        std::fs::write(plot, distance_plot(&records, path))
            .map_err(|e| failure("Io", format!("{}: {e}", plot.display())))?;
    }
    Ok(Surface { family, records, path })
}

fn match_cmd(cfg: &RunConfig, a: MatchArgs) -> Outcome {
    let p = a.p.unwrap_or(cfg.prime);
    let candidates: Vec<TruncatedSeries> = if a.series.is_empty() {
        (0..27).map(|i| TruncatedSeries::from_i64(&[i % 3, (i / 3) % 3, i / 9])).collect()
    } else {
        a.series.iter().map(|s| series(s)).collect::<Result<_, _>>()?
    };
    let grid = load_field(&a.field)?;
    let extract = ExtractConfig {
        core_fraction: a.core_fraction,
        seed_offset: a.seed_offset,
        ..ExtractConfig::default()
    };
    let lines = extract_streamlines(&grid, &extract)?;
    let ranking = fit_series(&lines, &candidates, &PortraitConfig::new(p))?;
    Ok(to_json(&ranking))
}

fn run(cli: Cli) -> Outcome {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    }
    .with_env();
    match cli.command {
        Command::Orbit(a) => orbit(&cfg, a),
        Command::Render(a) => render_cmd(&cfg, a),
        Command::CurveFromSeries { series: s } => {
            let e = series_to_curve(&series(&s)?)?;
            let inv = e.invariants();
            Ok(json!({ "curve": e.to_string(), "invariants": to_json(&inv) }))
        }
        Command::SeriesFromCurve { curve: c, order } => {
            let u = formal_expansion(&curve(&c)?, order)?;
            Ok(json!({ "series": u.to_string(), "coefficients": integers(&u.coefficients) }))
        }
        Command::Tate { curve: c, p } => tate_cmd(&c, p),
        Command::Lseries { curve: c, nmax } => {
            let e = curve(&c)?;
            let v = l_coefficients(&e, nmax.unwrap_or(cfg.n_max))?;
            let mut out = to_json(&v);
            out["conductor"] = json!(conductor(&e)?.to_string());
            Ok(out)
        }
        Command::Qparam { j, p, terms } => match j {
            Some(j) => Ok(to_json(&tate_parameter(&rational(&j)?, terms, p.unwrap_or(cfg.prime))?)),
            None => {
                let h = tate_parameter_coefficients(terms);
                Ok(json!({ "coefficients": integers(&h) }))
            }
        },
        Command::Factorize { e1, e2, terms } => Ok(to_json(&factorize(&curve(&e1)?, &curve(&e2)?, terms)?)),
        Command::Formation(a) => formation_cmd(a),
        Command::SurfaceScan(a) => {
            // the fiber table is useful even when no path exists
            let s = surface(&cfg, &a)?;
            let mut out = json!({ "family": to_json(&s.family), "fibers": to_json(&s.records) });
            match s.path {
                Ok(path) => {
                    out["report"] = to_json(&precursor_report(&path, cfg.energy_scale, cfg.gap_threshold));
                    out["path"] = to_json(&path);
                }
                Err(f) => {
                    out["path"] = Value::Null;
                    out["path_error"] = json!({ "error": f.name, "message": f.message });
                }
            }
            Ok(out)
        }
        Command::Geodesic(a) => {
            let path = surface(&cfg, &a)?.path?;
            let report = precursor_report(&path, cfg.energy_scale, cfg.gap_threshold);
            Ok(json!({ "path": to_json(&path), "report": to_json(&report) }))
        }
        Command::MatchField(a) => match_cmd(&cfg, a),
        Command::TfilterCheck { r, r_star, count } => {
            let seq = generate_hole_sequence(&rational(&r)?, &rational(&r_star)?, count)?;
            let base = base_for(&seq);
            let report = verify_specs(&seq, &base);
            Ok(json!({
                "all_pass": report.all_pass(),
                "report": to_json(&report),
                "sequence": to_json(&seq),
                "base": to_json(&base),
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", json!({ "error": f.name, "message": f.message }));
            ExitCode::from(1)
        }
    }
}
