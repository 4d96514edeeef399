mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use essclose_core::closure::{essential_closure_exact, essential_closure_grid, run_corpus, GridClosureParams, Property};
use essclose_core::copula::{check_copula_axioms, sample_copula, CopulaSpec};
use essclose_core::json::{self, rational};
use essclose_core::setmodel::rasterize_set;
use essclose_core::support::{
    check_hyperplane_condition, check_one_essential_closedness, check_one_essential_closedness_grid,
    support_estimate, support_exact, Residual, DEFAULT_MIN_COUNT,
};
use essclose_core::{parse_rational, DyadicGridSet, Error, PieceSet, Rational};
use serde_json::{json, Value};

use render::{Canvas, RenderConfig};

/// Essential closures, copula supports and their necessary conditions.
#[derive(Parser)]
#[command(name = "essclose", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// d-essential closure of a set (exact) or of a grid.
    Closure(ClosureArgs),
    /// Support of a copula, exact or estimated from samples.
    Support(SupportArgs),
    /// Necessary conditions on a set, or copula axioms.
    Check(CheckArgs),
    /// Draw seeded samples from a copula.
    Sample(SampleArgs),
    /// Write a set, grid or sample cloud as a PGM image.
    Render(RenderArgs),
    /// Check the closure properties on a seeded random corpus.
    Props(PropsArgs),
}

#[derive(Args)]
struct ClosureArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    d: usize,
    /// Use the grid approximation; sets are rasterized first.
    #[arg(long)]
    grid: bool,
    #[arg(long = "L", alias = "level", default_value_t = 6)]
    level: u32,
    /// Comma-separated window radii, decreasing.
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SupportArgs {
    #[arg(long)]
    copula: PathBuf,
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Estimate from samples instead.
    #[arg(long)]
    mc: bool,
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    #[arg(long = "L", alias = "level", default_value_t = 6)]
    level: u32,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
    min_count: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Set or grid to check.
    #[arg(long, required_unless_present = "copula")]
    set: Option<PathBuf>,
    /// Copula whose axioms to check.
    #[arg(long)]
    copula: Option<PathBuf>,
    /// Comma-separated: closedness, hyperplane, axioms.
    #[arg(long)]
    conditions: Option<String>,
    #[arg(long, default_value_t = 1000)]
    probes: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    copula: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Set or grid.
    #[arg(long, required_unless_present = "cloud")]
    set: Option<PathBuf>,
    #[arg(long)]
    cloud: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 512)]
    width: usize,
    #[arg(long, default_value_t = 512)]
    height: usize,
    /// The two axes shown, 1-based.
    #[arg(long, default_value = "1,2")]
    axes: String,
    #[arg(long, default_value_t = 3)]
    stroke: usize,
}

#[derive(Args)]
struct PropsArgs {
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Violations,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("essclose: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Closure(a) => cmd_closure(a),
        Command::Support(a) => cmd_support(a),
        Command::Check(a) => cmd_check(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Render(a) => cmd_render(a),
        Command::Props(a) => cmd_props(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Err(e) => {
            eprintln!("essclose: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("ESSCLOSE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Input(format!("ESSCLOSE_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Input(format!("thread pool: {e}")))
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    json::parse(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, v: &Value) -> Result<(), Error> {
    let text = json::to_string(v);
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

enum SetOrGrid {
    Set(PieceSet),
    Grid(DyadicGridSet),
}

fn read_set_or_grid(path: &Path) -> Result<SetOrGrid, Error> {
    let v = read_json(path)?;
    if json::is_grid(&v) {
        Ok(SetOrGrid::Grid(json::grid_from_json(&v)?))
    } else {
        Ok(SetOrGrid::Set(json::set_from_json(&v)?))
    }
}

fn parse_list(s: &str) -> Result<Vec<Rational>, Error> {
    s.split(',').map(parse_rational).collect()
}

fn cmd_closure(a: ClosureArgs) -> Result<Outcome, Error> {
    let input = read_set_or_grid(&a.input)?;
    let out = if a.grid || matches!(input, SetOrGrid::Grid(_)) {
        let grid = match input {
            SetOrGrid::Grid(g) => g,
            SetOrGrid::Set(s) => rasterize_set(&s, a.level)?,
        };
        let mut params = GridClosureParams::new(a.d);
        if let Some(r) = &a.rho {
            params.rho_schedule = parse_list(r)?;
        }
        if let Some(t) = &a.tau {
            params.tau = parse_rational(t)?;
        }
        json::grid_to_json(&essential_closure_grid(&grid, &params)?)
    } else {
        let SetOrGrid::Set(s) = input else { unreachable!() };
        json::set_to_json(&essential_closure_exact(&s, a.d)?)
    };
    emit(a.out.as_deref(), &out)?;
    Ok(Outcome::Ok)
}

fn cmd_support(a: SupportArgs) -> Result<Outcome, Error> {
    let c = json::copula_from_json(&read_json(&a.copula)?)?;
    let out = if a.mc {
        let cloud = sample_copula(&c, a.n, a.seed)?;
        let est = support_estimate(&cloud, a.level, a.min_count)?;
        let mut v = json::grid_to_json(&est.grid);
        v["min_count"] = json!(est.min_count);
        v["samples"] = json!(est.samples);
        v["seed"] = json!(est.seed);
        v
    } else {
        json::set_to_json(&support_exact(&c)?)
    };
    emit(a.out.as_deref(), &out)?;
    Ok(Outcome::Ok)
}

fn point_json(x: &[Rational]) -> Value {
    Value::Array(x.iter().map(rational).collect())
}

fn cmd_check(a: CheckArgs) -> Result<Outcome, Error> {
    let default = if a.set.is_some() { "closedness,hyperplane" } else { "axioms" };
    let conditions: Vec<String> = a
        .conditions
        .as_deref()
        .unwrap_or(default)
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let input = a.set.as_deref().map(read_set_or_grid).transpose()?;
    let copula = a.copula.as_deref().map(|p| read_json(p).and_then(|v| json::copula_from_json(&v))).transpose()?;
    let mut report = serde_json::Map::new();
    let mut all_pass = true;
    for cond in &conditions {
        let (pass, detail) = match (cond.as_str(), &input, &copula) {
            ("closedness", Some(SetOrGrid::Set(s)), _) => {
                let r = check_one_essential_closedness(s)?;
                let Residual::Pieces(res) = r.residual else { unreachable!() };
                (r.closed, json!({ "residual": res.iter().map(json::piece_to_json).collect::<Vec<_>>() }))
            }
            ("closedness", Some(SetOrGrid::Grid(g)), _) => {
                let r = check_one_essential_closedness_grid(g)?;
                let Residual::Cells(res) = r.residual else { unreachable!() };
                (r.closed, json!({ "residual": json::grid_to_json(&res) }))
            }
            ("hyperplane", Some(SetOrGrid::Set(s)), _) => {
                let v = check_hyperplane_condition(s);
                let list: Vec<Value> = v
                    .iter()
                    .map(|x| {
                        json!({
                            "piece": x.piece,
                            "axis": x.axis + 1,
                            "coordinate": rational(&x.coordinate),
                            "witness": point_json(&x.witness),
                            "radius": rational(&x.radius),
                        })
                    })
                    .collect();
                (v.is_empty(), json!({ "violations": list }))
            }
            ("hyperplane", Some(SetOrGrid::Grid(_)), _) => {
                return Err(Error::Input("the hyperplane condition needs a symbolic set, not a grid".into()))
            }
            ("axioms", _, Some(c)) => {
                let r = check_copula_axioms(c, a.probes, a.seed)?;
                let witness_box = r.k_increasing.witness.as_ref().map(|b| {
                    b.iter().map(|(lo, hi)| json!([rational(lo), rational(hi)])).collect::<Vec<_>>()
                });
                (
                    r.all_pass(),
                    json!({
                        "tolerance": r.tolerance,
                        "grounded": { "pass": r.grounded.pass, "max_deviation": r.grounded.max_deviation },
                        "margins": { "pass": r.margins.pass, "max_deviation": r.margins.max_deviation },
                        "k_increasing": {
                            "pass": r.k_increasing.pass,
                            "min_volume": r.k_increasing.min_volume,
                            "witness": witness_box,
                        },
                        "boxes_checked": r.boxes_checked,
                    }),
                )
            }
            ("closedness" | "hyperplane", None, _) => {
                return Err(Error::Input(format!("condition {cond:?} needs --set")))
            }
            ("axioms", _, None) => return Err(Error::Input("condition \"axioms\" needs --copula".into())),
            (other, _, _) => {
                return Err(Error::Input(format!(
                    "unknown condition {other:?} (expected closedness, hyperplane or axioms)"
                )))
            }
        };
        all_pass &= pass;
        let mut entry = json!({ "pass": pass });
        if let (Value::Object(e), Value::Object(d)) = (&mut entry, detail) {
            e.extend(d);
        }
        println!("{cond}: {}", if pass { "pass" } else { "FAIL" });
        report.insert(cond.clone(), entry);
    }
    let report = json!({ "pass": all_pass, "conditions": report });
    if let Some(p) = &a.report {
        fs::write(p, json::to_string(&report))?;
    }
    Ok(if all_pass { Outcome::Ok } else { Outcome::Violations })
}

fn cmd_sample(a: SampleArgs) -> Result<Outcome, Error> {
    let c: CopulaSpec = json::copula_from_json(&read_json(&a.copula)?)?;
    if a.n == 0 {
        return Err(Error::Input("--n must be at least 1".into()));
    }
    let cloud = sample_copula(&c, a.n, a.seed)?;
    emit(a.out.as_deref(), &json::cloud_to_json(&cloud))?;
    Ok(Outcome::Ok)
}

fn cmd_render(a: RenderArgs) -> Result<Outcome, Error> {
    let axes: Vec<usize> = a
        .axes
        .split(',')
        .map(|s| s.trim().parse::<usize>().ok().filter(|&x| x >= 1).map(|x| x - 1))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Input(format!("--axes must be two 1-based axes like 1,2, got {:?}", a.axes)))?;
    let [ax, ay] = <[usize; 2]>::try_from(axes)
        .map_err(|_| Error::Input(format!("--axes must name exactly two axes, got {:?}", a.axes)))?;
    let cfg = RenderConfig { width: a.width, height: a.height, axes: [ax, ay], stroke: a.stroke };
    let mut canvas = Canvas::new(cfg).map_err(Error::Input)?;
    if let Some(p) = &a.set {
        match read_set_or_grid(p)? {
            SetOrGrid::Set(s) => canvas.draw_set(&s),
            SetOrGrid::Grid(g) => canvas.draw_grid(&g),
        }
        .map_err(Error::Input)?;
    }
    if let Some(p) = &a.cloud {
        canvas.draw_cloud(&json::cloud_from_json(&read_json(p)?)?).map_err(Error::Input)?;
    }
    fs::write(&a.out, canvas.to_pgm())?;
    Ok(Outcome::Ok)
}

fn cmd_props(a: PropsArgs) -> Result<Outcome, Error> {
    let summary = run_corpus(a.count, a.seed)?;
    println!("{:<48} {:>6} {:>6}", "property", "pass", "fail");
    for (i, p) in Property::ALL.iter().enumerate() {
        let pass = summary.passed[i];
        println!("{:<48} {:>6} {:>6}", p.to_string(), pass, summary.cases - pass);
    }
    println!("cases: {}, counterexamples: {}", summary.cases, summary.counterexamples.len());
    if let Some(path) = &a.report {
        let props: Vec<Value> = Property::ALL
            .iter()
            .enumerate()
            .map(|(i, p)| json!({ "property": p.number(), "name": p.name(), "pass": summary.passed[i], "fail": summary.cases - summary.passed[i] }))
            .collect();
        let ce: Vec<Value> = summary
            .counterexamples
            .iter()
            .map(|(case, p)| json!({ "case": case, "property": p.number() }))
            .collect();
        let report = json!({ "cases": summary.cases, "seed": a.seed, "properties": props, "counterexamples": ce });
        fs::write(path, json::to_string(&report))?;
    }
    Ok(if summary.all_pass() { Outcome::Ok } else { Outcome::Violations })
}
