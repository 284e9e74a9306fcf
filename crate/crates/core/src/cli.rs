//! Command-line front end.
//!
//! Every subcommand accepts `--config FILE` with `key = value` lines (or a meta
//! JSON written by an earlier run); flags on the command line override it.
//! Exit codes: 0 success, 1 failed checks or I/O, 2 rejected parameters,
//! 3 solver no-convergence, 64 usage errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bvp::{
    default_lobes, functional_i, solve_nonautonomous, solve_planar, symmetry_defect, Branch, Domain, Mode, ParamSet, ProfileW,
    SolveOptions,
};
use crate::error::{Error, Result};
use crate::fields::HomogeneousField;
use crate::levelset::{extract_level_curve, level_defect, to_csv, to_svg, LevelCurve};
use crate::spectral::{assemble_autonomous, assemble_eigensystem};
use crate::verify::{run_checks, sample_points_for, Check, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "homflow", version, about = "Homogeneous steady Euler flows", args_override_self = true)]
struct Cli {
    /// `key = value` config file or a meta JSON from an earlier run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the axisymmetric profile problem on (-1, 1).
    SolveAxi(SolveAxiArgs),
    /// Solve the 2½D profile problem on (0, π).
    #[command(name = "solve-2d")]
    Solve2d(Solve2dArgs),
    /// Spectrum of the linearized operator.
    Eigen(EigenArgs),
    /// Residual checks for a field described by a meta JSON.
    Verify(VerifyArgs),
    /// Stream-function level sets from a profile CSV.
    Levelset(LevelsetArgs),
    /// Explicit fields: irrotational catalog, geodesic and circular flows.
    Catalog(CatalogArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SolveAxiArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long = "C1", default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(rename = "C1")]
    pub c1: f64,
    #[arg(long = "C2", default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(rename = "C2")]
    pub c2: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// `auto` (positive for 0 < β < 1), `default` or `positive`.
    #[arg(long, default_value = "auto")]
    pub branch: String,
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    /// Rows of the profile CSV.
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub meta: Option<PathBuf>,
    /// Field samples `x,y,z,u1,u2,u3,p` at fixed-seed points.
    #[arg(long)]
    pub field_csv: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub field_samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Solve2dArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long = "C1", default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(rename = "C1")]
    pub c1: f64,
    #[arg(long = "C2", default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(rename = "C2")]
    pub c2: f64,
    /// Number of sign-alternating arches; default `⌊|β|⌋ + 1`.
    #[arg(long)]
    pub lobes: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[arg(long)]
    pub field_csv: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub field_samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EigenArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 128)]
    pub modes: usize,
    /// `-∂²_φ - β²` on (0, π) instead of the singular operator.
    #[arg(long, default_value_t = false)]
    pub autonomous: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long, default_value = "all")]
    pub checks: String,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct LevelsetArgs {
    /// Profile CSV with columns `t,w,dw,d2w` or `phi,w,dw,d2w`.
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value = "0.1,0.5,1", allow_negative_numbers = true)]
    pub levels: String,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Extract only `C` and not the mirrored level `-C`.
    #[arg(long, default_value_t = false)]
    pub positive_only: bool,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CatalogArgs {
    /// `axi`, `2d`, `geodesic` or `circular`.
    #[arg(long, default_value = "axi")]
    pub family: String,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub n: i64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Field samples `x,y,z,u1,u2,u3,p`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Profile CSV `t,w,dw,d2w` for the `axi` and `2d` families.
    #[arg(long)]
    pub profile_out: Option<PathBuf>,
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 2001)]
    pub profile_samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Maps an error to its exit status.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::NoSolution(_) => EXIT_PARAMETER,
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        _ => EXIT_FAIL,
    }
}

/// `key = value` lines, or the `config` object of a meta JSON, as flags.
fn config_flags(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path)?;
    let mut pairs: Vec<(String, String)> = Vec::new();
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text)?;
        let cfg = v.get("config").and_then(Value::as_object).ok_or_else(|| Error::Io("meta JSON has no config object".into()))?;
        for (k, val) in cfg {
            match val {
                Value::Null => {}
                Value::String(s) => pairs.push((k.clone(), s.clone())),
                other => pairs.push((k.clone(), other.to_string())),
            }
        }
    } else {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Io(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    let mut out = Vec::new();
    for (k, v) in pairs {
        let flag = format!("--{}", k.replace('_', "-"));
        match v.as_str() {
            "true" => out.push(flag),
            "false" => {}
            _ => {
                out.push(flag);
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Finds `--config` in raw arguments.
fn find_config(argv: &[String]) -> Option<PathBuf> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

const SUBCOMMANDS: [&str; 6] = ["solve-axi", "solve-2d", "eigen", "verify", "levelset", "catalog"];

/// Inserts config flags right after the subcommand so explicit flags win.
fn merged_argv(argv: &[String]) -> Result<Vec<String>> {
    let Some(cfg) = find_config(argv) else { return Ok(argv.to_vec()) };
    let flags = config_flags(&cfg)?;
    let mut out = argv.to_vec();
    if let Some(pos) = out.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) {
        out.splice(pos + 1..pos + 1, flags);
    }
    Ok(out)
}

/// Runs the CLI on `argv` (including the program name); returns the exit status.
pub fn run(argv: Vec<String>) -> i32 {
    let argv = match merged_argv(&argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let res = match cli.command {
        Command::SolveAxi(a) => solve_axi(&a),
        Command::Solve2d(a) => solve_2d(&a),
        Command::Eigen(a) => eigen(&a),
        Command::Verify(a) => verify(&a),
        Command::Levelset(a) => levelset(&a),
        Command::Catalog(a) => catalog(&a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}

/// Profile CSV `t,w,dw,d2w` (or `phi,w,dw,d2w`) on a uniform grid, 17 significant digits.
pub fn profile_csv(w: &ProfileW, n: usize) -> String {
    let (a, b) = w.domain.bounds();
    let n = n.max(2);
    let mut s = String::from(if w.domain == Domain::Interval { "t,w,dw,d2w\n" } else { "phi,w,dw,d2w\n" });
    for i in 0..n {
        let x = if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 };
        let (v, d1, d2) = w.eval3(x);
        let _ = writeln!(s, "{x:.16e},{v:.16e},{d1:.16e},{d2:.16e}");
    }
    s
}

/// Reads a profile CSV as a tabulated profile with placeholder parameters.
pub fn read_profile_csv(path: &Path, beta: f64) -> Result<ProfileW> {
    let text = fs::read_to_string(path)?;
    let mut cols: [Vec<f64>; 4] = Default::default();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Io(format!("{}:{}: {e}", path.display(), i + 1)))?;
        if vals.len() != 4 {
            return Err(Error::Io(format!("{}:{}: expected 4 columns", path.display(), i + 1)));
        }
        for k in 0..4 {
            cols[k].push(vals[k]);
        }
    }
    let [x, w, d1, mut d2] = cols;
    if x.is_empty() {
        return Err(Error::Io(format!("{}: empty profile", path.display())));
    }
    // unbounded endpoint curvature (β < 0 profiles) is replaced by its neighbour
    for i in [0, d2.len() - 1] {
        if !d2[i].is_finite() {
            d2[i] = if i == 0 { d2[1] } else { d2[i - 1] };
        }
    }
    let mode = if (x[0] + 1.0).abs() < 1e-12 { Mode::Axisymmetric } else { Mode::Planar };
    let params = ParamSet { mode, alpha: beta + if mode == Mode::Axisymmetric { 2.0 } else { 1.0 }, beta, c1: 0.0, c2: 0.0, big_c1: 0.0, big_c2: 0.0 };
    ProfileW::from_table(params, x, w, d1.into_iter().map(|v| if v.is_finite() { v } else { 0.0 }).collect(), d2)
}

/// Field CSV `x,y,z,u1,u2,u3,p` at fixed-seed points.
pub fn field_csv(field: &HomogeneousField, n: usize, seed: u64) -> Result<String> {
    let mut s = String::from("x,y,z,u1,u2,u3,p\n");
    for x in sample_points_for(field, seed, n) {
        let (u, p) = field.evaluate(x)?;
        let _ = writeln!(s, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", x[0], x[1], x[2], u[0], u[1], u[2], p);
    }
    Ok(s)
}

fn write_meta(path: &Path, subcommand: &str, config: Value, result: Value) -> Result<()> {
    let v = json!({
        "tool": "homflow",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "config": config,
        "result": result,
    });
    write_file(path, &(serde_json::to_string_pretty(&v)? + "\n"))
}

fn profile_summary(w: &ProfileW) -> Value {
    json!({
        "residual_certificate": w.residual_certificate,
        "refined_residual": w.refined_residual,
        "zero_count": w.zero_count,
        "max_abs": w.max_abs(),
        "functional_i": functional_i(w),
    })
}

fn axi_branch(a: &SolveAxiArgs, beta: f64) -> Result<Branch> {
    match a.branch.as_str() {
        "auto" => Ok(if beta > 0.0 && beta < 1.0 { Branch::Positive } else { Branch::Default }),
        "default" => Ok(Branch::Default),
        "positive" => Ok(Branch::Positive),
        other => Err(Error::Parameter(format!("unknown branch '{other}' (auto, default, positive)"))),
    }
}

fn solve_axi_profile(a: &SolveAxiArgs) -> Result<(ParamSet, ProfileW)> {
    let params = ParamSet::axisymmetric(a.alpha, a.c1, a.c2)?;
    let opts = SolveOptions { tol: a.tol, branch: axi_branch(a, params.beta)?, global_nodes: a.nodes, continuation_steps: a.steps, ..Default::default() };
    let w = solve_nonautonomous(&params, &opts)?;
    Ok((params, w))
}

fn solve_axi(a: &SolveAxiArgs) -> Result<i32> {
    let (params, w) = solve_axi_profile(a)?;
    if let Some(p) = &a.out {
        write_file(p, &profile_csv(&w, a.samples))?;
    }
    if let Some(p) = &a.field_csv {
        let f = HomogeneousField::build_axisymmetric(&w, &params)?;
        write_file(p, &field_csv(&f, a.field_samples, a.seed)?)?;
    }
    let mut result = profile_summary(&w);
    result["params"] = serde_json::to_value(params)?;
    if let Some(p) = &a.meta {
        write_meta(p, "solve-axi", serde_json::to_value(a)?, result.clone())?;
    }
    println!("{}", serde_json::to_string(&result)?);
    Ok(EXIT_OK)
}

fn solve_2d_profile(a: &Solve2dArgs) -> Result<(ParamSet, ProfileW)> {
    let params = ParamSet::planar(a.alpha, a.c1, a.c2)?;
    let lobes = a.lobes.unwrap_or_else(|| default_lobes(params.beta));
    let w = solve_planar(&params, lobes, a.tol)?;
    Ok((params, w))
}

fn solve_2d(a: &Solve2dArgs) -> Result<i32> {
    let (params, w) = solve_2d_profile(a)?;
    if let Some(p) = &a.out {
        write_file(p, &profile_csv(&w, a.samples))?;
    }
    if let Some(p) = &a.field_csv {
        let f = HomogeneousField::build_25d(&w, &params)?;
        write_file(p, &field_csv(&f, a.field_samples, a.seed)?)?;
    }
    let mut result = profile_summary(&w);
    result["params"] = serde_json::to_value(params)?;
    result["symmetry_defect"] = json!(symmetry_defect(&w));
    if let Some(p) = &a.meta {
        write_meta(p, "solve-2d", serde_json::to_value(a)?, result.clone())?;
    }
    println!("{}", serde_json::to_string(&result)?);
    Ok(EXIT_OK)
}

fn eigen(a: &EigenArgs) -> Result<i32> {
    let sys = if a.autonomous { assemble_autonomous(a.beta, a.modes)? } else { assemble_eigensystem(a.beta, a.modes)? };
    let ev = &sys.eigenvalues;
    let principal = ev.first().copied().unwrap_or(f64::NAN);
    let kernel = ev.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let negative = ev.iter().filter(|&&v| v < -1e-10).count();
    let result = json!({
        "beta": a.beta,
        "M": a.modes,
        "autonomous": a.autonomous,
        "split_index": sys.split_index,
        "principal": principal,
        "negative_count": negative,
        "min_abs_eigenvalue": kernel,
        "eigenvalues": ev,
    });
    if let Some(p) = &a.json {
        write_file(p, &(serde_json::to_string_pretty(&result)? + "\n"))?;
    }
    println!("principal={principal:.16e} negative_count={negative} min|mu|={kernel:.3e}");
    Ok(EXIT_OK)
}

/// Rebuilds the field recorded in a meta JSON.
pub fn field_from_meta(path: &Path) -> Result<HomogeneousField> {
    let v: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let sub = v.get("subcommand").and_then(Value::as_str).unwrap_or("");
    let cfg = v.get("config").cloned().ok_or_else(|| Error::Io("meta JSON has no config object".into()))?;
    match sub {
        "solve-axi" => {
            let a: SolveAxiArgs = serde_json::from_value(cfg)?;
            let (params, w) = solve_axi_profile(&a)?;
            HomogeneousField::build_axisymmetric(&w, &params)
        }
        "solve-2d" => {
            let a: Solve2dArgs = serde_json::from_value(cfg)?;
            let (params, w) = solve_2d_profile(&a)?;
            HomogeneousField::build_25d(&w, &params)
        }
        "catalog" => {
            let a: CatalogArgs = serde_json::from_value(cfg)?;
            catalog_field(&a)
        }
        other => Err(Error::Io(format!("meta JSON from '{other}' does not describe a field"))),
    }
}

fn verify(a: &VerifyArgs) -> Result<i32> {
    let checks = Check::parse_list(&a.checks)?;
    let field = field_from_meta(&a.field)?;
    let reports = run_checks(&field, &checks, a.samples, a.seed)?;
    for r in &reports {
        println!("{}", r.line());
    }
    let pass = reports.iter().all(|r| r.pass);
    if let Some(p) = &a.report {
        let v = json!({ "field": a.field, "checks": a.checks, "seed": a.seed, "pass": pass, "reports": reports });
        write_file(p, &(serde_json::to_string_pretty(&v)? + "\n"))?;
    }
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

fn parse_levels(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<f64>().map_err(|e| Error::Parameter(format!("level '{x}': {e}"))))
        .collect()
}

fn levelset(a: &LevelsetArgs) -> Result<i32> {
    let w = read_profile_csv(&a.profile, a.beta)?;
    let mut curves: Vec<LevelCurve> = Vec::new();
    for c in parse_levels(&a.levels)? {
        let mut levels = vec![c];
        if !a.positive_only {
            levels.push(-c);
        }
        for l in levels {
            let curve = extract_level_curve(&w, a.beta, l, a.points)?;
            println!(
                "level={l} branches={} classification={} defect={:.2e}",
                curve.branches.len(),
                serde_json::to_string(&curve.classification)?,
                level_defect(&w, &curve)
            );
            curves.push(curve);
        }
    }
    if let Some(p) = &a.csv {
        write_file(p, &to_csv(&curves))?;
    }
    if let Some(p) = &a.svg {
        write_file(p, &to_svg(&curves, 640.0))?;
    }
    Ok(EXIT_OK)
}

fn catalog_field(a: &CatalogArgs) -> Result<HomogeneousField> {
    match a.family.as_str() {
        "axi" => HomogeneousField::catalog_axisymmetric(a.n),
        "2d" => HomogeneousField::catalog_2d(a.n),
        "geodesic" => HomogeneousField::geodesic(a.a, a.b, a.alpha),
        "circular" => HomogeneousField::circular(a.a, a.alpha),
        other => Err(Error::Parameter(format!("unknown family '{other}' (axi, 2d, geodesic, circular)"))),
    }
}

fn catalog(a: &CatalogArgs) -> Result<i32> {
    let field = catalog_field(a)?;
    if let Some(p) = &a.out {
        write_file(p, &field_csv(&field, a.samples, a.seed)?)?;
    }
    if let (Some(p), Some(w)) = (&a.profile_out, field.profile()) {
        write_file(p, &profile_csv(w, a.profile_samples))?;
    }
    let result = json!({
        "alpha": field.alpha,
        "mode": field.mode,
        "domain": field.profile().map(|w| if w.domain == Domain::Interval { "interval" } else { "angle" }),
    });
    if let Some(p) = &a.meta {
        write_meta(p, "catalog", serde_json::to_value(a)?, result.clone())?;
    }
    println!("{}", serde_json::to_string(&result)?);
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn usage_and_parameter_codes() {
        assert_eq!(run(argv("homflow solve-axi --alpha 4 --bogus 1")), EXIT_USAGE);
        assert_eq!(run(argv("homflow frobnicate")), EXIT_USAGE);
        assert_eq!(run(argv("homflow solve-axi --alpha 1.5 --C1 -1")), EXIT_PARAMETER);
        assert_eq!(run(argv("homflow solve-2d --alpha 0.5 --C2 1")), EXIT_PARAMETER);
        assert_eq!(run(argv("homflow --help")), EXIT_OK);
    }

    #[test]
    fn config_merging() {
        let dir = std::env::temp_dir().join(format!("homflow-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("run.cfg");
        fs::write(&cfg, "# comment\nalpha = 1.5\nC1 = -1\n").unwrap();
        let a = vec!["homflow".to_string(), "solve-axi".into(), "--config".into(), cfg.display().to_string()];
        let merged = merged_argv(&a).unwrap();
        assert_eq!(&merged[2..6], &["--alpha", "1.5", "--C1", "-1"]);
        assert_eq!(run(a.clone()), EXIT_PARAMETER);
        let mut b = a.clone();
        b.extend(["--alpha".to_string(), "-3".into(), "--C1".into(), "0".into(), "--C2".into(), "1".into()]);
        let cli = Cli::try_parse_from(merged_argv(&b).unwrap()).unwrap();
        match cli.command {
            Command::SolveAxi(s) => assert_eq!((s.alpha, s.c1, s.c2), (-3.0, 0.0, 1.0)),
            _ => panic!("wrong subcommand"),
        }
        fs::remove_dir_all(&dir).ok();
    }
}
