//! `parakepler` — spectra, states, grid evaluation and verification suites
//! for the Kepler problem on H₃ and S₃ in parabolic coordinates.

mod format;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use format::{csv_line, g17, g6};
use parakepler::geometry::{flat_limit_coords, spherical_to_parabolic};
use parakepler::kepler::{bound_count_h3, energy_split, energy_unchecked, h3_admissible, h3_energy_interval, NormGrid};
use parakepler::{assemble_state, normalize, wavefunction, Error, QuantumNumbers, SpaceTag, SphericalPoint, C64};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use verify::{run_suite, Suite, VerifyConfig};

const SCHEMA_VERSION: u32 = 1;
const OUT_DIR_ENV: &str = "PARAKEPLER_OUT_DIR";

#[derive(Parser)]
#[command(name = "parakepler", version, about = "Kepler problem on H3 and S3 in parabolic coordinates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy levels, degeneracies and (H3) the bound-state interval
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Highest level to list (required on S3)
        #[arg(long)]
        max_k: Option<u32>,
    },
    /// Full separation data of one bound state
    State {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        qn: QnArgs,
    },
    /// Evaluate a state on a (chi, theta, phi) grid
    Eval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        qn: QnArgs,
        /// start:end:count
        #[arg(long, default_value = "0.1:2:20")]
        chi: Range,
        #[arg(long, default_value = "0:3.141592653589793:9")]
        theta: Range,
        #[arg(long, default_value = "0:0:1")]
        phi: Range,
        /// Multiply by the normalization constant
        #[arg(long)]
        normalize: bool,
    },
    /// Run residual-based verification suites
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_k: Option<u32>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Override every suite tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Shift the energy of every state (negative control)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb_eps: f64,
    },
    /// Flat-space limit of the coordinates and of the spectrum
    Limit {
        #[command(flatten)]
        common: Common,
        /// Increasing, comma-separated
        #[arg(long, default_value = "100,1000,10000")]
        rho_list: String,
        /// Euclidean point x,y,z
        #[arg(long, default_value = "0.3,-0.7,0.2", allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        max_k: Option<u32>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_parser = parse_space, default_value = "s3")]
    space: SpaceTag,
    /// Coupling constant (attractive, >= 0)
    #[arg(long, default_value_t = 2.0)]
    e: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; relative paths resolve against $PARAKEPLER_OUT_DIR when set
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QnArgs {
    #[arg(long, default_value_t = 0)]
    n1: u32,
    #[arg(long, default_value_t = 0)]
    n2: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    m: i32,
}

impl QnArgs {
    fn qn(&self) -> QuantumNumbers {
        QuantumNumbers::new(self.n1, self.n2, self.m)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Clone, Debug)]
struct Range {
    start: f64,
    end: f64,
    count: usize,
}

impl Range {
    fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.end } else { self.start + step * i as f64 })
            .collect()
    }
}

impl std::str::FromStr for Range {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<_> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected start:end:count, got {s:?}"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let count = n.trim().parse::<usize>().map_err(|e| format!("{n:?}: {e}"))?;
        let (start, end) = (num(a)?, num(b)?);
        if count == 0 || !start.is_finite() || !end.is_finite() {
            return Err(format!("bad range {s:?}"));
        }
        Ok(Range { start, end, count })
    }
}

fn parse_space(s: &str) -> Result<SpaceTag, String> {
    s.parse::<SpaceTag>().map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| CliError::Usage(format!("{x:?}: {e}"))))
        .collect()
}

enum CliError {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

struct Output {
    text: String,
    passed: bool,
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn spectrum(common: &Common, max_k: Option<u32>) -> Result<Output, CliError> {
    let (space, e) = (common.space, common.e);
    if !(e.is_finite() && e >= 0.0) {
        return Err(Error::Parameter(format!("coupling e = {e} must be finite and nonnegative")).into());
    }
    let top = match (space, max_k) {
        (_, Some(k)) => k,
        (SpaceTag::H3, None) => bound_count_h3(e),
        (SpaceTag::S3, None) => return Err(CliError::Usage("the S3 spectrum is infinite: pass --max-k".into())),
    };
    let rows: Vec<(u32, f64, usize, bool)> = (1..=top)
        .map(|k| {
            let ok = space == SpaceTag::S3 || h3_admissible(e, k);
            (k, energy_unchecked(space, e, k), QuantumNumbers::with_k(k).len(), ok)
        })
        .collect();
    let h3_extra = (space == SpaceTag::H3).then(|| (bound_count_h3(e), h3_energy_interval(e)));
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "spectrum",
                "space": space,
                "e": e,
                "rows": rows.iter().map(|&(k, eps, deg, ok)| json!({
                    "k": k, "epsilon": eps, "degeneracy": deg, "admissible": ok
                })).collect::<Vec<_>>(),
            });
            if let Some((count, (lo, hi))) = h3_extra {
                v["bound_count"] = json!(count);
                v["interval"] = json!([lo, hi]);
            }
            json_text(&v)
        }
        Format::Csv => {
            let mut s = csv_line(&["k", "epsilon", "degeneracy", "admissible"]);
            for &(k, eps, deg, ok) in &rows {
                s += &csv_line(&[k.to_string(), g17(eps), deg.to_string(), ok.to_string()]);
            }
            if let Some((count, (lo, hi))) = h3_extra {
                s += &format!("# bound_count={count}\n# interval={},{}\n", g17(lo), g17(hi));
            }
            s
        }
        Format::Human => {
            let mut s = format!("{space} spectrum, e = {}\n{:>4}  {:>14}  {:>6}  admissible\n", g6(e), "k", "epsilon", "deg");
            for &(k, eps, deg, ok) in &rows {
                s += &format!("{k:>4}  {:>14}  {deg:>6}  {}\n", g6(eps), if ok { "yes" } else { "no" });
            }
            if let Some((count, (lo, hi))) = h3_extra {
                s += &format!("bound states: {count}\ninterval: [{}, {}]\n", g6(lo), g6(hi));
            }
            s
        }
    };
    Ok(Output { text, passed: true })
}

fn state(common: &Common, qn: &QnArgs) -> Result<Output, CliError> {
    let s = assemble_state(common.space, common.e, qn.qn())?;
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "state",
            "state": s,
        })),
        Format::Csv | Format::Human => {
            let fields: Vec<(&str, C64)> = vec![
                ("epsilon", s.epsilon.into()),
                ("a1", s.a1.into()),
                ("a2", s.a2.into()),
                ("b1", s.b1),
                ("b2", s.b2),
                ("alpha1", s.alpha1),
                ("beta1", s.beta1),
                ("gamma1", s.gamma1),
                ("alpha2", s.alpha2),
                ("beta2", s.beta2),
                ("gamma2", s.gamma2),
                ("k1", s.k1),
                ("k2", s.k2),
            ];
            if common.format == Some(Format::Csv) {
                let mut out = csv_line(&["field", "re", "im"]);
                for (name, z) in fields {
                    out += &csv_line(&[name.to_string(), g17(z.re), g17(z.im)]);
                }
                out
            } else {
                let mut out = format!(
                    "{} state (n1, n2, m) = ({}, {}, {}), k = {}, e = {}\n",
                    s.space, s.qn.n1, s.qn.n2, s.qn.m, s.k, g6(s.e)
                );
                for (name, z) in fields {
                    let im = if z.im == 0.0 { String::new() } else { format!(" {} {}i", if z.im < 0.0 { '-' } else { '+' }, g6(z.im.abs())) };
                    out += &format!("  {name:<7} {}{im}\n", g6(z.re));
                }
                out
            }
        }
    };
    Ok(Output { text, passed: true })
}

struct EvalRow {
    chi: f64,
    theta: f64,
    phi: f64,
    psi: Option<C64>,
}

fn eval(common: &Common, qn: &QnArgs, grid: [&Range; 3], normalized: bool) -> Result<Output, CliError> {
    let space = common.space;
    let s = assemble_state(space, common.e, qn.qn())?;
    let c = if normalized { normalize(&s, &NormGrid::default())?.c } else { 1.0 };
    let mut rows = Vec::new();
    for &chi in &grid[0].values() {
        for &theta in &grid[1].values() {
            for &phi in &grid[2].values() {
                let sp = SphericalPoint::new(space, chi, theta, phi)?;
                let psi = spherical_to_parabolic(space, &sp).and_then(|p| wavefunction(&s, &p)).ok().filter(|z| z.is_finite());
                rows.push(EvalRow { chi, theta, phi, psi: psi.map(|z| z * c) });
            }
        }
    }
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = csv_line(&["chi", "theta", "phi", "re_psi", "im_psi", "abs2", "skipped"]);
            for r in &rows {
                let (re, im, a2, skip) = match r.psi {
                    Some(z) => (g17(z.re), g17(z.im), g17(z.norm_sqr()), "0"),
                    None => ("nan".into(), "nan".into(), "nan".into(), "1"),
                };
                out += &csv_line(&[g17(r.chi), g17(r.theta), g17(r.phi), re, im, a2, skip.into()]);
            }
            out
        }
        Format::Json => json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "eval",
            "space": space,
            "e": common.e,
            "qn": s.qn,
            "normalized": normalized,
            "rows": rows.iter().map(|r| json!({
                "chi": r.chi, "theta": r.theta, "phi": r.phi,
                "re_psi": r.psi.map(|z| z.re), "im_psi": r.psi.map(|z| z.im),
                "abs2": r.psi.map(|z| z.norm_sqr()), "skipped": r.psi.is_none(),
            })).collect::<Vec<_>>(),
        })),
        Format::Human => {
            let mut out = format!("{:>10} {:>10} {:>10} {:>13} {:>13} {:>13}\n", "chi", "theta", "phi", "re", "im", "|psi|^2");
            for r in &rows {
                let vals = match r.psi {
                    Some(z) => format!("{:>13} {:>13} {:>13}", g6(z.re), g6(z.im), g6(z.norm_sqr())),
                    None => format!("{:>13}", "skipped"),
                };
                out += &format!("{:>10} {:>10} {:>10} {vals}\n", g6(r.chi), g6(r.theta), g6(r.phi));
            }
            out
        }
    };
    Ok(Output { text, passed: true })
}

fn verify(common: &Common, suite: Suite, cfg: VerifyConfig) -> Result<Output, CliError> {
    if let Some(t) = cfg.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    if !(cfg.e.is_finite() && cfg.e >= 0.0) {
        return Err(Error::Parameter(format!("coupling e = {} must be finite and nonnegative", cfg.e)).into());
    }
    let results = run_suite(&cfg, suite)?;
    let passed = results.iter().all(|r| r.report.passed);
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "suite": suite,
            "config": cfg,
            "passed": passed,
            "results": results,
        })),
        Format::Csv => {
            let mut out = csv_line(&["suite", "label", "passed", "max_rel", "mean_rel", "max_abs", "tolerance", "n_points", "n_skipped"]);
            for r in &results {
                let p = &r.report;
                out += &csv_line(&[
                    r.suite.to_string(),
                    p.label.clone(),
                    p.passed.to_string(),
                    g17(p.max_rel),
                    g17(p.mean_rel),
                    g17(p.max_abs),
                    g17(p.tolerance),
                    p.n_points.to_string(),
                    p.n_skipped.to_string(),
                ]);
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            for r in &results {
                out += &r.report.summary_line();
                out.push('\n');
                // worst value of each diagnostic across the suite's runs
                let mut worst: std::collections::BTreeMap<&str, f64> = Default::default();
                for (k, v) in &r.report.details {
                    let name = k.rsplit('/').next().unwrap_or(k);
                    let w = worst.entry(name).or_insert(*v);
                    if name == "observed_order" {
                        if (*v - 2.0).abs() > (*w - 2.0).abs() {
                            *w = *v;
                        }
                    } else if *v > *w {
                        *w = *v;
                    }
                }
                for (k, v) in worst {
                    out += &format!("    {k} = {}\n", g6(v));
                }
                for f in &r.failures {
                    out += &format!("    failed: {f}\n");
                }
            }
            out += if passed { "all passed\n" } else { "FAILED\n" };
            out
        }
    };
    Ok(Output { text, passed })
}

fn limit(common: &Common, rho_list: &str, point: &str, max_k: Option<u32>) -> Result<Output, CliError> {
    let (space, e) = (common.space, common.e);
    let rhos = parse_list(rho_list)?;
    let pt = parse_list(point)?;
    let [x, y, z] = pt[..] else {
        return Err(CliError::Usage(format!("--point needs three coordinates, got {point:?}")));
    };
    let table = flat_limit_coords(space, &rhos, [x, y, z])?;
    let top = match space {
        SpaceTag::H3 => max_k.unwrap_or_else(|| bound_count_h3(e)),
        SpaceTag::S3 => max_k.unwrap_or(3),
    };
    // ε = −e²/2k² ∓ (k²−1)/2: the Rydberg term is the flat spectrum verbatim
    let levels: Vec<_> = (1..=top)
        .map(|k| {
            let (ryd, curv) = energy_split(space, e, k);
            let kf = k as f64;
            let flat = -(e * e) / (2.0 * kf * kf);
            (k, energy_unchecked(space, e, k), ryd, curv, flat, ryd == flat)
        })
        .collect();
    let note = "the dimensionless spectrum carries no rho: only the curvature shift separates it from the flat levels";
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "limit",
            "space": space,
            "e": e,
            "point": [x, y, z],
            "rows": table.rows.iter().map(|r| json!({
                "rho": r.rho, "err_t1": r.err_t1, "err_t2": r.err_t2, "err": r.err()
            })).collect::<Vec<_>>(),
            "slope": table.slope,
            "degenerate": table.degenerate,
            "spectrum": levels.iter().map(|&(k, eps, ryd, curv, flat, exact)| json!({
                "k": k, "epsilon": eps, "rydberg": ryd, "curvature": curv, "flat": flat, "rydberg_exact": exact
            })).collect::<Vec<_>>(),
            "rho_independent": true,
            "note": note,
        })),
        Format::Csv => {
            let mut out = csv_line(&["rho", "err_t1", "err_t2", "err"]);
            for r in &table.rows {
                out += &csv_line(&[g17(r.rho), g17(r.err_t1), g17(r.err_t2), g17(r.err())]);
            }
            out += &format!("# slope={}\n", table.slope.map_or("nan".into(), g17));
            out
        }
        Format::Human => {
            let mut out = format!("{space} flat limit at ({}, {}, {})\n", g6(x), g6(y), g6(z));
            for r in &table.rows {
                out += &format!("  rho = {:>8}  err_t1 = {:>12}  err_t2 = {:>12}\n", g6(r.rho), g6(r.err_t1), g6(r.err_t2));
            }
            out += &format!("  slope = {}\n", table.slope.map_or("n/a".into(), g6));
            for &(k, eps, ryd, curv, _, exact) in &levels {
                out += &format!("  k = {k}: epsilon = {} = {} (flat) + {} (curvature){}\n", g6(eps), g6(ryd), g6(curv), if exact { "" } else { "  MISMATCH" });
            }
            out += &format!("  {note}\n");
            out
        }
    };
    Ok(Output { text, passed: true })
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let path = match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, text)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Spectrum { common, max_k } => spectrum(common, *max_k),
        Command::State { common, qn } => state(common, qn),
        Command::Eval { common, qn, chi, theta, phi, normalize } => eval(common, qn, [chi, theta, phi], *normalize),
        Command::Verify { suite, common, max_k, seed, tol, perturb_eps } => {
            let cfg = VerifyConfig {
                space: common.space,
                e: common.e,
                max_k: max_k.unwrap_or(3),
                seed: *seed,
                tol: *tol,
                perturb_eps: *perturb_eps,
            };
            verify(common, *suite, cfg)
        }
        Command::Limit { common, rho_list, point, max_k } => limit(common, rho_list, point, *max_k),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Spectrum { common, .. }
        | Command::State { common, .. }
        | Command::Eval { common, .. }
        | Command::Verify { common, .. }
        | Command::Limit { common, .. } => common.out.clone(),
    };
    let result = run(cli).and_then(|o| write_output(&out, &o.text).map(|_| o.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            let msg = match err {
                CliError::Usage(m) => format!("usage: {m}"),
                CliError::Lib(e) => e.to_string(),
                CliError::Io(e) => format!("io: {e}"),
            };
            eprintln!("parakepler: {msg}");
            ExitCode::from(2)
        }
    }
}
