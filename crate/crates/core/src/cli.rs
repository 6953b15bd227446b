//! Command-line driver. Every run writes its configuration, the constructed
//! data and a certificate under `--out`; exit code 0 means every checked
//! invariant held, 1 means one failed, 2 means the configuration was bad.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bundlemetric::{core_identity_check, fiber_witness_bundle, metric_eigen_range, BundleConstruction};
use crate::cert::{hash_json, write_csv, write_json, Certificate, Method, VERSION};
use crate::error::{Error, Result};
use crate::foliation::{demo, interpolate};
use crate::localjoin::{gromov_witness_sweep, theorem22_construct, GromovCube};
use crate::sampling::{ball_points, rng};
use crate::waist::{waist_constant, Variant};

#[derive(Debug, Parser)]
#[command(name = "waistwidth", version, about = "Width constructions, foliation interpolation and waist constants")]
pub struct Cli {
    /// Output directory for JSON and CSV artifacts.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Slack added to every checked bound (negative values tighten it).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tolerance: Option<f64>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "WAISTWIDTH_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a construction and certify its widths.
    Construct {
        #[command(subcommand)]
        target: Construct,
    },
    /// Interpolate between the two foliations of a demo surface.
    Interpolate(InterpolateArgs),
    /// Print the waist constants for (m, β).
    Constants(ConstantsArgs),
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Local-join map from the ball onto the m-simplex.
    Theorem22(Theorem22Args),
    /// Two-sided retraction map of the unit cube.
    GromovCube(GromovArgs),
    /// Trivial bundle with a squeezed metric.
    Bundle(BundleArgs),
}

#[derive(Debug, Args)]
pub struct Theorem22Args {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    /// Number of target points in the simplex.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Domain samples in the unit ball.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct GromovArgs {
    #[arg(long, default_value_t = 0.125)]
    pub eps: f64,
    /// Number of levels in [0, 1].
    #[arg(long, default_value_t = 17)]
    pub grid: usize,
    /// Skeleton points per level.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    /// Number of base points y.
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DemoName {
    Disk,
    Annulus,
    TwoHoles,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[arg(long, value_enum, default_value_t = DemoName::Disk)]
    pub demo: DemoName,
    /// Grid resolution of the demo surface.
    #[arg(long, default_value_t = 4)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 0)]
    pub beta: u32,
}

/// Everything that determines a run; hashed into its certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub m: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub beta: Option<u32>,
    pub eps: Option<f64>,
    pub grid: Option<usize>,
    pub samples: Option<usize>,
    pub demo: Option<DemoName>,
    pub seed: u64,
    pub tolerance: f64,
    pub out: PathBuf,
}

impl RunConfig {
    fn base(cli: &Cli, command: &str, tolerance: f64) -> Self {
        Self {
            command: command.into(),
            m: None,
            d: None,
            k: None,
            beta: None,
            eps: None,
            grid: None,
            samples: None,
            demo: None,
            seed: cli.seed,
            tolerance: cli.tolerance.unwrap_or(tolerance),
            out: cli.out.clone(),
        }
    }

    pub fn from_cli(cli: &Cli) -> Self {
        match &cli.command {
            Command::Construct { target: Construct::Theorem22(a) } => Self {
                m: Some(a.m),
                d: Some(a.d),
                eps: Some(a.eps),
                grid: Some(a.grid),
                samples: Some(a.samples),
                ..Self::base(cli, "construct-theorem22", 0.0)
            },
            Command::Construct { target: Construct::GromovCube(a) } => Self {
                eps: Some(a.eps),
                grid: Some(a.grid),
                samples: Some(a.samples),
                ..Self::base(cli, "construct-gromov-cube", 0.0)
            },
            Command::Construct { target: Construct::Bundle(a) } => Self {
                m: Some(a.m),
                k: Some(a.k),
                eps: Some(a.eps),
                grid: Some(a.grid),
                samples: Some(a.samples),
                ..Self::base(cli, "construct-bundle", 0.0)
            },
            Command::Interpolate(a) => {
                Self { grid: Some(a.grid), demo: Some(a.demo), ..Self::base(cli, "interpolate", 1e-9) }
            }
            Command::Constants(a) => Self { m: Some(a.m as usize), beta: Some(a.beta), ..Self::base(cli, "constants", 0.0) },
        }
    }

    fn get<T: Copy>(&self, v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| Error::InvalidParameter(format!("{} needs --{name}", self.command)))
    }

    fn path(&self, file: &str) -> PathBuf {
        self.out.join(file)
    }

    /// Hash of everything but the output location.
    pub fn config_hash(&self) -> String {
        hash_json(&Self { out: PathBuf::new(), ..self.clone() })
    }

    fn certificate(&self, name: &str, method: Method, samples: usize) -> Certificate {
        let view = Self { out: PathBuf::new(), ..self.clone() };
        Certificate::new(name, &view, method, self.seed, samples)
            .with_extra("config_hash", self.config_hash())
            .with_extra("modules", serde_json::json!({ "waistwidth": VERSION }))
    }
}

/// Outcome of a run: which invariant failed, if any.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    Fail(String),
}

pub fn execute(config: &RunConfig) -> Result<Outcome> {
    std::fs::create_dir_all(&config.out)?;
    write_json(&config.path(&format!("{}.config.json", config.command)), config)?;
    match config.command.as_str() {
        "construct-theorem22" => cmd_theorem22(config),
        "construct-gromov-cube" => cmd_gromov(config),
        "construct-bundle" => cmd_bundle(config),
        "interpolate" => cmd_interpolate(config),
        "constants" => cmd_constants(config),
        other => Err(Error::InvalidParameter(format!("unknown command {other}"))),
    }
}

fn verdict(cert: &Certificate, what: &str) -> Outcome {
    if cert.passed {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("{what}: width {} exceeds bound {:?}", cert.width, cert.bound))
    }
}

/// Target points of the m-simplex: a uniform grid on an edge, seeded
/// Dirichlet samples plus the vertices otherwise.
fn simplex_targets(m: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    if m == 1 {
        let count = count.max(2);
        return (0..count).map(|j| j as f64 / (count - 1) as f64).map(|s| vec![1.0 - s, s]).collect();
    }
    let mut out: Vec<Vec<f64>> = (0..=m).map(|i| (0..=m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut r = rng(seed);
    while out.len() < count {
        let e: Vec<f64> = (0..=m).map(|_| -r.gen::<f64>().ln()).collect();
        let s: f64 = e.iter().sum();
        out.push(e.into_iter().map(|x| x / s).collect());
    }
    out
}

fn cmd_theorem22(c: &RunConfig) -> Result<Outcome> {
    let (m, d, eps) = (c.get(c.m, "m")?, c.get(c.d, "d")?, c.get(c.eps, "eps")?);
    let (grid, samples) = (c.get(c.grid, "grid")?, c.get(c.samples, "samples")?);
    let map = theorem22_construct(m, d, eps)?;
    write_json(&c.path("theorem22.json"), &map)?;
    let xs = ball_points(map.n(), 1.0, samples, c.seed);
    let mut cert = c.certificate("theorem22", Method::Sampled { delta: 1e-3 }, xs.len());
    let mut rows = Vec::new();
    for (j, t) in simplex_targets(m, grid, c.seed).iter().enumerate() {
        let w = map.fiber_witness(t, &xs, 4, 1e-3, c.seed.wrapping_add(j as u64))?;
        cert.push_fiber(format!("t={t:?}"), w.max_diameter);
        let mut row = t.clone();
        row.extend([w.max_diameter, w.max_displacement]);
        rows.push(row);
    }
    cert.judge(eps + c.tolerance, true);
    let mut header: Vec<String> = (0..=m).map(|i| format!("t{i}")).collect();
    header.extend(["diameter".into(), "displacement".into()]);
    write_csv(&c.path("theorem22.csv"), &header.iter().map(String::as_str).collect::<Vec<_>>(), &rows)?;
    write_json(&c.path("theorem22.cert.json"), &cert)?;
    Ok(verdict(&cert, "theorem22 witness"))
}

fn cmd_gromov(c: &RunConfig) -> Result<Outcome> {
    let (eps, grid, samples) = (c.get(c.eps, "eps")?, c.get(c.grid, "grid")?, c.get(c.samples, "samples")?);
    let cube = GromovCube::new(eps)?;
    let ys: Vec<f64> = (0..grid.max(2)).map(|j| j as f64 / (grid.max(2) - 1) as f64).collect();
    let report = gromov_witness_sweep(&cube, &ys, samples, 8, c.seed);
    let mut cert = c.certificate("gromov-cube", Method::Exact, samples * ys.len());
    for r in &report.rows {
        cert.push_fiber(format!("y={} side={:?}", r.y, r.side), r.max_diameter);
    }
    cert.judge(6.0 * eps + c.tolerance, false);
    cert.passed &= report.all_sides_witnessed;
    let cert = cert.with_extra("c", report.c).with_extra("all_sides_witnessed", report.all_sides_witnessed);
    write_json(&c.path("gromov-cube.json"), &report)?;
    write_json(&c.path("gromov-cube.cert.json"), &cert)?;
    if !report.all_sides_witnessed {
        return Ok(Outcome::Fail("gromov cube: a level has no witness on one side".into()));
    }
    Ok(verdict(&cert, "gromov cube witness"))
}

fn cmd_bundle(c: &RunConfig) -> Result<Outcome> {
    let (m, k, eps) = (c.get(c.m, "m")?, c.get(c.k, "k")?, c.get(c.eps, "eps")?);
    let (grid, samples) = (c.get(c.grid, "grid")?, c.get(c.samples, "samples")?);
    let b = BundleConstruction::new(m, k, eps)?;
    write_json(&c.path("bundle.json"), &serde_json::json!({ "manifest": b.manifest(), "seed": c.seed }))?;
    let core = match core_identity_check(&b, samples, c.seed) {
        Ok(r) => r,
        Err(e) => return Ok(Outcome::Fail(format!("core identity: {e}"))),
    };
    let (lo, hi) = metric_eigen_range(&b, samples, c.seed);
    let ys: Vec<Vec<f64>> = if m == 1 {
        let r = b.y_radius;
        let g = grid.max(2);
        (0..g).map(|j| vec![-r + 2.0 * r * j as f64 / (g - 1) as f64]).collect()
    } else {
        ball_points(m, b.y_radius, grid, c.seed)
    };
    let mut cert = c.certificate("bundle", Method::Exact, samples);
    let mut witnesses = Vec::new();
    let mut violations = 0;
    let mut star: f64 = 0.0;
    for y in &ys {
        let w = fiber_witness_bundle(&b, y, samples, c.seed)?;
        cert.push_fiber(format!("y={y:?}"), w.non_star_width);
        violations += w.containment_violations;
        star = star.max(w.star_width);
        witnesses.push(w);
    }
    // non-⋆ fibers carry the certified bound; the ⋆-fiber is reported
    cert.judge(eps + c.tolerance, true);
    let eig_ok = lo >= eps * (1.0 - 1e-12) - c.tolerance && hi <= 1.0 + 1e-12 + c.tolerance;
    let cert = cert
        .with_extra("core", &core)
        .with_extra("eigen_range", [lo, hi])
        .with_extra("star_width", star)
        .with_extra("containment_violations", violations)
        .with_extra("witnesses", &witnesses);
    write_json(&c.path("bundle.cert.json"), &cert)?;
    if violations > 0 {
        return Ok(Outcome::Fail(format!("bundle: {violations} witness points outside their fiber")));
    }
    if !eig_ok {
        return Ok(Outcome::Fail(format!("bundle: metric eigenvalues [{lo}, {hi}] leave [{eps}, 1]")));
    }
    Ok(verdict(&cert, "bundle non-star witness"))
}

fn cmd_interpolate(c: &RunConfig) -> Result<Outcome> {
    let (name, grid) = (c.get(c.demo, "demo")?, c.get(c.grid, "grid")?);
    let d = match name {
        DemoName::Disk => demo::disk(grid)?,
        DemoName::Annulus => demo::annulus(grid.max(1), 4 * grid.max(2))?,
        DemoName::TwoHoles => demo::two_holes(grid.max(7))?,
    };
    let run = match interpolate(&d.p0, &d.p1) {
        Ok(r) => r,
        Err(e @ (Error::WidthBound { .. } | Error::Cell { .. })) => {
            write_json(&c.path("interpolate.failure.json"), &serde_json::json!({ "error": e.to_string() }))?;
            return Ok(Outcome::Fail(e.to_string()));
        }
        Err(e) => return Err(e),
    };
    let bound = run.bound + c.tolerance;
    let rows: Vec<Vec<f64>> = run.events.iter().map(|e| vec![e.t, e.width, run.bound]).collect();
    write_csv(&c.path("interpolate.csv"), &["t", "width", "bound"], &rows)?;
    let json = run.to_json();
    write_json(&c.path("interpolate.json"), &json)?;
    let mut cert = c.certificate(&format!("interpolate-{}", d.name), Method::Exact, run.events.len());
    for e in &run.events {
        cert.push_fiber(format!("t={}", e.t), e.width);
    }
    cert.judge(bound, false);
    let chain = run.chain_violations();
    let cert = cert.with_extra("beta", run.beta).with_extra("chain_violations", chain);
    write_json(&c.path("interpolate.cert.json"), &cert)?;
    if let Some(k) = run.events.iter().position(|e| e.width > bound) {
        write_json(&c.path("interpolate.failure.json"), &json.events[k])?;
        return Ok(Outcome::Fail(format!("interpolate: event t={} has width {} > {bound}", run.events[k].t, run.events[k].width)));
    }
    if chain > 0 {
        return Ok(Outcome::Fail(format!("interpolate: {chain} chain violations")));
    }
    Ok(Outcome::Pass)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub m: u32,
    pub beta: u32,
    pub variant: Variant,
    pub exact: String,
    pub value: f64,
}

pub fn constants_table(m: u32, beta: u32) -> Result<Vec<ConstantsRow>> {
    [Variant::Improved, Variant::Basic]
        .into_iter()
        .map(|variant| {
            let q: BigRational = waist_constant(m, beta, variant)?;
            Ok(ConstantsRow { m, beta, variant, exact: q.to_string(), value: q.to_f64().unwrap_or(f64::NAN) })
        })
        .collect()
}

fn cmd_constants(c: &RunConfig) -> Result<Outcome> {
    let (m, beta) = (c.get(c.m, "m")? as u32, c.get(c.beta, "beta")?);
    let rows = constants_table(m, beta)?;
    for r in &rows {
        println!("m={} beta={} {:?}: {} = {}", r.m, r.beta, r.variant, r.exact, r.value);
    }
    write_json(&c.path("constants.json"), &rows)?;
    Ok(Outcome::Pass)
}

/// Parses arguments, runs, and maps the result onto an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let config = RunConfig::from_cli(&cli);
    match execute(&config) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail(msg)) => {
            eprintln!("invariant failed: {msg}");
            1
        }
        Err(e @ Error::InvalidParameter(_)) => {
            eprintln!("bad configuration: {e}");
            2
        }
        Err(e) => {
            eprintln!("invariant failed: {e}");
            1
        }
    }
}

pub fn read_config(path: &Path) -> Result<RunConfig> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(dir: &Path, args: &[&str]) -> i32 {
        let mut full = vec!["waistwidth", "--out", dir.to_str().unwrap()];
        full.extend_from_slice(args);
        main_with_args(full)
    }

    #[test]
    fn constants_examples() {
        let one_third: BigRational = BigRational::new(1.into(), 3.into());
        let one_seventh: BigRational = BigRational::new(1.into(), 7.into());
        for (m, b, q) in [(1, 0, &one_third), (1, 2, &one_seventh), (2, 0, &one_seventh)] {
            for row in constants_table(m, b).unwrap() {
                assert_eq!(row.exact, q.to_string());
            }
        }
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(run(dir.path(), &["constants", "--m", "1", "--beta", "2"]), 0);
        assert_eq!(run(dir.path(), &["constants", "--m", "0"]), 2);
    }

    #[test]
    fn bad_flags_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(run(dir.path(), &["construct", "bundle", "--eps", "1.5"]), 2);
        assert_eq!(run(dir.path(), &["interpolate", "--demo", "torus"]), 2);
    }

    #[test]
    fn config_round_trips_exactly() {
        let cli = Cli::try_parse_from(["waistwidth", "--seed", "7", "construct", "theorem22", "--eps", "0.1"]).unwrap();
        let c = RunConfig::from_cli(&cli);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        write_json(&p, &c).unwrap();
        let back = read_config(&p).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.eps.unwrap().to_bits(), 0.1f64.to_bits());
    }

    #[test]
    fn interpolate_disk_and_failure_dump() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(run(dir.path(), &["interpolate", "--demo", "disk", "--grid", "3"]), 0);
        let csv = std::fs::read_to_string(dir.path().join("interpolate.csv")).unwrap();
        let mut rd = csv::Reader::from_reader(csv.as_bytes());
        for r in rd.records() {
            let r = r.unwrap();
            let (w, b): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
            assert!(w <= b + 1e-9);
        }
        let bad = tempfile::tempdir().unwrap();
        assert_eq!(run(bad.path(), &["--tolerance", "-100", "interpolate", "--demo", "disk", "--grid", "3"]), 1);
        assert!(bad.path().join("interpolate.failure.json").exists());
    }

    #[test]
    fn certificates_are_deterministic() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let args = ["--seed", "3", "construct", "bundle", "--m", "1", "--k", "0", "--eps", "0.05", "--samples", "2000"];
        assert_eq!(run(a.path(), &args), 0);
        assert_eq!(run(b.path(), &args), 0);
        let ca = std::fs::read_to_string(a.path().join("bundle.cert.json")).unwrap();
        let cb = std::fs::read_to_string(b.path().join("bundle.cert.json")).unwrap();
        assert!(ca == cb, "certificates differ");
    }
}
