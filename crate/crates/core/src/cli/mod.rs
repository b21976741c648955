//! Batch front end: one subcommand per experiment, each writing JSON/CSV
//! results, an SVG plot and a manifest into the output directory.

pub mod config;

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::conformal::{domain_approx_sequence, pushed_masses, transfer, ApproxBudget};
use crate::disk::{
    cauchy_limit_test, excursions, occupation_density, replicas, rotation_rate, simulate, simulate_with, winding, winding_star, DiskPath, Histogram, SimOptions,
    StationarySampler,
};
use crate::erbm::{assemble_erbm, exact_acceptance, predicted_masses};
use crate::error::{Error, Result};
use crate::harmonic::{hitting_test, hmu_to_theta, measure_singularity_test, mu_field, theta_to_hmu, BoundaryMeasure, FieldKind, HarmonicPair};
use crate::quad::Verdict;
use crate::{io, rng, svg};

pub use config::{ExperimentConfig, FieldSpec, PairSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Bin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Angle field, density pair and rotation field, with round-trip residuals.
    Correspond,
    /// One reflected path.
    Simulate,
    /// Occupation histogram against the predicted stationary density.
    VerifyStationary,
    /// Rotation rates around the configured points.
    Rotation,
    /// Kolmogorov-Smirnov distance of the scaled winding to the Cauchy law.
    Cauchy,
    /// Whether boundary points are hit.
    Hitting,
    /// Excursion reflected Brownian motion from a root density.
    Erbm,
    /// Image of a path under a conformal map.
    Transfer,
    /// Paths on shrinking disks against the full domain.
    ApproxDomains,
}

#[derive(Debug, Parser)]
#[command(name = "orbm", version, about = "Obliquely reflected Brownian motion experiments")]
pub struct Cli {
    /// TOML experiment config; defaults apply to every missing field.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads for replicas; defaults to the hardware parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Format of paths and tables. Reports are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

/// What a finished command produced.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Outcome {
    pub files: Vec<String>,
    /// Some verdict could not be reached; maps to exit code 3.
    pub inconclusive: bool,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconclusive(_) => 3,
        Error::InternalConsistencyFailure(_) => 4,
        _ => 2,
    }
}

/// Variant name of an error, for machine-readable reports.
pub fn error_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

pub fn error_json(e: &Error, command: Option<Command>) -> String {
    json!({ "error": error_name(e), "message": e.to_string(), "command": command, "exit_code": exit_code(e) }).to_string()
}

/// Loads the config named on the command line and applies the seed override.
pub fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            ExperimentConfig::from_toml(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = load_config(&cli).and_then(|cfg| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cli.workers {
            if w == 0 {
                return Err(Error::Config("--workers must be positive".into()));
            }
            pool = pool.num_threads(w);
        }
        let pool = pool.build().map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| run(cli.command, &cfg, &cli.out, cli.format))
    });
    match result {
        Ok(out) if out.inconclusive => {
            eprintln!("{}", error_json(&Error::Inconclusive("at least one verdict is inconclusive".into()), Some(cli.command)));
            3
        }
        Ok(_) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e, Some(cli.command)));
            exit_code(&e)
        }
    }
}

struct Writer {
    dir: PathBuf,
    files: Vec<String>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Writer { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn file(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }

    fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let f = self.file(name);
        io::write_json(value, &f)
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let f = self.file(name);
        std::fs::write(f, body)?;
        Ok(())
    }

    /// Numeric table as CSV, or as JSON rows when the format asks for it.
    fn table(&mut self, stem: &str, header: &[&str], rows: &[Vec<f64>], format: Format) -> Result<()> {
        if format == Format::Json {
            let objs: Vec<serde_json::Map<String, serde_json::Value>> =
                rows.iter().map(|r| header.iter().zip(r).map(|(k, v)| (k.to_string(), json!(v))).collect()).collect();
            return self.json(&format!("{stem}.json"), &objs);
        }
        let f = std::fs::File::create(self.file(&format!("{stem}.csv")))?;
        io::write_table_csv(header, rows, std::io::BufWriter::new(f))
    }

    fn path(&mut self, stem: &str, path: &DiskPath, format: Format) -> Result<()> {
        match format {
            Format::Csv => {
                let f = std::fs::File::create(self.file(&format!("{stem}.csv")))?;
                io::write_path_csv(path, std::io::BufWriter::new(f))
            }
            Format::Json => self.json(&format!("{stem}.json"), path),
            Format::Bin => {
                let f = std::fs::File::create(self.file(&format!("{stem}.bin")))?;
                io::write_path_bin(path, std::io::BufWriter::new(f))
            }
        }
    }
}

/// Runs one command and writes its artifacts plus `manifest.json` and the
/// effective `config.toml` into `out`.
pub fn run(command: Command, cfg: &ExperimentConfig, out: &Path, format: Format) -> Result<Outcome> {
    let mut w = Writer::new(out)?;
    let inconclusive = match command {
        Command::Correspond => cmd_correspond(cfg, &mut w, format)?,
        Command::Simulate => cmd_simulate(cfg, &mut w, format)?,
        Command::VerifyStationary => cmd_verify_stationary(cfg, &mut w, format)?,
        Command::Rotation => cmd_rotation(cfg, &mut w, format)?,
        Command::Cauchy => cmd_cauchy(cfg, &mut w, format)?,
        Command::Hitting => cmd_hitting(cfg, &mut w, format)?,
        Command::Erbm => cmd_erbm(cfg, &mut w, format)?,
        Command::Transfer => cmd_transfer(cfg, &mut w, format)?,
        Command::ApproxDomains => cmd_approx(cfg, &mut w, format)?,
    };
    let toml_text = cfg.to_toml()?;
    w.text("config.toml", &toml_text)?;
    let hash = Sha256::digest(toml_text.as_bytes());
    let hash: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    let mut files = w.files.clone();
    files.push("manifest.json".into());
    let manifest = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.seed,
        "format": format,
        "config_sha256": hash,
        "config_file": "config.toml",
        "files": files,
        "inconclusive": inconclusive,
    });
    w.json("manifest.json", &manifest)?;
    Ok(Outcome { files: w.files, inconclusive })
}

fn eval_grid() -> Vec<Complex64> {
    let mut pts = Vec::new();
    for i in 1..=9 {
        for j in 0..64 {
            pts.push(Complex64::from_polar(i as f64 / 10.0, TAU * j as f64 / 64.0));
        }
    }
    pts
}

fn cmd_correspond(cfg: &ExperimentConfig, w: &mut Writer, format: Format) -> Result<bool> {
    let tol = &cfg.tolerances;
    let input_theta = match cfg.pair {
        PairSpec::FromTheta => Some(cfg.theta_field()?),
        _ => None,
    };
    let pair = match &input_theta {
        Some(th) => theta_to_hmu(th, tol)?,
        None => cfg.pair_from(&cfg.pair)?,
    };
    let rot = mu_field(&pair, tol)?;
    let back = hmu_to_theta(&pair, cfg.n_grid, tol);
    let round_trip = match (&input_theta, &back) {
        (Some(th), Ok(b)) => Some(th.values().iter().zip(b.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)),
        _ => None,
    };
    let (mut r_conj, mut r_h, mut r_tan) = (0.0f64, 0.0f64, 0.0f64);
    for z in eval_grid() {
        let mu = rot.mu.eval(z);
        r_conj = r_conj.max((mu - (pair.mu0 - PI * pair.h.conj_eval(z))).abs());
        r_h = r_h.max((pair.h(z) - (rot.mu.conj_eval(z) + 1.0) / PI).abs());
        r_tan = r_tan.max((mu - PI * pair.h(z) * pair.theta(z).tan()).abs());
    }
    let rows: Vec<Vec<f64>> = cfg
        .correspond
        .points
        .iter()
        .map(|p| {
            let z = config::point(*p);
            vec![z.re, z.im, pair.h(z), pair.h.conj_eval(z), pair.theta(z), rot.mu.eval(z)]
        })
        .collect();
    w.table("correspond_table", &["x", "y", "h", "h_conj", "theta", "mu"], &rows, format)?;
    let boundary = back.as_ref().ok().or(input_theta.as_ref());
    w.json(
        "correspond.json",
        &json!({
            "pair": pair,
            "rotation_field": rot,
            "theta_boundary": boundary.map(|b| b.values()),
            "theta_boundary_error": back.as_ref().err().map(|e| json!({ "error": error_name(e), "message": e.to_string() })),
            "residuals": {
                "theta_round_trip": round_trip,
                "mu_conjugate_identity": r_conj,
                "h_from_mu_identity": r_h,
                "mu_tan_identity": r_tan,
            },
        }),
    )?;
    if let Some(b) = boundary {
        let xs: Vec<f64> = (0..b.n_grid()).map(|j| b.angle(j)).collect();
        w.text("theta_boundary.svg", &svg::line_plot(&xs, b.values()))?;
    }
    Ok(false)
}

fn cmd_simulate(cfg: &ExperimentConfig, w: &mut Writer, format: Format) -> Result<bool> {
    let s = &cfg.simulate;
    let th = cfg.theta_field()?;
    let path = simulate(&th, config::point(s.x0), s.dt, s.horizon, cfg.seed, &cfg.tolerances)?;
    w.path("path", &path, format)?;
    w.json(
        "summary.json",
        &json!({
            "samples": path.len(),
            "horizon": path.horizon(),
            "final_position": [path.final_position().re, path.final_position().im],
            "final_local_time": path.final_local_time(),
            "rejections": path.rejections,
            "seed": path.seed,
        }),
    )?;
    w.text("path.svg", &svg::path_trace(&path.positions, 20_000))?;
    Ok(false)
}

fn histogram_rows(hist: &Histogram, predicted: &[f64]) -> Vec<Vec<f64>> {
    let g = hist.grid;
    let m = hist.masses();
    (0..g.cells())
        .map(|c| {
            let (i, j) = (c / g.sectors, c % g.sectors);
            vec![c as f64, g.ring_edge(i), g.ring_edge(i + 1), TAU * j as f64 / g.sectors as f64, m[c], predicted[c]]
        })
        .collect()
}

const CELL_HEADER: [&str; 6] = ["cell", "r_inner", "r_outer", "angle_start", "empirical", "predicted"];

fn cmd_verify_stationary(cfg: &ExperimentConfig, w: &mut Writer, format: Format) -> Result<bool> {
    let s = &cfg.stationary;
    let tol = &cfg.tolerances;
    let th = cfg.theta_field()?;
    let pair = theta_to_hmu(&th, tol)?;
    let sampler = StationarySampler::new(&pair)?;
    let hists: Vec<Result<Histogram>> = replicas(s.replicas.max(1), |k| {
        let x0 = sampler.sample(&mut rng::stream(cfg.seed, (1 << 32) + k as u64));
        let opts = SimOptions { stream: k as u64, ..SimOptions::default() };
        let path = simulate_with(&th, x0, s.dt, s.horizon, cfg.seed, opts, tol)?;
        occupation_density(&path, s.grid, 0.0)
    });
    let mut total = Histogram::new(s.grid);
    for h in hists {
        total.merge(&h?);
    }
    let predicted = s.grid.masses(|z| pair.h(z));
    let l1 = total.l1_error(&predicted);
    w.table("occupation", &CELL_HEADER, &histogram_rows(&total, &predicted), format)?;
    w.json(
        "stationary.json",
        &json!({
            "l1_error": l1,
            "threshold": s.threshold,
            "below_threshold": l1 < s.threshold,
            "samples": total.total(),
            "replicas": s.replicas,
            "mu0": pair.mu0,
            "seed": cfg.seed,
        }),
    )?;
    w.text("density.svg", &svg::density_heatmap(s.grid, &total.densities()))?;
    Ok(false)
}

fn cmd_rotation(cfg: &ExperimentConfig, w: &mut Writer, format: Format) -> Result<bool> {
    let r = &cfg.rotation;
    let tol = &cfg.tolerances;
    let th = cfg.theta_field()?;
    let pair = theta_to_hmu(&th, tol)?;
    // A stationary start keeps the path off the winding centres.
    let x0 = StationarySampler::new(&pair)?.sample(&mut rng::stream(cfg.seed, 1 << 32));
    let path = simulate(&th, x0, r.dt, r.horizon, cfg.seed, tol)?;
    let mut rows = Vec::new();
    for p in &r.points {
        let z = config::point(*p);
        let est = rotation_rate(&path, z, tol)?;
        let predicted = pair.mu(z);
        rows.push(vec![z.re, z.im, est.rate, est.std_error, predicted, (est.rate - predicted) / est.std_error, est.removed_excursions as f64]);
    }
    let header = ["x", "y", "rate", "std_error", "predicted", "z_score", "removed_excursions"];
    w.table("rotation", &header, &rows, format)?;
    w.json("rotation.json", &json!({ "horizon": path.horizon(), "mu0": pair.mu0, "seed": cfg.seed, "rows": rows, "columns": header }))?;
    if let Some(p) = r.points.first() {
        let ws = winding(&path, config::point(*p))?;
        let star = winding_star(&ws, &excursions(&path, tol), tol.winding_threshold);
        let stride = (star.times.len() / 2000).max(1);
        let (xs, ys): (Vec<f64>, Vec<f64>) = star.times.iter().zip(&star.arg_values).step_by(stride).skip(1).map(|(t, a)| (*t, a / t)).unzip();
        w.text("rotation.svg", &svg::line_plot(&xs, &ys))?;
    }
    Ok(false)
}

fn cmd_cauchy(cfg: &ExperimentConfig, w: &mut Writer, format: Format) -> Result<bool> {
    let c = &cfg.cauchy;
    let th = cfg.theta_field()?;
    let report = cauchy_limit_test(&th, &c.t_values, c.replicas, cfg.seed, &cfg.tolerances)?;
    let rows: Vec<Vec<f64>> = report.points.iter().map(|p| vec![p.t, p.ks, p.p_value]).collect();
    w.table("cauchy", &["t", "ks", "p_value"], &rows, format)?;
    w.json("cauchy.json", &report)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = report.points.iter().map(|p| (p.t.ln(), p.ks)).unzip();
    w.text("cauchy.svg", &svg::line_plot(&xs, &ys))?;
    Ok(false)
}

fn verdict_label(v: &Verdict) -> &'static str {
    match v {
        Verdict::Finite { .. } => "Finite",
        Verdict::Divergent { .. } => "Divergent",
        Verdict::Inconclusive { .. } => "Inconclusive",
    }
}

fn cmd_hitting(cfg: &ExperimentConfig, w: &mut Writer, format: Format) -> Result<bool> {
    let hc = &cfg.hitting;
    let tol = &cfg.tolerances;
    let pair: HarmonicPair = cfg.pair_from(&hc.pair)?;
    let sigma = BoundaryMeasure::from_pair(&pair, cfg.n_grid)?;
    let mut records = Vec::new();
    let mut rows = Vec::new();
    let mut inconclusive = false;
    for &x in &hc.angles {
        let radial = hitting_test(&pair, x, hc.r_min, tol);
        let measure = measure_singularity_test(&sigma, x, Some(&pair), tol);
        let label = |r: &Result<Verdict>| match r {
            Ok(v) => verdict_label(v).to_string(),
            Err(e) => error_name(e),
        };
        let (a, b) = (label(&radial), label(&measure));
        inconclusive |= a == "Inconclusive" || b == "Inconclusive";
        let agree = a == b;
        if let (Err(e), _) | (_, Err(e)) = (&radial, &measure) {
            if !matches!(e, Error::Inconclusive(_)) {
                return Err(e.clone());
            }
        }
        rows.push(vec![x, f64::from(u8::from(radial.as_ref().is_ok_and(|v| v.is_finite()))), f64::from(u8::from(agree))]);
        records.push(json!({
            "angle": x,
            "verdict": a,
            "radial": radial.as_ref().ok(),
            "measure_verdict": b,
            "measure": measure.as_ref().ok(),
            "agree": agree,
        }));
    }
    w.table("hitting", &["angle", "finite", "agree"], &rows, format)?;
    w.json("hitting.json", &json!({ "mu0": pair.mu0, "atoms": sigma.atoms, "points": records }))?;
    let xs: Vec<f64> = (0..512).map(|j| TAU * j as f64 / 512.0).collect();
    let ys: Vec<f64> = xs.iter().map(|t| pair.h(Complex64::from_polar(0.99, *t))).collect();
    w.text("density_boundary.svg", &svg::line_plot(&xs, &ys))?;
    Ok(inconclusive)
}

fn cmd_erbm(cfg: &ExperimentConfig, w: &mut Writer, format: Format) -> Result<bool> {
    let e = &cfg.erbm;
    let nu = e.nu.build(FieldKind::Density, cfg.n_grid)?;
    let path = assemble_erbm(&nu, e.eps_dep, e.horizon, e.dt, cfg.seed, e.delta)?;
    let hist = path.occupation(e.grid);
    let predicted = predicted_masses(&nu, e.grid, &cfg.tolerances);
    let l1 = hist.l1_error(&predicted);
    let rate = path.excursions.len() as f64 / path.trials.max(1) as f64;
    w.table("occupation", &CELL_HEADER, &histogram_rows(&hist, &predicted), format)?;
    w.json(
        "erbm.json",
        &json!({
            "l1_error": l1,
            "trials": path.trials,
            "deep_excursions": path.excursions.len(),
            "acceptance_rate": rate,
            "predicted_acceptance": exact_acceptance(e.delta, e.eps_dep),
            "local_time": path.local_time,
            "total_time": path.total_time,
            "shallow_time": path.shallow_time,
            "deep_time": path.deep_time,
            "seed": cfg.seed,
        }),
    )?;
    w.text("density.svg", &svg::density_heatmap(e.grid, &hist.densities()))?;
    Ok(false)
}

fn cmd_transfer(cfg: &ExperimentConfig, w: &mut Writer, format: Format) -> Result<bool> {
    let t = &cfg.transfer;
    let tol = &cfg.tolerances;
    t.map.validate(tol)?;
    let th = cfg.theta_field()?;
    let pair = theta_to_hmu(&th, tol)?;
    let path = simulate(&th, config::point(t.x0), t.dt, t.horizon, cfg.seed, tol)?;
    let moved = transfer(&path, &t.map, t.target_dt)?;
    let image = moved.as_path();
    w.path("image_path", &image, format)?;
    let hist = moved.preimage_occupation(t.grid, tol.burn_in);
    let predicted = pushed_masses(t.grid, &t.map, |z| pair.h(z));
    let l1 = hist.l1_error(&predicted);
    w.table("preimage_occupation", &CELL_HEADER, &histogram_rows(&hist, &predicted), format)?;
    w.json(
        "transfer.json",
        &json!({
            "map": t.map,
            "source_horizon": path.horizon(),
            "clock_total": moved.clock.last(),
            "image_horizon": moved.horizon(),
            "image_samples": image.len(),
            "l1_error": l1,
            "seed": cfg.seed,
        }),
    )?;
    w.text("image_path.svg", &svg::path_trace(&moved.resampled, 20_000))?;
    Ok(false)
}

fn cmd_approx(cfg: &ExperimentConfig, w: &mut Writer, format: Format) -> Result<bool> {
    let a = &cfg.approx;
    let tol = &cfg.tolerances;
    a.map.validate(tol)?;
    let pair = cfg.pair_from(&cfg.pair)?;
    let budget = ApproxBudget { runs: a.runs, horizon: a.horizon, dt: a.dt, seed: cfg.seed, n_grid: cfg.n_grid };
    let report = domain_approx_sequence(&a.map, &a.r_list, &pair, &budget, tol)?;
    let rows: Vec<Vec<f64>> = report.rows.iter().map(|r| vec![r.r, r.median_m1]).collect();
    w.table("approx", &["r", "median_m1"], &rows, format)?;
    w.json("approx.json", &report)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = report.rows.iter().map(|r| (r.r, r.median_m1)).unzip();
    w.text("approx.svg", &svg::line_plot(&xs, &ys))?;
    Ok(false)
}
