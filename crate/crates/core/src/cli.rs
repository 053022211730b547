//! Command-line front end.
//!
//! Every subcommand reads an optional config file, applies `--set`
//! overrides and writes its outputs under `--out`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};

use crate::artifacts::{
    canonical_forward, canonical_inverse, localization_score, random_baseline, simulate, singular_support_map,
    PhaseSpacePoint2D,
};
use crate::config::{Background, RunConfig};
use crate::cuspwave::{
    cusp_point_wavefront_check, decay_slope, squared_spectrum, synth_cusp_conormal, CuspSymbol, CONTROL_EPSILON,
};
use crate::error::{Error, Result};
use crate::geometry::{predicted_lines, tangency_points, validate_assumptions, ParamCurve, PlaneCurve, Vec2};
use crate::transform::{normal_operator_check, radon_indicator, ImageGrid, Sinogram, SinogramGrid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ASSUMPTION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

const EXIT_HELP: &str = "Exit codes:
  0  success
  1  usage, parse or configuration error
  2  a geometric assumption on the boundary is violated (outputs are still written)
  3  numerical failure, including a failed self-check";

#[derive(Debug, Parser)]
#[command(name = "ctstreak", version, about = "Predict, simulate and verify beam-hardening streaks", after_help = EXIT_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// TOML run configuration; defaults apply to every missing key.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory receiving all outputs.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for every random choice (overrides run.seed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Override a config value, e.g. `--set image.n=256`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the predicted streak lines and the assumption report.
    Predict {
        #[command(flatten)]
        common: Common,
    },
    /// Simulate the artifact image and score it against the predicted lines.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Measure the Fourier decay of the squared cusp wave.
    Cusp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run the numerical self-checks.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

/// Loads the config named by `common` and applies overrides.
pub fn resolve_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for o in &common.overrides {
        cfg.set(o)?;
    }
    if let Some(seed) = common.seed {
        cfg.run.seed = seed;
    }
    Ok(cfg)
}

/// Maps an error to the documented exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Config(_) | Error::Io(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        Error::TangencyViolation(_) | Error::FlatPointsNotIsolated { .. } => EXIT_ASSUMPTION,
        _ => EXIT_NUMERICAL,
    }
}

fn write(out: &Path, name: &str, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(out.join(name), contents)?;
    Ok(())
}

/// Writes `lines.csv` and `assumptions.txt`; returns the exit code.
pub fn cmd_predict(cfg: &RunConfig, out: &Path) -> Result<i32> {
    fs::create_dir_all(out)?;
    let curve = cfg.curve.load()?;
    let report = validate_assumptions(&curve);
    write(out, "assumptions.txt", report.to_text())?;
    match predicted_lines(&curve) {
        Ok(lines) => {
            lines.write_csv(&out.join("lines.csv"))?;
            Ok(if report.ok() { EXIT_OK } else { EXIT_ASSUMPTION })
        }
        Err(e) if exit_code(&e) == EXIT_ASSUMPTION => {
            write(out, "lines.csv", crate::geometry::LineSet::default().to_csv())?;
            Ok(EXIT_ASSUMPTION)
        }
        Err(e) => Err(e),
    }
}

fn water_background(n: usize, r: f64) -> Result<ImageGrid> {
    let radius = 0.9 * r;
    let h = 2.0 * r / n as f64;
    ImageGrid::from_fn(n, r, |x| {
        // area fraction from 4x4 subsamples keeps the edge from aliasing
        let mut inside = 0;
        for a in 0..4 {
            for b in 0..4 {
                let p = x + Vec2::new((a as f64 - 1.5) / 4.0 * h, (b as f64 - 1.5) / 4.0 * h);
                inside += (p.norm() < radius) as u32;
            }
        }
        0.2 * inside as f64 / 16.0
    })
}

/// Ray tilts reported in `decay.txt`, so the small-`ε` regime can be read off.
const EPSILON_SWEEP: [f64; 6] = [0.0, 0.04, 0.08, 0.16, 0.32, 0.64];

type Job = fn(&RunConfig, &Path) -> Result<i32>;

/// Writes sinograms, the reconstruction, its gradient map and the score.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<i32> {
    fs::create_dir_all(out)?;
    let curve = cfg.curve.load()?;
    let model = cfg.nonlinearity.model()?;
    let grid = cfg.sinogram_grid()?;
    let (n, r) = (cfg.image.n, cfg.image.r);
    let background = match cfg.image.background {
        Background::None => None,
        Background::Water => Some(water_background(n, r)?),
    };
    let sim = simulate(&curve, &model, &grid, n, r, background.as_ref())?;
    sim.check_finite()?;
    sim.metal.save(&out.join("metal.sino"))?;
    sim.nonlinear.save(&out.join("p_ma.sino"))?;
    sim.image.save(&out.join("f_ma.img"))?;
    sim.image.save_pgm(&out.join("f_ma.pgm"))?;
    let grad = singular_support_map(&sim.image);
    grad.save(&out.join("gradient.img"))?;
    grad.save_pgm(&out.join("gradient.pgm"))?;
    let report = validate_assumptions(&curve);
    write(out, "assumptions.txt", report.to_text())?;
    let lines = match predicted_lines(&curve) {
        Ok(l) => l,
        Err(e) if exit_code(&e) == EXIT_ASSUMPTION => {
            write(out, "score.txt", format!("# no score: {e}\n"))?;
            return Ok(EXIT_ASSUMPTION);
        }
        Err(e) => return Err(e),
    };
    lines.write_csv(&out.join("lines.csv"))?;
    let (tube, q) = (cfg.score.tube_radius, cfg.score.quantile);
    let score = localization_score(&grad, &lines, &curve, tube, q)?;
    let baseline = random_baseline(&grad, &lines, &curve, tube, q, cfg.run.seed)?;
    let mut text = score.to_text();
    let _ = writeln!(text, "predicted_lines = {}", lines.len());
    let _ = writeln!(text, "seed = {}", cfg.run.seed);
    let _ = writeln!(text, "random_baseline_fraction = {:.6}", baseline.inside_fraction);
    for k in 0..lines.len() {
        let without = localization_score(&grad, &lines.without(k), &curve, tube, q)?;
        let _ = writeln!(text, "line_{k}_removal_drop = {:.6}", score.inside_fraction - without.inside_fraction);
    }
    write(out, "score.txt", text)?;
    Ok(if report.ok() { EXIT_OK } else { EXIT_ASSUMPTION })
}

/// Writes `decay.txt` and `decay_samples.csv`.
pub fn cmd_cusp(cfg: &RunConfig, out: &Path) -> Result<i32> {
    fs::create_dir_all(out)?;
    let c = &cfg.cusp;
    let sym = CuspSymbol::with_rho(c.rho);
    let v = synth_cusp_conormal(&sym, c.n, c.freq_scale)?;
    let sup = v.sup_abs();
    let f2 = squared_spectrum(&v);
    let mut rep = decay_slope(&f2, c.eps, c.window)?;
    rep.expected_slope = sym.expected_slope();
    // the tilted control ray leaves the resolved band sooner
    let limit = 0.25 * f2.nyquist() / (1.0 + CONTROL_EPSILON * CONTROL_EPSILON).sqrt();
    let control = decay_slope(&f2, CONTROL_EPSILON, (c.window.0, c.window.1.min(limit))).ok();
    let sweep: Vec<(f64, Option<f64>)> = EPSILON_SWEEP
        .iter()
        .map(|&e| {
            let top = c.window.1.min(0.25 * f2.nyquist() / (1.0 + e * e).sqrt());
            (e, decay_slope(&f2, e, (c.window.0, top)).ok().map(|r| r.fitted_slope))
        })
        .collect();
    drop(f2);
    let mut text = format!("rho = {}\nn = {}\nfreq_scale = {}\nsup_abs_v = {sup:.6e}\n", c.rho, c.n, c.freq_scale);
    text.push_str(&rep.to_text());
    let _ = writeln!(text, "control_epsilon = {CONTROL_EPSILON}");
    match control {
        Some(ctl) => {
            let _ = writeln!(text, "control_slope = {:.6}", ctl.fitted_slope);
        }
        None => text.push_str("# control ray skipped: less than an octave fits below the band edge\n"),
    }
    for (e, slope) in sweep {
        match slope {
            Some(v) => {
                let _ = writeln!(text, "slope_at_epsilon_{e} = {v:.6}");
            }
            None => {
                let _ = writeln!(text, "# slope_at_epsilon_{e} skipped");
            }
        }
    }
    let mut pass = (rep.fitted_slope - rep.expected_slope).abs() <= 0.3;
    if c.wavefront {
        let w = cusp_point_wavefront_check(&v, &sym, c.eps, c.window)?;
        let _ = writeln!(text, "origin_window_slope = {:.6}", w.origin.fitted_slope);
        let _ = writeln!(text, "far_window_slope = {:.6}", w.far.fitted_slope);
        let _ = writeln!(text, "wavefront_check = {}", if w.passed { "pass" } else { "fail" });
        pass &= w.passed;
    }
    let _ = writeln!(text, "decay_law = {}", if pass { "pass" } else { "fail" });
    write(out, "decay.txt", text)?;
    write(out, "decay_samples.csv", rep.samples_csv())?;
    Ok(if pass { EXIT_OK } else { EXIT_NUMERICAL })
}

/// One self-check outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

fn suite(name: &'static str, value: f64, tolerance: f64) -> SuiteResult {
    SuiteResult { name, passed: value.is_finite() && value <= tolerance, value, tolerance }
}

/// Largest round-trip or identity error over random phase-space points.
pub fn canonical_roundtrip_error(count: usize, seed: u64) -> Result<f64> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let x = Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let xi = Vec2::from_angle(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)) * rng.gen_range(0.01..100.0);
        let p = PhaseSpacePoint2D { x, xi };
        let q = canonical_forward(p)?;
        let back = canonical_inverse(q)?;
        let scale = 1.0 + x.norm();
        worst = worst.max((back.x - x).norm() / scale).max((back.xi - xi).norm() / xi.norm());
        let lhs = x.dot(x);
        worst = worst.max((lhs - q.s * q.s - (q.eta / q.sigma).powi(2)).abs() / (1.0 + lhs));
    }
    Ok(worst)
}

/// Worst tangency residual of the predicted lines: distance of each
/// tangency point to its line and the normal component of the velocity.
pub fn tangency_residual(curve: &ParamCurve) -> Result<f64> {
    let lines = predicted_lines(curve)?;
    let mut worst: f64 = 0.0;
    for l in &lines.lines {
        for &t in &l.params {
            let v = curve.derivative(t, 1);
            worst = worst.max(l.line.distance(curve.point(t))).max((v.dot(l.line.normal()) / v.norm()).abs());
        }
        let touching = tangency_points(curve, &l.line, 4096);
        if touching.len() != l.params.len() {
            return Err(Error::Numerical(format!("line {:?} touches at {} points", l.line, touching.len())));
        }
    }
    Ok(worst)
}

/// Max deviation of the exact unit-disk sinogram from `2√(1 - s²)`, in
/// units of `Δs`.
pub fn disk_sinogram_error(n_s: usize, n_phi: usize) -> Result<f64> {
    let grid = SinogramGrid::new(n_s, n_phi, 1.5)?;
    let sino = radon_indicator(&ParamCurve::circle(1.0), 1.0, &grid)?;
    let exact = Sinogram::from_fn(grid, |s, _| if s.abs() < 1.0 { 2.0 * (1.0 - s * s).sqrt() } else { 0.0 });
    let err = sino.values.iter().zip(&exact.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(err / grid.ds())
}

/// Runs every suite and writes `verify.txt`.
pub fn cmd_verify(cfg: &RunConfig, out: &Path) -> Result<i32> {
    fs::create_dir_all(out)?;
    let v = &cfg.verify;
    let curve = cfg.curve.load()?;
    let mut results = vec![
        suite("canonical_roundtrip", canonical_roundtrip_error(v.roundtrips, cfg.run.seed)?, v.roundtrip_tol),
        suite("tangency_residual", tangency_residual(&curve)?, v.tangency_tol),
        suite("disk_sinogram", disk_sinogram_error(v.n + 1, v.n_phi)?, v.disk_tol_ds),
    ];
    let gaussian = |n: usize| ImageGrid::from_fn(n, 1.5, |x| (-(x.dot(x)) / (2.0 * 0.09)).exp());
    let coarse = normal_operator_check(&gaussian(v.n)?, &crate::transform::covering_grid(v.n, 1.5, v.n_phi))?;
    let fine = normal_operator_check(&gaussian(2 * v.n)?, &crate::transform::covering_grid(2 * v.n, 1.5, 2 * v.n_phi))?;
    results.push(suite("normal_operator_residual", coarse.relative_residual.max(fine.relative_residual), v.normal_residual));
    results.push(suite("normal_operator_constant", (coarse.c - fine.c).abs() / fine.c, v.normal_c_rel));
    let field = synth_cusp_conormal(&CuspSymbol::default(), v.cusp_n, crate::cuspwave::DEFAULT_FREQ_SCALE)?;
    let f2 = squared_spectrum(&field);
    let mut sq = field.clone();
    sq.values.iter_mut().for_each(|z| *z = *z * *z);
    let (a, b) = (sq.l2_squared(), f2.l2_squared());
    results.push(suite("parseval", (a - b).abs() / a, v.parseval_tol));

    let mut text = String::new();
    for s in &results {
        let _ = writeln!(
            text,
            "{} = {} value={:.6e} tolerance={:.3e}",
            s.name,
            if s.passed { "pass" } else { "fail" },
            s.value,
            s.tolerance
        );
    }
    let _ = writeln!(text, "normal_operator_c = {:.6} {:.6}", coarse.c, fine.c);
    let all = results.iter().all(|s| s.passed);
    let _ = writeln!(text, "all = {}", if all { "pass" } else { "fail" });
    write(out, "verify.txt", text)?;
    Ok(if all { EXIT_OK } else { EXIT_NUMERICAL })
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (common, job): (&Common, Job) = match &cli.command {
        Command::Predict { common } => (common, cmd_predict),
        Command::Simulate { common } => (common, cmd_simulate),
        Command::Cusp { common, .. } => (common, cmd_cusp),
        Command::Verify { common } => (common, cmd_verify),
    };
    let outcome = resolve_config(common).and_then(|mut cfg| {
        if let Command::Cusp { rho, eps, n, .. } = &cli.command {
            cfg.cusp.rho = rho.unwrap_or(cfg.cusp.rho);
            cfg.cusp.eps = eps.unwrap_or(cfg.cusp.eps);
            cfg.cusp.n = n.unwrap_or(cfg.cusp.n);
            cfg.validate()?;
        }
        job(&cfg, &common.out)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
