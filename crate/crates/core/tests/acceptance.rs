//! Acceptance run. Each criterion prints one `PASS` or `FAIL` line; the
//! process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};

use ctstreak::artifacts::{
    canonical_forward, canonical_inverse, localization_score, simulate, singular_support_map, PhaseSpacePoint2D,
};
use ctstreak::cuspwave::{cusp_point_wavefront_check, decay_slope, squared_spectrum, synth_cusp_conormal, CuspSymbol};
use ctstreak::geometry::{dual_curve, find_bitangents, predicted_lines, GraphCurve, LineKind, ParamCurve, Vec2};
use ctstreak::nonlinearity::BeamModel;
use ctstreak::transform::{covering_grid, fbp, normal_operator_check, radon_indicator, ImageGrid, SinogramGrid};

mod common;

use common::{brute_force_bitangents, line_gap, test_curves};

struct Outcome {
    passed: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Image extent, raster and angle count shared by the two scan criteria.
const SCAN_R: f64 = 1.6;
const SCAN_N: usize = 512;
const SCAN_ANGLES: usize = 720;
const QUANTILE: f64 = 0.99;
const TUBE_PX: f64 = 3.0;

fn scan_grid() -> SinogramGrid {
    SinogramGrid::new(1025, SCAN_ANGLES, 1.01 * SCAN_R * 2f64.sqrt()).unwrap()
}

fn kidney_streaks() -> Outcome {
    let t0 = Instant::now();
    let curve = ParamCurve::kidney();
    let lines = predicted_lines(&curve).unwrap();
    let inflections = lines.count(LineKind::InflectionTangent);
    let bitangents = lines.count(LineKind::Bitangent);
    let model = BeamModel::quadratic(1.0, 1.0).unwrap();
    let sim = simulate(&curve, &model, &scan_grid(), SCAN_N, SCAN_R, None).unwrap();
    let grad = singular_support_map(&sim.image);
    let score = localization_score(&grad, &lines, &curve, TUBE_PX, QUANTILE).unwrap();
    let drops: Vec<f64> = (0..lines.len())
        .map(|k| {
            let without = localization_score(&grad, &lines.without(k), &curve, TUBE_PX, QUANTILE).unwrap();
            score.inside_fraction - without.inside_fraction
        })
        .collect();
    let elapsed = t0.elapsed().as_secs_f64();
    let min_drop = drops.iter().copied().fold(f64::INFINITY, f64::min);
    let layout = inflections == 2 && bitangents == 1;
    let passed = layout && score.inside_fraction >= 0.8 && min_drop >= 0.05 && elapsed <= 120.0;
    let drops: Vec<String> = drops.iter().map(|d| format!("{d:.4}")).collect();
    outcome(
        passed,
        format!(
            "inflection lines {inflections}, bitangents {bitangents}, inside_fraction {:.4} (need >= 0.8), \
             removal drops [{}] (need each >= 0.05), {elapsed:.1} s",
            score.inside_fraction,
            drops.join(", ")
        ),
    )
}

fn negative_control() -> Outcome {
    let curve = ParamCurve::ellipse(1.0, 0.6);
    let lines = predicted_lines(&curve).unwrap();
    let model = BeamModel::quadratic(1.0, 1.0).unwrap();
    let sim = simulate(&curve, &model, &scan_grid(), SCAN_N, SCAN_R, None).unwrap();
    let grad = singular_support_map(&sim.image);
    let score = localization_score(&grad, &lines, &curve, TUBE_PX, QUANTILE).unwrap();
    let passed = lines.is_empty() && score.inside_fraction >= 0.9;
    outcome(passed, format!("{} predicted lines, boundary fraction {:.4} (need >= 0.9)", lines.len(), score.inside_fraction))
}

fn cusp_law() -> Outcome {
    let kidney = ParamCurve::kidney();
    let dual = dual_curve(&kidney, 16384).unwrap();
    let lines = predicted_lines(&kidney).unwrap();
    let mut simple = Vec::new();
    for l in lines.lines.iter().filter(|l| l.kind == LineKind::InflectionTangent) {
        let rep = dual.cusp_exponent_fit(l.params[0], 0.05).unwrap();
        simple.push((rep.flat_order, rep.mean_exponent));
    }
    let cubic = dual_curve(&GraphCurve::monomial(3, 1.0), 4001).unwrap().cusp_exponent_fit(0.0, 0.1).unwrap();
    simple.push((cubic.flat_order, cubic.mean_exponent));
    let third = dual_curve(&GraphCurve::monomial(5, 1.0), 4001).unwrap().cusp_exponent_fit(0.0, 0.1).unwrap();
    let simple_ok = simple.iter().all(|&(k, e)| k == 1 && (e - 1.5).abs() <= 0.05);
    let third_ok = third.flat_order == 3 && (third.mean_exponent - 2.5).abs() <= 0.1;
    let list: Vec<String> = simple.iter().map(|(_, e)| format!("{e:.4}")).collect();
    outcome(
        simple_ok && third_ok,
        format!(
            "simple inflections [{}] (need 1.5 +- 0.05); order-{} inflection {:.4} (need 2.5 +- 0.1)",
            list.join(", "),
            third.flat_order,
            third.mean_exponent
        ),
    )
}

fn decay_law() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for rho in [2.5, 3.0, 3.5] {
        let t0 = Instant::now();
        let sym = CuspSymbol::with_rho(rho);
        let v = synth_cusp_conormal(&sym, 8192, 4.0).unwrap();
        let global = decay_slope(&squared_spectrum(&v), 0.08, (6.0, 60.0)).unwrap();
        let check = cusp_point_wavefront_check(&v, &sym, 0.08, (6.0, 60.0)).unwrap();
        drop(v);
        let elapsed = t0.elapsed().as_secs_f64();
        let expected = sym.expected_slope();
        let ok = (global.fitted_slope - expected).abs() <= 0.3
            && check.far.fitted_slope <= global.fitted_slope - 2.0
            && elapsed <= 300.0;
        passed &= ok;
        parts.push(format!(
            "rho {rho}: slope {:.3} vs {expected:.2}, far {:.3}, {elapsed:.0} s",
            global.fitted_slope, check.far.fitted_slope
        ));
    }
    outcome(passed, parts.join("; "))
}

fn canonical_relation() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let (mut roundtrip, mut identity): (f64, f64) = (0.0, 0.0);
    for _ in 0..10_000 {
        let x = Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let xi = Vec2::from_angle(rng.gen_range(-PI..PI)) * rng.gen_range(0.01..100.0);
        let q = canonical_forward(PhaseSpacePoint2D { x, xi }).unwrap();
        let back = canonical_inverse(q).unwrap();
        roundtrip = roundtrip.max((back.x - x).norm() / (1.0 + x.norm())).max((back.xi - xi).norm() / xi.norm());
        let r2 = x.dot(x);
        identity = identity.max((r2 - q.s * q.s - (q.eta / q.sigma).powi(2)).abs() / (1.0 + r2));
    }
    outcome(
        roundtrip <= 1e-12 && identity <= 1e-12,
        format!("10000 points, roundtrip {roundtrip:.2e}, identity {identity:.2e} (need <= 1e-12)"),
    )
}

fn transform_oracles() -> Outcome {
    let disk = ParamCurve::circle(1.0);

    let grid = SinogramGrid::new(1025, 360, 1.5).unwrap();
    let sino = radon_indicator(&disk, 1.0, &grid).unwrap();
    let mut sino_err: f64 = 0.0;
    for j in 0..grid.n_phi {
        for i in 0..grid.n_s {
            let s = grid.s(i);
            let exact = if s.abs() < 1.0 { 2.0 * (1.0 - s * s).sqrt() } else { 0.0 };
            sino_err = sino_err.max((sino.get(i, j) - exact).abs());
        }
    }
    let sino_err = sino_err / grid.ds();

    let (n, r) = (512, 1.5);
    let img = fbp(&radon_indicator(&disk, 1.0, &covering_grid(n, r, 720)).unwrap(), n, r).unwrap();
    let band = 3.0 * img.pixel();
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            let d = img.center(i, j).norm();
            if (d - 1.0).abs() <= band {
                continue;
            }
            let exact = if d < 1.0 { 1.0 } else { 0.0 };
            num += (img.get(i, j) - exact).powi(2);
            den += exact * exact;
        }
    }
    let fbp_err = (num / den).sqrt();

    let mut cs = Vec::new();
    let mut residual: f64 = 0.0;
    for (n, angles) in [(256, 360), (512, 720)] {
        let g = ImageGrid::from_fn(n, 1.5, |x| (-x.dot(x) / (2.0 * 0.3 * 0.3)).exp()).unwrap();
        let rep = normal_operator_check(&g, &covering_grid(n, 1.5, angles)).unwrap();
        residual = residual.max(rep.relative_residual);
        cs.push(rep.c);
    }
    let stable = format!("{:.2}", cs[0]) == format!("{:.2}", cs[1]) && (cs[0] - cs[1]).abs() / cs[1] < 1e-3;

    let passed = sino_err < 2.0 && fbp_err < 0.05 && residual < 0.02 && stable;
    outcome(
        passed,
        format!(
            "disk sinogram {sino_err:.2e} ds (need < 2), fbp disk L2 {fbp_err:.4} (need < 0.05), \
             normal residual {residual:.4} (need < 0.02), c {:.5} / {:.5}",
            cs[0], cs[1]
        ),
    )
}

fn bitangent_oracle() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, c) in test_curves() {
        let fast = find_bitangents(&c, 1e-14).unwrap();
        let slow = brute_force_bitangents(&c, 600);
        let worst = slow
            .iter()
            .map(|l| fast.iter().map(|b| line_gap((b.line.phi, b.line.s), *l)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        let ok = fast.len() == slow.len() && worst <= 1e-6;
        passed &= ok;
        parts.push(format!("{name} {}/{} gap {worst:.1e}", fast.len(), slow.len()));
    }
    outcome(passed, parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        ("kidney streak lines", kidney_streaks),
        ("negative control", negative_control),
        ("cusp law", cusp_law),
        ("decay law", decay_law),
        ("canonical relation", canonical_relation),
        ("transform oracles", transform_oracles),
        ("bitangent oracle", bitangent_oracle),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let o = check();
        failures += usize::from(!o.passed);
        println!("ACCEPTANCE {name}: {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
