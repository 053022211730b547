#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use ctstreak::geometry::{ParamCurve, PlaneCurve, Vec2};

/// Tangent line at `t` as `(φ, s)` with `φ ∈ [0, π)`, computed from scratch.
pub fn tangent_line(c: &ParamCurve, t: f64) -> (f64, f64) {
    let v = c.derivative(t, 1);
    let mut phi = (-v.x).atan2(v.y);
    let mut s = c.point(t).dot(Vec2::from_angle(phi));
    while phi < 0.0 {
        phi += PI;
        s = -s;
    }
    while phi >= PI {
        phi -= PI;
        s = -s;
    }
    (phi, s)
}

/// Distance between two lines, honouring `(φ, s) ~ (φ ± π, -s)`.
pub fn line_gap(a: (f64, f64), b: (f64, f64)) -> f64 {
    let direct = (a.0 - b.0).abs().max((a.1 - b.1).abs());
    let wrapped = (PI - (a.0 - b.0).abs()).abs().max((a.1 + b.1).abs());
    direct.min(wrapped)
}

/// All bitangents by exhaustive pairwise comparison on `n` samples, each
/// refined by repeatedly zooming a small parameter grid onto the pair with
/// the smallest line gap.
pub fn brute_force_bitangents(c: &ParamCurve, n: usize) -> Vec<(f64, f64)> {
    let ts: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
    let lines: Vec<(f64, f64)> = ts.iter().map(|&t| tangent_line(c, t)).collect();
    let step = TAU / n as f64;
    let gap = |i: usize, j: usize| line_gap(lines[i], lines[j]);
    let mut found: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let sep = (j - i).min(n + i - j);
            if sep < n / 50 {
                continue;
            }
            let g = gap(i, j);
            // local minimum over the 8 neighbours of the pair
            let mut is_min = g < 0.1;
            for (di, dj) in [(1, 0), (n - 1, 0), (0, 1), (0, n - 1), (1, 1), (n - 1, n - 1), (1, n - 1), (n - 1, 1)] {
                if gap((i + di) % n, (j + dj) % n) < g {
                    is_min = false;
                }
            }
            if !is_min {
                continue;
            }
            let (mut a, mut b, mut w) = (ts[i], ts[j], 2.0 * step);
            for _ in 0..40 {
                let mut best = (f64::INFINITY, a, b);
                for p in -5..=5 {
                    for q in -5..=5 {
                        let (x, y) = (a + w * p as f64 / 5.0, b + w * q as f64 / 5.0);
                        let d = line_gap(tangent_line(c, x), tangent_line(c, y));
                        if d < best.0 {
                            best = (d, x, y);
                        }
                    }
                }
                (a, b) = (best.1, best.2);
                w *= 0.3;
            }
            if line_gap(tangent_line(c, a), tangent_line(c, b)) < 1e-9 {
                let line = tangent_line(c, a);
                if !found.iter().any(|f| line_gap(*f, line) < 1e-6) {
                    found.push(line);
                }
            }
        }
    }
    found
}

pub fn test_curves() -> Vec<(&'static str, ParamCurve)> {
    vec![
        ("kidney", ParamCurve::kidney()),
        ("bean", ParamCurve::bean()),
        ("ellipse", ParamCurve::ellipse(1.0, 0.6)),
        ("peanut", ParamCurve::from_polar_cosines(&[1.0, 0.0, 0.35]).unwrap()),
        ("trefoil", ParamCurve::from_polar_cosines(&[1.0, 0.0, 0.0, 0.2]).unwrap()),
    ]
}

