use rayon::prelude::*;

use super::grid::{ImageGrid, Sinogram, SinogramGrid};
use crate::error::{Error, Result};
use crate::geometry::{ParamCurve, PlaneCurve, Vec2};

/// Initial parameter samples per line when locating boundary crossings.
pub const CHORD_SAMPLES: usize = 4096;

/// Parameter tolerance for refined crossings.
const ROOT_TOL: f64 = 1e-12;

/// Root of `g` in a bracket where it changes sign: Newton steps, falling back
/// to bisection whenever a step would leave the bracket.
fn refine_root<G: Fn(f64) -> (f64, f64)>(g: G, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let (ga, _) = g(a);
    let (gb, _) = g(b);
    if ga == 0.0 {
        return a;
    }
    if gb == 0.0 {
        return b;
    }
    let neg_a = ga < 0.0;
    let mut t = a + (b - a) * ga / (ga - gb);
    for _ in 0..100 {
        let (gt, dgt) = g(t);
        if gt == 0.0 {
            return t;
        }
        if (gt < 0.0) == neg_a {
            a = t;
        } else {
            b = t;
        }
        if b - a < tol {
            return 0.5 * (a + b);
        }
        let newton = t - gt / dgt;
        let next = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (next - t).abs() < 0.25 * tol {
            return next;
        }
        t = next;
    }
    t
}

/// Chord lengths of every line `{x·θ = s_i}` at a fixed angle, or `None` if
/// some line met the boundary an odd number of times.
fn indicator_row(curve: &ParamCurve, pts: &[Vec2], ts: &[f64], grid: &SinogramGrid, phi: f64) -> Option<Vec<f64>> {
    let theta = Vec2::from_angle(phi);
    let along = theta.perp();
    let m = pts.len();
    let proj: Vec<f64> = pts.iter().map(|p| p.dot(theta)).collect();
    let (s0, ds) = (-grid.s_max, grid.ds());
    let mut brackets: Vec<(usize, usize)> = Vec::new();
    for k in 0..m {
        let (a, b) = (proj[k], proj[(k + 1) % m]);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        // s_i is crossed when it lies in (lo, hi]
        let mut i = ((lo - s0) / ds).floor().max(0.0) as usize;
        while i < grid.n_s && s0 + i as f64 * ds <= lo {
            i += 1;
        }
        while i < grid.n_s && s0 + i as f64 * ds <= hi {
            brackets.push((i, k));
            i += 1;
        }
    }
    brackets.sort_unstable();
    let period = std::f64::consts::TAU;
    let mut row = vec![0.0; grid.n_s];
    let mut start = 0;
    let mut cross: Vec<f64> = Vec::new();
    while start < brackets.len() {
        let i = brackets[start].0;
        let mut end = start;
        while end < brackets.len() && brackets[end].0 == i {
            end += 1;
        }
        if (end - start) % 2 == 1 {
            return None;
        }
        let s = s0 + i as f64 * ds;
        cross.clear();
        for &(_, k) in &brackets[start..end] {
            let ta = ts[k];
            let tb = if k + 1 < m { ts[k + 1] } else { period };
            let t = refine_root(
                |t| {
                    let (p, v) = curve.point_velocity(t);
                    (p.dot(theta) - s, v.dot(theta))
                },
                ta,
                tb,
                ROOT_TOL,
            );
            cross.push(curve.point(t).dot(along));
        }
        cross.sort_by(|a, b| a.total_cmp(b));
        row[i] = cross.chunks_exact(2).map(|c| c[1] - c[0]).sum();
        start = end;
    }
    Some(row)
}

/// Line integrals of `amplitude · χ_D`, where `D` is the region bounded by
/// `curve`.
///
/// For every line the boundary crossings are bracketed on a dense parameter
/// sampling and refined to `1e-12`; their positions along the line are
/// sorted and paired, which gives the chords inside `D`. An odd number of
/// crossings triggers one retry at twice the sampling density.
pub fn radon_indicator(curve: &ParamCurve, amplitude: f64, grid: &SinogramGrid) -> Result<Sinogram> {
    let reach = curve
        .sample_params(CHORD_SAMPLES)
        .into_iter()
        .map(|t| curve.point(t).norm())
        .fold(0.0f64, f64::max);
    if reach >= grid.s_max {
        return Err(Error::InvalidArgument(format!(
            "s_max = {} does not cover the curve (radius {reach:.4})",
            grid.s_max
        )));
    }
    let sampling = |m: usize| {
        let ts = curve.sample_params(m);
        let pts: Vec<Vec2> = ts.iter().map(|&t| curve.point(t)).collect();
        (ts, pts)
    };
    let (ts, pts) = sampling(CHORD_SAMPLES.max(16 * curve.min_samples()));
    let rows: Vec<Result<Vec<f64>>> = (0..grid.n_phi)
        .into_par_iter()
        .map(|j| {
            let phi = grid.phi(j);
            if let Some(r) = indicator_row(curve, &pts, &ts, grid, phi) {
                return Ok(r);
            }
            let (ts2, pts2) = sampling(2 * ts.len());
            indicator_row(curve, &pts2, &ts2, grid, phi).ok_or(Error::OddIntersections { count: 1, s: f64::NAN, phi })
        })
        .collect();
    let mut values = Vec::with_capacity(grid.n_s * grid.n_phi);
    for r in rows {
        values.extend(r?.into_iter().map(|v| v * amplitude));
    }
    Ok(Sinogram { grid: *grid, values })
}

/// Line integrals of a raster image.
///
/// Each line is clipped to the raster square, sampled every half pixel with
/// bilinear interpolation and summed with the trapezoid rule.
pub fn radon_image(image: &ImageGrid, grid: &SinogramGrid) -> Sinogram {
    let n = image.n;
    let r = image.r;
    let h = image.pixel();
    // copy with a one-pixel zero border so bilinear lookups need no branches
    let w = n + 2;
    let mut padded = vec![0.0; w * w];
    for j in 0..n {
        padded[(j + 1) * w + 1..(j + 1) * w + 1 + n].copy_from_slice(&image.values[j * n..(j + 1) * n]);
    }
    let du_target = 0.5 * h;
    // lines are clipped slightly inside the padded square so every sample
    // has all four neighbours
    let reach = r + 0.5 * h - 1e-9 * h;
    let rows: Vec<Vec<f64>> = (0..grid.n_phi)
        .into_par_iter()
        .map(|j| {
            let theta = Vec2::from_angle(grid.phi(j));
            let dir = theta.perp();
            (0..grid.n_s)
                .map(|i| {
                    let base = theta * grid.s(i);
                    let Some((u0, u1)) = clip_to_square(base, dir, reach) else { return 0.0 };
                    let steps = ((u1 - u0) / du_target).ceil().max(1.0) as usize;
                    let du = (u1 - u0) / steps as f64;
                    // fractional index into the padded raster
                    let fx0 = (base.x + dir.x * u0 + r) / h + 0.5;
                    let fy0 = (base.y + dir.y * u0 + r) / h + 0.5;
                    let (dfx, dfy) = (dir.x * du / h, dir.y * du / h);
                    let sample = |k: usize| {
                        let fx = (fx0 + k as f64 * dfx).clamp(0.0, (w - 1) as f64 - 1e-9);
                        let fy = (fy0 + k as f64 * dfy).clamp(0.0, (w - 1) as f64 - 1e-9);
                        let (i0, j0) = (fx as usize, fy as usize);
                        let (ax, ay) = (fx - i0 as f64, fy - j0 as f64);
                        let p = j0 * w + i0;
                        (1.0 - ay) * ((1.0 - ax) * padded[p] + ax * padded[p + 1])
                            + ay * ((1.0 - ax) * padded[p + w] + ax * padded[p + w + 1])
                    };
                    let mut acc = 0.5 * (sample(0) + sample(steps));
                    for k in 1..steps {
                        acc += sample(k);
                    }
                    acc * du
                })
                .collect()
        })
        .collect();
    Sinogram { grid: *grid, values: rows.concat() }
}

/// Parameter interval of `base + u·dir` inside `[-r, r]²`.
fn clip_to_square(base: Vec2, dir: Vec2, r: f64) -> Option<(f64, f64)> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (b, d) in [(base.x, dir.x), (base.y, dir.y)] {
        if d.abs() < 1e-15 {
            if b.abs() > r {
                return None;
            }
        } else {
            let a = (-r - b) / d;
            let c = (r - b) / d;
            lo = lo.max(a.min(c));
            hi = hi.min(a.max(c));
        }
    }
    (hi > lo).then_some((lo, hi))
}
