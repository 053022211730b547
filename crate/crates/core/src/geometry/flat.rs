use serde::Serialize;

use super::curve::PlaneCurve;
use super::dual::{dual_point, LineCoord};
use crate::error::{Error, Result};
use crate::numeric::{bisect, fit_line, golden_min, least_squares};

/// Curvature below this fraction of the peak counts as zero.
pub const ZERO_CURVATURE_RATIO: f64 = 1e-8;

/// Vanishing orders above this are indistinguishable from a straight segment
/// in double precision and are rejected as non-isolated flat points.
pub const MAX_FLAT_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlatKind {
    /// Curvature changes sign.
    Inflection,
    /// Curvature touches zero without changing sign.
    NonInflection,
}

/// A point where the curvature vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatPoint {
    pub t: f64,
    /// Index of the first non-vanishing derivative of curvature.
    pub order: usize,
    pub kind: FlatKind,
    pub tangent_line: LineCoord,
}

fn kappa<C: PlaneCurve + ?Sized>(curve: &C, t: f64) -> f64 {
    curve.curvature(t).unwrap_or(f64::NAN)
}

/// Sample count used when scanning curvature.
pub(crate) fn scan_samples<C: PlaneCurve + ?Sized>(curve: &C) -> usize {
    (64 * curve.min_samples()).max(4096)
}

/// Estimates how many derivatives of curvature vanish at `t0`.
///
/// Fits a degree-5 polynomial to curvature over `t0 ± delta` in the scaled
/// variable `u = (t - t0) / delta`, so each coefficient is already weighted by
/// `delta^n`. The order is the first coefficient that is not negligible next
/// to the largest. Higher orders fall back to a log-log slope.
pub fn estimate_flat_order<C: PlaneCurve + ?Sized>(curve: &C, t0: f64, delta: f64) -> usize {
    const DEG: usize = 5;
    const NPTS: usize = 32;
    let mut a = Vec::with_capacity(NPTS * (DEG + 1));
    let mut b = Vec::with_capacity(NPTS);
    for j in 0..NPTS {
        let u = -1.0 + 2.0 * j as f64 / (NPTS - 1) as f64;
        let mut p = 1.0;
        for _ in 0..=DEG {
            a.push(p);
            p *= u;
        }
        b.push(kappa(curve, t0 + u * delta));
    }
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale > 0.0 {
        if let Some(c) = least_squares(&a, &b, DEG + 1) {
            let peak = c[1..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
            // fitting noise sits near machine precision times the data scale
            if peak > 1e-9 * scale {
                if let Some(k) = (1..=DEG).find(|&k| c[k].abs() > 1e-5 * peak) {
                    return k;
                }
            }
        }
    }
    log_slope_order(curve, t0, delta)
}

fn log_slope_order<C: PlaneCurve + ?Sized>(curve: &C, t0: f64, h_mid: f64) -> usize {
    let n = 16;
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for j in 0..n {
        let h = h_mid * 0.5 * 4f64.powf(j as f64 / (n - 1) as f64);
        let v = 0.5 * (kappa(curve, t0 + h).abs() + kappa(curve, t0 - h).abs());
        if v > 0.0 && v.is_finite() {
            lx.push(h.ln());
            ly.push(v.ln());
        }
    }
    match fit_line(&lx, &ly) {
        Some(f) if f.slope.is_finite() => f.slope.round().max(1.0) as usize,
        _ => usize::MAX,
    }
}

/// Finds every flat point of `curve`.
///
/// Curvature is scanned on a dense grid. Sign changes are refined by
/// bisection to `tol` in the parameter; near-zero local minima of `|κ|`
/// without a sign change are refined by golden-section search and kept only
/// if they reach zero within [`ZERO_CURVATURE_RATIO`]. A run of near-zero
/// samples longer than 1% of the grid is examined for its vanishing order;
/// beyond [`MAX_FLAT_ORDER`] it is reported as
/// [`Error::FlatPointsNotIsolated`].
pub fn find_flat_points<C: PlaneCurve + ?Sized>(curve: &C, tol: f64) -> Result<Vec<FlatPoint>> {
    let n = scan_samples(curve);
    let ts = curve.sample_params(n);
    let ks: Vec<f64> = ts.iter().map(|&t| curve.curvature(t)).collect::<Result<_>>()?;
    let kmax = ks.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if kmax == 0.0 {
        let (a, b) = curve.domain();
        return Err(Error::FlatPointsNotIsolated { t_start: a, t_end: b });
    }
    let zero = ZERO_CURVATURE_RATIO * kmax;
    let closed = curve.is_closed();
    let (ta, tb) = curve.domain();
    let period = tb - ta;
    let step = if closed { period / n as f64 } else { period / (n - 1) as f64 };
    // parameter of sample i, unwrapped past the end for closed curves
    let tpar = |i: usize| if closed { ta + step * i as f64 } else { ts[i.min(n - 1)] };
    let idx = |i: usize| if closed { i % n } else { i };
    let span = if closed { n } else { n - 1 };

    // runs of near-zero samples
    let small: Vec<bool> = ks.iter().map(|k| k.abs() < zero).collect();
    let mut runs: Vec<(usize, usize)> = Vec::new(); // start, length (indices may wrap)
    if small.iter().all(|&s| s) {
        return Err(Error::FlatPointsNotIsolated { t_start: ta, t_end: tb });
    }
    let start_scan = if closed { (0..n).find(|&i| !small[i]).unwrap_or(0) } else { 0 };
    let mut i = 0;
    while i < n {
        let j = (start_scan + i) % n;
        if small[j] {
            let mut len = 0;
            while i + len < n && small[(start_scan + i + len) % n] {
                len += 1;
            }
            runs.push((j, len));
            i += len;
        } else {
            i += 1;
        }
    }

    let mut found: Vec<FlatPoint> = Vec::new();
    let long_run = (n / 100).max(2);
    let mut covered: Vec<(f64, f64)> = Vec::new();
    for &(start, len) in &runs {
        if len < long_run {
            continue;
        }
        let lo = tpar(start);
        let hi = tpar(start + len - 1);
        let t0 = golden_min(|t| kappa(curve, t).abs(), lo, hi, tol);
        let half = 0.5 * (hi - lo).max(step);
        let order = log_slope_order(curve, t0, half);
        if order > MAX_FLAT_ORDER {
            return Err(Error::FlatPointsNotIsolated {
                t_start: curve.wrap_param(lo),
                t_end: curve.wrap_param(hi),
            });
        }
        covered.push((lo - step, hi + step));
        found.push(make_flat(curve, curve.wrap_param(t0), order, half)?);
    }
    let inside_run =
        |t: f64| covered.iter().any(|&(a, b)| (t >= a && t <= b) || (closed && t + period >= a && t + period <= b));

    for i in 0..span {
        let (k0, k1) = (ks[idx(i)], ks[idx(i + 1)]);
        let (t0, t1) = (tpar(i), tpar(i + 1));
        if inside_run(t0) && inside_run(t1) {
            continue;
        }
        if k0 != 0.0 && k1 != 0.0 && (k0 < 0.0) != (k1 < 0.0) {
            let t = bisect(|t| kappa(curve, t), t0, t1, tol);
            let order = estimate_flat_order(curve, t, 16.0 * step);
            found.push(make_flat(curve, curve.wrap_param(t), order, 16.0 * step)?);
            continue;
        }
        if k1 == 0.0 && (closed || i + 2 < n) {
            // exact zero on the grid: decide at the neighbours
            let k2 = ks[idx(i + 2)];
            if k0 != 0.0 && k2 != 0.0 && (k0 < 0.0) != (k2 < 0.0) {
                let t = tpar(i + 1);
                let order = estimate_flat_order(curve, t, 16.0 * step);
                found.push(make_flat(curve, curve.wrap_param(t), order, 16.0 * step)?);
            }
        }
    }

    // touching zeros: local minima of |κ| with no sign change
    for i in 1..=span {
        if !closed && i + 1 >= n {
            break;
        }
        let (km, k0, kp) = (ks[idx(i - 1)], ks[idx(i)], ks[idx(i + 1)]);
        if k0 == 0.0 || (km < 0.0) != (k0 < 0.0) || (kp < 0.0) != (k0 < 0.0) {
            continue;
        }
        if !(k0.abs() <= km.abs() && k0.abs() <= kp.abs()) || k0.abs() > 1e-3 * kmax {
            continue;
        }
        let (lo, hi) = (tpar(i - 1), tpar(i + 1));
        if inside_run(tpar(i)) {
            continue;
        }
        let t = golden_min(|t| kappa(curve, t).abs(), lo, hi, tol);
        if kappa(curve, t).abs() <= zero {
            let order = estimate_flat_order(curve, t, 16.0 * step);
            found.push(make_flat(curve, curve.wrap_param(t), order, 16.0 * step)?);
        }
    }

    found.sort_by(|a, b| a.t.total_cmp(&b.t));
    found.dedup_by(|b, a| curve.param_distance(a.t, b.t) < 4.0 * step);
    if closed && found.len() > 1 && curve.param_distance(found[0].t, found[found.len() - 1].t) < 4.0 * step {
        found.pop();
    }
    Ok(found)
}

fn make_flat<C: PlaneCurve + ?Sized>(curve: &C, t: f64, order: usize, delta: f64) -> Result<FlatPoint> {
    let before = kappa(curve, t - delta);
    let after = kappa(curve, t + delta);
    let kind = if (before < 0.0) != (after < 0.0) { FlatKind::Inflection } else { FlatKind::NonInflection };
    Ok(FlatPoint { t, order, kind, tangent_line: dual_point(curve, t)? })
}
