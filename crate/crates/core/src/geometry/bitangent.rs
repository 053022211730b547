use std::f64::consts::PI;

use serde::Serialize;

use super::curve::PlaneCurve;
use super::dual::{raw_dual, LineCoord};
use super::vec2::Vec2;
use crate::error::Result;
use crate::numeric::golden_min;

/// A line tangent to the curve at two distinct parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bitangent {
    pub t1: f64,
    pub t2: f64,
    pub line: LineCoord,
}

/// Residual below which two tangent lines are taken to coincide.
const COINCIDENCE: f64 = 1e-10;

/// Residual of the bitangent equations at `(t1, t2)` and its Jacobian.
///
/// The unknowns are matched in line space modulo `(φ, s) ~ (φ + π, -s)`:
/// with `k` the nearest integer to `(φ₁ - φ₂)/π`, the residual is
/// `(φ₁ - φ₂ - kπ, s₁ - (-1)^k s₂)`.
fn residual<C: PlaneCurve + ?Sized>(curve: &C, t1: f64, t2: f64) -> Result<([f64; 2], [[f64; 2]; 2])> {
    let (p1, s1) = raw_dual(curve, t1)?;
    let (p2, s2) = raw_dual(curve, t2)?;
    let k = ((p1 - p2) / PI).round();
    let sign = if (k as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let f = [p1 - p2 - k * PI, s1 - sign * s2];
    let rate = |t: f64, phi: f64| -> Result<(f64, f64)> {
        let speed = curve.derivative(t, 1).norm();
        let dphi = curve.curvature(t)? * speed;
        let along = curve.point(t).dot(Vec2::from_angle(phi).perp());
        Ok((dphi, along * dphi))
    };
    let (dp1, ds1) = rate(t1, p1)?;
    let (dp2, ds2) = rate(t2, p2)?;
    Ok((f, [[dp1, -dp2], [ds1, -sign * ds2]]))
}

/// Newton iteration on the bitangent equations from a seed pair.
fn refine<C: PlaneCurve + ?Sized>(curve: &C, mut t1: f64, mut t2: f64, tol: f64) -> Option<(f64, f64)> {
    let (a, b) = curve.domain();
    let max_step = 0.05 * (b - a);
    for _ in 0..80 {
        let (f, j) = residual(curve, t1, t2).ok()?;
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let mut d1 = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let mut d2 = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        let len = d1.hypot(d2);
        if len > max_step {
            d1 *= max_step / len;
            d2 *= max_step / len;
        }
        t1 -= d1;
        t2 -= d2;
        if !curve.is_closed() && (t1 < a || t1 > b || t2 < a || t2 > b) {
            return None;
        }
        if len < tol {
            break;
        }
    }
    let (f, _) = residual(curve, t1, t2).ok()?;
    if f[0].abs() < COINCIDENCE && f[1].abs() < COINCIDENCE {
        Some((curve.wrap_param(t1), curve.wrap_param(t2)))
    } else {
        None
    }
}

/// Intersection parameters of segments `p0→p1` and `q0→q1`, if they cross.
fn segment_hit(p0: (f64, f64), p1: (f64, f64), q0: (f64, f64), q1: (f64, f64)) -> Option<(f64, f64)> {
    let r = (p1.0 - p0.0, p1.1 - p0.1);
    let s = (q1.0 - q0.0, q1.1 - q0.1);
    let denom = r.0 * s.1 - r.1 * s.0;
    if denom == 0.0 {
        return None;
    }
    let w = (q0.0 - p0.0, q0.1 - p0.1);
    let a = (w.0 * s.1 - w.1 * s.0) / denom;
    let b = (w.0 * r.1 - w.1 * r.0) / denom;
    if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) {
        Some((a, b))
    } else {
        None
    }
}

/// Finds every bitangent line of `curve`.
///
/// Self-crossings of the sampled dual curve seed a Newton solve on
/// `(t₁, t₂)`. Crossings are looked for in the normalised chart, with each
/// segment also compared against the copies of the others shifted by `±π`
/// (and `s` negated), so that lines near `φ = 0 ~ π` are not missed.
/// Converged pairs closer than a thousandth of the parameter range are
/// discarded because they come from the tip of a cusp of the dual curve.
pub fn find_bitangents<C: PlaneCurve + ?Sized>(curve: &C, tol: f64) -> Result<Vec<Bitangent>> {
    let n = (32 * curve.min_samples()).max(2048);
    let ts = curve.sample_params(n);
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            let (phi, s) = raw_dual(curve, t)?;
            let l = LineCoord::normalized(phi, s);
            Ok((l.phi, l.s))
        })
        .collect::<Result<_>>()?;
    let closed = curve.is_closed();
    let nseg = if closed { n } else { n - 1 };
    // each segment starts in the chart and its end follows it continuously
    let segs: Vec<((f64, f64), (f64, f64))> = (0..nseg)
        .map(|i| {
            let p = pts[i];
            let mut q = pts[(i + 1) % n];
            if q.0 - p.0 > 0.5 * PI {
                q = (q.0 - PI, -q.1);
            } else if q.0 - p.0 < -0.5 * PI {
                q = (q.0 + PI, -q.1);
            }
            (p, q)
        })
        .collect();
    let bbox: Vec<[f64; 4]> = segs
        .iter()
        .map(|(p, q)| [p.0.min(q.0), p.0.max(q.0), p.1.min(q.1), p.1.max(q.1)])
        .collect();
    let (da, db) = curve.domain();
    let step = if closed { (db - da) / n as f64 } else { (db - da) / (n - 1) as f64 };

    let mut seeds = Vec::new();
    for i in 0..nseg {
        for j in i + 2..nseg {
            if closed && i == 0 && j == nseg - 1 {
                continue;
            }
            for shift in [-1i32, 0, 1] {
                let off = shift as f64 * PI;
                let sg = if shift == 0 { 1.0 } else { -1.0 };
                let bj = bbox[j];
                let (s_lo, s_hi) = if sg > 0.0 { (bj[2], bj[3]) } else { (-bj[3], -bj[2]) };
                if bj[0] + off > bbox[i][1] || bj[1] + off < bbox[i][0] || s_lo > bbox[i][3] || s_hi < bbox[i][2] {
                    continue;
                }
                let (q0, q1) = segs[j];
                let q0 = (q0.0 + off, sg * q0.1);
                let q1 = (q1.0 + off, sg * q1.1);
                if let Some((a, b)) = segment_hit(segs[i].0, segs[i].1, q0, q1) {
                    seeds.push((ts[i] + a * step, ts[j] + b * step));
                }
            }
        }
    }

    let min_sep = 1e-3 * (db - da);
    let mut out: Vec<Bitangent> = Vec::new();
    for (s1, s2) in seeds {
        let Some((t1, t2)) = refine(curve, s1, s2, tol) else { continue };
        if curve.param_distance(t1, t2) < min_sep {
            continue;
        }
        let (phi, s) = raw_dual(curve, t1)?;
        let line = LineCoord::normalized(phi, s);
        let (t1, t2) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        if out.iter().any(|b| b.line.quotient_distance(&line) < 1e-8) {
            continue;
        }
        out.push(Bitangent { t1, t2, line });
    }
    out.sort_by(|a, b| a.line.phi.total_cmp(&b.line.phi));
    Ok(out)
}

/// Parameters at which `line` is tangent to `curve`.
///
/// Scans the normalised slope `|γ'·θ| / |γ'|` for local minima, refines each
/// by golden-section search, and keeps those lying on the line.
pub fn tangency_points<C: PlaneCurve + ?Sized>(curve: &C, line: &LineCoord, n: usize) -> Vec<f64> {
    let theta = line.normal();
    let slope = |t: f64| {
        let v = curve.derivative(t, 1);
        v.dot(theta).abs() / v.norm()
    };
    let ts = curve.sample_params(n);
    let qs: Vec<f64> = ts.iter().map(|&t| slope(t)).collect();
    let closed = curve.is_closed();
    let (da, db) = curve.domain();
    let step = if closed { (db - da) / n as f64 } else { (db - da) / (n - 1) as f64 };
    let scale = 1.0 + line.s.abs();
    let mut out: Vec<f64> = Vec::new();
    let range = if closed { 0..n } else { 1..n - 1 };
    for i in range {
        let qm = qs[(i + n - 1) % n];
        let qp = qs[(i + 1) % n];
        if !(qs[i] <= qm && qs[i] <= qp) || qs[i] > 0.05 {
            continue;
        }
        let t = golden_min(slope, ts[i] - step, ts[i] + step, 1e-14);
        let gap = (curve.point(t).dot(theta) - line.s).abs();
        if gap < 1e-8 * scale && slope(t) < 1e-6 {
            let t = curve.wrap_param(t);
            if !out.iter().any(|&u| curve.param_distance(u, t) < 1e-6) {
                out.push(t);
            }
        }
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ParamCurve;

    #[test]
    fn convex_curves_have_none() {
        for c in [ParamCurve::circle(1.0), ParamCurve::ellipse(2.0, 0.5)] {
            assert!(find_bitangents(&c, 1e-14).unwrap().is_empty());
        }
    }

    #[test]
    fn kidney_has_one_vertical_bitangent() {
        let k = ParamCurve::kidney();
        let b = find_bitangents(&k, 1e-14).unwrap();
        assert_eq!(b.len(), 1, "{b:?}");
        let line = b[0].line;
        // the dent faces +x, so the bitangent is close to x = const
        assert!(line.phi.abs() < 1e-6 || (PI - line.phi).abs() < 1e-6, "{line:?}");
        for t in [b[0].t1, b[0].t2] {
            assert!(line.distance(k.point(t)) < 1e-10);
            assert!(k.derivative(t, 1).dot(line.normal()).abs() < 1e-9);
        }
        assert_eq!(tangency_points(&k, &line, 4096).len(), 2);
    }

    #[test]
    fn tangency_points_of_circle() {
        let c = ParamCurve::circle(1.0);
        let line = LineCoord { phi: 0.3, s: 1.0 };
        let t = tangency_points(&c, &line, 1024);
        assert_eq!(t.len(), 1);
        assert!((t[0] - 0.3).abs() < 1e-7);
        let missing = LineCoord { phi: 0.3, s: 0.5 };
        assert!(tangency_points(&c, &missing, 1024).is_empty());
    }
}
