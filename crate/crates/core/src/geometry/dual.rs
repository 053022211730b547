use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use serde::Serialize;

use super::curve::{PlaneCurve, MIN_SPEED};
use super::flat::estimate_flat_order;
use super::vec2::Vec2;
use crate::error::{Error, Result};
use crate::numeric::fit_line;

/// A line `{x : x·θ(φ) = s}` in the normalised chart `φ ∈ [0, π)`.
///
/// Line space is the quotient of `R × [0, 2π)` by `(s, φ) ~ (-s, φ + π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineCoord {
    pub phi: f64,
    pub s: f64,
}

impl LineCoord {
    /// Normalises an arbitrary `(φ, s)` pair into the chart.
    pub fn normalized(phi: f64, s: f64) -> Self {
        let k = (phi / PI).floor();
        let mut phi = phi - k * PI;
        let mut s = if (k as i64).rem_euclid(2) == 0 { s } else { -s };
        if phi >= PI {
            phi -= PI;
            s = -s;
        }
        if phi < 0.0 {
            phi = 0.0;
        }
        Self { phi, s }
    }

    pub fn normal(&self) -> Vec2 {
        Vec2::from_angle(self.phi)
    }

    /// Euclidean distance from `x` to the line.
    pub fn distance(&self, x: Vec2) -> f64 {
        (x.dot(self.normal()) - self.s).abs()
    }

    /// Distance in the quotient metric `max(|Δφ|, |Δs|)`, taking the
    /// identification near `φ = 0 ~ π` into account.
    pub fn quotient_distance(&self, other: &LineCoord) -> f64 {
        let direct = (self.phi - other.phi).abs().max((self.s - other.s).abs());
        let wrapped = (PI - (self.phi - other.phi).abs()).abs().max((self.s + other.s).abs());
        direct.min(wrapped)
    }
}

/// Unnormalised dual coordinates `(φ, s)` with `φ = atan2(-ẋ₁, ẋ₂)`.
///
/// Continuous along the curve except where `φ` crosses `±π`.
pub(crate) fn raw_dual<C: PlaneCurve + ?Sized>(curve: &C, t: f64) -> Result<(f64, f64)> {
    let d1 = curve.derivative(t, 1);
    let speed = d1.norm();
    if speed < MIN_SPEED {
        return Err(Error::DegenerateVelocity { t, speed });
    }
    let phi = (-d1.x).atan2(d1.y);
    let s = curve.point(t).dot(Vec2::from_angle(phi));
    Ok((phi, s))
}

/// The tangent line at `γ(t)` as a point of line space.
pub fn dual_point<C: PlaneCurve + ?Sized>(curve: &C, t: f64) -> Result<LineCoord> {
    let (phi, s) = raw_dual(curve, t)?;
    Ok(LineCoord::normalized(phi, s))
}

/// One sample of the dual curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualSample {
    pub t: f64,
    pub s: f64,
    pub phi: f64,
    pub kappa: f64,
    pub point: Vec2,
}

/// The curve of tangent lines, sampled uniformly in the curve parameter.
#[derive(Debug, Clone)]
pub struct DualCurve {
    samples: Vec<DualSample>,
    curve: Arc<dyn PlaneCurve>,
}

/// Samples the dual curve of `curve` at `n` uniform parameters.
pub fn dual_curve<C: PlaneCurve + Clone + 'static>(curve: &C, n: usize) -> Result<DualCurve> {
    if n < curve.min_samples() {
        return Err(Error::InsufficientSamples(format!(
            "{n} dual samples requested, at least {} needed",
            curve.min_samples()
        )));
    }
    let samples = curve
        .sample_params(n)
        .into_iter()
        .map(|t| {
            let line = dual_point(curve, t)?;
            Ok(DualSample { t, s: line.s, phi: line.phi, kappa: curve.curvature(t)?, point: curve.point(t) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualCurve { samples, curve: Arc::new(curve.clone()) })
}

/// Local shape of the dual curve near a flat point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspReport {
    pub t: f64,
    /// Fitted exponent `p` in `s ∝ z^p` on the two sides of the flat point.
    pub exponents: [f64; 2],
    pub r_squared: [f64; 2],
    pub mean_exponent: f64,
    /// Vanishing order of curvature at the flat point.
    pub flat_order: usize,
    /// `(order + 2) / (order + 1)`, the exponent for the graph `x₂ = t^(order+2)`.
    pub expected_exponent: f64,
    /// Both branches leave the tangent direction on the same side.
    pub same_side_phi: bool,
    /// The branches sit at opposite signs of `s`.
    pub opposite_s: bool,
    pub is_cusp: bool,
}

impl DualCurve {
    pub fn samples(&self) -> &[DualSample] {
        &self.samples
    }

    pub fn curve(&self) -> &dyn PlaneCurve {
        self.curve.as_ref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `(φ, s)` lifted to a continuous path by undoing chart jumps.
    pub fn lifted(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.samples.len());
        let mut offset = 0i64;
        let mut prev: Option<f64> = None;
        for smp in &self.samples {
            if let Some(p) = prev {
                let d = smp.phi - p;
                if d > FRAC_PI_2 {
                    offset -= 1;
                } else if d < -FRAC_PI_2 {
                    offset += 1;
                }
            }
            prev = Some(smp.phi);
            let sign = if offset.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            out.push((smp.phi + offset as f64 * PI, sign * smp.s));
        }
        out
    }

    /// Indices where the sampled dual polyline reverses direction.
    ///
    /// This looks only at positions, so it serves as an independent check of
    /// where the dual curve has cusps.
    pub fn reversal_points(&self) -> Vec<usize> {
        let p = self.lifted();
        let n = p.len();
        let closed = self.curve.is_closed();
        let dir = |i: usize, j: usize| -> (f64, f64) {
            let (a, b) = (p[i], p[j]);
            let mut d = (b.0 - a.0, b.1 - a.1);
            if closed {
                // the lift may be off by one sheet between the last and first sample
                let k = (d.0 / PI).round();
                if k != 0.0 {
                    d = (d.0 - k * PI, if (k as i64) % 2 == 0 { d.1 } else { -b.1 - a.1 });
                }
            }
            d
        };
        let mut out = Vec::new();
        let range = if closed { 0..n } else { 1..n.saturating_sub(1) };
        for i in range {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            let d0 = dir(prev, i);
            let d1 = dir(i, next);
            if d0.0 * d1.0 + d0.1 * d1.1 < 0.0 {
                out.push(i);
            }
        }
        out
    }

    /// Fits the exponent of the dual curve near a flat point.
    ///
    /// Coordinates are moved so that the flat point sits at the origin with
    /// its tangent line `x₂ = 0`: `s_loc = (γ(t) - γ(t₀))·θ(t)` and
    /// `z = |sin(φ(t) - φ(t₀))|`. The exponent is the log-log slope of
    /// `|s_loc|` against `z` over parameter offsets in `(window·1e-3, window]`.
    pub fn cusp_exponent_fit(&self, cusp_t: f64, window: f64) -> Result<CuspReport> {
        if !(window > 0.0) {
            return Err(Error::InvalidArgument("cusp window must be positive".into()));
        }
        let curve = self.curve.as_ref();
        for side in [1.0, -1.0] {
            let count = self
                .samples
                .iter()
                .filter(|smp| {
                    let off = signed_offset(curve, smp.t, cusp_t);
                    off.abs() <= window && off * side > 0.0
                })
                .count();
            if count < 8 {
                return Err(Error::InsufficientSamples(format!(
                    "{count} dual samples within the window on one side of t = {cusp_t}; need 8"
                )));
            }
        }

        let (phi0, _) = raw_dual(curve, cusp_t)?;
        let p0 = curve.point(cusp_t);
        let n_fit = 48;
        let mut exps = [0.0; 2];
        let mut r2 = [0.0; 2];
        let mut dphi_sign = [0.0; 2];
        let mut s_sign = [0.0; 2];
        for (b, side) in [1.0f64, -1.0].iter().enumerate() {
            let mut lx = Vec::with_capacity(n_fit);
            let mut ly = Vec::with_capacity(n_fit);
            for j in 0..n_fit {
                let h = window * 10f64.powf(-3.0 * (1.0 - j as f64 / (n_fit - 1) as f64));
                let t = cusp_t + side * h;
                let (phi, _) = raw_dual(curve, t)?;
                let dphi = (phi - phi0 + PI).rem_euclid(2.0 * PI) - PI;
                let s_loc = (curve.point(t) - p0).dot(Vec2::from_angle(phi));
                if j == n_fit / 2 {
                    dphi_sign[b] = dphi.signum();
                    s_sign[b] = s_loc.signum();
                }
                let z = dphi.sin().abs();
                if z > 0.0 && s_loc != 0.0 {
                    lx.push(z.ln());
                    ly.push(s_loc.abs().ln());
                }
            }
            let fit = fit_line(&lx, &ly).ok_or_else(|| {
                Error::InsufficientSamples("dual curve is degenerate near the flat point".into())
            })?;
            exps[b] = fit.slope;
            r2[b] = fit.r_squared;
        }
        let order = estimate_flat_order(curve, cusp_t, window / 16.0);
        let same_side_phi = dphi_sign[0] == dphi_sign[1];
        let opposite_s = s_sign[0] != s_sign[1];
        Ok(CuspReport {
            t: cusp_t,
            exponents: exps,
            r_squared: r2,
            mean_exponent: 0.5 * (exps[0] + exps[1]),
            flat_order: order,
            expected_exponent: (order as f64 + 2.0) / (order as f64 + 1.0),
            same_side_phi,
            opposite_s,
            is_cusp: same_side_phi && opposite_s,
        })
    }
}

/// `t - t0`, reduced to the shortest representative on closed curves.
fn signed_offset(curve: &dyn PlaneCurve, t: f64, t0: f64) -> f64 {
    if curve.is_closed() {
        let (a, b) = curve.domain();
        let p = b - a;
        (t - t0 + 0.5 * p).rem_euclid(p) - 0.5 * p
    } else {
        t - t0
    }
}
