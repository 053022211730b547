use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use super::vec2::Vec2;
use crate::error::{Error, Result};

/// Speeds below this are treated as a stationary parametrisation.
pub const MIN_SPEED: f64 = 1e-12;

/// A smooth planar curve with analytic derivatives.
///
/// Closed curves are parametrised over one period `[a, a + period)`; open
/// curves over a finite interval on which every quantity is well defined.
pub trait PlaneCurve: Send + Sync + std::fmt::Debug {
    /// Derivative of the given order (0 is the point itself).
    fn derivative(&self, t: f64, order: u32) -> Vec2;

    /// Parameter interval `(start, end)`.
    fn domain(&self) -> (f64, f64);

    fn is_closed(&self) -> bool;

    /// Smallest dual-curve sampling density that resolves this curve.
    fn min_samples(&self) -> usize;

    fn point(&self, t: f64) -> Vec2 {
        self.derivative(t, 0)
    }

    /// Signed curvature. Errors where the parametrisation stalls.
    fn curvature(&self, t: f64) -> Result<f64> {
        let d1 = self.derivative(t, 1);
        let speed = d1.norm();
        if speed < MIN_SPEED {
            return Err(Error::DegenerateVelocity { t, speed });
        }
        let d2 = self.derivative(t, 2);
        Ok(d1.cross(d2) / (speed * speed * speed))
    }

    /// Uniform parameter samples. Closed curves omit the endpoint.
    fn sample_params(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.domain();
        if self.is_closed() {
            (0..n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
        } else {
            (0..n)
                .map(|i| a + (b - a) * i as f64 / (n.max(2) - 1) as f64)
                .collect()
        }
    }

    /// Wraps `t` into the domain for closed curves; identity otherwise.
    fn wrap_param(&self, t: f64) -> f64 {
        if self.is_closed() {
            let (a, b) = self.domain();
            a + (t - a).rem_euclid(b - a)
        } else {
            t
        }
    }

    /// Parameter distance, measured around the loop for closed curves.
    fn param_distance(&self, t1: f64, t2: f64) -> f64 {
        let d = (t1 - t2).abs();
        if self.is_closed() {
            let (a, b) = self.domain();
            let p = b - a;
            let d = d.rem_euclid(p);
            d.min(p - d)
        } else {
            d
        }
    }
}

/// One Fourier harmonic `x += ax_cos cos(kt) + ax_sin sin(kt)` and likewise
/// for `y`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Harmonic {
    pub ax_cos: f64,
    pub ax_sin: f64,
    pub ay_cos: f64,
    pub ay_sin: f64,
}

/// Closed curve given by a truncated Fourier series on `[0, 2π)`.
///
/// `harmonics[k]` holds the coefficients of frequency `k`; index 0 is the
/// constant offset (its sine entries are ignored).
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCurve {
    harmonics: Vec<Harmonic>,
}

impl ParamCurve {
    pub fn new(harmonics: Vec<Harmonic>) -> Result<Self> {
        if harmonics.is_empty() {
            return Err(Error::InvalidArgument("curve has no harmonics".into()));
        }
        for (k, h) in harmonics.iter().enumerate() {
            if ![h.ax_cos, h.ax_sin, h.ay_cos, h.ay_sin].iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidArgument(format!("non-finite coefficient in harmonic {k}")));
            }
        }
        let mut harmonics = harmonics;
        harmonics[0].ax_sin = 0.0;
        harmonics[0].ay_sin = 0.0;
        Ok(Self { harmonics })
    }

    /// Builds a curve from four coefficient arrays indexed by frequency.
    pub fn from_coefficients(cos_x: &[f64], sin_x: &[f64], cos_y: &[f64], sin_y: &[f64]) -> Result<Self> {
        let n = cos_x.len().max(sin_x.len()).max(cos_y.len()).max(sin_y.len());
        let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        let harmonics = (0..n)
            .map(|k| Harmonic {
                ax_cos: get(cos_x, k),
                ax_sin: get(sin_x, k),
                ay_cos: get(cos_y, k),
                ay_sin: get(sin_y, k),
            })
            .collect();
        Self::new(harmonics)
    }

    pub fn circle(radius: f64) -> Self {
        Self::ellipse(radius, radius)
    }

    /// Axis-aligned ellipse `(a cos t, b sin t)`.
    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::from_coefficients(&[0.0, a], &[], &[], &[0.0, b]).expect("finite coefficients")
    }

    /// Star-shaped curve with radius `r(θ) = Σ c_k cos(kθ)`.
    pub fn from_polar_cosines(c: &[f64]) -> Result<Self> {
        let n = c.len() + 1;
        let mut cx = vec![0.0; n];
        let mut sy = vec![0.0; n];
        for (k, &ck) in c.iter().enumerate() {
            // cos(kθ)cos(θ) and cos(kθ)sin(θ) as sums of single harmonics
            cx[k + 1] += 0.5 * ck;
            sy[k + 1] += 0.5 * ck;
            if k == 0 {
                cx[1] += 0.5 * ck;
                sy[1] += 0.5 * ck;
            } else {
                cx[k - 1] += 0.5 * ck;
                sy[k - 1] -= 0.5 * ck;
            }
        }
        Self::from_coefficients(&cx, &[], &[], &sy)
    }

    /// A kidney-shaped domain with one shallow concavity: exactly two
    /// inflection points and one bitangent.
    pub fn kidney() -> Self {
        Self::from_polar_cosines(&[1.0, 0.15, -0.35, -0.15]).expect("finite coefficients")
    }

    /// The bean `(cos t, sin t + 0.45 sin 2t)`.
    pub fn bean() -> Self {
        Self::from_coefficients(&[0.0, 1.0], &[], &[], &[0.0, 1.0, 0.45]).expect("finite coefficients")
    }

    /// Fourier coefficients of a loop sampled at `t_j = 2πj/n`, truncated to
    /// `max_harmonic`. Exact for trigonometric polynomials when
    /// `n > 2 * max_harmonic`.
    pub fn fit_samples(points: &[Vec2], max_harmonic: usize) -> Result<Self> {
        let n = points.len();
        if n <= 2 * max_harmonic {
            return Err(Error::InsufficientSamples(format!(
                "{n} samples cannot resolve harmonic {max_harmonic}"
            )));
        }
        let nf = n as f64;
        let harmonics = (0..=max_harmonic)
            .map(|k| {
                let w = if k == 0 { 1.0 / nf } else { 2.0 / nf };
                let mut h = Harmonic::default();
                for (j, p) in points.iter().enumerate() {
                    let (s, c) = (k as f64 * TAU * j as f64 / nf).sin_cos();
                    h.ax_cos += w * p.x * c;
                    h.ax_sin += w * p.x * s;
                    h.ay_cos += w * p.y * c;
                    h.ay_sin += w * p.y * s;
                }
                h
            })
            .collect();
        Self::new(harmonics)
    }

    /// Point and velocity together, sharing the trigonometric evaluations.
    pub fn point_velocity(&self, t: f64) -> (Vec2, Vec2) {
        let h0 = &self.harmonics[0];
        let mut p = Vec2::new(h0.ax_cos, h0.ay_cos);
        let mut v = Vec2::default();
        for (k, h) in self.harmonics.iter().enumerate().skip(1) {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            p = p + Vec2::new(h.ax_cos * c + h.ax_sin * s, h.ay_cos * c + h.ay_sin * s);
            v = v + Vec2::new(h.ax_sin * c - h.ax_cos * s, h.ay_sin * c - h.ay_cos * s) * kf;
        }
        (p, v)
    }

    pub fn harmonics(&self) -> &[Harmonic] {
        &self.harmonics
    }

    pub fn max_harmonic(&self) -> usize {
        self.harmonics.len() - 1
    }

    /// Copy scaled about the origin and then shifted.
    pub fn transformed(&self, scale: f64, shift: Vec2) -> Self {
        let mut h: Vec<Harmonic> = self
            .harmonics
            .iter()
            .map(|h| Harmonic {
                ax_cos: h.ax_cos * scale,
                ax_sin: h.ax_sin * scale,
                ay_cos: h.ay_cos * scale,
                ay_sin: h.ay_sin * scale,
            })
            .collect();
        h[0].ax_cos += shift.x;
        h[0].ay_cos += shift.y;
        Self { harmonics: h }
    }

    /// Smallest speed over `n` uniform samples; errors if it vanishes.
    pub fn check_regular(&self, n: usize) -> Result<f64> {
        let mut min = f64::INFINITY;
        for t in self.sample_params(n) {
            let speed = self.derivative(t, 1).norm();
            if speed < MIN_SPEED {
                return Err(Error::DegenerateVelocity { t, speed });
            }
            min = min.min(speed);
        }
        Ok(min)
    }

    /// Whether the sampled polygon with `n` vertices has no self-crossings.
    pub fn is_simple(&self, n: usize) -> bool {
        let pts: Vec<Vec2> = self.sample_params(n).into_iter().map(|t| self.point(t)).collect();
        for i in 0..n {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = (pts[j], pts[(j + 1) % n]);
                if segments_cross(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Parses the plain-text curve format: one `harmonic k: ax_cos ax_sin
    /// ay_cos ay_sin` line per frequency, `#` comments, blank lines allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, Harmonic)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            let rest = line
                .strip_prefix("harmonic")
                .ok_or_else(|| perr(format!("expected `harmonic k: ...`, found `{line}`")))?;
            let (k_str, coeffs) = rest
                .split_once(':')
                .ok_or_else(|| perr("missing `:` after harmonic index".into()))?;
            let k: usize = k_str
                .trim()
                .parse()
                .map_err(|_| perr(format!("bad harmonic index `{}`", k_str.trim())))?;
            let vals: Vec<f64> = coeffs
                .split_whitespace()
                .map(|s| s.parse::<f64>().map_err(|_| perr(format!("bad number `{s}`"))))
                .collect::<Result<_>>()?;
            if vals.len() != 4 {
                return Err(perr(format!("expected 4 coefficients, found {}", vals.len())));
            }
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(perr("non-finite coefficient".into()));
            }
            if entries.iter().any(|(kk, _)| *kk == k) {
                return Err(perr(format!("harmonic {k} listed twice")));
            }
            entries.push((
                k,
                Harmonic { ax_cos: vals[0], ax_sin: vals[1], ay_cos: vals[2], ay_sin: vals[3] },
            ));
        }
        let max_k = entries
            .iter()
            .map(|(k, _)| *k)
            .max()
            .ok_or(Error::Parse { line: 0, msg: "no harmonics found".into() })?;
        let mut harmonics = vec![Harmonic::default(); max_k + 1];
        for (k, h) in entries {
            harmonics[k] = h;
        }
        Self::new(harmonics)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, h) in self.harmonics.iter().enumerate() {
            let _ = writeln!(s, "harmonic {k}: {:e} {:e} {:e} {:e}", h.ax_cos, h.ax_sin, h.ay_cos, h.ay_sin);
        }
        s
    }
}

impl PlaneCurve for ParamCurve {
    fn derivative(&self, t: f64, order: u32) -> Vec2 {
        let mut out = Vec2::default();
        for (k, h) in self.harmonics.iter().enumerate() {
            if k == 0 {
                if order == 0 {
                    out = out + Vec2::new(h.ax_cos, h.ay_cos);
                }
                continue;
            }
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            // d^n/dt^n of (cos, sin) cycles with period four
            let (dc, ds) = match order % 4 {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            let scale = kf.powi(order as i32);
            out = out
                + Vec2::new(h.ax_cos * dc + h.ax_sin * ds, h.ay_cos * dc + h.ay_sin * ds) * scale;
        }
        out
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, TAU)
    }

    fn is_closed(&self) -> bool {
        true
    }

    fn min_samples(&self) -> usize {
        16 * self.max_harmonic().max(1)
    }
}

/// Open graph `t ↦ (t, p(t))` of a polynomial, used as a local model near a
/// flat point.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphCurve {
    /// `coeffs[k]` multiplies `t^k`.
    coeffs: Vec<f64>,
    domain: (f64, f64),
}

impl GraphCurve {
    pub fn new(coeffs: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        if !(domain.0 < domain.1) {
            return Err(Error::InvalidArgument("empty parameter interval".into()));
        }
        Ok(Self { coeffs, domain })
    }

    /// The monomial graph `x2 = t^m` on `[-half_width, half_width]`.
    pub fn monomial(m: usize, half_width: f64) -> Self {
        let mut c = vec![0.0; m + 1];
        c[m] = 1.0;
        Self { coeffs: c, domain: (-half_width, half_width) }
    }

    fn poly_derivative(&self, t: f64, order: u32) -> f64 {
        let mut acc = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if (k as u32) < order {
                break;
            }
            let falling: f64 = (0..order).map(|j| (k as u32 - j) as f64).product();
            acc += c * falling * t.powi((k as u32 - order) as i32);
        }
        acc
    }
}

impl PlaneCurve for GraphCurve {
    fn derivative(&self, t: f64, order: u32) -> Vec2 {
        let x = match order {
            0 => t,
            1 => 1.0,
            _ => 0.0,
        };
        Vec2::new(x, self.poly_derivative(t, order))
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn is_closed(&self) -> bool {
        false
    }

    fn min_samples(&self) -> usize {
        16 * self.coeffs.len().max(2)
    }
}

/// Proper crossing test for two segments (shared endpoints do not count).
pub(crate) fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn circle_curvature_is_inverse_radius() {
        let c = ParamCurve::circle(2.0);
        for i in 0..16 {
            let k = c.curvature(i as f64 * 0.4).unwrap();
            assert!((k - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn ellipse_curvature_at_vertex() {
        let c = ParamCurve::ellipse(2.0, 1.0);
        assert!((c.curvature(0.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((c.curvature(std::f64::consts::FRAC_PI_2).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn stationary_point_is_reported() {
        // cardioid-like curve (2cos t - cos 2t, 2sin t - sin 2t), stationary at t = 0
        let c = ParamCurve::from_coefficients(&[0.0, 2.0, -1.0], &[], &[], &[0.0, 2.0, -1.0]).unwrap();
        assert!(matches!(c.curvature(0.0), Err(Error::DegenerateVelocity { .. })));
    }

    #[test]
    fn polar_expansion_matches_direct_evaluation() {
        let c = [1.0, 0.15, -0.35, -0.15];
        let curve = ParamCurve::from_polar_cosines(&c).unwrap();
        for i in 0..50 {
            let th = i as f64 * 0.13;
            let r: f64 = c.iter().enumerate().map(|(k, ck)| ck * (k as f64 * th).cos()).sum();
            let p = curve.point(th);
            assert!((p.x - r * th.cos()).abs() < 1e-14);
            assert!((p.y - r * th.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn kidney_is_simple_and_regular() {
        let k = ParamCurve::kidney();
        assert!(k.is_simple(1024));
        assert!(k.check_regular(4096).unwrap() > 0.1);
    }

    #[test]
    fn bean_self_intersection_is_detected() {
        // a figure-eight is not simple
        let fig8 = ParamCurve::from_coefficients(&[0.0, 1.0], &[], &[], &[0.0, 0.0, 0.5]).unwrap();
        assert!(!fig8.is_simple(512));
        assert!(ParamCurve::circle(1.0).is_simple(512));
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let k = ParamCurve::kidney();
        let back = ParamCurve::parse(&k.to_text()).unwrap();
        assert_eq!(k, back);

        let text = "# comment\nharmonic 1: 1 0 0 0\n\nharmonic 1: 0 0 0 1\n";
        match ParamCurve::parse(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        match ParamCurve::parse("harmonic 2: 1 2 three 4") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(ParamCurve::parse("\n# nothing\n").is_err());
    }

    #[test]
    fn graph_curve_derivatives() {
        let g = GraphCurve::monomial(3, 1.0);
        assert_eq!(g.derivative(0.5, 0), Vec2::new(0.5, 0.125));
        assert_eq!(g.derivative(0.5, 1), Vec2::new(1.0, 0.75));
        assert_eq!(g.derivative(0.5, 2), Vec2::new(0.0, 3.0));
        assert_eq!(g.derivative(0.5, 3), Vec2::new(0.0, 6.0));
        assert_eq!(g.derivative(0.5, 4), Vec2::new(0.0, 0.0));
    }

    fn finite_difference(c: &ParamCurve, t: f64, order: u32) -> Vec2 {
        let h = 1e-5;
        let f = |s: f64| c.derivative(s, order - 1);
        (f(t + h) - f(t - h)) * (0.5 / h)
    }

    proptest! {
        #[test]
        fn derivatives_agree_with_finite_differences(
            coeffs in proptest::collection::vec(-1.0f64..1.0, 12),
            t in 0.0f64..TAU,
        ) {
            let c = ParamCurve::from_coefficients(&coeffs[0..3], &coeffs[3..6], &coeffs[6..9], &coeffs[9..12]).unwrap();
            for order in 1..=3 {
                let fd = finite_difference(&c, t, order);
                let an = c.derivative(t, order);
                prop_assert!((fd - an).norm() < 1e-7 * (1.0 + an.norm()));
            }
        }

        #[test]
        fn curvature_is_invariant_under_rigid_scaling(
            t in 0.0f64..TAU,
            scale in 0.2f64..5.0,
            dx in -3.0f64..3.0,
            dy in -3.0f64..3.0,
        ) {
            let k = ParamCurve::kidney();
            let moved = k.transformed(scale, Vec2::new(dx, dy));
            let a = k.curvature(t).unwrap();
            let b = moved.curvature(t).unwrap();
            prop_assert!((a - scale * b).abs() < 1e-10 * (1.0 + a.abs()));
        }
    }
}
