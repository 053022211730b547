//! Pointwise nonlinearities acting on measured line integrals.
//!
//! With a linear attenuation spectrum on `[E₀ - ε, E₀ + ε]` the measured
//! projection of `f_E = f_{E₀} + α(E - E₀)χ_D` is
//! `ℛf_{E₀} - ln(sinh(εℛf_D) / (εℛf_D))`, so the metal contributes
//! `F(ℛχ_D)` with `F(x) = -ln(sinh(εαx)/(εαx))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::Sinogram;

/// `-ln(sinh(y)/y)` for `y = ε·x`, accurate for all `y`.
///
/// Small arguments use the series `-(y²/6 - y⁴/180 + y⁶/2835)`; large ones
/// use `ln(sinh y / y) = |y| - ln 2 + ln(1 - e^{-2|y|}) - ln|y|` to avoid
/// overflow.
pub fn beam_hardening(x: f64, eps: f64) -> f64 {
    let y = (eps * x).abs();
    if y < 1e-3 {
        let y2 = y * y;
        return -(y2 / 6.0 - y2 * y2 / 180.0 + y2 * y2 * y2 / 2835.0);
    }
    if y > 20.0 {
        return -(y - std::f64::consts::LN_2 + (-(-2.0 * y).exp()).ln_1p() - y.ln());
    }
    -(y.sinh() / y).ln()
}

/// Shape of the nonlinearity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Variant {
    /// `F(u) = -ln(sinh(εu)/(εu))`.
    BeamHardening,
    /// `F(u) = a u²`.
    Quadratic { a: f64 },
    /// Piecewise-linear interpolation of tabulated `(u, F(u))` pairs.
    Table { points: Vec<(f64, f64)> },
}

/// The metal region's contrast together with the nonlinearity that turns
/// its projection `u = αℛχ_D` into the artifact sinogram `F(u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamModel {
    /// Energy half-width of the spectrum.
    pub eps: f64,
    /// Attenuation contrast of the metal.
    pub alpha: f64,
    pub variant: Variant,
}

impl BeamModel {
    pub fn new(eps: f64, alpha: f64, variant: Variant) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("spectral half-width must be positive, got {eps}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("metal contrast must be positive, got {alpha}")));
        }
        if let Variant::Table { points } = &variant {
            if points.len() < 2 {
                return Err(Error::InvalidArgument("table needs at least two points".into()));
            }
            if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                return Err(Error::InvalidArgument("table abscissae must increase strictly".into()));
            }
        }
        Ok(Self { eps, alpha, variant })
    }

    pub fn beam_hardening(eps: f64, alpha: f64) -> Result<Self> {
        Self::new(eps, alpha, Variant::BeamHardening)
    }

    pub fn quadratic(a: f64, alpha: f64) -> Result<Self> {
        Self::new(1.0, alpha, Variant::Quadratic { a })
    }

    /// Table with strictly increasing abscissae.
    pub fn table(points: Vec<(f64, f64)>, alpha: f64) -> Result<Self> {
        Self::new(1.0, alpha, Variant::Table { points })
    }

    /// `F(u)`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        match &self.variant {
            Variant::BeamHardening => Ok(beam_hardening(u, self.eps)),
            Variant::Quadratic { a } => Ok(a * u * u),
            Variant::Table { points } => {
                let (lo, hi) = (points[0].0, points[points.len() - 1].0);
                if !(u >= lo && u <= hi) {
                    return Err(Error::TableRange { x: u, lo, hi });
                }
                let k = points.partition_point(|p| p.0 <= u).clamp(1, points.len() - 1);
                let (a, b) = (points[k - 1], points[k]);
                let w = (u - a.0) / (b.0 - a.0);
                Ok(a.1 + w * (b.1 - a.1))
            }
        }
    }

}

/// Maps every sinogram value through `F`. Pointwise maps commute with the
/// extension rule `g(-s, φ + π) = g(s, φ)`.
pub fn apply_pointwise(sino: &Sinogram, model: &BeamModel) -> Result<Sinogram> {
    let values = sino.values.iter().map(|&u| model.eval(u)).collect::<Result<Vec<_>>>()?;
    Ok(Sinogram { grid: sino.grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::SinogramGrid;
    use proptest::prelude::*;

    #[test]
    fn reference_values() {
        assert_eq!(beam_hardening(0.0, 1.0), 0.0);
        assert!((beam_hardening(0.1, 1.0) - (-1.6661e-3)).abs() < 1e-7);
        let direct = -(2.0f64.sinh() / 2.0).ln();
        assert!((beam_hardening(2.0, 1.0) - direct).abs() < 1e-14);
        // no overflow far out, and the asymptote |y| - ln(2|y|)
        let big = beam_hardening(1e3, 1.0);
        assert!((big + 1e3 - (2e3f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn branches_meet() {
        // the closed form loses about nine digits to cancellation at 1e-3
        for (y, rel) in [(1e-3f64, 1e-8), (20.0, 1e-14)] {
            let closed = -(y.sinh() / y).ln();
            let y2 = y * y;
            let other = if y < 1.0 {
                -(y2 / 6.0 - y2 * y2 / 180.0 + y2 * y2 * y2 / 2835.0)
            } else {
                -(y - std::f64::consts::LN_2 + (-(-2.0 * y).exp()).ln_1p() - y.ln())
            };
            assert!((closed - other).abs() < rel * closed.abs(), "{y}: {closed} {other}");
        }
        // series against the closed form just above its switch
        let y: f64 = 1.5e-3;
        let series = -(y * y / 6.0 - y.powi(4) / 180.0 + y.powi(6) / 2835.0);
        assert!((beam_hardening(y, 1.0) - series).abs() < 1e-15);
    }

    #[test]
    fn table_model() {
        let m = BeamModel::table(vec![(0.0, 0.0), (1.0, -1.0), (3.0, -2.0)], 1.0).unwrap();
        assert_eq!(m.eval(0.5).unwrap(), -0.5);
        assert_eq!(m.eval(2.0).unwrap(), -1.5);
        assert_eq!(m.eval(3.0).unwrap(), -2.0);
        assert!(matches!(m.eval(3.5), Err(Error::TableRange { .. })));
        assert!(BeamModel::table(vec![(0.0, 0.0), (0.0, 1.0)], 1.0).is_err());
    }

    #[test]
    fn pointwise_application() {
        let grid = SinogramGrid::new(5, 3, 1.0).unwrap();
        let two = Sinogram::from_fn(grid, |_, _| 2.0);
        let out = apply_pointwise(&two, &BeamModel::quadratic(1.0, 1.0).unwrap()).unwrap();
        assert!(out.values.iter().all(|&v| v == 4.0));
        let zero = Sinogram::zeros(grid);
        let out = apply_pointwise(&zero, &BeamModel::beam_hardening(0.5, 1.0).unwrap()).unwrap();
        assert!(out.values.iter().all(|&v| v == 0.0));
        let g = Sinogram::from_fn(grid, |s, _| 1.0 - s * s);
        let out = apply_pointwise(&g, &BeamModel::quadratic(0.0, 2.0).unwrap()).unwrap();
        assert!(out.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn model_validation() {
        assert!(BeamModel::beam_hardening(0.0, 1.0).is_err());
        assert!(BeamModel::beam_hardening(1.0, -1.0).is_err());
        let m = BeamModel::beam_hardening(0.5, 1.0).unwrap();
        let text = toml::to_string(&m).unwrap();
        assert_eq!(toml::from_str::<BeamModel>(&text).unwrap(), m);
    }

    proptest! {
        #[test]
        fn even_and_nonpositive(x in -1e4f64..1e4, eps in 1e-4f64..10.0) {
            let f = beam_hardening(x, eps);
            prop_assert!(f <= 0.0);
            prop_assert_eq!(f, beam_hardening(-x, eps));
            prop_assert!(f.is_finite());
        }

        #[test]
        fn quadratic_germ(y in -0.5f64..0.5) {
            let f = beam_hardening(y, 1.0);
            prop_assert!((f + y * y / 6.0).abs() <= y.powi(4) / 150.0 + 1e-300);
        }

        #[test]
        fn decreasing_in_magnitude(a in 0.0f64..50.0, b in 0.0f64..50.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(beam_hardening(hi, 1.0) <= beam_hardening(lo, 1.0));
        }
    }
}
