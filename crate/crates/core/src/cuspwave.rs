//! Squares of a distribution conormal to the cusp `{(x₁/2)² = (x₂/3)³}`.
//!
//! The model field is the oscillatory integral
//! `v(x) = (2π)⁻² ∫ e^{i(x·ξ - H(ξ))} b(ξ) dξ` with `H(ξ) = ξ₂³/ξ₁²` and
//! `b(ξ) = χ(ξ₁) f(ξ₂/ξ₁) |ξ|^{-ρ}`. Its square acquires a singularity at the
//! origin in the directions `(ε, 1)`, visible as the power law
//! `|𝓕(v²)(εξ₂, ξ₂)| ~ |ξ₂|^{-3ρ+5/2}`.
//!
//! Everything is computed on a periodic frequency lattice with spacing
//! `1/freq_scale`. The symbol is tapered to zero outside `|k|∞ < n/4`, so
//! `v²` is band-limited to `|k|∞ < n/2` and its discrete spectrum carries no
//! circular wraparound. This plays the role of zero padding without doubling
//! the grid.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft::{fft2_inplace, signed_index};
use crate::numeric::fit_line;

/// Relative size allowed for the symbol on the outer lattice ring.
pub const ALIASING_LIMIT: f64 = 1e-6;

/// Start of the band-edge taper, as a fraction of the band `n/4`.
pub const TAPER_START: f64 = 0.75;

/// Samples taken along a ray when fitting a decay slope.
pub const RAY_SAMPLES: usize = 64;

/// Lattice steps per unit frequency.
pub const DEFAULT_FREQ_SCALE: f64 = 4.0;

/// Ray tilt `ε` in `(εξ₂, ξ₂)`.
pub const DEFAULT_EPSILON: f64 = 0.08;

/// One decade of `ξ₂`, starting three cutoff radii out.
pub const DEFAULT_WINDOW: (f64, f64) = (6.0, 60.0);

/// A ray `(2ξ₂, ξ₂)` inside the frequency cone of `v` but away from the new
/// singularity; it follows the ordinary conormal decay.
pub const CONTROL_EPSILON: f64 = 2.0;

/// Shape of the profile in the slope variable `u = (ξ₂/ξ₁)/w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeProfile {
    /// `exp(1 - 1/(1 - u²))`, smooth to all orders at `|u| = 1`.
    #[default]
    Bump,
    /// `cos²(πu/2)`.
    CosineSquared,
}

/// Parameters of the symbol `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct CuspSymbol {
    pub rho: f64,
    /// `χ` vanishes for `|ξ₁| < r0` and equals 1 for `|ξ₁| > r1`.
    pub r0: f64,
    pub r1: f64,
    /// Half-width of the profile in the slope variable.
    pub half_width: f64,
    pub profile: SlopeProfile,
}

impl Default for CuspSymbol {
    fn default() -> Self {
        Self { rho: 3.0, r0: 1.0, r1: 2.0, half_width: 2.0, profile: SlopeProfile::Bump }
    }
}

/// `0` for `t ≤ 0`, `1` for `t ≥ 1`, smooth in between.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

impl CuspSymbol {
    pub fn with_rho(rho: f64) -> Self {
        Self { rho, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 2.0) {
            return Err(Error::InvalidArgument(format!("rho must exceed 2, got {}", self.rho)));
        }
        if !(self.r0 > 0.0 && self.r0 < self.r1) {
            return Err(Error::InvalidArgument(format!("need 0 < r0 < r1, got {} and {}", self.r0, self.r1)));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidArgument(format!("profile half-width must be positive, got {}", self.half_width)));
        }
        Ok(())
    }

    pub fn cutoff(&self, xi1: f64) -> f64 {
        smooth_step((xi1.abs() - self.r0) / (self.r1 - self.r0))
    }

    /// Profile value at slope `ξ₂/ξ₁`; equals 1 at slope 0.
    pub fn profile(&self, slope: f64) -> f64 {
        let u = slope / self.half_width;
        if u.abs() >= 1.0 {
            return 0.0;
        }
        match self.profile {
            SlopeProfile::Bump => (1.0 - 1.0 / (1.0 - u * u)).exp(),
            SlopeProfile::CosineSquared => (0.5 * PI * u).cos().powi(2),
        }
    }

    /// `b(ξ)`.
    pub fn amplitude(&self, xi1: f64, xi2: f64) -> f64 {
        let c = self.cutoff(xi1);
        if c == 0.0 {
            return 0.0;
        }
        let f = self.profile(xi2 / xi1);
        if f == 0.0 {
            return 0.0;
        }
        c * f * (xi1 * xi1 + xi2 * xi2).powf(-0.5 * self.rho)
    }

    /// `H(ξ) = ξ₂³/ξ₁²`.
    pub fn phase(xi1: f64, xi2: f64) -> f64 {
        xi2 * xi2 * xi2 / (xi1 * xi1)
    }

    /// Exponent of the predicted decay law, `-3ρ + 5/2`.
    pub fn expected_slope(&self) -> f64 {
        -3.0 * self.rho + 2.5
    }
}

/// A complex field on the periodic `n × n` lattice, stored as
/// `values[j * n + i]` with `i` along the first coordinate.
///
/// In space the spacing is `dx = 2π freq_scale / n` and index `i` sits at
/// `signed_index(i)·dx`; in frequency bin `k` sits at
/// `signed_index(k)/freq_scale`.
#[derive(Debug, Clone)]
pub struct CuspField {
    pub n: usize,
    pub freq_scale: f64,
    pub values: Vec<Complex64>,
}

impl CuspField {
    pub fn dx(&self) -> f64 {
        TAU * self.freq_scale / self.n as f64
    }

    pub fn dxi(&self) -> f64 {
        1.0 / self.freq_scale
    }

    /// Spatial coordinate of lattice index `i`.
    pub fn coord(&self, i: usize) -> f64 {
        signed_index(i, self.n) as f64 * self.dx()
    }

    /// Lattice index nearest to the spatial coordinate `x`.
    pub fn index_of(&self, x: f64) -> usize {
        let k = (x / self.dx()).round() as i64;
        k.rem_euclid(self.n as i64) as usize
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.n + i]
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.par_iter().map(|z| z.norm()).reduce(|| 0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.par_iter().map(|z| z.im.abs()).reduce(|| 0.0, f64::max)
    }

    /// `Σ|v|² dx²`.
    pub fn l2_squared(&self) -> f64 {
        let dx = self.dx();
        let parts: Vec<f64> = self.values.par_chunks(self.n).map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect();
        crate::numeric::pairwise_sum(&parts) * dx * dx
    }
}

/// `𝓕(v²)` sampled on the frequency lattice, with the continuum
/// normalisation `Σ_x v(x)² e^{-ix·ξ} dx²`.
#[derive(Debug, Clone)]
pub struct SquaredSpectrum {
    pub n: usize,
    pub freq_scale: f64,
    pub values: Vec<Complex64>,
}

impl SquaredSpectrum {
    /// `(2π)⁻² Σ|𝓕(v²)|² dξ²`, which equals `‖v²‖²` by Parseval.
    pub fn l2_squared(&self) -> f64 {
        let dxi = 1.0 / self.freq_scale;
        let parts: Vec<f64> = self.values.par_chunks(self.n).map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect();
        crate::numeric::pairwise_sum(&parts) * dxi * dxi / (TAU * TAU)
    }

    /// Bilinear interpolation of `|𝓕(v²)|` at the continuum frequency `ξ`.
    pub fn abs_at(&self, xi1: f64, xi2: f64) -> f64 {
        let n = self.n as i64;
        let (f1, f2) = (xi1 * self.freq_scale, xi2 * self.freq_scale);
        let (i0, j0) = (f1.floor(), f2.floor());
        let (a, b) = (f1 - i0, f2 - j0);
        let at = |i: i64, j: i64| self.values[(j.rem_euclid(n) * n + i.rem_euclid(n)) as usize].norm();
        let (i0, j0) = (i0 as i64, j0 as i64);
        (1.0 - b) * ((1.0 - a) * at(i0, j0) + a * at(i0 + 1, j0)) + b * ((1.0 - a) * at(i0, j0 + 1) + a * at(i0 + 1, j0 + 1))
    }

    /// Largest frequency (continuum units) resolved without wraparound.
    pub fn nyquist(&self) -> f64 {
        0.5 * self.n as f64 / self.freq_scale
    }
}

/// Synthesises `v` on an `n × n` lattice.
///
/// `freq_scale` is the number of lattice steps per unit frequency; with the
/// default cutoff `r1 = 2` a scale of 4 puts the cutoff at 8 lattice units.
pub fn synth_cusp_conormal(sym: &CuspSymbol, n: usize, freq_scale: f64) -> Result<CuspField> {
    sym.validate()?;
    if n < 2048 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("grid size must be a power of two ≥ 2048, got {n}")));
    }
    let band = n as f64 / 4.0;
    if !(freq_scale > 0.0) || band / freq_scale <= 2.0 * sym.r1 {
        return Err(Error::InvalidArgument(format!(
            "frequency scale {freq_scale} leaves no room above the cutoff on a {n}-point lattice"
        )));
    }
    let taper_width = (1.0 - TAPER_START) * band;
    let mut values = vec![Complex64::default(); n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        let k2 = signed_index(j, n) as f64;
        let xi2 = k2 / freq_scale;
        for (i, out) in row.iter_mut().enumerate() {
            let k1 = signed_index(i, n) as f64;
            let edge = k1.abs().max(k2.abs());
            let taper = 1.0 - smooth_step((edge - TAPER_START * band) / taper_width);
            if taper == 0.0 {
                continue;
            }
            let xi1 = k1 / freq_scale;
            let b = sym.amplitude(xi1, xi2);
            if b == 0.0 {
                continue;
            }
            *out = Complex64::from_polar(b * taper, -CuspSymbol::phase(xi1, xi2));
        }
    });
    // everything on the outermost admissible ring must already be negligible
    let peak = values.par_iter().map(|z| z.norm()).reduce(|| 0.0, f64::max);
    let ring = (band as usize).saturating_sub(1);
    let edge_max = values
        .par_chunks(n)
        .enumerate()
        .map(|(j, row)| {
            let k2 = signed_index(j, n).unsigned_abs() as usize;
            row.iter()
                .enumerate()
                .filter(|(i, _)| k2.max(signed_index(*i, n).unsigned_abs() as usize) >= ring)
                .map(|(_, z)| z.norm())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    if edge_max > ALIASING_LIMIT * peak {
        return Err(Error::Aliasing { ratio: edge_max / peak, limit: ALIASING_LIMIT });
    }
    fft2_inplace(&mut values, n, true);
    let norm = (1.0 / freq_scale).powi(2) / (TAU * TAU);
    values.par_iter_mut().for_each(|z| *z *= norm);
    Ok(CuspField { n, freq_scale, values })
}

/// A Gaussian spatial window `exp(-|x - c|²/(2σ²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub center: (f64, f64),
    pub sigma: f64,
}

fn spectrum_of(v: &CuspField, window: Option<Window>) -> SquaredSpectrum {
    let n = v.n;
    let dx = v.dx();
    let mut u: Vec<Complex64> = v.values.par_iter().map(|z| z * z).collect();
    if let Some(w) = window {
        let coords: Vec<f64> = (0..n).map(|i| v.coord(i)).collect();
        // periodic distance so windows near the seam stay whole
        let period = dx * n as f64;
        let wrap = |d: f64| d - period * (d / period).round();
        let inv = 0.5 / (w.sigma * w.sigma);
        let g1: Vec<f64> = coords.iter().map(|&x| (-wrap(x - w.center.0).powi(2) * inv).exp()).collect();
        u.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            let g2 = (-wrap(coords[j] - w.center.1).powi(2) * inv).exp();
            for (z, g) in row.iter_mut().zip(&g1) {
                *z *= g * g2;
            }
        });
    }
    fft2_inplace(&mut u, n, false);
    let area = dx * dx;
    u.par_iter_mut().for_each(|z| *z *= area);
    SquaredSpectrum { n, freq_scale: v.freq_scale, values: u }
}

/// `𝓕(v²)`.
pub fn squared_spectrum(v: &CuspField) -> SquaredSpectrum {
    spectrum_of(v, None)
}

/// `𝓕(w·v²)` for a Gaussian window `w`.
pub fn windowed_squared_spectrum(v: &CuspField, window: Window) -> SquaredSpectrum {
    spectrum_of(v, Some(window))
}

/// Power-law fit of `|𝓕(v²)|` along a ray.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    /// Ray direction `(ε, 1)`; `epsilon` is the first component.
    pub epsilon: f64,
    pub fitted_slope: f64,
    pub expected_slope: f64,
    pub fit_window: (f64, f64),
    pub r_squared: f64,
    /// `(ξ₂, |𝓕(v²)(εξ₂, ξ₂)|)` pairs used in the fit.
    pub samples: Vec<(f64, f64)>,
}

impl DecayReport {
    pub fn to_text(&self) -> String {
        format!(
            "epsilon = {}\nfitted_slope = {:.6}\nexpected_slope = {:.6}\nfit_window = [{}, {}]\nr_squared = {:.6}\n",
            self.epsilon, self.fitted_slope, self.expected_slope, self.fit_window.0, self.fit_window.1, self.r_squared
        )
    }

    pub fn samples_csv(&self) -> String {
        let mut out = String::from("xi2,abs_f2,log_xi2,log_abs_f2\n");
        for &(x, y) in &self.samples {
            out.push_str(&format!("{x},{y},{},{}\n", x.ln(), y.ln()));
        }
        out
    }
}

/// Least-squares slope of `log|𝓕(v²)|` against `log ξ₂` along
/// `(ε ξ₂, ξ₂)`, `ξ₂ ∈ window`, sampled at [`RAY_SAMPLES`] geometrically
/// spaced points.
///
/// `expected_slope` is filled with `NaN`; callers that know `ρ` overwrite
/// it.
pub fn decay_slope(f2: &SquaredSpectrum, epsilon: f64, window: (f64, f64)) -> Result<DecayReport> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi >= 2.0 * lo) {
        return Err(Error::WindowTooSmall(format!("fit window [{lo}, {hi}] spans less than one octave")));
    }
    // both ends of the ray must stay clear of wraparound
    let reach = hi * (1.0 + epsilon * epsilon).sqrt();
    if reach > 0.25 * f2.nyquist() {
        return Err(Error::InvalidArgument(format!(
            "fit window reaches {reach:.3}, beyond a quarter of the Nyquist frequency {:.3}",
            f2.nyquist()
        )));
    }
    let samples: Vec<(f64, f64)> = (0..RAY_SAMPLES)
        .map(|k| {
            let xi2 = lo * (hi / lo).powf(k as f64 / (RAY_SAMPLES - 1) as f64);
            (xi2, f2.abs_at(epsilon * xi2, xi2))
        })
        .collect();
    if samples.iter().any(|s| !(s.1 > 0.0)) {
        return Err(Error::Numerical("spectrum vanishes on the fit window".into()));
    }
    let lx: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ly: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let fit = fit_line(&lx, &ly).ok_or_else(|| Error::Numerical("degenerate decay fit".into()))?;
    Ok(DecayReport {
        epsilon,
        fitted_slope: fit.slope,
        expected_slope: f64::NAN,
        fit_window: window,
        r_squared: fit.r_squared,
        samples,
    })
}

/// Outcome of the localisation test for the singularity of `v²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefrontCheck {
    pub origin: DecayReport,
    pub far: DecayReport,
    pub origin_window: Window,
    pub far_window: Window,
    /// Allowed deviation of the origin slope from the prediction.
    pub tolerance: f64,
    /// Required extra steepness of the far-window slope.
    pub margin: f64,
    pub passed: bool,
}

/// Windowed Fourier test of `(0, (ε, 1)) ∈ WF(v²)`.
///
/// `v²` is localised once near the origin and once at a point away from the
/// cusp. The origin window has to reproduce the slope `-3ρ + 5/2`; the far
/// window has to decay at least `margin` slope units faster.
pub fn cusp_point_wavefront_check(
    v: &CuspField,
    sym: &CuspSymbol,
    epsilon: f64,
    window: (f64, f64),
) -> Result<WavefrontCheck> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let origin_window = Window { center: (0.0, 0.0), sigma: 1.0 };
    // below the cusp, which lives in x₂ ≥ 0
    let far_window = Window { center: (0.0, -6.0), sigma: 0.5 };
    let expected = sym.expected_slope();
    let mut origin = decay_slope(&windowed_squared_spectrum(v, origin_window), epsilon, window)?;
    origin.expected_slope = expected;
    let mut far = decay_slope(&windowed_squared_spectrum(v, far_window), epsilon, window)?;
    far.expected_slope = expected;
    let (tolerance, margin) = (0.3, 2.0);
    let passed =
        (origin.fitted_slope - expected).abs() <= tolerance && far.fitted_slope <= origin.fitted_slope - margin;
    Ok(WavefrontCheck { origin, far, origin_window, far_window, tolerance, margin, passed })
}

/// Synthesises `v`, squares it and fits the decay along `(ε, 1)`.
pub fn decay_experiment(sym: &CuspSymbol, n: usize, freq_scale: f64, epsilon: f64, window: (f64, f64)) -> Result<DecayReport> {
    let v = synth_cusp_conormal(sym, n, freq_scale)?;
    let f2 = squared_spectrum(&v);
    drop(v);
    let mut rep = decay_slope(&f2, epsilon, window)?;
    rep.expected_slope = sym.expected_slope();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 2048;
    const SCALE: f64 = 4.0;

    #[test]
    fn symbol_shape() {
        let s = CuspSymbol::with_rho(3.0);
        assert_eq!(s.cutoff(0.5), 0.0);
        assert_eq!(s.cutoff(-2.5), 1.0);
        assert_eq!(s.cutoff(1.5), s.cutoff(-1.5));
        assert_eq!(s.profile(0.0), 1.0);
        assert_eq!(s.profile(2.0), 0.0);
        let cs = CuspSymbol { profile: SlopeProfile::CosineSquared, ..s };
        assert_eq!(cs.profile(0.0), 1.0);
        assert!((s.amplitude(3.0, 0.0) - 3f64.powf(-3.0)).abs() < 1e-15);
        assert_eq!(s.expected_slope(), -6.5);
        assert!(CuspSymbol::with_rho(2.0).validate().is_err());
        assert!(CuspSymbol { r0: 2.0, r1: 1.0, ..s }.validate().is_err());
    }

    #[test]
    fn lattice_requirements() {
        let s = CuspSymbol::default();
        assert!(synth_cusp_conormal(&s, 1024, SCALE).is_err());
        assert!(synth_cusp_conormal(&s, 3000, SCALE).is_err());
        assert!(synth_cusp_conormal(&s, N, 200.0).is_err());
    }

    #[test]
    fn field_is_real_bounded_and_parseval_holds() {
        let v = synth_cusp_conormal(&CuspSymbol::with_rho(3.0), N, SCALE).unwrap();
        let sup = v.sup_abs();
        assert!(sup.is_finite() && sup > 0.0);
        // b is even and H odd, so the spectrum is Hermitian
        assert!(v.max_imag() < 1e-8 * sup, "{}", v.max_imag() / sup);
        let f2 = squared_spectrum(&v);
        let mut sq = v.clone();
        sq.values.iter_mut().for_each(|z| *z = *z * *z);
        let (a, b) = (sq.l2_squared(), f2.l2_squared());
        assert!((a - b).abs() < 1e-10 * a, "{a} vs {b}");
    }

    #[test]
    fn translation_shifts_the_phase() {
        // multiplying v by e^{iξ₀·x} moves 𝓕(v²) by 2ξ₀
        let v = synth_cusp_conormal(&CuspSymbol::with_rho(3.0), N, SCALE).unwrap();
        let f2 = squared_spectrum(&v);
        let mut w = v.clone();
        let k0 = 3usize;
        for j in 0..N {
            for i in 0..N {
                let ph = TAU * (k0 * i) as f64 / N as f64;
                w.values[j * N + i] *= Complex64::from_polar(1.0, ph);
            }
        }
        let g2 = squared_spectrum(&w);
        for &(i, j) in &[(0usize, 40usize), (10, 100), (N - 7, 33)] {
            let a = f2.values[j * N + i];
            let b = g2.values[j * N + (i + 2 * k0) % N];
            assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn gradient_of_modulus_traces_the_cusp() {
        let v = synth_cusp_conormal(&CuspSymbol::with_rho(2.2), N, SCALE).unwrap();
        let dx = v.dx();
        for x2 in [1.5, 3.0, 5.0] {
            let j = v.index_of(x2);
            let predicted = 2.0 * (x2 / 3.0f64).powf(1.5);
            for sign in [-1.0, 1.0] {
                // scan |∂₁|v|| over a band around the branch
                let lo = v.index_of(sign * predicted - 1.0) as i64;
                let mut best = (0.0, 0.0);
                for d in 0..(2.0 / dx) as i64 {
                    let i = (lo + d).rem_euclid(N as i64) as usize;
                    let ip = (i + 1) % N;
                    let im = (i + N - 1) % N;
                    let g = (v.get(ip, j).norm() - v.get(im, j).norm()).abs();
                    if g > best.0 {
                        best = (g, v.coord(i));
                    }
                }
                let miss = (best.1 - sign * predicted).abs() / dx;
                assert!(miss <= 2.0, "x2 = {x2}, branch {sign}: off by {miss:.1} px");
            }
        }
    }

    #[test]
    fn decay_window_validation() {
        let f2 = SquaredSpectrum { n: 8, freq_scale: 1.0, values: vec![Complex64::new(1.0, 0.0); 64] };
        assert!(matches!(decay_slope(&f2, 0.1, (1.0, 1.5)), Err(Error::WindowTooSmall(_))));
        assert!(decay_slope(&f2, 0.1, (1.0, 100.0)).is_err());
        let flat = decay_slope(&f2, 0.0, (0.5, 1.0)).unwrap();
        assert!(flat.fitted_slope.abs() < 1e-12);
        let v = CuspField { n: 8, freq_scale: 1.0, values: vec![Complex64::default(); 64] };
        assert!(cusp_point_wavefront_check(&v, &CuspSymbol::default(), 0.0, (0.5, 1.0)).is_err());
    }

    #[test]
    fn power_law_is_recovered() {
        // a synthetic spectrum |ξ|^-4 sampled on the lattice
        let n = 256;
        let scale = 2.0;
        let mut values = vec![Complex64::default(); n * n];
        for j in 0..n {
            for i in 0..n {
                let (a, b) = (signed_index(i, n) as f64 / scale, signed_index(j, n) as f64 / scale);
                let r2 = a * a + b * b;
                values[j * n + i] = Complex64::new(if r2 > 0.0 { r2.powf(-2.0) } else { 0.0 }, 0.0);
            }
        }
        let f2 = SquaredSpectrum { n, freq_scale: scale, values };
        let rep = decay_slope(&f2, 0.08, (2.0, 15.0)).unwrap();
        // bilinear interpolation biases the low end, four lattice steps out
        assert!((rep.fitted_slope + 4.0).abs() < 0.05, "{}", rep.fitted_slope);
    }
}
