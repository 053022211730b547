use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::grid::{interp_linear, ImageGrid, Sinogram, SinogramGrid};
use super::radon::radon_image;
use crate::error::Result;
use crate::fft::{fft2_inplace, signed_index};

/// Constant in `f = C_FBP · ℛ*(|σ| ℛf)` for backprojection over `[0, π)`
/// with the line measure `ds dφ`. The value `1/(2π)` follows from the
/// Fourier slice theorem. `examples/calibrate_fbp.rs` fits the matching
/// constant `2π` of `ℛ*ℛ = c|D|⁻¹` by least squares on a Gaussian phantom.
pub const C_FBP: f64 = 1.0 / TAU;

/// Spectral shaping applied on top of `|σ|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RampWindow {
    /// Bare ramp with a hard cut at the Nyquist frequency.
    #[default]
    None,
    /// Ramp times a Hann taper reaching zero at Nyquist (display only).
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampOptions {
    pub window: RampWindow,
    /// Each row is zero-padded to the next power of two at or above
    /// `padding * n_s`. `1` filters the row as one period of a periodic
    /// signal, without padding.
    pub padding: usize,
}

impl Default for RampOptions {
    fn default() -> Self {
        Self { window: RampWindow::None, padding: 2 }
    }
}

/// Multiplier of DFT bin `k` on an `len`-point row with spacing `ds`.
pub fn ramp_response(k: usize, len: usize, ds: f64, window: RampWindow) -> f64 {
    let m = signed_index(k, len);
    let sigma = TAU * m.unsigned_abs() as f64 / (len as f64 * ds);
    match window {
        RampWindow::None => sigma,
        RampWindow::Hann => {
            let frac = m.unsigned_abs() as f64 / (0.5 * len as f64);
            sigma * 0.5 * (1.0 + (PI * frac).cos())
        }
    }
}

/// Applies `|σ|` in the `s`-frequency to every row, with default options:
/// rows zero-padded to twice their length and a hard cut at Nyquist.
pub fn ramp_filter(sino: &Sinogram) -> Sinogram {
    ramp_filter_with(sino, RampOptions::default())
}

/// DFT of the sampled band-limited ramp kernel on a zero-padded row.
///
/// Sampling `|σ|` directly in frequency treats the padded row as periodic and
/// leaves a constant offset in the reconstruction. The kernel
/// `k(0) = π/(2Δs²)`, `k(mΔs) = -2/(π m²Δs²)` for odd `m` and 0 for even `m`
/// is the inverse transform of `|σ|` cut at Nyquist; transforming its
/// samples gives the same ramp with the correct low-frequency behaviour.
fn band_limited_ramp(len: usize, ds: f64, window: RampWindow) -> Vec<f64> {
    let mut kern = vec![Complex64::default(); len];
    for (k, v) in kern.iter_mut().enumerate() {
        let m = signed_index(k, len).unsigned_abs();
        v.re = if m == 0 {
            PI / (2.0 * ds * ds)
        } else if m % 2 == 1 {
            -2.0 / (PI * (m * m) as f64 * ds * ds)
        } else {
            0.0
        };
    }
    FftPlanner::<f64>::new().plan_fft_forward(len).process(&mut kern);
    kern.iter()
        .enumerate()
        .map(|(k, c)| {
            let taper = match window {
                RampWindow::None => 1.0,
                RampWindow::Hann => {
                    let frac = signed_index(k, len).unsigned_abs() as f64 / (0.5 * len as f64);
                    0.5 * (1.0 + (PI * frac).cos())
                }
            };
            c.re * ds * taper
        })
        .collect()
}

pub fn ramp_filter_with(sino: &Sinogram, opts: RampOptions) -> Sinogram {
    let n_s = sino.grid.n_s;
    let ds = sino.grid.ds();
    let (len, mult) = if opts.padding <= 1 {
        (n_s, (0..n_s).map(|k| ramp_response(k, n_s, ds, opts.window)).collect::<Vec<_>>())
    } else {
        let len = (opts.padding * n_s).next_power_of_two();
        (len, band_limited_ramp(len, ds, opts.window))
    };
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let rows: Vec<Vec<f64>> = (0..sino.grid.n_phi)
        .into_par_iter()
        .map(|j| {
            let mut buf = vec![Complex64::default(); len];
            for (b, v) in buf.iter_mut().zip(sino.row(j)) {
                b.re = *v;
            }
            fwd.process(&mut buf);
            for (b, m) in buf.iter_mut().zip(&mult) {
                *b *= *m;
            }
            inv.process(&mut buf);
            buf[..n_s].iter().map(|c| c.re / len as f64).collect()
        })
        .collect();
    Sinogram { grid: sino.grid, values: rows.concat() }
}

/// `ℛ*g(x) = ∫₀^π g(x·θ, φ) dφ` as a Riemann sum over the grid angles, with
/// linear interpolation in `s`.
pub fn backproject(sino: &Sinogram, n: usize, r: f64) -> Result<ImageGrid> {
    let mut img = ImageGrid::zeros(n, r)?;
    let g = sino.grid;
    let trig: Vec<(f64, f64)> = (0..g.n_phi).map(|j| g.phi(j).sin_cos()).collect();
    let h = img.pixel();
    let (s_max, ds) = (g.s_max, g.ds());
    img.values.par_chunks_mut(n).enumerate().for_each(|(jy, row)| {
        let y = -r + (jy as f64 + 0.5) * h;
        for (jp, &(sn, cs)) in trig.iter().enumerate() {
            let srow = sino.row(jp);
            let s_base = y * sn;
            for (ix, out) in row.iter_mut().enumerate() {
                let x = -r + (ix as f64 + 0.5) * h;
                *out += interp_linear(srow, s_max, ds, x * cs + s_base);
            }
        }
        let w = g.dphi();
        row.iter_mut().for_each(|v| *v *= w);
    });
    Ok(img)
}

/// Filtered backprojection `C_FBP · ℛ*(|σ| g)`.
pub fn fbp(sino: &Sinogram, n: usize, r: f64) -> Result<ImageGrid> {
    fbp_with(sino, n, r, RampOptions::default())
}

pub fn fbp_with(sino: &Sinogram, n: usize, r: f64, opts: RampOptions) -> Result<ImageGrid> {
    let mut img = backproject(&ramp_filter_with(sino, opts), n, r)?;
    img.scale(C_FBP);
    Ok(img)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalOperatorReport {
    /// Least-squares `c` in `ℛ*ℛf ≈ c · 𝓕⁻¹(f̂/|ξ|)`.
    pub c: f64,
    /// `‖ℛ*ℛf - c·𝓕⁻¹(f̂/|ξ|)‖ / ‖ℛ*ℛf‖`.
    pub relative_residual: f64,
}

/// Compares `ℛ*ℛf` with the Fourier multiplier `1/|ξ|` applied to `f`.
///
/// The multiplier is applied in space: `𝓕⁻¹(f̂/|ξ|) = (2π)⁻¹ f * |x|⁻¹`,
/// evaluated by a zero-padded FFT convolution so no periodic images enter.
/// The kernel at the origin is its average over one pixel. With these
/// conventions the continuum value of `c` is `2π`.
pub fn normal_operator_check(image: &ImageGrid, grid: &SinogramGrid) -> Result<NormalOperatorReport> {
    let normal = backproject(&radon_image(image, grid), image.n, image.r)?;
    let model = inverse_abs_xi(image);
    let num: f64 = normal.values.iter().zip(&model.values).map(|(a, b)| a * b).sum();
    let den: f64 = model.values.iter().map(|b| b * b).sum();
    let c = num / den;
    let res: f64 = normal.values.iter().zip(&model.values).map(|(a, b)| (a - c * b).powi(2)).sum();
    let nrm: f64 = normal.values.iter().map(|a| a * a).sum();
    Ok(NormalOperatorReport { c, relative_residual: (res / nrm).sqrt() })
}

/// `(2π)⁻¹ (f * |x|⁻¹)` on the image raster.
fn inverse_abs_xi(image: &ImageGrid) -> ImageGrid {
    let n = image.n;
    let m = 2 * n;
    let h = image.pixel();
    let mut f = vec![Complex64::default(); m * m];
    for j in 0..n {
        for i in 0..n {
            f[j * m + i].re = image.get(i, j);
        }
    }
    let mut k = vec![Complex64::default(); m * m];
    for j in 0..m {
        let dj = signed_index(j, m) as f64;
        for i in 0..m {
            let di = signed_index(i, m) as f64;
            let d = (di * di + dj * dj).sqrt();
            k[j * m + i].re = if d == 0.0 { 4.0 * (1.0 + 2f64.sqrt()).ln() / h } else { 1.0 / (d * h) };
        }
    }
    fft2_inplace(&mut f, m, false);
    fft2_inplace(&mut k, m, false);
    for (a, b) in f.iter_mut().zip(&k) {
        *a *= *b;
    }
    fft2_inplace(&mut f, m, true);
    let scale = h * h / ((m * m) as f64 * TAU);
    let mut out = ImageGrid { n, r: image.r, values: vec![0.0; n * n] };
    for j in 0..n {
        for i in 0..n {
            out.values[j * n + i] = f[j * m + i].re * scale;
        }
    }
    out
}

/// Default sinogram grid for an image of extent `r`: `s_max` covers the
/// raster diagonal and `Δs` matches the pixel size.
pub fn covering_grid(n: usize, r: f64, n_phi: usize) -> SinogramGrid {
    let s_max = r * 2f64.sqrt() * 1.01;
    let h = 2.0 * r / n as f64;
    let n_s = (2.0 * s_max / h).ceil() as usize + 1;
    SinogramGrid { n_s: n_s | 1, n_phi, s_max }
}
