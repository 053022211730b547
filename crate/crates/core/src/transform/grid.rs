use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Sampling of line space: `s_i = -s_max + iΔs` and `φ_j = jπ/n_phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinogramGrid {
    pub n_s: usize,
    pub n_phi: usize,
    pub s_max: f64,
}

impl SinogramGrid {
    pub fn new(n_s: usize, n_phi: usize, s_max: f64) -> Result<Self> {
        if n_s < 2 || n_phi < 2 || !(s_max > 0.0) || !s_max.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "sinogram grid needs n_s >= 2, n_phi >= 2 and s_max > 0 (got {n_s}, {n_phi}, {s_max})"
            )));
        }
        Ok(Self { n_s, n_phi, s_max })
    }

    pub fn ds(&self) -> f64 {
        2.0 * self.s_max / (self.n_s - 1) as f64
    }

    pub fn dphi(&self) -> f64 {
        PI / self.n_phi as f64
    }

    pub fn s(&self, i: usize) -> f64 {
        -self.s_max + i as f64 * self.ds()
    }

    pub fn phi(&self, j: usize) -> f64 {
        j as f64 * self.dphi()
    }
}

/// Line-space data, one row per angle.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    pub grid: SinogramGrid,
    /// Row-major `n_phi × n_s`.
    pub values: Vec<f64>,
}

impl Sinogram {
    pub fn zeros(grid: SinogramGrid) -> Self {
        Self { grid, values: vec![0.0; grid.n_s * grid.n_phi] }
    }

    /// Samples `f(s, φ)` on the grid.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: SinogramGrid, f: F) -> Self {
        let mut values = Vec::with_capacity(grid.n_s * grid.n_phi);
        for j in 0..grid.n_phi {
            let phi = grid.phi(j);
            for i in 0..grid.n_s {
                values.push(f(grid.s(i), phi));
            }
        }
        Self { grid, values }
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.grid.n_s..(j + 1) * self.grid.n_s]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n_s + i]
    }

    /// Linear interpolation in `s` along row `j`; zero outside `[-s_max, s_max]`.
    pub fn interp_row(&self, j: usize, s: f64) -> f64 {
        interp_linear(self.row(j), self.grid.s_max, self.grid.ds(), s)
    }

    /// Value at an arbitrary line, using `g(-s, φ + π) = g(s, φ)` to bring
    /// `φ` into `[0, π)`, then bilinear interpolation. The row after the last
    /// is the first row reflected in `s`.
    pub fn sample(&self, s: f64, phi: f64) -> f64 {
        let k = (phi / PI).floor();
        let mut phi = phi - k * PI;
        let mut s = if (k as i64).rem_euclid(2) == 0 { s } else { -s };
        if phi >= PI {
            phi -= PI;
            s = -s;
        }
        let fj = phi / self.grid.dphi();
        let j0 = (fj.floor() as usize).min(self.grid.n_phi - 1);
        let w = fj - j0 as f64;
        let a = self.interp_row(j0, s);
        let b = if j0 + 1 < self.grid.n_phi { self.interp_row(j0 + 1, s) } else { self.interp_row(0, -s) };
        (1.0 - w) * a + w * b
    }

    pub fn scale(&mut self, k: f64) {
        self.values.iter_mut().for_each(|v| *v *= k);
    }

    /// `⟨self, other⟩` with the line-space measure `ds dφ`.
    pub fn inner(&self, other: &Sinogram) -> f64 {
        let w = self.grid.ds() * self.grid.dphi();
        crate::numeric::pairwise_sum(&self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect::<Vec<_>>())
            * w
    }
}

pub(crate) fn interp_linear(row: &[f64], s_max: f64, ds: f64, s: f64) -> f64 {
    let f = (s + s_max) / ds;
    if !(f >= 0.0) || f > (row.len() - 1) as f64 {
        return 0.0;
    }
    let i = f.floor() as usize;
    if i + 1 >= row.len() {
        return row[row.len() - 1];
    }
    let w = f - i as f64;
    row[i] * (1.0 - w) + row[i + 1] * w
}

/// Square raster on `[-r, r]²`, sampled at cell centres.
///
/// `values[j * n + i]` sits at `x₁ = -r + (i + ½)h`, `x₂ = -r + (j + ½)h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    pub n: usize,
    pub r: f64,
    pub values: Vec<f64>,
}

impl ImageGrid {
    pub fn zeros(n: usize, r: f64) -> Result<Self> {
        if n == 0 || !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("image grid needs n > 0 and r > 0 (got {n}, {r})")));
        }
        Ok(Self { n, r, values: vec![0.0; n * n] })
    }

    pub fn from_fn<F: Fn(Vec2) -> f64>(n: usize, r: f64, f: F) -> Result<Self> {
        let mut img = Self::zeros(n, r)?;
        for j in 0..n {
            for i in 0..n {
                img.values[j * n + i] = f(img.center(i, j));
            }
        }
        Ok(img)
    }

    pub fn pixel(&self) -> f64 {
        2.0 * self.r / self.n as f64
    }

    pub fn center(&self, i: usize, j: usize) -> Vec2 {
        let h = self.pixel();
        Vec2::new(-self.r + (i as f64 + 0.5) * h, -self.r + (j as f64 + 0.5) * h)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.n + i]
    }

    /// Bilinear interpolation between cell centres, zero outside the raster.
    pub fn bilinear(&self, x: Vec2) -> f64 {
        let h = self.pixel();
        let fx = (x.x + self.r) / h - 0.5;
        let fy = (x.y + self.r) / h - 0.5;
        if !(fx > -1.0 && fy > -1.0 && fx < self.n as f64 && fy < self.n as f64) {
            return 0.0;
        }
        let i0 = fx.floor() as i64;
        let j0 = fy.floor() as i64;
        let wx = fx - i0 as f64;
        let wy = fy - j0 as f64;
        let n = self.n as i64;
        let at = |i: i64, j: i64| if i >= 0 && j >= 0 && i < n && j < n { self.values[(j * n + i) as usize] } else { 0.0 };
        (1.0 - wy) * ((1.0 - wx) * at(i0, j0) + wx * at(i0 + 1, j0))
            + wy * ((1.0 - wx) * at(i0, j0 + 1) + wx * at(i0 + 1, j0 + 1))
    }

    /// `⟨self, other⟩` with the area measure.
    pub fn inner(&self, other: &ImageGrid) -> f64 {
        let h = self.pixel();
        crate::numeric::pairwise_sum(&self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect::<Vec<_>>())
            * h
            * h
    }

    pub fn scale(&mut self, k: f64) {
        self.values.iter_mut().for_each(|v| *v *= k);
    }
}
