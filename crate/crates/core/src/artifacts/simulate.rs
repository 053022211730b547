use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::ParamCurve;
use crate::nonlinearity::{apply_pointwise, BeamModel};
use crate::transform::{fbp, radon_image, radon_indicator, ImageGrid, Sinogram, SinogramGrid};

/// Every intermediate of one simulated scan.
#[derive(Debug, Clone)]
pub struct Simulation {
    /// `αℛχ_D`.
    pub metal: Sinogram,
    /// `F(αℛχ_D)`.
    pub nonlinear: Sinogram,
    /// The reconstruction: `f_MA` alone, or the background plus `f_MA`.
    pub image: ImageGrid,
}

/// Runs the scan. Without a background the result is the pure artifact
/// `ℛ*ℐ⁻¹F(αℛχ_D)`; with one, the background's line integrals are added to
/// the nonlinear term before reconstruction.
pub fn simulate(
    curve: &ParamCurve,
    model: &BeamModel,
    grid: &SinogramGrid,
    n: usize,
    r: f64,
    background: Option<&ImageGrid>,
) -> Result<Simulation> {
    let metal = radon_indicator(curve, model.alpha, grid)?;
    let nonlinear = apply_pointwise(&metal, model)?;
    let image = match background {
        None => fbp(&nonlinear, n, r)?,
        Some(bg) => {
            let mut total = radon_image(bg, grid);
            total.values.iter_mut().zip(&nonlinear.values).for_each(|(a, b)| *a += b);
            fbp(&total, n, r)?
        }
    };
    Ok(Simulation { metal, nonlinear, image })
}

/// `f_MA = fbp(F(αℛχ_D))` on an `n × n` raster of `[-r, r]²`.
pub fn metal_artifact(curve: &ParamCurve, model: &BeamModel, grid: &SinogramGrid, n: usize, r: f64) -> Result<ImageGrid> {
    Ok(simulate(curve, model, grid, n, r, None)?.image)
}

/// Central-difference gradient magnitude. The outermost ring of pixels is 0.
pub fn singular_support_map(img: &ImageGrid) -> ImageGrid {
    let n = img.n;
    let inv = 0.5 / img.pixel();
    let mut values = vec![0.0; n * n];
    if n >= 3 {
        values.par_chunks_mut(n).enumerate().skip(1).take(n - 2).for_each(|(j, row)| {
            for (i, out) in row.iter_mut().enumerate().take(n - 1).skip(1) {
                let gx = (img.get(i + 1, j) - img.get(i - 1, j)) * inv;
                let gy = (img.get(i, j + 1) - img.get(i, j - 1)) * inv;
                *out = gx.hypot(gy);
            }
        });
    }
    ImageGrid { n, r: img.r, values }
}

impl Simulation {
    /// Rejects reconstructions containing non-finite values.
    pub fn check_finite(&self) -> Result<()> {
        if self.image.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Numerical("reconstruction contains non-finite values".into()))
        }
    }
}
