//! Parallel-beam X-ray transform on line space, ramp filtering and
//! backprojection.

mod fbp;
mod grid;
mod io;
mod radon;

pub use fbp::{
    backproject, covering_grid, fbp, fbp_with, normal_operator_check, ramp_filter, ramp_filter_with, ramp_response,
    NormalOperatorReport, RampOptions, RampWindow, C_FBP,
};
pub use grid::{ImageGrid, Sinogram, SinogramGrid};
pub use radon::{radon_image, radon_indicator, CHORD_SAMPLES};
