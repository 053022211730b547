//! Measures the constant in `ℛ*ℛ = c |D|⁻¹` at two resolutions and checks
//! that the reconstruction constant inverts it.

use std::f64::consts::TAU;

use ctstreak::transform::{covering_grid, normal_operator_check, ImageGrid, C_FBP};

fn main() -> ctstreak::Result<()> {
    for (n, angles) in [(128, 180), (256, 360), (512, 720)] {
        let g = ImageGrid::from_fn(n, 1.5, |x| (-x.dot(x) / 0.18).exp())?;
        let rep = normal_operator_check(&g, &covering_grid(n, 1.5, angles))?;
        println!("n = {n:3}: c = {:.5}, residual {:.2e}", rep.c, rep.relative_residual);
    }
    println!("continuum value 2*pi = {TAU:.5}; reconstruction constant {C_FBP:.6} = 1/(2*pi)");
    Ok(())
}
