//! Exact sinogram of the unit disk and its filtered backprojection.

use ctstreak::geometry::ParamCurve;
use ctstreak::transform::{covering_grid, fbp, radon_indicator};

fn main() -> ctstreak::Result<()> {
    let (n, r) = (256, 1.5);
    let disk = ParamCurve::circle(1.0);
    let grid = covering_grid(n, r, 360);
    let sino = radon_indicator(&disk, 1.0, &grid)?;

    let worst = (0..grid.n_s)
        .map(|i| {
            let s = grid.s(i);
            let exact = if s.abs() < 1.0 { 2.0 * (1.0 - s * s).sqrt() } else { 0.0 };
            (sino.get(i, 0) - exact).abs()
        })
        .fold(0.0, f64::max);
    println!("sinogram {} x {}, max deviation from 2 sqrt(1 - s^2): {worst:.2e}", grid.n_s, grid.n_phi);

    let img = fbp(&sino, n, r)?;
    let h = img.pixel();
    let mut sum = 0.0;
    let mut count = 0usize;
    for j in 0..n {
        for i in 0..n {
            if img.center(i, j).norm() < 1.0 - 3.0 * h {
                sum += img.get(i, j);
                count += 1;
            }
        }
    }
    println!("reconstruction {n} x {n}: mean inside the disk {:.5}", sum / count as f64);
    println!("mass {:.5} (area of the disk {:.5})", img.values.iter().sum::<f64>() * h * h, std::f64::consts::PI);

    let out = std::env::temp_dir().join("ctstreak_disk.pgm");
    img.save_pgm(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}
