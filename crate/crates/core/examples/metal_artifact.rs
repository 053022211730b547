//! Streaks from a non-convex metal region under a quadratic nonlinearity.
//!
//! The kidney has two inflection points and one bitangent. The gradient of
//! the reconstruction is scored against those three lines and the boundary,
//! then again with each line left out.

use std::path::PathBuf;

use ctstreak::artifacts::{localization_score, random_baseline, simulate, singular_support_map};
use ctstreak::geometry::{predicted_lines, ParamCurve};
use ctstreak::nonlinearity::BeamModel;
use ctstreak::transform::SinogramGrid;

fn main() -> ctstreak::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let curve = ParamCurve::kidney();
    let lines = predicted_lines(&curve)?;
    let model = BeamModel::quadratic(1.0, 1.0)?;
    let (n, r) = (512, 1.6);
    let grid = SinogramGrid::new(1025, 720, 1.01 * r * 2f64.sqrt())?;

    let sim = simulate(&curve, &model, &grid, n, r, None)?;
    let grad = singular_support_map(&sim.image);
    sim.image.save_pgm(&out.join("kidney_artifact.pgm"))?;
    grad.save_pgm(&out.join("kidney_gradient.pgm"))?;

    let score = localization_score(&grad, &lines, &curve, 3.0, 0.99)?;
    print!("{}", score.to_text());
    let baseline = random_baseline(&grad, &lines, &curve, 3.0, 0.99, 7)?;
    println!("random pixels inside the tubes: {:.4}", baseline.inside_fraction);
    for (k, l) in lines.lines.iter().enumerate() {
        let without = localization_score(&grad, &lines.without(k), &curve, 3.0, 0.99)?;
        println!(
            "without {} line {k}: inside_fraction {:.4} (drop {:.4})",
            l.kind.as_str(),
            without.inside_fraction,
            score.inside_fraction - without.inside_fraction
        );
    }
    println!("images written to {}", out.display());
    Ok(())
}
