//! The dual curve of a boundary has a cusp at every inflection tangent.
//! This fits the branch exponent near each cusp and compares it with the
//! `(k + 2)/(k + 1)` law for a flat point of order `k`.

use ctstreak::geometry::{dual_curve, find_flat_points, GraphCurve, ParamCurve};

fn main() -> ctstreak::Result<()> {
    let bean = ParamCurve::bean();
    let dual = dual_curve(&bean, 16384)?;
    println!("bean: {} dual samples, {} direction reversals", dual.len(), dual.reversal_points().len());
    for flat in find_flat_points(&bean, 1e-13)? {
        let fit = dual.cusp_exponent_fit(flat.t, 0.05)?;
        println!(
            "  t = {:.5}  order {}  exponents [{:.4}, {:.4}]  expected {:.4}  cusp {}",
            flat.t, fit.flat_order, fit.exponents[0], fit.exponents[1], fit.expected_exponent, fit.is_cusp
        );
    }

    // graphs x₂ = x₁^m give flat points of every order
    println!("graphs x2 = x1^m at the origin:");
    for m in 3..=7 {
        let fit = dual_curve(&GraphCurve::monomial(m, 1.0), 4001)?.cusp_exponent_fit(0.0, 0.1)?;
        println!(
            "  m = {m}  order {}  exponent {:.4}  expected {:.4}  cusp {}",
            fit.flat_order, fit.mean_exponent, fit.expected_exponent, fit.is_cusp
        );
    }
    Ok(())
}
