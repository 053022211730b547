//! The canonical relation of the X-ray transform carries the conormal of an
//! inflection point to the covector over its tangent line.

use ctstreak::artifacts::{canonical_forward, canonical_inverse, conormal_lift};
use ctstreak::geometry::{predicted_lines, LineKind, ParamCurve};

fn main() -> ctstreak::Result<()> {
    let curve = ParamCurve::kidney();
    for l in predicted_lines(&curve)?.lines.iter().filter(|l| l.kind == LineKind::InflectionTangent) {
        let t = l.params[0];
        let lift = conormal_lift(&curve, t, 10.0)?;
        let q = canonical_forward(lift)?;
        let back = canonical_inverse(q)?;
        println!("inflection at t = {t:.6}, x = ({:+.5}, {:+.5})", lift.x.x, lift.x.y);
        println!("  tangent line        phi = {:.9}  s = {:+.9}", l.line.phi, l.line.s);
        println!("  image of conormal   phi = {:.9}  s = {:+.9}  sigma = {:+.3}  eta = {:+.5}", q.phi, q.s, q.sigma, q.eta);
        println!(
            "  |x|^2 = {:.12}, s^2 + (eta/sigma)^2 = {:.12}",
            lift.x.dot(lift.x),
            q.s * q.s + (q.eta / q.sigma).powi(2)
        );
        println!("  round trip error {:.2e}", (back.x - lift.x).norm() + (back.xi - lift.xi).norm());
    }
    Ok(())
}
