//! Lists the lines along which a curve's beam-hardening streaks should appear.
//!
//! ```text
//! cargo run --example predict_lines -- [kidney|bean|ellipse|circle|<curve file>]
//! ```

use std::path::Path;

use ctstreak::geometry::{predicted_lines, validate_assumptions, ParamCurve};

fn main() -> ctstreak::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "bean".into());
    let curve = match arg.as_str() {
        "kidney" => ParamCurve::kidney(),
        "bean" => ParamCurve::bean(),
        "ellipse" => ParamCurve::ellipse(1.0, 0.6),
        "circle" => ParamCurve::circle(1.0),
        path => ParamCurve::load(Path::new(path))?,
    };

    print!("{}", validate_assumptions(&curve).to_text());
    let lines = predicted_lines(&curve)?;
    println!("{} predicted lines", lines.len());
    for l in &lines.lines {
        let touch: Vec<String> = l.params.iter().map(|t| format!("{t:.6}")).collect();
        println!("  {:<19} phi = {:.6}  s = {:+.6}  at t = [{}]", l.kind.as_str(), l.line.phi, l.line.s, touch.join(", "));
    }
    Ok(())
}
