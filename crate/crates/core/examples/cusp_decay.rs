//! Fourier decay of the square of a conormal distribution with a cusp.
//!
//! `v` is conormal to the cusp `x₂ = |x₁|^{3/2}`. Its square picks up a
//! singularity at the origin whose Fourier transform decays like
//! `|ξ|^{-3ρ + 5/2}` along `(ε, 1)`.
//!
//! ```text
//! cargo run --release --example cusp_decay -- [rho] [n]
//! ```

use ctstreak::cuspwave::{decay_slope, squared_spectrum, synth_cusp_conormal, CuspSymbol};

fn main() -> ctstreak::Result<()> {
    let mut args = std::env::args().skip(1);
    let rho: f64 = args.next().map(|s| s.parse().expect("rho")).unwrap_or(3.0);
    let n: usize = args.next().map(|s| s.parse().expect("n")).unwrap_or(4096);
    let sym = CuspSymbol::with_rho(rho);
    let v = synth_cusp_conormal(&sym, n, 4.0)?;
    println!("v on {n}^2: sup |v| = {:.4e}, max |Im v| = {:.1e}", v.sup_abs(), v.max_imag());
    let f2 = squared_spectrum(&v);
    drop(v);
    let report = decay_slope(&f2, 0.08, (6.0, 60.0))?;
    println!("slope along (0.08, 1): {:.3}, predicted {:.3}", report.fitted_slope, sym.expected_slope());
    println!("fit window {:?}, r^2 = {:.5}", report.fit_window, report.r_squared);
    Ok(())
}
