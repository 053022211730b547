//! The nonlinearities available for `F` in `P = F(αℛχ_D)`.

use ctstreak::nonlinearity::BeamModel;

fn main() -> ctstreak::Result<()> {
    let models = [
        ("beam hardening, eps 1", BeamModel::beam_hardening(1.0, 1.0)?),
        ("quadratic, a 1", BeamModel::quadratic(1.0, 1.0)?),
        ("table", BeamModel::table(vec![(0.0, 0.0), (1.0, 0.8), (2.0, 1.4)], 1.0)?),
    ];
    println!("{:>6} {:>24} {:>16} {:>10}", "u", models[0].0, models[1].0, models[2].0);
    for k in 0..=8 {
        let u = 0.25 * k as f64;
        println!(
            "{u:6.2} {:24.6} {:16.6} {:10.6}",
            models[0].1.eval(u)? + 0.0,
            models[1].1.eval(u)? + 0.0,
            models[2].1.eval(u)? + 0.0,
        );
    }
    Ok(())
}
