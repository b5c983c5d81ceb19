//! Drifts `U1`, `U2` and the probability map `P2 -> P1`.
//!
//!     cargo run --example drift_recovery

use susy_fp::drift::{check_rho1_system, mass_per_slice, negative_fraction, p1_from_p2, p1_via_psi_picture};
use susy_fp::heat_seed::make_poly_seed;
use susy_fp::{build_model, DriftPair, Grid, ScalarField2D};

fn main() -> susy_fp::Result<()> {
    let model = build_model(make_poly_seed(1.0)?, 2.0)?;
    let drift = DriftPair::new(&model, 1.0, 1.0)?;
    let (x, t) = (0.5, 0.5);
    println!("beta = {}, U2(x) = {:.4}·x", drift.beta(), -2.0 * drift.beta());
    println!("rho1({x}, {t}) = {:.6}, U1 = {:.6}", drift.rho1().eval(x, t), drift.u1().eval(x, t));

    // b > 0 needs a + b W > 0, i.e. x > 0 for this seed.
    let grid = Grid::new(51, 51, 0.1, 3.0, 0.1, 1.0)?;
    for r in check_rho1_system(&model, drift.rho1(), &grid)? {
        println!("{:<28} {:.2e}", r.name, r.max_norm);
    }
    println!("negative b is rejected: {}", DriftPair::new(&model, 1.0, -1.0)
        .and_then(|d| d.rho1().try_eval(2.0, 0.5).map(|_| ()))
        .unwrap_err());

    let drift = DriftPair::new(&model, 1.0, 0.0)?;
    let p2 = drift.default_p2();
    let p1 = p1_from_p2(&drift, p2.clone()).p1;
    let via = p1_via_psi_picture(&drift, p2);
    println!("\nP1({x}, {t}) = {:.10} directly, {:.10} via the diffusion picture", p1.eval(x, t), via.eval(x, t));

    let full = Grid::new(401, 5, -10.0, 10.0, 0.1, 1.0)?;
    println!("fraction of nodes with P1 < 0: {:.3}", negative_fraction(&*p1, &full));
    for (t, m) in mass_per_slice(&*p1, &full) {
        println!("  t = {t:.3}: integral of P1 dx = {m:.3e}");
    }
    Ok(())
}
