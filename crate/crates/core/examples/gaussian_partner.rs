//! Zero modes: the Gaussian `Ψ2`, its partner `Ψ1 = N Ψ2`, and `Ψ2` built
//! from sampled initial data.
//!
//!     cargo run --example gaussian_partner

use susy_fp::heat_seed::make_poly_seed;
use susy_fp::susy::{
    psi1_from_psi2, psi2_from_cauchy, psi2_gaussian, shared, LinearOperator, QuadratureSettings, SampledProfile,
};
use susy_fp::verify::{residual_sweep, Derivatives};
use susy_fp::{build_model, Grid, Potential, ScalarField2D};

fn main() -> susy_fp::Result<()> {
    let c = 2.0;
    let model = build_model(make_poly_seed(1.0)?, c)?;
    let psi2 = shared(psi2_gaussian(c));
    let psi1 = psi1_from_psi2(&model, psi2.clone());
    let v1 = model.v1_field();
    let grid = Grid::new(81, 41, -4.0, 4.0, 0.1, 1.0)?;

    let r2 = residual_sweep(&LinearOperator::Diffusion(Potential::Const(c / 2.0)), &psi2, &grid, Derivatives::Analytic)?;
    let r1 = residual_sweep(&LinearOperator::Diffusion(Potential::Field(&v1)), &psi1, &grid, Derivatives::Analytic)?;
    println!("D[V2] Psi2: {:.2e}\nD[V1] Psi1: {:.2e}", r2.max_norm, r1.max_norm);
    println!("Psi1 derivatives: {:?}", psi1.derivative_source());

    // A box profile of unit mass, spread by the heat kernel.
    let h = 0.01;
    let values: Vec<f64> = (0..201).map(|i| if (i as f64 * h - 1.0).abs() <= 0.25 { 2.0 } else { 0.0 }).collect();
    let profile = SampledProfile { x0: -1.0, h, values };
    let cauchy = psi2_from_cauchy(c, &profile, QuadratureSettings::default())?;
    println!("\nquadrature error estimate {:.1e}", cauchy.estimated_error());
    for x in [0.0, 0.5, 1.0] {
        println!("Psi2_box({x}, 0.5) = {:.6}", cauchy.eval(x, 0.5));
    }
    let from_box = psi1_from_psi2(&model, shared(cauchy));
    println!("Psi1_box(0.5, 0.5) = {:.6} ({:?})", from_box.eval(0.5, 0.5), from_box.derivative_source());
    Ok(())
}
