//! Heat-equation seeds: construction, parsing and their derivatives.
//!
//!     cargo run --example heat_seeds

use susy_fp::heat_seed::{combine_seeds, make_exp_seed, make_poly_seed};
use susy_fp::{HeatSolution, ScalarField2D};

fn main() -> susy_fp::Result<()> {
    let poly = make_poly_seed(1.0)?;
    let cosh = combine_seeds(&[make_exp_seed(1.0)?, make_exp_seed(-1.0)?], &[0.5, 0.5])?;
    let parsed: HeatSolution = "sum:(poly:B=0*2+const*1)".parse()?;

    for seed in [&poly, &cosh, &parsed] {
        let (x, t) = (0.5, 0.3);
        let heat = seed.derivative(0, 1, x, t) - seed.derivative(2, 0, x, t);
        println!(
            "{seed:<32} omega = {:.6}  omega_x = {:.6}  W = {:.6}  omega_t - omega_xx = {heat:.1e}  domain t >= {:e}",
            seed.eval(x, t),
            seed.dx(x, t),
            seed.antiderivative_x(x, t),
            seed.positivity_domain().t_min,
        );
    }

    // Bad specs are rejected with the offending token.
    for bad in ["poly:B=-1", "exp:k=0", "sum:(const*0)", "gauss"] {
        println!("{bad:<14} -> {}", bad.parse::<HeatSolution>().unwrap_err());
    }
    Ok(())
}
