//! `D[V1] N = M D[V2]` checked with finite differences, plus the negative
//! control with a shifted `g2`.
//!
//!     cargo run --release --example intertwining_check

use susy_fp::heat_seed::make_poly_seed;
use susy_fp::verify::{conjugate_identity_check, intertwining_identity_check, Derivatives};
use susy_fp::{build_model, FnField, Grid, Jet, Rect};

fn main() -> susy_fp::Result<()> {
    let model = build_model(make_poly_seed(1.0)?, 1.0)?;
    let phi = FnField::new("exp(-x^2 - t)", Rect::ALL, |x: Jet, t: Jet| (x * x * -1.0 - t).exp());
    let grid = Grid::new(101, 101, -1.0, 1.0, 0.5, 1.5)?;

    for (label, m) in [("model", model.clone()), ("g2 + 0.1", model.with_g2_perturbation(0.1))] {
        let exact = intertwining_identity_check(&m, &phi, &grid, Derivatives::Analytic)?;
        let fd = intertwining_identity_check(&m, &phi, &grid, Derivatives::FiniteDifference)?;
        let adj = conjugate_identity_check(&m, &phi, &grid, Derivatives::FiniteDifference)?;
        println!("{label}:");
        println!("  exact derivatives   max {:.2e}", exact.max_norm);
        println!(
            "  finite differences  max {:.2e}, order {:.3}",
            fd.max_norm,
            fd.convergence_order.unwrap()
        );
        println!(
            "  conjugate identity  max {:.2e}, order {:.3}",
            adj.max_norm,
            adj.convergence_order.unwrap()
        );
    }
    Ok(())
}
