//! Partner potential and coefficient system of the model `ω = x² + 2t + B`.
//!
//!     cargo run --example build_model

use susy_fp::heat_seed::make_poly_seed;
use susy_fp::susy::coefficient_system_residuals;
use susy_fp::{build_model, Grid};

fn main() -> susy_fp::Result<()> {
    let model = build_model(make_poly_seed(0.0)?, 0.0)?;
    println!("V1(1, 1) = {:.6} (closed form -4/9 = {:.6})", model.v1(1.0, 1.0), -4.0 / 9.0);

    let model = build_model(make_poly_seed(1.0)?, 2.0)?;
    println!("\nseed {}, c = {}", model.omega(), model.c());
    println!("{:>6} {:>6} {:>12} {:>12} {:>12}", "x", "t", "V1", "f'", "g2");
    for (x, t) in [(0.0, 0.1), (0.5, 0.5), (2.0, 1.0)] {
        println!(
            "{x:>6} {t:>6} {:>12.6} {:>12.6} {:>12.6}",
            model.v1(x, t),
            model.f_x(x, t),
            model.g2(x, t)
        );
    }

    let grid = Grid::new(101, 101, -2.0, 2.0, 0.1, 1.1)?;
    println!("\ncoefficient relations on {}:", grid.descriptor());
    for r in coefficient_system_residuals(&model, &grid)? {
        println!("  {:<72} {:.2e}", r.name, r.max_norm);
    }
    Ok(())
}
