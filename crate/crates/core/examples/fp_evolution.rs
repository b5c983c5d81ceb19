//! Reference Crank–Nicolson evolution of `F[U1] P = 0` against the analytic
//! partner density, with a convergence study.
//!
//!     cargo run --release --example fp_evolution

use susy_fp::drift::p1_from_p2;
use susy_fp::heat_seed::make_poly_seed;
use susy_fp::solver::{compare_evolutions, evolve_fp, slice, SolverSettings};
use susy_fp::verify::convergence_order;
use susy_fp::{build_model, DriftPair, Grid};

fn main() -> susy_fp::Result<()> {
    let model = build_model(make_poly_seed(1.0)?, 2.0)?;
    let drift = DriftPair::new(&model, 1.0, 0.0)?;
    let p1 = p1_from_p2(&drift, drift.default_p2()).p1;
    let u1 = drift.u1();

    let mut previous: Option<f64> = None;
    for n in [100, 199, 397, 793] {
        let grid = Grid::new(n, n, -8.0, 8.0, 0.05, 1.0)?;
        let init = slice(&*p1, &grid, grid.t_min)?;
        let result = evolve_fp(&u1, &init, &grid, &SolverSettings::default())?;
        let err = compare_evolutions(&result, &*p1)?;
        let order = previous.map_or(String::new(), |e| format!("order {:.3}", convergence_order(e, err.final_linf)));
        println!("{n:>4} x {n:<4} final Linf {:.3e}  L2 {:.3e}  {order}", err.final_linf, err.final_l2);
        previous = Some(err.final_linf);
    }
    Ok(())
}
