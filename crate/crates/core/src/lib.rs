//! Exactly solvable Fokker-Planck models from asymmetric intertwining of
//! diffusion operators, with the numerical checks that back them up.
//!
//! A positive heat solution `ω` ([`heat_seed`]) and a constant `c` fix a
//! [`SusyModel`]: a pair of diffusion operators `D[V1]`, `D[V2]` linked by
//! first-order operators `N`, `M` with `D[V1] N = M D[V2]`. The [`drift`]
//! module turns both sides into Fokker-Planck drifts `U1`, `U2` and maps
//! probability densities between them; [`verify`] and [`solver`] check the
//! whole chain on grids.

pub mod cli;
pub mod drift;
pub mod error;
pub mod field;
pub mod heat_seed;
pub mod jet;
pub mod solver;
pub mod susy;
pub mod verify;

pub use drift::{p1_from_p2, p1_via_psi_picture, recover_u2, build_rho1, DriftPair};
pub use error::{Error, Result};
pub use field::{Constant, FnField, Rect, ScalarField2D, SharedField};
pub use heat_seed::{combine_seeds, make_const_seed, make_exp_seed, make_poly_seed, HeatSolution};
pub use jet::Jet;
pub use susy::{build_model, LinearOperator, Potential, SusyModel};
pub use verify::{Grid, ResidualReport};

/// Number format shared by every report and CSV file.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}
