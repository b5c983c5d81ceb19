//! Reference time stepper for the two evolution equations.
//!
//! Both `∂t P = P'' + U'P' + U''P` and `∂t Ψ = Ψ'' − VΨ` are instances of
//! `∂t u = u'' + p(x,t) u' + q(x,t) u`. They are advanced with Crank–Nicolson:
//! centered differences in space, the trapezoidal rule in time, and `p`, `q`
//! evaluated at the half step so time-dependent drifts keep second order.
//! Each step is one tridiagonal solve.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Rect, ScalarField2D};
use crate::susy::Potential;
use crate::verify::{check_rect, convergence_order, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    DirichletZero,
    NeumannZero,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::DirichletZero => "dirichlet_zero",
            Boundary::NeumannZero => "neumann_zero",
        })
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dirichlet_zero" | "dirichlet" => Ok(Boundary::DirichletZero),
            "neumann_zero" | "neumann" => Ok(Boundary::NeumannZero),
            other => Err(Error::parameter(
                "boundary",
                format!("expected dirichlet_zero or neumann_zero, got `{other}`"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    pub boundary: Boundary,
    /// Abort once `max|u|` exceeds this multiple of its initial value.
    pub growth_limit: f64,
    /// Initial data above this magnitude at the edges triggers a warning.
    pub edge_tolerance: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            boundary: Boundary::DirichletZero,
            growth_limit: 1e6,
            edge_tolerance: 1e-12,
        }
    }
}

impl SolverSettings {
    pub fn with_boundary(boundary: Boundary) -> Self {
        SolverSettings {
            boundary,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeInfo {
    pub name: &'static str,
    pub hx: f64,
    pub ht: f64,
    pub boundary: Boundary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    pub grid: Grid,
    pub scheme: SchemeInfo,
    /// `snapshots[j][i]` is the value at `(x_i, t_j)`; one row per time node.
    pub snapshots: Vec<Vec<f64>>,
    /// Trapezoidal `∫ u dx` per snapshot.
    pub masses: Vec<f64>,
    pub warnings: Vec<String>,
}

impl EvolutionResult {
    pub fn final_snapshot(&self) -> &[f64] {
        self.snapshots.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Wraps already-computed snapshots, e.g. an analytic field sampled on
    /// the grid.
    pub fn from_snapshots(grid: Grid, boundary: Boundary, snapshots: Vec<Vec<f64>>) -> Self {
        let masses = snapshots.iter().map(|s| trapezoid(s, grid.hx())).collect();
        EvolutionResult {
            scheme: SchemeInfo {
                name: "sampled",
                hx: grid.hx(),
                ht: grid.ht(),
                boundary,
            },
            grid,
            snapshots,
            masses,
            warnings: Vec::new(),
        }
    }
}

/// Values of `field` at the `x` nodes of `grid` at time `t`.
pub fn slice(field: &dyn ScalarField2D, grid: &Grid, t: f64) -> Result<Vec<f64>> {
    (0..grid.nx as isize)
        .map(|i| field.try_eval(grid.x(i), t))
        .collect()
}

/// Evolves `F[U] P = 0` forward from `p_init` given at `grid.t_min`.
pub fn evolve_fp(
    u: &dyn ScalarField2D,
    p_init: &[f64],
    grid: &Grid,
    settings: &SolverSettings,
) -> Result<EvolutionResult> {
    check_rect(u, &half_steps(grid))?;
    evolve(
        |x, t| {
            let j = u.jet(x, t, 2);
            (j.dx(), j.dxx())
        },
        p_init,
        grid,
        settings,
    )
}

/// Evolves `D[V] Ψ = 0` forward from `psi_init` given at `grid.t_min`.
pub fn evolve_diffusion(
    v: Potential<'_>,
    psi_init: &[f64],
    grid: &Grid,
    settings: &SolverSettings,
) -> Result<EvolutionResult> {
    match v {
        Potential::Const(c) => evolve(|_, _| (0.0, -c), psi_init, grid, settings),
        Potential::Field(f) => {
            check_rect(f, &half_steps(grid))?;
            evolve(|x, t| (0.0, -f.eval(x, t)), psi_init, grid, settings)
        }
    }
}

/// Where the coefficients are sampled: all `x` nodes, first to last half step.
fn half_steps(grid: &Grid) -> Rect {
    let h = 0.5 * grid.ht();
    Rect::new(grid.x_min, grid.x_max, grid.t_min + h, grid.t_max - h)
}

/// Crank–Nicolson for `u_t = u'' + p u' + q u`; `coeffs(x, t) = (p, q)`.
fn evolve(
    coeffs: impl Fn(f64, f64) -> (f64, f64),
    init: &[f64],
    grid: &Grid,
    settings: &SolverSettings,
) -> Result<EvolutionResult> {
    let n = grid.nx;
    if init.len() != n {
        return Err(Error::GridMismatch(format!(
            "initial data has {} values, grid has nx = {n}",
            init.len()
        )));
    }
    if let Some(i) = init.iter().position(|v| !v.is_finite()) {
        return Err(Error::parameter(
            "initial data",
            format!("non-finite value at x = {}", grid.x(i as isize)),
        ));
    }
    let (hx, ht) = (grid.hx(), grid.ht());
    let mut warnings = Vec::new();
    let edge = init[0].abs().max(init[n - 1].abs());
    if settings.boundary == Boundary::DirichletZero && edge > settings.edge_tolerance {
        warnings.push(format!(
            "initial data reaches {edge:e} at the edges (tolerance {:e}); the zero boundary is approximate",
            settings.edge_tolerance
        ));
    }

    let initial_max = init.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let reference = if initial_max > 0.0 { initial_max } else { 1.0 };
    let mut snapshots = Vec::with_capacity(grid.nt);
    let mut u = init.to_vec();
    if settings.boundary == Boundary::DirichletZero {
        u[0] = 0.0;
        u[n - 1] = 0.0;
    }
    snapshots.push(u.clone());

    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut peclet_warned = false;
    let inv_h2 = 1.0 / (hx * hx);

    for step in 0..grid.nt - 1 {
        let t_half = grid.t(step as isize) + 0.5 * ht;
        // L u at node i = lo u[i-1] + di u[i] + up u[i+1].
        for i in 0..n {
            let (p, q) = coeffs(grid.x(i as isize), t_half);
            if !peclet_warned && (p * hx).abs() > 2.0 {
                warnings.push(format!(
                    "cell Peclet number {:.3} exceeds 1 at x = {}, t = {t_half}; expect oscillations",
                    (p * hx).abs() / 2.0,
                    grid.x(i as isize)
                ));
                peclet_warned = true;
            }
            let (mut lo, di, mut up) = (inv_h2 - p / (2.0 * hx), q - 2.0 * inv_h2, inv_h2 + p / (2.0 * hx));
            match settings.boundary {
                Boundary::DirichletZero if i == 0 || i == n - 1 => {
                    lower[i] = 0.0;
                    upper[i] = 0.0;
                    diag[i] = 1.0;
                    rhs[i] = 0.0;
                    continue;
                }
                // Ghost node mirrors the first interior node.
                Boundary::NeumannZero if i == 0 => {
                    up += lo;
                    lo = 0.0;
                }
                Boundary::NeumannZero if i == n - 1 => {
                    lo += up;
                    up = 0.0;
                }
                _ => {}
            }
            let k = 0.5 * ht;
            let left = if i > 0 { u[i - 1] } else { 0.0 };
            let right = if i + 1 < n { u[i + 1] } else { 0.0 };
            rhs[i] = u[i] + k * (lo * left + di * u[i] + up * right);
            lower[i] = -k * lo;
            diag[i] = 1.0 - k * di;
            upper[i] = -k * up;
        }
        thomas(&lower, &diag, &upper, &mut rhs).map_err(|reason| Error::LinearSolve {
            step: step + 1,
            reason,
        })?;
        std::mem::swap(&mut u, &mut rhs);

        let t = grid.t(step as isize + 1);
        let current = u.iter().fold(0.0_f64, |m, v| if v.is_finite() { m.max(v.abs()) } else { f64::INFINITY });
        let growth = current / reference;
        if !(growth <= settings.growth_limit) {
            return Err(Error::Instability {
                t,
                growth,
                limit: settings.growth_limit,
            });
        }
        snapshots.push(u.clone());
    }

    let masses = snapshots.iter().map(|s| trapezoid(s, hx)).collect();
    Ok(EvolutionResult {
        grid: grid.clone(),
        scheme: SchemeInfo {
            name: "crank-nicolson",
            hx,
            ht,
            boundary: settings.boundary,
        },
        snapshots,
        masses,
        warnings,
    })
}

/// Solves the tridiagonal system in place; `rhs` becomes the solution.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> std::result::Result<(), String> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    if beta.abs() < 1e-300 {
        return Err("zero pivot in row 0".into());
    }
    rhs[0] /= beta;
    for i in 1..n {
        c[i - 1] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i - 1];
        if beta.abs() < 1e-300 || !beta.is_finite() {
            return Err(format!("zero pivot in row {i}"));
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Ok(())
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..n - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnapshotError {
    pub t: f64,
    pub linf: f64,
    pub l2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub grid: Grid,
    pub per_snapshot: Vec<SnapshotError>,
    pub final_linf: f64,
    pub final_l2: f64,
    /// Set by [`ErrorReport::with_refined`].
    pub convergence_order: Option<f64>,
}

impl ErrorReport {
    pub const CSV_HEADER: &'static str = "t,Linf,L2";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for e in &self.per_snapshot {
            s.push_str(&format!(
                "{},{},{}\n",
                crate::fmt_num(e.t),
                crate::fmt_num(e.linf),
                crate::fmt_num(e.l2)
            ));
        }
        s
    }

    /// Attaches the observed order `log2(e_h / e_{h/2})` of the final-time
    /// max error, given the report of a run on `self.grid.refined()`.
    pub fn with_refined(mut self, fine: &ErrorReport) -> Result<ErrorReport> {
        if fine.grid != self.grid.refined() {
            return Err(Error::GridMismatch(format!(
                "expected the refinement of {}, got {}",
                self.grid.descriptor(),
                fine.grid.descriptor()
            )));
        }
        self.convergence_order = Some(convergence_order(self.final_linf, fine.final_linf));
        Ok(self)
    }
}

/// Per-snapshot errors of `result` against an analytic field.
pub fn compare_evolutions(result: &EvolutionResult, analytic: &dyn ScalarField2D) -> Result<ErrorReport> {
    let grid = &result.grid;
    if result.snapshots.len() != grid.nt || result.snapshots.iter().any(|s| s.len() != grid.nx) {
        return Err(Error::GridMismatch(format!(
            "snapshots do not match grid {}",
            grid.descriptor()
        )));
    }
    check_rect(analytic, &grid.rect())?;
    let per_snapshot: Vec<SnapshotError> = result
        .snapshots
        .iter()
        .enumerate()
        .map(|(j, snap)| {
            let t = grid.t(j as isize);
            let (mut linf, mut sq) = (0.0_f64, 0.0);
            for (i, v) in snap.iter().enumerate() {
                let e = v - analytic.eval(grid.x(i as isize), t);
                linf = linf.max(e.abs());
                sq += e * e;
            }
            SnapshotError {
                t,
                linf,
                l2: (sq * grid.hx()).sqrt(),
            }
        })
        .collect();
    let last = *per_snapshot.last().expect("grid has nt >= 5");
    Ok(ErrorReport {
        grid: grid.clone(),
        per_snapshot,
        final_linf: last.linf,
        final_l2: last.l2,
        convergence_order: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Constant, FnField};
    use crate::jet::Jet;

    fn heat_kernel() -> FnField<impl Fn(Jet, Jet) -> Jet + Send + Sync> {
        FnField::new("heat kernel", Rect::from_time(0.01), |x: Jet, t: Jet| {
            (x * x * t.recip() * -0.25).exp() * (t * (4.0 * std::f64::consts::PI)).powf(-0.5)
        })
    }

    #[test]
    fn constant_stays_constant_under_neumann() {
        let g = Grid::new(41, 21, -1.0, 1.0, 0.0, 1.0).unwrap();
        let s = SolverSettings::with_boundary(Boundary::NeumannZero);
        let r = evolve_diffusion(Potential::Const(0.0), &vec![1.0; 41], &g, &s).unwrap();
        assert_eq!(r.snapshots.len(), 21);
        for v in r.final_snapshot() {
            assert!((v - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn heat_kernel_converges_at_second_order() {
        let k = heat_kernel();
        let s = SolverSettings::default();
        let errs: Vec<f64> = [81, 161]
            .iter()
            .map(|&n| {
                let g = Grid::new(n, n, -6.0, 6.0, 0.1, 1.0).unwrap();
                let init = slice(&k, &g, 0.1).unwrap();
                let r = evolve_fp(&Constant(0.0), &init, &g, &s).unwrap();
                compare_evolutions(&r, &k).unwrap().final_linf
            })
            .collect();
        let order = convergence_order(errs[0], errs[1]);
        assert!((1.8..=2.2).contains(&order), "order {order}, errors {errs:?}");
    }

    #[test]
    fn identical_inputs_give_zero_error() {
        let k = heat_kernel();
        let g = Grid::new(11, 6, -1.0, 1.0, 0.5, 1.0).unwrap();
        let snaps = (0..6).map(|j| slice(&k, &g, g.t(j)).unwrap()).collect();
        let r = EvolutionResult::from_snapshots(g, Boundary::DirichletZero, snaps);
        let e = compare_evolutions(&r, &k).unwrap();
        assert!(e.per_snapshot.iter().all(|s| s.linf == 0.0 && s.l2 == 0.0));
    }

    #[test]
    fn refined_report_must_match_grid() {
        let k = heat_kernel();
        let g = Grid::new(11, 6, -1.0, 1.0, 0.5, 1.0).unwrap();
        let snaps = (0..6).map(|j| slice(&k, &g, g.t(j)).unwrap()).collect();
        let e = compare_evolutions(&EvolutionResult::from_snapshots(g, Boundary::DirichletZero, snaps), &k).unwrap();
        assert!(matches!(e.clone().with_refined(&e), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn growing_solution_aborts() {
        // u_t = u'' + 50 u grows like e^{50 t}.
        let g = Grid::new(21, 21, -1.0, 1.0, 0.0, 1.0).unwrap();
        let s = SolverSettings {
            growth_limit: 1e3,
            ..SolverSettings::with_boundary(Boundary::NeumannZero)
        };
        let err = evolve_diffusion(Potential::Const(-50.0), &vec![1.0; 21], &g, &s).unwrap_err();
        assert!(matches!(err, Error::Instability { .. }), "{err}");
    }

    #[test]
    fn warns_when_data_reaches_the_edge() {
        let g = Grid::new(21, 6, -1.0, 1.0, 0.0, 0.1).unwrap();
        let r = evolve_diffusion(Potential::Const(0.0), &vec![1.0; 21], &g, &SolverSettings::default()).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn wrong_length_initial_data_is_rejected() {
        let g = Grid::new(21, 6, -1.0, 1.0, 0.0, 0.1).unwrap();
        let err = evolve_diffusion(Potential::Const(0.0), &[1.0; 5], &g, &SolverSettings::default());
        assert!(matches!(err, Err(Error::GridMismatch(_))));
    }

    #[test]
    fn boundary_parses() {
        assert_eq!("neumann_zero".parse::<Boundary>().unwrap(), Boundary::NeumannZero);
        assert!("periodic".parse::<Boundary>().is_err());
    }
}
