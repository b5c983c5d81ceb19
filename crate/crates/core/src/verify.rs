//! Finite-difference oracle: stencils, grid sweeps, residual norms and
//! observed convergence orders.
//!
//! Nothing here reads a field's analytic derivatives when finite differences
//! are requested; sampled values are the only input, so the checks stay
//! independent of the closed forms they validate.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Rect, ScalarField2D};
use crate::jet::Jet;
use crate::susy::{LinearOperator, Potential, SusyModel};
use crate::fmt_num;

/// Rectangular `(x, t)` lattice, node-inclusive at both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub nx: usize,
    pub nt: usize,
}

impl Grid {
    pub fn new(nx: usize, nt: usize, x_min: f64, x_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        if nx < 5 || nt < 5 {
            return Err(Error::Grid(format!(
                "need at least 5 nodes per axis for the stencils, got nx = {nx}, nt = {nt}"
            )));
        }
        let finite = [x_min, x_max, t_min, t_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || t_min >= t_max {
            return Err(Error::Grid(format!(
                "bounds must be finite with x_min < x_max and t_min < t_max, got \
                 x in [{x_min}, {x_max}], t in [{t_min}, {t_max}]"
            )));
        }
        Ok(Grid {
            x_min,
            x_max,
            t_min,
            t_max,
            nx,
            nt,
        })
    }

    pub fn hx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn ht(&self) -> f64 {
        (self.t_max - self.t_min) / (self.nt - 1) as f64
    }

    /// Node coordinate; negative and past-the-end indices address halo nodes.
    pub fn x(&self, i: isize) -> f64 {
        if i == self.nx as isize - 1 {
            self.x_max
        } else {
            self.x_min + i as f64 * self.hx()
        }
    }

    pub fn t(&self, j: isize) -> f64 {
        if j == self.nt as isize - 1 {
            self.t_max
        } else {
            self.t_min + j as f64 * self.ht()
        }
    }

    pub fn rect(&self) -> Rect {
        self.halo_rect(0)
    }

    /// Rectangle covered by the grid extended by `halo` nodes on each side.
    pub fn halo_rect(&self, halo: usize) -> Rect {
        let h = halo as f64;
        Rect::new(
            self.x_min - h * self.hx(),
            self.x_max + h * self.hx(),
            self.t_min - h * self.ht(),
            self.t_max + h * self.ht(),
        )
    }

    /// Same rectangle with both spacings halved.
    pub fn refined(&self) -> Grid {
        Grid {
            nx: 2 * self.nx - 1,
            nt: 2 * self.nt - 1,
            ..*self
        }
    }

    /// Nodes in t-major order: `(i, j, x, t)`.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        (0..self.nt).flat_map(move |j| {
            (0..self.nx).map(move |i| (i, j, self.x(i as isize), self.t(j as isize)))
        })
    }

    /// `nx,nt,x_min,x_max,t_min,t_max`
    pub fn descriptor(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.nx, self.nt, self.x_min, self.x_max, self.t_min, self.t_max
        )
    }
}

/// Norms of a residual over a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub name: String,
    pub max_norm: f64,
    pub l2_norm: f64,
    pub worst_node: (f64, f64),
    pub grid: Grid,
    pub convergence_order: Option<f64>,
    pub nan_nodes: Vec<(f64, f64)>,
}

impl ResidualReport {
    /// Reduces nodal residuals in the given (t-major) order.
    pub fn from_nodes(
        name: impl Into<String>,
        grid: Grid,
        residuals: impl IntoIterator<Item = (f64, f64, f64)>,
    ) -> Self {
        let mut max_norm = 0.0_f64;
        let mut sum_sq = 0.0;
        let mut worst_node = (grid.x_min, grid.t_min);
        let mut nan_nodes = Vec::new();
        for (x, t, r) in residuals {
            if !r.is_finite() {
                nan_nodes.push((x, t));
                continue;
            }
            let a = r.abs();
            if a > max_norm {
                max_norm = a;
                worst_node = (x, t);
            }
            sum_sq += r * r;
        }
        if !nan_nodes.is_empty() {
            max_norm = f64::NAN;
            worst_node = nan_nodes[0];
        }
        ResidualReport {
            name: name.into(),
            max_norm,
            l2_norm: (sum_sq * grid.hx() * grid.ht()).sqrt(),
            worst_node,
            grid,
            convergence_order: None,
            nan_nodes,
        }
    }

    /// False when any node produced NaN/Inf or the max norm exceeds `threshold`.
    pub fn passes(&self, threshold: f64) -> bool {
        self.nan_nodes.is_empty() && self.max_norm < threshold
    }

    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "max_norm = {}", fmt_num(self.max_norm));
        let _ = writeln!(s, "l2_norm = {}", fmt_num(self.l2_norm));
        let _ = writeln!(s, "worst_x = {}", fmt_num(self.worst_node.0));
        let _ = writeln!(s, "worst_t = {}", fmt_num(self.worst_node.1));
        let _ = writeln!(s, "grid = {}", self.grid.descriptor());
        let order = self.convergence_order.map_or("none".to_string(), fmt_num);
        let _ = writeln!(s, "convergence_order = {order}");
        let _ = writeln!(s, "nan_nodes = {}", self.nan_nodes.len());
        s
    }

    pub const CSV_HEADER: &'static str =
        "name,max_norm,l2_norm,worst_x,worst_t,nx,nt,x_min,x_max,t_min,t_max,convergence_order";

    pub fn to_csv_row(&self) -> String {
        let g = &self.grid;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.name.replace(',', ";"),
            fmt_num(self.max_norm),
            fmt_num(self.l2_norm),
            fmt_num(self.worst_node.0),
            fmt_num(self.worst_node.1),
            g.nx,
            g.nt,
            fmt_num(g.x_min),
            fmt_num(g.x_max),
            fmt_num(g.t_min),
            fmt_num(g.t_max),
            self.convergence_order.map_or(String::new(), fmt_num),
        )
    }
}

/// Observed order from the max norms of an `h` and an `h/2` run.
pub fn convergence_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Evaluates `residual` at every node of `grid` and reduces it.
pub fn sweep(name: &str, grid: &Grid, mut residual: impl FnMut(f64, f64) -> f64) -> ResidualReport {
    let values: Vec<_> = grid.nodes().map(|(_, _, x, t)| (x, t, residual(x, t))).collect();
    ResidualReport::from_nodes(name, *grid, values)
}

/// Finite-difference stencil family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Stencil {
    /// 3-point central, second order.
    #[default]
    Central3,
    /// 5-point central, fourth order.
    Central5,
}

impl Stencil {
    fn reach(self) -> f64 {
        match self {
            Stencil::Central3 => 1.0,
            Stencil::Central5 => 2.0,
        }
    }
}

fn stencil_check(field: &dyn ScalarField2D, x: f64, t: f64, dx: f64, dt: f64) -> Result<()> {
    field.check(x - dx, t - dt)?;
    field.check(x + dx, t + dt)
}

fn first(f: impl Fn(f64) -> f64, h: f64, stencil: Stencil) -> f64 {
    match stencil {
        Stencil::Central3 => (f(h) - f(-h)) / (2.0 * h),
        Stencil::Central5 => (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h),
    }
}

fn second(f: impl Fn(f64) -> f64, h: f64, stencil: Stencil) -> f64 {
    match stencil {
        Stencil::Central3 => (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h),
        Stencil::Central5 => {
            (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h))
                / (12.0 * h * h)
        }
    }
}

pub fn fd_dx(field: &dyn ScalarField2D, x: f64, t: f64, h: f64) -> Result<f64> {
    fd_dx_with(field, x, t, h, Stencil::Central3)
}

pub fn fd_dxx(field: &dyn ScalarField2D, x: f64, t: f64, h: f64) -> Result<f64> {
    fd_dxx_with(field, x, t, h, Stencil::Central3)
}

pub fn fd_dt(field: &dyn ScalarField2D, x: f64, t: f64, h: f64) -> Result<f64> {
    fd_dt_with(field, x, t, h, Stencil::Central3)
}

pub fn fd_dx_with(field: &dyn ScalarField2D, x: f64, t: f64, h: f64, s: Stencil) -> Result<f64> {
    stencil_check(field, x, t, s.reach() * h, 0.0)?;
    Ok(first(|d| field.eval(x + d, t), h, s))
}

pub fn fd_dxx_with(field: &dyn ScalarField2D, x: f64, t: f64, h: f64, s: Stencil) -> Result<f64> {
    stencil_check(field, x, t, s.reach() * h, 0.0)?;
    Ok(second(|d| field.eval(x + d, t), h, s))
}

pub fn fd_dt_with(field: &dyn ScalarField2D, x: f64, t: f64, h: f64, s: Stencil) -> Result<f64> {
    stencil_check(field, x, t, 0.0, s.reach() * h)?;
    Ok(first(|d| field.eval(x, t + d), h, s))
}

/// Nodal values on a grid extended by a halo of ghost nodes.
#[derive(Clone, Debug)]
pub struct Sampled {
    grid: Grid,
    halo: usize,
    values: Vec<f64>,
}

impl Sampled {
    /// Samples `field` on `grid` plus `halo` nodes in every direction.
    pub fn sample(field: &dyn ScalarField2D, grid: &Grid, halo: usize) -> Result<Self> {
        let r = grid.halo_rect(halo);
        field.check(r.x_min, r.t_min)?;
        field.check(r.x_max, r.t_max)?;
        Ok(Self::from_fn(grid, halo, |x, t| field.eval(x, t)))
    }

    pub fn from_fn(grid: &Grid, halo: usize, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let h = halo as isize;
        let mut values = Vec::with_capacity((grid.nx + 2 * halo) * (grid.nt + 2 * halo));
        for j in -h..grid.nt as isize + h {
            let t = grid.t(j);
            for i in -h..grid.nx as isize + h {
                values.push(f(grid.x(i), t));
            }
        }
        Sampled {
            grid: *grid,
            halo,
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn halo(&self) -> usize {
        self.halo
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> f64 {
        let h = self.halo as isize;
        let width = self.grid.nx as isize + 2 * h;
        self.values[((j + h) * width + (i + h)) as usize]
    }

    /// Applies a 3-point stencil expression at every node of the shrunken
    /// halo. `f` receives the node indices and coordinates.
    pub fn shrink(&self, mut f: impl FnMut(&Sampled, isize, isize, f64, f64) -> f64) -> Sampled {
        assert!(self.halo >= 1, "no halo left to apply a stencil");
        let out_halo = self.halo - 1;
        let grid = self.grid;
        let h = out_halo as isize;
        let mut values = Vec::with_capacity((grid.nx + 2 * out_halo) * (grid.nt + 2 * out_halo));
        for j in -h..grid.nt as isize + h {
            let t = grid.t(j);
            for i in -h..grid.nx as isize + h {
                values.push(f(self, i, j, grid.x(i), t));
            }
        }
        Sampled {
            grid,
            halo: out_halo,
            values,
        }
    }

    pub fn zip_with(&self, other: &Sampled, f: impl Fn(f64, f64) -> f64) -> Sampled {
        assert_eq!(self.grid, other.grid);
        assert_eq!(self.halo, other.halo);
        Sampled {
            grid: self.grid,
            halo: self.halo,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn d_x(&self, i: isize, j: isize) -> f64 {
        (self.get(i + 1, j) - self.get(i - 1, j)) / (2.0 * self.grid.hx())
    }

    pub fn d_xx(&self, i: isize, j: isize) -> f64 {
        let hx = self.grid.hx();
        (self.get(i + 1, j) - 2.0 * self.get(i, j) + self.get(i - 1, j)) / (hx * hx)
    }

    pub fn d_t(&self, i: isize, j: isize) -> f64 {
        (self.get(i, j + 1) - self.get(i, j - 1)) / (2.0 * self.grid.ht())
    }

    /// Reduces the grid nodes (halo excluded) into a report.
    pub fn report(&self, name: &str) -> ResidualReport {
        let g = self.grid;
        let values: Vec<_> = g
            .nodes()
            .map(|(i, j, x, t)| (x, t, self.get(i as isize, j as isize)))
            .collect();
        ResidualReport::from_nodes(name, g, values)
    }
}

/// How derivatives of the tested fields are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivatives {
    Analytic,
    FiniteDifference,
}

/// Residual of `operator` applied to `field` over the grid.
pub fn residual_sweep(
    operator: &LinearOperator<'_>,
    field: &dyn ScalarField2D,
    grid: &Grid,
    derivatives: Derivatives,
) -> Result<ResidualReport> {
    let name = format!("{} applied to {}", operator.name(), field.name());
    match derivatives {
        Derivatives::Analytic => {
            check_rect(field, &grid.rect())?;
            operator.check_rect(&grid.rect())?;
            let order = operator.order_loss();
            Ok(sweep(&name, grid, |x, t| {
                operator.apply_jet(&field.jet(x, t, order), x, t).value()
            }))
        }
        Derivatives::FiniteDifference => {
            let s = Sampled::sample(field, grid, 1)?;
            Ok(operator.apply_fd(&s)?.report(&name))
        }
    }
}

/// [`residual_sweep`] on `grid` and on its refinement, with the observed order.
pub fn residual_sweep_with_order(
    operator: &LinearOperator<'_>,
    field: &dyn ScalarField2D,
    grid: &Grid,
) -> Result<ResidualReport> {
    let coarse = residual_sweep(operator, field, grid, Derivatives::FiniteDifference)?;
    let fine = residual_sweep(operator, field, &grid.refined(), Derivatives::FiniteDifference)?;
    Ok(ResidualReport {
        convergence_order: Some(convergence_order(coarse.max_norm, fine.max_norm)),
        ..coarse
    })
}

pub(crate) fn check_rect(field: &dyn ScalarField2D, r: &Rect) -> Result<()> {
    field.check(r.x_min, r.t_min)?;
    field.check(r.x_max, r.t_max)
}

/// `D[V1](Nφ) − M(D[V2]φ)` on the grid.
///
/// With [`Derivatives::FiniteDifference`] every derivative of `φ` and of the
/// composite fields `Nφ`, `D[V2]φ` comes from central differences at the grid
/// spacing; the report then carries the observed order from a second run on
/// the refined grid. The coefficients `f'`, `V1`, `g2` are evaluated exactly.
pub fn intertwining_identity_check(
    model: &SusyModel,
    test_field: &dyn ScalarField2D,
    grid: &Grid,
    derivatives: Derivatives,
) -> Result<ResidualReport> {
    let v1 = model.v1_field();
    let d1 = LinearOperator::Diffusion(Potential::Field(&v1));
    let d2 = LinearOperator::Diffusion(Potential::Const(model.v2()));
    let n = LinearOperator::N(model);
    let m = LinearOperator::M(model);
    identity_check(
        "intertwining D[V1] N - M D[V2]",
        (&d1, &n),
        (&m, &d2),
        test_field,
        grid,
        derivatives,
    )
}

/// `N†(D†[V1]φ) − D†[V2](M†φ)` on the grid; see [`intertwining_identity_check`].
pub fn conjugate_identity_check(
    model: &SusyModel,
    test_field: &dyn ScalarField2D,
    grid: &Grid,
    derivatives: Derivatives,
) -> Result<ResidualReport> {
    let v1 = model.v1_field();
    let d1 = LinearOperator::DiffusionAdjoint(Potential::Field(&v1));
    let d2 = LinearOperator::DiffusionAdjoint(Potential::Const(model.v2()));
    let n = LinearOperator::NAdjoint(model);
    let m = LinearOperator::MAdjoint(model);
    identity_check(
        "conjugate N+ D+[V1] - D+[V2] M+",
        (&n, &d1),
        (&d2, &m),
        test_field,
        grid,
        derivatives,
    )
}

type Pair<'o, 'a> = (&'o LinearOperator<'a>, &'o LinearOperator<'a>);

/// Residual of `left.0 ∘ left.1 − right.0 ∘ right.1` applied to `field`.
fn identity_check(
    name: &str,
    left: Pair<'_, '_>,
    right: Pair<'_, '_>,
    field: &dyn ScalarField2D,
    grid: &Grid,
    derivatives: Derivatives,
) -> Result<ResidualReport> {
    let via = match derivatives {
        Derivatives::Analytic => "exact derivatives",
        Derivatives::FiniteDifference => "finite differences",
    };
    let name = format!("{name} on {} ({via})", field.name());
    match derivatives {
        Derivatives::Analytic => {
            check_rect(field, &grid.rect())?;
            for op in [left.0, left.1, right.0, right.1] {
                op.check_rect(&grid.rect())?;
            }
            let order = left.0.order_loss() + left.1.order_loss();
            debug_assert_eq!(order, right.0.order_loss() + right.1.order_loss());
            Ok(sweep(&name, grid, |x, t| {
                let phi: Jet = field.jet(x, t, order);
                let l = left.0.apply_jet(&left.1.apply_jet(&phi, x, t), x, t);
                let r = right.0.apply_jet(&right.1.apply_jet(&phi, x, t), x, t);
                l.value() - r.value()
            }))
        }
        Derivatives::FiniteDifference => {
            let run = |g: &Grid| -> Result<ResidualReport> {
                let s = Sampled::sample(field, g, 2)?;
                let l = left.0.apply_fd(&left.1.apply_fd(&s)?)?;
                let r = right.0.apply_fd(&right.1.apply_fd(&s)?)?;
                Ok(l.zip_with(&r, |a, b| a - b).report(&name))
            };
            let coarse = run(grid)?;
            let fine = run(&grid.refined())?;
            Ok(ResidualReport {
                convergence_order: Some(convergence_order(coarse.max_norm, fine.max_norm)),
                ..coarse
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FnField;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(4, 10, 0.0, 1.0, 0.0, 1.0).is_err());
        assert!(Grid::new(10, 10, 1.0, 1.0, 0.0, 1.0).is_err());
        let g = Grid::new(11, 5, -1.0, 1.0, 0.0, 2.0).unwrap();
        assert!((g.hx() - 0.2).abs() < 1e-15);
        assert_eq!(g.ht(), 0.5);
        assert_eq!(g.x(10), 1.0);
        let r = g.refined();
        assert_eq!((r.nx, r.nt), (21, 9));
        assert!((r.hx() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn stencils_on_simple_fields() {
        let quad = FnField::new("x^2", Rect::ALL, |x: Jet, _t: Jet| x * x);
        assert!((fd_dxx(&quad, 0.37, 0.0, 0.1).unwrap() - 2.0).abs() < 1e-12);
        // value-only field: the stencils never look at derivatives
        struct Sin;
        impl ScalarField2D for Sin {
            fn domain(&self) -> Rect {
                Rect::ALL
            }
            fn jet(&self, x: f64, _t: f64, order: usize) -> Jet {
                Jet::constant(x.sin(), order)
            }
        }
        let d = fd_dx(&Sin, 0.0, 0.0, 0.01).unwrap();
        assert!((d - 0.999_983_333_416_666_5).abs() < 1e-15, "{d}");
        let k = FnField::new("const", Rect::ALL, |x: Jet, _t: Jet| x * 0.0 + 3.0);
        assert_eq!(fd_dx(&k, 1.0, 1.0, 0.1).unwrap(), 0.0);
        assert_eq!(fd_dxx(&k, 1.0, 1.0, 0.1).unwrap(), 0.0);
        assert_eq!(fd_dt(&k, 1.0, 1.0, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn fourth_order_stencil_is_more_accurate() {
        let e = FnField::new("exp", Rect::ALL, |x: Jet, t: Jet| (x * 0.7 + t).exp());
        let exact = 0.7 * (0.7_f64 * 0.2 + 0.1).exp();
        let e3 = (fd_dx(&e, 0.2, 0.1, 0.05).unwrap() - exact).abs();
        let e5 = (fd_dx_with(&e, 0.2, 0.1, 0.05, Stencil::Central5).unwrap() - exact).abs();
        assert!(e5 < e3 / 100.0, "{e5} vs {e3}");
    }

    #[test]
    fn stencil_leaving_domain_is_an_error() {
        let f = FnField::new("half", Rect::from_time(0.0), |_x: Jet, t: Jet| t);
        assert!(matches!(fd_dt(&f, 0.0, 0.05, 0.1), Err(Error::Domain { .. })));
        assert!(fd_dt(&f, 0.0, 0.5, 0.1).is_ok());
    }

    #[test]
    fn report_norms_and_serialisation() {
        let g = Grid::new(5, 5, 0.0, 1.0, 0.0, 1.0).unwrap();
        let r = sweep("ramp", &g, |x, t| x - t);
        assert_eq!(r.max_norm, 1.0);
        assert_eq!(r.worst_node, (1.0, 0.0));
        let kv = r.to_key_value();
        assert!(kv.contains("name = ramp\n"));
        assert!(kv.contains("max_norm = 1.0000000000000000e0\n"), "{kv}");
        assert!(kv.contains("convergence_order = none"));
        let row = r.to_csv_row();
        assert_eq!(row.split(',').count(), ResidualReport::CSV_HEADER.split(',').count());
        let nan = sweep("nan", &g, |x, _t| if x > 0.5 { f64::NAN } else { 0.0 });
        assert!(!nan.passes(1.0));
        assert_eq!(nan.nan_nodes.len(), 10);
    }
}
