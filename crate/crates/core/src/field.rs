//! Scalar fields on the `(x, t)` plane.
//!
//! Every field exposes exact derivatives through [`ScalarField2D::jet`]. The
//! convenience accessors `dx`, `dxx` and `dt` read them off an order-2 jet.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};

/// Closed rectangle `[x_min, x_max] × [t_min, t_max]`; bounds may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rect {
    pub const ALL: Rect = Rect {
        x_min: f64::NEG_INFINITY,
        x_max: f64::INFINITY,
        t_min: f64::NEG_INFINITY,
        t_max: f64::INFINITY,
    };

    pub fn new(x_min: f64, x_max: f64, t_min: f64, t_max: f64) -> Self {
        Rect {
            x_min,
            x_max,
            t_min,
            t_max,
        }
    }

    /// All `x`, and `t >= t_min`.
    pub fn from_time(t_min: f64) -> Self {
        Rect {
            t_min,
            ..Rect::ALL
        }
    }

    pub fn contains(&self, x: f64, t: f64) -> bool {
        x >= self.x_min && x <= self.x_max && t >= self.t_min && t <= self.t_max
    }

    pub fn is_empty(&self) -> bool {
        !(self.x_min <= self.x_max && self.t_min <= self.t_max)
    }

    pub fn intersect(&self, other: &Rect) -> Rect {
        Rect {
            x_min: self.x_min.max(other.x_min),
            x_max: self.x_max.min(other.x_max),
            t_min: self.t_min.max(other.t_min),
            t_max: self.t_max.min(other.t_max),
        }
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.contains(other.x_min, other.t_min) && self.contains(other.x_max, other.t_max)
    }
}

/// Where a field's derivatives come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeSource {
    Analytic,
    FiniteDifference,
}

/// A smooth function of `(x, t)` with exact derivatives.
pub trait ScalarField2D: Send + Sync {
    /// Human-readable label used in error messages.
    fn name(&self) -> String {
        "field".to_string()
    }

    /// Rectangle on which the field is finite and smooth.
    fn domain(&self) -> Rect;

    /// Taylor jet at `(x, t)` truncated at total order `order`.
    ///
    /// Unchecked: callers validate the point with [`ScalarField2D::check`].
    fn jet(&self, x: f64, t: f64, order: usize) -> Jet;

    /// Highest jet order served from exact derivatives.
    fn max_order(&self) -> usize {
        MAX_ORDER
    }

    fn check(&self, x: f64, t: f64) -> Result<()> {
        if self.domain().contains(x, t) {
            Ok(())
        } else {
            Err(Error::domain(&self.name(), x, t))
        }
    }

    fn eval(&self, x: f64, t: f64) -> f64 {
        self.jet(x, t, 0).value()
    }

    fn dx(&self, x: f64, t: f64) -> f64 {
        self.jet(x, t, 1).dx()
    }

    fn dxx(&self, x: f64, t: f64) -> f64 {
        self.jet(x, t, 2).dxx()
    }

    fn dt(&self, x: f64, t: f64) -> f64 {
        self.jet(x, t, 1).dt()
    }

    fn try_eval(&self, x: f64, t: f64) -> Result<f64> {
        self.check(x, t)?;
        Ok(self.eval(x, t))
    }

    fn try_jet(&self, x: f64, t: f64, order: usize) -> Result<Jet> {
        self.check(x, t)?;
        Ok(self.jet(x, t, order))
    }
}

pub type SharedField = Arc<dyn ScalarField2D>;

impl<F: ScalarField2D + ?Sized> ScalarField2D for Arc<F> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn jet(&self, x: f64, t: f64, order: usize) -> Jet {
        (**self).jet(x, t, order)
    }
    fn max_order(&self) -> usize {
        (**self).max_order()
    }
    fn check(&self, x: f64, t: f64) -> Result<()> {
        (**self).check(x, t)
    }
    fn eval(&self, x: f64, t: f64) -> f64 {
        (**self).eval(x, t)
    }
}

impl<F: ScalarField2D + ?Sized> ScalarField2D for &F {
    fn name(&self) -> String {
        (**self).name()
    }
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn jet(&self, x: f64, t: f64, order: usize) -> Jet {
        (**self).jet(x, t, order)
    }
    fn max_order(&self) -> usize {
        (**self).max_order()
    }
    fn check(&self, x: f64, t: f64) -> Result<()> {
        (**self).check(x, t)
    }
    fn eval(&self, x: f64, t: f64) -> f64 {
        (**self).eval(x, t)
    }
}

/// A field defined by a jet-valued closure.
pub struct FnField<F> {
    name: String,
    domain: Rect,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(Jet, Jet) -> Jet + Send + Sync,
{
    /// `f` receives the coordinate jets `x` and `t` and returns the field's
    /// jet, so any expression built from [`Jet`] arithmetic works.
    pub fn new(name: impl Into<String>, domain: Rect, f: F) -> Self {
        FnField {
            name: name.into(),
            domain,
            f,
        }
    }
}

impl<F> ScalarField2D for FnField<F>
where
    F: Fn(Jet, Jet) -> Jet + Send + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }
    fn domain(&self) -> Rect {
        self.domain
    }
    fn jet(&self, x: f64, t: f64, order: usize) -> Jet {
        (self.f)(Jet::var_x(x, order), Jet::var_t(t, order))
    }
}

/// Constant field.
#[derive(Clone, Copy, Debug)]
pub struct Constant(pub f64);

impl ScalarField2D for Constant {
    fn name(&self) -> String {
        format!("constant {}", self.0)
    }
    fn domain(&self) -> Rect {
        Rect::ALL
    }
    fn jet(&self, _x: f64, _t: f64, order: usize) -> Jet {
        Jet::constant(self.0, order)
    }
}

/// Step used when a jet has to be completed by central differences.
const FD_FALLBACK_STEP: f64 = 1e-4;

/// Order-2 jet of `field` with derivatives from central differences of
/// `eval`. Used when a composite field needs more derivatives than its
/// ingredients provide exactly.
pub fn fd_jet(field: &dyn ScalarField2D, x: f64, t: f64, order: usize) -> Jet {
    let h = FD_FALLBACK_STEP;
    let f = |x: f64, t: f64| field.eval(x, t);
    let v = f(x, t);
    let order = order.min(2);
    Jet::from_derivatives(order, |i, j| match (i, j) {
        (0, 0) => v,
        (1, 0) => (f(x + h, t) - f(x - h, t)) / (2.0 * h),
        (0, 1) => (f(x, t + h) - f(x, t - h)) / (2.0 * h),
        (2, 0) => (f(x + h, t) - 2.0 * v + f(x - h, t)) / (h * h),
        (0, 2) => (f(x, t + h) - 2.0 * v + f(x, t - h)) / (h * h),
        (1, 1) => {
            (f(x + h, t + h) - f(x + h, t - h) - f(x - h, t + h) + f(x - h, t - h))
                / (4.0 * h * h)
        }
        _ => 0.0,
    })
}
