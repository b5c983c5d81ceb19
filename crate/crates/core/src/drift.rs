//! Drift coefficients and probability densities of the partner pair.
//!
//! A drift is written `U = −2 ln ρ`, where `ρ` is a zero mode of `D†[V]`.
//! Probability densities and diffusion zero modes are related by
//! `Ψ = e^{U/2} P = P / ρ`, hence `P1 = ρ1 · N(P2 / ρ2)`.
//!
//! For the constant potential `V2 = c/2` the drift `U2 = −2βx`, `β = √(c/2)`
//! comes from `ρ2 = e^{ct/2} e^{βx − β²t}`. The partner zero mode is
//! `ρ1 = e^{ct/2} (a + b ∫ω dx) / ω`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FnField, Rect, ScalarField2D, SharedField};
use crate::jet::Jet;
use crate::susy::{
    psi1_from_psi2, psi2_gaussian, LinearOperator, PartnerZeroMode, Potential, SusyModel,
};
use crate::verify::{check_rect, sweep, Grid, ResidualReport};

/// `ρ2 = e^{ct/2} e^{βx − β²t}`, which reduces to `e^{βx}` since `β² = c/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantPotentialRho {
    c: f64,
    beta: f64,
}

impl ScalarField2D for ConstantPotentialRho {
    fn name(&self) -> String {
        "rho2".to_string()
    }
    fn domain(&self) -> Rect {
        Rect::ALL
    }
    fn jet(&self, x: f64, t: f64, order: usize) -> Jet {
        let tj = Jet::var_t(t, order);
        let v = (Jet::var_x(x, order) * self.beta - tj * (self.beta * self.beta)).exp();
        (tj * (0.5 * self.c)).exp() * v
    }
}

/// `U2 = −ct − 2 ln v` with `v = e^{βx − β²t}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantPotentialDrift {
    c: f64,
    beta: f64,
}

impl ConstantPotentialDrift {
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl ScalarField2D for ConstantPotentialDrift {
    fn name(&self) -> String {
        "U2".to_string()
    }
    fn domain(&self) -> Rect {
        Rect::ALL
    }
    fn jet(&self, x: f64, t: f64, order: usize) -> Jet {
        let tj = Jet::var_t(t, order);
        let ln_v = Jet::var_x(x, order) * self.beta - tj * (self.beta * self.beta);
        tj * -self.c - ln_v * 2.0
    }
}

pub fn recover_u2(c: f64) -> Result<(ConstantPotentialDrift, ConstantPotentialRho)> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::parameter(
            "c",
            format!("a real drift U2 = -2 beta x needs c >= 0, got {c}"),
        ));
    }
    let beta = (0.5 * c).sqrt();
    Ok((
        ConstantPotentialDrift { c, beta },
        ConstantPotentialRho { c, beta },
    ))
}

/// `ρ1 = e^{ct/2} (a + b W) / ω`, `W = ∫ω dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartnerRho {
    model: SusyModel,
    a: f64,
    b: f64,
}

impl PartnerRho {
    /// `a + b W`.
    pub fn bracket(&self, x: f64, t: f64) -> f64 {
        self.a + self.b * self.model.omega().antiderivative_x(x, t)
    }

    fn bracket_jet(&self, x: f64, t: f64, order: usize) -> Jet {
        self.model.omega().antiderivative_jet(x, t, order) * self.b + self.a
    }
}

pub fn build_rho1(model: &SusyModel, a: f64, b: f64) -> Result<PartnerRho> {
    if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0) {
        return Err(Error::parameter(
            "a, b",
            format!("need finite a >= 0 and b >= 0, got a = {a}, b = {b}"),
        ));
    }
    if a + b <= 0.0 {
        return Err(Error::parameter("a, b", "a = b = 0 gives rho1 = 0"));
    }
    Ok(PartnerRho {
        model: model.clone(),
        a,
        b,
    })
}

impl ScalarField2D for PartnerRho {
    fn name(&self) -> String {
        format!("rho1 (a = {}, b = {})", self.a, self.b)
    }
    fn domain(&self) -> Rect {
        self.model.domain()
    }
    fn check(&self, x: f64, t: f64) -> Result<()> {
        self.model.check(x, t)?;
        let g = self.bracket(x, t);
        if g > 0.0 {
            Ok(())
        } else {
            Err(Error::Positivity {
                what: "a + b * integral(omega)".to_string(),
                x,
                t,
                value: g,
            })
        }
    }
    fn jet(&self, x: f64, t: f64, order: usize) -> Jet {
        let c = self.model.c();
        let w = self.model.omega().jet(x, t, order);
        (Jet::var_t(t, order) * (0.5 * c)).exp() * self.bracket_jet(x, t, order) / w
    }
}

/// `U1 = −ct + 2 ln ω − 2 ln(a + b W)`, i.e. `−2 ln ρ1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartnerDrift(PartnerRho);

impl ScalarField2D for PartnerDrift {
    fn name(&self) -> String {
        "U1".to_string()
    }
    fn domain(&self) -> Rect {
        self.0.domain()
    }
    fn check(&self, x: f64, t: f64) -> Result<()> {
        self.0.check(x, t)
    }
    fn jet(&self, x: f64, t: f64, order: usize) -> Jet {
        let m = &self.0.model;
        Jet::var_t(t, order) * -m.c() + m.omega().jet(x, t, order).ln() * 2.0
            - self.0.bracket_jet(x, t, order).ln() * 2.0
    }
}

/// Drift coefficients of both partners with their generating zero modes.
#[derive(Clone, Debug)]
pub struct DriftPair {
    model: SusyModel,
    beta: f64,
    a: f64,
    b: f64,
    u2: ConstantPotentialDrift,
    rho2: ConstantPotentialRho,
    rho1: PartnerRho,
}

impl DriftPair {
    pub fn new(model: &SusyModel, a: f64, b: f64) -> Result<Self> {
        let (u2, rho2) = recover_u2(model.c())?;
        let rho1 = build_rho1(model, a, b)?;
        Ok(DriftPair {
            model: model.clone(),
            beta: u2.beta(),
            a,
            b,
            u2,
            rho2,
            rho1,
        })
    }

    pub fn model(&self) -> &SusyModel {
        &self.model
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn u2(&self) -> &ConstantPotentialDrift {
        &self.u2
    }
    pub fn rho2(&self) -> &ConstantPotentialRho {
        &self.rho2
    }
    pub fn rho1(&self) -> &PartnerRho {
        &self.rho1
    }
    pub fn u1(&self) -> PartnerDrift {
        PartnerDrift(self.rho1.clone())
    }

    /// `P2 = ρ2 Ψ2` with `Ψ2` the Gaussian zero mode: an exact solution of
    /// `F[U2] P2 = 0` for `t >= t_min`.
    pub fn default_p2(&self) -> SharedField {
        let rho2 = self.rho2.clone();
        let psi2 = psi2_gaussian(self.model.c());
        let domain = psi2.domain();
        Arc::new(FnField::new("P2 = rho2 * Psi2", domain, move |x: Jet, t: Jet| {
            let (xv, tv, o) = (x.value(), t.value(), x.order());
            rho2.jet(xv, tv, o) * psi2.jet(xv, tv, o)
        }))
    }
}

/// Residuals of the two equations that define `ρ1`:
/// `ρ_t + ρ'' − (c/2 + 2f'')ρ` (zero mode of `D†[V1]`) and
/// `ρ_t + f'ρ' − (c/2 + f'')ρ` (zero mode of `M†`).
pub fn check_rho1_system(
    model: &SusyModel,
    rho1: &dyn ScalarField2D,
    grid: &Grid,
) -> Result<Vec<ResidualReport>> {
    check_rect(rho1, &grid.rect())?;
    for (_, _, x, t) in grid.nodes() {
        rho1.check(x, t)?;
    }
    let half_c = 0.5 * model.c();
    let diffusion = sweep("rho1 zero mode of D+[V1]", grid, |x, t| {
        let r = rho1.jet(x, t, 2);
        r.dt() + r.dxx() - (half_c + 2.0 * model.f_xx(x, t)) * r.value()
    });
    let first_order = sweep("rho1 zero mode of M+", grid, |x, t| {
        let r = rho1.jet(x, t, 1);
        r.dt() + model.f_x(x, t) * r.dx() - (half_c + model.f_xx(x, t)) * r.value()
    });
    Ok(vec![diffusion, first_order])
}

/// Max norm of `V − (¼U'² − ½U'' − ½U_t)`.
pub fn check_potential_drift(
    u: &dyn ScalarField2D,
    v: Potential<'_>,
    grid: &Grid,
) -> Result<ResidualReport> {
    check_rect(u, &grid.rect())?;
    if let Potential::Field(f) = v {
        check_rect(f, &grid.rect())?;
    }
    for (_, _, x, t) in grid.nodes() {
        u.check(x, t)?;
    }
    Ok(sweep(&format!("potential from drift {}", u.name()), grid, |x, t| {
        let uj = u.jet(x, t, 2);
        let vv = match v {
            Potential::Const(c) => c,
            Potential::Field(f) => f.eval(x, t),
        };
        vv - (0.25 * uj.dx() * uj.dx() - 0.5 * uj.dxx() - 0.5 * uj.dt())
    }))
}

/// `P1` together with the diffusion-picture fields it was built through.
pub struct ProbabilityPartner {
    /// `Ψ2 = P2 / ρ2`
    pub psi2: SharedField,
    /// `Ψ1 = N Ψ2`
    pub psi1: PartnerZeroMode,
    /// `P1 = ρ1 N(P2 / ρ2)`
    pub p1: SharedField,
}

pub fn p1_from_p2(drift: &DriftPair, p2: SharedField) -> ProbabilityPartner {
    let model = drift.model.clone();
    let rho1 = drift.rho1.clone();
    let rho2 = drift.rho2.clone();
    let domain = p2.domain().intersect(&model.domain());

    let (p2_, rho2_) = (p2.clone(), rho2.clone());
    let psi2: SharedField = Arc::new(FnField::new("Psi2 = P2 / rho2", p2.domain(), move |x: Jet, t: Jet| {
        let (xv, tv, o) = (x.value(), t.value(), x.order());
        p2_.jet(xv, tv, o) / rho2_.jet(xv, tv, o)
    }));
    let psi1 = psi1_from_psi2(&model, psi2.clone());

    let p1: SharedField = Arc::new(ProbabilityField {
        model,
        rho1,
        rho2,
        p2,
        domain,
    });
    ProbabilityPartner { psi2, psi1, p1 }
}

/// `ρ1 · (∂t + f'∂ + c/2)(P2 / ρ2)`, evaluated in one pass.
struct ProbabilityField {
    model: SusyModel,
    rho1: PartnerRho,
    rho2: ConstantPotentialRho,
    p2: SharedField,
    domain: Rect,
}

impl ScalarField2D for ProbabilityField {
    fn name(&self) -> String {
        "P1".to_string()
    }
    fn domain(&self) -> Rect {
        self.domain
    }
    fn check(&self, x: f64, t: f64) -> Result<()> {
        self.p2.check(x, t)?;
        self.rho1.check(x, t)
    }
    fn max_order(&self) -> usize {
        self.p2.max_order().saturating_sub(1).min(crate::jet::MAX_ORDER - 1)
    }
    fn jet(&self, x: f64, t: f64, order: usize) -> Jet {
        let q = self.p2.jet(x, t, order + 1) / self.rho2.jet(x, t, order + 1);
        let nq = LinearOperator::N(&self.model).apply_jet(&q, x, t);
        nq * self.rho1.jet(x, t, order)
    }
}

/// Second, independent route to `P1` through the diffusion picture:
/// `e^{−U1/2} · N(e^{U2/2} P2)`.
pub fn p1_via_psi_picture(drift: &DriftPair, p2: SharedField) -> SharedField {
    let u2 = drift.u2.clone();
    let u1 = drift.u1();
    let domain = p2.domain().intersect(&drift.model.domain());
    let p2_ = p2.clone();
    let psi2: SharedField = Arc::new(FnField::new("e^{U2/2} P2", p2.domain(), move |x: Jet, t: Jet| {
        let (xv, tv, o) = (x.value(), t.value(), x.order());
        (u2.jet(xv, tv, o) * 0.5).exp() * p2_.jet(xv, tv, o)
    }));
    let psi1 = psi1_from_psi2(&drift.model, psi2);
    Arc::new(FnField::new("e^{-U1/2} N(e^{U2/2} P2)", domain, move |x: Jet, t: Jet| {
        let (xv, tv, o) = (x.value(), t.value(), x.order());
        (u1.jet(xv, tv, o) * -0.5).exp() * psi1.jet(xv, tv, o)
    }))
}

/// Fraction of grid nodes where `field < 0`.
pub fn negative_fraction(field: &dyn ScalarField2D, grid: &Grid) -> f64 {
    let total = grid.nx * grid.nt;
    let negative = grid.nodes().filter(|(_, _, x, t)| field.eval(*x, *t) < 0.0).count();
    negative as f64 / total as f64
}

/// Trapezoidal `∫ field dx` on every time slice of the grid.
pub fn mass_per_slice(field: &dyn ScalarField2D, grid: &Grid) -> Vec<(f64, f64)> {
    let hx = grid.hx();
    (0..grid.nt as isize)
        .map(|j| {
            let t = grid.t(j);
            let n = grid.nx as isize;
            let sum: f64 = (0..n)
                .map(|i| {
                    let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                    w * field.eval(grid.x(i), t)
                })
                .sum();
            (t, sum * hx)
        })
        .collect()
}
