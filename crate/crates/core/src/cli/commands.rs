//! The five commands.

use std::sync::Arc;

use crate::cli::config::{RunConfig, System};
use crate::cli::output::{
    grid_csv, plot_script, write_atomic, ANALYTIC_CSV, ERRORS_CSV, EVOLUTION_CSV, MODEL_CSV, PLOT_SCRIPT,
    VERIFY_CSV,
};
use crate::drift::{check_potential_drift, check_rho1_system, p1_from_p2, p1_via_psi_picture, DriftPair};
use crate::error::{Error, Result};
use crate::field::{FnField, Rect, ScalarField2D, SharedField};
use crate::fmt_num;
use crate::jet::Jet;
use crate::solver::{compare_evolutions, evolve_diffusion, evolve_fp, slice, ErrorReport, SolverSettings};
use crate::susy::{build_model, psi1_from_psi2, psi2_gaussian, shared, LinearOperator, Potential, SusyModel};
use crate::verify::{
    conjugate_identity_check, intertwining_identity_check, residual_sweep, sweep, Derivatives, Grid, ResidualReport,
};

/// One verification row.
#[derive(Clone, Debug)]
pub struct SuiteRow {
    pub report: ResidualReport,
    /// Human-readable acceptance rule.
    pub rule: String,
    pub pass: bool,
}

fn model_and_drift(cfg: &RunConfig) -> Result<(SusyModel, DriftPair)> {
    let model = build_model(cfg.seed.clone(), cfg.c)?.with_g2_perturbation(cfg.g2_shift);
    let drift = DriftPair::new(&model, cfg.a, cfg.b)?;
    Ok((model, drift))
}

fn closed_form_summary(cfg: &RunConfig, drift: &DriftPair) -> String {
    let beta = drift.beta();
    let slope = if beta == 0.0 { 0.0 } else { -2.0 * beta };
    format!(
        "seed      omega = {}\n\
         constants c = {}, a = {}, b = {}, beta = sqrt(c/2) = {beta:.4}\n\
         f  = c t - ln omega\n\
         V2 = c/2 = {:.4}\n\
         V1 = c/2 - 2 omega_t/omega + 2 (omega_x/omega)^2\n\
         N  = d/dt + f' d/dx + c/2,  M = d/dt + f' d/dx + c/2 + 2 f''\n\
         U2 = {slope:.4}·x\n\
         U1 = -c t + 2 ln omega - 2 ln(a + b W),  W = int omega dx with W_t = omega_x\n",
        cfg.seed,
        cfg.c,
        cfg.a,
        cfg.b,
        0.5 * cfg.c,
    )
}

/// Samples the model on the grid and writes `model.csv`.
fn write_model_csv(cfg: &RunConfig, model: &SusyModel, drift: &DriftPair) -> Result<()> {
    let grid = &cfg.grid;
    for (_, _, x, t) in grid.nodes() {
        model.check(x, t)?;
        drift.rho1().try_eval(x, t)?;
    }
    let u1 = drift.u1();
    let csv = grid_csv("x,t,V1,V2,f,fx,fxx,g2,U1,U2,rho1,rho2", grid, |_, _, x, t| {
        vec![
            model.v1(x, t),
            model.v2(),
            model.f(x, t),
            model.f_x(x, t),
            model.f_xx(x, t),
            model.g2(x, t),
            u1.eval(x, t),
            drift.u2().eval(x, t),
            drift.rho1().eval(x, t),
            drift.rho2().eval(x, t),
        ]
    });
    write_atomic(&cfg.out.join(MODEL_CSV), &csv)
}

pub fn cmd_build(cfg: &RunConfig) -> Result<()> {
    let (model, drift) = model_and_drift(cfg)?;
    write_model_csv(cfg, &model, &drift)?;
    print!("{}", closed_form_summary(cfg, &drift));
    let (lo, hi) = cfg
        .grid
        .nodes()
        .map(|(_, _, x, t)| model.v1(x, t))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    println!("V1 range on grid {}: [{}, {}]", cfg.grid.descriptor(), fmt_num(lo), fmt_num(hi));
    println!("wrote {}", cfg.out.join(MODEL_CSV).display());
    Ok(())
}

/// Smooth non-zero-mode field for the operator identities.
fn identity_test_field() -> impl ScalarField2D {
    FnField::new("exp(-x^2 - t)", Rect::ALL, |x: Jet, t: Jet| (x * x * -1.0 - t).exp())
}

/// Runs every check on the configured model.
pub fn run_suite(cfg: &RunConfig) -> Result<Vec<SuiteRow>> {
    let (model, drift) = model_and_drift(cfg)?;
    let grid = &cfg.grid;
    let th = &cfg.thresholds;
    let mut rows = Vec::new();

    let exact = |rows: &mut Vec<SuiteRow>, report: ResidualReport| {
        let pass = report.passes(th.identity);
        rows.push(SuiteRow {
            report,
            rule: format!("max < {:e}", th.identity),
            pass,
        });
    };
    let converges = |rows: &mut Vec<SuiteRow>, report: ResidualReport| {
        let order = report.convergence_order.unwrap_or(f64::NAN);
        let pass = report.nan_nodes.is_empty()
            && (report.max_norm < th.rounding_floor || (th.order_min..=th.order_max).contains(&order));
        rows.push(SuiteRow {
            report,
            rule: format!("order in [{}, {}] or max < {:e}", th.order_min, th.order_max, th.rounding_floor),
            pass,
        });
    };

    for r in crate::susy::coefficient_system_residuals(&model, grid)? {
        exact(&mut rows, r);
    }

    let phi = identity_test_field();
    exact(
        &mut rows,
        intertwining_identity_check(&model, &phi, grid, Derivatives::Analytic)?,
    );
    exact(
        &mut rows,
        conjugate_identity_check(&model, &phi, grid, Derivatives::Analytic)?,
    );
    converges(
        &mut rows,
        intertwining_identity_check(&model, &phi, grid, Derivatives::FiniteDifference)?,
    );
    converges(
        &mut rows,
        conjugate_identity_check(&model, &phi, grid, Derivatives::FiniteDifference)?,
    );

    let psi2 = shared(psi2_gaussian(model.c()));
    let psi1 = psi1_from_psi2(&model, psi2.clone());
    let v1 = model.v1_field();
    exact(
        &mut rows,
        residual_sweep(
            &LinearOperator::Diffusion(Potential::Const(model.v2())),
            &psi2,
            grid,
            Derivatives::Analytic,
        )?,
    );
    exact(
        &mut rows,
        residual_sweep(
            &LinearOperator::Diffusion(Potential::Field(&v1)),
            &psi1,
            grid,
            Derivatives::Analytic,
        )?,
    );

    for r in check_rho1_system(&model, drift.rho1(), grid)? {
        exact(&mut rows, r);
    }
    let u1 = drift.u1();
    exact(&mut rows, check_potential_drift(&u1, Potential::Field(&v1), grid)?);
    exact(&mut rows, check_potential_drift(drift.u2(), Potential::Const(model.v2()), grid)?);

    let p2 = drift.default_p2();
    let p1 = p1_from_p2(&drift, p2.clone()).p1;
    exact(
        &mut rows,
        residual_sweep(&LinearOperator::FokkerPlanck(drift.u2()), &p2, grid, Derivatives::Analytic)?,
    );
    exact(
        &mut rows,
        residual_sweep(&LinearOperator::FokkerPlanck(&u1), &p1, grid, Derivatives::Analytic)?,
    );
    let via_psi = p1_via_psi_picture(&drift, p2);
    for (_, _, x, t) in grid.nodes() {
        p1.check(x, t)?;
    }
    exact(
        &mut rows,
        sweep("P1 direct vs through the diffusion picture", grid, |x, t| {
            p1.eval(x, t) - via_psi.eval(x, t)
        }),
    );
    Ok(rows)
}

fn report_suite(cfg: &RunConfig, rows: &[SuiteRow]) -> Result<bool> {
    let width = rows.iter().map(|r| r.report.name.len()).max().unwrap_or(4).max(4);
    println!("{:<width$}  {:>10}  {:>7}  {:<40}  result", "name", "max_norm", "order", "threshold");
    let mut csv = format!("{},threshold,result\n", ResidualReport::CSV_HEADER);
    for row in rows {
        let r = &row.report;
        let order = r.convergence_order.map_or("-".to_string(), |p| format!("{p:.4}"));
        let status = if row.pass { "PASS" } else { "FAIL" };
        println!(
            "{:<width$}  {:>10.3e}  {order:>7}  {:<40}  {status}",
            r.name, r.max_norm, row.rule
        );
        csv.push_str(&format!("{},{},{status}\n", r.to_csv_row(), row.rule.replace(',', ";")));
    }
    write_atomic(&cfg.out.join(VERIFY_CSV), &csv)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        println!("verify: all {} checks PASS", rows.len());
    } else {
        println!("verify: {failed} of {} checks FAIL", rows.len());
    }
    Ok(failed == 0)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<bool> {
    let rows = run_suite(cfg)?;
    report_suite(cfg, &rows)
}

/// Result of `evolve`: the error tables and whether they meet the threshold.
pub struct EvolveOutcome {
    pub errors: ErrorReport,
    pub pass: bool,
}

fn heat_kernel() -> impl ScalarField2D {
    FnField::new("heat kernel", Rect::from_time(f64::MIN_POSITIVE), |x: Jet, t: Jet| {
        (x * x * t.recip() * -0.25).exp() * (t * (4.0 * std::f64::consts::PI)).powf(-0.5)
    })
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<EvolveOutcome> {
    if cfg.b != 0.0 {
        return Err(Error::parameter(
            "b",
            format!(
                "evolution needs b = 0 (got {}): with b != 0 the drift U1 is only defined where \
                 a + b W > 0, and no boundary conditions are known for that half-line problem; \
                 use `build` or `verify` for analytic-only results",
                cfg.b
            ),
        ));
    }
    let (model, drift) = model_and_drift(cfg)?;
    let settings = SolverSettings {
        boundary: cfg.boundary,
        growth_limit: cfg.thresholds.growth_limit,
        edge_tolerance: cfg.thresholds.edge,
    };
    let u1 = drift.u1();
    let v1 = model.v1_field();
    let (analytic, label): (SharedField, &str) = match cfg.system {
        System::FokkerPlanck => (p1_from_p2(&drift, drift.default_p2()).p1, "P1 under F[U1]"),
        System::Diffusion => (
            Arc::new(psi1_from_psi2(&model, shared(psi2_gaussian(model.c())))),
            "Psi1 under D[V1]",
        ),
        System::Heat => (shared(heat_kernel()), "heat kernel under F[0]"),
    };
    let run = |grid: &Grid| -> Result<(crate::solver::EvolutionResult, ErrorReport)> {
        let init = slice(&*analytic, grid, grid.t_min)?;
        let result = match cfg.system {
            System::FokkerPlanck => evolve_fp(&u1, &init, grid, &settings)?,
            System::Diffusion => evolve_diffusion(Potential::Field(&v1), &init, grid, &settings)?,
            System::Heat => evolve_fp(&crate::field::Constant(0.0), &init, grid, &settings)?,
        };
        let errors = compare_evolutions(&result, &*analytic)?;
        Ok((result, errors))
    };
    let (result, coarse) = run(&cfg.grid)?;
    let (_, fine) = run(&cfg.grid.refined())?;
    let errors = coarse.with_refined(&fine)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }

    let grid = &cfg.grid;
    let evolution = grid_csv("x,t,value", grid, |i, j, _, _| vec![result.snapshots[j][i]]);
    let exact = grid_csv("x,t,value", grid, |_, _, x, t| vec![analytic.eval(x, t)]);
    write_atomic(&cfg.out.join(EVOLUTION_CSV), &evolution)?;
    write_atomic(&cfg.out.join(ANALYTIC_CSV), &exact)?;
    write_atomic(&cfg.out.join(ERRORS_CSV), &errors.to_csv())?;

    let pass = errors.final_linf < cfg.thresholds.evolve_linf;
    println!("evolve {label}: grid {}, boundary {}", grid.descriptor(), settings.boundary);
    println!(
        "final Linf {:.4e}, final L2 {:.4e}, refined Linf {:.4e}, order {:.4}, mass {} -> {}",
        errors.final_linf,
        errors.final_l2,
        fine.final_linf,
        errors.convergence_order.unwrap_or(f64::NAN),
        fmt_num(result.masses[0]),
        fmt_num(*result.masses.last().unwrap_or(&f64::NAN)),
    );
    println!(
        "evolve: final Linf < {:e}: {}",
        cfg.thresholds.evolve_linf,
        if pass { "PASS" } else { "FAIL" }
    );
    println!(
        "wrote {}, {}, {}",
        cfg.out.join(EVOLUTION_CSV).display(),
        cfg.out.join(ANALYTIC_CSV).display(),
        cfg.out.join(ERRORS_CSV).display()
    );
    Ok(EvolveOutcome { errors, pass })
}

/// Smallest `x` used by the worked example when `b > 0`.
pub const HALF_LINE_X_MIN: f64 = 0.1;

pub fn cmd_example(cfg: &RunConfig) -> Result<bool> {
    let bb = cfg.seed.poly_offset().ok_or_else(|| {
        Error::parameter(
            "seed",
            format!("the worked example uses omega = x^2 + 2t + B; got seed {} (set B with --B)", cfg.seed),
        )
    })?;
    let mut cfg = cfg.clone();
    if cfg.b != 0.0 && cfg.grid.x_min < HALF_LINE_X_MIN {
        cfg.grid = Grid::new(
            cfg.grid.nx,
            cfg.grid.nt,
            HALF_LINE_X_MIN,
            cfg.grid.x_max,
            cfg.grid.t_min,
            cfg.grid.t_max,
        )?;
    }
    let (c, a, b) = (cfg.c, cfg.a, cfg.b);
    let (model, drift) = model_and_drift(&cfg)?;
    let beta = drift.beta();
    let slope = if beta == 0.0 { 0.0 } else { -2.0 * beta };
    println!("worked example: B = {bb}, c = {c}, a = {a}, b = {b}");
    println!("omega(x,t) = x^2 + 2t + {bb:.4}");
    println!("f(x,t)     = {c:.4}·t - ln(x^2 + 2t + {bb:.4})");
    println!(
        "V1(x,t)    = {:.4} + 4((x^2 - 2t) - {bb:.4}) / (x^2 + 2t + {bb:.4})^2",
        0.5 * c
    );
    println!("V2         = {:.4}", 0.5 * c);
    println!("Psi2(x,t)  = exp(-{:.4}·t) / (2 sqrt(pi t)) · exp(-x^2/(4t))", 0.5 * c);
    println!("Psi1(x,t)  = [(x^2 - 2t)/(4t^2) + x^2/(t(x^2 + 2t + {bb:.4}))] · Psi2(x,t)");
    println!("U2(x)      = {slope:.4}·x");
    println!(
        "U1(x,t)    = -{c:.4}·t + 2 ln(x^2 + 2t + {bb:.4}) - 2 ln({a:.4} + {b:.4}(x^3/3 + 2tx + {bb:.4}x))"
    );
    match model.try_v1(1.0, 1.0) {
        Ok(v) => println!("V1(1, 1)   = {v:.4}"),
        Err(e) => println!("V1(1, 1) unavailable: {e}"),
    }
    println!();

    write_model_csv(&cfg, &model, &drift)?;
    let mut pass = cmd_verify(&cfg)?;
    println!();
    if b == 0.0 {
        pass &= cmd_evolve(&cfg)?.pass;
    } else {
        println!(
            "analytic-only mode: b = {b} makes U1 a half-line drift (x >= {HALF_LINE_X_MIN}) with no \
             known boundary conditions, so the evolution is skipped"
        );
    }
    println!("example: {}", if pass { "PASS" } else { "FAIL" });
    Ok(pass)
}

pub fn cmd_export_plot(cfg: &RunConfig) -> Result<()> {
    let script = plot_script(&cfg.out)?.ok_or_else(|| Error::Config {
        location: cfg.out.display().to_string(),
        message: format!(
            "nothing to plot; expected {MODEL_CSV} (from build), or {EVOLUTION_CSV} with {ANALYTIC_CSV} \
             and {ERRORS_CSV} (from evolve)"
        ),
    })?;
    let path = cfg.out.join(PLOT_SCRIPT);
    write_atomic(&path, &script)?;
    println!("wrote {}", path.display());
    Ok(())
}
