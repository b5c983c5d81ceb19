//! Property-based tests of the construction's invariants.

use proptest::prelude::*;

use susy_fp::drift::{build_rho1, p1_from_p2, p1_via_psi_picture, DriftPair};
use susy_fp::heat_seed::{combine_seeds, make_const_seed, make_exp_seed, make_poly_seed};
use susy_fp::susy::{apply_d, apply_f, LinearOperator};
use susy_fp::verify::{fd_dt, fd_dx, fd_dxx, intertwining_identity_check, Derivatives};
use susy_fp::{build_model, FnField, Grid, HeatSolution, Jet, Potential, Rect, ScalarField2D};

fn seed() -> impl Strategy<Value = HeatSolution> {
    prop_oneof![
        Just(make_const_seed()),
        (0.0..5.0f64).prop_map(|b| make_poly_seed(b).unwrap()),
        prop_oneof![-2.0..-0.25f64, 0.25..2.0f64].prop_map(|k| make_exp_seed(k).unwrap()),
        (0.25..2.0f64, 0.1..3.0f64, 0.1..3.0f64).prop_map(|(k, w1, w2)| {
            let terms = [make_exp_seed(k).unwrap(), make_exp_seed(-k).unwrap()];
            combine_seeds(&terms, &[w1, w2]).unwrap()
        }),
        (0.0..3.0f64, 0.1..3.0f64).prop_map(|(b, w)| {
            combine_seeds(&[make_poly_seed(b).unwrap(), make_const_seed()], &[1.0, w]).unwrap()
        }),
    ]
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (-2.0..2.0f64, 0.2..1.5f64)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

/// `(p0 + p1 x + p2 t) exp(−q x² − r t)` with `p0 > 0`.
fn smooth_field(p: [f64; 5]) -> impl ScalarField2D {
    FnField::new("smooth", Rect::ALL, move |x: Jet, t: Jet| {
        (x * p[1] + t * p[2] + p[0]) * (x * x * -p[3] - t * p[4]).exp()
    })
}

fn field_params() -> impl Strategy<Value = [f64; 5]> {
    (1.0..3.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.1..1.0f64, 0.0..1.0f64).prop_map(|(a, b, c, d, e)| [a, b, c, d, e])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seeds_are_positive_heat_solutions(s in seed(), (x, t) in point()) {
        let w = s.derivative(0, 0, x, t);
        prop_assert!(w > 0.0);
        let heat = s.derivative(0, 1, x, t) - s.derivative(2, 0, x, t);
        prop_assert!(close(heat, 0.0, 1e-12), "omega_t - omega_xx = {heat}");
        // W_x = ω and W_t = ω_x
        let wj = s.antiderivative_jet(x, t, 1);
        prop_assert!(close(wj.dx(), w, 1e-12));
        prop_assert!(close(wj.dt(), s.derivative(1, 0, x, t), 1e-12));
    }

    #[test]
    fn seed_spec_round_trips(s in seed()) {
        let again: HeatSolution = s.to_string().parse().unwrap();
        prop_assert_eq!(again, s);
    }

    #[test]
    fn exact_derivatives_agree_with_stencils(s in seed(), c in 0.0..3.0f64, (x, t) in point()) {
        let m = build_model(s, c).unwrap();
        let v1 = m.v1_field();
        for f in [&v1 as &dyn ScalarField2D, m.omega()] {
            let h = 1e-3;
            prop_assert!(close(fd_dx(f, x, t, h).unwrap(), f.dx(x, t), 1e-5));
            prop_assert!(close(fd_dt(f, x, t, h).unwrap(), f.dt(x, t), 1e-5));
            prop_assert!(close(fd_dxx(f, x, t, h).unwrap(), f.dxx(x, t), 1e-4));
        }
    }

    #[test]
    fn stencil_error_is_second_order(s in seed(), (x, t) in point()) {
        let m = build_model(s, 1.0).unwrap();
        let v1 = m.v1_field();
        let exact = v1.dx(x, t);
        let e1 = (fd_dx(&v1, x, t, 0.02).unwrap() - exact).abs();
        let e2 = (fd_dx(&v1, x, t, 0.01).unwrap() - exact).abs();
        // skip points where the third derivative nearly vanishes
        prop_assume!(e1 > 1e-9);
        prop_assert!((e1 / e2).log2() > 1.9, "observed order {}", (e1 / e2).log2());
    }

    #[test]
    fn intertwining_holds_for_any_field(s in seed(), c in 0.0..3.0f64, p in field_params()) {
        let m = build_model(s, c).unwrap();
        let phi = smooth_field(p);
        let grid = Grid::new(7, 7, -1.5, 1.5, 0.3, 1.2).unwrap();
        let r = intertwining_identity_check(&m, &phi, &grid, Derivatives::Analytic).unwrap();
        prop_assert!(r.max_norm < 1e-9, "residual {}", r.max_norm);
    }

    #[test]
    fn corrupted_g2_breaks_intertwining(s in seed(), p in field_params(), delta in 0.05..1.0f64) {
        let m = build_model(s, 1.0).unwrap().with_g2_perturbation(delta);
        let phi = smooth_field(p);
        let grid = Grid::new(7, 7, -1.5, 1.5, 0.3, 1.2).unwrap();
        let r = intertwining_identity_check(&m, &phi, &grid, Derivatives::Analytic).unwrap();
        prop_assert!(r.max_norm > 1e-4, "residual {}", r.max_norm);
    }

    #[test]
    fn fokker_planck_equals_conjugated_diffusion(p in field_params(), q in field_params(), (x, t) in point()) {
        // F[U] P = e^{−U/2} D[V](e^{U/2} P) with V = ¼U'² − ½U'' − ½U_t.
        let u = FnField::new("U", Rect::ALL, move |x: Jet, t: Jet| {
            (x * q[1] + t * q[2]) * q[0] + (x * x * -q[3] - t * q[4]).exp()
        });
        let prob = smooth_field(p);
        let psi = FnField::new("Psi", Rect::ALL, |x: Jet, t: Jet| {
            let (xv, tv, o) = (x.value(), t.value(), x.order());
            (u.jet(xv, tv, o) * 0.5).exp() * prob.jet(xv, tv, o)
        });
        let potential = FnField::new("V", Rect::ALL, |x: Jet, t: Jet| {
            let uj = u.jet(x.value(), t.value(), x.order() + 2);
            let (ux, uxx, ut) = (uj.d_x(), uj.d_x().d_x(), uj.d_t());
            ux.truncate(x.order()) * ux.truncate(x.order()) * 0.25 - uxx * 0.5 - ut.truncate(x.order()) * 0.5
        });
        let lhs = apply_f(&u, &prob, x, t).unwrap();
        let rhs = (-0.5 * u.eval(x, t)).exp() * apply_d(Potential::Field(&potential), &psi, x, t).unwrap();
        prop_assert!(close(lhs, rhs, 1e-11), "{lhs} vs {rhs}");
    }

    #[test]
    fn rho1_is_linear_in_its_coefficients(
        b_off in 0.0..3.0f64, c in 0.0..3.0f64, a in 0.1..3.0f64, b in 0.0..3.0f64,
        lambda in 0.1..10.0f64, x in 0.1..2.0f64, t in 0.2..1.5f64,
    ) {
        let m = build_model(make_poly_seed(b_off).unwrap(), c).unwrap();
        let r = build_rho1(&m, a, b).unwrap();
        let scaled = build_rho1(&m, lambda * a, lambda * b).unwrap();
        prop_assert!(close(scaled.eval(x, t), lambda * r.eval(x, t), 1e-13));
        let d1 = DriftPair::new(&m, a, b).unwrap().u1();
        let d2 = DriftPair::new(&m, lambda * a, lambda * b).unwrap().u1();
        // U1 = −2 ln ρ1 only shifts, so the drift U1' is unchanged.
        prop_assert!(close(d2.eval(x, t), d1.eval(x, t) - 2.0 * lambda.ln(), 1e-12));
        prop_assert!(close(d2.dx(x, t), d1.dx(x, t), 1e-12));
    }

    #[test]
    fn p1_routes_commute(s in seed(), c in 0.0..3.0f64, (x, t) in (0.1..2.0f64, 0.1..1.5f64)) {
        let m = build_model(s, c).unwrap();
        // b = 0 keeps a + bW positive everywhere
        let drift = DriftPair::new(&m, 1.5, 0.0).unwrap();
        let p2 = drift.default_p2();
        let direct = p1_from_p2(&drift, p2.clone()).p1;
        let via = p1_via_psi_picture(&drift, p2);
        prop_assert!(close(direct.eval(x, t), via.eval(x, t), 1e-11));
    }

    #[test]
    fn p1_solves_partner_fokker_planck(s in seed(), c in 0.0..3.0f64, (x, t) in (0.1..2.0f64, 0.1..1.5f64)) {
        let m = build_model(s, c).unwrap();
        let drift = DriftPair::new(&m, 1.0, 0.0).unwrap();
        let p1 = p1_from_p2(&drift, drift.default_p2()).p1;
        let u1 = drift.u1();
        let r = LinearOperator::FokkerPlanck(&u1).apply(&*p1, x, t).unwrap();
        let scale = p1.eval(x, t).abs() + p1.dxx(x, t).abs() + 1e-300;
        prop_assert!(r.abs() <= 1e-10 * (1.0 + scale), "F[U1]P1 = {r}");
    }
}
