use proptest::prelude::*;
use qbounds_core::detector::{stat_model, StatModel};
use qbounds_core::fisher::{analytic_two_param, fisher_bundle, scalar_crbs};
use qbounds_core::linalg::{ComplexMatrix, HermitianMatrix};
use qbounds_core::variational::{
    bound_report, detector_report, hcrb, holevo_functional, nagaoka_functional, nagaoka_hayashi,
    nagaoka_hayashi_with_minimizer,
};
use qbounds_core::{DetectorParams, Param, Scenario};
use std::f64::consts::{FRAC_PI_2, PI};

const TWO: [Param; 2] = [Param::Theta, Param::Phi];
const ALL: [Param; 3] = [Param::Theta, Param::Phi, Param::AInv];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn params_strategy() -> impl Strategy<Value = DetectorParams> {
    let scenario = prop_oneof![
        Just(Scenario::Unbounded),
        (0.3f64..2.0).prop_map(|z| Scenario::Bounded { z })
    ];
    (
        0.4f64..PI - 0.4,
        -PI..PI,
        0.15f64..1.2,
        0.1f64..1.5,
        scenario,
    )
        .prop_map(|(th, ph, a, tau, s)| DetectorParams::new(th, ph, a, tau, s).unwrap())
}

fn check_unbiased(m: &StatModel, xs: &[HermitianMatrix], tol: f64) {
    for (u, x) in xs.iter().enumerate() {
        assert!(m.rho.trace_product(x).norm() < tol, "Tr[ρX_{u}] ≠ 0");
        for (v, d) in m.derivs.iter().enumerate() {
            let want = if u == v { 1.0 } else { 0.0 };
            let got = x.trace_product(d);
            assert!(
                (got.re - want).abs() < tol && got.im.abs() < tol,
                "Tr[X_{u} ∂_{v}ρ] = {got}"
            );
        }
    }
}

#[test]
fn holevo_minimizer_is_unbiased_and_attains_value() {
    for p in [
        DetectorParams::unbounded(1.0, 0.3, 0.5, 0.7).unwrap(),
        DetectorParams::bounded(FRAC_PI_2, 0.0, 1.0, 1.0, 0.5).unwrap(),
    ] {
        for params in [&TWO[..], &ALL[..]] {
            let m = stat_model(&p, params).unwrap();
            let (v, xs) = hcrb(&m).unwrap();
            check_unbiased(&m, &xs, 1e-8);
            let f = holevo_functional(&m.rho, &xs).unwrap();
            assert!(rel(f, v) < 1e-7, "{p:?} {params:?}: {f} vs {v}");
        }
    }
}

#[test]
fn nagaoka_minimizer_attains_value() {
    for p in [
        DetectorParams::unbounded(1.0, 0.3, 0.5, 0.7).unwrap(),
        DetectorParams::unbounded(FRAC_PI_2, 0.0, 0.2, 0.4).unwrap(),
        DetectorParams::bounded(2.0, -1.0, 0.8, 1.2, 1.5).unwrap(),
    ] {
        let m = stat_model(&p, &TWO).unwrap();
        let (v, xs) = nagaoka_hayashi_with_minimizer(&m).unwrap();
        check_unbiased(&m, &xs, 1e-8);
        let f = nagaoka_functional(&m.rho, &xs[0], &xs[1]).unwrap();
        assert!(rel(f, v) < 1e-6, "{p:?}: {f} vs {v}");
    }
}

#[test]
fn two_parameter_bounds_match_closed_form() {
    for &th in &[0.5, 1.0, FRAC_PI_2, 2.5] {
        for &a in &[0.2, 0.6, 1.2] {
            for &tau in &[0.2, 0.8, 1.6] {
                let p = DetectorParams::unbounded(th, 0.0, a, tau).unwrap();
                let m = stat_model(&p, &TWO).unwrap();
                let cf = analytic_two_param(&p).unwrap();
                let h = hcrb(&m).unwrap().0;
                let n = nagaoka_hayashi(&m).unwrap();
                assert!(rel(h, cf.c_hcrb) < 1e-6, "{p:?}: HCRB {h} vs {}", cf.c_hcrb);
                assert!(rel(n, cf.c_nb) < 1e-6, "{p:?}: NB {n} vs {}", cf.c_nb);
            }
        }
    }
}

#[test]
fn commuting_model_collapses_to_sld() {
    // classical qutrit family: ρ = diag(p), ∂ρ = diag(∂p)
    let diag = |v: [f64; 3]| {
        HermitianMatrix::from_hermitian_part(&ComplexMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                v[i].into()
            } else {
                0.0.into()
            }
        }))
    };
    let m = StatModel::from_parts(
        diag([0.5, 0.3, 0.2]),
        vec![diag([1.0, -0.4, -0.6]), diag([0.2, 0.5, -0.7])],
        TWO.to_vec(),
    )
    .unwrap();
    let c = scalar_crbs(&fisher_bundle(&m).unwrap()).unwrap();
    let h = hcrb(&m).unwrap().0;
    let n = nagaoka_hayashi(&m).unwrap();
    assert!(rel(c.c_rld, c.c_sld) < 1e-10);
    assert!(rel(h, c.c_sld) < 1e-7, "{h} vs {}", c.c_sld);
    assert!(rel(n, c.c_sld) < 1e-7, "{n} vs {}", c.c_sld);
}

#[test]
fn bounded_example_point() {
    let p = DetectorParams::bounded(FRAC_PI_2, 0.0, 1.0, 1.0, 0.5).unwrap();
    let r = detector_report(&p, &TWO).unwrap();
    let (rld, h) = (r.c_rld.unwrap(), r.c_hcrb.unwrap());
    assert!(rel(h, rld) < 1e-3, "{h} vs {rld}");
    assert!(r.hierarchy_ok);
}

#[test]
fn near_pure_state_is_handled() {
    for params in [&TWO[..], &ALL[..]] {
        let p = DetectorParams::unbounded(1.0, 0.0, 0.5, 1e-3).unwrap();
        let r = detector_report(&p, params).unwrap();
        assert!(!r.solver_failure, "{:?}", r.notes);
        assert!(r.hierarchy_ok, "{r:?}");
        for v in [r.c_sld, r.c_rld, r.c_upper, r.c_hcrb, r.c_nagaoka] {
            assert!(v.unwrap().is_finite());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hierarchy_holds_for_three_parameters(p in params_strategy()) {
        let r = detector_report(&p, &ALL).unwrap();
        prop_assert!(!r.solver_failure, "{:?}", r.notes);
        prop_assert!(r.hierarchy_ok, "{r:?}");
    }

    #[test]
    fn hierarchy_holds_for_two_parameters(p in params_strategy()) {
        let r = detector_report(&p, &TWO).unwrap();
        prop_assert!(!r.solver_failure, "{:?}", r.notes);
        prop_assert!(r.hierarchy_ok, "{r:?}");
    }

    #[test]
    fn variational_bounds_are_permutation_invariant(p in params_strategy()) {
        let m = stat_model(&p, &ALL).unwrap();
        let a = bound_report(&m).unwrap();
        let b = bound_report(&m.permuted(&[1, 2, 0])).unwrap();
        prop_assert!(rel(b.c_hcrb.unwrap(), a.c_hcrb.unwrap()) < 1e-6);
        prop_assert!(rel(b.c_nagaoka.unwrap(), a.c_nagaoka.unwrap()) < 1e-6);
    }
}
