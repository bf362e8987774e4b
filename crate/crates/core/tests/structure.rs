use proptest::prelude::*;
use qael::models::{build_purcell_two_qubit, expected_reduced_cavity_qubit, CavityQubitParams};
use qael::operators::Operator;
use qael::random;
use qael::reduction::{reduce, Order};
use qael::Tolerances;

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn reduced_propagators_are_cptp(seed in any::<u64>(), d in 3usize..=7, eps in 0.001f64..0.2) {
        let mut rng = random::rng(seed);
        let (fast, slow) = random::qualifying_model::<f64, _>(&mut rng, d, 2);
        let red = reduce(&fast, &slow, eps, Order::Second, &Tolerances::default()).unwrap();
        let g = red.model.generator();
        let lv = g.liouvillian();
        prop_assert!(lv.hermiticity_preservation_residual() <= 1e-12);
        for t in [0.1, 1.0, 10.0] {
            let e = lv.expm(t).unwrap();
            prop_assert!(e.trace_preservation_residual() <= 1e-10);
            prop_assert!(e.choi().min_eigenvalue().unwrap() >= -1e-9);
        }
        // rho - i eps [C, rho] = (1 - i eps C) rho (1 + i eps C) - eps^2 C rho C
        let c1 = red.model.c1.as_ref().unwrap();
        let c_norm = qael::operators::linalg::singular_values(c1.mat()).unwrap().into_iter().fold(0.0, f64::max);
        let floor = -(eps * c_norm).powi(2) - 1e-12;
        for _ in 0..5 {
            let rho = random::density::<f64, _>(&mut rng, 2);
            let out = red.model.kraus_parametrization(rho.op()).unwrap();
            prop_assert!((out.trace().re - 1.0).abs() <= 1e-14 && out.trace().im.abs() <= 1e-14);
            prop_assert!(out.min_eigenvalue().unwrap() >= floor);
        }
    }
}

#[test]
fn single_precision_reduction() {
    let m = build_purcell_two_qubit::<f32>(1.0, 0.05).unwrap();
    // single-precision roundoff is ~1e-7; kernels and the Kraus split lose a few digits more
    let tol = Tolerances {
        tol_zero: 1e-5,
        tol_support: 1e-5,
        tol_dfs: 1e-5,
        tol_psd: 1e-5,
        tol_herm: 1e-5,
        tol_kraus_scalar: 1e-3,
        tol_consolidate: 1e-5,
        ..Tolerances::default()
    };
    let red = reduce(&m.fast, &m.slow, m.epsilon, Order::Second, &tol).unwrap();
    let b = red.model.consolidated_b();
    assert_eq!(b.len(), 1);
    assert!(
        (b[0].frobenius_norm() - 2.0).abs() < 1e-3,
        "{}",
        b[0].frobenius_norm()
    );
    assert!(
        red.model.h_s1.frobenius_norm() < 1e-3,
        "{}",
        red.model.h_s1.frobenius_norm()
    );
}

#[test]
fn closed_form_target_is_a_lindbladian() {
    let g = expected_reduced_cavity_qubit::<f64>(&CavityQubitParams::default());
    for i in 0..2 {
        for j in 0..2 {
            assert!(g.apply(&Operator::unit(2, i, j)).unwrap().trace().norm() < 1e-16);
        }
    }
}
