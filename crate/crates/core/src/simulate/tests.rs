use super::*;
use crate::operators::{fock, qubit, DensityMatrix, LindbladGenerator, Operator};
use crate::random;
use crate::reduction::{build_reduced_model, Order};
use crate::scalar::cf;
use crate::tolerances::Tolerances;

fn excited() -> DensityMatrix<f64> {
    DensityMatrix::new(Operator::unit(2, 1, 1)).unwrap()
}

fn purcell(kappa: f64) -> (LindbladGenerator<f64>, LindbladGenerator<f64>) {
    let i2 = Operator::<f64>::identity(2);
    let l0 = qubit::sigmam::<f64>().kron(&i2).scale_re(kappa.sqrt());
    let h1 = &qubit::sigmap::<f64>().kron(&qubit::sigmam())
        + &qubit::sigmam::<f64>().kron(&qubit::sigmap());
    (
        LindbladGenerator::new(Operator::zeros(4), vec![l0]).unwrap(),
        LindbladGenerator::new(h1, vec![]).unwrap(),
    )
}

#[test]
fn qubit_decay_law() {
    let g = LindbladGenerator::new(Operator::zeros(2), vec![qubit::sigmam()]).unwrap();
    let times = uniform_grid(5.0, 101);
    let tr = propagate(&g, &excited(), &times).unwrap();
    for (t, s) in tr.times.iter().zip(&tr.states) {
        assert!((s.op().get(1, 1).re - (-t).exp()).abs() < 1e-9);
    }
    assert!(tr.max_trace_correction < 1e-12);
    assert!(tr.min_eigenvalues.iter().all(|&m| m > -1e-12));
    // a non-uniform grid agrees
    let odd = [0.0, 0.3, 0.35, 1.7, 2.0];
    let tr2 = propagate(&g, &excited(), &odd).unwrap();
    for (t, s) in odd.iter().zip(&tr2.states) {
        assert!((s.op().get(1, 1).re - (-t).exp()).abs() < 1e-9);
    }
}

#[test]
fn zero_generator_is_constant() {
    let mut rng = random::rng(1);
    let rho = random::density::<f64, _>(&mut rng, 3);
    let tr = propagate(&LindbladGenerator::zero(3), &rho, &uniform_grid(4.0, 9)).unwrap();
    for s in &tr.states {
        assert!(s.op().max_abs_diff(rho.op()) < 1e-14);
    }
}

#[test]
fn bad_grids_are_rejected() {
    let g = LindbladGenerator::<f64>::zero(2);
    assert!(propagate(&g, &excited(), &[]).is_err());
    assert!(propagate(&g, &excited(), &[-1.0, 0.0]).is_err());
    assert!(propagate(&g, &excited(), &[0.0, 1.0, 1.0]).is_err());
    assert!(propagate(&g, &DensityMatrix::maximally_mixed(3), &[0.0]).is_err());
}

#[test]
fn cavity_mean_field_relaxes_at_half_kappa() {
    let (n, kappa, alpha) = (16, 4.0f64, 0.5);
    let a = fock::destroy::<f64>(n);
    let l = (&a - &Operator::identity(n).scale_re(alpha)).scale_re(kappa.sqrt());
    let g = LindbladGenerator::new(Operator::zeros(n), vec![l]).unwrap();
    let vac = DensityMatrix::new(Operator::unit(n, 0, 0)).unwrap();
    let times = uniform_grid(3.0, 31);
    let tr = propagate(&g, &vac, &times).unwrap();
    for (t, s) in times.iter().zip(&tr.states) {
        let mean = s.op().trace_product(&a);
        let want = alpha * (1.0 - (-kappa * t / 2.0).exp());
        assert!((mean - cf(want, 0.0)).norm() < 1e-9, "t {t}: {mean}");
    }
}

#[test]
fn trajectories_contract() {
    let mut rng = random::rng(9);
    let g = random::generator::<f64, _>(&mut rng, 3, 2);
    let a = random::density::<f64, _>(&mut rng, 3);
    let b = random::density::<f64, _>(&mut rng, 3);
    let times = uniform_grid(3.0, 40);
    let ta = propagate(&g, &a, &times).unwrap();
    let tb = propagate(&g, &b, &times).unwrap();
    let d: Vec<f64> = ta
        .states
        .iter()
        .zip(&tb.states)
        .map(|(x, y)| trace_distance(x.op(), y.op()).unwrap())
        .collect();
    for w in d.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
}

#[test]
fn trace_distance_examples() {
    let g = Operator::<f64>::unit(2, 0, 0);
    let e = Operator::<f64>::unit(2, 1, 1);
    assert_eq!(trace_distance(&g, &g).unwrap(), 0.0);
    assert!((trace_distance(&g, &e).unwrap() - 1.0).abs() < 1e-14);
    let mixed = Operator::<f64>::identity(2).scale_re(0.5);
    assert!((trace_distance(&g, &mixed).unwrap() - 0.5).abs() < 1e-14);
}

#[test]
fn zero_epsilon_comparison_is_exact() {
    let (fast, slow) = purcell(2.0);
    let mut m =
        build_reduced_model(&fast, &slow, 0.1, Order::Second, &Tolerances::default()).unwrap();
    m.epsilon = 0.0;
    let rho = DensityMatrix::new(Operator::unit(2, 1, 1)).unwrap();
    let c = compare(&fast, &slow, &m, &rho, &uniform_grid(3.0, 20)).unwrap();
    assert!(c.report.max_error < 1e-12, "{:?}", c.report.trace_distance);
}

#[test]
fn purcell_decay_matches_reduced_rate() {
    let (kappa, eps) = (4.0, 0.05);
    let (fast, slow) = purcell(kappa);
    let m = build_reduced_model(&fast, &slow, eps, Order::Second, &Tolerances::default()).unwrap();
    let rho = DensityMatrix::new(Operator::unit(2, 1, 1)).unwrap();
    let times = uniform_grid(2.0 * kappa / (4.0 * eps * eps), 60);
    let c = compare(&fast, &slow, &m, &rho, &times).unwrap();
    // reduced excited population decays at 4 eps^2 / kappa
    let rate = 4.0 * eps * eps / kappa;
    for (t, s) in times.iter().zip(&c.reduced.states) {
        assert!((s.op().get(1, 1).re - (-rate * t).exp()).abs() < 1e-10);
    }
    assert!(
        c.report.max_error < 10.0 * eps * eps,
        "{}",
        c.report.max_error
    );
    assert!(c
        .report
        .trace_distance
        .iter()
        .all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
    assert!(c.report.max_trace_drift < 1e-9);
    assert!(c.report.min_eig.iter().all(|&x| x > -1e-8));
}

#[test]
fn sweep_recovers_second_order_scaling() {
    let (fast, slow) = purcell(4.0);
    let rho = DensityMatrix::new(Operator::unit(2, 1, 1)).unwrap();
    let opts = SweepOptions {
        order: Order::Second,
        horizon: Horizon::Fixed(5.0),
        grid_points: 50,
        jobs: 2,
    };
    let s = epsilon_sweep(
        &fast,
        &slow,
        &rho,
        &[0.04, 0.02, 0.01, 0.005],
        &opts,
        &Tolerances::default(),
    )
    .unwrap();
    let eps: Vec<f64> = s.reports.iter().map(|r| r.epsilon).collect();
    assert_eq!(eps, vec![0.005, 0.01, 0.02, 0.04]);
    assert!(s.monotone);
    assert!((1.7..=2.5).contains(&s.slope), "slope {}", s.slope);
    // threaded and serial runs agree exactly
    let serial = epsilon_sweep(
        &fast,
        &slow,
        &rho,
        &[0.04, 0.02, 0.01, 0.005],
        &SweepOptions { jobs: 1, ..opts },
        &Tolerances::default(),
    )
    .unwrap();
    assert_eq!(serial.slope.to_bits(), s.slope.to_bits());
}

#[test]
fn sweep_argument_checks() {
    let (fast, slow) = purcell(4.0);
    let rho = DensityMatrix::new(Operator::unit(2, 1, 1)).unwrap();
    let opts = SweepOptions {
        grid_points: 5,
        ..Default::default()
    };
    assert!(epsilon_sweep(
        &fast,
        &slow,
        &rho,
        &[0.1, 0.05],
        &opts,
        &Tolerances::default()
    )
    .is_err());
    assert!(epsilon_sweep(
        &fast,
        &slow,
        &rho,
        &[0.1, 0.1, 0.05],
        &opts,
        &Tolerances::default()
    )
    .is_err());
    let s = epsilon_sweep(
        &fast,
        &slow,
        &rho,
        &[0.03, 0.02, 0.01],
        &opts,
        &Tolerances::default(),
    )
    .unwrap();
    assert!(s.warnings.iter().any(|w| w.contains("decade")));
}

#[test]
fn horizon_parsing() {
    assert_eq!(Horizon::parse("fixed:2.5").unwrap(), Horizon::Fixed(2.5));
    assert_eq!(Horizon::parse("slow:3").unwrap(), Horizon::SlowTime(3.0));
    assert!((Horizon::SlowTime(3.0).end_time(0.1) - 300.0).abs() < 1e-9);
    for bad in ["fixed", "fixed:-1", "slow:x", "later:1"] {
        assert!(Horizon::parse(bad).is_err(), "{bad}");
    }
}

#[test]
fn csv_layout() {
    let r = ComparisonReport {
        epsilon: 0.1,
        order: 2,
        times: vec![0.0, 0.5],
        trace_distance: vec![0.0, 1e-3],
        max_error: 1e-3,
        final_error: 1e-3,
        trace: vec![1.0, 1.0],
        min_eig: vec![0.0, -1e-17],
        clipped_mass: 0.0,
        max_trace_drift: 0.0,
    };
    let s = report_csv_string(&r).unwrap();
    let lines: Vec<&str> = s.split("\r\n").collect();
    assert_eq!(lines[0], "t,error,trace,min_eig");
    assert_eq!(
        lines[2],
        "5.0000000000000000e-1,1.0000000000000000e-3,1.0000000000000000e0,-1.0000000000000001e-17"
    );
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[3], "");
}
