//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qael::asymptotics::certify;
use qael::models::{
    build_cavity_qubit, build_purcell_two_qubit, build_with_slow_b_hamiltonian,
    expected_reduced_cavity_qubit, truncation_convergence, CavityQubitParams, TruncationQuantity,
};
use qael::operators::{dissipator, linalg, qubit, LindbladGenerator, Operator, Superoperator};
use qael::random;
use qael::reduction::{c1_operator, reduce, second_order_jumps, Order, Reduction};
use qael::scalar::C;
use qael::simulate::{epsilon_sweep, Horizon, SweepOptions};
use qael::{Error, Tolerances};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn limit(name: &str, value: f64, max: f64) -> Result<(), String> {
    ensure(value <= max, || {
        format!("{name} = {value:.3e} exceeds {max:.1e}")
    })
}

fn up_to_phase(a: &Operator<f64>, b: &Operator<f64>) -> f64 {
    let z = b.inner(a);
    let ph = if z.norm() > 0.0 {
        z / z.norm()
    } else {
        C::new(1.0, 0.0)
    };
    (a - &b.scale(ph)).frobenius_norm()
}

fn cavity() -> CavityQubitParams {
    CavityQubitParams {
        kappa: 10.0,
        g: 0.1,
        u: C::new(1.0, 0.0),
        n_trunc: 16,
    }
}

fn reduce_example(
    fast: &LindbladGenerator<f64>,
    slow: &LindbladGenerator<f64>,
    eps: f64,
) -> Result<Reduction<f64>, String> {
    reduce(fast, slow, eps, Order::Second, &Tolerances::default()).map_err(|e| e.to_string())
}

fn zeno_hamiltonian() -> Check {
    let p = cavity();
    let m = build_cavity_qubit::<f64>(&p).map_err(|e| e.to_string())?;
    let red = reduce_example(&m.fast, &m.slow, m.epsilon)?;
    let alpha = p.alpha();
    let want = &qubit::sigmap::<f64>().scale(alpha) + &qubit::sigmam::<f64>().scale(alpha.conj());
    let rel = (&red.model.h_s1 - &want).frobenius_norm() / want.frobenius_norm();
    limit("relative error of H_s1", rel, 1e-7)?;
    Ok(format!("relative error {rel:.2e}"))
}

fn damping_rate() -> Check {
    let p = cavity();
    let m = build_cavity_qubit::<f64>(&p).map_err(|e| e.to_string())?;
    let red = reduce_example(&m.fast, &m.slow, m.epsilon)?;
    let b = red.model.consolidated_b();
    ensure(b.len() == 1, || {
        format!("expected one consolidated jump, found {}", b.len())
    })?;
    let rate_want = 4.0 * p.g * p.g / p.kappa;
    let eps_b = b[0].scale_re(p.g);
    let want = qubit::sigmam::<f64>().scale_re(rate_want.sqrt());
    let op_err = up_to_phase(&eps_b, &want) / want.frobenius_norm();
    limit("relative operator error", op_err, 1e-6)?;
    let rate = eps_b.frobenius_norm().powi(2);
    let rate_err = (rate - rate_want).abs() / rate_want;
    limit("relative rate error", rate_err, 1e-6)?;

    // the closed-form generator agrees as a superoperator
    let got = red.model.generator().liouvillian();
    let exp = expected_reduced_cavity_qubit::<f64>(&p).liouvillian();
    let gen_err = (got.mat() - exp.mat()).norm_max();
    limit("generator difference", gen_err, 1e-8)?;

    let table = truncation_convergence(
        &p,
        TruncationQuantity::DampingRate,
        None,
        &Tolerances::default(),
    )
    .map_err(|e| e.to_string())?;
    let beyond: Vec<f64> = table
        .rows
        .windows(2)
        .zip(&table.differences)
        .filter(|(w, _)| w[0].0 >= 16)
        .map(|(_, &d)| d)
        .collect();
    ensure(!beyond.is_empty(), || "no truncations beyond 16".into())?;
    let worst = beyond.iter().copied().fold(0.0, f64::max);
    limit("rate change beyond n = 16", worst, 1e-8)?;
    let skipped: Vec<usize> = table.skipped.iter().map(|(n, _)| *n).collect();
    Ok(format!(
        "rate {rate:.10e} (rel err {rate_err:.1e}), truncation drift {worst:.1e}, skipped n_trunc {skipped:?}"
    ))
}

fn block_diagonal_drive() -> Check {
    let p = cavity();
    let m = build_with_slow_b_hamiltonian::<f64>(&p, "sigmaz").map_err(|e| e.to_string())?;
    let tol = Tolerances::default();
    let red = reduce_example(&m.fast, &m.slow, m.epsilon)?;
    let h_b = Operator::<f64>::identity(p.n_trunc)
        .kron(&qubit::sigmaz())
        .scale_re(1.0 / p.g);
    let c1 = c1_operator(&m.fast.jumps()[0], &h_b, &red.certified.dfs, &tol)
        .map_err(|e| e.to_string())?;
    let c1_norm = c1.frobenius_norm();
    limit("||C1|| of the block-diagonal term", c1_norm, 1e-10)?;
    let alpha = p.alpha();
    let want = &(&qubit::sigmap::<f64>().scale(alpha)
        + &qubit::sigmam::<f64>().scale(alpha.conj()))
        .scale_re(p.g)
        + &qubit::sigmaz();
    let got = red.model.h_s1.scale_re(red.model.epsilon);
    let err = got.max_abs_diff(&want);
    limit("eps H_s1 error", err, 1e-9)?;
    Ok(format!("||C1|| {c1_norm:.1e}, eps H_s1 error {err:.1e}"))
}

fn mixing_residual(
    red: &Reduction<f64>,
    fast: &LindbladGenerator<f64>,
    slow: &LindbladGenerator<f64>,
    seed: u64,
) -> Result<f64, String> {
    let cert = &red.certified;
    let tol = Tolerances {
        tol_jump_drop: 0.0,
        ..Tolerances::default()
    };
    let u = random::unitary::<f64, _>(&mut random::rng(seed), cert.kraus.len());
    let mixed = cert.kraus.mixed(&u).map_err(|e| e.to_string())?;
    let l0 = &fast.jumps()[0];
    let a = second_order_jumps(l0, slow.hamiltonian(), &cert.kraus, &cert.dfs, &tol)
        .map_err(|e| e.to_string())?;
    let b = second_order_jumps(l0, slow.hamiltonian(), &mixed, &cert.dfs, &tol)
        .map_err(|e| e.to_string())?;
    let s = cert.dfs.slow_dim;
    let da = dissipator(&a).unwrap_or_else(|| Superoperator::zeros(s));
    let db = dissipator(&b).unwrap_or_else(|| Superoperator::zeros(s));
    Ok((da.mat() - db.mat()).norm_max())
}

fn identities_of(
    name: &str,
    red: &Reduction<f64>,
    fast: &LindbladGenerator<f64>,
    slow: &LindbladGenerator<f64>,
    seed: u64,
) -> Result<(), String> {
    let r = &red.model.residuals;
    let rep = &red.certified.report;
    let wrap = |e: String| format!("{name}: {e}");
    limit("order-1 residual", r.order1, 1e-9).map_err(wrap)?;
    limit("order-2 residual", r.order2.unwrap_or(f64::INFINITY), 1e-8).map_err(wrap)?;
    limit(
        "K1 projection",
        r.k1_projection.unwrap_or(f64::INFINITY),
        1e-9,
    )
    .map_err(wrap)?;
    limit("A identity", r.a_identity, 1e-9).map_err(wrap)?;
    limit("B identity", r.b_identity.unwrap_or(f64::INFINITY), 1e-9).map_err(wrap)?;
    limit(
        "C1 Hermiticity",
        r.c1_hermiticity.unwrap_or(f64::INFINITY),
        1e-10,
    )
    .map_err(wrap)?;
    limit(
        "C1 block structure",
        r.c1_block.unwrap_or(f64::INFINITY),
        1e-10,
    )
    .map_err(wrap)?;
    limit("R*(P0) - I", rep.rp0_residual, 1e-8).map_err(wrap)?;
    limit("sum |lambda|^2 - 1", rep.lambda_norm_residual, 1e-8).map_err(wrap)?;
    limit("Kraus completeness", rep.kraus_completeness_residual, 1e-8).map_err(wrap)?;
    limit(
        "Kraus mixing",
        mixing_residual(red, fast, slow, seed).map_err(wrap)?,
        1e-9,
    )
    .map_err(wrap)?;
    Ok(())
}

/// Seeded random models; certification failures resample with the next
/// seed, at most twice.
fn random_models(
    count: u64,
) -> Result<
    Vec<(
        u64,
        Reduction<f64>,
        LindbladGenerator<f64>,
        LindbladGenerator<f64>,
    )>,
    String,
> {
    let mut out = Vec::new();
    for k in 0..count {
        let d = 3 + (k as usize % 10);
        let s = 1 + (k as usize % 3).min(d - 2);
        let mut last = String::new();
        let mut found = None;
        for attempt in 0..3 {
            let seed = 1000 * k + attempt;
            let (fast, slow) = random::qualifying_model::<f64, _>(&mut random::rng(seed), d, s);
            match reduce(&fast, &slow, 0.01, Order::Second, &Tolerances::default()) {
                Ok(red) => {
                    found = Some((seed, red, fast, slow));
                    break;
                }
                Err(e @ Error::Assumption { .. }) => last = e.to_string(),
                Err(e) if matches!(e.root(), Error::Assumption { .. }) => last = e.to_string(),
                Err(e) => return Err(format!("seed {seed} (d = {d}): {e}")),
            }
        }
        out.push(found.ok_or_else(|| format!("model {k} (d = {d}) never certified: {last}"))?);
    }
    Ok(out)
}

fn identity_suite() -> Check {
    let p = cavity();
    let cav = build_cavity_qubit::<f64>(&p).map_err(|e| e.to_string())?;
    let red = reduce_example(&cav.fast, &cav.slow, cav.epsilon)?;
    identities_of("cavity", &red, &cav.fast, &cav.slow, 1)?;
    let pur = build_purcell_two_qubit::<f64>(10.0, 0.1).map_err(|e| e.to_string())?;
    let red = reduce_example(&pur.fast, &pur.slow, pur.epsilon)?;
    identities_of("purcell", &red, &pur.fast, &pur.slow, 2)?;
    let models = random_models(20)?;
    for (seed, red, fast, slow) in &models {
        identities_of(
            &format!("random seed {seed} (d = {})", fast.dim()),
            red,
            fast,
            slow,
            *seed,
        )?;
    }
    Ok(format!(
        "cavity, purcell and {} random models (d <= 12)",
        models.len()
    ))
}

fn structure_of(
    name: &str,
    red: &Reduction<f64>,
    param_floor: Option<f64>,
    seed: u64,
) -> Result<f64, String> {
    let wrap = |e: String| format!("{name}: {e}");
    let g = red.model.generator();
    let s = red.model.slow_dim;
    let mut tr: f64 = 0.0;
    for i in 0..s {
        for j in 0..s {
            tr = tr.max(
                g.apply(&Operator::unit(s, i, j))
                    .map_err(|e| e.to_string())?
                    .trace()
                    .norm(),
            );
        }
    }
    limit("trace of generator output", tr, 1e-12).map_err(wrap)?;
    let lv = g.liouvillian();
    limit(
        "Hermiticity preservation",
        lv.hermiticity_preservation_residual(),
        1e-12,
    )
    .map_err(wrap)?;
    let mut worst = f64::INFINITY;
    for t in [0.1, 1.0, 10.0, 100.0] {
        let e = lv.expm(t).map_err(|e| e.to_string())?;
        limit(
            "propagator trace preservation",
            e.trace_preservation_residual(),
            1e-10,
        )
        .map_err(wrap)?;
        let m = e.choi().min_eigenvalue().map_err(|e| e.to_string())?;
        ensure(m >= -1e-9, || {
            format!("{name}: Choi min eigenvalue {m:.3e} at t = {t}")
        })?;
        worst = worst.min(m);
    }
    let eps = red.model.epsilon;
    let floor = match param_floor {
        Some(f) => f,
        None => {
            let c = red.model.c1.as_ref().map(|c| {
                linalg::singular_values(c.mat())
                    .unwrap()
                    .into_iter()
                    .fold(0.0, f64::max)
            });
            -(eps * c.unwrap_or(0.0)).powi(2) - 1e-12
        }
    };
    let mut rng = random::rng(seed);
    let mut states: Vec<Operator<f64>> = (0..s).map(|k| Operator::unit(s, k, k)).collect();
    states.extend((0..5).map(|_| random::density::<f64, _>(&mut rng, s).op().clone()));
    for rho in &states {
        let out = red
            .model
            .kraus_parametrization(rho)
            .map_err(|e| e.to_string())?;
        let t = out.trace();
        ensure((t.re - 1.0).abs() <= 1e-12 && t.im.abs() <= 1e-12, || {
            format!("{name}: parametrization trace {t}")
        })?;
        let m = out.min_eigenvalue().map_err(|e| e.to_string())?;
        ensure(m >= floor, || {
            format!("{name}: parametrization min eigenvalue {m:.3e} below {floor:.3e}")
        })?;
    }
    Ok(worst)
}

fn structure_preservation() -> Check {
    let p = cavity();
    let cav = build_cavity_qubit::<f64>(&p).map_err(|e| e.to_string())?;
    let red = reduce_example(&cav.fast, &cav.slow, cav.epsilon)?;
    let eps = cav.epsilon;
    let mut worst = structure_of("cavity", &red, Some(-10.0 * eps * eps), 3)?;
    let pur = build_purcell_two_qubit::<f64>(10.0, 0.1).map_err(|e| e.to_string())?;
    let red = reduce_example(&pur.fast, &pur.slow, pur.epsilon)?;
    worst = worst.min(structure_of(
        "purcell",
        &red,
        Some(-10.0 * pur.epsilon * pur.epsilon),
        4,
    )?);
    for (seed, red, _, _) in random_models(20)? {
        worst = worst.min(structure_of(
            &format!("random seed {seed}"),
            &red,
            None,
            seed,
        )?);
    }
    Ok(format!("worst Choi eigenvalue {worst:.2e}"))
}

fn convergence_sweep() -> Check {
    let p = cavity();
    let m = build_cavity_qubit::<f64>(&p).map_err(|e| e.to_string())?;
    let tol = Tolerances::default();
    let gap = certify(&m.fast, &tol)
        .map_err(|e| e.to_string())?
        .report
        .gap;
    let t_end = 10.0 / gap;
    let rho = Operator::<f64>::unit(2, 1, 1);
    let rho = qael::operators::DensityMatrix::new(rho).map_err(|e| e.to_string())?;
    let opts = SweepOptions {
        order: Order::Second,
        horizon: Horizon::Fixed(t_end),
        grid_points: 200,
        jobs: 3,
    };
    let s = epsilon_sweep(&m.fast, &m.slow, &rho, &[0.2, 0.1, 0.05], &opts, &tol)
        .map_err(|e| e.to_string())?;
    let errs: Vec<String> = s
        .reports
        .iter()
        .map(|r| format!("{:.2e}", r.max_error))
        .collect();
    ensure((1.7..=2.5).contains(&s.slope), || {
        format!("slope {:.3} outside [1.7, 2.5]; errors {errs:?}", s.slope)
    })?;
    ensure(s.monotone, || {
        format!("errors not strictly monotone: {errs:?}")
    })?;
    Ok(format!(
        "T = {t_end:.3}, slope {:.3}, errors {}",
        s.slope,
        errs.join(" ")
    ))
}

fn degenerate_cases() -> Check {
    let one = LindbladGenerator::new(Operator::zeros(2), vec![qubit::sigmam::<f64>()])
        .map_err(|e| e.to_string())?;
    let slow = LindbladGenerator::new(qubit::sigmax::<f64>(), vec![]).map_err(|e| e.to_string())?;
    let red = reduce_example(&one, &slow, 0.1)?;
    ensure(red.model.slow_dim == 1 && red.model.zero_generator, || {
        "slow dimension 1 not reported as zero".into()
    })?;

    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let path = dir.path().join("two_jumps.json");
    let text = r#"{
  "factors": [{"name": "A", "dim": 2}, {"name": "B", "dim": 2}],
  "symbols": {"sa": "kron(sigmam, eye(2))", "sb": "kron(eye(2), sigmam)"},
  "fast": {"jumps": ["sa", "0.5 * sa' * sa"]},
  "slow": {"hamiltonian": "sa' * sb + sa * sb'"},
  "epsilon": 0.1
}"#;
    std::fs::write(&path, text).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_qael"))
        .args(["reduce", path.to_str().unwrap(), "--order", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    ensure(code == Some(3), || {
        format!("order 2 on two fast jumps exited with {code:?}")
    })?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(v["status"] == "order2_unavailable", || {
        format!("status {}", v["status"])
    })?;
    Ok("zero generator reported; order 2 refused with exit 3".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, u64); 7] = [
        ("zeno hamiltonian matches closed form", zeno_hamiltonian, 10),
        ("second-order damping rate", damping_rate, 60),
        (
            "block-diagonal slow term has no correction",
            block_diagonal_drive,
            10,
        ),
        ("identity suite", identity_suite, 300),
        ("structure preservation", structure_preservation, 300),
        ("epsilon^2 convergence", convergence_sweep, 300),
        ("degenerate cases", degenerate_cases, 30),
    ];
    let mut failed = 0;
    for (k, (name, f, secs)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let res = match res {
            Ok(msg) if took > Duration::from_secs(*secs) => {
                Err(format!("{msg}; took {took:.1?}, limit {secs} s"))
            }
            r => r,
        };
        match res {
            Ok(msg) => println!("PASS {} {name}: {msg} [{took:.1?}]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} [{took:.1?}]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
