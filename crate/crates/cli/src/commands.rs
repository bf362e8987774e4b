use std::path::{Path, PathBuf};

use qael::asymptotics::certify;
use qael::json::{operator_json, reduced_model_json, to_canonical_string};
use qael::models::{
    build_cavity_qubit, build_purcell_two_qubit, expected_reduced_cavity_qubit, CavityQubitParams,
};
use qael::modelspec::{load_model, ModelFile};
use qael::operators::{DensityMatrix, LindbladGenerator, Operator};
use qael::random;
use qael::reduction::{reduce, Order, Reduction};
use qael::simulate::{
    compare, epsilon_sweep, uniform_grid, write_report_csv, ComparisonReport, Horizon, SweepOptions,
};
use qael::{Error, Tolerances, C};
use serde_json::{json, Value};

use crate::args::{ExampleName, ExampleParams, Initial, RunArgs, Source};

/// Why a command stopped; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Invariant {
        name: String,
        value: f64,
        limit: f64,
    },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub type Outcome = Result<(), Failure>;

pub struct Model {
    pub fast: LindbladGenerator<f64>,
    pub slow: LindbladGenerator<f64>,
    pub epsilon: f64,
    pub tolerances: Tolerances,
    pub file: Option<ModelFile>,
}

fn parse_u(s: &str) -> Result<C<f64>, Failure> {
    let bad = || Failure::Usage(format!("--u expects `re` or `re,im`, got {s:?}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        [re] => Ok(C::new(num(re)?, 0.0)),
        [re, im] => Ok(C::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

fn cavity_params(p: &ExampleParams) -> Result<CavityQubitParams, Failure> {
    Ok(CavityQubitParams {
        kappa: p.kappa,
        g: p.g,
        u: parse_u(&p.u)?,
        n_trunc: p.n_trunc,
    })
}

fn example_model(
    name: ExampleName,
    p: &ExampleParams,
    base: &Tolerances,
) -> Result<Model, Failure> {
    let m = match name {
        ExampleName::CavityQubit => build_cavity_qubit::<f64>(&cavity_params(p)?)?,
        ExampleName::PurcellTwoQubit => build_purcell_two_qubit::<f64>(p.kappa, p.g)?,
    };
    let tolerances = m.file.tolerances(base)?;
    Ok(Model {
        fast: m.fast,
        slow: m.slow,
        epsilon: m.epsilon,
        tolerances,
        file: Some(m.file),
    })
}

pub fn load(source: &Source, base: &Tolerances) -> Result<Model, Failure> {
    match (&source.model, source.example) {
        (Some(path), None) => {
            let m = load_model::<f64>(path, base)?;
            Ok(Model {
                fast: m.fast,
                slow: m.slow,
                epsilon: m.epsilon,
                tolerances: m.tolerances,
                file: None,
            })
        }
        (None, Some(name)) => example_model(name, &source.params, base),
        _ => Err(Failure::Usage("give a model file or --example NAME".into())),
    }
}

fn order(k: u32) -> Result<Order, Failure> {
    Order::from_int(k).map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(value: &Value, out: Option<&Path>) -> Outcome {
    let text = to_canonical_string(value);
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn check(name: &str, value: f64, limit: f64) -> Outcome {
    if value <= limit {
        Ok(())
    } else {
        Err(Failure::Invariant {
            name: name.into(),
            value,
            limit,
        })
    }
}

/// The exact identities every certified reduction must satisfy.
pub fn check_reduction(red: &Reduction<f64>) -> Outcome {
    let rep = &red.certified.report;
    let r = &red.model.residuals;
    check("kraus_completeness", rep.kraus_completeness_residual, 1e-8)?;
    check("rp0", rep.rp0_residual, 1e-8)?;
    check("lambda_norm", rep.lambda_norm_residual, 1e-8)?;
    check(
        "residual_order1",
        r.order1,
        if r.order1_exact { 1e-9 } else { 1e-8 },
    )?;
    check("a_identity", r.a_identity, 1e-9)?;
    if let Some(x) = r.order2 {
        check("residual_order2", x, 1e-8)?;
    }
    if let Some(x) = r.k1_projection {
        check("k1_projection", x, 1e-9)?;
    }
    if let Some(x) = r.b_identity {
        check("b_identity", x, 1e-9)?;
    }
    if let Some(x) = r.c1_hermiticity {
        check("c1_hermiticity", x, 1e-10)?;
    }
    if let Some(x) = r.c1_block {
        check("c1_block", x, 1e-10)?;
    }
    Ok(())
}

fn check_comparison(rep: &ComparisonReport) -> Outcome {
    check("trace_drift", rep.max_trace_drift, 1e-9)?;
    let min_eig = rep.min_eig.iter().copied().fold(f64::INFINITY, f64::min);
    check("full_state_positivity", -min_eig, 1e-8)?;
    check("trace_distance_range", rep.max_error, 1.0 + 1e-9)?;
    Ok(())
}

pub fn analyze(source: &Source, out: Option<&Path>, base: &Tolerances) -> Outcome {
    let m = load(source, base)?;
    let cert = certify(&m.fast, &m.tolerances)?;
    eprintln!(
        "certified: gap {:.6e}, slow dimension {}, {} Kraus operators",
        cert.report.gap, cert.report.slow_dim, cert.report.kraus_count
    );
    let v = serde_json::to_value(&cert.report).expect("report serializes");
    emit(&v, out)
}

fn summary(red: &Reduction<f64>) {
    let m = &red.model;
    eprintln!(
        "order {} reduction, epsilon {:e}, slow dimension {}",
        m.order.as_int(),
        m.epsilon,
        m.slow_dim
    );
    eprintln!("  Zeno Hamiltonian norm {:.6e}", m.h_s1.frobenius_norm());
    eprintln!(
        "  first-order jumps {}, second-order jumps {}",
        m.consolidated_a().len(),
        m.consolidated_b().len()
    );
    for (k, b) in m.consolidated_b().iter().enumerate() {
        eprintln!(
            "  B[{k}] rate eps^2 ||B||^2 = {:.6e}",
            m.epsilon * m.epsilon * b.frobenius_norm().powi(2)
        );
    }
    for d in &m.diagnostics {
        eprintln!("  note: {d}");
    }
}

fn reduction_json(red: &Reduction<f64>) -> Value {
    let mut v = reduced_model_json(&red.model);
    v["assumptions"] = serde_json::to_value(&red.certified.report).expect("report serializes");
    v
}

pub fn reduce_cmd(
    source: &Source,
    k: u32,
    eps: Option<f64>,
    out: Option<&Path>,
    base: &Tolerances,
) -> Outcome {
    let ord = order(k)?;
    let m = load(source, base)?;
    let eps = eps.unwrap_or(m.epsilon);
    let red = reduce(&m.fast, &m.slow, eps, ord, &m.tolerances)?;
    summary(&red);
    check_reduction(&red)?;
    let v = reduction_json(&red);
    emit(&v, out.map(|d| d.join("reduced_model.json")).as_deref())
}

fn initial_state(kind: Initial, s: usize, seed: u64) -> DensityMatrix<f64> {
    match kind {
        Initial::Excited => {
            DensityMatrix::new(Operator::unit(s, s - 1, s - 1)).expect("basis state")
        }
        Initial::Ground => DensityMatrix::new(Operator::unit(s, 0, 0)).expect("basis state"),
        Initial::Mixed => DensityMatrix::maximally_mixed(s),
        Initial::Random => random::density::<f64, _>(&mut random::rng(seed), s),
    }
}

fn csv_file(dir: &Path, name: &str, rep: &ComparisonReport) -> Outcome {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let path = dir.join(name);
    let f = std::fs::File::create(&path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_report_csv(rep, std::io::BufWriter::new(f))?;
    Ok(())
}

fn report_json(rep: &ComparisonReport) -> Value {
    json!({
        "epsilon": rep.epsilon,
        "order": rep.order,
        "max_error": rep.max_error,
        "final_error": rep.final_error,
        "clipped_mass": rep.clipped_mass,
        "max_trace_drift": rep.max_trace_drift,
        "points": rep.times.len(),
        "horizon": rep.times.last().copied().unwrap_or(0.0),
    })
}

pub fn validate(
    source: &Source,
    k: u32,
    eps: Option<f64>,
    run: &RunArgs,
    seed: u64,
    base: &Tolerances,
) -> Outcome {
    let ord = order(k)?;
    let horizon = Horizon::parse(&run.horizon).map_err(|e| Failure::Usage(e.to_string()))?;
    let m = load(source, base)?;
    let eps = eps.unwrap_or(m.epsilon);
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Failure::Usage(format!("--epsilon must be >= 0, got {eps}")));
    }
    // epsilon only scales the stored model, so reduce at any positive value
    let build_eps = if eps > 0.0 { eps } else { 1.0 };
    let red = reduce(&m.fast, &m.slow, build_eps, ord, &m.tolerances)?;
    check_reduction(&red)?;
    let mut model = red.model.clone();
    model.epsilon = eps;
    let t_end = match horizon {
        Horizon::SlowTime(_) if eps == 0.0 => {
            return Err(Failure::Usage(
                "a slow-time horizon needs epsilon > 0".into(),
            ));
        }
        h => h.end_time(eps),
    };
    let rho = initial_state(run.initial, model.slow_dim, seed);
    let times = uniform_grid(t_end, run.grid.max(2));
    let cmp = compare(&m.fast, &m.slow, &model, &rho, &times)?;
    let rep = &cmp.report;
    eprintln!(
        "epsilon {:e}: max error {:.6e}, final error {:.6e}",
        eps, rep.max_error, rep.final_error
    );
    check_comparison(rep)?;
    let v = json!({ "command": "validate", "report": report_json(rep) });
    match &run.out {
        Some(dir) => {
            csv_file(dir, "validate.csv", rep)?;
            emit(&v, Some(&dir.join("summary.json")))
        }
        None => emit(&v, None),
    }
}

pub fn sweep(
    source: &Source,
    k: u32,
    eps: &[f64],
    run: &RunArgs,
    jobs: usize,
    seed: u64,
    base: &Tolerances,
) -> Outcome {
    let ord = order(k)?;
    if eps.len() < 3 {
        return Err(Failure::Usage(format!(
            "need >= 3 epsilons, got {}",
            eps.len()
        )));
    }
    let horizon = Horizon::parse(&run.horizon).map_err(|e| Failure::Usage(e.to_string()))?;
    let m = load(source, base)?;
    // certification and reduction invariants at the largest epsilon
    let emax = eps.iter().copied().fold(0.0, f64::max);
    if emax > 0.0 {
        let red = reduce(&m.fast, &m.slow, emax, ord, &m.tolerances)?;
        check_reduction(&red)?;
        let rho_dim = red.model.slow_dim;
        let rho = initial_state(run.initial, rho_dim, seed);
        let opts = SweepOptions {
            order: ord,
            horizon,
            grid_points: run.grid.max(2),
            jobs,
        };
        let s =
            epsilon_sweep(&m.fast, &m.slow, &rho, eps, &opts, &m.tolerances).map_err(
                |e| match e {
                    Error::InvalidArgument(msg) => Failure::Usage(msg),
                    e => Failure::Core(e),
                },
            )?;
        for rep in &s.reports {
            eprintln!("epsilon {:e}: max error {:.6e}", rep.epsilon, rep.max_error);
            check_comparison(rep)?;
        }
        eprintln!("fitted slope {:.4}, monotone {}", s.slope, s.monotone);
        let v = json!({
            "command": "sweep",
            "order": s.order,
            "slope": s.slope,
            "intercept": s.intercept,
            "monotone": s.monotone,
            "warnings": s.warnings,
            "reports": s.reports.iter().map(report_json).collect::<Vec<_>>(),
        });
        match &run.out {
            Some(dir) => {
                for (i, rep) in s.reports.iter().enumerate() {
                    csv_file(dir, &format!("sweep_{i:02}.csv"), rep)?;
                }
                emit(&v, Some(&dir.join("summary.json")))
            }
            None => emit(&v, None),
        }
    } else {
        Err(Failure::Usage("epsilon values must be positive".into()))
    }
}

pub fn example(
    name: ExampleName,
    params: &ExampleParams,
    emit_model: bool,
    k: u32,
    out: Option<&PathBuf>,
    base: &Tolerances,
) -> Outcome {
    let m = example_model(name, params, base)?;
    let file = m.file.as_ref().expect("examples carry their file");
    if emit_model {
        let v = serde_json::to_value(file).expect("model file serializes");
        return emit(&v, out.map(|p| p.as_path()));
    }
    let ord = order(k)?;
    let red = reduce(&m.fast, &m.slow, m.epsilon, ord, &m.tolerances)?;
    summary(&red);
    check_reduction(&red)?;
    let mut v = json!({ "example": name.as_str(), "reduction": reduction_json(&red) });
    if name == ExampleName::CavityQubit {
        let p = cavity_params(params)?;
        let e = expected_reduced_cavity_qubit::<f64>(&p);
        v["expected"] = json!({
            "hamiltonian": operator_json(e.hamiltonian()),
            "jumps": e.jumps().iter().map(operator_json).collect::<Vec<_>>(),
        });
    }
    emit(&v, out.map(|p| p.as_path()))
}
