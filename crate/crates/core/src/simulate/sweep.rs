use serde::Serialize;

use super::compare::{compare, ComparisonReport};
use super::propagate::uniform_grid;
use crate::error::{Error, Result};
use crate::operators::{DensityMatrix, LindbladGenerator};
use crate::reduction::{assemble, Order};
use crate::scalar::Real;
use crate::tolerances::Tolerances;

/// How long to integrate at each `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Horizon {
    /// Same final time for every `epsilon`.
    Fixed(f64),
    /// Final time `tau / eps^2`.
    SlowTime(f64),
}

impl Horizon {
    pub fn end_time(self, eps: f64) -> f64 {
        match self {
            Horizon::Fixed(t) => t,
            Horizon::SlowTime(tau) => tau / (eps * eps),
        }
    }

    /// `fixed:T` or `slow:tau`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidArgument(format!("horizon must be fixed:T or slow:tau, got {s:?}"));
        let (kind, val) = s.split_once(':').ok_or_else(bad)?;
        let v: f64 = val.trim().parse().map_err(|_| bad())?;
        if !(v.is_finite() && v > 0.0) {
            return Err(bad());
        }
        match kind.trim() {
            "fixed" => Ok(Horizon::Fixed(v)),
            "slow" => Ok(Horizon::SlowTime(v)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub order: Order,
    pub horizon: Horizon,
    pub grid_points: usize,
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            order: Order::Second,
            horizon: Horizon::Fixed(1.0),
            grid_points: 400,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub order: u32,
    /// Reports in ascending `epsilon`.
    pub reports: Vec<ComparisonReport>,
    /// Least-squares slope of `log max_error` against `log eps`.
    pub slope: f64,
    pub intercept: f64,
    /// Max error strictly increases with `epsilon`.
    pub monotone: bool,
    pub warnings: Vec<String>,
}

/// `2 ||H|| + 2 sum ||L||^2` (spectral norms), a bound on the generator's
/// norm as a map on trace-class operators.
fn generator_bound<T: Real>(g: &LindbladGenerator<T>) -> Result<f64> {
    let norm = |x: &crate::operators::Operator<T>| -> Result<f64> {
        let sv = crate::operators::linalg::singular_values(x.mat())?;
        Ok(sv.iter().fold(0.0, |a, s| a.max(s.as_f64())))
    };
    let mut b = 2.0 * norm(g.hamiltonian())?;
    for l in g.jumps() {
        b += 2.0 * norm(l)?.powi(2);
    }
    Ok(b)
}

/// Least-squares line through `(x, y)`; returns `(slope, intercept)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Run [`compare`] over several `epsilon` values, reusing one certification
/// of the fast generator, and fit the error exponent.
pub fn epsilon_sweep<T: Real>(
    fast: &LindbladGenerator<T>,
    slow: &LindbladGenerator<T>,
    rho_s0: &DensityMatrix<T>,
    epsilons: &[f64],
    opts: &SweepOptions,
    tol: &Tolerances,
) -> Result<SweepReport> {
    let mut eps: Vec<f64> = epsilons.to_vec();
    if eps.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a sweep needs at least 3 epsilon values, got {}",
            eps.len()
        )));
    }
    if eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidArgument(
            "epsilon values must be positive and finite".into(),
        ));
    }
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    if eps.len() < 3 {
        return Err(Error::InvalidArgument(
            "a sweep needs at least 3 distinct epsilon values".into(),
        ));
    }
    let mut warnings = Vec::new();
    let span = eps[eps.len() - 1] / eps[0];
    if span < 10.0 {
        warnings.push(format!(
            "epsilon values span a factor {span:.3} (less than one decade)"
        ));
    }

    let cert = crate::asymptotics::certify(fast, tol)?;
    let gap = cert.spectrum.gap.map(|g| g.as_f64()).unwrap_or(0.0);
    let l1 = generator_bound(slow)?;
    let emax = eps[eps.len() - 1];
    if emax * l1 >= gap / 4.0 {
        warnings.push(format!(
            "largest epsilon {emax} gives eps*||L1|| <= {:.3e}, not below gap/4 = {:.3e}",
            emax * l1,
            gap / 4.0
        ));
    }
    let base = assemble(fast, slow, T::of(emax), opts.order, &cert, tol)?;
    let slow_dim = base.slow_dim;
    if rho_s0.dim() != slow_dim {
        return Err(Error::dims("slow initial state", slow_dim, rho_s0.dim()));
    }

    let run = |e: f64| -> Result<ComparisonReport> {
        let mut model = base.clone();
        model.epsilon = T::of(e);
        let times = uniform_grid(T::of(opts.horizon.end_time(e)), opts.grid_points.max(2));
        Ok(compare(fast, slow, &model, rho_s0, &times)?.report)
    };

    let jobs = opts.jobs.max(1).min(eps.len());
    let results: Vec<Result<ComparisonReport>> = if jobs == 1 {
        eps.iter().map(|&e| run(e)).collect()
    } else {
        let mut slots: Vec<Option<Result<ComparisonReport>>> =
            (0..eps.len()).map(|_| None).collect();
        std::thread::scope(|s| {
            let run = &run;
            let chunk = eps.len().div_ceil(jobs);
            for (es, out) in eps.chunks(chunk).zip(slots.chunks_mut(chunk)) {
                s.spawn(move || {
                    for (e, o) in es.iter().zip(out.iter_mut()) {
                        *o = Some(run(*e));
                    }
                });
            }
        });
        slots
            .into_iter()
            .map(|o| o.expect("every slot filled"))
            .collect()
    };
    let reports = results.into_iter().collect::<Result<Vec<_>>>()?;

    let xs: Vec<f64> = reports.iter().map(|r| r.epsilon.ln()).collect();
    let ys: Vec<f64> = reports
        .iter()
        .map(|r| r.max_error.max(f64::MIN_POSITIVE).ln())
        .collect();
    let (slope, intercept) = fit_line(&xs, &ys);
    let monotone = reports.windows(2).all(|w| w[1].max_error > w[0].max_error);
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(SweepReport {
        order: opts.order.as_int(),
        reports,
        slope,
        intercept,
        monotone,
        warnings,
    })
}
