use serde::Serialize;

use super::propagate::{propagate, Trajectory};
use crate::error::{Error, Result};
use crate::operators::{trace_distance, DensityMatrix, LindbladGenerator};
use crate::reduction::ReducedModel;
use crate::scalar::Real;

/// Full versus reduced dynamics at one `epsilon`.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub epsilon: f64,
    pub order: u32,
    pub times: Vec<f64>,
    /// `1/2 ||rho_full(t) - K(rho_s(t))||_1`.
    pub trace_distance: Vec<f64>,
    pub max_error: f64,
    pub final_error: f64,
    /// Trace of the full state before renormalization.
    pub trace: Vec<f64>,
    /// Smallest eigenvalue of the full state.
    pub min_eig: Vec<f64>,
    /// Negative mass removed when lifting the initial slow state.
    pub clipped_mass: f64,
    pub max_trace_drift: f64,
}

/// Both trajectories behind a [`ComparisonReport`].
#[derive(Clone, Debug)]
pub struct Comparison<T: Real> {
    pub report: ComparisonReport,
    pub full: Trajectory<T>,
    pub reduced: Trajectory<T>,
}

/// Propagate `fast + eps slow` from the lifted `rho_s0` and the reduced model
/// from `rho_s0`, and measure the distance between the full state and the
/// lifted reduced state. `eps` is the model's stored value.
pub fn compare<T: Real>(
    fast: &LindbladGenerator<T>,
    slow: &LindbladGenerator<T>,
    model: &ReducedModel<T>,
    rho_s0: &DensityMatrix<T>,
    times: &[T],
) -> Result<Comparison<T>> {
    if rho_s0.dim() != model.slow_dim {
        return Err(Error::dims(
            "slow initial state",
            model.slow_dim,
            rho_s0.dim(),
        ));
    }
    let eps = model.epsilon;
    let lifted = model.kraus_parametrization(rho_s0.op())?;
    let (rho0, clipped) = DensityMatrix::clip(&lifted)?;
    if clipped > T::zero() {
        log::info!("lifting clipped {:.3e} of negative mass", clipped.as_f64());
    }
    let full_gen = fast.perturbed(slow, eps)?;
    let full = propagate(&full_gen, &rho0, times)?;
    let reduced = propagate(&model.generator(), rho_s0, times)?;

    let mut errors = Vec::with_capacity(times.len());
    for (f, r) in full.states.iter().zip(&reduced.states) {
        let lift = model.kraus_parametrization(r.op())?;
        errors.push(trace_distance(f.op(), &lift)?.as_f64());
    }
    let max_error = errors.iter().copied().fold(0.0, f64::max);
    let final_error = errors.last().copied().unwrap_or(0.0);
    let report = ComparisonReport {
        epsilon: eps.as_f64(),
        order: model.order.as_int(),
        times: times.iter().map(|t| t.as_f64()).collect(),
        trace_distance: errors,
        max_error,
        final_error,
        trace: full.raw_traces.iter().map(|x| x.as_f64()).collect(),
        min_eig: full.min_eigenvalues.iter().map(|x| x.as_f64()).collect(),
        clipped_mass: clipped.as_f64(),
        max_trace_drift: full.max_trace_correction.as_f64(),
    };
    Ok(Comparison {
        report,
        full,
        reduced,
    })
}
