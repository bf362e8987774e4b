use faer::{Col, Mat};

use crate::error::{Error, Result};
use crate::operators::{expm::expm_scaled, DensityMatrix, HermitianBasis, LindbladGenerator};
use crate::scalar::Real;

/// States of a master equation on a time grid.
#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub states: Vec<DensityMatrix<T>>,
    /// Largest `|tr rho - 1|` removed by renormalization.
    pub max_trace_correction: T,
    /// Trace of each state before renormalization.
    pub raw_traces: Vec<T>,
    /// Smallest eigenvalue of each state.
    pub min_eigenvalues: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&DensityMatrix<T>> {
        self.states.last()
    }
}

/// `n` evenly spaced points on `[0, t_end]`.
pub fn uniform_grid<T: Real>(t_end: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![T::zero()],
        _ => (0..n)
            .map(|k| t_end * T::of(k as f64) / T::of((n - 1) as f64))
            .collect(),
    }
}

fn check_times<T: Real>(times: &[T]) -> Result<()> {
    let Some(&t0) = times.first() else {
        return Err(Error::InvalidArgument("empty time grid".into()));
    };
    if !(t0.is_finite() && t0 >= T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "first time must be finite and >= 0, got {t0}"
        )));
    }
    for w in times.windows(2) {
        if !(w[1].is_finite() && w[1] > w[0]) {
            return Err(Error::InvalidArgument(format!(
                "times must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Integrate `d rho/dt = L(rho)` by exact exponential steps in the real
/// Hermitian basis. One propagator is reused while the step length repeats.
pub fn propagate<T: Real>(
    gen: &LindbladGenerator<T>,
    rho0: &DensityMatrix<T>,
    times: &[T],
) -> Result<Trajectory<T>> {
    if gen.dim() != rho0.dim() {
        return Err(Error::dims("initial state", gen.dim(), rho0.dim()));
    }
    check_times(times)?;
    let basis = HermitianBasis::new(gen.dim());
    let lr = gen.real_liouvillian();
    let c0 = basis.coords(rho0.op());
    let mut x = Col::from_fn(basis.len(), |k| c0[k]);
    let tr_idx: Vec<usize> = (0..gen.dim()).collect();

    let mut out = Trajectory {
        times: times.to_vec(),
        states: Vec::with_capacity(times.len()),
        max_trace_correction: T::zero(),
        raw_traces: Vec::with_capacity(times.len()),
        min_eigenvalues: Vec::with_capacity(times.len()),
    };
    let mut step: Option<(f64, Mat<T>)> = None;
    for k in 0..times.len() {
        if k > 0 {
            let h = (times[k] - times[k - 1]).as_f64();
            let same = matches!(&step, Some((h0, _)) if (h - h0).abs() <= 1e-12 * h0.abs());
            if !same {
                step = Some((h, expm_scaled(lr.as_ref(), h)?));
            }
            let p = &step.as_ref().expect("step set").1;
            x = p * &x;
        }
        // diagonal elements come first in the basis, so the trace is their sum
        let tr = tr_idx.iter().fold(T::zero(), |a, &i| a + x[i]);
        if !tr.is_finite() || !(0..x.nrows()).all(|i| x[i].is_finite()) {
            return Err(Error::NonFinite(format!("state at t = {}", times[k])));
        }
        out.raw_traces.push(tr);
        out.max_trace_correction = out.max_trace_correction.max((tr - T::one()).abs());
        if tr <= T::zero() {
            return Err(Error::BadTrace {
                what: format!("state at t = {}", times[k]),
                trace: tr.as_f64(),
            });
        }
        let inv = T::one() / tr;
        for i in 0..x.nrows() {
            x[i] = x[i] * inv;
        }
        let v: Vec<T> = (0..x.nrows()).map(|i| x[i]).collect();
        let op = basis.from_coords(&v);
        out.min_eigenvalues.push(op.min_eigenvalue()?);
        out.states.push(DensityMatrix::from_op_unchecked(op));
    }
    if out.max_trace_correction.as_f64() > 1e-9 {
        log::warn!(
            "trace drift {:.3e} removed during propagation",
            out.max_trace_correction.as_f64()
        );
    } else {
        log::debug!(
            "trace drift {:.3e} removed during propagation",
            out.max_trace_correction.as_f64()
        );
    }
    Ok(out)
}
