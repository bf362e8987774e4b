use super::Operator;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::tolerances::Tolerances;

/// Hermitian, unit-trace, positive semidefinite operator (within tolerances).
#[derive(Clone, Debug)]
pub struct DensityMatrix<T: Real> {
    op: Operator<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(op: Operator<T>) -> Result<Self> {
        Self::with_tolerances(op, &Tolerances::default())
    }

    pub fn with_tolerances(op: Operator<T>, tol: &Tolerances) -> Result<Self> {
        if !op.is_finite() {
            return Err(Error::NonFinite("density matrix".into()));
        }
        op.require_hermitian("density matrix", tol.tol_herm)?;
        let tr = op.trace();
        if (tr - C::new(T::one(), T::zero())).norm() > T::of(tol.tol_trace) {
            return Err(Error::BadTrace {
                what: "density matrix".into(),
                trace: tr.re.as_f64(),
            });
        }
        let min = op.min_eigenvalue()?;
        if min < -T::of(tol.tol_psd) {
            return Err(Error::NotPositive {
                what: "density matrix".into(),
                min_eigenvalue: min.as_f64(),
            });
        }
        Ok(DensityMatrix { op })
    }

    pub fn pure(ket: &[C<T>]) -> Result<Self> {
        let n = ket.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        if n == T::zero() || !n.is_finite() {
            return Err(Error::InvalidArgument(
                "state vector has zero or non-finite norm".into(),
            ));
        }
        let v: Vec<C<T>> = ket.iter().map(|z| z / n).collect();
        Ok(DensityMatrix {
            op: Operator::projector(&v),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            op: Operator::identity(dim).scale_re(T::one() / T::of(dim as f64)),
        }
    }

    /// Nearest density matrix by clipping negative eigenvalues and
    /// renormalizing. Returns the clipped negative mass.
    pub fn clip(op: &Operator<T>) -> Result<(Self, T)> {
        let e = op.eigh()?;
        let d = op.dim();
        let mut clipped = T::zero();
        let vals: Vec<T> = e
            .values
            .iter()
            .map(|&l| {
                if l < T::zero() {
                    clipped = clipped - l;
                    T::zero()
                } else {
                    l
                }
            })
            .collect();
        let total = vals.iter().fold(T::zero(), |a, &v| a + v);
        if total <= T::zero() {
            return Err(Error::NotPositive {
                what: "clipped state".into(),
                min_eigenvalue: e.values[0].as_f64(),
            });
        }
        let u = &e.vectors;
        let rho = Operator::from_fn(d, |i, j| {
            (0..d).fold(C::new(T::zero(), T::zero()), |a, k| {
                a + u[(i, k)] * u[(j, k)].conj() * (vals[k] / total)
            })
        });
        Ok((DensityMatrix { op: rho }, clipped))
    }

    pub(crate) fn from_op_unchecked(op: Operator<T>) -> Self {
        DensityMatrix { op }
    }

    pub fn op(&self) -> &Operator<T> {
        &self.op
    }

    pub fn into_op(self) -> Operator<T> {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn purity(&self) -> T {
        self.op.trace_product(&self.op).re
    }
}
