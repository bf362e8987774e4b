use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use super::spectrum::{to_operators, Spectrum};
use crate::error::{AssumptionCheck, Error, Result};
use crate::operators::{Operator, Superoperator};
use crate::scalar::{Real, C};

/// Spectral projector onto the steady set along the range of the generator,
/// `R(X) = sum_a V_a sum_c Ginv[a, c] tr(W_c X)` with `V` and `W` the right
/// and left kernels and `G = W^T V`.
#[derive(Clone, Debug)]
pub struct SteadyProjector<T: Real> {
    dim: usize,
    v: Vec<Operator<T>>,
    w: Vec<Operator<T>>,
    ginv: Mat<T>,
    /// Smallest singular value of `G`; near zero signals a Jordan block.
    pub overlap_sigma_min: T,
}

/// Below this `sigma_min(W^T V)` the kernels are treated as defective.
const MIN_OVERLAP: f64 = 1e-8;

pub fn steady_projector<T: Real>(spectrum: &Spectrum<T>) -> Result<SteadyProjector<T>> {
    let k = spectrum.right_kernel.ncols();
    if !spectrum.is_semisimple_zero() {
        return Err(Error::assumption(
            AssumptionCheck::ZeroNotSemisimple,
            format!(
                "zero eigenvalue has algebraic multiplicity {} but kernel dimension {} (left {})",
                spectrum.zero_multiplicity_algebraic,
                k,
                spectrum.left_kernel.ncols()
            ),
        ));
    }
    if k == 0 {
        return Err(Error::Linalg("generator has no steady state".into()));
    }
    let g = spectrum.left_kernel.transpose() * &spectrum.right_kernel;
    let sv = g
        .singular_values()
        .map_err(|e| Error::Linalg(format!("{e:?}")))?;
    let smin = sv.iter().copied().fold(T::infinity(), T::min);
    if smin < T::of(MIN_OVERLAP) {
        return Err(Error::assumption(
            AssumptionCheck::ZeroNotSemisimple,
            format!("left and right kernels are nearly orthogonal (sigma_min = {smin:.3e})"),
        ));
    }
    let ginv = g.partial_piv_lu().inverse();
    Ok(SteadyProjector {
        dim: spectrum.dim,
        v: spectrum.steady_operators(),
        w: spectrum.invariant_operators(),
        ginv,
        overlap_sigma_min: smin,
    })
}

impl<T: Real> SteadyProjector<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    pub fn apply(&self, x: &Operator<T>) -> Result<Operator<T>> {
        x.check_same_dim(&self.v[0], "steady projector argument")?;
        let t: Vec<C<T>> = self.w.iter().map(|w| w.trace_product(x)).collect();
        Ok(self.combine(&self.v, &t, false))
    }

    /// `R*(A) = sum_c W_c sum_a Ginv[a, c] tr(V_a A)`.
    pub fn apply_adjoint(&self, a: &Operator<T>) -> Result<Operator<T>> {
        a.check_same_dim(&self.v[0], "adjoint steady projector argument")?;
        let t: Vec<C<T>> = self.v.iter().map(|v| v.trace_product(a)).collect();
        Ok(self.combine(&self.w, &t, true))
    }

    fn combine(&self, ops: &[Operator<T>], t: &[C<T>], transpose: bool) -> Operator<T> {
        let mut out = Operator::zeros(self.dim);
        for (a, op) in ops.iter().enumerate() {
            let mut coef = C::new(T::zero(), T::zero());
            for (cidx, tc) in t.iter().enumerate() {
                let g = if transpose {
                    self.ginv[(cidx, a)]
                } else {
                    self.ginv[(a, cidx)]
                };
                coef = coef + *tc * g;
            }
            if coef.norm() > T::zero() {
                out = &out + &op.scale(coef);
            }
        }
        out
    }

    pub fn to_superoperator(&self) -> Superoperator<T> {
        let d = self.dim;
        let n = d * d;
        let mut m = Mat::<C<T>>::zeros(n, n);
        for (a, va) in self.v.iter().enumerate() {
            let vv = va.vec();
            for (c, wc) in self.w.iter().enumerate() {
                let g = self.ginv[(a, c)];
                // tr(W_c X) = vec(W_c^T) . vec(X)
                let wt = wc.transpose().vec();
                for col in 0..n {
                    let f = wt[col] * g;
                    if f.norm() == T::zero() {
                        continue;
                    }
                    for row in 0..n {
                        m[(row, col)] = m[(row, col)] + vv[row] * f;
                    }
                }
            }
        }
        Superoperator::from_mat(d, m).expect("square by construction")
    }

    /// `R(I/d)`.
    pub fn steady_mixture(&self) -> Result<Operator<T>> {
        self.apply(&Operator::identity(self.dim).scale_re(T::one() / T::of(self.dim as f64)))
    }

    pub fn steady_operators(&self) -> &[Operator<T>] {
        &self.v
    }

    pub fn invariant_operators(&self) -> &[Operator<T>] {
        &self.w
    }
}

/// Orthonormal Hermitian basis of the kernel of the adjoint generator.
pub fn invariant_operators<T: Real>(
    spectrum: &Spectrum<T>,
    projector: &SteadyProjector<T>,
    tol: f64,
) -> Result<Vec<Operator<T>>> {
    let ops = to_operators(spectrum.dim, &spectrum.left_kernel);
    for (k, j) in ops.iter().enumerate() {
        let r = projector.apply_adjoint(j)?;
        let err = r.max_abs_diff(j);
        if err > T::of(tol) * T::one().max(j.frobenius_norm()) {
            return Err(Error::Linalg(format!(
                "invariant operator {k} is not fixed by R* (residual {err:.3e})"
            )));
        }
    }
    Ok(ops)
}
