use faer::Mat;

use crate::error::{AssumptionCheck, Error, Result};
use crate::operators::{linalg, HermitianBasis, LindbladGenerator, Operator, Superoperator};
use crate::scalar::{Real, C};
use crate::tolerances::Tolerances;

/// Liouvillian spectrum plus the kernel data needed for the steady
/// projector.
#[derive(Clone, Debug)]
pub struct Spectrum<T: Real> {
    pub dim: usize,
    pub eigenvalues: Vec<C<T>>,
    pub zero_multiplicity_algebraic: usize,
    pub zero_multiplicity_geometric: usize,
    /// `min(-Re lambda)` over nonzero eigenvalues; `None` when every
    /// eigenvalue is zero.
    pub gap: Option<T>,
    /// Absolute threshold used to call an eigenvalue zero.
    pub zero_threshold: T,
    /// Right kernel in real Hermitian coordinates (orthonormal columns).
    pub(crate) right_kernel: Mat<T>,
    /// Left kernel (kernel of the adjoint), same convention.
    pub(crate) left_kernel: Mat<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn is_semisimple_zero(&self) -> bool {
        self.zero_multiplicity_algebraic == self.zero_multiplicity_geometric
            && self.left_kernel.ncols() == self.right_kernel.ncols()
    }

    /// Error unless there are decaying modes.
    pub fn require_gap(&self) -> Result<T> {
        self.gap.ok_or_else(|| {
            Error::assumption(
                AssumptionCheck::NotDissipative,
                "every Liouvillian eigenvalue is zero; the gap is undefined",
            )
        })
    }

    /// Steady operators (kernel of the generator) as Hermitian operators.
    pub fn steady_operators(&self) -> Vec<Operator<T>> {
        to_operators(self.dim, &self.right_kernel)
    }

    /// Invariant observables (kernel of the adjoint) as Hermitian operators.
    pub fn invariant_operators(&self) -> Vec<Operator<T>> {
        to_operators(self.dim, &self.left_kernel)
    }
}

pub(crate) fn to_operators<T: Real>(dim: usize, cols: &Mat<T>) -> Vec<Operator<T>> {
    let hb = HermitianBasis::new(dim);
    (0..cols.ncols())
        .map(|k| {
            let v: Vec<T> = (0..cols.nrows()).map(|i| cols[(i, k)]).collect();
            hb.from_coords(&v)
        })
        .collect()
}

/// Spectrum of a Hermiticity-preserving superoperator.
pub fn analyze_spectrum<T: Real>(l0: &Superoperator<T>, tol: &Tolerances) -> Result<Spectrum<T>> {
    analyze_real(l0.dim(), l0.to_real(), tol)
}

/// Same as [`analyze_spectrum`], building the real Liouvillian directly.
pub fn analyze_generator<T: Real>(
    gen: &LindbladGenerator<T>,
    tol: &Tolerances,
) -> Result<Spectrum<T>> {
    analyze_real(gen.dim(), gen.real_liouvillian(), tol)
}

pub(crate) fn analyze_real<T: Real>(
    dim: usize,
    lr: Mat<T>,
    tol: &Tolerances,
) -> Result<Spectrum<T>> {
    let norm = lr.norm_l2();
    let zero_threshold = T::of(tol.tol_zero) * T::one().max(norm);
    let eigenvalues = linalg::eigenvalues_real(lr.as_ref())?;
    let mut alg = 0;
    let mut gap: Option<T> = None;
    let mut worst: Option<C<T>> = None;
    for &l in &eigenvalues {
        if l.norm() <= zero_threshold {
            alg += 1;
            continue;
        }
        let rate = -l.re;
        if rate <= zero_threshold && worst.is_none_or(|w: C<T>| l.re > w.re) {
            worst = Some(l);
        }
        gap = Some(gap.map_or(rate, |g| g.min(rate)));
    }
    if let Some(w) = worst {
        return Err(Error::assumption(
            AssumptionCheck::NotDissipative,
            format!(
                "nonzero eigenvalue {:.6e}{:+.6e}i has no decay (Re lambda >= -{:.3e})",
                w.re, w.im, zero_threshold
            ),
        ));
    }
    let right_kernel = linalg::real_kernel(lr.as_ref(), zero_threshold)?;
    let left_kernel = linalg::real_kernel(lr.transpose(), zero_threshold)?;
    log::debug!(
        "spectrum: dim {dim}, zero alg {alg}, geo {}, left {}, gap {:?}",
        right_kernel.ncols(),
        left_kernel.ncols(),
        gap
    );
    Ok(Spectrum {
        dim,
        eigenvalues,
        zero_multiplicity_algebraic: alg,
        zero_multiplicity_geometric: right_kernel.ncols(),
        gap,
        zero_threshold,
        right_kernel,
        left_kernel,
    })
}
