use faer::Mat;

use super::projector::SteadyProjector;
use crate::error::{AssumptionCheck, Error, Result};
use crate::operators::{linalg, LindbladGenerator, Operator};
use crate::scalar::{Real, C};
use crate::tolerances::Tolerances;

/// `dim x slow_dim` matrix with orthonormal columns.
#[derive(Clone, Debug)]
pub struct Isometry<T: Real> {
    mat: Mat<C<T>>,
}

impl<T: Real> Isometry<T> {
    pub fn new(mat: Mat<C<T>>, tol: f64) -> Result<Self> {
        let s = mat.ncols();
        if s == 0 || s > mat.nrows() {
            return Err(Error::InvalidArgument(format!(
                "isometry shape {}x{s}",
                mat.nrows()
            )));
        }
        let g = mat.adjoint() * &mat;
        let err = (&g - Mat::<C<T>>::identity(s, s)).norm_max();
        if err > T::of(tol) {
            return Err(Error::Linalg(format!(
                "columns are not orthonormal (deviation {err:.3e})"
            )));
        }
        Ok(Isometry { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn slow_dim(&self) -> usize {
        self.mat.ncols()
    }

    pub fn mat(&self) -> faer::MatRef<'_, C<T>> {
        self.mat.as_ref()
    }

    pub fn column(&self, k: usize) -> Vec<C<T>> {
        (0..self.dim()).map(|i| self.mat[(i, k)]).collect()
    }

    /// `S rho S^dagger`.
    pub fn embed(&self, rho: &Operator<T>) -> Operator<T> {
        let m = &(&self.mat * rho.mat()) * self.mat.adjoint();
        Operator::from_mat_unchecked(m)
    }

    /// `S^dagger X S`.
    pub fn compress(&self, x: &Operator<T>) -> Operator<T> {
        let m = &(self.mat.adjoint() * x.mat()) * &self.mat;
        Operator::from_mat_unchecked(m)
    }

    /// `X S` (a `dim x slow_dim` block).
    pub fn right_apply(&self, x: &Operator<T>) -> Mat<C<T>> {
        x.mat() * &self.mat
    }

    pub fn projector(&self) -> Operator<T> {
        Operator::from_mat_unchecked(&self.mat * self.mat.adjoint())
    }

    pub fn cast<U: Real>(&self) -> Isometry<U> {
        Isometry {
            mat: Mat::from_fn(self.dim(), self.slow_dim(), |i, j| {
                crate::scalar::cast_complex(self.mat[(i, j)])
            }),
        }
    }
}

/// Decoherence-free subspace of the fast generator.
#[derive(Clone, Debug)]
pub struct DfsData<T: Real> {
    pub slow_dim: usize,
    pub p0: Operator<T>,
    pub s0: Isometry<T>,
    /// Largest `||L0(S0 E S0^dagger)||_F` over slow matrix units.
    pub dfs_residual: T,
    /// Eigenvalues of `R(I/d)` on the support, descending.
    pub support_weights: Vec<T>,
}

impl<T: Real> DfsData<T> {
    pub fn basis_vectors(&self) -> Vec<Vec<C<T>>> {
        (0..self.slow_dim).map(|k| self.s0.column(k)).collect()
    }
}

/// Generator scale used to make the decoherence-free residual relative.
pub(crate) fn generator_scale<T: Real>(gen: &LindbladGenerator<T>) -> T {
    let j = gen.jumps().iter().fold(T::zero(), |a, l| {
        let n = l.frobenius_norm();
        a + n * n
    });
    T::one().max(gen.hamiltonian().frobenius_norm() + j)
}

pub fn identify_dfs<T: Real>(
    r: &SteadyProjector<T>,
    l0: &LindbladGenerator<T>,
    tol: &Tolerances,
) -> Result<DfsData<T>> {
    let d = r.dim();
    let mix = r.steady_mixture()?.hermitian_part();
    let e = mix.eigh()?;
    let support: Vec<usize> = (0..d)
        .rev()
        .filter(|&k| e.values[k] > T::of(tol.tol_support))
        .collect();
    let s = support.len();
    if s == 0 {
        return Err(Error::assumption(
            AssumptionCheck::NotDfs,
            "R(I/d) has empty support",
        ));
    }
    let q = Mat::from_fn(d, s, |i, k| e.vectors[(i, support[k])]);
    let basis = linalg::echelon_basis(q.as_ref());
    let s0 = Isometry::new(basis, 1e-10)?;
    let p0 = s0.projector();

    let pp = &p0 * &p0;
    let proj_err = pp.max_abs_diff(&p0).max(p0.hermiticity_deviation());
    if proj_err > T::of(1e-10) {
        return Err(Error::Linalg(format!(
            "P0 is not an orthogonal projector (deviation {proj_err:.3e})"
        )));
    }

    // Every density on H0 must be steady.
    let scale = generator_scale(l0);
    let mut worst = T::zero();
    for nu in 0..s {
        for mu in 0..s {
            let x = s0.embed(&Operator::unit(s, nu, mu));
            let res = l0.apply(&x)?.frobenius_norm();
            worst = worst.max(res);
        }
    }
    if worst > T::of(tol.tol_dfs) * scale {
        return Err(Error::assumption(
            AssumptionCheck::NotDfs,
            format!(
                "an operator supported on the {s}-dimensional support of R(I/d) is not steady (residual {worst:.3e})"
            ),
        ));
    }
    // ... and nothing else may be steady.
    if r.rank() != s * s {
        return Err(Error::assumption(
            AssumptionCheck::NotDfs,
            format!("steady set has dimension {} but a decoherence-free space of dimension {s} accounts for {}", r.rank(), s * s),
        ));
    }
    for (k, v) in r.steady_operators().iter().enumerate() {
        let off = (&(&p0 * v) * &p0).max_abs_diff(v);
        if off > T::of(tol.tol_dfs) * T::one().max(v.frobenius_norm()) {
            return Err(Error::assumption(
                AssumptionCheck::NotDfs,
                format!("steady operator {k} leaks outside the support (residual {off:.3e})"),
            ));
        }
    }
    Ok(DfsData {
        slow_dim: s,
        p0,
        s0,
        dfs_residual: worst,
        support_weights: support.iter().map(|&k| e.values[k]).collect(),
    })
}
