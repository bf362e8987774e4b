//! Dense operator algebra, Lindblad generators and superoperators.

mod density;
pub mod expm;
mod generator;
pub mod hbasis;
pub mod linalg;
mod operator;
mod superop;

pub use density::DensityMatrix;
pub use generator::{dissipator, LindbladGenerator};
pub use hbasis::HermitianBasis;
pub use linalg::HermitianEigen;
pub use operator::Operator;
pub use superop::Superoperator;

use crate::error::Result;
use crate::scalar::Real;

pub fn apply_generator<T: Real>(
    gen: &LindbladGenerator<T>,
    rho: &Operator<T>,
) -> Result<Operator<T>> {
    gen.apply(rho)
}

pub fn apply_adjoint_generator<T: Real>(
    gen: &LindbladGenerator<T>,
    a: &Operator<T>,
) -> Result<Operator<T>> {
    gen.apply_adjoint(a)
}

pub fn liouvillian_matrix<T: Real>(gen: &LindbladGenerator<T>) -> Superoperator<T> {
    gen.liouvillian()
}

pub fn matrix_exponential<T: Real>(s: &Superoperator<T>, t: f64) -> Result<Superoperator<T>> {
    s.expm(t)
}

pub fn pseudo_inverse_psd<T: Real>(
    a: &Operator<T>,
    rel_tol: f64,
    tol_psd: f64,
) -> Result<Operator<T>> {
    a.require_hermitian(
        "pseudo-inverse input",
        crate::tolerances::Tolerances::default().tol_herm,
    )?;
    let m = linalg::pinv_psd(a.mat(), rel_tol, tol_psd)?;
    Ok(Operator::from_mat_unchecked(m))
}

/// `1/2 ||a - b||_1`.
pub fn trace_distance<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<T> {
    a.check_same_dim(b, "trace distance")?;
    Ok((a - b).trace_norm()? * T::of(0.5))
}

/// Pauli and ladder operators on a qubit, basis order `|g>, |e>`.
pub mod qubit {
    use super::Operator;
    use crate::scalar::{cf, Real};

    pub fn sigmax<T: Real>() -> Operator<T> {
        Operator::from_fn(2, |i, j| if i != j { cf(1.0, 0.0) } else { cf(0.0, 0.0) })
    }

    pub fn sigmay<T: Real>() -> Operator<T> {
        Operator::from_fn(2, |i, j| match (i, j) {
            (0, 1) => cf(0.0, -1.0),
            (1, 0) => cf(0.0, 1.0),
            _ => cf(0.0, 0.0),
        })
    }

    pub fn sigmaz<T: Real>() -> Operator<T> {
        Operator::diagonal(&[T::one(), -T::one()])
    }

    /// `|e><g|`.
    pub fn sigmap<T: Real>() -> Operator<T> {
        Operator::unit(2, 1, 0)
    }

    /// `|g><e|`.
    pub fn sigmam<T: Real>() -> Operator<T> {
        Operator::unit(2, 0, 1)
    }
}

/// Truncated harmonic-oscillator operators.
pub mod fock {
    use super::Operator;
    use crate::scalar::{c, Real};

    /// `<i| a |i+1> = sqrt(i+1)`.
    pub fn destroy<T: Real>(n: usize) -> Operator<T> {
        Operator::from_fn(n, |i, j| {
            if j == i + 1 {
                c(T::of(j as f64).sqrt(), T::zero())
            } else {
                c(T::zero(), T::zero())
            }
        })
    }

    pub fn create<T: Real>(n: usize) -> Operator<T> {
        destroy::<T>(n).dagger()
    }

    pub fn num<T: Real>(n: usize) -> Operator<T> {
        Operator::diagonal(&(0..n).map(|k| T::of(k as f64)).collect::<Vec<_>>())
    }
}
