use faer::{Mat, MatRef};

use super::{expm, HermitianBasis, Operator};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Linear map on `dim x dim` operators, stored as a `dim^2 x dim^2` matrix
/// acting on column-stacked vectors: `vec(A rho B) = (B^T (x) A) vec(rho)`.
#[derive(Clone, Debug)]
pub struct Superoperator<T: Real> {
    dim: usize,
    mat: Mat<C<T>>,
}

impl<T: Real> Superoperator<T> {
    pub fn from_mat(dim: usize, mat: Mat<C<T>>) -> Result<Self> {
        let n = dim * dim;
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::dims(
                "superoperator side",
                n,
                mat.nrows().max(mat.ncols()),
            ));
        }
        Ok(Superoperator { dim, mat })
    }

    pub(crate) fn from_mat_unchecked(dim: usize, mat: Mat<C<T>>) -> Self {
        Superoperator { dim, mat }
    }

    /// From the real Hermitian-basis matrix of a Hermiticity-preserving map.
    pub fn from_real(dim: usize, m: &Mat<T>) -> Result<Self> {
        let n = dim * dim;
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::dims("real superoperator side", n, m.nrows()));
        }
        Ok(Superoperator {
            dim,
            mat: HermitianBasis::new(dim).complex_matrix(m),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator {
            dim,
            mat: Mat::identity(dim * dim, dim * dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Superoperator {
            dim,
            mat: Mat::zeros(dim * dim, dim * dim),
        }
    }

    /// `rho -> A rho B`.
    pub fn sandwich(a: &Operator<T>, b: &Operator<T>) -> Result<Self> {
        a.check_same_dim(b, "sandwich superoperator")?;
        let d = a.dim();
        let n = d * d;
        Ok(Superoperator {
            dim: d,
            mat: Mat::from_fn(n, n, |row, col| {
                let (p, q) = (row % d, row / d);
                let (r, s) = (col % d, col / d);
                a.get(p, r) * b.get(s, q)
            }),
        })
    }

    /// `rho -> sum_k M_k rho M_k^dagger`.
    pub fn from_kraus(ops: &[Operator<T>]) -> Result<Self> {
        let d = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus family".into()))?
            .dim();
        let mut out = Superoperator::zeros(d);
        for m in ops {
            out = out.add(&Superoperator::sandwich(m, &m.dagger())?)?;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> MatRef<'_, C<T>> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<C<T>> {
        self.mat
    }

    pub fn apply(&self, rho: &Operator<T>) -> Result<Operator<T>> {
        if rho.dim() != self.dim {
            return Err(Error::dims("superoperator argument", self.dim, rho.dim()));
        }
        let v = Mat::from_fn(self.dim * self.dim, 1, |k, _| {
            rho.get(k % self.dim, k / self.dim)
        });
        let w = &self.mat * &v;
        Ok(Operator::from_fn(self.dim, |i, j| w[(i + j * self.dim, 0)]))
    }

    /// Hilbert-Schmidt adjoint.
    pub fn adjoint(&self) -> Self {
        Superoperator {
            dim: self.dim,
            mat: self.mat.adjoint().to_owned(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::dims(
                "superoperator composition",
                self.dim,
                other.dim,
            ));
        }
        Ok(Superoperator {
            dim: self.dim,
            mat: &self.mat * &other.mat,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::dims("superoperator sum", self.dim, other.dim));
        }
        Ok(Superoperator {
            dim: self.dim,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::dims("superoperator difference", self.dim, other.dim));
        }
        Ok(Superoperator {
            dim: self.dim,
            mat: &self.mat - &other.mat,
        })
    }

    pub fn frobenius_norm(&self) -> T {
        self.mat.norm_l2()
    }

    pub fn max_abs(&self) -> T {
        self.mat.norm_max()
    }

    /// `exp(t S)`.
    pub fn expm(&self, t: f64) -> Result<Self> {
        Ok(Superoperator {
            dim: self.dim,
            mat: expm::expm_scaled(self.mat.as_ref(), t)?,
        })
    }

    /// Choi matrix `sum_ij E_ij (x) S(E_ij)`, index `(i*d + k, j*d + l)`.
    pub fn choi(&self) -> Operator<T> {
        let d = self.dim;
        Operator::from_fn(d * d, |row, col| {
            let (i, k) = (row / d, row % d);
            let (j, l) = (col / d, col % d);
            self.mat[(k + l * d, i + j * d)]
        })
    }

    /// Inverse of [`choi`](Self::choi).
    pub fn from_choi(dim: usize, choi: &Operator<T>) -> Result<Self> {
        if choi.dim() != dim * dim {
            return Err(Error::dims("Choi matrix side", dim * dim, choi.dim()));
        }
        let n = dim * dim;
        Ok(Superoperator {
            dim,
            mat: Mat::from_fn(n, n, |row, col| {
                let (k, l) = (row % dim, row / dim);
                let (i, j) = (col % dim, col / dim);
                choi.get(i * dim + k, j * dim + l)
            }),
        })
    }

    /// Real Hermitian-basis matrix; meaningful for Hermiticity-preserving maps.
    pub fn to_real(&self) -> Mat<T> {
        HermitianBasis::new(self.dim).real_matrix(|r, c| self.mat[(r, c)])
    }

    /// `max_X |tr S(X) - tr X|` over matrix units.
    pub fn trace_preservation_residual(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for col in 0..d * d {
            let tr = (0..d).fold(C::new(T::zero(), T::zero()), |a, i| {
                a + self.mat[(i + i * d, col)]
            });
            let want = if col % d == col / d {
                T::one()
            } else {
                T::zero()
            };
            worst = worst.max((tr - C::new(want, T::zero())).norm());
        }
        worst
    }

    /// `max |S(X)^dagger - S(X^dagger)|` over matrix units.
    pub fn hermiticity_preservation_residual(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for col in 0..d * d {
            let (i, j) = (col % d, col / d);
            let colt = j + i * d;
            for row in 0..d * d {
                let (p, q) = (row % d, row / d);
                let rowt = q + p * d;
                worst = worst.max((self.mat[(row, col)].conj() - self.mat[(rowt, colt)]).norm());
            }
        }
        worst
    }
}
