use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use faer::{Mat, MatRef, Scale};

use crate::error::{Error, Result};
use crate::scalar::{c, Real, C};

use super::linalg;

/// Dense complex square matrix acting on a Hilbert space of dimension `dim`.
#[derive(Clone)]
pub struct Operator<T: Real> {
    mat: Mat<C<T>>,
}

impl<T: Real> fmt::Debug for Operator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator(dim={})", self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.4e}{:+.4e}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Real> PartialEq for Operator<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|j| (0..self.dim()).all(|i| self.get(i, j) == other.get(i, j)))
    }
}

impl<T: Real> Operator<T> {
    pub fn from_mat(mat: Mat<C<T>>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::dims("operator (square)", mat.nrows(), mat.ncols()));
        }
        if mat.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "operator dimension must be positive".into(),
            ));
        }
        Ok(Operator { mat })
    }

    pub(crate) fn from_mat_unchecked(mat: Mat<C<T>>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Operator { mat }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator {
            mat: Mat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Operator {
            mat: Mat::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C<T>) -> Self {
        Operator {
            mat: Mat::from_fn(dim, dim, f),
        }
    }

    pub fn from_rows(rows: &[Vec<C<T>>]) -> Result<Self> {
        let d = rows.len();
        for r in rows {
            if r.len() != d {
                return Err(Error::dims("operator row length", d, r.len()));
            }
        }
        Operator::from_mat(Mat::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn diagonal(values: &[T]) -> Self {
        let d = values.len();
        Operator::from_fn(d, |i, j| {
            if i == j {
                c(values[i], T::zero())
            } else {
                C::new(T::zero(), T::zero())
            }
        })
    }

    /// `|i><j|` on a space of dimension `dim`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zeros(dim, dim);
        m[(i, j)] = c(T::one(), T::zero());
        Operator { mat: m }
    }

    /// `|ket><bra|`.
    pub fn outer(ket: &[C<T>], bra: &[C<T>]) -> Result<Self> {
        if ket.len() != bra.len() {
            return Err(Error::dims("outer product", ket.len(), bra.len()));
        }
        Ok(Operator::from_fn(ket.len(), |i, j| ket[i] * bra[j].conj()))
    }

    pub fn projector(ket: &[C<T>]) -> Self {
        Operator::from_fn(ket.len(), |i, j| ket[i] * ket[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.mat[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C<T>) {
        self.mat[(i, j)] = z;
    }

    pub fn mat(&self) -> MatRef<'_, C<T>> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<C<T>> {
        self.mat
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.dim()).map(|i| self.get(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<C<T>>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn dagger(&self) -> Self {
        Operator {
            mat: self.mat.adjoint().to_owned(),
        }
    }

    pub fn transpose(&self) -> Self {
        Operator {
            mat: self.mat.transpose().to_owned(),
        }
    }

    pub fn conj(&self) -> Self {
        Operator {
            mat: self.mat.conjugate().to_owned(),
        }
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim()).fold(C::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    pub fn scale(&self, z: C<T>) -> Self {
        Operator {
            mat: Scale(z) * &self.mat,
        }
    }

    pub fn scale_re(&self, x: T) -> Self {
        self.scale(c(x, T::zero()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.mat.norm_l2()
    }

    pub fn max_abs(&self) -> T {
        self.mat.norm_max()
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim()).all(|j| {
            (0..self.dim()).all(|i| {
                let z = self.get(i, j);
                z.re.is_finite() && z.im.is_finite()
            })
        })
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> Result<T> {
        Ok(linalg::singular_values(self.mat.as_ref())?
            .into_iter()
            .fold(T::zero(), |a, s| a + s))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self - other).max_abs()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// `A (x) B` with `A` the leading (slow) index block.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim(), other.dim());
        Operator::from_fn(da * db, |i, j| {
            self.get(i / db, j / db) * other.get(i % db, j % db)
        })
    }

    /// `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::of(0.5);
        Operator::from_fn(self.dim(), |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * half
        })
    }

    /// `max |A - A^dagger|`.
    pub fn hermiticity_deviation(&self) -> T {
        let d = self.dim();
        let mut m = T::zero();
        for j in 0..d {
            for i in 0..=j {
                m = m.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        m
    }

    /// Hermitian within `tol * max(1, ||A||_F)`.
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol * T::one().max(self.frobenius_norm())
    }

    pub fn require_hermitian(&self, what: &str, tol: f64) -> Result<()> {
        if self.is_hermitian(T::of(tol)) {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                what: what.to_string(),
                deviation: self.hermiticity_deviation().as_f64(),
            })
        }
    }

    /// Eigendecomposition of the Hermitian part, eigenvalues ascending.
    pub fn eigh(&self) -> Result<linalg::HermitianEigen<T>> {
        linalg::eigh(self.hermitian_part().mat.as_ref())
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(self.eigh()?.values.first().copied().unwrap_or_else(T::zero))
    }

    /// Column-stacking vectorization: `vec[i + j*d] = A[i, j]`.
    pub fn vec(&self) -> Vec<C<T>> {
        let d = self.dim();
        let mut v = Vec::with_capacity(d * d);
        for j in 0..d {
            for i in 0..d {
                v.push(self.get(i, j));
            }
        }
        v
    }

    pub fn unvec(v: &[C<T>]) -> Result<Self> {
        let d = (v.len() as f64).sqrt().round() as usize;
        if d * d != v.len() || d == 0 {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} is not a vectorized square matrix",
                v.len()
            )));
        }
        Ok(Operator::from_fn(d, |i, j| v[i + j * d]))
    }

    /// Trace out factor `which` of a tensor product with factor dimensions `dims`.
    pub fn partial_trace(&self, dims: &[usize], which: usize) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != self.dim() {
            return Err(Error::dims("partial trace", total, self.dim()));
        }
        if which >= dims.len() {
            return Err(Error::InvalidArgument(format!(
                "factor index {which} out of range for {} factors",
                dims.len()
            )));
        }
        let inner: usize = dims[which + 1..].iter().product();
        let dw = dims[which];
        let outer: usize = dims[..which].iter().product();
        let out_dim = outer * inner;
        let idx = |o: usize, w: usize, n: usize| (o * dw + w) * inner + n;
        Ok(Operator::from_fn(out_dim, |r, s| {
            let (ro, rn) = (r / inner, r % inner);
            let (so, sn) = (s / inner, s % inner);
            (0..dw).fold(C::new(T::zero(), T::zero()), |acc, w| {
                acc + self.get(idx(ro, w, rn), idx(so, w, sn))
            })
        }))
    }

    /// Hilbert-Schmidt inner product `tr(A^dagger B)`.
    pub fn inner(&self, other: &Self) -> C<T> {
        let d = self.dim();
        let mut s = C::new(T::zero(), T::zero());
        for j in 0..d {
            for i in 0..d {
                s = s + self.get(i, j).conj() * other.get(i, j);
            }
        }
        s
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C<T> {
        let d = self.dim();
        let mut s = C::new(T::zero(), T::zero());
        for j in 0..d {
            for i in 0..d {
                s = s + self.get(i, j) * other.get(j, i);
            }
        }
        s
    }

    pub fn cast<U: Real>(&self) -> Operator<U> {
        Operator::from_fn(self.dim(), |i, j| {
            crate::scalar::cast_complex(self.get(i, j))
        })
    }

    pub fn check_same_dim(&self, other: &Self, context: &str) -> Result<()> {
        if self.dim() != other.dim() {
            Err(Error::dims(context, self.dim(), other.dim()))
        } else {
            Ok(())
        }
    }
}

impl<'a, T: Real> Add<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: &'a Operator<T>) -> Operator<T> {
        Operator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl<'a, T: Real> Sub<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: &'a Operator<T>) -> Operator<T> {
        Operator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl<'a, T: Real> Mul<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: &'a Operator<T>) -> Operator<T> {
        Operator {
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl<T: Real> Neg for &Operator<T> {
    type Output = Operator<T>;
    fn neg(self) -> Operator<T> {
        Operator { mat: -&self.mat }
    }
}

impl<T: Real> Add for Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: Operator<T>) -> Operator<T> {
        &self + &rhs
    }
}

impl<T: Real> Sub for Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: Operator<T>) -> Operator<T> {
        &self - &rhs
    }
}

impl<T: Real> Mul for Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: Operator<T>) -> Operator<T> {
        &self * &rhs
    }
}
