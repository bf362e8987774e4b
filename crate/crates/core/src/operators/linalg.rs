//! Thin wrappers over faer decompositions with the conventions used here.

use faer::traits::ComplexField;
use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Entry type accepted by the generic dense kernels (real or complex).
pub trait Field: ComplexField + Copy + Send + Sync + 'static {
    fn modulus(self) -> f64;
    fn from_real(x: f64) -> Self;
    fn finite(self) -> bool;
}

macro_rules! real_field {
    ($($t:ty),*) => {$(
        impl Field for $t {
            fn modulus(self) -> f64 { (self as f64).abs() }
            fn from_real(x: f64) -> Self { x as $t }
            fn finite(self) -> bool { self.is_finite() }
        }
    )*};
}
real_field!(f32, f64);

impl<T: Real> Field for C<T> {
    fn modulus(self) -> f64 {
        self.norm().as_f64()
    }
    fn from_real(x: f64) -> Self {
        C::new(T::of(x), T::zero())
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    /// Ascending.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors as columns, aligned with `values`.
    pub vectors: Mat<C<T>>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        (0..self.vectors.nrows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }

    pub fn max_abs_value(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

fn check_finite<E: Field>(a: MatRef<'_, E>, what: &str) -> Result<()> {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if !a[(i, j)].finite() {
                return Err(Error::NonFinite(what.to_string()));
            }
        }
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix (only the lower triangle is read).
pub fn eigh<T: Real>(a: MatRef<'_, C<T>>) -> Result<HermitianEigen<T>> {
    check_finite(a, "Hermitian eigendecomposition input")?;
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Linalg(format!("Hermitian eigendecomposition failed: {e:?}")))?;
    let n = a.nrows();
    let s = evd.S();
    let values: Vec<T> = (0..n).map(|k| s[k].re).collect();
    let vectors = evd.U().to_owned();
    Ok(HermitianEigen { values, vectors })
}

/// Eigendecomposition of a real symmetric matrix, ascending.
pub fn eigh_real<T: Real>(a: MatRef<'_, T>) -> Result<(Vec<T>, Mat<T>)> {
    check_finite(a, "symmetric eigendecomposition input")?;
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Linalg(format!("symmetric eigendecomposition failed: {e:?}")))?;
    let s = evd.S();
    Ok(((0..a.nrows()).map(|k| s[k]).collect(), evd.U().to_owned()))
}

pub fn singular_values<T: Real>(a: MatRef<'_, C<T>>) -> Result<Vec<T>> {
    check_finite(a, "singular value input")?;
    a.singular_values()
        .map_err(|e| Error::Linalg(format!("singular values failed: {e:?}")))
}

/// Eigenvalues of a general real matrix.
pub fn eigenvalues_real<T: Real>(a: MatRef<'_, T>) -> Result<Vec<C<T>>> {
    check_finite(a, "eigenvalue input")?;
    a.eigenvalues()
        .map_err(|e| Error::Linalg(format!("eigenvalue computation failed: {e:?}")))
}

/// Eigenvalues of a general complex matrix.
pub fn eigenvalues<T: Real>(a: MatRef<'_, C<T>>) -> Result<Vec<C<T>>> {
    check_finite(a, "eigenvalue input")?;
    a.eigenvalues()
        .map_err(|e| Error::Linalg(format!("eigenvalue computation failed: {e:?}")))
}

/// Orthonormal basis of the right kernel of a real matrix, from a
/// column-pivoted QR of its transpose. Diagonal entries of `R` at or below
/// `abs_tol` count as zero.
pub fn real_kernel<T: Real>(m: MatRef<'_, T>, abs_tol: T) -> Result<Mat<T>> {
    check_finite(m, "kernel input")?;
    let n = m.ncols();
    if m.norm_max() <= abs_tol {
        // faer's pivoted QR yields a non-finite Q for an exactly zero input
        return Ok(Mat::identity(n, n));
    }
    let mt = m.transpose().to_owned();
    let qr = mt.col_piv_qr();
    let r = qr.R();
    let k = r.nrows().min(r.ncols());
    let rank = (0..k).take_while(|&i| r[(i, i)].abs() > abs_tol).count();
    let q = qr.compute_Q();
    check_finite(q.as_ref(), "kernel basis")?;
    Ok(q.subcols(rank, n - rank).to_owned())
}

/// Numerical rank of the same decomposition, without forming `Q`.
pub fn real_rank<T: Real>(m: MatRef<'_, T>, abs_tol: T) -> Result<usize> {
    check_finite(m, "rank input")?;
    if m.norm_max() <= abs_tol {
        return Ok(0);
    }
    let qr = m.col_piv_qr();
    let r = qr.R();
    let k = r.nrows().min(r.ncols());
    Ok((0..k).take_while(|&i| r[(i, i)].abs() > abs_tol).count())
}

/// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix. Eigenvalues at
/// or below `rel_tol * lambda_max` are treated as zero.
pub fn pinv_psd<T: Real>(a: MatRef<'_, C<T>>, rel_tol: f64, tol_psd: f64) -> Result<Mat<C<T>>> {
    let n = a.nrows();
    let evd = eigh(a)?;
    let lmax = evd.max_abs_value();
    let min = evd.values.first().copied().unwrap_or_else(T::zero);
    if min < -T::of(tol_psd) * T::one().max(lmax) {
        return Err(Error::NotPositive {
            what: "pseudo-inverse input".into(),
            min_eigenvalue: min.as_f64(),
        });
    }
    let cut = T::of(rel_tol) * lmax;
    let u = &evd.vectors;
    let mut out = Mat::<C<T>>::zeros(n, n);
    for (k, &l) in evd.values.iter().enumerate() {
        if l > cut && l > T::zero() {
            let w = T::one() / l;
            for j in 0..n {
                let uj = u[(j, k)].conj() * w;
                for i in 0..n {
                    out[(i, j)] = out[(i, j)] + u[(i, k)] * uj;
                }
            }
        }
    }
    Ok(out)
}

/// Canonical orthonormal basis of the column span of `q` (orthonormal
/// columns). Pivoted Gram-Schmidt over the projector columns `q q^dagger e_j`;
/// each output vector has a real positive entry at its pivot row. The result
/// depends only on the span, not on the basis handed in.
pub fn echelon_basis<T: Real>(q: MatRef<'_, C<T>>) -> Mat<C<T>> {
    let (d, k) = (q.nrows(), q.ncols());
    // coordinates of projector column j in the q basis: conj(q[j, :])
    let mut resid: Vec<Vec<C<T>>> = (0..d)
        .map(|j| (0..k).map(|m| q[(j, m)].conj()).collect())
        .collect();
    let mut used = vec![false; d];
    let mut out = Mat::<C<T>>::zeros(d, k);
    let half = T::of(0.5);
    for col in 0..k {
        let norms: Vec<T> = resid
            .iter()
            .map(|r| r.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt())
            .collect();
        let max = (0..d)
            .filter(|&j| !used[j])
            .fold(T::zero(), |m, j| m.max(norms[j]));
        let piv = (0..d)
            .find(|&j| !used[j] && norms[j] >= half * max)
            .expect("nonempty residual set");
        used[piv] = true;
        let nrm = norms[piv];
        let dir: Vec<C<T>> = resid[piv].iter().map(|z| z / nrm).collect();
        for i in 0..d {
            let mut s = C::new(T::zero(), T::zero());
            for m in 0..k {
                s = s + q[(i, m)] * dir[m];
            }
            out[(i, col)] = s;
        }
        for r in resid.iter_mut() {
            let p = r
                .iter()
                .zip(&dir)
                .fold(C::new(T::zero(), T::zero()), |a, (x, y)| a + y.conj() * x);
            for (x, y) in r.iter_mut().zip(&dir) {
                *x = *x - *y * p;
            }
        }
    }
    out
}

/// Make the largest-magnitude entry real positive (first such entry on
/// near-ties, so the choice is stable under rounding).
pub fn fix_phase<T: Real>(v: &mut [C<T>]) {
    let bm = v.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if bm == T::zero() {
        return;
    }
    let tie = bm * (T::one() - T::of(1e-6));
    let best = v.iter().position(|z| z.norm() >= tie).unwrap_or(0);
    let ph = v[best].conj() / v[best].norm();
    for z in v.iter_mut() {
        *z = *z * ph;
    }
}
