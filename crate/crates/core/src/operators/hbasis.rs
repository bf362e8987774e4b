//! Real coordinates for Hermitian operators.
//!
//! Orthonormal (Hilbert-Schmidt) basis: `E_ii`, `(E_ij + E_ji)/sqrt2` and
//! `i(E_ij - E_ji)/sqrt2` for `i < j`. Hermiticity-preserving superoperators
//! become real `d^2 x d^2` matrices in this basis and their Hilbert-Schmidt
//! adjoint is the plain transpose, so spectral work runs in real arithmetic.

use faer::Mat;

use super::Operator;
use crate::scalar::{Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Diag,
    Sym,
    Anti,
}

#[derive(Clone, Debug)]
pub struct HermitianBasis {
    dim: usize,
    table: Vec<(usize, usize, Kind)>,
}

impl HermitianBasis {
    pub fn new(dim: usize) -> Self {
        let mut table: Vec<_> = (0..dim).map(|i| (i, i, Kind::Diag)).collect();
        for i in 0..dim {
            for j in i + 1..dim {
                table.push((i, j, Kind::Sym));
                table.push((i, j, Kind::Anti));
            }
        }
        HermitianBasis { dim, table }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn label(&self, a: usize) -> (usize, usize, Kind) {
        self.table[a]
    }

    /// Nonzero entries of basis element `a` in column-stacked vec space, as
    /// `(index, re, im)`.
    pub fn entries(&self, a: usize) -> ([(usize, f64, f64); 2], usize) {
        let d = self.dim;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self.table[a] {
            (i, _, Kind::Diag) => ([(i + i * d, 1.0, 0.0), (0, 0.0, 0.0)], 1),
            (i, j, Kind::Sym) => ([(i + j * d, s, 0.0), (j + i * d, s, 0.0)], 2),
            (i, j, Kind::Anti) => ([(i + j * d, 0.0, s), (j + i * d, 0.0, -s)], 2),
        }
    }

    pub fn element<T: Real>(&self, a: usize) -> Operator<T> {
        let d = self.dim;
        let mut op = Operator::zeros(d);
        let (e, n) = self.entries(a);
        for &(v, re, im) in &e[..n] {
            op.set(v % d, v / d, C::new(T::of(re), T::of(im)));
        }
        op
    }

    /// `tr(B_a X)` for every `a`; the anti-Hermitian part of `x` is ignored.
    pub fn coords<T: Real>(&self, x: &Operator<T>) -> Vec<T> {
        let r2 = T::SQRT_2();
        self.table
            .iter()
            .map(|&(i, j, k)| match k {
                Kind::Diag => x.get(i, i).re,
                Kind::Sym => (x.get(i, j).re + x.get(j, i).re) * r2 * T::of(0.5),
                Kind::Anti => (x.get(i, j).im - x.get(j, i).im) * r2 * T::of(0.5),
            })
            .collect()
    }

    pub fn from_coords<T: Real>(&self, v: &[T]) -> Operator<T> {
        let d = self.dim;
        let h = T::FRAC_1_SQRT_2();
        let mut op = Operator::zeros(d);
        for (a, &(i, j, k)) in self.table.iter().enumerate() {
            let x = v[a];
            match k {
                Kind::Diag => op.set(i, i, C::new(x, T::zero())),
                Kind::Sym => {
                    let z = op.get(i, j) + C::new(x * h, T::zero());
                    op.set(i, j, z);
                    op.set(j, i, z.conj());
                }
                Kind::Anti => {
                    let z = op.get(i, j) + C::new(T::zero(), x * h);
                    op.set(i, j, z);
                    op.set(j, i, z.conj());
                }
            }
        }
        op
    }

    /// Real matrix `M[a, b] = tr(B_a S(B_b))` of a Hermiticity-preserving map
    /// given by its column-stacked complex matrix entries.
    pub fn real_matrix<T: Real>(&self, entry: impl Fn(usize, usize) -> C<T>) -> Mat<T> {
        let n = self.len();
        let ent: Vec<_> = (0..n).map(|a| self.entries(a)).collect();
        Mat::from_fn(n, n, |a, b| {
            let (ea, na) = &ent[a];
            let (eb, nb) = &ent[b];
            let mut acc = T::zero();
            for &(v, ur, ui) in &ea[..*na] {
                let u = C::new(T::of(ur), -T::of(ui));
                for &(w, sr, si) in &eb[..*nb] {
                    let z = u * entry(v, w) * C::new(T::of(sr), T::of(si));
                    acc = acc + z.re;
                }
            }
            acc
        })
    }

    /// Inverse of [`real_matrix`](Self::real_matrix): column-stacked complex
    /// matrix of the map with real-basis matrix `m`.
    pub fn complex_matrix<T: Real>(&self, m: &Mat<T>) -> Mat<C<T>> {
        let n = self.len();
        // Lc = U M U^dagger with U[:, a] = vec(B_a); U has <= 2 entries per column
        // so accumulate directly.
        let mut out = Mat::<C<T>>::zeros(n, n);
        let ent: Vec<_> = (0..n).map(|a| self.entries(a)).collect();
        for a in 0..n {
            let (ea, na) = &ent[a];
            for b in 0..n {
                let x = m[(a, b)];
                if x == T::zero() {
                    continue;
                }
                let (eb, nb) = &ent[b];
                for &(v, ur, ui) in &ea[..*na] {
                    let u = C::new(T::of(ur), T::of(ui)) * x;
                    for &(w, sr, si) in &eb[..*nb] {
                        out[(v, w)] = out[(v, w)] + u * C::new(T::of(sr), -T::of(si));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cf;

    #[test]
    fn basis_is_orthonormal_and_hermitian() {
        let hb = HermitianBasis::new(3);
        assert_eq!(hb.len(), 9);
        for a in 0..9 {
            let ba = hb.element::<f64>(a);
            assert!(ba.is_hermitian(1e-15));
            for b in 0..9 {
                let ip = ba.inner(&hb.element(b));
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - cf(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn coords_round_trip() {
        let hb = HermitianBasis::new(3);
        let x = Operator::<f64>::from_fn(3, |i, j| cf((i * 3 + j) as f64, i as f64 - j as f64))
            .hermitian_part();
        let v = hb.coords(&x);
        assert!(hb.from_coords(&v).max_abs_diff(&x) < 1e-14);
        // coords are HS inner products
        for (a, &va) in v.iter().enumerate() {
            assert!((hb.element::<f64>(a).inner(&x).re - va).abs() < 1e-13);
        }
    }
}
