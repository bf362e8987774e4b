//! Seeded random operators and models for property tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::operators::{DensityMatrix, LindbladGenerator, Operator};
use crate::scalar::{Real, C};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss<T: Real, R: Rng>(r: &mut R) -> C<T> {
    let a: f64 = r.sample(StandardNormal);
    let b: f64 = r.sample(StandardNormal);
    C::new(T::of(a), T::of(b))
}

/// Complex Ginibre matrix, entries of unit variance per component.
pub fn ginibre<T: Real, R: Rng>(r: &mut R, dim: usize) -> Operator<T> {
    Operator::from_fn(dim, |_, _| gauss(r))
}

pub fn hermitian<T: Real, R: Rng>(r: &mut R, dim: usize) -> Operator<T> {
    ginibre::<T, R>(r, dim).hermitian_part()
}

/// Haar-ish unitary by Gram-Schmidt on a Ginibre matrix.
pub fn unitary<T: Real, R: Rng>(r: &mut R, dim: usize) -> Operator<T> {
    let g = ginibre::<T, R>(r, dim);
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for q in &cols {
            let p = q
                .iter()
                .zip(&v)
                .fold(C::new(T::zero(), T::zero()), |a, (x, y)| a + x.conj() * y);
            for (x, y) in v.iter_mut().zip(q) {
                *x = *x - *y * p;
            }
        }
        let n = v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    Operator::from_fn(dim, |i, j| cols[j][i])
}

/// Full-rank random density matrix `G G^dagger / tr`.
pub fn density<T: Real, R: Rng>(r: &mut R, dim: usize) -> DensityMatrix<T> {
    let g = ginibre::<T, R>(r, dim);
    let p = &g * &g.dagger();
    let tr = p.trace().re;
    DensityMatrix::from_op_unchecked(p.scale_re(T::one() / tr))
}

pub fn generator<T: Real, R: Rng>(r: &mut R, dim: usize, n_jumps: usize) -> LindbladGenerator<T> {
    let h = hermitian::<T, R>(r, dim);
    let jumps = (0..n_jumps)
        .map(|_| ginibre::<T, R>(r, dim).scale_re(T::of(0.5)))
        .collect();
    LindbladGenerator::from_parts(h, jumps)
}

/// Random fast/slow pair in the class the reduction handles: a single fast
/// jump `L0 = U N U^dagger` with `N` strictly upper triangular and its first
/// `slow_dim` columns zero, so `span(U e_0..U e_{s-1})` is decoherence-free;
/// no fast Hamiltonian; a random slow Hamiltonian.
///
/// With the strictly upper-triangular structure every state eventually
/// drains into the first block, which the certification verifies; callers
/// resample on the rare failures.
pub fn qualifying_model<T: Real, R: Rng>(
    r: &mut R,
    dim: usize,
    slow_dim: usize,
) -> (LindbladGenerator<T>, LindbladGenerator<T>) {
    assert!(slow_dim >= 1 && slow_dim < dim);
    let n = Operator::from_fn(dim, |i, j| {
        if j >= slow_dim && i < j {
            gauss::<T, R>(r)
        } else {
            C::new(T::zero(), T::zero())
        }
    });
    // Boost the first superdiagonal into each fast level so no level is
    // left undrained by an unlucky small sample.
    let mut n = n;
    for j in slow_dim..dim {
        let z = n.get(j - 1, j);
        let m = z.norm().max(T::of(1e-12));
        n.set(j - 1, j, z * ((m + T::one()) / m));
    }
    let u = unitary::<T, R>(r, dim);
    let l0 = &(&u * &n) * &u.dagger();
    let fast = LindbladGenerator::from_parts(Operator::zeros(dim), vec![l0]);
    let slow = LindbladGenerator::from_parts(hermitian::<T, R>(r, dim), Vec::new());
    (fast, slow)
}
