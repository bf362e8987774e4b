//! Matrix exponential by scaling and squaring with Pade approximants
//! (Higham 2005 degree selection).

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef, Scale};

use super::linalg::Field;
use crate::error::{Error, Result};

const THETA: [f64; 5] = [
    1.495585217958292e-2,
    2.539398330063230e-1,
    9.504178996162932e-1,
    2.097847961257068,
    5.371920351148152,
];

const B3: [f64; 4] = [120., 60., 12., 1.];
const B5: [f64; 6] = [30240., 15120., 3360., 420., 30., 1.];
const B7: [f64; 8] = [
    17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.,
];
const B9: [f64; 10] = [
    17643225600.,
    8821612800.,
    2075673600.,
    302702400.,
    30270240.,
    2162160.,
    110880.,
    3960.,
    90.,
    1.,
];
const B13: [f64; 14] = [
    64764752532480000.,
    32382376266240000.,
    7771770303897600.,
    1187353796428800.,
    129060195264000.,
    10559470521600.,
    670442572800.,
    33522128640.,
    1323241920.,
    40840800.,
    960960.,
    16380.,
    182.,
    1.,
];

pub fn one_norm<E: Field>(a: MatRef<'_, E>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn is_finite<E: Field>(a: MatRef<'_, E>) -> bool {
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)].finite()))
}

fn axpy_identity<E: Field>(m: &mut Mat<E>, s: f64) {
    let s = E::from_real(s);
    for i in 0..m.nrows() {
        m[(i, i)] = m[(i, i)] + s;
    }
}

fn scaled<E: Field>(a: &Mat<E>, s: f64) -> Mat<E> {
    Scale(E::from_real(s)) * a
}

/// Odd/even parts `(U, V)` of the low-degree approximants.
fn pade_low<E: Field>(a: MatRef<'_, E>, b: &[f64]) -> (Mat<E>, Mat<E>) {
    let n = a.nrows();
    let a2 = a * a;
    let mut pows = vec![Mat::<E>::identity(n, n), a2.clone()];
    while pows.len() * 2 < b.len() {
        let next = pows.last().unwrap() * &a2;
        pows.push(next);
    }
    let mut u_inner = Mat::<E>::zeros(n, n);
    let mut v = Mat::<E>::zeros(n, n);
    for (k, p) in pows.iter().enumerate() {
        u_inner = &u_inner + scaled(p, b[2 * k + 1]);
        v = &v + scaled(p, b[2 * k]);
    }
    (a * &u_inner, v)
}

fn pade13<E: Field>(a: MatRef<'_, E>) -> (Mat<E>, Mat<E>) {
    let b = &B13;
    let n = a.nrows();
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let mut inner = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    inner = &a6 * &inner;
    inner = inner + scaled(&a6, b[7]) + scaled(&a4, b[5]) + scaled(&a2, b[3]);
    axpy_identity(&mut inner, b[1]);
    let u = a * &inner;
    let mut v = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    v = &a6 * &v;
    v = v + scaled(&a6, b[6]) + scaled(&a4, b[4]) + scaled(&a2, b[2]);
    axpy_identity(&mut v, b[0]);
    let _ = n;
    (u, v)
}

/// `exp(t * a)`. Returns the identity exactly when `t == 0`.
pub fn expm_scaled<E: Field>(a: MatRef<'_, E>, t: f64) -> Result<Mat<E>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::dims("matrix exponential (square)", n, a.ncols()));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "exponential time must be finite and >= 0, got {t}"
        )));
    }
    if !is_finite(a) {
        return Err(Error::NonFinite("matrix exponential input".into()));
    }
    if t == 0.0 || n == 0 {
        return Ok(Mat::identity(n, n));
    }
    let at: Mat<E> = Scale(E::from_real(t)) * a;
    let norm = one_norm(at.as_ref());

    let (u, v, squarings) = if norm < THETA[0] {
        let (u, v) = pade_low(at.as_ref(), &B3);
        (u, v, 0)
    } else if norm < THETA[1] {
        let (u, v) = pade_low(at.as_ref(), &B5);
        (u, v, 0)
    } else if norm < THETA[2] {
        let (u, v) = pade_low(at.as_ref(), &B7);
        (u, v, 0)
    } else if norm < THETA[3] {
        let (u, v) = pade_low(at.as_ref(), &B9);
        (u, v, 0)
    } else {
        let s = (norm / THETA[4]).log2().ceil().max(0.0) as i32;
        let a_s = scaled(&at, 2f64.powi(-s));
        let (u, v) = pade13(a_s.as_ref());
        (u, v, s)
    };

    let num = &v + &u;
    let den = &v - &u;
    let mut r = den.partial_piv_lu().solve(&num);
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !is_finite(r.as_ref()) {
        return Err(Error::NonFinite("matrix exponential result".into()));
    }
    Ok(r)
}

pub fn expm<E: Field>(a: MatRef<'_, E>) -> Result<Mat<E>> {
    expm_scaled(a, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C;

    #[test]
    fn zero_time_is_identity() {
        let a = Mat::<f64>::from_fn(3, 3, |i, j| (i + 2 * j) as f64);
        let e = expm_scaled(a.as_ref(), 0.0).unwrap();
        assert_eq!(e, Mat::<f64>::identity(3, 3));
    }

    #[test]
    fn diagonal_and_rotation() {
        for &x in &[1e-3, 0.1, 0.5, 1.5, 4.0, 30.0] {
            let d = Mat::<f64>::from_fn(2, 2, |i, j| if i == j { -(i as f64 + 1.0) } else { 0.0 });
            let e = expm_scaled(d.as_ref(), x).unwrap();
            assert!((e[(0, 0)] - (-x).exp()).abs() <= 1e-14 * (1.0 + (-x).exp()));
            assert!((e[(1, 1)] - (-2.0 * x).exp()).abs() <= 1e-14);

            // exp(x [[0, -1], [1, 0]]) is a rotation by x
            let g = Mat::<f64>::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => -1.0,
                (1, 0) => 1.0,
                _ => 0.0,
            });
            let r = expm_scaled(g.as_ref(), x).unwrap();
            assert!((r[(0, 0)] - x.cos()).abs() < 1e-12);
            assert!((r[(1, 0)] - x.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_phase() {
        let a = Mat::<C<f64>>::from_fn(1, 1, |_, _| C::new(-0.3, 2.0));
        let e = expm(a.as_ref()).unwrap();
        let want = C::new(-0.3, 2.0).exp();
        assert!((e[(0, 0)] - want).norm() < 1e-14);
    }

    #[test]
    fn nilpotent_is_exact_polynomial() {
        // exp(N) = I + N + N^2/2 for a 3x3 shift
        let n = Mat::<f64>::from_fn(3, 3, |i, j| if j == i + 1 { 3.0 } else { 0.0 });
        let e = expm(n.as_ref()).unwrap();
        assert!((e[(0, 1)] - 3.0).abs() < 1e-13);
        assert!((e[(0, 2)] - 4.5).abs() < 1e-13);
        assert!((e[(2, 0)]).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite() {
        let a = Mat::<f64>::from_fn(2, 2, |_, _| f64::NAN);
        assert!(expm(a.as_ref()).is_err());
        let b = Mat::<f64>::zeros(2, 2);
        assert!(expm_scaled(b.as_ref(), -1.0).is_err());
    }
}
