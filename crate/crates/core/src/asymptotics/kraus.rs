use faer::Mat;

use super::dfs::DfsData;
use super::projector::SteadyProjector;
use crate::error::{AssumptionCheck, Error, Result};
use crate::operators::{linalg, Operator, Superoperator};
use crate::scalar::{Real, C};
use crate::tolerances::Tolerances;

#[derive(Clone, Debug)]
pub struct KrausMap<T: Real> {
    pub operators: Vec<Operator<T>>,
    /// `||sum M^dagger M - I||_F`.
    pub completeness_residual: T,
    /// Choi eigenvalues kept, descending (`||M_k||_F^2`).
    pub weights: Vec<T>,
}

impl<T: Real> KrausMap<T> {
    pub fn new(operators: Vec<Operator<T>>) -> Result<Self> {
        let d = operators
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus family".into()))?
            .dim();
        for m in &operators {
            m.check_same_dim(&operators[0], "Kraus operator")?;
        }
        let weights = operators
            .iter()
            .map(|m| m.frobenius_norm().powi(2))
            .collect();
        let completeness_residual = completeness(&operators, d);
        Ok(KrausMap {
            operators,
            completeness_residual,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn apply(&self, rho: &Operator<T>) -> Result<Operator<T>> {
        let mut out = Operator::zeros(rho.dim());
        for m in &self.operators {
            m.check_same_dim(rho, "Kraus map argument")?;
            out = &out + &(&(m * rho) * &m.dagger());
        }
        Ok(out)
    }

    pub fn superoperator(&self) -> Result<Superoperator<T>> {
        Superoperator::from_kraus(&self.operators)
    }

    /// `{sum_nu U[mu, nu] M_nu}` for a unitary `U`.
    pub fn mixed(&self, u: &Operator<T>) -> Result<Self> {
        if u.dim() != self.len() {
            return Err(Error::dims("Kraus mixing unitary", self.len(), u.dim()));
        }
        let d = self.operators[0].dim();
        let ops = (0..self.len())
            .map(|mu| {
                self.operators
                    .iter()
                    .enumerate()
                    .fold(Operator::zeros(d), |acc, (nu, m)| {
                        &acc + &m.scale(u.get(mu, nu))
                    })
            })
            .collect();
        KrausMap::new(ops)
    }
}

fn completeness<T: Real>(ops: &[Operator<T>], d: usize) -> T {
    let mut s = Operator::zeros(d);
    for m in ops {
        s = &s + &(&m.dagger() * m);
    }
    (&s - &Operator::identity(d)).frobenius_norm()
}

/// Kraus vectors from a Hermitian PSD Choi-type matrix: descending weights,
/// near-degenerate clusters put in canonical form.
fn kraus_vectors<T: Real>(choi: &Operator<T>, tol: &Tolerances) -> Result<Vec<(T, Vec<C<T>>)>> {
    let e = choi.eigh()?;
    let n = choi.dim();
    let lmax = e
        .values
        .last()
        .copied()
        .unwrap_or_else(T::zero)
        .max(T::zero());
    let lmin = e.values.first().copied().unwrap_or_else(T::zero);
    if lmin < -T::of(tol.tol_psd) * T::one().max(lmax) {
        return Err(Error::assumption(
            AssumptionCheck::NotCompletelyPositive,
            format!("Choi matrix has eigenvalue {lmin:.3e} (largest {lmax:.3e})"),
        ));
    }
    let cut = T::of(tol.tol_cut) * lmax;
    let kept: Vec<usize> = (0..n).rev().filter(|&k| e.values[k] > cut).collect();
    let mut out = Vec::with_capacity(kept.len());
    let mut start = 0;
    while start < kept.len() {
        let l0 = e.values[kept[start]];
        let mut end = start + 1;
        while end < kept.len() && (l0 - e.values[kept[end]]) <= T::of(tol.tol_degenerate) * lmax {
            end += 1;
        }
        let idx = &kept[start..end];
        if idx.len() == 1 {
            let k = idx[0];
            let s = e.values[k].sqrt();
            out.push((e.values[k], (0..n).map(|i| e.vectors[(i, k)] * s).collect()));
        } else {
            // w_k = V diag(sqrt(lambda)) V^dagger e'_k reproduces sum w w^dagger exactly
            let v = Mat::from_fn(n, idx.len(), |i, c| e.vectors[(i, idx[c])]);
            let canon = linalg::echelon_basis(v.as_ref());
            let coef = v.adjoint() * &canon;
            for k in 0..idx.len() {
                let w: Vec<C<T>> = (0..n)
                    .map(|i| {
                        (0..idx.len()).fold(C::new(T::zero(), T::zero()), |a, c| {
                            a + v[(i, c)] * e.values[idx[c]].sqrt() * coef[(c, k)]
                        })
                    })
                    .collect();
                let wt = w.iter().fold(T::zero(), |a, z| a + z.norm_sqr());
                out.push((wt, w));
            }
        }
        start = end;
    }
    Ok(out)
}

/// Kraus decomposition of a map given as a superoperator (Choi route).
pub fn kraus_from_choi<T: Real>(r: &Superoperator<T>, tol: &Tolerances) -> Result<KrausMap<T>> {
    let choi = r.choi().hermitian_part();
    let vecs = kraus_vectors(&choi, tol)?;
    let mut ops = Vec::with_capacity(vecs.len());
    let mut weights = Vec::with_capacity(vecs.len());
    for (wt, w) in vecs {
        // Choi index i*d + k carries M[k, i], which is also its vec index
        let mut m = w;
        linalg::fix_phase(&mut m);
        ops.push(Operator::unvec(&m)?);
        weights.push(wt);
    }
    let mut map = KrausMap::new(ops)?;
    map.weights = weights;
    Ok(map)
}

/// Kraus decomposition of `R`, using that its range lives on `H0`: the
/// compressed Choi matrix `sum_ij E_ij (x) S0^dagger R(E_ij) S0` has side
/// `dim * slow_dim` and each eigenvector gives `M = S0 m`.
pub fn kraus_on_dfs<T: Real>(
    r: &SteadyProjector<T>,
    dfs: &DfsData<T>,
    tol: &Tolerances,
) -> Result<KrausMap<T>> {
    let d = r.dim();
    let s = dfs.slow_dim;
    let mut choi = Operator::zeros(d * s);
    for i in 0..d {
        for j in 0..d {
            let block = dfs.s0.compress(&r.apply(&Operator::unit(d, i, j))?);
            for k in 0..s {
                for l in 0..s {
                    choi.set(i * s + k, j * s + l, block.get(k, l));
                }
            }
        }
    }
    let vecs = kraus_vectors(&choi.hermitian_part(), tol)?;
    let mut ops = Vec::with_capacity(vecs.len());
    let mut weights = Vec::with_capacity(vecs.len());
    for (wt, w) in vecs {
        // m[k, i] = w[i*s + k];  M = S0 m
        let m = Mat::from_fn(s, d, |k, i| w[i * s + k]);
        let big = dfs.s0.mat() * &m;
        let mut v = Operator::from_mat_unchecked(big).vec();
        linalg::fix_phase(&mut v);
        ops.push(Operator::unvec(&v)?);
        weights.push(wt);
    }
    let mut map = KrausMap::new(ops)?;
    map.weights = weights;
    Ok(map)
}

/// `lambda_mu = tr(S0^dagger M_mu S0) / slow_dim` and the largest
/// `||M_mu S0 - lambda_mu S0||_F`.
pub fn kraus_eigenvalues<T: Real>(
    k: &KrausMap<T>,
    dfs: &DfsData<T>,
    tol: &Tolerances,
) -> Result<(Vec<C<T>>, T)> {
    let s = T::of(dfs.slow_dim as f64);
    let mut lambda = Vec::with_capacity(k.len());
    let mut worst = T::zero();
    for m in &k.operators {
        let l = dfs.s0.compress(m).trace() / s;
        let ms = dfs.s0.right_apply(m);
        let diff = &ms - faer::Scale(l) * dfs.s0.mat();
        worst = worst.max(diff.norm_l2());
        lambda.push(l);
    }
    if worst > T::of(tol.tol_kraus_scalar) {
        return Err(Error::assumption(
            AssumptionCheck::KrausNotScalarOnDfs,
            format!("Kraus operators do not act as scalars on H0 (residual {worst:.3e})"),
        ));
    }
    Ok((lambda, worst))
}
