use faer::Mat;

use super::{HermitianBasis, Operator, Superoperator};
use crate::error::{Error, Result};
use crate::scalar::{c, imag_unit, Real, C};
use crate::tolerances::Tolerances;

/// `L(rho) = -i[H, rho] + sum_k (L_k rho L_k^dagger - 1/2 {L_k^dagger L_k, rho})`.
#[derive(Clone, Debug)]
pub struct LindbladGenerator<T: Real> {
    hamiltonian: Operator<T>,
    jumps: Vec<Operator<T>>,
}

impl<T: Real> LindbladGenerator<T> {
    pub fn new(hamiltonian: Operator<T>, jumps: Vec<Operator<T>>) -> Result<Self> {
        Self::with_tolerance(hamiltonian, jumps, Tolerances::default().tol_herm)
    }

    pub fn with_tolerance(
        hamiltonian: Operator<T>,
        jumps: Vec<Operator<T>>,
        tol_herm: f64,
    ) -> Result<Self> {
        let d = hamiltonian.dim();
        for (k, l) in jumps.iter().enumerate() {
            if l.dim() != d {
                return Err(Error::dims(format!("jump operator {k}"), d, l.dim()));
            }
            if !l.is_finite() {
                return Err(Error::NonFinite(format!("jump operator {k}")));
            }
        }
        if !hamiltonian.is_finite() {
            return Err(Error::NonFinite("hamiltonian".into()));
        }
        hamiltonian.require_hermitian("hamiltonian", tol_herm)?;
        Ok(LindbladGenerator { hamiltonian, jumps })
    }

    pub fn zero(dim: usize) -> Self {
        LindbladGenerator {
            hamiltonian: Operator::zeros(dim),
            jumps: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &Operator<T> {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[Operator<T>] {
        &self.jumps
    }

    /// `sum_k L_k^dagger L_k`.
    pub fn jump_weight(&self) -> Operator<T> {
        let mut k = Operator::zeros(self.dim());
        for l in &self.jumps {
            k = &k + &(&l.dagger() * l);
        }
        k
    }

    /// Effective non-Hermitian part `G = -iH - 1/2 sum L^dagger L`.
    fn effective(&self) -> Operator<T> {
        let g = self.hamiltonian.scale(-imag_unit::<T>());
        &g - &self.jump_weight().scale_re(T::of(0.5))
    }

    pub fn apply(&self, rho: &Operator<T>) -> Result<Operator<T>> {
        self.hamiltonian.check_same_dim(rho, "generator argument")?;
        let g = self.effective();
        let mut out = &(&g * rho) + &(rho * &g.dagger());
        for l in &self.jumps {
            out = &out + &(&(l * rho) * &l.dagger());
        }
        Ok(out)
    }

    /// Heisenberg-picture adjoint `L*(A) = i[H, A] + sum_k (L_k^dagger A L_k - 1/2 {L_k^dagger L_k, A})`.
    pub fn apply_adjoint(&self, a: &Operator<T>) -> Result<Operator<T>> {
        self.hamiltonian
            .check_same_dim(a, "adjoint generator argument")?;
        if !a.is_hermitian(T::of(Tolerances::default().tol_herm)) {
            log::warn!("adjoint generator applied to a non-Hermitian operator");
        }
        let gd = self.effective().dagger();
        let mut out = &(&gd * a) + &(a * &gd.dagger());
        for l in &self.jumps {
            out = &out + &(&(&l.dagger() * a) * l);
        }
        Ok(out)
    }

    /// Column-stacked Liouvillian entry `[(p,q), (r,s)]` as a closure.
    fn entry_fn(&self) -> impl Fn(usize, usize) -> C<T> + '_ {
        let d = self.dim();
        let g = self.effective();
        move |row, col| {
            let (p, q) = (row % d, row / d);
            let (r, s) = (col % d, col / d);
            let mut z = C::new(T::zero(), T::zero());
            if q == s {
                z = z + g.get(p, r);
            }
            if p == r {
                z = z + g.get(q, s).conj();
            }
            for l in &self.jumps {
                z = z + l.get(p, r) * l.get(q, s).conj();
            }
            z
        }
    }

    pub fn liouvillian(&self) -> Superoperator<T> {
        let d = self.dim();
        let n = d * d;
        let g = self.effective();
        let mut m = Mat::<C<T>>::zeros(n, n);
        // -iH rho - 1/2 K rho  ->  I (x) G ;  rho G^dagger  ->  conj(G) (x) I
        for s in 0..d {
            for r in 0..d {
                for p in 0..d {
                    m[(p + s * d, r + s * d)] = m[(p + s * d, r + s * d)] + g.get(p, r);
                    m[(s + p * d, s + r * d)] = m[(s + p * d, s + r * d)] + g.get(p, r).conj();
                }
            }
        }
        for l in &self.jumps {
            for s in 0..d {
                for q in 0..d {
                    let lc = l.get(q, s).conj();
                    if lc == C::new(T::zero(), T::zero()) {
                        continue;
                    }
                    for r in 0..d {
                        for p in 0..d {
                            m[(p + q * d, r + s * d)] =
                                m[(p + q * d, r + s * d)] + l.get(p, r) * lc;
                        }
                    }
                }
            }
        }
        Superoperator::from_mat_unchecked(d, m)
    }

    /// Liouvillian in the real Hermitian basis.
    pub fn real_liouvillian(&self) -> Mat<T> {
        HermitianBasis::new(self.dim()).real_matrix(self.entry_fn())
    }

    /// `H0 + eps H1` with jumps `L0 ∪ sqrt(eps) L1`.
    pub fn perturbed(&self, slow: &Self, eps: T) -> Result<Self> {
        self.hamiltonian
            .check_same_dim(&slow.hamiltonian, "perturbed generator")?;
        let h = &self.hamiltonian + &slow.hamiltonian.scale_re(eps);
        let se = eps.sqrt();
        let mut jumps = self.jumps.clone();
        jumps.extend(slow.jumps.iter().map(|l| l.scale_re(se)));
        Ok(LindbladGenerator {
            hamiltonian: h,
            jumps,
        })
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.hamiltonian.max_abs() <= tol && self.jumps.iter().all(|l| l.max_abs() <= tol)
    }

    /// Frobenius norm of the Liouvillian matrix, without forming it.
    pub fn liouvillian_norm(&self) -> T {
        let n = self.dim() * self.dim();
        let f = self.entry_fn();
        let mut s = T::zero();
        for col in 0..n {
            for row in 0..n {
                s = s + f(row, col).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn cast<U: Real>(&self) -> LindbladGenerator<U> {
        LindbladGenerator {
            hamiltonian: self.hamiltonian.cast(),
            jumps: self.jumps.iter().map(|l| l.cast()).collect(),
        }
    }

    /// Drop the Hermiticity check; used for generators assembled internally
    /// from already-checked pieces.
    pub(crate) fn from_parts(hamiltonian: Operator<T>, jumps: Vec<Operator<T>>) -> Self {
        LindbladGenerator { hamiltonian, jumps }
    }

    pub fn with_scaled(&self, h_scale: T, jump_scale: T) -> Self {
        LindbladGenerator {
            hamiltonian: self.hamiltonian.scale(c(h_scale, T::zero())),
            jumps: self.jumps.iter().map(|l| l.scale_re(jump_scale)).collect(),
        }
    }
}

/// Superoperator of the dissipator `sum_k D[L_k]` alone.
pub fn dissipator<T: Real>(jumps: &[Operator<T>]) -> Option<Superoperator<T>> {
    let d = jumps.first()?.dim();
    Some(LindbladGenerator::from_parts(Operator::zeros(d), jumps.to_vec()).liouvillian())
}
