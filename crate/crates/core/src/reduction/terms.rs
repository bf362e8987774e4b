use crate::asymptotics::{DfsData, KrausMap};
use crate::error::{Error, Result};
use crate::operators::{linalg, LindbladGenerator, Operator};
use crate::scalar::{imag_unit, Real};
use crate::tolerances::Tolerances;

/// `S0^dagger H1 S0`.
pub fn zeno_hamiltonian<T: Real>(h1: &Operator<T>, dfs: &DfsData<T>) -> Result<Operator<T>> {
    h1.check_same_dim(&dfs.p0, "Zeno Hamiltonian")?;
    Ok(dfs.s0.compress(h1).hermitian_part())
}

/// `A_mu = S0^dagger M_mu L1 S0`, dropping members below
/// `tol_jump_drop * ||L1||_F`.
pub fn first_order_jumps<T: Real>(
    l1: &Operator<T>,
    k: &KrausMap<T>,
    dfs: &DfsData<T>,
    tol: &Tolerances,
) -> Result<Vec<Operator<T>>> {
    l1.check_same_dim(&dfs.p0, "first-order jump")?;
    let cut = T::of(tol.tol_jump_drop) * l1.frobenius_norm();
    let mut out = Vec::new();
    for m in &k.operators {
        let a = dfs.s0.compress(&(m * l1));
        if a.frobenius_norm() > cut {
            out.push(a);
        }
    }
    Ok(out)
}

/// First-order reduced generator on the slow space.
pub fn first_order_generator<T: Real>(
    slow: &LindbladGenerator<T>,
    k: &KrausMap<T>,
    dfs: &DfsData<T>,
    tol: &Tolerances,
) -> Result<LindbladGenerator<T>> {
    let h = zeno_hamiltonian(slow.hamiltonian(), dfs)?;
    let mut jumps = Vec::new();
    for l in slow.jumps() {
        jumps.extend(first_order_jumps(l, k, dfs, tol)?);
    }
    Ok(LindbladGenerator::from_parts(h, jumps))
}

/// Why second order is unavailable, if it is.
pub fn order2_obstruction<T: Real>(
    fast: &LindbladGenerator<T>,
    slow: &LindbladGenerator<T>,
    dfs: &DfsData<T>,
    tol: &Tolerances,
) -> Option<String> {
    if fast.jumps().len() != 1 {
        return Some(format!(
            "second order needs exactly one fast jump operator, found {}",
            fast.jumps().len()
        ));
    }
    let l0 = &fast.jumps()[0];
    let scale = T::one().max(l0.frobenius_norm().powi(2));
    let h0 = fast.hamiltonian().frobenius_norm();
    if h0 > T::of(tol.tol_herm) * scale {
        return Some(format!(
            "second order needs a zero fast Hamiltonian, found norm {h0:.3e}"
        ));
    }
    if !slow.jumps().is_empty() {
        return Some(format!(
            "second order needs a Hamiltonian-only perturbation, found {} slow jump operator(s)",
            slow.jumps().len()
        ));
    }
    let ls = dfs.s0.right_apply(l0).norm_l2();
    if ls > T::of(tol.tol_dfs) * T::one().max(l0.frobenius_norm()) {
        return Some(format!("second order needs L0 S0 = 0, found norm {ls:.3e}"));
    }
    None
}

/// `(L0^dagger L0)^+`.
pub fn pinv_weight<T: Real>(l0: &Operator<T>, tol: &Tolerances) -> Result<Operator<T>> {
    let k = &l0.dagger() * l0;
    let m = linalg::pinv_psd(k.hermitian_part().mat(), tol.rel_tol_pinv, tol.tol_psd)?;
    Ok(Operator::from_mat_unchecked(m))
}

/// [`pinv_weight`] restricted to the complement of the decoherence-free
/// subspace, `(1 - P0) X (1 - P0)`. Equal to `X` when `L0 S0 = 0`; the
/// projection removes eigenvector roundoff that `1 / lambda_min` would
/// otherwise amplify into `P0 X`.
pub fn fast_pinv_weight<T: Real>(
    l0: &Operator<T>,
    dfs: &DfsData<T>,
    tol: &Tolerances,
) -> Result<Operator<T>> {
    let x = pinv_weight(l0, tol)?;
    let q = &Operator::identity(l0.dim()) - &dfs.p0;
    Ok((&(&q * &x) * &q).hermitian_part())
}

/// `C1 = 2 X H1 P0 + 2 P0 H1 X` with `X = (L0^dagger L0)^+`.
pub fn c1_operator<T: Real>(
    l0: &Operator<T>,
    h1: &Operator<T>,
    dfs: &DfsData<T>,
    tol: &Tolerances,
) -> Result<Operator<T>> {
    l0.check_same_dim(h1, "C1")?;
    let ls = dfs.s0.right_apply(l0).norm_l2();
    if ls > T::of(tol.tol_dfs) * T::one().max(l0.frobenius_norm()) {
        return Err(Error::Order2Unavailable(format!(
            "L0 S0 = 0 fails (norm {ls:.3e})"
        )));
    }
    let x = fast_pinv_weight(l0, dfs, tol)?;
    let two = T::of(2.0);
    let a = &(&x * h1) * &dfs.p0;
    let b = &(&dfs.p0 * h1) * &x;
    Ok((&a + &b).scale_re(two))
}

/// `K1(rho_s) = -i [C1, S0 rho_s S0^dagger]`.
pub fn k1_apply<T: Real>(c1: &Operator<T>, dfs: &DfsData<T>, rho_s: &Operator<T>) -> Operator<T> {
    let k0 = dfs.s0.embed(rho_s);
    c1.commutator(&k0).scale(-imag_unit::<T>())
}

/// `B_mu = 2 S0^dagger M_mu L0 X H1 S0`.
pub fn second_order_jumps<T: Real>(
    l0: &Operator<T>,
    h1: &Operator<T>,
    k: &KrausMap<T>,
    dfs: &DfsData<T>,
    tol: &Tolerances,
) -> Result<Vec<Operator<T>>> {
    l0.check_same_dim(h1, "second-order jump")?;
    let x = fast_pinv_weight(l0, dfs, tol)?;
    let core = &(l0 * &x) * h1;
    let scale = T::of(2.0) * l0.frobenius_norm() * x.frobenius_norm() * h1.frobenius_norm();
    let cut = T::of(tol.tol_jump_drop) * scale;
    let mut out = Vec::new();
    for m in &k.operators {
        let b = dfs.s0.compress(&(m * &core)).scale_re(T::of(2.0));
        if b.frobenius_norm() > cut {
            out.push(b);
        }
    }
    Ok(out)
}

/// Orthogonalize a jump family by diagonalizing its Gram matrix
/// `G[mu, nu] = tr(B_mu^dagger B_nu)`. The dissipator is unchanged up to the
/// dropped eigen-directions (weight below `tol_consolidate * max`).
pub fn consolidate_jumps<T: Real>(
    ops: &[Operator<T>],
    tol: &Tolerances,
) -> Result<Vec<Operator<T>>> {
    let n = ops.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let d = ops[0].dim();
    let gram = Operator::from_fn(n, |i, j| ops[i].inner(&ops[j]));
    let e = gram.eigh()?;
    let lmax = e.values.last().copied().unwrap_or_else(T::zero);
    if lmax <= T::zero() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for k in (0..n).rev() {
        if e.values[k] <= T::of(tol.tol_consolidate) * lmax {
            break;
        }
        let c = (0..n).fold(Operator::zeros(d), |acc, mu| {
            &acc + &ops[mu].scale(e.vectors[(mu, k)])
        });
        let mut v = c.vec();
        linalg::fix_phase(&mut v);
        out.push(Operator::unvec(&v)?);
    }
    Ok(out)
}

/// Dissipator `sum_k D[J_k]` applied to `rho`.
pub fn dissipate<T: Real>(jumps: &[Operator<T>], rho: &Operator<T>) -> Operator<T> {
    let half = T::of(0.5);
    jumps.iter().fold(Operator::zeros(rho.dim()), |acc, j| {
        let jd = j.dagger();
        let jj = &jd * j;
        let t = &(&(j * rho) * &jd) - &jj.anticommutator(rho).scale_re(half);
        &acc + &t
    })
}
