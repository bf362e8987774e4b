use super::terms::*;
use crate::asymptotics::{certify, Certified, DfsData, Isometry, KrausMap, SteadyProjector};
use crate::error::{Error, Result};
use crate::operators::{LindbladGenerator, Operator};
use crate::scalar::Real;
use crate::tolerances::Tolerances;

/// Expansion order of the reduced generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    First = 1,
    Second = 2,
}

impl Order {
    pub fn from_int(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::InvalidArgument(format!(
                "order must be 1 or 2, got {k}"
            ))),
        }
    }

    pub fn as_int(self) -> u32 {
        self as u32
    }
}

#[derive(Clone, Debug, Default)]
pub struct Residuals {
    /// Order-1 invariance residual. Exact form when `C1` is available,
    /// `R`-projected form otherwise.
    pub order1: f64,
    pub order1_exact: bool,
    pub order2: Option<f64>,
    /// `max ||R(K1(Ls1(E)))||_F`.
    pub k1_projection: Option<f64>,
    /// `||sum A^dagger A - S0^dagger L1^dagger L1 S0||_F`, worst channel.
    pub a_identity: f64,
    pub b_identity: Option<f64>,
    pub c1_hermiticity: Option<f64>,
    /// `||P0 C1 P0||_F`.
    pub c1_block: Option<f64>,
}

/// Reduced model with `epsilon` kept out of the stored operators.
#[derive(Clone, Debug)]
pub struct ReducedModel<T: Real> {
    pub slow_dim: usize,
    pub epsilon: T,
    pub order: Order,
    pub s0: Isometry<T>,
    pub h_s1: Operator<T>,
    pub a_ops: Vec<Operator<T>>,
    pub c1: Option<Operator<T>>,
    pub b_ops: Vec<Operator<T>>,
    pub residuals: Residuals,
    /// True when the reduced generator vanishes identically.
    pub zero_generator: bool,
    pub diagnostics: Vec<String>,
    a_merged: Vec<Operator<T>>,
    b_merged: Vec<Operator<T>>,
}

/// A reduced model together with the certified fast-generator data.
#[derive(Clone, Debug)]
pub struct Reduction<T: Real> {
    pub certified: Certified<T>,
    pub model: ReducedModel<T>,
}

impl<T: Real> ReducedModel<T> {
    /// Reduced generator at the stored `epsilon`.
    pub fn generator(&self) -> LindbladGenerator<T> {
        self.generator_at(self.epsilon)
    }

    /// `H = eps H_s1`, jumps `sqrt(eps) A` and `eps B` (consolidated).
    pub fn generator_at(&self, eps: T) -> LindbladGenerator<T> {
        let h = self.h_s1.scale_re(eps);
        let se = eps.sqrt();
        let mut jumps: Vec<_> = self.a_merged.iter().map(|a| a.scale_re(se)).collect();
        jumps.extend(self.b_merged.iter().map(|b| b.scale_re(eps)));
        LindbladGenerator::from_parts(h, jumps)
    }

    /// `Ls1`: Zeno Hamiltonian and the raw first-order jumps.
    pub fn first_order_part(&self) -> LindbladGenerator<T> {
        LindbladGenerator::from_parts(self.h_s1.clone(), self.a_ops.clone())
    }

    pub fn consolidated_a(&self) -> &[Operator<T>] {
        &self.a_merged
    }

    pub fn consolidated_b(&self) -> &[Operator<T>] {
        &self.b_merged
    }

    /// `S0 rho_s S0^dagger - i eps [C1, S0 rho_s S0^dagger]`.
    pub fn kraus_parametrization(&self, rho_s: &Operator<T>) -> Result<Operator<T>> {
        self.kraus_parametrization_at(rho_s, self.epsilon)
    }

    pub fn kraus_parametrization_at(&self, rho_s: &Operator<T>, eps: T) -> Result<Operator<T>> {
        if rho_s.dim() != self.slow_dim {
            return Err(Error::dims("slow state", self.slow_dim, rho_s.dim()));
        }
        let k0 = self.s0.embed(rho_s);
        Ok(match &self.c1 {
            Some(c1) => {
                let k1 = c1.commutator(&k0).scale(-crate::scalar::imag_unit::<T>());
                &k0 + &k1.scale_re(eps)
            }
            None => k0,
        })
    }
}

/// Certify `fast` and build the reduced model at the requested order.
pub fn reduce<T: Real>(
    fast: &LindbladGenerator<T>,
    slow: &LindbladGenerator<T>,
    epsilon: T,
    order: Order,
    tol: &Tolerances,
) -> Result<Reduction<T>> {
    if slow.dim() != fast.dim() {
        return Err(Error::dims("slow generator", fast.dim(), slow.dim()));
    }
    if !(epsilon.is_finite() && epsilon > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let certified = certify(fast, tol)?;
    let model = assemble(fast, slow, epsilon, order, &certified, tol)?;
    Ok(Reduction { certified, model })
}

pub fn build_reduced_model<T: Real>(
    fast: &LindbladGenerator<T>,
    slow: &LindbladGenerator<T>,
    epsilon: T,
    order: Order,
    tol: &Tolerances,
) -> Result<ReducedModel<T>> {
    reduce(fast, slow, epsilon, order, tol).map(|r| r.model)
}

/// Build the reduced model from already-certified fast data.
pub fn assemble<T: Real>(
    fast: &LindbladGenerator<T>,
    slow: &LindbladGenerator<T>,
    epsilon: T,
    order: Order,
    cert: &Certified<T>,
    tol: &Tolerances,
) -> Result<ReducedModel<T>> {
    let dfs = &cert.dfs;
    let k = &cert.kraus;
    let ls1 = first_order_generator(slow, k, dfs, tol).map_err(|e| e.at("first order"))?;
    let obstruction = order2_obstruction(fast, slow, dfs, tol);
    let mut diagnostics = Vec::new();

    if order == Order::Second {
        if let Some(reason) = &obstruction {
            return Err(Error::Order2Unavailable(reason.clone()));
        }
    } else if let Some(reason) = &obstruction {
        diagnostics.push(format!("order 2 unavailable: {reason}"));
    }

    let c1_full = match obstruction {
        None => Some(
            c1_operator(&fast.jumps()[0], slow.hamiltonian(), dfs, tol).map_err(|e| e.at("C1"))?,
        ),
        Some(_) => None,
    };

    let mut residuals = Residuals {
        a_identity: a_identity_residual(slow, k, dfs, tol)?.as_f64(),
        ..Default::default()
    };
    let (r1, exact) = residual_order1(fast, slow, &cert.projector, dfs, &ls1, c1_full.as_ref())?;
    residuals.order1 = r1.as_f64();
    residuals.order1_exact = exact;

    let mut b_ops = Vec::new();
    let mut c1 = None;
    if order == Order::Second {
        let c = c1_full.expect("order 2 has C1");
        let l0 = &fast.jumps()[0];
        let h1 = slow.hamiltonian();
        b_ops = second_order_jumps(l0, h1, k, dfs, tol).map_err(|e| e.at("second order"))?;
        let (r2, rk) = residual_order2(slow, &cert.projector, dfs, &ls1, &c, &b_ops)?;
        residuals.order2 = Some(r2.as_f64());
        residuals.k1_projection = Some(rk.as_f64());
        residuals.b_identity = Some(b_identity_residual(l0, h1, dfs, &b_ops, tol)?.as_f64());
        residuals.c1_hermiticity = Some(c.hermiticity_deviation().as_f64());
        residuals.c1_block = Some((&(&dfs.p0 * &c) * &dfs.p0).frobenius_norm().as_f64());
        c1 = Some(c);
    }

    let a_merged = consolidate_jumps(ls1.jumps(), tol)?;
    let b_merged = consolidate_jumps(&b_ops, tol)?;
    let slow_dim = dfs.slow_dim;
    let scale = T::one().max(ls1.hamiltonian().frobenius_norm());
    let zero_generator = slow_dim == 1
        || (is_scalar(ls1.hamiltonian(), scale)
            && a_merged
                .iter()
                .chain(&b_merged)
                .all(|j| is_scalar(j, scale)));
    if slow_dim == 1 {
        diagnostics.push(
            "slow space is one-dimensional: the reduced generator is identically zero".into(),
        );
    } else if zero_generator {
        diagnostics.push("the reduced generator vanishes identically".into());
    }

    Ok(ReducedModel {
        slow_dim,
        epsilon,
        order,
        s0: dfs.s0.clone(),
        h_s1: ls1.hamiltonian().clone(),
        a_ops: ls1.jumps().to_vec(),
        c1,
        b_ops,
        residuals,
        zero_generator,
        diagnostics,
        a_merged,
        b_merged,
    })
}

fn is_scalar<T: Real>(x: &Operator<T>, scale: T) -> bool {
    let d = x.dim();
    let m = x.trace() / T::of(d as f64);
    let off = x - &Operator::identity(d).scale(m);
    off.frobenius_norm() <= T::of(1e-12) * scale.max(x.frobenius_norm())
}

fn slow_units<T: Real>(s: usize) -> impl Iterator<Item = Operator<T>> {
    (0..s).flat_map(move |i| (0..s).map(move |j| Operator::unit(s, i, j)))
}

/// Order-1 invariance residual. Returns the residual and whether the exact
/// (`C1`-based) identity was used.
pub fn residual_order1<T: Real>(
    fast: &LindbladGenerator<T>,
    slow: &LindbladGenerator<T>,
    r: &SteadyProjector<T>,
    dfs: &DfsData<T>,
    ls1: &LindbladGenerator<T>,
    c1: Option<&Operator<T>>,
) -> Result<(T, bool)> {
    let mut worst = T::zero();
    for e in slow_units::<T>(dfs.slow_dim) {
        let k0 = dfs.s0.embed(&e);
        let rhs = dfs.s0.embed(&ls1.apply(&e)?);
        let l1k0 = slow.apply(&k0)?;
        let lhs = match c1 {
            Some(c) => &fast.apply(&k1_apply(c, dfs, &e))? + &l1k0,
            None => r.apply(&l1k0)?,
        };
        worst = worst.max((&lhs - &rhs).frobenius_norm());
    }
    Ok((worst, c1.is_some()))
}

/// Order-2 residual against the dissipator of `b_ops`, and the
/// `R(K1(Ls1(E)))` check.
pub fn residual_order2<T: Real>(
    slow: &LindbladGenerator<T>,
    r: &SteadyProjector<T>,
    dfs: &DfsData<T>,
    ls1: &LindbladGenerator<T>,
    c1: &Operator<T>,
    b_ops: &[Operator<T>],
) -> Result<(T, T)> {
    let mut worst = T::zero();
    let mut worst_k = T::zero();
    for e in slow_units::<T>(dfs.slow_dim) {
        let k1 = k1_apply(c1, dfs, &e);
        let k1ls = k1_apply(c1, dfs, &ls1.apply(&e)?);
        let rk = r.apply(&k1ls)?;
        worst_k = worst_k.max(rk.frobenius_norm());
        let inner = &slow.apply(&k1)? - &k1ls;
        let lhs = dfs.s0.compress(&r.apply(&inner)?);
        let rhs = dissipate(b_ops, &e);
        worst = worst.max((&lhs - &rhs).frobenius_norm());
    }
    Ok((worst, worst_k))
}

/// Worst `||sum_mu A_mu^dagger A_mu - S0^dagger L^dagger L S0||_F` over slow
/// jump channels (no jumps are dropped here).
pub fn a_identity_residual<T: Real>(
    slow: &LindbladGenerator<T>,
    k: &KrausMap<T>,
    dfs: &DfsData<T>,
    tol: &Tolerances,
) -> Result<T> {
    let mut worst = T::zero();
    let keep_all = Tolerances {
        tol_jump_drop: 0.0,
        ..tol.clone()
    };
    for l in slow.jumps() {
        let a = first_order_jumps(l, k, dfs, &keep_all)?;
        let lhs = a.iter().fold(Operator::zeros(dfs.slow_dim), |acc, x| {
            &acc + &(&x.dagger() * x)
        });
        let rhs = dfs.s0.compress(&(&l.dagger() * l));
        worst = worst.max((&lhs - &rhs).frobenius_norm());
    }
    Ok(worst)
}

/// `||sum B^dagger B - 4 S0^dagger H1 X H1 S0||_F`.
pub fn b_identity_residual<T: Real>(
    l0: &Operator<T>,
    h1: &Operator<T>,
    dfs: &DfsData<T>,
    b_ops: &[Operator<T>],
    tol: &Tolerances,
) -> Result<T> {
    let x = pinv_weight(l0, tol)?;
    let lhs = b_ops.iter().fold(Operator::zeros(dfs.slow_dim), |acc, b| {
        &acc + &(&b.dagger() * b)
    });
    let rhs = dfs.s0.compress(&(&(h1 * &x) * h1)).scale_re(T::of(4.0));
    Ok((&lhs - &rhs).frobenius_norm())
}
