//! Built-in models: the driven damped cavity coupled to a qubit, a two-qubit
//! Purcell model, and truncation studies for the cavity.

use std::collections::BTreeMap;

use serde_json::json;

use crate::error::{Error, Result};
use crate::modelspec::{Factor, GeneratorSpec, LoadedModel, ModelFile};
use crate::operators::{fock, qubit, LindbladGenerator, Operator};
use crate::reduction::{reduce, Order};
use crate::scalar::{c, imag_unit, Real, C};
use crate::tolerances::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityQubitParams {
    /// Cavity decay rate.
    pub kappa: f64,
    /// Cavity-qubit coupling; also the expansion parameter.
    pub g: f64,
    /// Drive amplitude.
    pub u: C<f64>,
    /// Fock truncation.
    pub n_trunc: usize,
}

impl Default for CavityQubitParams {
    fn default() -> Self {
        CavityQubitParams {
            kappa: 10.0,
            g: 0.1,
            u: c(1.0, 0.0),
            n_trunc: 16,
        }
    }
}

impl CavityQubitParams {
    /// Coherent amplitude `2u / kappa`.
    pub fn alpha(&self) -> C<f64> {
        self.u * (2.0 / self.kappa)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "g must be >= 0, got {}",
                self.g
            )));
        }
        if !(self.u.re.is_finite() && self.u.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "drive amplitude must be finite".into(),
            ));
        }
        if self.n_trunc < 8 {
            return Err(Error::InvalidArgument(format!(
                "n_trunc must be at least 8, got {}",
                self.n_trunc
            )));
        }
        let a = self.alpha().norm();
        if a * a + 6.0 * a >= self.n_trunc as f64 {
            return Err(Error::InvalidArgument(format!(
                "n_trunc = {} is too small for |alpha| = {a:.3} (need |alpha|^2 + 6|alpha| < n_trunc)",
                self.n_trunc
            )));
        }
        if self.g / self.kappa > 0.2 {
            log::warn!(
                "g/kappa = {:.3} is outside the perturbative regime",
                self.g / self.kappa
            );
        }
        Ok(())
    }
}

/// A built-in model and the model file that produces it.
#[derive(Clone, Debug)]
pub struct ExampleModel<T: Real> {
    pub file: ModelFile,
    pub fast: LindbladGenerator<T>,
    pub slow: LindbladGenerator<T>,
    pub epsilon: T,
}

impl<T: Real> ExampleModel<T> {
    fn from_file(file: ModelFile) -> Result<Self> {
        let LoadedModel {
            fast,
            slow,
            epsilon,
            ..
        } = file.build::<T>(&Tolerances::default())?;
        Ok(ExampleModel {
            file,
            fast,
            slow,
            epsilon,
        })
    }
}

/// Expression-language literal that parses back to exactly `x`.
fn num(x: f64) -> String {
    if x < 0.0 {
        format!("(-{:?})", -x)
    } else {
        format!("{x:?}")
    }
}

fn complex_num(z: C<f64>) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("({} {sign} {:?}i)", num(z.re), z.im.abs())
}

fn symbols(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn cavity_file(p: &CavityQubitParams, extra_h: Option<&str>) -> Result<ModelFile> {
    p.validate()?;
    let n = p.n_trunc;
    let alpha = p.alpha();
    let mut h = "a' * b + a * b'".to_string();
    if let Some(hb) = extra_h {
        if p.g == 0.0 {
            return Err(Error::InvalidArgument(
                "a slow B Hamiltonian needs g > 0".into(),
            ));
        }
        h = format!("{h} + {} * kron(eye({n}), {hb})", num(1.0 / p.g));
    }
    Ok(ModelFile {
        description: Some(format!(
            "driven damped cavity (n_trunc = {n}) coupled to a qubit"
        )),
        factors: vec![
            Factor {
                name: "A".into(),
                dim: n,
            },
            Factor {
                name: "B".into(),
                dim: 2,
            },
        ],
        symbols: symbols(&[
            ("a", format!("kron(destroy({n}), eye(2))")),
            ("b", format!("kron(eye({n}), sigmam)")),
        ]),
        fast: GeneratorSpec {
            hamiltonian: "0".into(),
            jumps: vec![format!(
                "{} * (a - {} * id)",
                num(p.kappa.sqrt()),
                complex_num(alpha)
            )],
        },
        slow: GeneratorSpec {
            hamiltonian: h,
            jumps: Vec::new(),
        },
        epsilon: p.g,
        options: json!({
            "metadata": {
                "example": "cavity-qubit",
                "kappa": p.kappa,
                "g": p.g,
                "u": [p.u.re, p.u.im],
                "n_trunc": n,
                "slow_b_hamiltonian": extra_h,
            }
        })
        .as_object()
        .cloned()
        .expect("object"),
    })
}

/// Cavity with `L0 = sqrt(kappa) (a - alpha)` on `A`, qubit `B`, and
/// `H1 = a^dagger b + a b^dagger` with `b = sigma-`. `epsilon = g`.
pub fn build_cavity_qubit<T: Real>(p: &CavityQubitParams) -> Result<ExampleModel<T>> {
    let model = ExampleModel::from_file(cavity_file(p, None)?)?;
    let res = drive_equivalence_residual(p)?;
    if res > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "drive and displaced-dissipator forms differ by {res:.3e}"
        )));
    }
    Ok(model)
}

/// Same as [`build_cavity_qubit`] with `(1/g) I (x) H_B` added to the slow
/// Hamiltonian, so that the full Hamiltonian gains exactly `I (x) H_B`.
/// `h_b` is an expression on the qubit, e.g. `"sigmaz"`.
pub fn build_with_slow_b_hamiltonian<T: Real>(
    p: &CavityQubitParams,
    h_b: &str,
) -> Result<ExampleModel<T>> {
    ExampleModel::from_file(cavity_file(p, Some(h_b))?)
}

/// Largest entry of `kappa D[a - alpha] - ([u a^dagger - u* a, .] + kappa D[a])`
/// on superoperator entries whose Fock indices all lie below `n_trunc - 4`.
pub fn drive_equivalence_residual(p: &CavityQubitParams) -> Result<f64> {
    let n = p.n_trunc;
    let a = fock::destroy::<f64>(n).kron(&Operator::identity(2));
    let d = 2 * n;
    let alpha = p.alpha();
    let l0 = (&a - &Operator::identity(d).scale(alpha)).scale_re(p.kappa.sqrt());
    let displaced = LindbladGenerator::new(Operator::zeros(d), vec![l0])?.liouvillian();
    // [X, rho] = -i [H, rho] with H = i X
    let x = &a.dagger().scale(p.u) - &a.scale(p.u.conj());
    let h = x.scale(imag_unit::<f64>());
    let driven = LindbladGenerator::new(h, vec![a.scale_re(p.kappa.sqrt())])?.liouvillian();
    let block = n.saturating_sub(4);
    let fock_ok = |idx: usize| {
        let (i, j) = (idx % d, idx / d);
        i / 2 < block && j / 2 < block
    };
    let mut worst: f64 = 0.0;
    for col in (0..d * d).filter(|&k| fock_ok(k)) {
        for row in (0..d * d).filter(|&k| fock_ok(k)) {
            worst = worst.max((displaced.mat()[(row, col)] - driven.mat()[(row, col)]).norm());
        }
    }
    Ok(worst)
}

/// Closed-form reduced generator `-i g [alpha s+ + alpha* s-, .] + (4 g^2/kappa) D[s-]`.
pub fn expected_reduced_cavity_qubit<T: Real>(p: &CavityQubitParams) -> LindbladGenerator<T> {
    let alpha = p.alpha();
    let h = (&qubit::sigmap::<f64>().scale(alpha) + &qubit::sigmam::<f64>().scale(alpha.conj()))
        .scale_re(p.g);
    let jump = qubit::sigmam::<f64>().scale_re((4.0 * p.g * p.g / p.kappa).sqrt());
    LindbladGenerator::new(h, vec![jump])
        .expect("closed form is Hermitian")
        .cast()
}

/// Qubit `A` decaying at `kappa`, exchange coupling `sigma+ sigma- + h.c.` to
/// qubit `B`. `epsilon = g`.
pub fn build_purcell_two_qubit<T: Real>(kappa: f64, g: f64) -> Result<ExampleModel<T>> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    if !(g.is_finite() && g >= 0.0) {
        return Err(Error::InvalidArgument(format!("g must be >= 0, got {g}")));
    }
    let file = ModelFile {
        description: Some("two-qubit Purcell decay".into()),
        factors: vec![
            Factor {
                name: "A".into(),
                dim: 2,
            },
            Factor {
                name: "B".into(),
                dim: 2,
            },
        ],
        symbols: symbols(&[
            ("sa", "kron(sigmam, eye(2))".into()),
            ("sb", "kron(eye(2), sigmam)".into()),
        ]),
        fast: GeneratorSpec {
            hamiltonian: "0".into(),
            jumps: vec![format!("{} * sa", num(kappa.sqrt()))],
        },
        slow: GeneratorSpec {
            hamiltonian: "sa' * sb + sa * sb'".into(),
            jumps: Vec::new(),
        },
        epsilon: g,
        options: json!({ "metadata": { "example": "purcell-two-qubit", "kappa": kappa, "g": g } })
            .as_object()
            .cloned()
            .expect("object"),
    };
    ExampleModel::from_file(file)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationQuantity {
    /// `|<e| H_s1 |g>|`, i.e. `|alpha|`.
    ZenoCoeff,
    /// `g^2 sum ||B||_F^2` over consolidated second-order jumps.
    DampingRate,
    /// `sum |lambda_mu|^2`.
    LambdaNorm,
}

#[derive(Clone, Debug)]
pub struct TruncationTable {
    pub rows: Vec<(usize, f64)>,
    /// Truncations too small for the second-order precondition, with the reason.
    pub skipped: Vec<(usize, String)>,
    /// `|value[k+1] - value[k]|` over successive rows.
    pub differences: Vec<f64>,
    /// Last relative change below `1e-6`.
    pub converged: bool,
}

pub const TRUNCATIONS: [usize; 4] = [8, 12, 16, 24];

pub fn truncation_quantity(
    p: &CavityQubitParams,
    q: TruncationQuantity,
    tol: &Tolerances,
) -> Result<f64> {
    let m = build_cavity_qubit::<f64>(p)?;
    let order = if q == TruncationQuantity::DampingRate {
        Order::Second
    } else {
        Order::First
    };
    let eps = if p.g > 0.0 { p.g } else { 1.0 };
    let red = reduce(&m.fast, &m.slow, eps, order, tol)?;
    Ok(match q {
        TruncationQuantity::ZenoCoeff => red.model.h_s1.get(1, 0).norm(),
        TruncationQuantity::DampingRate => {
            p.g * p.g
                * red
                    .model
                    .consolidated_b()
                    .iter()
                    .map(|b| b.frobenius_norm().powi(2))
                    .sum::<f64>()
        }
        TruncationQuantity::LambdaNorm => red.certified.lambda.iter().map(|l| l.norm_sqr()).sum(),
    })
}

/// Recompute `q` at each truncation in `ns` (default [`TRUNCATIONS`]).
pub fn truncation_convergence(
    p: &CavityQubitParams,
    q: TruncationQuantity,
    ns: Option<&[usize]>,
    tol: &Tolerances,
) -> Result<TruncationTable> {
    let ns = ns.unwrap_or(&TRUNCATIONS);
    let mut rows = Vec::with_capacity(ns.len());
    let mut skipped = Vec::new();
    for &n in ns {
        let pn = CavityQubitParams { n_trunc: n, ..*p };
        match truncation_quantity(&pn, q, tol) {
            Ok(v) => rows.push((n, v)),
            // the truncated coherent state is not an exact kernel vector of L0
            Err(Error::Order2Unavailable(reason)) => {
                log::warn!("n_trunc = {n} skipped: {reason}");
                skipped.push((n, reason));
            }
            Err(e) => {
                log::error!("truncation study failed at n_trunc = {n}");
                return Err(e.at("truncation study"));
            }
        }
    }
    let differences: Vec<f64> = rows.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    let converged = match (differences.last(), rows.last()) {
        (Some(&d), Some(&(_, v))) => d <= 1e-6 * v.abs().max(f64::MIN_POSITIVE),
        _ => false,
    };
    Ok(TruncationTable {
        rows,
        skipped,
        differences,
        converged,
    })
}
