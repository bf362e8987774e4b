//! Certification of the fast generator and the asymptotic objects built
//! from it: steady projector `R`, its Kraus form, the decoherence-free
//! subspace and the scalars `lambda_mu`.

mod dfs;
mod kraus;
mod projector;
mod spectrum;

pub use dfs::{identify_dfs, DfsData, Isometry};
pub use kraus::{kraus_eigenvalues, kraus_from_choi, kraus_on_dfs, KrausMap};
pub use projector::{invariant_operators, steady_projector, SteadyProjector};
pub use spectrum::{analyze_generator, analyze_spectrum, Spectrum};

use serde::Serialize;

use crate::error::Result;
use crate::operators::{LindbladGenerator, Operator};
use crate::scalar::{Real, C};
use crate::tolerances::Tolerances;

/// Everything the reduction needs from the fast generator.
#[derive(Clone, Debug)]
pub struct Certified<T: Real> {
    pub spectrum: Spectrum<T>,
    pub projector: SteadyProjector<T>,
    pub dfs: DfsData<T>,
    pub kraus: KrausMap<T>,
    pub lambda: Vec<C<T>>,
    pub report: AssumptionReport,
}

/// Serializable summary of the assumption checks.
#[derive(Clone, Debug, Serialize)]
pub struct AssumptionReport {
    pub dim: usize,
    pub eigenvalue_count: usize,
    /// Slowest nonzero decay rates, ascending.
    pub leading_rates: Vec<f64>,
    pub zero_multiplicity_algebraic: usize,
    pub zero_multiplicity_geometric: usize,
    pub zero_semisimple: bool,
    pub gap: f64,
    pub dfs_confirmed: bool,
    pub slow_dim: usize,
    pub dfs_residual: f64,
    pub kraus_count: usize,
    pub kraus_completeness_residual: f64,
    pub kraus_scalar_residual: f64,
    pub lambda: Vec<[f64; 2]>,
    pub lambda_norm_residual: f64,
    pub rp0_residual: f64,
    pub invariant_count: usize,
}

/// Run every check on the fast generator, in order: spectrum and gap,
/// semisimple zero, decoherence-free support, Kraus form and scalar action
/// on the support.
pub fn certify<T: Real>(fast: &LindbladGenerator<T>, tol: &Tolerances) -> Result<Certified<T>> {
    let spectrum = analyze_generator(fast, tol).map_err(|e| e.at("spectrum"))?;
    let gap = spectrum.require_gap().map_err(|e| e.at("spectrum"))?;
    let projector = steady_projector(&spectrum).map_err(|e| e.at("steady projector"))?;
    let dfs = identify_dfs(&projector, fast, tol).map_err(|e| e.at("decoherence-free subspace"))?;
    let kraus = kraus_on_dfs(&projector, &dfs, tol).map_err(|e| e.at("Kraus decomposition"))?;
    let (lambda, scalar_res) =
        kraus_eigenvalues(&kraus, &dfs, tol).map_err(|e| e.at("Kraus eigenvalues"))?;

    let lnorm = lambda.iter().fold(T::zero(), |a, l| a + l.norm_sqr());
    let rp0 = projector.apply_adjoint(&dfs.p0)?;
    let rp0_residual = (&rp0 - &Operator::identity(fast.dim())).frobenius_norm();

    let mut rates: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .filter(|l| l.norm() > spectrum.zero_threshold)
        .map(|l| -l.re.as_f64())
        .collect();
    rates.sort_by(f64::total_cmp);
    rates.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));
    rates.truncate(8);

    let report = AssumptionReport {
        dim: fast.dim(),
        eigenvalue_count: spectrum.eigenvalues.len(),
        leading_rates: rates,
        zero_multiplicity_algebraic: spectrum.zero_multiplicity_algebraic,
        zero_multiplicity_geometric: spectrum.zero_multiplicity_geometric,
        zero_semisimple: spectrum.is_semisimple_zero(),
        gap: gap.as_f64(),
        dfs_confirmed: true,
        slow_dim: dfs.slow_dim,
        dfs_residual: dfs.dfs_residual.as_f64(),
        kraus_count: kraus.len(),
        kraus_completeness_residual: kraus.completeness_residual.as_f64(),
        kraus_scalar_residual: scalar_res.as_f64(),
        lambda: lambda
            .iter()
            .map(|l| [l.re.as_f64(), l.im.as_f64()])
            .collect(),
        lambda_norm_residual: (lnorm - T::one()).abs().as_f64(),
        rp0_residual: rp0_residual.as_f64(),
        invariant_count: projector.invariant_operators().len(),
    };
    log::info!(
        "certified: dim {}, slow_dim {}, gap {:.6e}, {} Kraus operators",
        report.dim,
        report.slow_dim,
        report.gap,
        report.kraus_count
    );
    Ok(Certified {
        spectrum,
        projector,
        dfs,
        kraus,
        lambda,
        report,
    })
}
