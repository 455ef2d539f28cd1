//! Correlation measures for bipartite states.
//!
//! Entropies are in bits. Discord is asymmetric: every measurement-based
//! quantity takes the [`MeasuredSide`] explicitly.

use std::fmt;

use crate::basis_search::{
    grid_minimize, mc_minimize, measurement_qubit, pauli_y, MeasurementBasis, SearchConfig,
    SearchMethod,
};
use crate::densmat::{
    as_density, eig_hermitian, eigvals_hermitian, kron, partial_trace, trace_norm, ComplexMatrix,
    DensityMatrix, C64, DEFAULT_TOL, EIG_ZERO,
};
use crate::error::{Error, Result};

/// Outcomes less likely than this are dropped from ensemble averages.
pub const OUTCOME_FLOOR: f64 = 1e-12;

/// Discord values in `[-DISCORD_FLOOR, 0)` are clamped to zero.
pub const DISCORD_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasuredSide {
    A,
    B,
}

impl MeasuredSide {
    /// Subsystem index of the measured factor.
    pub fn index(self) -> usize {
        match self {
            MeasuredSide::A => 0,
            MeasuredSide::B => 1,
        }
    }

    pub fn other(self) -> MeasuredSide {
        match self {
            MeasuredSide::A => MeasuredSide::B,
            MeasuredSide::B => MeasuredSide::A,
        }
    }
}

impl fmt::Display for MeasuredSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasuredSide::A => "A",
            MeasuredSide::B => "B",
        })
    }
}

/// How the optimal basis was found.
#[derive(Clone, Debug, PartialEq)]
pub enum OptimizerRecord {
    Grid {
        steps_theta: usize,
        steps_phi: usize,
        refine_levels: usize,
        evaluations: usize,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
        /// Index of the winning sample; regenerate it with `sample_rng(seed, index)`.
        best_sample: usize,
        evaluations: usize,
    },
}

impl OptimizerRecord {
    pub fn evaluations(&self) -> usize {
        match self {
            OptimizerRecord::Grid { evaluations, .. }
            | OptimizerRecord::MonteCarlo { evaluations, .. } => *evaluations,
        }
    }

    pub fn method(&self) -> SearchMethod {
        match self {
            OptimizerRecord::Grid { .. } => SearchMethod::Grid,
            OptimizerRecord::MonteCarlo { .. } => SearchMethod::MonteCarlo,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiscordResult {
    pub value: f64,
    pub optimal_basis: MeasurementBasis,
    pub optimizer: OptimizerRecord,
}

/// `-sum p log_base p`, with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64], base: f64) -> Result<f64> {
    if !(base > 1.0) {
        return Err(Error::arg(format!("entropy base must exceed 1, got {base}")));
    }
    if let Some(bad) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::arg(format!("negative or non-finite probability {bad}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::arg(format!("probabilities sum to {total}, not 1")));
    }
    let ln_base = base.ln();
    Ok(p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln() / ln_base)
        .sum())
}

fn spectrum_entropy(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&v| v > EIG_ZERO)
        .map(|&v| -v * v.log2())
        .sum::<f64>()
        .max(0.0)
}

fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    Ok(spectrum_entropy(&eigvals_hermitian(m)?))
}

/// von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    matrix_entropy(rho.matrix())
}

/// `S(A) + S(B) - S(AB)`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    rho.bipartite_dims()?;
    let sa = von_neumann_entropy(&partial_trace(rho, 0)?)?;
    let sb = von_neumann_entropy(&partial_trace(rho, 1)?)?;
    Ok(sa + sb - von_neumann_entropy(rho)?)
}

fn check_basis(rho: &DensityMatrix, basis: &MeasurementBasis, side: MeasuredSide) -> Result<(usize, usize)> {
    let (da, db) = rho.bipartite_dims()?;
    let measured = if side == MeasuredSide::A { da } else { db };
    if basis.dim() != measured {
        return Err(Error::arg(format!(
            "measurement on side {side} has dimension {}, subsystem has {measured}",
            basis.dim()
        )));
    }
    Ok((da, db))
}

/// `Tr_measured[(P ⊗ I) rho]` (or `I ⊗ P`), the unnormalized state left on the
/// unmeasured side.
fn conditional_block(rho: &ComplexMatrix, p: &ComplexMatrix, side: MeasuredSide, da: usize, db: usize) -> ComplexMatrix {
    match side {
        MeasuredSide::B => {
            let mut out = ComplexMatrix::zeros(da);
            for a in 0..da {
                for a2 in 0..da {
                    let mut acc = C64::new(0.0, 0.0);
                    for b in 0..db {
                        for b2 in 0..db {
                            acc += p.get(b, b2) * rho.get(a * db + b2, a2 * db + b);
                        }
                    }
                    out.set(a, a2, acc);
                }
            }
            out
        }
        MeasuredSide::A => {
            let mut out = ComplexMatrix::zeros(db);
            for b in 0..db {
                for b2 in 0..db {
                    let mut acc = C64::new(0.0, 0.0);
                    for a in 0..da {
                        for a2 in 0..da {
                            acc += p.get(a, a2) * rho.get(a2 * db + b, a * db + b2);
                        }
                    }
                    out.set(b, b2, acc);
                }
            }
            out
        }
    }
}

/// Outcome probabilities and unnormalized conditional states on the unmeasured side.
pub fn conditional_states(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    side: MeasuredSide,
) -> Result<Vec<(f64, ComplexMatrix)>> {
    let (da, db) = check_basis(rho, basis, side)?;
    Ok(basis
        .projectors()
        .iter()
        .map(|p| {
            let block = conditional_block(rho.matrix(), p, side, da, db).hermitian_part();
            (block.trace().re.max(0.0), block)
        })
        .collect())
}

/// One measurement outcome. `state` is `None` when the outcome probability is
/// below [`OUTCOME_FLOOR`].
#[derive(Clone, Debug)]
pub struct Outcome {
    pub probability: f64,
    pub state: Option<DensityMatrix>,
}

/// `P_i` embedded in the joint space on the measured factor.
pub fn embed_projector(p: &ComplexMatrix, side: MeasuredSide, da: usize, db: usize) -> ComplexMatrix {
    match side {
        MeasuredSide::A => kron(p, &ComplexMatrix::identity(db)),
        MeasuredSide::B => kron(&ComplexMatrix::identity(da), p),
    }
}

/// Post-measurement joint states `{p_i, (P_i rho P_i) / p_i}`.
pub fn post_measurement_ensemble(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    side: MeasuredSide,
) -> Result<Vec<Outcome>> {
    let (da, db) = check_basis(rho, basis, side)?;
    let mut outcomes = Vec::with_capacity(basis.projectors().len());
    let mut total = 0.0;
    for p in basis.projectors() {
        let big = embed_projector(p, side, da, db);
        let projected = big.sandwich(rho.matrix());
        let prob = projected.trace().re;
        total += prob;
        if prob < OUTCOME_FLOOR {
            outcomes.push(Outcome {
                probability: 0.0,
                state: None,
            });
        } else {
            let state = as_density(&projected.scale_real(1.0 / prob), rho.dims(), DEFAULT_TOL)?;
            outcomes.push(Outcome {
                probability: prob,
                state: Some(state),
            });
        }
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "outcome probabilities sum to {total}"
        )));
    }
    Ok(outcomes)
}

/// `sum_i p_i S(rho_i)` over the post-measurement ensemble.
pub fn conditional_entropy(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    side: MeasuredSide,
) -> Result<f64> {
    let mut acc = 0.0;
    for (p, block) in conditional_states(rho, basis, side)? {
        if p < OUTCOME_FLOOR {
            continue;
        }
        acc += p * matrix_entropy(&block.scale_real(1.0 / p))?;
    }
    Ok(acc)
}

fn finalize(raw: f64) -> Result<f64> {
    if !raw.is_finite() || raw < -DISCORD_FLOOR {
        return Err(Error::Numerical(format!("discord evaluated to {raw}")));
    }
    Ok(raw.max(0.0))
}

fn measured_dim(rho: &DensityMatrix, side: MeasuredSide) -> Result<usize> {
    let (da, db) = rho.bipartite_dims()?;
    Ok(if side == MeasuredSide::A { da } else { db })
}

/// Minimizes `objective` over measurements on `side` using `cfg`.
fn search<F>(rho: &DensityMatrix, side: MeasuredSide, cfg: &SearchConfig, objective: F) -> Result<(f64, MeasurementBasis, OptimizerRecord)>
where
    F: Fn(&MeasurementBasis) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let d = measured_dim(rho, side)?;
    match cfg.method {
        SearchMethod::Grid => {
            if d != 2 {
                return Err(Error::arg(format!(
                    "grid search needs a qubit on the measured side, got dimension {d}"
                )));
            }
            let m = grid_minimize(|t, p| objective(&measurement_qubit(t, p)?), cfg)?;
            Ok((
                m.value,
                measurement_qubit(m.theta, m.phi)?,
                OptimizerRecord::Grid {
                    steps_theta: cfg.grid_steps_theta,
                    steps_phi: cfg.grid_steps_phi,
                    refine_levels: cfg.refine_levels,
                    evaluations: m.evaluations,
                },
            ))
        }
        SearchMethod::MonteCarlo => {
            let m = mc_minimize(objective, d, cfg)?;
            Ok((
                m.value,
                m.basis,
                OptimizerRecord::MonteCarlo {
                    samples: cfg.samples,
                    seed: cfg.seed,
                    best_sample: m.sample_index,
                    evaluations: m.evaluations,
                },
            ))
        }
    }
}

/// `D = S(rho_measured) - S(rho_AB) + min_basis sum_i p_i S(rho_i)`.
pub fn entropic_discord(rho: &DensityMatrix, side: MeasuredSide, cfg: &SearchConfig) -> Result<DiscordResult> {
    let s_measured = von_neumann_entropy(&partial_trace(rho, side.index())?)?;
    let s_joint = von_neumann_entropy(rho)?;
    let (min_cond, optimal_basis, optimizer) =
        search(rho, side, cfg, |basis| conditional_entropy(rho, basis, side))?;
    Ok(DiscordResult {
        value: finalize(s_measured - s_joint + min_cond)?,
        optimal_basis,
        optimizer,
    })
}

fn dephase(rho: &DensityMatrix, basis: &MeasurementBasis, side: MeasuredSide) -> Result<ComplexMatrix> {
    let (da, db) = check_basis(rho, basis, side)?;
    let mut acc = ComplexMatrix::zeros(rho.dim());
    for p in basis.projectors() {
        acc = &acc + &embed_projector(p, side, da, db).sandwich(rho.matrix());
    }
    Ok(acc)
}

/// The classical-quantum state `sum_i P_i ⊗ Tr_measured[(P_i ⊗ I) rho]`,
/// factors kept in the original order.
pub fn classicalized_state(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    side: MeasuredSide,
) -> Result<DensityMatrix> {
    as_density(&dephase(rho, basis, side)?, rho.dims(), DEFAULT_TOL)
}

/// `inf_basis ||rho - rho^c||_1`, in raw trace-norm units.
pub fn geometric_discord(rho: &DensityMatrix, side: MeasuredSide, cfg: &SearchConfig) -> Result<DiscordResult> {
    let (value, optimal_basis, optimizer) = search(rho, side, cfg, |basis| {
        Ok(trace_norm(&(rho.matrix() - &dephase(rho, basis, side)?)))
    })?;
    Ok(DiscordResult {
        value: finalize(value)?,
        optimal_basis,
        optimizer,
    })
}

/// Two-qubit concurrence from the spin-flipped spectrum.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::arg(format!(
            "concurrence needs a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    let yy = kron(&pauli_y(), &pauli_y());
    let flipped = (&(&yy * &rho.matrix().conj()) * &yy).hermitian_part();
    // sqrt(rho) flipped sqrt(rho) shares its spectrum with rho * flipped but is Hermitian.
    let eig = eig_hermitian(rho.matrix())?;
    let roots: Vec<f64> = eig.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    let sqrt_rho = crate::densmat::HermitianEigen {
        values: roots,
        vectors: eig.vectors,
    }
    .reconstruct();
    let m = (&(&sqrt_rho * &flipped) * &sqrt_rho).hermitian_part();
    let mut lambdas: Vec<f64> = eigvals_hermitian(&m)?
        .into_iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}
