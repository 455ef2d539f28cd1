//! Subcommand implementations. Each returns data; the binary handles I/O.

use std::fmt::Write as _;

use qdiscord::basis_search::{sample_rng, QuditSampler};
use qdiscord::correlations::{concurrence, entropic_discord, geometric_discord, OptimizerRecord};
use qdiscord::damping_protocol::{real_amplitudes, rho_d, rho_r};
use qdiscord::{DensityMatrix, DiscordResult, MeasuredSide, MeasurementBasis, ProtocolParams, SearchConfig};
use rayon::prelude::*;

use crate::csv::{format_number, SweepRow};
use crate::error::{CtlError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measures {
    pub entropic: bool,
    pub geometric: bool,
    pub concurrence: bool,
}

impl Measures {
    pub const ALL: Measures = Measures {
        entropic: true,
        geometric: true,
        concurrence: true,
    };

    pub fn is_empty(&self) -> bool {
        !(self.entropic || self.geometric || self.concurrence)
    }
}

/// Side used for a measure when none is given: B for entropic, A for geometric.
pub fn default_side(geometric: bool) -> MeasuredSide {
    if geometric {
        MeasuredSide::A
    } else {
        MeasuredSide::B
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(CtlError::Usage(format!("--steps must be at least 2, got {}", self.steps)));
        }
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !unit(self.min) || !unit(self.max) || self.min > self.max {
            return Err(CtlError::Usage(format!(
                "range [{}, {}] must satisfy 0 <= min <= max <= 1",
                self.min, self.max
            )));
        }
        Ok(())
    }

    /// `steps` evenly spaced points with both endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * k as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepTarget {
    /// Sweep the damping strength.
    Decoherence,
    /// Sweep the weak-measurement strength at fixed damping.
    WeakMeasurement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub target: SweepTarget,
    pub alpha: f64,
    /// Decoherence: pins D1 while D2 follows the swept value. Weak: required.
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    /// Decoherence only: apply the protocol at this strength on both qubits.
    pub p: Option<f64>,
    pub range: Range,
    pub measures: Measures,
    pub side: Option<MeasuredSide>,
    pub search: SearchConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.range.validate()?;
        if self.measures.is_empty() {
            return Err(CtlError::Usage("no measures requested".into()));
        }
        match self.target {
            SweepTarget::Decoherence => {
                if self.d1.is_some() && self.d2.is_some() {
                    return Err(CtlError::Usage("fixing both --d1 and --d2 leaves nothing to sweep".into()));
                }
            }
            SweepTarget::WeakMeasurement => {
                if self.d1.is_none() || self.d2.is_none() {
                    return Err(CtlError::Usage("weak-measurement sweep needs D1 and D2".into()));
                }
                if self.p.is_some() {
                    return Err(CtlError::Usage("--p is the swept variable here; use --min/--max".into()));
                }
            }
        }
        self.search.validate()?;
        Ok(())
    }

    /// State and success probability at one sweep value.
    fn state_at(&self, x: f64) -> Result<(DensityMatrix, Option<f64>)> {
        let (d1, d2, p) = match self.target {
            SweepTarget::Decoherence => (self.d1.unwrap_or(x), self.d2.unwrap_or(x), self.p),
            SweepTarget::WeakMeasurement => (self.d1.unwrap_or(0.0), self.d2.unwrap_or(0.0), Some(x)),
        };
        match p {
            Some(p) => {
                let params = ProtocolParams::with_real_alpha(self.alpha, d1, d2, p, p)?;
                Ok((rho_r(&params)?, Some(params.success_probability())))
            }
            None => {
                let (a, b) = real_amplitudes(self.alpha)?;
                Ok((rho_d(a, b, d1, d2)?, None))
            }
        }
    }
}

/// Requested measures of `rho`. The optimal angles come from the entropic
/// search when present, else the geometric one.
pub fn measure_row(
    param: f64,
    rho: &DensityMatrix,
    measures: Measures,
    side: Option<MeasuredSide>,
    search: &SearchConfig,
) -> Result<SweepRow> {
    let mut row = SweepRow {
        param,
        ..Default::default()
    };
    let mut angles = None;
    if measures.entropic {
        let r = entropic_discord(rho, side.unwrap_or(default_side(false)), search)?;
        row.entropic_discord = Some(r.value);
        angles = r.optimal_basis.angles();
    }
    if measures.geometric {
        let r = geometric_discord(rho, side.unwrap_or(default_side(true)), search)?;
        row.geometric_discord = Some(r.value);
        angles = angles.or(r.optimal_basis.angles());
    }
    if measures.concurrence {
        row.concurrence = Some(concurrence(rho)?);
    }
    if let Some((t, p)) = angles {
        row.theta_opt = Some(t);
        row.phi_opt = Some(p);
    }
    Ok(row)
}

/// Evaluates every sweep point concurrently; rows come back in parameter order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let results: Vec<Result<SweepRow>> = spec
        .range
        .values()
        .par_iter()
        .map(|&x| {
            let (rho, success) = spec.state_at(x)?;
            let mut row = measure_row(x, &rho, spec.measures, spec.side, &spec.search)?;
            row.success_prob = success;
            Ok(row)
        })
        .collect();
    results.into_iter().collect()
}

/// FNV-1a over the bit patterns of the projector entries.
pub fn basis_hash(basis: &MeasurementBasis) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in basis.projectors() {
        for z in p.as_nalgebra().iter() {
            for byte in z.re.to_bits().to_le_bytes().into_iter().chain(z.im.to_bits().to_le_bytes()) {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
    h
}

fn describe(out: &mut String, name: &str, side: MeasuredSide, r: &DiscordResult) {
    let _ = writeln!(out, "{name}_discord: {}", format_number(r.value));
    let _ = writeln!(out, "{name}_side: {side}");
    match &r.optimizer {
        OptimizerRecord::Grid {
            steps_theta,
            steps_phi,
            refine_levels,
            evaluations,
        } => {
            let (t, p) = r.optimal_basis.angles().unwrap_or((f64::NAN, f64::NAN));
            let _ = writeln!(out, "{name}_theta_opt: {}", format_number(t));
            let _ = writeln!(out, "{name}_phi_opt: {}", format_number(p));
            let _ = writeln!(
                out,
                "{name}_optimizer: grid {steps_theta}x{steps_phi} refine {refine_levels} evaluations {evaluations}"
            );
        }
        OptimizerRecord::MonteCarlo {
            samples,
            seed,
            best_sample,
            evaluations,
        } => {
            let _ = writeln!(out, "{name}_basis_hash: {:016x}", basis_hash(&r.optimal_basis));
            let _ = writeln!(
                out,
                "{name}_optimizer: monte-carlo samples {samples} seed {seed} best_sample {best_sample} evaluations {evaluations}"
            );
        }
    }
}

/// Text report of the requested measures of one state.
pub fn cmd_discord(
    rho: &DensityMatrix,
    measures: Measures,
    side: Option<MeasuredSide>,
    search: &SearchConfig,
) -> Result<String> {
    if measures.is_empty() {
        return Err(CtlError::Usage("no measures requested".into()));
    }
    let mut out = String::new();
    let dims: Vec<String> = rho.dims().iter().map(|d| d.to_string()).collect();
    let _ = writeln!(out, "dims: {}", dims.join(" "));
    if measures.entropic {
        let s = side.unwrap_or(default_side(false));
        describe(&mut out, "entropic", s, &entropic_discord(rho, s, search)?);
    }
    if measures.geometric {
        let s = side.unwrap_or(default_side(true));
        describe(&mut out, "geometric", s, &geometric_discord(rho, s, search)?);
    }
    if measures.concurrence {
        let _ = writeln!(out, "concurrence: {}", format_number(concurrence(rho)?));
    }
    Ok(out)
}

/// Tolerances for the per-sample checks in [`cmd_sample_qudit`].
const SAMPLE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct QuditReport {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub rejections: u64,
    pub violations: usize,
    pub min_eigenvalue: f64,
    pub max_bloch_norm: f64,
}

impl QuditReport {
    /// Accepted over total draws.
    pub fn acceptance_rate(&self) -> f64 {
        self.samples as f64 / (self.samples as u64 + self.rejections) as f64
    }

    pub fn render(&self) -> String {
        format!(
            "dim: {}\nsamples: {}\nseed: {}\ndraws: {}\nacceptance_rate: {}\ninvariant_violations: {}\nmin_eigenvalue: {}\nmax_bloch_norm: {}\n",
            self.dim,
            self.samples,
            self.seed,
            self.samples as u64 + self.rejections,
            format_number(self.acceptance_rate()),
            self.violations,
            format_number(self.min_eigenvalue),
            format_number(self.max_bloch_norm),
        )
    }
}

struct SampleCheck {
    rejections: u64,
    violated: bool,
    min_eigenvalue: f64,
    bloch_norm: f64,
}

/// Draws `samples` filtered Bloch states; sample `i` uses `sample_rng(seed, i)`.
pub fn cmd_sample_qudit(dim: usize, samples: usize, seed: u64) -> Result<QuditReport> {
    if samples == 0 {
        return Err(CtlError::Usage("--samples must be positive".into()));
    }
    let sampler = QuditSampler::new(dim)?;
    let checks: Vec<Result<SampleCheck>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sampler.sample(&mut sample_rng(seed, i as u64))?;
            let bloch_norm = s.bloch.norm();
            let violated = s.min_eigenvalue < -SAMPLE_TOL
                || (s.state.trace().re - 1.0).abs() > SAMPLE_TOL
                || !s.state.is_hermitian(SAMPLE_TOL)
                || s.basis.invariant_defect() > SAMPLE_TOL
                || bloch_norm > 1.0 + SAMPLE_TOL;
            Ok(SampleCheck {
                rejections: s.rejections,
                violated,
                min_eigenvalue: s.min_eigenvalue,
                bloch_norm,
            })
        })
        .collect();
    let mut report = QuditReport {
        dim,
        samples,
        seed,
        rejections: 0,
        violations: 0,
        min_eigenvalue: f64::INFINITY,
        max_bloch_norm: 0.0,
    };
    for c in checks {
        let c = c?;
        report.rejections += c.rejections;
        report.violations += c.violated as usize;
        report.min_eigenvalue = report.min_eigenvalue.min(c.min_eigenvalue);
        report.max_bloch_norm = report.max_bloch_norm.max(c.bloch_norm);
    }
    Ok(report)
}
