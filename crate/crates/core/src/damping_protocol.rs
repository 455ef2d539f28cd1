//! Amplitude-damping decoherence and the weak-measurement / reversal protocol.
//!
//! The two-qubit input `alpha|00> + beta|11>` is damped locally with strengths
//! `D1`, `D2`. Protection applies a weak measurement `M_wk(p1, p2)` before the
//! channels and a reversing measurement `M_rev(pr1, pr2)` after them, with
//! `pr = (1 - D) p + D`. Both closed-form states are X states.

use crate::densmat::{as_density, c, kron, ComplexMatrix, DensityMatrix, C64, DEFAULT_TOL};
use crate::error::{Error, Result};

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::arg(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

fn check_amplitudes(alpha: C64, beta: C64) -> Result<()> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::arg(format!(
            "|alpha|^2 + |beta|^2 must be 1, got {norm}"
        )));
    }
    Ok(())
}

/// Protocol parameters. Reversal strengths and the normalization are derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolParams {
    pub alpha: C64,
    pub beta: C64,
    pub d1: f64,
    pub d2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl ProtocolParams {
    pub fn new(alpha: C64, beta: C64, d1: f64, d2: f64, p1: f64, p2: f64) -> Result<Self> {
        check_amplitudes(alpha, beta)?;
        check_unit("D1", d1)?;
        check_unit("D2", d2)?;
        check_unit("p1", p1)?;
        check_unit("p2", p2)?;
        Ok(ProtocolParams { alpha, beta, d1, d2, p1, p2 })
    }

    /// Real amplitudes `alpha` and `beta = sqrt(1 - alpha^2)`.
    pub fn with_real_alpha(alpha: f64, d1: f64, d2: f64, p1: f64, p2: f64) -> Result<Self> {
        let (a, b) = real_amplitudes(alpha)?;
        Self::new(a, b, d1, d2, p1, p2)
    }

    pub fn pr1(&self) -> f64 {
        reversal_strength(self.p1, self.d1).expect("validated on construction")
    }

    pub fn pr2(&self) -> f64 {
        reversal_strength(self.p2, self.d2).expect("validated on construction")
    }

    /// Trace of the unnormalized protected state.
    pub fn normalization(&self) -> f64 {
        let (q1, q2) = (1.0 - self.p1, 1.0 - self.p2);
        1.0 + (q1 * self.d1 * (1.0 + q2 * self.d2) + q2 * self.d2) * self.beta.norm_sqr()
    }

    /// Probability that both filters of the protocol succeed.
    pub fn success_probability(&self) -> f64 {
        (1.0 - self.d1) * (1.0 - self.d2) * (1.0 - self.p1) * (1.0 - self.p2) * self.normalization()
    }
}

/// `(alpha, sqrt(1 - alpha^2))` for real `alpha` in `[0, 1]`.
pub fn real_amplitudes(alpha: f64) -> Result<(C64, C64)> {
    check_unit("alpha", alpha)?;
    Ok((c(alpha, 0.0), c((1.0 - alpha * alpha).max(0.0).sqrt(), 0.0)))
}

/// Amplitude-damping Kraus pair `K0 = diag(1, sqrt(1-D))`, `K1 = sqrt(D)|0><1|`.
pub fn kraus_ad(d: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_unit("D", d)?;
    let k0 = ComplexMatrix::from_real_diagonal(&[1.0, (1.0 - d).sqrt()]);
    let mut k1 = ComplexMatrix::zeros(2);
    k1.set(0, 1, c(d.sqrt(), 0.0));
    Ok((k0, k1))
}

/// `|Phi><Phi|` for `|Phi> = alpha|00> + beta|11>`.
pub fn initial_state(alpha: C64, beta: C64) -> Result<DensityMatrix> {
    check_amplitudes(alpha, beta)?;
    let zero = c(0.0, 0.0);
    as_density(&ComplexMatrix::outer(&[alpha, zero, zero, beta]), &[2, 2], DEFAULT_TOL)
}

/// Applies independent damping channels `D1` on A and `D2` on B.
pub fn apply_local_channels(rho: &DensityMatrix, d1: f64, d2: f64) -> Result<DensityMatrix> {
    if rho.dims() != [2, 2] {
        return Err(Error::arg(format!(
            "local damping needs a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    let (a0, a1) = kraus_ad(d1)?;
    let (b0, b1) = kraus_ad(d2)?;
    let mut out = ComplexMatrix::zeros(4);
    for ka in [&a0, &a1] {
        for kb in [&b0, &b1] {
            out = &out + &kron(ka, kb).sandwich(rho.matrix());
        }
    }
    as_density(&out, &[2, 2], DEFAULT_TOL)
}

fn x_state(diag: [f64; 4], corner: C64, scale: f64) -> Result<DensityMatrix> {
    let mut m = ComplexMatrix::from_real_diagonal(&diag);
    m.set(0, 3, corner);
    m.set(3, 0, corner.conj());
    as_density(&m.scale_real(1.0 / scale), &[2, 2], DEFAULT_TOL)
}

/// Closed-form damped state.
pub fn rho_d(alpha: C64, beta: C64, d1: f64, d2: f64) -> Result<DensityMatrix> {
    check_amplitudes(alpha, beta)?;
    check_unit("D1", d1)?;
    check_unit("D2", d2)?;
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    let (e1, e2) = (1.0 - d1, 1.0 - d2);
    x_state(
        [a2 + d1 * d2 * b2, d1 * e2 * b2, e1 * d2 * b2, e1 * e2 * b2],
        alpha * beta.conj() * (e1 * e2).sqrt(),
        1.0,
    )
}

/// `diag(1, sqrt(1-p1)) ⊗ diag(1, sqrt(1-p2))`.
pub fn m_weak(p1: f64, p2: f64) -> Result<ComplexMatrix> {
    check_unit("p1", p1)?;
    check_unit("p2", p2)?;
    Ok(kron(
        &ComplexMatrix::from_real_diagonal(&[1.0, (1.0 - p1).sqrt()]),
        &ComplexMatrix::from_real_diagonal(&[1.0, (1.0 - p2).sqrt()]),
    ))
}

/// `diag(sqrt(1-pr1), 1) ⊗ diag(sqrt(1-pr2), 1)`.
pub fn m_rev(pr1: f64, pr2: f64) -> Result<ComplexMatrix> {
    check_unit("pr1", pr1)?;
    check_unit("pr2", pr2)?;
    Ok(kron(
        &ComplexMatrix::from_real_diagonal(&[(1.0 - pr1).sqrt(), 1.0]),
        &ComplexMatrix::from_real_diagonal(&[(1.0 - pr2).sqrt(), 1.0]),
    ))
}

/// `pr = (1 - D) p + D`.
pub fn reversal_strength(p: f64, d: f64) -> Result<f64> {
    check_unit("p", p)?;
    check_unit("D", d)?;
    Ok(((1.0 - d) * p + d).min(1.0))
}

/// Success probabilities below this are treated as a vanished state.
pub const FILTER_FLOOR: f64 = 1e-14;

/// Applies the filter `M` and renormalizes: returns `(q, M rho M^dagger / q)`.
pub fn apply_filter(rho: &DensityMatrix, filter: &ComplexMatrix) -> Result<(f64, DensityMatrix)> {
    if filter.dim() != rho.dim() {
        return Err(Error::arg(format!(
            "filter dimension {} does not match state dimension {}",
            filter.dim(),
            rho.dim()
        )));
    }
    let largest = filter
        .as_nalgebra()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max);
    if largest > 1.0 + 1e-12 {
        return Err(Error::arg(format!(
            "filter has singular value {largest} > 1"
        )));
    }
    let out = filter.sandwich(rho.matrix());
    let q = out.trace().re;
    if q < FILTER_FLOOR {
        return Err(Error::FilteredToNothing(q));
    }
    Ok((q, as_density(&out.scale_real(1.0 / q), rho.dims(), DEFAULT_TOL)?))
}

/// Closed-form protected state.
pub fn rho_r(params: &ProtocolParams) -> Result<DensityMatrix> {
    let (a2, b2) = (params.alpha.norm_sqr(), params.beta.norm_sqr());
    let (q1, q2) = (1.0 - params.p1, 1.0 - params.p2);
    let (d1, d2) = (params.d1, params.d2);
    x_state(
        [a2 + q1 * q2 * d1 * d2 * b2, q1 * d1 * b2, q2 * d2 * b2, b2],
        params.alpha * params.beta.conj(),
        params.normalization(),
    )
}

/// Protected state built step by step: weak measurement, damping, reversal.
/// Returns the overall success probability with the state.
pub fn rho_r_circuit(params: &ProtocolParams) -> Result<(f64, DensityMatrix)> {
    let rho = initial_state(params.alpha, params.beta)?;
    let (q_weak, rho) = apply_filter(&rho, &m_weak(params.p1, params.p2)?)?;
    let rho = apply_local_channels(&rho, params.d1, params.d2)?;
    let (q_rev, rho) = apply_filter(&rho, &m_rev(params.pr1(), params.pr2())?)?;
    Ok((q_weak * q_rev, rho))
}
