//! Measurement parameterization and basis optimizers.
//!
//! Two-level systems are searched on a deterministic `(theta, phi)` grid with
//! nested zoom refinement. Higher-dimensional measured subsystems use Monte
//! Carlo sampling of generalized Bloch vectors: each sampled state that
//! passes the positivity filter induces a projective measurement through its
//! eigenbasis.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::densmat::{c, eig_hermitian, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Tolerance for projector invariants.
pub const PROJECTOR_TOL: f64 = 1e-10;

/// Rejection budget of the qudit sampler before giving up.
pub const MAX_REJECTIONS: u64 = 1_000_000;

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_major(2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_major(2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// Computational-basis projectors `(|0><0|, |1><1|)`.
pub fn projectors_qubit() -> (ComplexMatrix, ComplexMatrix) {
    (
        ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
        ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
    )
}

/// Unit Bloch axis `(sin t cos p, sin t sin p, cos t)`.
pub fn bloch_axis(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    let eps = 1e-12;
    if !(-eps..=PI + eps).contains(&theta) || !(-eps..=2.0 * PI + eps).contains(&phi) {
        return Err(Error::arg(format!(
            "angles out of range: theta={theta} must lie in [0, pi], phi={phi} in [0, 2pi]"
        )));
    }
    Ok(())
}

/// `V(theta, phi) = (I - i a·sigma) / sqrt(2)`, a quarter-turn about the axis `a`.
pub fn rotation(theta: f64, phi: f64) -> Result<ComplexMatrix> {
    check_angles(theta, phi)?;
    let [ax, ay, az] = bloch_axis(theta, phi);
    let s = FRAC_1_SQRT_2;
    // I - i(ax X + ay Y + az Z)
    let entries = [
        c(s, -s * az),
        c(-s * ay, -s * ax),
        c(s * ay, -s * ax),
        c(s, s * az),
    ];
    ComplexMatrix::from_row_major(2, &entries)
}

/// A complete set of orthogonal projectors on one subsystem.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    projectors: Vec<ComplexMatrix>,
    angles: Option<(f64, f64)>,
}

impl MeasurementBasis {
    /// Validates Hermiticity, idempotence, mutual orthogonality and completeness.
    pub fn from_projectors(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        validate_projectors(&projectors)?;
        Ok(MeasurementBasis {
            projectors,
            angles: None,
        })
    }

    /// One rank-1 projector per vector; the vectors must be orthonormal.
    pub fn from_orthonormal_vectors(vectors: &[Vec<C64>]) -> Result<Self> {
        let d = vectors.len();
        if d == 0 || vectors.iter().any(|v| v.len() != d) {
            return Err(Error::arg("need d vectors of length d"));
        }
        Self::from_projectors(vectors.iter().map(|v| ComplexMatrix::outer(v)).collect())
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    /// `(theta, phi)` when this basis came from the qubit parameterization.
    pub fn angles(&self) -> Option<(f64, f64)> {
        self.angles
    }

    /// Largest deviation from the projector invariants.
    pub fn invariant_defect(&self) -> f64 {
        projector_defect(&self.projectors)
    }
}

fn projector_defect(projectors: &[ComplexMatrix]) -> f64 {
    let d = projectors[0].dim();
    let mut worst: f64 = 0.0;
    let mut sum = ComplexMatrix::zeros(d);
    for (i, p) in projectors.iter().enumerate() {
        worst = worst.max(p.hermiticity_defect().0);
        worst = worst.max((p * p).max_abs_diff(p));
        for q in &projectors[i + 1..] {
            worst = worst.max((p * q).max_abs_diff(&ComplexMatrix::zeros(d)));
        }
        sum = &sum + p;
    }
    worst.max(sum.max_abs_diff(&ComplexMatrix::identity(d)))
}

fn validate_projectors(projectors: &[ComplexMatrix]) -> Result<()> {
    if projectors.is_empty() {
        return Err(Error::arg("measurement needs at least one projector"));
    }
    let d = projectors[0].dim();
    if projectors.iter().any(|p| p.dim() != d) {
        return Err(Error::arg("projectors have mismatched dimensions"));
    }
    let defect = projector_defect(projectors);
    if defect > PROJECTOR_TOL {
        return Err(Error::arg(format!(
            "projectors are not a complete orthogonal set (defect {defect:e})"
        )));
    }
    Ok(())
}

/// Rotated qubit measurement `B^i = V^dagger Pi_i V`.
pub fn measurement_qubit(theta: f64, phi: f64) -> Result<MeasurementBasis> {
    let v = rotation(theta, phi)?;
    let vd = v.adjoint();
    let (p0, p1) = projectors_qubit();
    let projectors = vec![&(&vd * &p0) * &v, &(&vd * &p1) * &v];
    validate_projectors(&projectors)?;
    Ok(MeasurementBasis {
        projectors,
        angles: Some((theta, phi)),
    })
}

/// Generalized Gell-Mann matrices of SU(d), normalized to `Tr(L_i L_j) = 2 delta_ij`.
#[derive(Clone, Debug)]
pub struct GellMannBasis {
    dim: usize,
    pub symmetric: Vec<ComplexMatrix>,
    pub antisymmetric: Vec<ComplexMatrix>,
    pub diagonal: Vec<ComplexMatrix>,
}

impl GellMannBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Symmetric, then antisymmetric, then diagonal.
    pub fn iter(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.symmetric
            .iter()
            .chain(&self.antisymmetric)
            .chain(&self.diagonal)
    }

    pub fn len(&self) -> usize {
        self.dim * self.dim - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(I + sqrt(d) b·L) / d`. Hermitian with unit trace but not necessarily positive.
    pub fn state(&self, b: &BlochVector) -> Result<ComplexMatrix> {
        if b.dim != self.dim {
            return Err(Error::arg(format!(
                "Bloch vector of dimension {} used with SU({}) basis",
                b.dim, self.dim
            )));
        }
        let d = self.dim as f64;
        let mut acc = ComplexMatrix::identity(self.dim);
        for (coef, lambda) in b.components.iter().zip(self.iter()) {
            acc = &acc + &lambda.scale_real(d.sqrt() * coef);
        }
        Ok(acc.scale_real(1.0 / d))
    }
}

pub fn gellmann(d: usize) -> Result<GellMannBasis> {
    if d < 2 {
        return Err(Error::arg(format!("Gell-Mann basis needs d >= 2, got {d}")));
    }
    let unit = |j: usize, k: usize, z: C64| {
        let mut m = ComplexMatrix::zeros(d);
        m.set(j, k, z);
        m
    };
    let mut symmetric = Vec::with_capacity(d * (d - 1) / 2);
    let mut antisymmetric = Vec::with_capacity(d * (d - 1) / 2);
    for j in 0..d {
        for k in j + 1..d {
            symmetric.push(&unit(j, k, c(1., 0.)) + &unit(k, j, c(1., 0.)));
            antisymmetric.push(&unit(j, k, c(0., -1.)) + &unit(k, j, c(0., 1.)));
        }
    }
    let diagonal = (1..d)
        .map(|l| {
            let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
            let mut diag = vec![0.0; d];
            diag[..l].iter_mut().for_each(|x| *x = norm);
            diag[l] = -(l as f64) * norm;
            ComplexMatrix::from_real_diagonal(&diag)
        })
        .collect();
    Ok(GellMannBasis {
        dim: d,
        symmetric,
        antisymmetric,
        diagonal,
    })
}

/// Real coefficients of a state in the Gell-Mann expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    dim: usize,
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if dim < 2 || components.len() != dim * dim - 1 {
            return Err(Error::arg(format!(
                "Bloch vector for d={dim} needs {} components, got {}",
                (dim * dim).saturating_sub(1),
                components.len()
            )));
        }
        Ok(BlochVector { dim, components })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; (dim * dim).saturating_sub(1)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Draws `b = sqrt(r / |nu|^2) nu` with `nu_i ~ U[-1, 1]` and `r ~ U[0, 1]`,
/// so that `|b|^2 = r`.
pub fn sample_bloch<R: Rng + ?Sized>(d: usize, rng: &mut R) -> BlochVector {
    assert!(d >= 2, "Bloch sampling needs d >= 2");
    let n = d * d - 1;
    loop {
        let nu: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let r: f64 = rng.random_range(0.0..=1.0);
        let norm_sq: f64 = nu.iter().map(|x| x * x).sum();
        if norm_sq == 0.0 {
            continue;
        }
        let scale = (r / norm_sq).sqrt();
        return BlochVector {
            dim: d,
            components: nu.into_iter().map(|x| x * scale).collect(),
        };
    }
}

/// `(I + sqrt(d) b·L) / d` over a freshly built Gell-Mann basis.
pub fn bloch_to_state(b: &BlochVector) -> ComplexMatrix {
    gellmann(b.dim)
        .and_then(|g| g.state(b))
        .expect("Bloch vector dimension is validated on construction")
}

/// A state accepted by the positivity filter and the measurement it induces.
#[derive(Clone, Debug)]
pub struct QuditSample {
    pub bloch: BlochVector,
    pub state: ComplexMatrix,
    pub min_eigenvalue: f64,
    pub basis: MeasurementBasis,
    /// Draws rejected before this one was accepted.
    pub rejections: u64,
}

/// Positivity-filtered Bloch-vector sampler with a cached Gell-Mann basis.
#[derive(Clone, Debug)]
pub struct QuditSampler {
    basis: GellMannBasis,
}

impl QuditSampler {
    pub fn new(d: usize) -> Result<Self> {
        Ok(QuditSampler { basis: gellmann(d)? })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<QuditSample> {
        let mut rejections = 0u64;
        loop {
            let bloch = sample_bloch(self.basis.dim, rng);
            let state = self.basis.state(&bloch)?;
            let eig = eig_hermitian(&state)?;
            if eig.values[0] >= -PROJECTOR_TOL {
                let vectors: Vec<Vec<C64>> =
                    (0..self.basis.dim).map(|k| eig.vector(k)).collect();
                let basis = MeasurementBasis::from_orthonormal_vectors(&vectors)?;
                return Ok(QuditSample {
                    bloch,
                    state,
                    min_eigenvalue: eig.values[0],
                    basis,
                    rejections,
                });
            }
            rejections += 1;
            if rejections > MAX_REJECTIONS {
                return Err(Error::Sampling(format!(
                    "positivity filter rejected more than {MAX_REJECTIONS} draws at d={}",
                    self.basis.dim
                )));
            }
        }
    }
}

/// Samples a positive Bloch state and returns its eigenbasis as a measurement.
pub fn sample_basis_qudit<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<MeasurementBasis> {
    Ok(QuditSampler::new(d)?.sample(rng)?.basis)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    Grid,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub method: SearchMethod,
    pub grid_steps_theta: usize,
    pub grid_steps_phi: usize,
    pub refine_levels: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            method: SearchMethod::Grid,
            grid_steps_theta: 181,
            grid_steps_phi: 361,
            refine_levels: 2,
            samples: 100_000,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        SearchConfig {
            method: SearchMethod::MonteCarlo,
            samples,
            seed,
            ..Default::default()
        }
    }

    /// Grid with `steps` points over theta in `[0, pi]` and `2 * steps - 1` over phi.
    pub fn grid(steps: usize, refine_levels: usize) -> Self {
        SearchConfig {
            method: SearchMethod::Grid,
            grid_steps_theta: steps,
            grid_steps_phi: (2 * steps).saturating_sub(1).max(1),
            refine_levels,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            SearchMethod::Grid if self.grid_steps_theta == 0 || self.grid_steps_phi == 0 => {
                Err(Error::arg("grid search needs at least one step per axis"))
            }
            SearchMethod::MonteCarlo if self.samples == 0 => {
                Err(Error::arg("Monte Carlo search needs at least one sample"))
            }
            _ => Ok(()),
        }
    }
}

/// Result of [`grid_minimize`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMinimum {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    pub evaluations: usize,
}

fn axis_points(n: usize, upper: f64) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|i| upper * i as f64 / (n - 1) as f64)
        .collect()
}

fn zoom_points(center: f64, step: f64, upper: f64) -> Vec<f64> {
    (-10i32..=10)
        .map(|k| if k == 0 { center } else { center + k as f64 * step })
        .filter(|&x| (0.0..=upper).contains(&x))
        .collect()
}

/// Lexicographic on (value, theta, phi).
fn better(a: (f64, f64, f64), b: (f64, f64, f64)) -> bool {
    a.0.total_cmp(&b.0)
        .then(a.1.total_cmp(&b.1))
        .then(a.2.total_cmp(&b.2))
        .is_lt()
}

fn scan<F>(objective: &F, thetas: &[f64], phis: &[f64]) -> Result<(f64, f64, f64)>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let values: Vec<Result<f64>> = thetas
        .par_iter()
        .flat_map_iter(|&t| phis.iter().map(move |&p| (t, p)))
        .map(|(t, p)| objective(t, p))
        .collect();
    let mut best: Option<(f64, f64, f64)> = None;
    for (idx, v) in values.into_iter().enumerate() {
        let (t, p) = (thetas[idx / phis.len()], phis[idx % phis.len()]);
        let v = v?;
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective {
                theta: t,
                phi: p,
                value: v,
            });
        }
        if best.is_none_or(|b| better((v, t, p), b)) {
            best = Some((v, t, p));
        }
    }
    Ok(best.expect("grid is non-empty"))
}

/// Minimizes `objective` over `[0, pi] x [0, 2pi]`.
///
/// A coarse grid scan is followed by `refine_levels` zooms, each laying a
/// 21x21 grid at one tenth of the previous spacing centred on the incumbent.
/// The incumbent is always re-evaluated, so refinement never worsens the
/// result. Ties go to the smallest theta, then the smallest phi.
pub fn grid_minimize<F>(objective: F, cfg: &SearchConfig) -> Result<GridMinimum>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let thetas = axis_points(cfg.grid_steps_theta, PI);
    let phis = axis_points(cfg.grid_steps_phi, 2.0 * PI);
    let mut evaluations = thetas.len() * phis.len();
    let (mut value, mut theta, mut phi) = scan(&objective, &thetas, &phis)?;

    let mut step_t = if cfg.grid_steps_theta > 1 { PI / (cfg.grid_steps_theta - 1) as f64 } else { PI };
    let mut step_p = if cfg.grid_steps_phi > 1 {
        2.0 * PI / (cfg.grid_steps_phi - 1) as f64
    } else {
        2.0 * PI
    };
    for _ in 0..cfg.refine_levels {
        step_t /= 10.0;
        step_p /= 10.0;
        let ts = zoom_points(theta, step_t, PI);
        let ps = zoom_points(phi, step_p, 2.0 * PI);
        evaluations += ts.len() * ps.len();
        (value, theta, phi) = scan(&objective, &ts, &ps)?;
    }
    Ok(GridMinimum {
        value,
        theta,
        phi,
        evaluations,
    })
}

/// Per-sample seed, independent of evaluation order.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(splitmix(seed) ^ index)
}

/// The RNG used for sample `index` of a Monte Carlo run.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sample_seed(seed, index))
}

/// Result of [`mc_minimize`].
#[derive(Clone, Debug)]
pub struct McMinimum {
    pub value: f64,
    pub basis: MeasurementBasis,
    pub sample_index: usize,
    pub evaluations: usize,
}

/// Minimizes `objective` over `cfg.samples` bases drawn by [`QuditSampler`].
/// Ties go to the lowest sample index.
pub fn mc_minimize<F>(objective: F, d: usize, cfg: &SearchConfig) -> Result<McMinimum>
where
    F: Fn(&MeasurementBasis) -> Result<f64> + Sync,
{
    if cfg.samples == 0 {
        return Err(Error::arg("Monte Carlo search needs at least one sample"));
    }
    let sampler = QuditSampler::new(d)?;
    let draw = |i: usize| -> Result<MeasurementBasis> {
        Ok(sampler.sample(&mut sample_rng(cfg.seed, i as u64))?.basis)
    };
    let values: Vec<Result<f64>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| objective(&draw(i)?))
        .collect();
    let mut best: Option<(f64, usize)> = None;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if !v.is_finite() {
            return Err(Error::Numerical(format!(
                "objective is not finite ({v}) at sample {i}"
            )));
        }
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, i));
        }
    }
    let (value, sample_index) = best.expect("at least one sample");
    Ok(McMinimum {
        value,
        basis: draw(sample_index)?,
        sample_index,
        evaluations: cfg.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn computational_projectors() {
        let (p0, p1) = projectors_qubit();
        assert_eq!(&p0 + &p1, ComplexMatrix::identity(2));
        assert_eq!(&p0 * &p1, ComplexMatrix::zeros(2));
        assert_eq!(&p0 * &p0, p0);
    }

    #[test]
    fn rotation_substitutions() {
        let s = FRAC_1_SQRT_2;
        let i2 = ComplexMatrix::identity(2);
        let expect = |pauli: ComplexMatrix| (&i2 - &pauli.scale(c(0., 1.))).scale_real(s);
        assert!(rotation(0.0, 0.0).unwrap().max_abs_diff(&expect(pauli_z())) < 1e-15);
        assert!(rotation(PI / 2.0, 0.0).unwrap().max_abs_diff(&expect(pauli_x())) < 1e-15);
    }

    #[test]
    fn rotation_rejects_out_of_range() {
        assert!(rotation(-0.1, 0.0).is_err());
        assert!(rotation(0.0, 7.0).is_err());
        assert!(measurement_qubit(4.0, 0.0).is_err());
    }

    #[test]
    fn identity_angles_give_computational_basis() {
        let b = measurement_qubit(0.0, 0.0).unwrap();
        let (p0, p1) = projectors_qubit();
        assert!(b.projectors()[0].max_abs_diff(&p0) < 1e-15);
        assert!(b.projectors()[1].max_abs_diff(&p1) < 1e-15);
        assert_eq!(b.angles(), Some((0.0, 0.0)));
    }

    #[test]
    fn rejects_incomplete_projector_sets() {
        let (p0, _) = projectors_qubit();
        assert!(MeasurementBasis::from_projectors(vec![p0.clone()]).is_err());
        assert!(MeasurementBasis::from_projectors(vec![p0.clone(), p0]).is_err());
        let s = FRAC_1_SQRT_2;
        let skew = vec![
            vec![c(1., 0.), c(0., 0.)],
            vec![c(s, 0.), c(s, 0.)],
        ];
        assert!(MeasurementBasis::from_orthonormal_vectors(&skew).is_err());
    }

    #[test]
    fn gellmann_two_is_pauli() {
        let g = gellmann(2).unwrap();
        let all: Vec<_> = g.iter().cloned().collect();
        assert_eq!(all, vec![pauli_x(), pauli_y(), pauli_z()]);
    }

    #[test]
    fn gellmann_three_counts() {
        let g = gellmann(3).unwrap();
        assert_eq!(g.symmetric.len(), 3);
        assert_eq!(g.antisymmetric.len(), 3);
        assert_eq!(g.diagonal.len(), 2);
        assert_eq!(g.iter().count(), 8);
        assert!(gellmann(1).is_err());
    }

    #[test]
    fn zero_bloch_vector_is_maximally_mixed() {
        for d in 2..=4 {
            let v = bloch_to_state(&BlochVector::zero(d).unwrap());
            let mixed = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
            assert!(v.max_abs_diff(&mixed) < 1e-15);
        }
    }

    #[test]
    fn qubit_bloch_form() {
        // Components scaled by 1/sqrt(2) reproduce (I + n·sigma)/2.
        let n = [0.48, -0.6, 0.64];
        let b = BlochVector::new(2, n.iter().map(|x| x * FRAC_1_SQRT_2).collect()).unwrap();
        let v = bloch_to_state(&b);
        let expect = (&(&(&ComplexMatrix::identity(2) + &pauli_x().scale_real(n[0]))
            + &pauli_y().scale_real(n[1]))
            + &pauli_z().scale_real(n[2]))
            .scale_real(0.5);
        assert!(v.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn positivity_filter_flags_long_vectors() {
        // |b| = 1 at d=2 gives eigenvalues (1 ± sqrt 2)/2.
        let b = BlochVector::new(2, vec![0.0, 0.0, 1.0]).unwrap();
        let eig = eig_hermitian(&bloch_to_state(&b)).unwrap();
        assert!(eig.values[0] < -0.2);
    }

    #[test]
    fn bloch_sampling_is_seeded() {
        let a = sample_bloch(3, &mut sample_rng(7, 0));
        let b = sample_bloch(3, &mut sample_rng(7, 0));
        assert_eq!(a, b);
        assert_ne!(a, sample_bloch(3, &mut sample_rng(7, 1)));
        assert!(a.norm() <= 1.0);
    }

    #[test]
    fn qubit_sample_is_projective_pair() {
        let basis = sample_basis_qudit(2, &mut sample_rng(1, 3)).unwrap();
        assert_eq!(basis.projectors().len(), 2);
        assert!(basis.invariant_defect() < 1e-10);
    }

    #[test]
    fn grid_minimize_examples() {
        let cfg = SearchConfig::default();
        let m = grid_minimize(|t, _| Ok(t.cos()), &cfg).unwrap();
        assert!((m.value + 1.0).abs() < 1e-15 && (m.theta - PI).abs() < 1e-12);

        let m = grid_minimize(|_, _| Ok(0.5), &cfg).unwrap();
        assert_eq!((m.value, m.theta, m.phi), (0.5, 0.0, 0.0));

        let m = grid_minimize(|t, p| Ok(t.sin().powi(2) * (1.0 + p.cos()) / 2.0), &cfg).unwrap();
        assert_eq!((m.value, m.theta), (0.0, 0.0));
        assert_eq!(m.evaluations, 181 * 361 + 2 * 11 * 11);
    }

    #[test]
    fn grid_minimize_reports_non_finite() {
        let err = grid_minimize(|t, _| Ok(if t > 1.0 { f64::NAN } else { 0.0 }), &SearchConfig::default())
            .unwrap_err();
        assert!(matches!(err, Error::NonFiniteObjective { theta, .. } if theta > 1.0));
        assert!(grid_minimize(|_, _| Ok(0.0), &SearchConfig::grid(0, 0)).is_err());
    }

    #[test]
    fn refinement_reaches_off_grid_minimum() {
        let target = 1.234_567;
        let f = |t: f64, _| Ok((t - target).abs());
        let coarse = grid_minimize(f, &SearchConfig::grid(181, 0)).unwrap();
        let fine = grid_minimize(f, &SearchConfig::grid(181, 4)).unwrap();
        assert!(coarse.value < (PI / 180.0) / 2.0 + 1e-12);
        assert!(fine.value < 1e-6 && fine.value <= coarse.value);
    }

    #[test]
    fn mc_constant_objective() {
        let m = mc_minimize(|_| Ok(0.25), 3, &SearchConfig::monte_carlo(50, 11)).unwrap();
        assert_eq!((m.value, m.sample_index, m.evaluations), (0.25, 0, 50));
        assert!(mc_minimize(|_| Ok(0.0), 2, &SearchConfig::monte_carlo(0, 1)).is_err());
    }

    #[test]
    fn sample_seeds_differ() {
        assert_ne!(sample_seed(0, 0), sample_seed(0, 1));
        assert_ne!(sample_seed(0, 1), sample_seed(1, 0));
    }
}
