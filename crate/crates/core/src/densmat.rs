//! Dense complex matrices and validated density matrices.
//!
//! Subsystem ordering follows the tensor-product order: index 0 is the first
//! factor (A), index 1 the second (B). Joint basis states are enumerated
//! row-major over the factors, so `|ab>` has index `a * d_B + b`.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Invariant, Result};

pub type C64 = Complex64;

/// Default tolerance for density-matrix validation.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Eigenvalues below this are treated as exact zeros by entropy routines.
pub const EIG_ZERO: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A dense square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        ComplexMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    /// Builds a matrix from `dim * dim` entries listed row by row.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::arg(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(ComplexMatrix(DMatrix::from_row_slice(dim, dim, entries)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.0[(i, i)] = c(d, 0.0);
        }
        m
    }

    /// `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.0[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::arg(format!(
                "matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(ComplexMatrix(m))
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.0[(row, col)] = value;
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, k: C64) -> Self {
        ComplexMatrix(&self.0 * k)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(c(k, 0.0))
    }

    /// `self * x * self^dagger`.
    pub fn sandwich(&self, x: &ComplexMatrix) -> Self {
        ComplexMatrix(&self.0 * &x.0 * self.0.adjoint())
    }

    /// Largest `|M[i][j] - conj(M[j][i])|` and where it occurs.
    pub fn hermiticity_defect(&self) -> (f64, (usize, usize)) {
        let n = self.dim();
        let mut worst = (0.0, (0, 0));
        for i in 0..n {
            for j in i..n {
                let d = (self.0[(i, j)] - self.0[(j, i)].conj()).norm();
                if d > worst.0 {
                    worst = (d, (i, j));
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect().0 <= tol
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        ComplexMatrix((&self.0 + self.0.adjoint()) * c(0.5, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Tensor (Kronecker) product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `U diag(values) U^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        reconstruct(&self.vectors, &self.values)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.0.column(k).iter().copied().collect()
    }
}

fn reconstruct(vectors: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| c(v, 0.0)),
    ));
    ComplexMatrix(&vectors.0 * d * vectors.0.adjoint())
}

fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let (defect, at) = m.hermiticity_defect();
    if defect > tol {
        return Err(Error::Validation {
            invariant: Invariant::Hermiticity,
            magnitude: defect,
            location: Some(at),
        });
    }
    Ok(())
}

/// Full eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m, DEFAULT_TOL)?;
    let eig = m.hermitian_part().0.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let n = m.dim();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: ComplexMatrix(vectors),
    })
}

/// Eigenvalues only, ascending. Uses the closed form for 2x2 input.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m, DEFAULT_TOL)?;
    if m.dim() == 2 {
        let a = m.get(0, 0).re;
        let d = m.get(1, 1).re;
        let b = m.get(0, 1);
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        return Ok(vec![mean - half_gap, mean + half_gap]);
    }
    let mut vals: Vec<f64> = m
        .hermitian_part()
        .0
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Trace norm `tr sqrt(M^dagger M)`: the sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if let Ok(vals) = eigvals_hermitian(m) {
        return vals.iter().map(|v| v.abs()).sum();
    }
    m.0.singular_values().iter().sum()
}

/// A validated quantum state together with its subsystem dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `|psi><psi|` for a (not necessarily normalized) state vector.
    pub fn pure(psi: &[C64], dims: &[usize]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::arg("state vector has zero or non-finite norm"));
        }
        let normalized: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        as_density(&ComplexMatrix::outer(&normalized), dims, DEFAULT_TOL)
    }

    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        let n: usize = dims.iter().product();
        as_density(
            &ComplexMatrix::identity(n.max(1)).scale_real(1.0 / n as f64),
            dims,
            DEFAULT_TOL,
        )
    }

    /// Requires exactly two subsystems.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            &[a, b] => Ok((a, b)),
            other => Err(Error::arg(format!(
                "expected a bipartite state, got subsystem dims {other:?}"
            ))),
        }
    }

    /// Skips validation; callers guarantee the invariants hold by construction.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        DensityMatrix {
            matrix: matrix.hermitian_part(),
            dims,
        }
    }
}

/// Validates `m` as a density matrix over subsystems `dims`.
///
/// Eigenvalues in `[-tol, 0)` are clipped to zero and the trace renormalized.
/// Violations beyond `tol` produce a [`Error::Validation`] naming the failed
/// invariant and its magnitude.
pub fn as_density(m: &ComplexMatrix, dims: &[usize], tol: f64) -> Result<DensityMatrix> {
    let n = m.dim();
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != n {
        return Err(Error::arg(format!(
            "subsystem dims {dims:?} do not multiply to matrix dimension {n}"
        )));
    }
    if m.0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::arg("matrix has non-finite entries"));
    }
    check_hermitian(m, tol)?;
    let h = m.hermitian_part();
    let tr = h.trace().re;
    if (tr - 1.0).abs() > tol {
        return Err(Error::Validation {
            invariant: Invariant::Trace,
            magnitude: (tr - 1.0).abs(),
            location: None,
        });
    }
    let eig = eig_hermitian(&h)?;
    let min = eig.values[0];
    if min < -tol {
        return Err(Error::Validation {
            invariant: Invariant::Positivity,
            magnitude: -min,
            location: None,
        });
    }
    let matrix = if min < 0.0 {
        let clipped: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let renorm: Vec<f64> = clipped.iter().map(|v| v / total).collect();
        reconstruct(&eig.vectors, &renorm).hermitian_part()
    } else {
        h
    };
    Ok(DensityMatrix {
        matrix,
        dims: dims.to_vec(),
    })
}

/// Traces out every subsystem except `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: usize) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if dims.len() < 2 {
        return Err(Error::arg("partial trace needs at least two subsystems"));
    }
    if keep >= dims.len() {
        return Err(Error::arg(format!(
            "subsystem index {keep} out of range for {} subsystems",
            dims.len()
        )));
    }
    let dk = dims[keep];
    // Joint index = (left * dk + k) * right_dim + right.
    let left: usize = dims[..keep].iter().product();
    let right: usize = dims[keep + 1..].iter().product();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for l in 0..left {
                for r in 0..right {
                    let row = (l * dk + i) * right + r;
                    let col = (l * dk + j) * right + r;
                    acc += m.get(row, col);
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(out, vec![dk]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sx() -> ComplexMatrix {
        ComplexMatrix::from_row_major(2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    fn sz() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)], &[2, 2]).unwrap()
    }

    #[test]
    fn kron_identities_and_projectors() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert_eq!(
            kron(&p0, &p0),
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0])
        );
    }

    #[test]
    fn kron_flip_maps_00_to_11() {
        let xx = kron(&sx(), &sx());
        // Column 0 of X⊗X is the image of |00>.
        let image: Vec<C64> = (0..4).map(|r| xx.get(r, 0)).collect();
        assert_eq!(image, vec![c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
    }

    #[test]
    fn partial_trace_examples() {
        let zero = DensityMatrix::pure(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)], &[2, 2])
            .unwrap();
        let ra = partial_trace(&zero, 0).unwrap();
        assert!(ra.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1., 0.])) < 1e-15);

        let ra = partial_trace(&bell(), 0).unwrap();
        assert!(ra.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5])) < 1e-15);
        let rb = partial_trace(&bell(), 1).unwrap();
        assert!(rb.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5])) < 1e-15);

        assert!(matches!(partial_trace(&bell(), 2), Err(Error::InvalidArgument(_))));
        assert!(partial_trace(&ra, 0).is_err());
    }

    #[test]
    fn partial_trace_three_subsystems() {
        // |0>|+>|1>: keeping the middle factor leaves |+><+|.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = vec![c(0., 0.); 8];
        psi[0b001] = c(s, 0.);
        psi[0b011] = c(s, 0.);
        let rho = DensityMatrix::pure(&psi, &[2, 2, 2]).unwrap();
        let mid = partial_trace(&rho, 1).unwrap();
        let plus = ComplexMatrix::from_row_major(2, &[c(0.5, 0.); 4]).unwrap();
        assert!(mid.matrix().max_abs_diff(&plus) < 1e-15);
    }

    #[test]
    fn eig_examples() {
        let e = eig_hermitian(&ComplexMatrix::from_real_diagonal(&[3.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
        let e = eig_hermitian(&sx()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let e = eig_hermitian(bell().matrix()).unwrap();
        for (got, want) in e.values.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(e.reconstruct().max_abs_diff(bell().matrix()) < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_major(2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)])
            .unwrap();
        let err = eig_hermitian(&m).unwrap_err();
        assert_eq!(err.invariant(), Some(Invariant::Hermiticity));
    }

    #[test]
    fn closed_form_2x2_eigenvalues_match_general_path() {
        let m = ComplexMatrix::from_row_major(2, &[c(0.3, 0.), c(0.1, -0.2), c(0.1, 0.2), c(-0.7, 0.)])
            .unwrap();
        let fast = eigvals_hermitian(&m).unwrap();
        let full = eig_hermitian(&m).unwrap().values;
        assert!((fast[0] - full[0]).abs() < 1e-14 && (fast[1] - full[1]).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::identity(4)) - 4.0).abs() < 1e-14);
        assert!((trace_norm(&sz()) - 2.0).abs() < 1e-14);
        let dephased = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        let diff = bell().matrix() - &dephased;
        assert!((trace_norm(&diff) - 1.0).abs() < 1e-14);
        // Non-Hermitian goes through singular values: |0><1| has one singular value 1.
        let n = ComplexMatrix::from_row_major(2, &[c(0., 0.), c(2., 0.), c(0., 0.), c(0., 0.)])
            .unwrap();
        assert!((trace_norm(&n) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn as_density_examples() {
        assert!(as_density(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5]), &[2], 1e-10).is_ok());

        let err = as_density(&ComplexMatrix::from_real_diagonal(&[1.5, -0.5]), &[2], 1e-10)
            .unwrap_err();
        assert_eq!(err.invariant(), Some(Invariant::Positivity));
        assert!(err.to_string().contains("positivity"));

        let rho = as_density(
            &ComplexMatrix::from_real_diagonal(&[1.0 + 5e-11, -5e-11]),
            &[2],
            1e-10,
        )
        .unwrap();
        assert_eq!(rho.matrix().get(1, 1).re, 0.0);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn as_density_reports_trace_and_hermiticity() {
        let err = as_density(&ComplexMatrix::from_real_diagonal(&[0.45, 0.45]), &[2], 1e-10)
            .unwrap_err();
        assert_eq!(err.invariant(), Some(Invariant::Trace));
        let m = ComplexMatrix::from_row_major(2, &[c(0.5, 0.), c(0.1, 0.), c(0.2, 0.), c(0.5, 0.)])
            .unwrap();
        match as_density(&m, &[2], 1e-10).unwrap_err() {
            Error::Validation { invariant, location, magnitude } => {
                assert_eq!(invariant, Invariant::Hermiticity);
                assert_eq!(location, Some((0, 1)));
                assert!((magnitude - 0.1).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(as_density(&ComplexMatrix::identity(4).scale_real(0.25), &[2, 3], 1e-10).is_err());
    }
}
