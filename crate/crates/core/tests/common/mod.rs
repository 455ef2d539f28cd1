#![allow(dead_code)]

use qdiscord::densmat::{as_density, c, kron, ComplexMatrix, DensityMatrix, C64};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

pub fn bell() -> DensityMatrix {
    let s = FRAC_1_SQRT_2;
    DensityMatrix::pure(&[c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)], &[2, 2]).unwrap()
}

pub fn classical() -> DensityMatrix {
    as_density(&ComplexMatrix::from_real_diagonal(&[0.5, 0., 0., 0.5]), &[2, 2], 1e-10).unwrap()
}

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    c(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Ginibre-ensemble mixed state of full rank.
pub fn random_density<R: Rng>(rng: &mut R, dims: &[usize]) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g: Vec<C64> = (0..n * n).map(|_| gaussian(rng)).collect();
    let g = ComplexMatrix::from_row_major(n, &g).unwrap();
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    as_density(&w.scale_real(1.0 / tr), dims, 1e-10).unwrap()
}

pub fn random_qubit_state<R: Rng>(rng: &mut R) -> ComplexMatrix {
    random_density(rng, &[2]).into_matrix()
}

pub fn random_product<R: Rng>(rng: &mut R) -> DensityMatrix {
    let m = kron(&random_qubit_state(rng), &random_qubit_state(rng));
    as_density(&m, &[2, 2], 1e-10).unwrap()
}

/// Random two-qubit X state with complex coherences.
pub fn random_x_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    let mut p: Vec<f64> = (0..4).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    let mut m = ComplexMatrix::from_real_diagonal(&p);
    let r14 = rng.random_range(0.0..1.0) * (p[0] * p[3]).sqrt();
    let r23 = rng.random_range(0.0..1.0) * (p[1] * p[2]).sqrt();
    let c14 = C64::from_polar(r14, rng.random_range(0.0..2.0 * PI));
    let c23 = C64::from_polar(r23, rng.random_range(0.0..2.0 * PI));
    m.set(0, 3, c14);
    m.set(3, 0, c14.conj());
    m.set(1, 2, c23);
    m.set(2, 1, c23.conj());
    as_density(&m, &[2, 2], 1e-10).unwrap()
}

/// Haar-random 2x2 unitary from a random unit quaternion and global phase.
pub fn random_unitary2<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let q: Vec<f64> = (0..4).map(|_| StandardNormal.sample(rng)).collect();
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b, cc, d) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
    let phase = C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    let u = ComplexMatrix::from_row_major(2, &[c(a, b), c(cc, d), c(-cc, d), c(a, -b)]).unwrap();
    u.scale(phase)
}

pub fn rotate_locally(rho: &DensityMatrix, ua: &ComplexMatrix, ub: &ComplexMatrix) -> DensityMatrix {
    let u = kron(ua, ub);
    as_density(&u.sandwich(rho.matrix()), rho.dims(), 1e-10).unwrap()
}

/// Two-qubit conditional entropy for a measurement of B along the Bloch axis
/// `n`, built from explicit projectors `(I ± n·sigma)/2` and a hand-written
/// partial trace. Independent of the library's rotation and ensemble code.
pub fn oracle_conditional_entropy(rho: &ComplexMatrix, n: [f64; 3]) -> f64 {
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let (x, y, z) = (sign * n[0], sign * n[1], sign * n[2]);
        // P = (I + x X + y Y + z Z) / 2
        let p = [
            [c((1.0 + z) / 2.0, 0.0), c(x / 2.0, -y / 2.0)],
            [c(x / 2.0, y / 2.0), c((1.0 - z) / 2.0, 0.0)],
        ];
        // sigma_A[a][a2] = sum_{b,b2} rho[(a,b),(a2,b2)] * P[b2][b]
        let mut s = [[c(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for a2 in 0..2 {
                for b in 0..2 {
                    for b2 in 0..2 {
                        s[a][a2] += rho.get(2 * a + b, 2 * a2 + b2) * p[b2][b];
                    }
                }
            }
        }
        let prob = (s[0][0] + s[1][1]).re;
        if prob < 1e-12 {
            continue;
        }
        let (a, d, off) = (s[0][0].re / prob, s[1][1].re / prob, s[0][1].norm() / prob);
        let mean = (a + d) / 2.0;
        let gap = (((a - d) / 2.0).powi(2) + off * off).sqrt();
        for lam in [mean + gap, mean - gap] {
            if lam > 1e-12 {
                total -= prob * lam * lam.log2();
            }
        }
    }
    total
}

pub fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|x| -x * x.log2()).sum()
}

pub fn eigen_entropy(m: &ComplexMatrix) -> f64 {
    let vals = qdiscord::densmat::eig_hermitian(m).unwrap().values;
    entropy_bits(&vals.iter().map(|v| v.max(0.0)).collect::<Vec<_>>())
}

/// Brute-force entropic discord with B measured, over Bloch axes on the
/// upper hemisphere at `step_deg` resolution (outcome swap covers the rest).
pub fn oracle_entropic_discord(rho: &DensityMatrix, step_deg: f64) -> f64 {
    use rayon::prelude::*;
    let m = rho.matrix();
    let n_polar = (90.0 / step_deg).round() as usize;
    let n_azimuth = (360.0 / step_deg).round() as usize;
    let min_cond = (0..=n_polar)
        .into_par_iter()
        .map(|i| {
            let theta = (i as f64 * step_deg).to_radians();
            (0..n_azimuth)
                .map(|j| {
                    let phi = (j as f64 * step_deg).to_radians();
                    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
                    oracle_conditional_entropy(m, n)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    // S(rho_B): trace out A by hand.
    let mut rb = ComplexMatrix::zeros(2);
    for b in 0..2 {
        for b2 in 0..2 {
            rb.set(b, b2, m.get(b, b2) + m.get(2 + b, 2 + b2));
        }
    }
    eigen_entropy(&rb) - eigen_entropy(m) + min_cond
}
