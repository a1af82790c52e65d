//! Named states and seeded random states.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::Tolerances;
use crate::error::Result;
use crate::linalg::{ComplexMatrix, DensityMatrix, ONE, ZERO};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn bell_phi_plus() -> Vec<Complex64> {
    vec![re(FRAC_1_SQRT_2), ZERO, ZERO, re(FRAC_1_SQRT_2)]
}

pub fn bell_phi_minus() -> Vec<Complex64> {
    vec![re(FRAC_1_SQRT_2), ZERO, ZERO, re(-FRAC_1_SQRT_2)]
}

pub fn bell_psi_plus() -> Vec<Complex64> {
    vec![ZERO, re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2), ZERO]
}

pub fn bell_psi_minus() -> Vec<Complex64> {
    vec![ZERO, re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2), ZERO]
}

/// v |Ψ−⟩⟨Ψ−| + (1 − v) I/4.
pub fn werner(visibility: f64, tol: &Tolerances) -> Result<DensityMatrix> {
    let psi = bell_psi_minus();
    let singlet = ComplexMatrix::outer(&psi, &psi);
    let noise = ComplexMatrix::identity(4).scale(re((1.0 - visibility) / 4.0));
    DensityMatrix::from_matrix(&singlet.scale(re(visibility)) + &noise, tol)
}

/// Σ_k (1/n) |kk⟩⟨kk|: two dice that always show the same face.
pub fn glued_dice(faces: usize, tol: &Tolerances) -> Result<DensityMatrix> {
    let mut diag = vec![0.0; faces * faces];
    for k in 0..faces {
        diag[k * faces + k] = 1.0 / faces as f64;
    }
    DensityMatrix::from_matrix(ComplexMatrix::from_diagonal(&diag), tol)
}

pub fn qubit_ket(name: &str) -> Option<Vec<Complex64>> {
    let s = FRAC_1_SQRT_2;
    Some(match name {
        "zero" => vec![ONE, ZERO],
        "one" => vec![ZERO, ONE],
        "plus" => vec![re(s), re(s)],
        "minus" => vec![re(s), re(-s)],
        "plus_i" => vec![re(s), Complex64::new(0.0, s)],
        "minus_i" => vec![re(s), Complex64::new(0.0, -s)],
        _ => return None,
    })
}

fn gaussian_vector(len: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let a: f64 = StandardNormal.sample(rng);
            let b: f64 = StandardNormal.sample(rng);
            Complex64::new(a, b)
        })
        .collect()
}

/// Haar-random unit vector.
pub fn random_pure(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = gaussian_vector(dim, &mut rng);
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Random full-rank density matrix G G† / Tr(G G†) from a Ginibre G.
pub fn random_density(dim: usize, seed: u64, tol: &Tolerances) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::new(dim, dim, gaussian_vector(dim * dim, &mut rng))?;
    let ggt = &g * &g.adjoint();
    let tr = ggt.trace().re;
    let m = ggt.scale(re(1.0 / tr));
    // exact Hermiticity after rounding
    let sym = (&m + &m.adjoint()).scale(re(0.5));
    DensityMatrix::from_matrix(sym, tol)
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = gaussian_vector(dim, &mut rng);
        for w in &cols {
            let ip: Complex64 = w.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(w) {
                *x -= ip * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            u[(r, c)] = *z;
        }
    }
    u
}
