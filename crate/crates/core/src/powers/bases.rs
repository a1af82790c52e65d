use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ONE, ZERO};

/// A named list of vectors that should form an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub name: String,
    pub vectors: Vec<Vec<Complex64>>,
}

impl Basis {
    pub fn new(name: impl Into<String>, vectors: Vec<Vec<Complex64>>) -> Self {
        Basis {
            name: name.into(),
            vectors,
        }
    }

    /// Columns of a unitary matrix.
    pub fn from_columns(name: impl Into<String>, u: &ComplexMatrix) -> Self {
        Basis::new(name, (0..u.cols()).map(|c| u.column(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    /// ‖G − I‖_F where G is the Gram matrix; fails on ragged or short input.
    pub fn orthonormality_defect(&self) -> Option<f64> {
        let d = self.dim();
        if d == 0 || self.vectors.len() != d || self.vectors.iter().any(|v| v.len() != d) {
            return None;
        }
        let mut sq = 0.0;
        for (i, vi) in self.vectors.iter().enumerate() {
            for (j, vj) in self.vectors.iter().enumerate() {
                let ip: Complex64 = vi.iter().zip(vj).map(|(a, b)| a.conj() * b).sum();
                let target = if i == j { ONE } else { ZERO };
                sq += (ip - target).norm_sqr();
            }
        }
        Some(sq.sqrt())
    }

    pub(crate) fn validate(&self, index: usize, tol: &Tolerances) -> Result<()> {
        match self.orthonormality_defect() {
            Some(defect) if defect <= tol.num => Ok(()),
            Some(defect) => Err(Error::InvalidBasis { index, defect }),
            None => Err(Error::InvalidBasis {
                index,
                defect: f64::INFINITY,
            }),
        }
    }

    /// Same basis after applying `u` to every vector.
    pub fn transformed(&self, u: &ComplexMatrix) -> Result<Basis> {
        let vectors = self.vectors.iter().map(|v| u.apply(v)).collect::<Result<_>>()?;
        Ok(Basis::new(self.name.clone(), vectors))
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Standard basis |0⟩, …, |d−1⟩.
pub fn computational(name: &str, d: usize) -> Basis {
    let vectors = (0..d)
        .map(|k| (0..d).map(|j| if j == k { ONE } else { ZERO }).collect())
        .collect();
    Basis::new(name, vectors)
}

/// Qubit X eigenbasis (|+⟩, |−⟩).
pub fn qubit_x() -> Basis {
    let s = FRAC_1_SQRT_2;
    Basis::new("x", vec![vec![re(s), re(s)], vec![re(s), re(-s)]])
}

/// Qubit Y eigenbasis (|+i⟩, |−i⟩).
pub fn qubit_y() -> Basis {
    let s = FRAC_1_SQRT_2;
    Basis::new(
        "y",
        vec![
            vec![re(s), Complex64::new(0.0, s)],
            vec![re(s), Complex64::new(0.0, -s)],
        ],
    )
}

/// Discrete Fourier basis in dimension `d`.
pub fn fourier(name: &str, d: usize) -> Basis {
    let norm = 1.0 / (d as f64).sqrt();
    let vectors = (0..d)
        .map(|k| {
            (0..d)
                .map(|j| Complex64::from_polar(norm, 2.0 * PI * (j * k) as f64 / d as f64))
                .collect()
        })
        .collect();
    Basis::new(name, vectors)
}

fn is_odd_prime(d: usize) -> bool {
    d > 2 && (2..d).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k))
}

/// A complete set of d + 1 mutually unbiased bases for d = 2 or odd prime d.
///
/// For odd primes the non-computational bases are
/// |v_{a,m}⟩ = d^{-1/2} Σ_j ω^{a j² + m j} |j⟩ with a, m ∈ Z_d.
pub fn mutually_unbiased(d: usize) -> Option<Vec<Basis>> {
    if d == 2 {
        let mut z = computational("z", 2);
        z.name = "z".into();
        return Some(vec![z, qubit_x(), qubit_y()]);
    }
    if !is_odd_prime(d) {
        return None;
    }
    let mut out = vec![computational("mub0", d)];
    let norm = 1.0 / (d as f64).sqrt();
    for a in 0..d {
        let vectors = (0..d)
            .map(|m| {
                (0..d)
                    .map(|j| {
                        let phase = (a * j * j + m * j) % d;
                        Complex64::from_polar(norm, 2.0 * PI * phase as f64 / d as f64)
                    })
                    .collect()
            })
            .collect();
        out.push(Basis::new(format!("mub{}", a + 1), vectors));
    }
    Some(out)
}

/// The 18 rays of the Cabello–Estebaranz–García-Alcaine set in d = 4,
/// grouped as the 9 orthogonal bases. Every ray occurs in exactly two
/// bases.
pub fn cabello_bases() -> Vec<Basis> {
    const CONTEXTS: [[[i8; 4]; 4]; 9] = [
        [[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, -1, 0, 0]],
        [[0, 0, 0, 1], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, -1, 0]],
        [[1, -1, 1, -1], [1, -1, -1, 1], [1, 1, 0, 0], [0, 0, 1, 1]],
        [[1, -1, 1, -1], [1, 1, 1, 1], [1, 0, -1, 0], [0, 1, 0, -1]],
        [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1], [1, 0, 0, -1]],
        [[1, -1, -1, 1], [1, 1, 1, 1], [1, 0, 0, -1], [0, 1, -1, 0]],
        [[1, 1, -1, 1], [1, 1, 1, -1], [1, -1, 0, 0], [0, 0, 1, 1]],
        [[1, 1, -1, 1], [-1, 1, 1, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
        [[1, 1, 1, -1], [-1, 1, 1, 1], [1, 0, 0, 1], [0, 1, -1, 0]],
    ];
    CONTEXTS
        .iter()
        .enumerate()
        .map(|(k, ctx)| {
            let vectors = ctx
                .iter()
                .map(|ray| {
                    let norm = (ray.iter().map(|&x| (x as f64).powi(2)).sum::<f64>()).sqrt();
                    ray.iter().map(|&x| re(x as f64 / norm)).collect()
                })
                .collect();
            Basis::new(format!("c{}", k + 1), vectors)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_bases_are_orthonormal() {
        let tol = Tolerances::default();
        for b in [computational("z", 3), qubit_x(), qubit_y(), fourier("f", 5)] {
            b.validate(0, &tol).unwrap();
        }
        for b in cabello_bases() {
            b.validate(0, &tol).unwrap();
        }
    }

    #[test]
    fn mubs_are_unbiased() {
        for d in [2, 3, 5] {
            let bases = mutually_unbiased(d).unwrap();
            assert_eq!(bases.len(), d + 1);
            for (i, a) in bases.iter().enumerate() {
                a.validate(i, &Tolerances::default()).unwrap();
                for b in &bases[i + 1..] {
                    for u in &a.vectors {
                        for v in &b.vectors {
                            let ip: Complex64 = u.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
                            assert!((ip.norm_sqr() - 1.0 / d as f64).abs() < 1e-12);
                        }
                    }
                }
            }
        }
        assert!(mutually_unbiased(4).is_none());
        assert!(mutually_unbiased(6).is_none());
    }

    #[test]
    fn rejects_non_orthonormal() {
        let b = Basis::new("bad", vec![vec![ONE, ZERO], vec![ONE, ZERO]]);
        assert!(matches!(b.validate(3, &Tolerances::default()), Err(Error::InvalidBasis { index: 3, .. })));
        let short = Basis::new("short", vec![vec![ONE, ZERO]]);
        assert!(short.validate(0, &Tolerances::default()).is_err());
    }
}
