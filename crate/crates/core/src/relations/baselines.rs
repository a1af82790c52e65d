//! Orthodox separability baselines used for cross-validation only.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{eigen_hermitian, partial_transpose, singular_values, svd, ComplexMatrix, DensityMatrix, HermitianOperator};

fn coefficient_matrix(psi: &[Complex64], (da, db): (usize, usize), tol: &Tolerances) -> Result<ComplexMatrix> {
    if da == 0 || db == 0 || da * db != psi.len() {
        return Err(Error::Dimension(format!(
            "state of length {} does not factor as ({da}, {db})",
            psi.len()
        )));
    }
    let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > tol.num {
        return Err(Error::InvalidState(format!("state vector has squared norm {norm_sq}")));
    }
    ComplexMatrix::new(da, db, psi.to_vec())
}

/// Number of Schmidt coefficients above `tol.schmidt`.
pub fn schmidt_rank(psi: &[Complex64], dims: (usize, usize), tol: &Tolerances) -> Result<usize> {
    let c = coefficient_matrix(psi, dims, tol)?;
    Ok(singular_values(&c)?.into_iter().filter(|&s| s > tol.schmidt).count())
}

/// Schmidt decomposition ψ = Σ_k s_k |u_k⟩|v_k⟩: coefficients and the
/// local bases as columns (full bases, padded beyond the rank).
pub fn schmidt_decomposition(
    psi: &[Complex64],
    dims: (usize, usize),
    tol: &Tolerances,
) -> Result<(Vec<f64>, ComplexMatrix, ComplexMatrix)> {
    let (da, db) = dims;
    let c = coefficient_matrix(psi, dims, tol)?;
    // Pad to square so U and V come out as full unitaries.
    let d = da.max(db);
    let mut padded = ComplexMatrix::zeros(d, d);
    for i in 0..da {
        for j in 0..db {
            padded[(i, j)] = c[(i, j)];
        }
    }
    let (u, s, v) = svd(&padded)?;
    // C = U S V† so ψ_ij = Σ_k U_ik s_k conj(V_jk): |v_k⟩ = conj(V[:, k]).
    let mut ua = ComplexMatrix::zeros(da, da);
    let mut vb = ComplexMatrix::zeros(db, db);
    let a_cols = complete_basis(&u, da)?;
    let b_cols = complete_basis(&conjugate(&v), db)?;
    for k in 0..da {
        for r in 0..da {
            ua[(r, k)] = a_cols[k][r];
        }
    }
    for k in 0..db {
        for r in 0..db {
            vb[(r, k)] = b_cols[k][r];
        }
    }
    Ok((s.into_iter().take(da.min(db)).collect(), ua, vb))
}

fn conjugate(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint().transpose()
}

/// Restricts the columns of a padded unitary to the first `dim` rows and
/// re-orthonormalizes, filling any lost directions from the standard basis.
fn complete_basis(u: &ComplexMatrix, dim: usize) -> Result<Vec<Vec<Complex64>>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    let candidates = (0..u.cols())
        .map(|k| (0..dim).map(|r| u[(r, k)]).collect::<Vec<_>>())
        .chain((0..dim).map(|k| (0..dim).map(|r| if r == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect()));
    for mut v in candidates {
        if out.len() == dim {
            break;
        }
        for w in &out {
            let ip: Complex64 = w.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(w) {
                *x -= ip * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            out.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    if out.len() != dim {
        return Err(Error::Numerical("could not complete a local Schmidt basis".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptResult {
    pub separable: bool,
    /// PPT is necessary and sufficient only for dA·dB ≤ 6.
    pub conclusive: bool,
    pub min_eigenvalue: f64,
}

/// Peres–Horodecki test on the partial transpose over B.
pub fn ppt_separable(rho: &DensityMatrix, dims: (usize, usize), tol: &Tolerances) -> Result<PptResult> {
    let (da, db) = dims;
    if da * db > 36 {
        return Err(Error::Dimension(format!(
            "PPT baseline limited to dA·dB ≤ 36, got {}",
            da * db
        )));
    }
    let pt = partial_transpose(rho.matrix(), dims)?;
    let (values, _) = eigen_hermitian(&HermitianOperator::new(pt, tol)?)?;
    let min_eigenvalue = values.last().copied().unwrap_or(0.0);
    Ok(PptResult {
        separable: min_eigenvalue >= -tol.psd,
        conclusive: da * db <= 6,
        min_eigenvalue,
    })
}

/// Leading eigenvector of ρ when Tr ρ² ≥ 1 − `tol.pure`.
pub fn pure_state_vector(rho: &DensityMatrix, tol: &Tolerances) -> Result<Option<Vec<Complex64>>> {
    if rho.purity() < 1.0 - tol.pure {
        return Ok(None);
    }
    let (_, vectors) = eigen_hermitian(rho.operator())?;
    Ok(Some(vectors.column(0)))
}
