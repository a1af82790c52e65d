//! Density-matrix reconstruction from potentia by linear least squares.
//!
//! A Hermitian d×d operator H is parametrized by d² reals: the diagonal,
//! then Re and Im of the strict upper triangle. Tr(HP) is linear in those
//! coordinates, so each power contributes one row of a real design matrix.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::Psa;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{eigen_hermitian, ComplexMatrix, DensityMatrix, HermitianOperator};
use crate::powers::PowerGraph;

fn upper_pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect()
}

fn design_row(p: &ComplexMatrix, pairs: &[(usize, usize)]) -> Vec<f64> {
    let d = p.rows();
    let mut row = Vec::with_capacity(d * d);
    row.extend((0..d).map(|i| p[(i, i)].re));
    // H_ij P_ji + H_ji P_ij = 2 Re(H_ij conj(P_ij)) = 2(a Re P_ij + b Im P_ij)
    row.extend(pairs.iter().map(|&(i, j)| 2.0 * p[(i, j)].re));
    row.extend(pairs.iter().map(|&(i, j)| 2.0 * p[(i, j)].im));
    row
}

fn design_matrix(g: &PowerGraph) -> DMatrix<f64> {
    let d = g.dim();
    let pairs = upper_pairs(d);
    let rows: Vec<Vec<f64>> = g
        .powers()
        .iter()
        .map(|p| design_row(p.projector.matrix(), &pairs))
        .collect();
    DMatrix::from_fn(rows.len(), d * d, |r, c| rows[r][c])
}

fn numerical_rank(singular: &DVector<f64>) -> usize {
    let max = singular.iter().copied().fold(0.0, f64::max);
    let cutoff = 1e-10 * max.max(1.0);
    singular.iter().filter(|&&s| s > cutoff).count()
}

/// Dimension of the span of the graph's projectors inside the d²-real
/// space of Hermitian operators.
pub fn tomographic_rank(g: &PowerGraph) -> usize {
    let svd = design_matrix(g).svd(false, false);
    numerical_rank(&svd.singular_values)
}

/// The unique ρ with Tr(ρP) = Ψ(P) on every node.
pub fn density_from_psa(psa: &Psa, dim: usize, tol: &Tolerances) -> Result<DensityMatrix> {
    let g = psa.graph();
    if g.dim() != dim {
        return Err(Error::Dimension(format!(
            "PSA lives on dimension {}, requested {dim}",
            g.dim()
        )));
    }
    let needed = dim * dim;
    let a = design_matrix(g);
    let svd = a.clone().svd(true, true);
    let rank = numerical_rank(&svd.singular_values);
    if rank < needed {
        return Err(Error::NotTomographicallyComplete { rank, needed });
    }
    let b = DVector::from_column_slice(psa.potentia());
    let x = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::Numerical(format!("least squares failed: {e}")))?;
    let residual = (&a * &x - &b).norm();
    if residual > tol.recon {
        return Err(Error::InconsistentPsa(format!(
            "no density matrix reproduces the potentia (residual {residual:.3e})"
        )));
    }

    let pairs = upper_pairs(dim);
    let m = pairs.len();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = Complex64::new(x[i], 0.0);
    }
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let z = Complex64::new(x[dim + k], x[dim + m + k]);
        h[(i, j)] = z;
        h[(j, i)] = z.conj();
    }
    project_to_states(h, tol)
}

/// Clips eigenvalues within `tol.psd` of zero and renormalizes a trace
/// within `tol.psd` of one; larger defects are inconsistencies.
fn project_to_states(h: ComplexMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    let op = HermitianOperator::new(h, tol)?;
    let trace = op.matrix().trace().re;
    let (values, vectors) = eigen_hermitian(&op)?;
    let min = values.last().copied().unwrap_or(0.0);
    if min < -tol.psd || (trace - 1.0).abs() > tol.psd {
        return Err(Error::InconsistentPsa(format!(
            "reconstructed operator is not a state (trace {trace}, min eigenvalue {min})"
        )));
    }
    if min >= 0.0 && (trace - 1.0).abs() <= f64::EPSILON * 8.0 {
        return DensityMatrix::new(op, tol);
    }
    let clipped: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let d = op.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for (k, &lambda) in clipped.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let v = vectors.column(k);
        let w = Complex64::new(lambda / total, 0.0);
        for r in 0..d {
            for c in 0..d {
                out[(r, c)] += w * v[r] * v[c].conj();
            }
        }
    }
    // restore exact Hermiticity lost to rounding
    let sym = (&out + &out.adjoint()).scale(Complex64::new(0.5, 0.0));
    DensityMatrix::from_matrix(sym, tol)
}
