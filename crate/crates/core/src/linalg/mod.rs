//! Dense complex linear algebra: the small kernel every other module is
//! built on. Storage is row-major `Complex64`; only the Hermitian
//! eigendecomposition and the SVD are delegated to `nalgebra`.

mod matrix;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

pub use matrix::{ComplexMatrix, ONE, ZERO};

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// A square matrix whose Hermiticity defect was checked at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    hermiticity_defect: f64,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = (&matrix - &matrix.adjoint()).frobenius_norm();
        if defect > tol.herm {
            return Err(Error::Numerical(format!(
                "matrix is not Hermitian: hermiticity_defect={defect:.3e}"
            )));
        }
        Ok(HermitianOperator {
            matrix,
            hermiticity_defect: defect,
        })
    }

    /// Projector onto the span of `v`.
    pub fn projector_onto(v: &[Complex64]) -> Result<Self> {
        let m = ComplexMatrix::projector_onto(v)?;
        Ok(HermitianOperator {
            matrix: m,
            hermiticity_defect: 0.0,
        })
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::identity(dim),
            hermiticity_defect: 0.0,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    operator: HermitianOperator,
    trace_defect: f64,
    min_eigenvalue: f64,
}

impl DensityMatrix {
    pub fn new(operator: HermitianOperator, tol: &Tolerances) -> Result<Self> {
        if operator.dim() > tol.max_dim {
            return Err(Error::Dimension(format!(
                "dimension {} exceeds max_dim {}",
                operator.dim(),
                tol.max_dim
            )));
        }
        let trace_defect = (operator.matrix().trace() - ONE).norm();
        if trace_defect > tol.trace {
            return Err(Error::Validation(format!(
                "trace_defect={}",
                crate::report::fmt_sig(trace_defect)
            )));
        }
        let (values, _) = eigen_hermitian(&operator)?;
        let min_eigenvalue = values.last().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol.psd {
            return Err(Error::Validation(format!(
                "state is not positive semidefinite: min_eigenvalue={}",
                crate::report::fmt_sig(min_eigenvalue)
            )));
        }
        Ok(DensityMatrix {
            operator,
            trace_defect,
            min_eigenvalue,
        })
    }

    pub fn from_matrix(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        Self::new(HermitianOperator::new(matrix, tol)?, tol)
    }

    /// The pure state |ψ⟩⟨ψ|; `psi` is normalized first.
    pub fn pure(psi: &[Complex64], tol: &Tolerances) -> Result<Self> {
        Self::new(HermitianOperator::projector_onto(psi)?, tol)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let diag = vec![1.0 / dim as f64; dim];
        DensityMatrix {
            operator: HermitianOperator {
                matrix: ComplexMatrix::from_diagonal(&diag),
                hermiticity_defect: 0.0,
            },
            trace_defect: 0.0,
            min_eigenvalue: 1.0 / dim as f64,
        }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.operator.matrix()
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn trace_defect(&self) -> f64 {
        self.trace_defect
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        let m = self.matrix();
        m.entries().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Which factor of a bipartite system survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Kronecker product A ⊗ B, refusing results larger than `max_dim`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix, max_dim: usize) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= max_dim && c <= max_dim => Ok(a.kron(b)),
        _ => Err(Error::Dimension(format!(
            "tensor product of {}x{} and {}x{} exceeds max_dim {max_dim}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ))),
    }
}

/// Tensor product of two density matrices.
pub fn tensor_density(a: &DensityMatrix, b: &DensityMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    let m = tensor_product(a.matrix(), b.matrix(), tol.max_dim)?;
    DensityMatrix::from_matrix(m, tol)
}

fn check_bipartite(m: &ComplexMatrix, (da, db): (usize, usize)) -> Result<()> {
    if da == 0 || db == 0 || da.checked_mul(db) != Some(m.rows()) || !m.is_square() {
        return Err(Error::Dimension(format!(
            "dimensions ({da}, {db}) do not factor a {}x{} operator",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Partial trace over one factor of a bipartite operator, keeping `keep`.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: (usize, usize), keep: Side) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    let out = match keep {
        Side::A => {
            let mut out = ComplexMatrix::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    out[(i, j)] = (0..db).map(|k| m[(i * db + k, j * db + k)]).sum();
                }
            }
            out
        }
        Side::B => {
            let mut out = ComplexMatrix::zeros(db, db);
            for k in 0..db {
                for l in 0..db {
                    out[(k, l)] = (0..da).map(|i| m[(i * db + k, i * db + l)]).sum();
                }
            }
            out
        }
    };
    Ok(out)
}

/// Reduced state of the `keep` factor.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Side, tol: &Tolerances) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(rho.matrix(), dims, keep)?;
    DensityMatrix::from_matrix(reduced, tol)
}

/// Partial transpose on the B factor.
pub fn partial_transpose(m: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    let mut out = ComplexMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = m[(i * db + l, j * db + k)];
                }
            }
        }
    }
    Ok(out)
}

/// ‖PQ − QP‖_F.
pub fn commutator_norm(p: &HermitianOperator, q: &HermitianOperator) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::Dimension(format!(
            "commutator of operators with dimensions {} and {}",
            p.dim(),
            q.dim()
        )));
    }
    let pq = p.matrix() * q.matrix();
    let qp = q.matrix() * p.matrix();
    Ok((&pq - &qp).frobenius_norm())
}

/// Eigenvalues (descending) and the matching orthonormal eigenvectors as
/// the columns of the returned matrix.
pub fn eigen_hermitian(a: &HermitianOperator) -> Result<(Vec<f64>, ComplexMatrix)> {
    let m = a.matrix().to_nalgebra();
    let dim = a.dim();
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 10_000 * dim.max(1))
        .ok_or_else(|| Error::Numerical("Hermitian eigendecomposition did not converge".into()))?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(dim, dim);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..dim {
            vectors[(r, new_col)] = eig.eigenvectors[(r, old_col)];
        }
    }
    Ok((values, vectors))
}

/// Singular values of a (not necessarily square) matrix, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let svd = nalgebra::SVD::try_new(m.to_nalgebra(), false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Full SVD `m = U Σ V†`, singular values descending.
pub fn svd(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let svd = nalgebra::SVD::try_new(m.to_nalgebra(), true, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]).then(i.cmp(&j)));
    let mut u_out = ComplexMatrix::zeros(m.rows(), k);
    let mut v_out = ComplexMatrix::zeros(m.cols(), k);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..m.rows() {
            u_out[(r, new)] = u[(r, old)];
        }
        for c in 0..m.cols() {
            v_out[(c, new)] = v_t[(old, c)].conj();
        }
    }
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    Ok((u_out, values, v_out))
}
