//! Dense floating-point linear algebra.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalues of the symmetric-definite pencil `A u = λ B u`, ascending.
///
/// Reduces to a standard problem through the Cholesky factor `B = L Lᵀ`;
/// fails with [`Error::NotPositiveDefinite`] when `B` has no such factor.
pub fn generalized_eigenvalues(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::InvalidArgument(format!(
            "pencil shapes {:?} and {:?} differ",
            a.shape(),
            b.shape()
        )));
    }
    let chol = b.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let y = l
        .solve_lower_triangular(a)
        .ok_or(Error::NotPositiveDefinite)?;
    let c = l
        .solve_lower_triangular(&y.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let c = (&c + c.transpose()) * 0.5;
    let mut values: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    let sym = (a + a.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
