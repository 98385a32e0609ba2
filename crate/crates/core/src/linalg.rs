//! Small dense helpers shared by the invariant modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Determinant by partial-pivot LU.
pub fn determinant(m: &DMatrix<f64>) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::InvalidShape(format!(
            "determinant of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.is_empty() {
        return Ok(1.0);
    }
    Ok(m.clone().lu().determinant())
}

/// Bordered matrix `[[corner, topᵗ], [left, body]]`.
pub fn bordered(corner: f64, top: &DVector<f64>, left: &DVector<f64>, body: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if top.len() != body.ncols() || left.len() != body.nrows() {
        return Err(Error::InvalidShape(format!(
            "border {}+{} does not fit a {}x{} body",
            left.len(),
            top.len(),
            body.nrows(),
            body.ncols()
        )));
    }
    let mut out = DMatrix::zeros(body.nrows() + 1, body.ncols() + 1);
    out[(0, 0)] = corner;
    out.view_mut((0, 1), (1, body.ncols())).copy_from(&top.transpose());
    out.view_mut((1, 0), (body.nrows(), 1)).copy_from(left);
    out.view_mut((1, 1), body.shape()).copy_from(body);
    Ok(out)
}

/// One-sided Jacobi SVD of a matrix with at least as many rows as
/// columns: returns `(W, V)` with `A·V = W`, `V` orthogonal and the
/// columns of `W` mutually orthogonal, so `σⱼ = ‖wⱼ‖`.
///
/// Used instead of the bidiagonal QR iteration, which loses accuracy on
/// matrices with exactly repeated singular values.
pub fn jacobi_svd(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    const MAX_SWEEPS: usize = 80;
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::InvalidShape(format!("jacobi_svd needs rows >= cols, got {m}x{n}")));
    }
    let tol = f64::EPSILON * (m as f64);
    let mut w = a.clone();
    let mut v = DMatrix::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, i, j, c, s);
                rotate_columns(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::Numerical(format!("Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")))
}

fn rotate_columns(m: &mut DMatrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    for k in 0..m.nrows() {
        let (x, y) = (m[(k, i)], m[(k, j)]);
        m[(k, i)] = c * x - s * y;
        m[(k, j)] = s * x + c * y;
    }
}

/// Extends the orthonormal columns of `thin` to a full orthogonal matrix.
///
/// The first `thin.ncols()` columns are kept verbatim; the rest are the
/// trailing columns of the Householder `Q` of `[thin | I]`, which span the
/// orthogonal complement.
pub fn complete_orthonormal(thin: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, k) = thin.shape();
    if k >= n {
        return thin.columns(0, n).into_owned();
    }
    let mut stacked = DMatrix::zeros(n, k + n);
    stacked.view_mut((0, 0), (n, k)).copy_from(thin);
    stacked.view_mut((0, k), (n, n)).fill_with_identity();
    let q = stacked.qr().q();
    let mut out = q;
    out.view_mut((0, 0), (n, k)).copy_from(thin);
    out
}

/// `‖m − I‖` in max norm.
pub fn orthogonality_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.ncols();
    (m.transpose() * m - DMatrix::identity(n, n)).abs().max()
}
