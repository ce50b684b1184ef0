//! Small dense complex-matrix helpers shared by the solvers.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;

/// Tolerance for Hermiticity of model matrices at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Largest `|A_ij - conj(A_ji)|` and where it occurs.
pub fn hermiticity_defect(a: &CMatrix) -> (f64, usize, usize) {
    let mut worst = (0.0, 0, 0);
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm();
            if d > worst.0 {
                worst = (d, i, j);
            }
        }
    }
    worst
}

pub fn ensure_hermitian(name: &str, a: &CMatrix, tol: f64) -> Result<()> {
    if !a.is_square() {
        return Err(Error::param(
            name,
            format!("expected a square matrix, got {}x{}", a.nrows(), a.ncols()),
        ));
    }
    let (defect, row, col) = hermiticity_defect(a);
    if defect > tol {
        return Err(Error::NonHermitian {
            matrix: name.to_string(),
            row,
            col,
            defect,
        });
    }
    Ok(())
}

/// `-i [h, rho]`
pub fn liouvillian(h: &CMatrix, rho: &CMatrix) -> CMatrix {
    let comm = h * rho - rho * h;
    comm * C64::new(0.0, -1.0)
}

/// `tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

pub fn real_diagonal(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(values[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defect_points_at_asymmetric_entry() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 2)] = C64::new(0.5, 0.1);
        a[(2, 0)] = C64::new(0.5, 0.1);
        let (d, r, c) = hermiticity_defect(&a);
        assert!((d - 0.2).abs() < 1e-15);
        assert_eq!((r, c), (0, 2));
        assert!(matches!(
            ensure_hermitian("x", &a, 1e-12),
            Err(Error::NonHermitian { row: 0, col: 2, .. })
        ));
    }

    #[test]
    fn trace_product_matches_dense() {
        let a = CMatrix::from_fn(3, 3, |i, j| C64::new(i as f64, j as f64 - 1.0));
        let b = CMatrix::from_fn(3, 3, |i, j| C64::new((i * j) as f64, 0.5));
        let dense = (&a * &b).trace();
        assert!((trace_product(&a, &b) - dense).norm() < 1e-12);
    }
}
