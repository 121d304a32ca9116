//! Dense complex direct solve with a condition-number guard.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Systems whose 1-norm condition estimate exceeds this are treated as singular.
pub const CONDITION_LIMIT: f64 = 1e12;

pub(crate) fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `a x = b` by LU with partial pivoting. Returns `Err(condition)`
/// when the matrix is singular or its condition estimate `‖A‖₁‖A⁻¹‖₁`
/// exceeds [`CONDITION_LIMIT`].
pub fn solve_dense(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> Result<DVector<Complex64>, f64> {
    let lu = a.clone().lu();
    let inverse = match lu.try_inverse() {
        Some(inv) => inv,
        None => return Err(f64::INFINITY),
    };
    let condition = one_norm(a) * one_norm(&inverse);
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(condition);
    }
    lu.solve(b).ok_or(f64::INFINITY)
}
