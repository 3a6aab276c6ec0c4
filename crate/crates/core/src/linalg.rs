//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Threshold shared by the rank check, Newton, and the root screen.
pub(crate) const RCOND_MIN: f64 = 1e-10;

/// Smallest over largest singular value; 0 for an empty or all-zero matrix.
pub(crate) fn rcond(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() || m.iter().any(|v| !v.is_finite()) {
        return 0.0;
    }
    let sv = m.singular_values();
    let max = sv.max();
    if max <= 0.0 {
        return 0.0;
    }
    sv.min() / max
}

/// Number of singular values above `RCOND_MIN` times the largest one.
pub(crate) fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.singular_values();
    let max = sv.max();
    if max <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RCOND_MIN * max).count()
}

pub(crate) fn checked_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let rc = rcond(m);
    if !(rc > RCOND_MIN) {
        return Err(Error::Singular { rcond: rc });
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or(Error::Singular { rcond: rc })
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// `A⁻¹ B A⁻ᵀ / n`, symmetrized.
pub(crate) fn sandwich(a: &DMatrix<f64>, b: &DMatrix<f64>, n: usize) -> Result<DMatrix<f64>> {
    let a_inv = checked_inverse(a)?;
    let cov = &a_inv * b * a_inv.transpose() / n as f64;
    Ok(symmetrize(&cov))
}

/// Column means of an n×k matrix.
pub(crate) fn column_means(m: &DMatrix<f64>) -> DVector<f64> {
    let n = m.nrows().max(1) as f64;
    DVector::from_iterator(m.ncols(), m.column_iter().map(|c| c.sum() / n))
}

/// `ΨᵀΨ / n`.
pub(crate) fn mean_outer(psi: &DMatrix<f64>) -> DMatrix<f64> {
    psi.tr_mul(psi) / psi.nrows().max(1) as f64
}

/// Central-difference Jacobian of `f` at `x` with step `rel_step·max(1,|x_j|)`.
pub(crate) fn central_jacobian<F>(f: F, x: &DVector<f64>, rel_step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let k = x.len();
    let mut jac: Option<DMatrix<f64>> = None;
    for j in 0..k {
        let h = rel_step * x[j].abs().max(1.0);
        let mut up = x.clone();
        up[j] += h;
        let mut down = x.clone();
        down[j] -= h;
        let col = (f(&up)? - f(&down)?) / (2.0 * h);
        let jm = jac.get_or_insert_with(|| DMatrix::zeros(col.len(), k));
        jm.set_column(j, &col);
    }
    Ok(jac.unwrap_or_else(|| DMatrix::zeros(0, 0)))
}

pub(crate) fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| {
        if x.is_nan() {
            f64::NAN
        } else {
            acc.max(x.abs())
        }
    })
}
