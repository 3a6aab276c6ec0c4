use nalgebra::{DMatrix, DVector};

use super::{sandwich_parts, FitDiagnostics, Method, ParameterPoint, RegressionFit};
use crate::data::DesignMatrix;
use crate::error::{Error, Result};
use crate::linalg;

/// OLS estimating-function rows: `x_i·e_i` for each coefficient and
/// `e_i² − σ²·(n−p)/n` for the variance, which is mean-zero exactly at the
/// OLS solution with `σ² = RSS/(n−p)`.
pub fn ols_psi(design: &DesignMatrix, response: &[f64], point: &ParameterPoint) -> DMatrix<f64> {
    let x = design.values();
    let (n, p) = (design.n(), design.p());
    let beta = DVector::from_column_slice(&point.beta);
    let resid = DVector::from_column_slice(response) - x * beta;
    let dof_ratio = (n - p) as f64 / n as f64;
    DMatrix::from_fn(n, p + 1, |i, j| {
        if j < p {
            x[(i, j)] * resid[i]
        } else {
            resid[i] * resid[i] - point.sigma2 * dof_ratio
        }
    })
}

pub fn fit_ols(design: &DesignMatrix, response: &[f64]) -> Result<RegressionFit> {
    let (n, p) = (design.n(), design.p());
    if response.len() != n {
        return Err(Error::Dimension(format!(
            "response has {} values, design has {n} rows",
            response.len()
        )));
    }
    if n <= p {
        return Err(Error::TooFewObservations {
            n,
            p,
            required: p + 1,
        });
    }
    let x = design.values();
    let y = DVector::from_column_slice(response);
    let qr = x.clone().qr();
    let r = qr.r();
    let rc = linalg::rcond(&r);
    if !(rc > linalg::RCOND_MIN) {
        return Err(Error::RankDeficient {
            rank: linalg::numerical_rank(x),
            cols: p,
        });
    }
    let qty = qr.q().tr_mul(&y);
    let beta = r.solve_upper_triangular(&qty).ok_or(Error::RankDeficient {
        rank: linalg::numerical_rank(x),
        cols: p,
    })?;
    let resid = &y - x * &beta;
    let sigma2 = resid.norm_squared() / (n - p) as f64;
    let params = ParameterPoint::new(beta.iter().copied().collect(), sigma2);

    let psi_values = ols_psi(design, response, &params);
    let theta = params.to_vector();
    let (jacobian_a, cov, rcond) = sandwich_parts(
        |t| Ok(ols_psi(design, response, &ParameterPoint::from_vector(t))),
        &theta,
        &psi_values,
    )?;
    let diagnostics = FitDiagnostics {
        start_index_used: Some(0),
        iterations: 0,
        residual_norm: linalg::inf_norm(&linalg::column_means(&psi_values)),
        rcond,
        screened_reasons: Vec::new(),
    };
    Ok(RegressionFit {
        params,
        method: Method::Ols,
        psi_values,
        jacobian_a,
        cov,
        diagnostics,
        design: design.clone(),
        response: response.to_vec(),
        bandwidth: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn design(cols: &[&[f64]]) -> DesignMatrix {
        let n = cols[0].len();
        let m = DMatrix::from_fn(
            n,
            cols.len() + 1,
            |i, j| if j == 0 { 1.0 } else { cols[j - 1][i] },
        );
        DesignMatrix::from_matrix(m).unwrap()
    }

    #[test]
    fn exact_linear_fit() {
        let d = design(&[&[0.0, 1.0, 2.0]]);
        let fit = fit_ols(&d, &[2.0, 5.0, 8.0]).unwrap();
        assert_abs_diff_eq!(fit.params.beta[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.params.beta[1], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.params.sigma2, 0.0, epsilon = 1e-20);
    }

    #[test]
    fn intercept_only_is_mean_and_sample_variance() {
        let d = DesignMatrix::from_matrix(DMatrix::from_element(3, 1, 1.0)).unwrap();
        let fit = fit_ols(&d, &[1.0, 2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(fit.params.beta[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.params.sigma2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn too_few_observations() {
        let d = design(&[&[0.0, 1.0]]);
        assert!(matches!(
            fit_ols(&d, &[1.0, 2.0]),
            Err(Error::TooFewObservations { .. })
        ));
    }

    #[test]
    fn psi_means_vanish_at_solution() {
        let d = design(&[
            &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            &[1.0, -1.0, 0.5, 2.0, 0.0, 1.0],
        ]);
        let y = [1.0, 0.3, 2.2, 4.1, 3.9, 6.5];
        let fit = fit_ols(&d, &y).unwrap();
        let means = linalg::column_means(&fit.psi_values);
        assert!(linalg::inf_norm(&means) < 1e-12);
        assert!(fit.diagnostics.rcond > 1e-10);
        for j in 0..fit.cov.nrows() {
            assert!(fit.cov[(j, j)] >= 0.0);
            for k in 0..j {
                assert_eq!(fit.cov[(j, k)], fit.cov[(k, j)]);
            }
        }
    }
}
