//! Damped Newton iteration with a forward-difference Jacobian.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iter: usize,
    /// Success when `‖F‖∞` drops below this.
    pub f_tol: f64,
    /// Success when the full Newton step `‖δ‖∞` drops below this.
    pub step_tol: f64,
    /// Forward-difference step is `fd_step·max(1, |x_j|)`.
    pub fd_step: f64,
    pub max_halvings: usize,
    /// Trust-region cap: when set, the full step is shrunk along its
    /// direction so that `|δ_j| ≤ max_rel_step·max(1, |x_j|)` for every j.
    pub max_rel_step: Option<f64>,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iter: 200,
            f_tol: 1e-8,
            step_tol: 1e-10,
            fd_step: 1e-6,
            max_halvings: 10,
            max_rel_step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonResult {
    pub root: DVector<f64>,
    pub iterations: usize,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NewtonFailure {
    SingularJacobian {
        iterations: usize,
        rcond: f64,
    },
    NonFinite {
        iterations: usize,
    },
    Evaluation {
        iterations: usize,
        message: String,
    },
    MaxIterations {
        iterations: usize,
        residual_norm: f64,
    },
}

impl std::fmt::Display for NewtonFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NewtonFailure::SingularJacobian { iterations, rcond } => {
                write!(
                    f,
                    "singular Jacobian (rcond {rcond:.3e}) at iteration {iterations}"
                )
            }
            NewtonFailure::NonFinite { iterations } => {
                write!(f, "non-finite function value at iteration {iterations}")
            }
            NewtonFailure::Evaluation {
                iterations,
                message,
            } => {
                write!(f, "evaluation failed at iteration {iterations}: {message}")
            }
            NewtonFailure::MaxIterations {
                iterations,
                residual_norm,
            } => {
                write!(
                    f,
                    "no convergence after {iterations} iterations (residual {residual_norm:.3e})"
                )
            }
        }
    }
}

fn eval<F>(
    f: &F,
    x: &DVector<f64>,
    iterations: usize,
) -> std::result::Result<DVector<f64>, NewtonFailure>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    match f(x) {
        Ok(v) if v.iter().all(|c| c.is_finite()) => Ok(v),
        Ok(_) => Err(NewtonFailure::NonFinite { iterations }),
        Err(e) => Err(NewtonFailure::Evaluation {
            iterations,
            message: e.to_string(),
        }),
    }
}

/// Solves `F(x) = 0` from `x0`.
pub fn newton_root<F>(
    f: F,
    x0: &DVector<f64>,
    opts: &NewtonOptions,
) -> std::result::Result<NewtonResult, NewtonFailure>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let mut x = x0.clone();
    let mut fx = eval(&f, &x, 0)?;
    let mut norm = linalg::inf_norm(&fx);
    let k = x.len();

    for iter in 1..=opts.max_iter {
        if norm < opts.f_tol {
            return Ok(NewtonResult {
                root: x,
                iterations: iter - 1,
                residual_norm: norm,
            });
        }

        let mut jac = DMatrix::zeros(fx.len(), k);
        for j in 0..k {
            let h = opts.fd_step * x[j].abs().max(1.0);
            let mut xh = x.clone();
            xh[j] += h;
            let fh = eval(&f, &xh, iter)?;
            jac.set_column(j, &((fh - &fx) / h));
        }
        let rc = linalg::rcond(&jac);
        if !(rc > linalg::RCOND_MIN) {
            return Err(NewtonFailure::SingularJacobian {
                iterations: iter,
                rcond: rc,
            });
        }
        let mut step = match jac.lu().solve(&(-&fx)) {
            Some(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => {
                return Err(NewtonFailure::SingularJacobian {
                    iterations: iter,
                    rcond: rc,
                })
            }
        };
        if let Some(r) = opts.max_rel_step {
            let ratio = step
                .iter()
                .zip(x.iter())
                .map(|(d, xj)| d.abs() / (r * xj.abs().max(1.0)))
                .fold(0.0, f64::max);
            if ratio > 1.0 {
                step /= ratio;
            }
        }

        let mut t = 1.0;
        let mut accepted = None;
        let mut fallback = None;
        for _ in 0..=opts.max_halvings {
            let trial = &x + &step * t;
            if let Ok(ft) = eval(&f, &trial, iter) {
                let nt = linalg::inf_norm(&ft);
                if nt < norm {
                    accepted = Some((trial, ft, nt));
                    break;
                }
                fallback = Some((trial, ft, nt));
            }
            t *= 0.5;
        }
        let (xn, fxn, nn) = match accepted.or(fallback) {
            Some(v) => v,
            None => return Err(NewtonFailure::NonFinite { iterations: iter }),
        };
        x = xn;
        fx = fxn;
        norm = nn;

        if norm < opts.f_tol || linalg::inf_norm(&step) < opts.step_tol {
            return Ok(NewtonResult {
                root: x,
                iterations: iter,
                residual_norm: norm,
            });
        }
    }
    Err(NewtonFailure::MaxIterations {
        iterations: opts.max_iter,
        residual_norm: norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    #[test]
    fn capped_steps_still_converge() {
        let opts = NewtonOptions {
            max_rel_step: Some(0.1),
            ..NewtonOptions::default()
        };
        let r = newton_root(|x| Ok(x.map(|v| v - 3.0)), &dvector![0.0], &opts).unwrap();
        assert!((r.root[0] - 3.0).abs() < 1e-9);
        assert!(r.iterations > 10);
    }

    #[test]
    fn affine_root_in_one_iteration() {
        let r = newton_root(
            |x| Ok(x.map(|v| v - 3.0)),
            &dvector![0.0],
            &NewtonOptions::default(),
        )
        .unwrap();
        assert!((r.root[0] - 3.0).abs() < 1e-9);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn two_dimensional_root() {
        let f = |x: &DVector<f64>| Ok(dvector![x[0] * x[0] - 4.0, x[1] - 1.0]);
        let r = newton_root(f, &dvector![1.0, 0.0], &NewtonOptions::default()).unwrap();
        assert!((r.root[0] - 2.0).abs() < 1e-8);
        assert!((r.root[1] - 1.0).abs() < 1e-10);
        assert!(r.residual_norm < 1e-8);
    }

    #[test]
    fn constant_function_fails() {
        let r = newton_root(
            |x: &DVector<f64>| Ok(DVector::from_element(x.len(), 1.0)),
            &dvector![0.0],
            &NewtonOptions::default(),
        );
        assert!(matches!(r, Err(NewtonFailure::SingularJacobian { .. })));
    }

    #[test]
    fn respects_iteration_cap() {
        // x² + 1 has no real root and a non-singular Jacobian away from 0.
        let opts = NewtonOptions {
            max_iter: 200,
            ..Default::default()
        };
        let r = newton_root(
            |x: &DVector<f64>| Ok(dvector![x[0] * x[0] + 1.0]),
            &dvector![3.0],
            &opts,
        );
        assert!(r.is_err());
    }

    #[test]
    fn non_finite_start_is_failure() {
        let r = newton_root(
            |_x: &DVector<f64>| Ok(dvector![f64::NAN]),
            &dvector![0.0],
            &NewtonOptions::default(),
        );
        assert_eq!(r, Err(NewtonFailure::NonFinite { iterations: 0 }));
    }
}
