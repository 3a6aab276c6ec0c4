//! OLS against the adaptive semiparametric fit for one linear regression
//! with skewed mixture errors.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semimed::estimators::{fit_ols, fit_semiparametric, SemiparametricOutcome};
use semimed::simulation::{sample_error, ErrorLaw};
use semimed::DesignMatrix;

fn main() {
    let n = 300;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let e = sample_error(&ErrorLaw::AsymmetricMixture.spec(), &mut rng, n);
    let y: Vec<f64> = x.iter().zip(&e).map(|(x, e)| 1.0 + 2.0 * x + e).collect();
    let design = DesignMatrix::from_matrix(DMatrix::from_fn(
        n,
        2,
        |i, j| if j == 0 { 1.0 } else { x[i] },
    ))
    .unwrap();

    let ols = fit_ols(&design, &y).unwrap();
    println!(
        "ols   beta {:?} sigma2 {:.4}",
        ols.params.beta, ols.params.sigma2
    );
    println!(
        "      se   [{:.4}, {:.4}]",
        ols.std_error(0),
        ols.std_error(1)
    );

    match fit_semiparametric(&design, &y).unwrap() {
        SemiparametricOutcome::Accepted(fit) => {
            println!(
                "semi  beta {:?} sigma2 {:.4}",
                fit.params.beta, fit.params.sigma2
            );
            println!(
                "      se   [{:.4}, {:.4}]",
                fit.std_error(0),
                fit.std_error(1)
            );
            let d = &fit.diagnostics;
            println!(
                "      start {:?}, {} iterations, |mean psi| {:.1e}, rcond {:.3}",
                d.start_index_used, d.iterations, d.residual_norm, d.rcond
            );
            for r in &d.screened_reasons {
                println!("      skipped {r}");
            }
        }
        SemiparametricOutcome::Failed { reasons } => {
            println!("semi  failed");
            for r in reasons {
                println!("      {r}");
            }
        }
    }
}
