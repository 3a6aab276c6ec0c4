//! Kernel estimate of the error score f'/f against the exact score of a
//! two-component normal mixture.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semimed::estimators::estimate_score;
use semimed::simulation::{sample_error, ErrorLaw, ErrorSpec};

fn mixture_score(spec: &ErrorSpec, e: f64) -> f64 {
    let ErrorSpec::Mixture { components } = spec else {
        unreachable!()
    };
    let (mu, sd) = spec.raw_moments();
    // Score of the standardized law at e, via the raw law at mu + sd·e.
    let x = mu + sd * e;
    let (mut f, mut df) = (0.0, 0.0);
    for c in components {
        let z = (x - c.mean) / c.sd;
        let dens = c.weight * (-0.5 * z * z).exp() / c.sd;
        f += dens;
        df += -dens * z / c.sd;
    }
    sd * df / f
}

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let spec = ErrorLaw::AsymmetricMixture.spec();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let residuals = sample_error(&spec, &mut rng, n);

    let grid: Vec<f64> = (-8..=12).map(|k| f64::from(k) * 0.25).collect();
    let est = estimate_score(&residuals, &grid).unwrap();
    println!(
        "n = {n}, bandwidth {:.4}, clip ±{:.2}",
        est.bandwidth, est.clip_bound
    );
    println!("{:>6} {:>10} {:>10}", "e", "estimate", "exact");
    for (e, s) in grid.iter().zip(&est.score_values) {
        println!("{e:>6.2} {s:>10.3} {:>10.3}", mixture_score(&spec, *e));
    }
}
