//! The damped Newton solver on a small nonlinear system, with and without a
//! relative step cap.

use nalgebra::DVector;
use semimed::estimators::{newton_root, NewtonOptions};

fn main() {
    // x² + y² = 4, x·y = 1
    let f = |v: &DVector<f64>| {
        Ok(DVector::from_vec(vec![
            v[0] * v[0] + v[1] * v[1] - 4.0,
            v[0] * v[1] - 1.0,
        ]))
    };
    let x0 = DVector::from_vec(vec![3.0, 0.2]);

    for (label, opts) in [
        ("plain", NewtonOptions::default()),
        (
            "capped",
            NewtonOptions {
                max_rel_step: Some(0.1),
                ..NewtonOptions::default()
            },
        ),
    ] {
        match newton_root(f, &x0, &opts) {
            Ok(r) => println!(
                "{label:<7} root ({:.10}, {:.10}) in {} iterations, |F| {:.1e}",
                r.root[0], r.root[1], r.iterations, r.residual_norm
            ),
            Err(e) => println!("{label:<7} failed: {e}"),
        }
    }
}
