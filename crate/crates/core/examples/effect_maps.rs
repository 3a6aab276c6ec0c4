//! Closed-form effect maps and their Jacobians.

use semimed::inference::{
    effect_map_g0, effect_map_g1, jacobian_g0, jacobian_g1, InteractionParams,
};
use semimed::simulation::DesignParams;

fn main() {
    // No interaction: (ACME, ADE, ATE) from (β₂, β₃, γ).
    let g0 = effect_map_g0(0.4, 0.5, -0.8);
    println!("g0(0.4, 0.5, -0.8) = {g0:?}");
    println!("jacobian:\n{}", jacobian_g0(0.4, 0.5, -0.8));

    for (label, d) in [("main", DesignParams::MAIN), ("power", DesignParams::POWER)] {
        let params = InteractionParams {
            alpha2: d.alpha2,
            beta2: d.beta2,
            xi2: vec![],
            beta3: d.beta3,
            gamma: d.gamma,
            eta: d.eta,
        };
        let g1 = effect_map_g1(&params, &[]).unwrap();
        println!(
            "{label} design: ACME(0) {:+.4} ACME(1) {:+.4} ADE(0) {:+.4} ADE(1) {:+.4} ATE {:+.4}",
            g1[0], g1[1], g1[2], g1[3], g1[4]
        );
    }

    // With a covariate the mediator mean is evaluated at its sample mean.
    let params = InteractionParams {
        alpha2: 0.2,
        beta2: 0.4,
        xi2: vec![0.3],
        beta3: 0.5,
        gamma: -0.8,
        eta: 1.0,
    };
    let xbar = [2.0];
    println!(
        "with xbar = 2: {:?}",
        effect_map_g1(&params, &xbar).unwrap()
    );
    println!(
        "jacobian (rows: effects, columns: α₂ β₂ ξ₂ β₃ γ η):\n{}",
        jacobian_g1(&params, &xbar).unwrap()
    );
}
