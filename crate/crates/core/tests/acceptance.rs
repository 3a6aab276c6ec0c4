//! Acceptance criteria. Prints one PASS/FAIL line per criterion and fails
//! if any criterion fails. Criterion 3 needs `uis.csv` and `jobs.csv` (see
//! `scripts/fetch_data.py`); without them it is reported as SKIP.

mod common;

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semimed::inference::{
    effect_map_g0, effect_map_g1, jacobian_g0, jacobian_g1, InteractionParams,
};
use semimed::simulation::*;
use semimed::*;

struct Line {
    id: u32,
    title: &'static str,
    status: &'static str,
    detail: String,
}

fn emit(line: &Line) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "[{}] criterion {}: {} :: {}",
        line.status, line.id, line.title, line.detail
    );
    let _ = out.flush();
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn criterion_1() -> (bool, String) {
    let main = DesignParams::MAIN.truth();
    let want = [-0.32, 0.08, 0.70, 1.10, 0.78];
    let err_main = (0..5)
        .map(|i| (main[i] - want[i]).abs())
        .fold(0.0, f64::max);
    let err_power = (DesignParams::POWER.truth()[0] + 0.0676).abs();
    (
        err_main <= 1e-12 && err_power <= 1e-12,
        format!("max |error| main {err_main:.1e}, power {err_power:.1e} (tol 1e-12)"),
    )
}

fn max_rel_fd_error(
    jac: &nalgebra::DMatrix<f64>,
    f: impl Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..x.len() {
        let h = 1e-6 * x[j].abs().max(1.0);
        let (mut xp, mut xm) = (x.to_vec(), x.to_vec());
        xp[j] += h;
        xm[j] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        for i in 0..fp.len() {
            let fd = (fp[i] - fm[i]) / (2.0 * h);
            worst = worst.max((fd - jac[(i, j)]).abs() / jac[(i, j)].abs().max(1.0));
        }
    }
    worst
}

fn criterion_2() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let th: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
        worst = worst.max(max_rel_fd_error(
            &jacobian_g0(th[0], th[1], th[2]),
            |v| effect_map_g0(v[0], v[1], v[2]).to_vec(),
            &th,
        ));
    }
    for q in [0usize, 1, 3] {
        for _ in 0..100 {
            let xbar: Vec<f64> = (0..q).map(|_| rng.random_range(-3.0..3.0)).collect();
            let v: Vec<f64> = (0..5 + q).map(|_| rng.random_range(-3.0..3.0)).collect();
            let jac = jacobian_g1(&InteractionParams::from_slice(&v), &xbar).unwrap();
            worst = worst.max(max_rel_fd_error(
                &jac,
                |w| {
                    effect_map_g1(&InteractionParams::from_slice(w), &xbar)
                        .unwrap()
                        .to_vec()
                },
                &v,
            ));
        }
    }
    (
        worst <= 1e-6,
        format!("max relative error {worst:.2e} over 400 points, q in {{0,1,3}} (tol 1e-6)"),
    )
}

/// (estimate, lower, upper, length) per effect.
type Table = [(f64, f64, f64, f64); 5];

const UIS_OLS: Table = [
    (-0.3209, -0.4583, -0.1835, 0.2748),
    (-0.4626, -0.6677, -0.2575, 0.4102),
    (0.9353, 0.6484, 1.2222, 0.5738),
    (0.7936, 0.4940, 1.0932, 0.5992),
    (0.4727, 0.1479, 0.7974, 0.6495),
];

const JOBS_OLS: Table = [
    (-0.0198, -0.0495, 0.0100, 0.0595),
    (-0.0140, -0.0360, 0.0079, 0.0439),
    (-0.0420, -0.1286, 0.0447, 0.1733),
    (-0.0362, -0.1219, 0.0494, 0.1713),
    (-0.0560, -0.1460, 0.0340, 0.1800),
];

fn check_application(name: &str, result: &MediationResult, table: &Table) -> (bool, String) {
    let ols = result.effects(Method::Ols).expect("OLS always estimates");
    let mut worst: f64 = 0.0;
    for (i, row) in table.iter().enumerate() {
        let got = [
            ols.values[i],
            ols.ci_lower[i],
            ols.ci_upper[i],
            ols.ci_length(i),
        ];
        let want = [row.0, row.1, row.2, row.3];
        for k in 0..4 {
            worst = worst.max((got[k] - want[k]).abs());
        }
    }
    let Some(semi) = result.effects(Method::Semiparametric) else {
        return (
            false,
            format!("{name}: OLS max diff {worst:.1e}; semiparametric fit failed"),
        );
    };
    let shorter = (0..2).all(|i| semi.ci_length(i) < ols.ci_length(i));
    let signs = (0..2).all(|i| semi.values[i].signum() == ols.values[i].signum());
    (
        worst <= 1e-3 && shorter && signs,
        format!(
            "{name}: OLS max diff {worst:.1e} (tol 1e-3); semi ACME lengths {:.4}/{:.4} vs OLS {:.4}/{:.4}; ACME signs agree: {signs}",
            semi.ci_length(0),
            semi.ci_length(1),
            ols.ci_length(0),
            ols.ci_length(1)
        ),
    )
}

fn criterion_3() -> Option<(bool, String)> {
    let (uis, jobs) = (
        common::dataset_path("uis.csv")?,
        common::dataset_path("jobs.csv")?,
    );
    let req_uis = MediationRequest::new("TREAT", "FRAC", "TIME").interaction(true);
    let d_uis = load_csv_columns(&uis, &req_uis.referenced_columns())
        .unwrap()
        .scale_column("TIME", 0.01)
        .unwrap();
    let r_uis = mediate(&d_uis, &req_uis).unwrap();
    let req_jobs = MediationRequest::new("treat", "job_seek", "depress2")
        .covariates(&["econ_hard", "sex", "age"])
        .interaction(true);
    let d_jobs = load_csv_columns(&jobs, &req_jobs.referenced_columns()).unwrap();
    let r_jobs = mediate(&d_jobs, &req_jobs).unwrap();
    let (a, da) = check_application("uis", &r_uis, &UIS_OLS);
    let (b, db) = check_application("jobs", &r_jobs, &JOBS_OLS);
    Some((a && b, format!("{da}; {db}")))
}

const GAUSSIAN_OLS: [(f64, f64, f64); 5] = [
    (0.1003, 0.9440, 0.3853),
    (0.0412, 0.9170, 0.1588),
    (0.1524, 0.9400, 0.5688),
    (0.1492, 0.9470, 0.5696),
    (0.1412, 0.9380, 0.5233),
];

/// Inclusive `|got - want| <= tol`. The reference values are 4-decimal
/// literals and coverage is a multiple of 1/reps, so the slack only absorbs
/// binary rounding of the decimal difference.
fn within(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol + 1e-9
}

fn criterion_4(run: &ScenarioRun) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, r) in run.metrics.iter().filter(|r| r.method == "ols").enumerate() {
        let (rmse, cov, len) = GAUSSIAN_OLS[i];
        let good = within(r.rmse, rmse, 0.01)
            && within(r.coverage, cov, 0.02)
            && within(r.avg_length, len, 0.02);
        ok &= good;
        let mark = if good { "" } else { " OUT" };
        parts.push(format!(
            "{} {:.4}/{:.3}/{:.4}{mark}",
            r.effect, r.rmse, r.coverage, r.avg_length
        ));
    }
    (
        ok,
        format!(
            "rmse/coverage/length {} (tol 0.01/0.02/0.02)",
            parts.join(", ")
        ),
    )
}

fn criterion_5(run: &ScenarioRun) -> (bool, String) {
    let mut worst: f64 = 0.0;
    for e in EffectKind::Interaction.effect_names() {
        let (o, s) = (
            run.row(Method::Ols, e).unwrap(),
            run.row(Method::Semiparametric, e).unwrap(),
        );
        worst = worst.max((s.rmse - o.rmse).abs() / o.rmse);
    }
    (
        worst <= 0.15,
        format!("max |semi RMSE - OLS RMSE| / OLS RMSE = {worst:.3} (tol 0.15)"),
    )
}

fn efficiency(run: &ScenarioRun, effects: &[&str], check_coverage: bool) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for e in effects {
        let (o, s) = (
            run.row(Method::Ols, e).unwrap(),
            run.row(Method::Semiparametric, e).unwrap(),
        );
        let good = s.rmse < o.rmse
            && s.avg_length < o.avg_length
            && (!check_coverage || (0.90..=0.97).contains(&s.coverage));
        ok &= good;
        parts.push(format!(
            "{e} rmse {:.4}<{:.4} len {:.4}<{:.4} cov {:.3}",
            s.rmse, o.rmse, s.avg_length, o.avg_length, s.coverage
        ));
    }
    (ok, format!("{}: {}", run.config.name, parts.join("; ")))
}

fn criterion_6(asym: &ScenarioRun, bimodal: &ScenarioRun, skew: &ScenarioRun) -> (bool, String) {
    let names = EffectKind::Interaction.effect_names();
    let (a, da) = efficiency(asym, names, true);
    let (b, db) = efficiency(bimodal, names, true);
    let (c, dc) = efficiency(skew, &["ATE"], false);
    (a && b && c, format!("{da} | {db} | {dc}"))
}

fn criterion_7() -> (bool, String) {
    let report = run_power_study(&ScenarioConfig::power(1000, 7)).unwrap();
    let (o, s) = (
        report.method(Method::Ols).unwrap(),
        report.method(Method::Semiparametric).unwrap(),
    );
    let ok = s.rejection_rate - o.rejection_rate >= 0.30 && s.avg_ci_length < 0.5 * o.avg_ci_length;
    (
        ok,
        format!(
            "rejection semi {:.3} vs OLS {:.3} (need gap >= 0.30); length semi {:.4} vs OLS {:.4} (need ratio < 0.5, got {:.3})",
            s.rejection_rate,
            o.rejection_rate,
            s.avg_ci_length,
            o.avg_ci_length,
            s.avg_ci_length / o.avg_ci_length
        ),
    )
}

fn metrics_bytes(run: &ScenarioRun) -> Vec<u8> {
    let mut buf = Vec::new();
    write_metrics_csv(&run.metrics, &mut buf).unwrap();
    buf
}

fn criterion_8(runs: &[&ScenarioRun]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut gap: f64 = 0.0;
    let mut count = 0usize;
    for run in runs {
        let rate = run
            .metrics
            .iter()
            .map(|r| r.success_rate)
            .fold(1.0, f64::min);
        ok &= rate >= 0.99;
        parts.push(format!("{} success {:.3}", run.config.name, rate));
        for rep in &run.replicates {
            for m in &rep.methods {
                if let Ok(e) = &m.estimates {
                    gap = gap.max(e.decomposition_gap());
                    count += 1;
                }
            }
        }
    }
    let cfg = ScenarioConfig::main(ErrorLaw::AsymmetricMixture, 300, 200, 8);
    let bytes: Vec<Vec<u8>> = [1usize, 4, 8]
        .iter()
        .map(|&t| {
            metrics_bytes(&run_scenario_with(&cfg, &RunOptions { threads: Some(t) }).unwrap())
        })
        .collect();
    let identical = bytes[0] == bytes[1] && bytes[1] == bytes[2];
    ok &= identical && gap <= 1e-12;
    (
        ok,
        format!(
            "{}; metrics CSV identical under 1/4/8 threads: {identical}; max decomposition gap {gap:.1e} over {count} estimates (tol 1e-12)",
            parts.join(", ")
        ),
    )
}

fn criterion_9() -> (bool, String) {
    use nalgebra::{DMatrix, DVector};
    let d = common::mediation_data(300, 2, 9);
    let covs = common::covariate_names(2);
    let mspec = ModelSpec::mediator_model("M", "T", &covs);
    let ospec = ModelSpec::outcome_model("Y", "T", "M", &covs, true);
    let (mx, ox) = (
        build_design(&d, &mspec).unwrap(),
        build_design(&d, &ospec).unwrap(),
    );
    let (m, y) = (
        mspec.response_values(&d).unwrap(),
        ospec.response_values(&d).unwrap(),
    );
    let (mf, of) = (fit_ols(&mx, &m).unwrap(), fit_ols(&ox, &y).unwrap());
    let stacked = stack_fits(&mf, &of).unwrap();

    let mut ols_err: f64 = 0.0;
    let mut hc0_err: f64 = 0.0;
    for (x, resp, fit, off) in [(&mx, &m, &mf, 0usize), (&ox, &y, &of, mx.p() + 1)] {
        let xv = x.values();
        let yv = DVector::from_column_slice(resp);
        let bread = (xv.transpose() * xv).try_inverse().unwrap();
        let beta = &bread * xv.transpose() * &yv;
        let e = &yv - xv * &beta;
        for j in 0..x.p() {
            ols_err = ols_err.max((fit.params.beta[j] - beta[j]).abs());
        }
        let meat = xv.transpose() * DMatrix::from_diagonal(&e.map(|v| v * v)) * xv;
        let oracle = &bread * meat * &bread;
        for r in 0..x.p() {
            for c in 0..x.p() {
                hc0_err = hc0_err.max((stacked.cov[(off + r, off + c)] - oracle[(r, c)]).abs());
            }
        }
    }

    let cfg = ScenarioConfig::main(ErrorLaw::SkewNormal, 150, 50, 9);
    let run = run_scenario(&cfg).unwrap();
    let mut log = Vec::new();
    write_replicate_log(&run.replicates, &mut log).unwrap();
    let oracle = common::reaggregate(std::str::from_utf8(&log).unwrap(), &run.truth, cfg.reps);
    let exact = run.metrics.len() == oracle.len()
        && run.metrics.iter().zip(&oracle).all(|(r, o)| {
            (
                r.method.as_str(),
                r.effect.as_str(),
                r.bias,
                r.rmse,
                r.coverage,
                r.avg_length,
                r.success_rate,
                r.reps_used,
            ) == (o.0.as_str(), o.1.as_str(), o.2, o.3, o.4, o.5, o.6, o.7)
        });
    (
        ols_err <= 1e-10 && hc0_err <= 1e-8 && exact,
        format!("OLS vs normal equations {ols_err:.1e} (tol 1e-10); HC0 {hc0_err:.1e} (tol 1e-8); log re-aggregation exact: {exact}"),
    )
}

#[test]
fn acceptance_criteria() {
    let mut lines = Vec::new();
    let mut record = |id, title, outcome: Option<(bool, String)>| {
        let line = match outcome {
            Some((ok, detail)) => Line {
                id,
                title,
                status: verdict(ok),
                detail,
            },
            None => Line {
                id,
                title,
                status: "SKIP",
                detail: "uis.csv / jobs.csv not found; run scripts/fetch_data.py".into(),
            },
        };
        emit(&line);
        lines.push(line);
    };
    let start = Instant::now();

    record(1, "effect-map exactness", Some(criterion_1()));
    record(
        2,
        "effect Jacobians vs finite differences",
        Some(criterion_2()),
    );
    record(
        3,
        "uis/jobs OLS reproduction and semiparametric direction",
        criterion_3(),
    );

    let gaussian = run_scenario(&ScenarioConfig::main(ErrorLaw::Gaussian, 300, 1000, 1)).unwrap();
    record(
        4,
        "Gaussian OLS scorecard (n=300, 1000 reps)",
        Some(criterion_4(&gaussian)),
    );
    record(
        5,
        "Gaussian semiparametric RMSE parity",
        Some(criterion_5(&gaussian)),
    );

    let asym = run_scenario(&ScenarioConfig::main(
        ErrorLaw::AsymmetricMixture,
        300,
        1000,
        1,
    ))
    .unwrap();
    let bimodal = run_scenario(&ScenarioConfig::main(
        ErrorLaw::SymmetricBimodal,
        300,
        1000,
        1,
    ))
    .unwrap();
    let skew = run_scenario(&ScenarioConfig::main(ErrorLaw::SkewNormal, 300, 1000, 1)).unwrap();
    record(
        6,
        "non-Gaussian efficiency direction",
        Some(criterion_6(&asym, &bimodal, &skew)),
    );

    record(7, "near-boundary power (1000 reps)", Some(criterion_7()));
    record(
        8,
        "robustness and determinism",
        Some(criterion_8(&[&gaussian, &skew, &asym, &bimodal])),
    );
    record(9, "oracle suite", Some(criterion_9()));

    let failed: Vec<u32> = lines
        .iter()
        .filter(|l| l.status == "FAIL")
        .map(|l| l.id)
        .collect();
    let _ = writeln!(
        std::io::stdout(),
        "acceptance finished in {:.0}s",
        start.elapsed().as_secs_f64()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
