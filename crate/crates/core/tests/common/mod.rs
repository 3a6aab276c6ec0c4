#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use semimed::Dataset;

/// Directory holding `uis.csv` and `jobs.csv`; `SEMIMED_DATA_DIR` overrides
/// the workspace `data/` default.
pub fn data_dir() -> PathBuf {
    std::env::var_os("SEMIMED_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

pub fn dataset_path(name: &str) -> Option<PathBuf> {
    let p = data_dir().join(name);
    p.exists().then_some(p)
}

/// Randomized mediation data with `q` covariates and correlated errors.
pub fn mediation_data(n: usize, q: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<(String, Vec<f64>)> = Vec::new();
    let t: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 })
        .collect();
    let xs: Vec<Vec<f64>> = (0..q)
        .map(|_| (0..n).map(|_| rng.random::<f64>() * 2.0).collect())
        .collect();
    let mut m = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        let w: f64 = StandardNormal.sample(&mut rng);
        let cov: f64 = xs.iter().map(|x| 0.3 * x[i]).sum();
        let mi = 0.5 + 0.7 * t[i] + cov + z;
        m.push(mi);
        y.push(0.2 + 0.4 * t[i] + 0.6 * mi + 0.3 * t[i] * mi - cov + 0.5 * z + w * w.abs());
    }
    cols.push(("T".into(), t));
    cols.push(("M".into(), m));
    cols.push(("Y".into(), y));
    for (k, x) in xs.into_iter().enumerate() {
        cols.push((format!("X{k}"), x));
    }
    Dataset::from_columns(cols).unwrap()
}

pub fn covariate_names(q: usize) -> Vec<String> {
    (0..q).map(|k| format!("X{k}")).collect()
}

/// (method, effect, bias, rmse, coverage, avg_length, success_rate, reps_used)
pub type OracleRow = (String, String, f64, f64, f64, f64, f64, usize);

/// Re-aggregates a replicate log written to CSV, independently of the
/// library's aggregation code.
pub fn reaggregate(log: &str, truth: &[f64; 5], reps: usize) -> Vec<OracleRow> {
    let mut rdr = csv::Reader::from_reader(log.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let mut out = Vec::new();
    for method in ["ols", "semiparametric"] {
        for (j, effect) in ["ACME(0)", "ACME(1)", "ADE(0)", "ADE(1)", "ATE"]
            .iter()
            .enumerate()
        {
            let sel: Vec<&csv::StringRecord> = rows
                .iter()
                .filter(|r| &r[1] == method && &r[2] == *effect && &r[6] == "true")
                .collect();
            let k = sel.len() as f64;
            let est: Vec<f64> = sel.iter().map(|r| r[3].parse().unwrap()).collect();
            let lo: Vec<f64> = sel.iter().map(|r| r[4].parse().unwrap()).collect();
            let hi: Vec<f64> = sel.iter().map(|r| r[5].parse().unwrap()).collect();
            let mut s = 0.0;
            let mut sq = 0.0;
            let mut cov = 0.0;
            let mut len = 0.0;
            for i in 0..sel.len() {
                s += est[i];
                sq += (est[i] - truth[j]) * (est[i] - truth[j]);
                cov += if lo[i] <= truth[j] && truth[j] <= hi[i] {
                    1.0
                } else {
                    0.0
                };
                len += hi[i] - lo[i];
            }
            out.push((
                method.into(),
                effect.to_string(),
                s / k - truth[j],
                (sq / k).sqrt(),
                cov / k,
                len / k,
                k / reps as f64,
                sel.len(),
            ));
        }
    }
    out
}
