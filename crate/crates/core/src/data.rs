//! Tabular data, model specifications and design matrices.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Column-major numeric table. Every column has the same length and holds
/// only finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    column_names: Vec<String>,
    columns: Vec<Vec<f64>>,
    n: usize,
    rows_dropped: usize,
}

impl Dataset {
    pub fn new(column_names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if column_names.len() != columns.len() {
            return Err(Error::Dimension(format!(
                "{} names for {} columns",
                column_names.len(),
                columns.len()
            )));
        }
        let n = columns.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::NoRows { dropped: 0 });
        }
        for (name, col) in column_names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::Dimension(format!(
                    "column `{name}` has {} rows, expected {n}",
                    col.len()
                )));
            }
            if let Some(v) = col.iter().find(|v| !v.is_finite()) {
                return Err(Error::Malformed(format!(
                    "column `{name}` contains non-finite value {v}"
                )));
            }
        }
        for (i, name) in column_names.iter().enumerate() {
            if column_names[..i].contains(name) {
                return Err(Error::Malformed(format!("duplicate column name `{name}`")));
            }
        }
        Ok(Dataset {
            column_names,
            columns,
            n,
            rows_dropped: 0,
        })
    }

    /// Convenience constructor from `(name, values)` pairs.
    pub fn from_columns<S: Into<String>>(cols: Vec<(S, Vec<f64>)>) -> Result<Self> {
        let (names, values): (Vec<String>, Vec<Vec<f64>>) =
            cols.into_iter().map(|(k, v)| (k.into(), v)).unzip();
        Dataset::new(names, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    /// Rows discarded while loading because a cell was missing or unparseable.
    pub fn rows_dropped(&self) -> usize {
        self.rows_dropped
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.column_names.iter().any(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.column_names
            .iter()
            .position(|c| c == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    /// Returns a copy with `name` multiplied by `factor`.
    pub fn scale_column(&self, name: &str, factor: f64) -> Result<Dataset> {
        if !factor.is_finite() || factor == 0.0 {
            return Err(Error::InvalidSpec(format!(
                "scale factor must be finite and non-zero, got {factor}"
            )));
        }
        let idx = self
            .column_names
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        let mut out = self.clone();
        for v in &mut out.columns[idx] {
            *v *= factor;
        }
        Ok(out)
    }

    /// Arithmetic mean of each named column, in the given order.
    pub fn column_means(&self, names: &[String]) -> Result<Vec<f64>> {
        names
            .iter()
            .map(|c| {
                self.column(c)
                    .map(|v| v.iter().sum::<f64>() / v.len() as f64)
            })
            .collect()
    }
}

fn parse_cell(cell: &str) -> Option<f64> {
    let t = cell.trim();
    match t {
        "" | "NA" | "na" | "NaN" | "nan" | "." => None,
        _ => t.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}

fn read_table(path: &Path, wanted: Option<&[&str]>) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file);
    let header: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::Malformed("empty header row".into()));
    }

    let selected: Vec<usize> = match wanted {
        None => (0..header.len()).collect(),
        Some(names) => names
            .iter()
            .map(|name| {
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::MissingColumn(name.to_string()))
            })
            .collect::<Result<_>>()?,
    };

    let mut columns = vec![Vec::new(); selected.len()];
    let mut dropped = 0usize;
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths {
                expected_len, len, ..
            } => Error::Malformed(format!(
                "row {} has {len} fields, header has {expected_len}",
                line + 2
            )),
            _ => Error::Csv(e),
        })?;
        let parsed: Option<Vec<f64>> = selected
            .iter()
            .map(|&i| record.get(i).and_then(parse_cell))
            .collect();
        match parsed {
            Some(vals) => {
                for (col, v) in columns.iter_mut().zip(vals) {
                    col.push(v);
                }
            }
            None => dropped += 1,
        }
    }

    let names = selected.iter().map(|&i| header[i].clone()).collect();
    if columns.first().is_none_or(Vec::is_empty) {
        return Err(Error::NoRows { dropped });
    }
    if dropped > 0 {
        log_dropped(path, dropped);
    }
    let mut ds = Dataset::new(names, columns)?;
    ds.rows_dropped = dropped;
    Ok(ds)
}

fn log_dropped(path: &Path, dropped: usize) {
    eprintln!(
        "note: {}: dropped {dropped} row(s) with missing or non-numeric cells",
        path.display()
    );
}

/// Reads a comma-separated file with a header row. Every column must be
/// numeric; rows with a missing or unparseable cell are dropped and counted.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    read_table(path.as_ref(), None)
}

/// Like [`load_csv`] but only parses the named columns, so rows are deleted
/// listwise over those columns alone and other columns may hold text.
pub fn load_csv_columns(path: impl AsRef<Path>, columns: &[&str]) -> Result<Dataset> {
    read_table(path.as_ref(), Some(columns))
}

/// A linear regression of the fixed mediation shape:
/// `response ~ 1 + treatment [+ mediator [+ treatment:mediator]] + covariates`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub response: String,
    pub treatment: String,
    pub mediator: Option<String>,
    pub covariates: Vec<String>,
    pub interaction: bool,
}

impl ModelSpec {
    /// `mediator ~ 1 + treatment + covariates`.
    pub fn mediator_model(mediator: &str, treatment: &str, covariates: &[String]) -> Self {
        ModelSpec {
            response: mediator.to_string(),
            treatment: treatment.to_string(),
            mediator: None,
            covariates: covariates.to_vec(),
            interaction: false,
        }
    }

    /// `outcome ~ 1 + treatment + mediator [+ treatment:mediator] + covariates`.
    pub fn outcome_model(
        outcome: &str,
        treatment: &str,
        mediator: &str,
        covariates: &[String],
        interaction: bool,
    ) -> Self {
        ModelSpec {
            response: outcome.to_string(),
            treatment: treatment.to_string(),
            mediator: Some(mediator.to_string()),
            covariates: covariates.to_vec(),
            interaction,
        }
    }

    /// Every column the model touches, response first.
    pub fn referenced_columns(&self) -> Vec<&str> {
        let mut cols = vec![self.response.as_str(), self.treatment.as_str()];
        if let Some(m) = &self.mediator {
            cols.push(m);
        }
        cols.extend(self.covariates.iter().map(String::as_str));
        cols
    }

    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        for col in self.referenced_columns() {
            if !dataset.has_column(col) {
                return Err(Error::MissingColumn(col.to_string()));
            }
        }
        if self.interaction && self.mediator.is_none() {
            return Err(Error::InvalidSpec("interaction requires a mediator".into()));
        }
        let regressors: Vec<&str> = std::iter::once(self.treatment.as_str())
            .chain(self.covariates.iter().map(String::as_str))
            .collect();
        for (i, c) in regressors.iter().enumerate() {
            if regressors[..i].contains(c) {
                return Err(Error::InvalidSpec(format!(
                    "column `{c}` used twice as a regressor"
                )));
            }
        }
        if regressors.contains(&self.response.as_str()) {
            return Err(Error::InvalidSpec(format!(
                "response `{}` is also a regressor",
                self.response
            )));
        }
        if let Some(m) = &self.mediator {
            if regressors.contains(&m.as_str()) || *m == self.response {
                return Err(Error::InvalidSpec(format!(
                    "mediator `{m}` must differ from the response, treatment and covariates"
                )));
            }
        }
        let t = dataset.column(&self.treatment)?;
        if let Some(&v) = t.iter().find(|&&v| v != 0.0 && v != 1.0) {
            return Err(Error::NonBinaryTreatment {
                column: self.treatment.clone(),
                value: v,
            });
        }
        Ok(())
    }

    pub fn response_values(&self, dataset: &Dataset) -> Result<Vec<f64>> {
        dataset.column(&self.response).map(<[f64]>::to_vec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnRole {
    Intercept,
    Treatment,
    Mediator,
    Interaction,
    Covariate,
}

/// Numeric realization of a [`ModelSpec`]: columns are ordered
/// `[intercept, treatment, mediator?, interaction?, covariates...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    values: DMatrix<f64>,
    column_roles: Vec<ColumnRole>,
    column_names: Vec<String>,
}

impl DesignMatrix {
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn column_roles(&self) -> &[ColumnRole] {
        &self.column_roles
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    /// Index of the first column with the given role.
    pub fn index_of(&self, role: ColumnRole) -> Option<usize> {
        self.column_roles.iter().position(|&r| r == role)
    }

    /// Builds a design directly from a matrix whose first column must be the
    /// all-ones intercept; the remaining columns are tagged as covariates.
    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        if values.ncols() == 0 || values.column(0).iter().any(|&v| v != 1.0) {
            return Err(Error::InvalidSpec(
                "first design column must be an all-ones intercept".into(),
            ));
        }
        let p = values.ncols();
        let mut column_roles = vec![ColumnRole::Covariate; p];
        column_roles[0] = ColumnRole::Intercept;
        let column_names = (0..p)
            .map(|j| {
                if j == 0 {
                    "(Intercept)".to_string()
                } else {
                    format!("x{j}")
                }
            })
            .collect();
        check_rank(&values)?;
        Ok(DesignMatrix {
            values,
            column_roles,
            column_names,
        })
    }
}

fn check_rank(values: &DMatrix<f64>) -> Result<()> {
    let p = values.ncols();
    let rank = linalg::numerical_rank(values);
    if rank < p {
        return Err(Error::RankDeficient { rank, cols: p });
    }
    Ok(())
}

pub fn build_design(dataset: &Dataset, spec: &ModelSpec) -> Result<DesignMatrix> {
    spec.validate(dataset)?;
    let n = dataset.n();
    let treatment = dataset.column(&spec.treatment)?;

    let mut cols: Vec<Vec<f64>> = vec![vec![1.0; n], treatment.to_vec()];
    let mut roles = vec![ColumnRole::Intercept, ColumnRole::Treatment];
    let mut names = vec!["(Intercept)".to_string(), spec.treatment.clone()];

    if let Some(m) = &spec.mediator {
        let med = dataset.column(m)?;
        cols.push(med.to_vec());
        roles.push(ColumnRole::Mediator);
        names.push(m.clone());
        if spec.interaction {
            cols.push(treatment.iter().zip(med).map(|(t, m)| t * m).collect());
            roles.push(ColumnRole::Interaction);
            names.push(format!("{}:{}", spec.treatment, m));
        }
    }
    for c in &spec.covariates {
        cols.push(dataset.column(c)?.to_vec());
        roles.push(ColumnRole::Covariate);
        names.push(c.clone());
    }

    let p = cols.len();
    let values = DMatrix::from_fn(n, p, |i, j| cols[j][i]);
    check_rank(&values)?;
    Ok(DesignMatrix {
        values,
        column_roles: roles,
        column_names: names,
    })
}
