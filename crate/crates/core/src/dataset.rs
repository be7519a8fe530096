//! Office-level data: CSV ingestion, validation, summaries and design matrices.
//!
//! The file schema is fixed: `office_id,performance,turnover,absenteeism,mean_age,region`
//! with a required header. Extra columns are ignored with a warning, lines
//! starting with `#` are skipped, and missing cells are errors.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{stats, Scalar};

pub const ID_COLUMN: &str = "office_id";
/// Numeric columns in file order.
pub const NUMERIC_COLUMNS: [&str; 5] = ["performance", "turnover", "absenteeism", "mean_age", "region"];
pub const INTERCEPT_LABEL: &str = "intercept";

/// One branch office.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfficeRecord {
    pub office_id: String,
    /// Net result per office, currency units per year.
    pub performance: f64,
    /// Staff leaving per annum, in percent (6.3 means 6.3%).
    pub turnover: f64,
    /// Absenteeism in percent.
    pub absenteeism: f64,
    /// Mean staff age in years.
    pub mean_age: f64,
    pub region: u8,
}

impl OfficeRecord {
    /// Checks the record invariants, reporting the first offending column.
    pub fn validate(&self, row: usize) -> Result<()> {
        let bad = |column: &str, reason: &str| Error::BadValue {
            row,
            column: column.to_string(),
            reason: reason.to_string(),
        };
        for (name, v) in [
            ("performance", self.performance),
            ("turnover", self.turnover),
            ("absenteeism", self.absenteeism),
            ("mean_age", self.mean_age),
        ] {
            if !v.is_finite() {
                return Err(bad(name, "not finite"));
            }
        }
        if self.turnover < 0.0 {
            return Err(bad("turnover", "must be >= 0"));
        }
        if self.absenteeism < 0.0 {
            return Err(bad("absenteeism", "must be >= 0"));
        }
        if self.mean_age <= 0.0 {
            return Err(bad("mean_age", "must be > 0"));
        }
        if !(1..=3).contains(&self.region) {
            return Err(bad("region", "must be 1, 2 or 3"));
        }
        Ok(())
    }

    pub fn value(&self, column: &str) -> Option<f64> {
        match column {
            "performance" => Some(self.performance),
            "turnover" => Some(self.turnover),
            "absenteeism" => Some(self.absenteeism),
            "mean_age" => Some(self.mean_age),
            "region" => Some(f64::from(self.region)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<OfficeRecord>,
}

impl Dataset {
    pub fn new(records: Vec<OfficeRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyData);
        }
        for (i, r) in records.iter().enumerate() {
            r.validate(i + 1)?;
        }
        Ok(Self { records })
    }

    pub fn n(&self) -> usize {
        self.records.len()
    }

    pub fn records(&self) -> &[OfficeRecord] {
        &self.records
    }

    /// All values of a numeric column, in record order.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        if !NUMERIC_COLUMNS.contains(&name) {
            return Err(Error::MissingColumn(name.to_string()));
        }
        Ok(self.records.iter().map(|r| r.value(name).expect("known column")).collect())
    }

    /// Dataset made of the records at `indices` (repeats allowed).
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
        }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Csv(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_csv(&text)
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        parse_csv(text)
    }

    /// Serializes in the standard schema. Numbers use the shortest
    /// representation that parses back to the same value.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![ID_COLUMN];
        header.extend(NUMERIC_COLUMNS);
        w.write_record(&header).expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.office_id.clone(),
                r.performance.to_string(),
                r.turnover.to_string(),
                r.absenteeism.to_string(),
                r.mean_age.to_string(),
                r.region.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    pub fn summarize(&self) -> ColumnSummary {
        summarize(self)
    }
}

/// Parses the standard CSV schema into a validated [`Dataset`].
pub fn parse_csv(text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Csv(e.to_string()))?.clone();
    let position = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let id_pos = position(ID_COLUMN)?;
    let mut num_pos = [0usize; 5];
    for (slot, name) in num_pos.iter_mut().zip(NUMERIC_COLUMNS) {
        *slot = position(name)?;
    }
    for h in headers.iter() {
        if h != ID_COLUMN && !NUMERIC_COLUMNS.contains(&h) {
            log::warn!("ignoring extra column `{h}`");
        }
    }

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::Csv(e.to_string()))?;
        let cell = |pos: usize, name: &str| -> Result<&str> {
            match row.get(pos) {
                Some(s) if !s.is_empty() => Ok(s),
                _ => Err(Error::BadValue {
                    row: row_no,
                    column: name.to_string(),
                    reason: "missing value".into(),
                }),
            }
        };
        let number = |k: usize| -> Result<f64> {
            let name = NUMERIC_COLUMNS[k];
            let s = cell(num_pos[k], name)?;
            s.parse::<f64>().map_err(|_| Error::BadValue {
                row: row_no,
                column: name.to_string(),
                reason: format!("`{s}` is not a number"),
            })
        };
        let office_id = cell(id_pos, ID_COLUMN)?.to_string();
        let performance = number(0)?;
        let turnover = number(1)?;
        let absenteeism = number(2)?;
        let mean_age = number(3)?;
        let region_raw = number(4)?;
        let region = if region_raw.fract() == 0.0 && (1.0..=3.0).contains(&region_raw) {
            region_raw as u8
        } else {
            return Err(Error::BadValue {
                row: row_no,
                column: "region".into(),
                reason: format!("`{region_raw}` is not one of 1, 2, 3"),
            });
        };
        let record = OfficeRecord {
            office_id,
            performance,
            turnover,
            absenteeism,
            mean_age,
            region,
        };
        record.validate(row_no)?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::EmptyData);
    }
    Ok(Dataset { records })
}

/// Declarative regression model: response on focal (and optionally focal²)
/// plus controls, with reference covariate values for prediction curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub response: String,
    pub focal: String,
    pub quadratic: bool,
    pub controls: Vec<String>,
    #[serde(default)]
    pub reference: BTreeMap<String, f64>,
}

impl ModelSpec {
    pub fn new(response: &str, focal: &str, quadratic: bool, controls: &[&str]) -> Self {
        Self {
            response: response.to_string(),
            focal: focal.to_string(),
            quadratic,
            controls: controls.iter().map(|c| c.to_string()).collect(),
            reference: BTreeMap::new(),
        }
    }

    /// Performance on turnover with absenteeism, mean age and region controls.
    pub fn office_model(quadratic: bool) -> Self {
        Self::new("performance", "turnover", quadratic, &["absenteeism", "mean_age", "region"])
    }

    pub fn with_reference(mut self, name: &str, value: f64) -> Self {
        self.reference.insert(name.to_string(), value);
        self
    }

    pub fn squared_label(&self) -> String {
        format!("{}^2", self.focal)
    }

    /// Column labels in design order: intercept, focal, focal² (if any), controls.
    pub fn labels(&self) -> Vec<String> {
        let mut labels = vec![INTERCEPT_LABEL.to_string(), self.focal.clone()];
        if self.quadratic {
            labels.push(self.squared_label());
        }
        labels.extend(self.controls.iter().cloned());
        labels
    }

    pub fn validate(&self) -> Result<()> {
        if self.controls.contains(&self.focal) {
            return Err(Error::InvalidSpec(format!("focal `{}` also listed as a control", self.focal)));
        }
        for (i, c) in self.controls.iter().enumerate() {
            if self.controls[..i].contains(c) {
                return Err(Error::InvalidSpec(format!("duplicate control `{c}`")));
            }
        }
        if self.response == self.focal || self.controls.contains(&self.response) {
            return Err(Error::InvalidSpec(format!(
                "response `{}` also used as a predictor",
                self.response
            )));
        }
        Ok(())
    }
}

/// Row-major `n × (k + 1)` regressor matrix whose first column is the intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
    labels: Vec<String>,
}

impl<T: Scalar> DesignMatrix<T> {
    pub fn new(values: Vec<T>, rows: usize, labels: Vec<String>) -> Result<Self> {
        let cols = labels.len();
        if cols == 0 || values.len() != rows * cols {
            return Err(Error::Domain(format!(
                "design of {} values does not match {rows} rows × {cols} labels",
                values.len()
            )));
        }
        if (0..rows).any(|i| values[i * cols] != T::one()) {
            return Err(Error::Domain("first design column must be all ones".into()));
        }
        Ok(Self { rows, cols, values, labels })
    }

    /// Builds from rows of non-intercept regressors; the intercept is prepended.
    pub fn from_regressors(rows: &[Vec<T>], labels: &[&str]) -> Result<Self> {
        let mut all_labels = vec![INTERCEPT_LABEL.to_string()];
        all_labels.extend(labels.iter().map(|l| l.to_string()));
        let mut values = Vec::with_capacity(rows.len() * all_labels.len());
        for r in rows {
            if r.len() != labels.len() {
                return Err(Error::Domain("ragged regressor rows".into()));
            }
            values.push(T::one());
            values.extend_from_slice(r);
        }
        Self::new(values, rows.len(), all_labels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Matrix of the rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut values = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            values,
            labels: self.labels.clone(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> DesignMatrix<U> {
        DesignMatrix {
            rows: self.rows,
            cols: self.cols,
            values: self.values.iter().map(|v| U::lit(v.as_f64())).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Builds the design matrix and response vector for `spec`.
///
/// Columns are `[intercept, focal, focal² if quadratic, controls...]`, all on
/// the raw scale; region enters as its ordinal code.
pub fn build_design(ds: &Dataset, spec: &ModelSpec) -> Result<(DesignMatrix<f64>, Vec<f64>)> {
    spec.validate()?;
    let y = ds.column(&spec.response)?;
    let focal = ds.column(&spec.focal)?;
    let controls = spec
        .controls
        .iter()
        .map(|c| ds.column(c))
        .collect::<Result<Vec<_>>>()?;
    let labels = spec.labels();
    let cols = labels.len();
    let mut values = Vec::with_capacity(ds.n() * cols);
    for i in 0..ds.n() {
        values.push(1.0);
        values.push(focal[i]);
        if spec.quadratic {
            values.push(focal[i] * focal[i]);
        }
        values.extend(controls.iter().map(|c| c[i]));
    }
    Ok((DesignMatrix::new(values, ds.n(), labels)?, y))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnStats {
    pub name: String,
    pub mean: f64,
    /// Divisor `n - 1`; zero for a single observation.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSummary {
    pub n: usize,
    pub columns: Vec<ColumnStats>,
}

impl ColumnSummary {
    pub fn get(&self, name: &str) -> Option<&ColumnStats> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Per-column mean, sample standard deviation, min and max.
pub fn summarize(ds: &Dataset) -> ColumnSummary {
    let columns = NUMERIC_COLUMNS
        .iter()
        .map(|&name| {
            let xs = ds.column(name).expect("known column");
            ColumnStats {
                name: name.to_string(),
                mean: stats::mean(&xs).expect("non-empty"),
                sd: stats::sample_sd(&xs).expect("non-empty"),
                min: xs.iter().copied().fold(f64::INFINITY, f64::min),
                max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    ColumnSummary { n: ds.n(), columns }
}
