//! Friendly parameters for curvilinear fits: turning point, curvature,
//! departures from the optimum, predictions at reference covariates, p value
//! to confidence conversion, and the tables that present them.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::dataset::{ColumnSummary, Dataset, ModelSpec, INTERCEPT_LABEL};
use crate::error::{Error, Result};
use crate::ols::{FitResult, Interval};
use crate::Scalar;

/// Turning point `-b / (2a)` of `a x² + b x + c`.
pub fn turning_point<T: Scalar>(a: T, b: T) -> Result<T> {
    if a == T::zero() {
        return Err(Error::NoTurningPoint);
    }
    Ok(-b / (T::lit(2.0) * a))
}

/// Change in prediction from moving `d` units away from the turning point: `a d²`.
pub fn delta_from_optimum<T: Scalar>(a: T, d: T) -> T {
    a * d * d
}

/// Confidence `1 - p/2` that an effect has the sign of its point estimate,
/// given its two-tailed p value.
pub fn p_to_confidence<T: Scalar>(p: T) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::Domain(format!("p value {p} outside [0, 1]")));
    }
    Ok(T::one() - p / T::lit(2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Negative,
    Positive,
    Indeterminate,
}

impl Direction {
    pub fn word(self) -> &'static str {
        match self {
            Direction::Negative => "negative",
            Direction::Positive => "positive",
            Direction::Indeterminate => "indeterminate",
        }
    }
}

/// Direction and confidence implied by a point estimate and its two-tailed p.
/// A zero estimate has no direction and confidence one half.
pub fn sign_confidence_from_p<T: Scalar>(estimate: T, p: T) -> Result<(Direction, T)> {
    let conf = p_to_confidence(p)?;
    Ok(if estimate < T::zero() {
        (Direction::Negative, conf)
    } else if estimate > T::zero() {
        (Direction::Positive, conf)
    } else {
        (Direction::Indeterminate, T::lit(0.5))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    InvertedU,
    UprightU,
    DecliningOnly,
    NoCurvature,
}

impl Shape {
    /// Shape of a quadratic from its curvature and turning point; `None`
    /// curvature means a linear model.
    pub fn classify<T: Scalar>(curvature: Option<T>, location: Option<T>) -> Shape {
        match curvature {
            Some(a) if a < T::zero() => match location {
                Some(loc) if loc > T::zero() => Shape::InvertedU,
                _ => Shape::DecliningOnly,
            },
            Some(a) if a > T::zero() => Shape::UprightU,
            _ => Shape::NoCurvature,
        }
    }
}

pub fn classify_shape<T: Scalar>(curve: &CurveSummary<T>) -> Shape {
    Shape::classify(curve.curvature, curve.location)
}

/// Prediction from a coefficient vector whose labels follow the design
/// convention: intercept, focal, `focal^2`, then covariates by name.
pub fn predict_terms<T: Scalar>(
    labels: &[String],
    coefficients: &[T],
    focal: &str,
    covariates: &BTreeMap<String, T>,
) -> Result<T> {
    let squared = format!("{focal}^2");
    let value = |name: &str| {
        covariates
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingCovariate(name.to_string()))
    };
    let mut acc = T::zero();
    for (label, &c) in labels.iter().zip(coefficients) {
        let x = if label == INTERCEPT_LABEL {
            T::one()
        } else if *label == squared {
            let f = value(focal)?;
            f * f
        } else {
            value(label)?
        };
        acc = acc + c * x;
    }
    Ok(acc)
}

/// Prediction of `fit` at the given covariate values. The focal value comes
/// from `covariates[spec.focal]`; its square is formed internally.
pub fn predict_at<T: Scalar>(fit: &FitResult<T>, spec: &ModelSpec, covariates: &BTreeMap<String, T>) -> Result<T> {
    predict_terms(&fit.labels, &fit.coefficients, &spec.focal, covariates)
}

/// Reference covariates for prediction curves: values set on the spec win;
/// otherwise region defaults to 1 and other controls to their column means.
pub fn reference_covariates(spec: &ModelSpec, summary: &ColumnSummary) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for c in &spec.controls {
        let v = match spec.reference.get(c) {
            Some(&v) => v,
            None if c == "region" => 1.0,
            None => summary
                .get(c)
                .map(|s| s.mean)
                .ok_or_else(|| Error::MissingColumn(c.clone()))?,
        };
        out.insert(c.clone(), v);
    }
    Ok(out)
}

fn ordered_map<S: Serializer, T: Serialize>(pairs: &[(String, T)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

/// User-facing summary of a fitted curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary<T> {
    pub response: String,
    pub focal: String,
    /// Focal value at the turning point, `-b/2a`; absent for linear models.
    pub location: Option<T>,
    /// Coefficient of the squared focal term.
    pub curvature: Option<T>,
    /// Coefficient of the linear focal term.
    pub focal_slope: T,
    /// Prediction at the turning point under the reference covariates.
    pub optimum_prediction: Option<T>,
    /// Control coefficients, read as the predicted impact of one unit.
    #[serde(serialize_with = "ordered_map")]
    pub impacts: Vec<(String, T)>,
    pub adj_r2: T,
    pub shape: Shape,
    #[serde(serialize_with = "ordered_map")]
    pub reference: Vec<(String, T)>,
    pub n: usize,
    /// Observations with focal value strictly below the turning point.
    pub below_location: Option<usize>,
}

impl<T: Scalar> CurveSummary<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes")
    }

    pub fn impact(&self, name: &str) -> Option<T> {
        self.impacts.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

/// Assembles the friendly parameters of `fit`, which must come from `spec` on `ds`.
pub fn summarize_curve<T: Scalar>(fit: &FitResult<T>, spec: &ModelSpec, ds: &Dataset) -> Result<CurveSummary<T>> {
    let reference = reference_covariates(spec, &ds.summarize())?;
    let reference: BTreeMap<String, T> = reference.into_iter().map(|(k, v)| (k, T::lit(v))).collect();
    let coef = |label: &str| {
        fit.coefficient(label)
            .ok_or_else(|| Error::InvalidSpec(format!("fit has no term `{label}`")))
    };
    let focal_slope = coef(&spec.focal)?;
    let curvature = if spec.quadratic {
        Some(coef(&spec.squared_label())?)
    } else {
        None
    };
    let location = match curvature {
        Some(a) => match turning_point(a, focal_slope) {
            Ok(loc) => Some(loc),
            Err(Error::NoTurningPoint) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    let optimum_prediction = match location {
        Some(loc) => {
            let mut at = reference.clone();
            at.insert(spec.focal.clone(), loc);
            Some(predict_at(fit, spec, &at)?)
        }
        None => None,
    };
    let impacts = spec
        .controls
        .iter()
        .map(|c| Ok((c.clone(), coef(c)?)))
        .collect::<Result<Vec<_>>>()?;
    let below_location = match location {
        Some(loc) => {
            let focal = ds.column(&spec.focal)?;
            Some(focal.iter().filter(|&&x| T::lit(x) < loc).count())
        }
        None => None,
    };
    Ok(CurveSummary {
        response: spec.response.clone(),
        focal: spec.focal.clone(),
        location,
        curvature,
        focal_slope,
        optimum_prediction,
        impacts,
        adj_r2: fit.adj_r2,
        shape: Shape::classify(curvature, location),
        reference: spec.controls.iter().map(|c| (c.clone(), reference[c])).collect(),
        n: ds.n(),
        below_location,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberFormat {
    /// Whole units with thousands separators.
    Integer,
    OneDecimal,
    /// Fraction shown as a whole percentage.
    Percent,
}

impl NumberFormat {
    pub fn render(self, v: f64, grouped: bool) -> String {
        match self {
            NumberFormat::Integer => {
                let r = v.round();
                let digits = format!("{:.0}", r.abs());
                let body = if grouped { group_thousands(&digits) } else { digits };
                if r < 0.0 {
                    format!("-{body}")
                } else {
                    body
                }
            }
            NumberFormat::OneDecimal => {
                let s = format!("{:.1}", v);
                if s == "-0.0" {
                    "0.0".into()
                } else {
                    s
                }
            }
            NumberFormat::Percent => format!("{:.0}%", (v * 100.0).round() + 0.0),
        }
    }
}

fn group_thousands(digits: &str) -> String {
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// A named set of intervals keyed by row key (term name, `location`, `curvature`).
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalColumn<T> {
    pub name: String,
    pub intervals: BTreeMap<String, Interval<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriendlyRow<T> {
    pub key: String,
    pub description: String,
    pub estimate: T,
    pub format: NumberFormat,
    pub intervals: Vec<Option<Interval<T>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriendlyTable<T> {
    pub title: String,
    pub interval_names: Vec<String>,
    pub rows: Vec<FriendlyRow<T>>,
    pub footnotes: Vec<String>,
}

fn impact_description(name: &str, estimate: f64) -> String {
    match name {
        "turnover" => "Predicted impact of 1% increase in staff turnover".into(),
        "absenteeism" => "Predicted impact of 1% increase in absenteeism".into(),
        "mean_age" => "Predicted impact of 1 year increase in average age".into(),
        "region" if estimate > 0.0 => {
            "Predicted difference between neighbouring regions (with Region 1 having the lowest performance)".into()
        }
        "region" if estimate < 0.0 => {
            "Predicted difference between neighbouring regions (with Region 1 having the highest performance)".into()
        }
        "region" => "Predicted difference between neighbouring regions".into(),
        other => format!("Predicted impact of 1 unit increase in {other}"),
    }
}

fn reference_phrase(name: &str, v: f64) -> String {
    match name {
        "region" => format!("Region {}", NumberFormat::Integer.render(v, false)),
        "absenteeism" => format!("absenteeism {}%", trim_number(v)),
        "mean_age" => format!("mean age {}", trim_number(v)),
        other => format!("{other} {}", trim_number(v)),
    }
}

fn trim_number(v: f64) -> String {
    let s = format!("{:.1}", v);
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

fn join_phrases(parts: &[String]) -> String {
    match parts {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {}", init.join(", "), last),
    }
}

/// Builds the friendly table for `curve`: location, curvature, control
/// impacts, adjusted R² and optimum prediction for quadratic fits; focal
/// impact, control impacts and adjusted R² for linear fits. Each interval
/// column adds a lower/upper pair; with none the table has estimates only.
pub fn render_friendly_table<T: Scalar>(curve: &CurveSummary<T>, columns: &[IntervalColumn<T>]) -> FriendlyTable<T> {
    let lookup = |key: &str| columns.iter().map(|c| c.intervals.get(key).copied()).collect::<Vec<_>>();
    let none = || vec![None; columns.len()];
    let mut rows = Vec::new();
    let mut footnotes = Vec::new();
    let quadratic = curve.curvature.is_some();
    let title;
    if quadratic {
        title = format!("Parameters for the quadratic model of {} on {}", curve.response, curve.focal);
        if let Some(loc) = curve.location {
            let desc = if curve.focal == "turnover" {
                "Location of optimum (annual % staff turnover)".to_string()
            } else {
                format!("Location of optimum ({})", curve.focal)
            };
            rows.push(FriendlyRow {
                key: "location".into(),
                description: desc,
                estimate: loc,
                format: NumberFormat::OneDecimal,
                intervals: lookup("location"),
            });
            footnotes.push(format!(
                "Location is -b/2a, with a and b the raw-scale coefficients of {0}^2 and {0}.",
                curve.focal
            ));
        }
        let a = curve.curvature.expect("quadratic");
        rows.push(FriendlyRow {
            key: "curvature".into(),
            description: "Curvature".into(),
            estimate: a,
            format: NumberFormat::Integer,
            intervals: lookup("curvature"),
        });
        footnotes.push(format!(
            "Curvature is the raw-scale coefficient of {}^2; negative values mean an inverted U. \
             Moving d units away from the optimum changes the prediction by curvature × d².",
            curve.focal
        ));
    } else {
        title = format!("Linear model of {} on {}", curve.response, curve.focal);
        rows.push(FriendlyRow {
            key: curve.focal.clone(),
            description: impact_description(&curve.focal, curve.focal_slope.as_f64()),
            estimate: curve.focal_slope,
            format: NumberFormat::Integer,
            intervals: lookup(&curve.focal),
        });
    }
    for (name, v) in &curve.impacts {
        rows.push(FriendlyRow {
            key: name.clone(),
            description: impact_description(name, v.as_f64()),
            estimate: *v,
            format: NumberFormat::Integer,
            intervals: lookup(name),
        });
    }
    rows.push(FriendlyRow {
        key: "adj_r2".into(),
        description: "Proportion of variation explained (Adjusted R²)".into(),
        estimate: curve.adj_r2,
        format: NumberFormat::Percent,
        intervals: none(),
    });
    if let Some(opt) = curve.optimum_prediction {
        // Region leads, as in "for Region 1 and mean ...".
        let mut refs: Vec<&(String, T)> = curve.reference.iter().collect();
        refs.sort_by_key(|(k, _)| k != "region");
        let phrases: Vec<String> = refs.iter().map(|(k, v)| reference_phrase(k, v.as_f64())).collect();
        let mut description = format!("Predicted optimum {}", curve.response);
        if !phrases.is_empty() {
            description.push_str(" for ");
            description.push_str(&join_phrases(&phrases));
        }
        rows.push(FriendlyRow {
            key: "optimum_prediction".into(),
            description,
            estimate: opt,
            format: NumberFormat::Integer,
            intervals: lookup("optimum_prediction"),
        });
    }
    if let (Some(below), true) = (curve.below_location, curve.n > 0) {
        let above = curve.n - below;
        let tenth = curve.n as f64 * 0.1;
        if (below as f64) < tenth {
            footnotes.push(format!(
                "Only {below} of {} observations have {} below the optimum, so that side of the curve is largely extrapolated.",
                curve.n, curve.focal
            ));
        } else if (above as f64) < tenth {
            footnotes.push(format!(
                "Only {above} of {} observations have {} at or above the optimum, so that side of the curve is largely extrapolated.",
                curve.n, curve.focal
            ));
        }
    }
    FriendlyTable {
        title,
        interval_names: columns.iter().map(|c| c.name.clone()).collect(),
        rows,
        footnotes,
    }
}

impl<T: Scalar> FriendlyTable<T> {
    fn headers(&self) -> Vec<String> {
        let mut h = vec![String::new(), "Best estimate".to_string()];
        for name in &self.interval_names {
            h.push(format!("Lower limit of {name}"));
            h.push(format!("Upper limit of {name}"));
        }
        h
    }

    fn cells(&self, row: &FriendlyRow<T>, grouped: bool) -> Vec<String> {
        let mut cells = vec![row.description.clone(), row.format.render(row.estimate.as_f64(), grouped)];
        for iv in &row.intervals {
            match iv {
                Some(iv) => {
                    cells.push(row.format.render(iv.lower.as_f64(), grouped));
                    cells.push(row.format.render(iv.upper.as_f64(), grouped));
                }
                None => {
                    cells.push(String::new());
                    cells.push(String::new());
                }
            }
        }
        cells
    }

    pub fn to_markdown(&self) -> String {
        let headers = self.headers();
        let mut out = format!("**{}**\n\n", self.title);
        out.push_str(&format!("| {} |\n", headers.join(" | ")));
        let mut rule = vec!["---".to_string()];
        rule.extend(std::iter::repeat_n("---:".to_string(), headers.len() - 1));
        out.push_str(&format!("| {} |\n", rule.join(" | ")));
        for row in &self.rows {
            let cells = self.cells(row, true);
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        if !self.footnotes.is_empty() {
            out.push('\n');
            for f in &self.footnotes {
                out.push_str(&format!("- {f}\n"));
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut headers = self.headers();
        headers[0] = "description".into();
        w.write_record(&headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(self.cells(row, false)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}
