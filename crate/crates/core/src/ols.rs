//! Ordinary least squares with standard errors, t statistics, two-tailed p
//! values, R², adjusted R² and analytic confidence intervals.
//!
//! Coefficients come from a Householder QR of the design matrix; the normal
//! equations are never formed.

use serde::Serialize;

use crate::dataset::DesignMatrix;
use crate::error::{Error, Result};
use crate::linalg::HouseholderQr;
use crate::tdist::{t_quantile, t_sf};
use crate::{stats, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub labels: Vec<String>,
    /// Unstandardized coefficients, intercept first.
    pub coefficients: Vec<T>,
    pub std_errors: Vec<T>,
    pub t_stats: Vec<T>,
    /// Two-tailed.
    pub p_values: Vec<T>,
    pub residuals: Vec<T>,
    pub df_resid: usize,
    pub r2: T,
    pub adj_r2: T,
    /// Residual variance estimate, RSS / df_resid.
    pub sigma2: T,
}

#[derive(Serialize)]
struct FitJson<'a, T> {
    labels: &'a [String],
    coef: &'a [T],
    se: &'a [T],
    t: &'a [T],
    p: &'a [T],
    r2: T,
    adj_r2: T,
    df: usize,
}

impl<T: Scalar> FitResult<T> {
    pub fn n(&self) -> usize {
        self.residuals.len()
    }

    pub fn term_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn coefficient(&self, label: &str) -> Option<T> {
        self.term_index(label).map(|j| self.coefficients[j])
    }

    /// JSON object with keys `labels, coef, se, t, p, r2, adj_r2, df`.
    /// Floats use the shortest text that parses back to the identical value.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&FitJson {
            labels: &self.labels,
            coef: &self.coefficients,
            se: &self.std_errors,
            t: &self.t_stats,
            p: &self.p_values,
            r2: self.r2,
            adj_r2: self.adj_r2,
            df: self.df_resid,
        })
        .expect("fit serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<T> {
    pub lower: T,
    pub upper: T,
    pub level: T,
}

impl<T: Scalar> Interval<T> {
    pub fn contains(&self, v: T) -> bool {
        self.lower <= v && v <= self.upper
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains(T::zero())
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }
}

fn factor<T: Scalar>(design: &DesignMatrix<T>, y: &[T]) -> Result<HouseholderQr<T>> {
    let (n, p) = (design.rows(), design.cols());
    if y.len() != n {
        return Err(Error::Domain(format!("response has {} values for {n} design rows", y.len())));
    }
    if n <= p {
        return Err(Error::Underdetermined { rows: n, cols: p });
    }
    let qr = HouseholderQr::new(design.columns());
    let diag = qr.r_diagonal();
    let largest = diag.iter().fold(T::zero(), |m, d| m.max(d.abs()));
    if let Some(j) = diag
        .iter()
        .position(|d| !(d.abs() >= T::RANK_TOLERANCE * largest) || *d == T::zero())
    {
        return Err(Error::SingularDesign {
            column: design.labels()[j].clone(),
        });
    }
    Ok(qr)
}

/// Least-squares coefficients only, with the same rank checks as [`fit`].
pub fn least_squares<T: Scalar>(design: &DesignMatrix<T>, y: &[T]) -> Result<Vec<T>> {
    Ok(factor(design, y)?.solve(y))
}

pub(crate) fn two_sided_p<T: Scalar>(t: T, df: usize) -> T {
    (T::lit(2.0) * t_sf(t.abs(), df)).min(T::one())
}

/// Fits `y` on `design` by ordinary least squares.
pub fn fit<T: Scalar>(design: &DesignMatrix<T>, y: &[T]) -> Result<FitResult<T>> {
    let qr = factor(design, y)?;
    let coefficients = qr.solve(y);
    let (n, p) = (design.rows(), design.cols());
    let residuals: Vec<T> = (0..n)
        .map(|i| y[i] - stats::dot(design.row(i), &coefficients))
        .collect();
    let df_resid = n - p;
    let rss: T = residuals.iter().map(|&r| r * r).sum();
    let y_mean = stats::mean(y).expect("n > 0");
    let tss: T = y.iter().map(|&v| (v - y_mean) * (v - y_mean)).sum();
    let r2 = if tss > T::zero() {
        (T::one() - rss / tss).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    let adj_r2 = T::one() - (T::one() - r2) * T::from_count(n - 1) / T::from_count(df_resid);
    let sigma2 = rss / T::from_count(df_resid);
    let std_errors: Vec<T> = qr
        .inverse_gram_diagonal()
        .into_iter()
        .map(|d| (sigma2 * d).sqrt())
        .collect();
    let t_stats: Vec<T> = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(&c, &se)| {
            if se > T::zero() {
                c / se
            } else if c == T::zero() {
                T::zero()
            } else {
                c.signum() * T::infinity()
            }
        })
        .collect();
    let p_values = t_stats.iter().map(|&t| two_sided_p(t, df_resid)).collect();
    Ok(FitResult {
        labels: design.labels().to_vec(),
        coefficients,
        std_errors,
        t_stats,
        p_values,
        residuals,
        df_resid,
        r2,
        adj_r2,
        sigma2,
    })
}

fn check_term<T>(fit: &FitResult<T>, j: usize) -> Result<()> {
    if j >= fit.coefficients.len() {
        return Err(Error::Domain(format!(
            "term index {j} out of range for {} coefficients",
            fit.coefficients.len()
        )));
    }
    Ok(())
}

/// Two-sided interval `coef ∓ t_{1-(1-level)/2, df} · se` for term `j`.
pub fn confidence_interval<T: Scalar>(fit: &FitResult<T>, j: usize, level: T) -> Result<Interval<T>> {
    check_term(fit, j)?;
    if !(level > T::zero() && level < T::one()) {
        return Err(Error::Domain(format!("confidence level {level} outside (0, 1)")));
    }
    let q = t_quantile(T::one() - (T::one() - level) / T::lit(2.0), fit.df_resid)?;
    let half = q * fit.std_errors[j];
    let c = fit.coefficients[j];
    Ok(Interval {
        lower: c - half,
        upper: c + half,
        level,
    })
}

/// Two-tailed p value of term `j`.
pub fn p_value_of<T: Scalar>(fit: &FitResult<T>, j: usize) -> Result<T> {
    check_term(fit, j)?;
    Ok(two_sided_p(fit.t_stats[j], fit.df_resid))
}

/// Standardized coefficients `b_j · sd(x_j) / sd(y)` for every non-intercept term.
pub fn standardize<T: Scalar>(fit: &FitResult<T>, design: &DesignMatrix<T>, y: &[T]) -> Result<Vec<T>> {
    let sd_y = stats::sample_sd(y).unwrap_or_else(T::zero);
    if !(sd_y > T::zero()) {
        return Err(Error::ZeroVariance("response".into()));
    }
    (1..design.cols())
        .map(|j| {
            let sd_x = stats::sample_sd(&design.column(j)).unwrap_or_else(T::zero);
            if !(sd_x > T::zero()) {
                return Err(Error::ZeroVariance(design.labels()[j].clone()));
            }
            Ok(fit.coefficients[j] * sd_x / sd_y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn simple(xs: &[f64]) -> DesignMatrix<f64> {
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        DesignMatrix::from_regressors(&rows, &["x"]).unwrap()
    }

    #[test]
    fn exact_linear_data() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = xs.iter().map(|x| 3.0 + 2.0 * x).collect();
        let f = fit(&simple(&xs), &y).unwrap();
        assert_abs_diff_eq!(f.coefficients[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.coefficients[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.r2, 1.0, epsilon = 1e-12);
        assert!(f.residuals.iter().all(|r| r.abs() < 1e-12));
        assert_eq!(f.df_resid, 3);
    }

    #[test]
    fn constant_response() {
        let xs = [1.0, 4.0, 2.0, 8.0, 5.0];
        let f = fit(&simple(&xs), &[7.0; 5]).unwrap();
        assert_abs_diff_eq!(f.coefficients[1], 0.0, epsilon = 1e-12);
        assert_eq!(f.r2, 0.0);
        assert!(f.adj_r2 <= f.r2);
    }

    #[test]
    fn textbook_simple_regression() {
        // x = 1..5, y = (2, 4, 5, 4, 5): slope 0.6, intercept 2.2, RSS 2.4.
        let f = fit(&simple(&[1.0, 2.0, 3.0, 4.0, 5.0]), &[2.0, 4.0, 5.0, 4.0, 5.0]).unwrap();
        assert_abs_diff_eq!(f.coefficients[0], 2.2, epsilon = 1e-12);
        assert_abs_diff_eq!(f.coefficients[1], 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(f.sigma2, 0.8, epsilon = 1e-12);
        // se(slope) = sqrt(0.8 / 10)
        assert_abs_diff_eq!(f.std_errors[1], 0.08f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(f.r2, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(f.adj_r2, 1.0 - 0.4 * 4.0 / 3.0, epsilon = 1e-12);
        for j in 0..2 {
            assert_abs_diff_eq!(f.t_stats[j], f.coefficients[j] / f.std_errors[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn singular_design_names_column() {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let d = DesignMatrix::from_regressors(&rows, &["x", "twice_x"]).unwrap();
        let y: Vec<f64> = (0..6).map(|i| i as f64 * 1.5 + 0.3 * (i % 2) as f64).collect();
        assert_eq!(fit(&d, &y).unwrap_err(), Error::SingularDesign { column: "twice_x".into() });

        let rows: Vec<Vec<f64>> = (0..6).map(|_| vec![2.0]).collect();
        let d = DesignMatrix::from_regressors(&rows, &["region"]).unwrap();
        assert_eq!(fit(&d, &y).unwrap_err(), Error::SingularDesign { column: "region".into() });
    }

    #[test]
    fn underdetermined() {
        let d = simple(&[1.0, 2.0]);
        assert_eq!(fit(&d, &[1.0, 2.0]).unwrap_err(), Error::Underdetermined { rows: 2, cols: 2 });
    }

    #[test]
    fn interval_limits_and_domain() {
        let f = fit(&simple(&[1.0, 2.0, 3.0, 4.0, 5.0]), &[2.0, 4.0, 5.0, 4.0, 5.0]).unwrap();
        let tiny = confidence_interval(&f, 1, 1e-12).unwrap();
        assert_abs_diff_eq!(tiny.lower, f.coefficients[1], epsilon = 1e-9);
        assert_abs_diff_eq!(tiny.upper, f.coefficients[1], epsilon = 1e-9);
        assert!(confidence_interval(&f, 1, 1.0).is_err());
        assert!(confidence_interval(&f, 1, 0.0).is_err());
        assert!(confidence_interval(&f, 9, 0.95).is_err());
        assert!(p_value_of(&f, 2).is_err());
    }

    /// Fit with the given estimate and standard error on `df` residual degrees of freedom.
    fn synthetic_term(estimate: f64, se: f64, df: usize) -> FitResult<f64> {
        FitResult {
            labels: vec!["intercept".into(), "x".into()],
            coefficients: vec![0.0, estimate],
            std_errors: vec![1.0, se],
            t_stats: vec![0.0, estimate / se],
            p_values: vec![1.0, two_sided_p(estimate / se, df)],
            residuals: vec![0.0; df + 2],
            df_resid: df,
            r2: 0.0,
            adj_r2: 0.0,
            sigma2: 1.0,
        }
    }

    #[test]
    fn interval_recovered_from_back_solved_se() {
        // Half-width of (-3060, -495) about -1778, divided by t(0.975, 105).
        let q = t_quantile(0.975, 105).unwrap();
        let se = (-495.0 - -3060.0) / 2.0 / q;
        assert_abs_diff_eq!(se, 646.8, epsilon = 0.1);
        let f = synthetic_term(-1778.0, se, 105);
        let ci = confidence_interval(&f, 1, 0.95).unwrap();
        assert_abs_diff_eq!(ci.lower, -3060.0, epsilon = 1.0);
        assert_abs_diff_eq!(ci.upper, -496.0, epsilon = 1.0);
        let p = p_value_of(&f, 1).unwrap();
        assert_abs_diff_eq!(p, 0.007, epsilon = 0.001);
        // Interval at level 1 - p touches zero.
        let edge = confidence_interval(&f, 1, 1.0 - p).unwrap();
        assert_abs_diff_eq!(edge.upper, 0.0, epsilon = 1e-6);
        let ci993 = confidence_interval(&f, 1, 0.993).unwrap();
        assert_abs_diff_eq!(ci993.upper, 0.0, epsilon = 25.0);
        assert_abs_diff_eq!(ci993.lower, -3555.0, epsilon = 25.0);
    }

    #[test]
    fn zero_t_gives_unit_p() {
        let f = synthetic_term(0.0, 3.0, 40);
        assert_eq!(p_value_of(&f, 1).unwrap(), 1.0);
    }

    #[test]
    fn standardize_identity_and_errors() {
        // x and y already standardized: slope equals beta.
        let xs = [-1.2649110640673518, -0.6324555320336759, 0.0, 0.6324555320336759, 1.2649110640673518];
        let y = [-1.0, -0.9, 0.3, 0.4, 1.2];
        let d = simple(&xs);
        let f = fit(&d, &y).unwrap();
        let sd_y = stats::sample_sd(&y).unwrap();
        let y_std: Vec<f64> = y.iter().map(|v| v / sd_y).collect();
        let f_std = fit(&d, &y_std).unwrap();
        let beta = standardize(&f_std, &d, &y_std).unwrap();
        assert_abs_diff_eq!(beta[0], f_std.coefficients[1], epsilon = 1e-12);
        assert_abs_diff_eq!(standardize(&f, &d, &y).unwrap()[0], beta[0], epsilon = 1e-12);
        assert_eq!(
            standardize(&f, &d, &[2.0; 5]).unwrap_err(),
            Error::ZeroVariance("response".into())
        );
    }

    #[test]
    fn json_keys_and_order() {
        let f = fit(&simple(&[1.0, 2.0, 3.0, 4.0, 5.0]), &[2.0, 4.0, 5.0, 4.0, 5.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["adj_r2", "coef", "df", "labels", "p", "r2", "se", "t"]);
        assert_eq!(v["df"], 3);
        let coef = v["coef"][1].as_f64().unwrap();
        assert_eq!(coef, f.coefficients[1]);
        let text = f.to_json();
        assert!(text.find("\"labels\"").unwrap() < text.find("\"df\"").unwrap());
    }

    #[test]
    fn single_precision_fit() {
        let xs = [0.0f32, 1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f32> = xs.iter().map(|x| 1.5 - 0.5 * x + if *x as i32 % 2 == 0 { 0.1 } else { -0.1 }).collect();
        let rows: Vec<Vec<f32>> = xs.iter().map(|&x| vec![x]).collect();
        let d = DesignMatrix::from_regressors(&rows, &["x"]).unwrap();
        let f = fit(&d, &y).unwrap();
        let f64_fit = fit(&d.cast::<f64>(), &y.iter().map(|&v| v as f64).collect::<Vec<_>>()).unwrap();
        assert!((f.coefficients[1] as f64 - f64_fit.coefficients[1]).abs() < 1e-5);
        assert!((f.p_values[1] as f64 - f64_fit.p_values[1]).abs() < 1e-4);
    }
}
