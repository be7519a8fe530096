//! Case-resampling bootstrap: percentile intervals, sign and shape confidence
//! levels, and pointwise confidence bands.
//!
//! Resample `r` draws from its own ChaCha8 stream, keyed by the master seed
//! with stream id `r`. The stream depends only on `(seed, r)`, so a run is
//! bit-identical whatever the thread count or scheduling order. A resample
//! whose design is singular is redrawn from the continuation of the same
//! stream; redraws are charged against the plan's skip budget.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{build_design, Dataset, DesignMatrix, ModelSpec};
use crate::error::{Error, Result};
use crate::interpret::{predict_terms, turning_point};
use crate::ols::{least_squares, Interval};
use crate::Scalar;

pub const DEFAULT_RESAMPLES: usize = 10_000;
pub const DEFAULT_SKIP_BUDGET: f64 = 0.01;
pub const DEFAULT_GRID_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResamplePlan {
    pub resamples: usize,
    pub seed: u64,
    /// Fraction of `resamples` that may be redrawn because of singular designs.
    pub skip_budget: f64,
}

impl Default for ResamplePlan {
    fn default() -> Self {
        Self {
            resamples: DEFAULT_RESAMPLES,
            seed: 0,
            skip_budget: DEFAULT_SKIP_BUDGET,
        }
    }
}

impl ResamplePlan {
    pub fn new(resamples: usize, seed: u64) -> Self {
        Self {
            resamples,
            seed,
            ..Self::default()
        }
    }

    pub fn with_skip_budget(mut self, skip_budget: f64) -> Self {
        self.skip_budget = skip_budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.resamples == 0 {
            return Err(Error::Domain("resample count must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.skip_budget) {
            return Err(Error::Domain(format!("skip budget {} outside [0, 1)", self.skip_budget)));
        }
        Ok(())
    }

    /// Total number of singular redraws tolerated.
    pub fn allowed_redraws(&self) -> usize {
        (self.skip_budget * self.resamples as f64).floor() as usize
    }
}

/// Independent random stream for resample `index` under `seed`.
pub fn resample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` uniform draws from `0..n`, with replacement.
pub fn draw_resample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapRun {
    pub plan: ResamplePlan,
    pub spec: ModelSpec,
    pub labels: Vec<String>,
    /// Full-data coefficients.
    pub estimates: Vec<f64>,
    /// One row of coefficients per resample, in resample order.
    pub coefficients: Vec<Vec<f64>>,
    /// Turning point of each resample curve; quadratic specs only.
    pub locations: Option<Vec<f64>>,
    /// Singular resamples discarded and redrawn.
    pub skipped: usize,
}

impl BootstrapRun {
    pub fn resamples(&self) -> usize {
        self.coefficients.len()
    }

    pub fn term_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Resample values of coefficient `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.coefficients.iter().map(|row| row[j]).collect()
    }

    /// Percentile interval of coefficient `j` across resamples.
    pub fn term_interval(&self, j: usize, level: f64) -> Result<Interval<f64>> {
        if j >= self.labels.len() {
            return Err(Error::Domain(format!("term index {j} out of range")));
        }
        percentile_interval(&self.column(j), level)
    }

    /// Percentile interval of the turning point, over resamples where it exists.
    pub fn location_interval(&self, level: f64) -> Result<Interval<f64>> {
        let locs = self.locations.as_ref().ok_or(Error::NotQuadratic)?;
        let finite: Vec<f64> = locs.iter().copied().filter(|v| v.is_finite()).collect();
        percentile_interval(&finite, level)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("run serializes")
    }

    /// One row per resample, columns named by term.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["resample".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (r, row) in self.coefficients.iter().enumerate() {
            let mut rec = vec![r.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn fit_resample(
    design: &DesignMatrix<f64>,
    y: &[f64],
    plan: &ResamplePlan,
    index: usize,
    max_redraws: usize,
) -> Result<(Vec<f64>, usize)> {
    let n = design.rows();
    let mut rng = resample_stream(plan.seed, index as u64);
    let mut redraws = 0;
    loop {
        let rows = draw_resample(n, &mut rng);
        let x = design.select_rows(&rows);
        let yr: Vec<f64> = rows.iter().map(|&i| y[i]).collect();
        match least_squares(&x, &yr) {
            Ok(c) => return Ok((c, redraws)),
            Err(Error::SingularDesign { .. }) => {
                redraws += 1;
                if redraws > max_redraws {
                    return Err(Error::TooManySingular {
                        skipped: redraws,
                        allowed: max_redraws,
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// Runs the bootstrap on the current rayon pool.
pub fn run_bootstrap(ds: &Dataset, spec: &ModelSpec, plan: &ResamplePlan) -> Result<BootstrapRun> {
    plan.validate()?;
    let (design, y) = build_design(ds, spec)?;
    let estimates = least_squares(&design, &y)?;
    let allowed = plan.allowed_redraws();
    let outcomes: Vec<Result<(Vec<f64>, usize)>> = (0..plan.resamples)
        .into_par_iter()
        .map(|r| fit_resample(&design, &y, plan, r, allowed))
        .collect();

    let mut coefficients = Vec::with_capacity(plan.resamples);
    let mut skipped = 0usize;
    let mut failure = None;
    for outcome in outcomes {
        match outcome {
            Ok((c, redraws)) => {
                skipped += redraws;
                coefficients.push(c);
            }
            Err(Error::TooManySingular { skipped: s, .. }) => skipped += s,
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    if skipped > allowed || coefficients.len() != plan.resamples {
        return Err(Error::TooManySingular { skipped, allowed });
    }
    if skipped > 0 {
        log::info!("redrew {skipped} singular resamples (budget {allowed})");
    }

    let labels = design.labels().to_vec();
    let locations = if spec.quadratic {
        let (jb, ja) = (1, 2);
        Some(
            coefficients
                .iter()
                .map(|c| turning_point(c[ja], c[jb]).unwrap_or(f64::NAN))
                .collect(),
        )
    } else {
        None
    };
    Ok(BootstrapRun {
        plan: *plan,
        spec: spec.clone(),
        labels,
        estimates,
        coefficients,
        locations,
        skipped,
    })
}

/// Runs the bootstrap on a dedicated pool of `threads` workers.
pub fn run_bootstrap_with_threads(
    ds: &Dataset,
    spec: &ModelSpec,
    plan: &ResamplePlan,
    threads: usize,
) -> Result<BootstrapRun> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_bootstrap(ds, spec, plan))
}

fn sorted_finite<T: Scalar>(values: &[T]) -> Result<Vec<T>> {
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Domain("NaN among bootstrap values".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    Ok(v)
}

/// Quantile `q` of ascending `sorted` values: rank `r = q (B + 1)` on the
/// 1-based order statistics, linear interpolation between neighbours,
/// clamped to the extremes.
pub fn quantile_sorted<T: Scalar>(sorted: &[T], q: T) -> T {
    let b = sorted.len();
    assert!(b > 0, "quantile of empty sample");
    let r = q * T::from_count(b + 1);
    if r <= T::one() {
        return sorted[0];
    }
    if r >= T::from_count(b) {
        return sorted[b - 1];
    }
    let lo = r.floor();
    let frac = r - lo;
    let i = lo.to_usize().expect("rank in range");
    sorted[i - 1] + frac * (sorted[i] - sorted[i - 1])
}

/// Percentile interval at `level` from the `(1 - level)/2` and
/// `1 - (1 - level)/2` quantiles.
pub fn percentile_interval<T: Scalar>(values: &[T], level: T) -> Result<Interval<T>> {
    if values.len() < 2 {
        return Err(Error::Domain(format!("percentile interval needs at least 2 values, got {}", values.len())));
    }
    if !(level > T::zero() && level < T::one()) {
        return Err(Error::Domain(format!("confidence level {level} outside (0, 1)")));
    }
    let sorted = sorted_finite(values)?;
    let tail = (T::one() - level) / T::lit(2.0);
    Ok(Interval {
        lower: quantile_sorted(&sorted, tail),
        upper: quantile_sorted(&sorted, T::one() - tail),
        level,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Negative,
    Positive,
}

/// Fraction of resample coefficients strictly on `side` of zero.
pub fn sign_confidence(run: &BootstrapRun, term: usize, side: Side) -> Result<f64> {
    if term >= run.labels.len() {
        return Err(Error::Domain(format!("term index {term} out of range")));
    }
    let hits = run
        .coefficients
        .iter()
        .filter(|c| match side {
            Side::Negative => c[term] < 0.0,
            Side::Positive => c[term] > 0.0,
        })
        .count();
    Ok(hits as f64 / run.resamples() as f64)
}

/// Fraction of resamples with negative curvature and a positive turning point.
pub fn shape_confidence(run: &BootstrapRun) -> Result<f64> {
    if !run.spec.quadratic {
        return Err(Error::NotQuadratic);
    }
    let hits = run
        .coefficients
        .iter()
        .filter(|c| {
            let (b, a) = (c[1], c[2]);
            a < 0.0 && turning_point(a, b).is_ok_and(|loc| loc > 0.0)
        })
        .count();
    Ok(hits as f64 / run.resamples() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Band {
    pub grid: Vec<f64>,
    pub lower: Vec<f64>,
    /// Full-data prediction.
    pub center: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
}

impl Band {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("grid,lower,center,upper\n");
        for i in 0..self.grid.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.grid[i], self.lower[i], self.center[i], self.upper[i]
            ));
        }
        out
    }
}

/// Covariates for predicting at focal value `x`.
fn at_focal(reference: &BTreeMap<String, f64>, focal: &str, x: f64) -> BTreeMap<String, f64> {
    let mut m = reference.clone();
    m.insert(focal.to_string(), x);
    m
}

/// Prediction curve over `grid` for one coefficient vector.
pub fn curve(
    labels: &[String],
    coefficients: &[f64],
    focal: &str,
    grid: &[f64],
    reference: &BTreeMap<String, f64>,
) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&x| predict_terms(labels, coefficients, focal, &at_focal(reference, focal, x)))
        .collect()
}

/// Pointwise percentile band of resample predictions over `grid`.
pub fn confidence_band(
    run: &BootstrapRun,
    grid: &[f64],
    reference: &BTreeMap<String, f64>,
    level: f64,
) -> Result<Band> {
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("grid must be strictly ascending".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("confidence level {level} outside (0, 1)")));
    }
    let focal = &run.spec.focal;
    let center = curve(&run.labels, &run.estimates, focal, grid, reference)?;
    let tail = (1.0 - level) / 2.0;
    let mut lower = Vec::with_capacity(grid.len());
    let mut upper = Vec::with_capacity(grid.len());
    for &x in grid {
        let cov = at_focal(reference, focal, x);
        let preds = run
            .coefficients
            .iter()
            .map(|c| predict_terms(&run.labels, c, focal, &cov))
            .collect::<Result<Vec<f64>>>()?;
        let sorted = sorted_finite(&preds)?;
        lower.push(quantile_sorted(&sorted, tail));
        upper.push(quantile_sorted(&sorted, 1.0 - tail));
    }
    Ok(Band {
        grid: grid.to_vec(),
        lower,
        center,
        upper,
        level,
    })
}

/// Observed range of the focal column.
pub fn focal_range(ds: &Dataset, spec: &ModelSpec) -> Result<(f64, f64)> {
    let xs = ds.column(&spec.focal)?;
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((min, max))
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![lo],
        _ => (0..points)
            .map(|i| {
                if i == points - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (points - 1) as f64
                }
            })
            .collect(),
    }
}

/// Evenly spaced grid over the observed focal range.
pub fn default_grid(ds: &Dataset, spec: &ModelSpec, points: usize) -> Result<Vec<f64>> {
    let (lo, hi) = focal_range(ds, spec)?;
    Ok(linear_grid(lo, hi, points))
}

/// Rejects grid values outside the observed focal range unless extrapolation is allowed.
pub fn check_grid(grid: &[f64], ds: &Dataset, spec: &ModelSpec, allow_extrapolation: bool) -> Result<()> {
    if allow_extrapolation {
        return Ok(());
    }
    let (min, max) = focal_range(ds, spec)?;
    match grid.iter().find(|&&x| x < min || x > max) {
        Some(&value) => Err(Error::OutsideRange { value, min, max }),
        None => Ok(()),
    }
}
