//! Standalone SVG 1.1 figures with CSV sidecars holding the plotted series.
//!
//! Markers are `<circle>` elements, prediction curves `<polyline>` elements
//! and confidence bands a single `<polygon>`; legends and axes use `<rect>`,
//! `<line>` and `<text>` only, so element counts identify plotted series.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::bootstrap::{curve, default_grid, Band, BootstrapRun, DEFAULT_GRID_POINTS};
use crate::dataset::{Dataset, ModelSpec};
use crate::error::{Error, Result};
use crate::ols::FitResult;

const REGION_COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub width: f64,
    pub height: f64,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

impl FigureSpec {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            width: 720.0,
            height: 480.0,
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0) {
            return Err(Error::Domain("figure dimensions must be positive".into()));
        }
        Ok(())
    }
}

/// Affine map from data coordinates to pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub left: f64,
    pub right: f64,
    pub top: f64,
    pub bottom: f64,
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let span = if span > 0.0 {
        span
    } else if lo != 0.0 {
        lo.abs() * 0.1
    } else {
        1.0
    };
    (lo - 0.05 * span, hi + 0.05 * span)
}

impl Frame {
    /// Frame covering every point with 5% padding on each side.
    pub fn covering(xs: &[f64], ys: &[f64], spec: &FigureSpec) -> Frame {
        let range = |v: &[f64]| {
            v.iter()
                .filter(|x| x.is_finite())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
        };
        let (mut x0, mut x1) = range(xs);
        let (mut y0, mut y1) = range(ys);
        if x0 > x1 {
            (x0, x1) = (0.0, 1.0);
        }
        if y0 > y1 {
            (y0, y1) = (0.0, 1.0);
        }
        let (x_min, x_max) = padded(x0, x1);
        let (y_min, y_max) = padded(y0, y1);
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
            left: 90.0,
            right: spec.width - 20.0,
            top: 40.0,
            bottom: spec.height - 50.0,
        }
    }

    pub fn to_px(&self, x: f64, y: f64) -> (f64, f64) {
        let px = self.left + (x - self.x_min) / (self.x_max - self.x_min) * (self.right - self.left);
        let py = self.bottom - (y - self.y_min) / (self.y_max - self.y_min) * (self.bottom - self.top);
        (px, py)
    }

    pub fn from_px(&self, px: f64, py: f64) -> (f64, f64) {
        let x = self.x_min + (px - self.left) / (self.right - self.left) * (self.x_max - self.x_min);
        let y = self.y_min + (self.bottom - py) / (self.bottom - self.top) * (self.y_max - self.y_min);
        (x, y)
    }
}

/// Rendered figure: SVG text, sidecar CSV and the frame used for drawing.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub svg: String,
    pub csv: String,
    pub frame: Frame,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn tick_label(v: f64, span: f64) -> String {
    if span >= 100.0 {
        format!("{:.0}", v)
    } else if span >= 1.0 {
        format!("{:.1}", v)
    } else {
        format!("{:.3}", v)
    }
}

struct Canvas {
    out: String,
    frame: Frame,
}

impl Canvas {
    fn new(spec: &FigureSpec, frame: Frame) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = spec.width,
            h = spec.height
        );
        let _ = writeln!(out, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, spec.width, spec.height);
        let mut c = Canvas { out, frame };
        c.axes(spec);
        c
    }

    fn axes(&mut self, spec: &FigureSpec) {
        let f = self.frame;
        let _ = writeln!(
            self.out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black"/>"#,
            f.left, f.bottom, f.right, f.bottom
        );
        let _ = writeln!(
            self.out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black"/>"#,
            f.left, f.top, f.left, f.bottom
        );
        for i in 0..=5 {
            let t = i as f64 / 5.0;
            let xv = f.x_min + t * (f.x_max - f.x_min);
            let (px, _) = f.to_px(xv, f.y_min);
            let _ = writeln!(
                self.out,
                r#"<line x1="{px:.3}" y1="{:.3}" x2="{px:.3}" y2="{:.3}" stroke="black"/>"#,
                f.bottom,
                f.bottom + 5.0
            );
            let _ = writeln!(
                self.out,
                r#"<text x="{px:.3}" y="{:.3}" font-size="11" text-anchor="middle">{}</text>"#,
                f.bottom + 18.0,
                tick_label(xv, f.x_max - f.x_min)
            );
            let yv = f.y_min + t * (f.y_max - f.y_min);
            let (_, py) = f.to_px(f.x_min, yv);
            let _ = writeln!(
                self.out,
                r#"<line x1="{:.3}" y1="{py:.3}" x2="{:.3}" y2="{py:.3}" stroke="black"/>"#,
                f.left - 5.0,
                f.left
            );
            let _ = writeln!(
                self.out,
                r#"<text x="{:.3}" y="{:.3}" font-size="11" text-anchor="end">{}</text>"#,
                f.left - 8.0,
                py + 4.0,
                tick_label(yv, f.y_max - f.y_min)
            );
        }
        let _ = writeln!(
            self.out,
            r#"<text x="{:.3}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
            (f.left + f.right) / 2.0,
            escape(&spec.title)
        );
        let _ = writeln!(
            self.out,
            r#"<text x="{:.3}" y="{:.3}" font-size="13" text-anchor="middle">{}</text>"#,
            (f.left + f.right) / 2.0,
            spec.height - 12.0,
            escape(&spec.x_label)
        );
        let _ = writeln!(
            self.out,
            r#"<text x="16" y="{y:.3}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {y:.3})">{}</text>"#,
            escape(&spec.y_label),
            y = (f.top + f.bottom) / 2.0
        );
    }

    fn points(&self, xs: &[f64], ys: &[f64]) -> String {
        xs.iter()
            .zip(ys)
            .map(|(&x, &y)| {
                let (px, py) = self.frame.to_px(x, y);
                format!("{px:.3},{py:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn markers(&mut self, xs: &[f64], ys: &[f64], fill: impl Fn(usize) -> &'static str) {
        for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
            let (px, py) = self.frame.to_px(x, y);
            let _ = writeln!(
                self.out,
                r#"<circle cx="{px:.3}" cy="{py:.3}" r="3" fill="{}" fill-opacity="0.7"/>"#,
                fill(i)
            );
        }
    }

    fn line(&mut self, xs: &[f64], ys: &[f64], stroke: &str, width: f64, class: &str) {
        let _ = writeln!(
            self.out,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            self.points(xs, ys)
        );
    }

    fn band(&mut self, xs: &[f64], lower: &[f64], upper: &[f64]) {
        let mut bx: Vec<f64> = xs.to_vec();
        let mut by: Vec<f64> = upper.to_vec();
        bx.extend(xs.iter().rev());
        by.extend(lower.iter().rev());
        let _ = writeln!(
            self.out,
            r##"<polygon class="band" points="{}" fill="#9ecae1" fill-opacity="0.6" stroke="none"/>"##,
            self.points(&bx, &by)
        );
    }

    fn legend(&mut self, entries: &[(&str, String)]) {
        let x = self.frame.right - 150.0;
        for (i, (color, label)) in entries.iter().enumerate() {
            let y = self.frame.top + 8.0 + 18.0 * i as f64;
            let _ = writeln!(
                self.out,
                r#"<rect x="{x:.3}" y="{y:.3}" width="12" height="12" fill="{color}"/>"#
            );
            let _ = writeln!(
                self.out,
                r#"<text x="{:.3}" y="{:.3}" font-size="12">{}</text>"#,
                x + 18.0,
                y + 10.0,
                escape(label)
            );
        }
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

struct SeriesCsv(String);

impl SeriesCsv {
    fn new() -> Self {
        SeriesCsv("series,x,y\n".into())
    }

    fn add(&mut self, name: &str, xs: &[f64], ys: &[f64]) {
        for (x, y) in xs.iter().zip(ys) {
            let _ = writeln!(self.0, "{name},{x},{y}");
        }
    }
}

fn with_region(reference: &BTreeMap<String, f64>, region: f64) -> BTreeMap<String, f64> {
    let mut r = reference.clone();
    r.insert("region".into(), region);
    r
}

fn data_xy(ds: &Dataset, spec: &ModelSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok((ds.column(&spec.focal)?, ds.column(&spec.response)?))
}

/// Data markers plus the fitted curve at the reference covariates.
pub fn scatter_with_curve(
    ds: &Dataset,
    fit: &FitResult<f64>,
    spec: &ModelSpec,
    reference: &BTreeMap<String, f64>,
    fig: &FigureSpec,
) -> Result<Figure> {
    fig.validate()?;
    let (xs, ys) = data_xy(ds, spec)?;
    let grid = default_grid(ds, spec, DEFAULT_GRID_POINTS)?;
    let pred = curve(&fit.labels, &fit.coefficients, &spec.focal, &grid, reference)?;
    let all_y: Vec<f64> = ys.iter().chain(&pred).copied().collect();
    let frame = Frame::covering(&xs, &all_y, fig);
    let mut c = Canvas::new(fig, frame);
    c.markers(&xs, &ys, |_| "#555555");
    c.line(&grid, &pred, "black", 2.5, "fit");
    let mut csv = SeriesCsv::new();
    csv.add("data", &xs, &ys);
    csv.add("curve", &grid, &pred);
    Ok(Figure {
        svg: c.finish(),
        csv: csv.0,
        frame,
    })
}

/// One curve per region (1, 2, 3) with markers coloured by region.
pub fn region_curves(
    ds: &Dataset,
    fit: &FitResult<f64>,
    spec: &ModelSpec,
    reference: &BTreeMap<String, f64>,
    fig: &FigureSpec,
) -> Result<Figure> {
    fig.validate()?;
    if !spec.controls.iter().any(|c| c == "region") {
        return Err(Error::InvalidSpec("region curves need region as a control".into()));
    }
    let (xs, ys) = data_xy(ds, spec)?;
    let regions: Vec<usize> = ds.records().iter().map(|r| usize::from(r.region) - 1).collect();
    let grid = default_grid(ds, spec, DEFAULT_GRID_POINTS)?;
    let curves = (1..=3)
        .map(|r| curve(&fit.labels, &fit.coefficients, &spec.focal, &grid, &with_region(reference, r as f64)))
        .collect::<Result<Vec<_>>>()?;
    let all_y: Vec<f64> = ys.iter().chain(curves.iter().flatten()).copied().collect();
    let frame = Frame::covering(&xs, &all_y, fig);
    let mut c = Canvas::new(fig, frame);
    c.markers(&xs, &ys, |i| REGION_COLORS[regions[i]]);
    let mut csv = SeriesCsv::new();
    for (r, pred) in curves.iter().enumerate() {
        c.line(&grid, pred, REGION_COLORS[r], 2.0, &format!("region{}", r + 1));
        let (rx, ry): (Vec<f64>, Vec<f64>) = (0..xs.len()).filter(|&i| regions[i] == r).map(|i| (xs[i], ys[i])).unzip();
        csv.add(&format!("data_region{}", r + 1), &rx, &ry);
    }
    for (r, pred) in curves.iter().enumerate() {
        csv.add(&format!("curve_region{}", r + 1), &grid, pred);
    }
    c.legend(&[
        (REGION_COLORS[0], "Region 1".into()),
        (REGION_COLORS[1], "Region 2".into()),
        (REGION_COLORS[2], "Region 3".into()),
    ]);
    Ok(Figure {
        svg: c.finish(),
        csv: csv.0,
        frame,
    })
}

/// Full-data curve in bold over the first `k` resample curves.
pub fn spaghetti(
    run: &BootstrapRun,
    k: usize,
    grid: &[f64],
    reference: &BTreeMap<String, f64>,
    fig: &FigureSpec,
) -> Result<Figure> {
    fig.validate()?;
    if k > run.resamples() {
        return Err(Error::Domain(format!("asked for {k} resample curves but the run has {}", run.resamples())));
    }
    let focal = &run.spec.focal;
    let full = curve(&run.labels, &run.estimates, focal, grid, reference)?;
    let resampled = run.coefficients[..k]
        .iter()
        .map(|c| curve(&run.labels, c, focal, grid, reference))
        .collect::<Result<Vec<_>>>()?;
    let all_y: Vec<f64> = full.iter().chain(resampled.iter().flatten()).copied().collect();
    let frame = Frame::covering(grid, &all_y, fig);
    let mut c = Canvas::new(fig, frame);
    let mut csv = SeriesCsv::new();
    csv.add("data", grid, &full);
    for (r, pred) in resampled.iter().enumerate() {
        c.line(grid, pred, "#888888", 1.0, "resample");
        csv.add(&format!("resample{}", r + 1), grid, pred);
    }
    c.line(grid, &full, "black", 3.0, "bold");
    Ok(Figure {
        svg: c.finish(),
        csv: csv.0,
        frame,
    })
}

/// Shaded band between lower and upper with the centre curve on top;
/// data markers when a dataset is given.
pub fn band_figure(band: &Band, data: Option<(&Dataset, &ModelSpec)>, fig: &FigureSpec) -> Result<Figure> {
    fig.validate()?;
    let (xs, ys) = match data {
        Some((ds, spec)) => data_xy(ds, spec)?,
        None => (vec![], vec![]),
    };
    let all_x: Vec<f64> = band.grid.iter().chain(&xs).copied().collect();
    let all_y: Vec<f64> = band.lower.iter().chain(&band.upper).chain(&band.center).chain(&ys).copied().collect();
    let frame = Frame::covering(&all_x, &all_y, fig);
    let mut c = Canvas::new(fig, frame);
    c.band(&band.grid, &band.lower, &band.upper);
    c.markers(&xs, &ys, |_| "#555555");
    c.line(&band.grid, &band.center, "black", 2.0, "center");
    Ok(Figure {
        svg: c.finish(),
        csv: band.to_csv(),
        frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bootstrap::{confidence_band, run_bootstrap, ResamplePlan};
    use crate::dataset::build_design;
    use crate::ols::fit;
    use crate::synth_oracle::{generate, DgpParams};
    use proptest::prelude::*;

    fn count(svg: &str, tag: &str) -> usize {
        svg.matches(&format!("<{tag} ")).count()
    }

    fn setup(quadratic: bool) -> (Dataset, ModelSpec, FitResult<f64>, BTreeMap<String, f64>) {
        let ds = generate(&DgpParams::default()).unwrap();
        let spec = ModelSpec::office_model(quadratic);
        let (x, y) = build_design(&ds, &spec).unwrap();
        let f = fit(&x, &y).unwrap();
        let reference = BTreeMap::from([
            ("absenteeism".to_string(), 3.8),
            ("mean_age".to_string(), 28.0),
            ("region".to_string(), 1.0),
        ]);
        (ds, spec, f, reference)
    }

    fn fig() -> FigureSpec {
        FigureSpec::new("t", "Turnover (%)", "Performance")
    }

    fn series(csv: &str, name: &str) -> Vec<(f64, f64)> {
        csv.lines()
            .skip(1)
            .filter_map(|l| {
                let mut it = l.split(',');
                (it.next()? == name).then(|| (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap()))
            })
            .collect()
    }

    fn polygon_points(svg: &str) -> Vec<(f64, f64)> {
        let start = svg.find("<polygon").unwrap();
        let pts = &svg[start..];
        let pts = &pts[pts.find("points=\"").unwrap() + 8..];
        let pts = &pts[..pts.find('"').unwrap()];
        pts.split(' ')
            .map(|p| {
                let (a, b) = p.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn scatter_counts() {
        let (ds, spec, f, reference) = setup(true);
        let figure = scatter_with_curve(&ds, &f, &spec, &reference, &fig()).unwrap();
        assert_eq!(count(&figure.svg, "circle"), 110);
        assert_eq!(count(&figure.svg, "polyline"), 1);
        assert!(figure.svg.starts_with("<?xml"));
        assert_eq!(series(&figure.csv, "data").len(), 110);
        assert_eq!(series(&figure.csv, "curve").len(), 100);
    }

    #[test]
    fn linear_curve_is_straight() {
        let (ds, spec, f, reference) = setup(false);
        let figure = scatter_with_curve(&ds, &f, &spec, &reference, &fig()).unwrap();
        let pts = series(&figure.csv, "curve");
        let (x0, y0) = pts[0];
        let (x1, y1) = pts[pts.len() - 1];
        let slope = (y1 - y0) / (x1 - x0);
        for &(x, y) in &pts {
            let expect = y0 + slope * (x - x0);
            assert!((y - expect).abs() <= 1e-6 * y0.abs().max(1.0));
        }
    }

    #[test]
    fn missing_reference_propagates() {
        let (ds, spec, f, _) = setup(true);
        let err = scatter_with_curve(&ds, &f, &spec, &BTreeMap::new(), &fig()).unwrap_err();
        assert!(matches!(err, Error::MissingCovariate(_)));
    }

    #[test]
    fn region_curves_are_translates() {
        let (ds, spec, f, reference) = setup(true);
        let figure = region_curves(&ds, &f, &spec, &reference, &fig()).unwrap();
        assert_eq!(count(&figure.svg, "polyline"), 3);
        assert_eq!(count(&figure.svg, "circle"), 110);
        assert!(figure.svg.contains("Region 3"));
        let gap = f.coefficient("region").unwrap();
        let c1 = series(&figure.csv, "curve_region1");
        let c2 = series(&figure.csv, "curve_region2");
        let c3 = series(&figure.csv, "curve_region3");
        for i in 0..c1.len() {
            assert!((c2[i].1 - c1[i].1 - gap).abs() < 1e-6);
            assert!((c3[i].1 - c2[i].1 - gap).abs() < 1e-6);
        }
        let mut zero = f.clone();
        let j = zero.term_index("region").unwrap();
        zero.coefficients[j] = 0.0;
        let flat = region_curves(&ds, &zero, &spec, &reference, &fig()).unwrap();
        assert_eq!(series(&flat.csv, "curve_region1"), series(&flat.csv, "curve_region3"));
    }

    #[test]
    fn spaghetti_structure_and_determinism() {
        let (ds, spec, _, reference) = setup(true);
        let run = run_bootstrap(&ds, &spec, &ResamplePlan::new(5, 0)).unwrap();
        let grid = default_grid(&ds, &spec, 50).unwrap();
        let a = spaghetti(&run, 5, &grid, &reference, &fig()).unwrap();
        assert_eq!(count(&a.svg, "polyline"), 6);
        assert_eq!(a.svg.matches("class=\"bold\"").count(), 1);
        let only = spaghetti(&run, 0, &grid, &reference, &fig()).unwrap();
        assert_eq!(count(&only.svg, "polyline"), 1);
        assert!(spaghetti(&run, 6, &grid, &reference, &fig()).is_err());
        let again = run_bootstrap(&ds, &spec, &ResamplePlan::new(5, 0)).unwrap();
        assert_eq!(spaghetti(&again, 5, &grid, &reference, &fig()).unwrap().svg, a.svg);
    }

    #[test]
    fn band_polygon_and_nesting() {
        let (ds, spec, _, reference) = setup(true);
        let run = run_bootstrap(&ds, &spec, &ResamplePlan::new(500, 3)).unwrap();
        let grid = default_grid(&ds, &spec, 100).unwrap();
        let b95 = confidence_band(&run, &grid, &reference, 0.95).unwrap();
        let b99 = confidence_band(&run, &grid, &reference, 0.99).unwrap();
        let f95 = band_figure(&b95, Some((&ds, &spec)), &fig()).unwrap();
        let f99 = band_figure(&b99, None, &fig()).unwrap();
        let p95 = polygon_points(&f95.svg);
        let p99 = polygon_points(&f99.svg);
        assert_eq!(p95.len(), 200);
        assert_eq!(count(&f95.svg, "circle"), 110);
        assert_eq!(count(&f99.svg, "circle"), 0);
        // Back to data space; pixel coordinates carry 3 decimals.
        let to_data = |f: &Figure, pts: &[(f64, f64)]| -> Vec<(f64, f64)> {
            pts.iter().map(|&(px, py)| f.frame.from_px(px, py)).collect()
        };
        let d95 = to_data(&f95, &p95);
        let d99 = to_data(&f99, &p99);
        let tol = |f: &Figure| 2e-3 * (f.frame.y_max - f.frame.y_min) / (f.frame.bottom - f.frame.top);
        let slack = tol(&f95) + tol(&f99);
        for i in 0..100 {
            // Upper edge runs forward, lower edge backward.
            assert!(d99[i].1 + slack >= d95[i].1);
            assert!(d99[199 - i].1 <= d95[199 - i].1 + slack);
        }
    }

    #[test]
    fn degenerate_band_collapses() {
        let band = Band {
            grid: vec![1.0, 2.0, 3.0],
            lower: vec![5.0, 6.0, 7.0],
            center: vec![5.0, 6.0, 7.0],
            upper: vec![5.0, 6.0, 7.0],
            level: 0.95,
        };
        let f = band_figure(&band, None, &fig()).unwrap();
        let pts = polygon_points(&f.svg);
        for i in 0..3 {
            assert_eq!(pts[i], pts[5 - i]);
        }
    }

    #[test]
    fn rejects_bad_dimensions() {
        let band = Band {
            grid: vec![1.0],
            lower: vec![1.0],
            center: vec![1.0],
            upper: vec![1.0],
            level: 0.9,
        };
        let mut spec = fig();
        spec.width = 0.0;
        assert!(band_figure(&band, None, &spec).is_err());
    }

    proptest! {
        #[test]
        fn frame_round_trip(x0 in -1e5f64..1e5, dx in 1e-3f64..1e5, y0 in -1e6f64..1e6, dy in 1e-3f64..1e6, t in 0.0f64..1.0, s in 0.0f64..1.0) {
            let frame = Frame::covering(&[x0, x0 + dx], &[y0, y0 + dy], &fig());
            let (x, y) = (x0 + t * dx, y0 + s * dy);
            let (px, py) = frame.to_px(x, y);
            prop_assert!(px >= frame.left && px <= frame.right && py >= frame.top && py <= frame.bottom);
            let (bx, by) = frame.from_px(px, py);
            prop_assert!((bx - x).abs() <= 1e-9 * dx.max(x.abs()));
            prop_assert!((by - y).abs() <= 1e-9 * dy.max(y.abs()));
        }
    }
}
