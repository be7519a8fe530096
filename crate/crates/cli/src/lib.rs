//! Command-line front end for curvboot: fit, bootstrap, band, figures,
//! synthetic data and markdown reports.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical or model error,
//! 4 usage or guard error.

pub mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};
use curvboot::bootstrap::{
    check_grid, confidence_band, default_grid, linear_grid, run_bootstrap, run_bootstrap_with_threads,
    shape_confidence, sign_confidence, Side,
};
use curvboot::dataset::{build_design, INTERCEPT_LABEL};
use curvboot::figures::{band_figure, region_curves, scatter_with_curve, spaghetti, Figure, FigureSpec};
use curvboot::interpret::{
    reference_covariates, render_friendly_table, NumberFormat, sign_confidence_from_p, summarize_curve, IntervalColumn,
};
use curvboot::ols::{confidence_interval, fit};
use curvboot::synth_oracle::{generate, DgpParams, DEFAULT_SEED};
use curvboot::{BootstrapRun, Curve, Dataset, ErrorKind, Fit, ModelSpec, ResamplePlan, Shape};
use serde::Serialize;

use config::{FileConfig, Format, RunConfig, DEFAULT_CONTROLS, DEFAULT_SPAGHETTI};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] curvboot::Error),
    #[error("invalid parameter: {0}")]
    BadParams(curvboot::Error),
    #[error("cannot read {}: {reason}", path.display())]
    Io { path: PathBuf, reason: String },
    #[error("cannot write {}: {reason}", path.display())]
    Write { path: PathBuf, reason: String },
    #[error("bad config file {}: {reason}", path.display())]
    Config { path: PathBuf, reason: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Numerical => 3,
                ErrorKind::Usage => 4,
            },
            CliError::BadParams(_) | CliError::Io { .. } | CliError::Write { .. } | CliError::Config { .. } => 2,
            CliError::Usage(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "curvboot", version, about = "Curvilinear regression with bootstrap confidence levels")]
pub struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the model and write fit.json and the friendly table.
    Fit(RunArgs),
    /// Bootstrap the model and write bootstrap.json.
    Boot(RunArgs),
    /// Write the bootstrap confidence band over a focal grid to band.csv.
    Band(RunArgs),
    /// Write fig1.svg to fig4.svg with CSV sidecars.
    Figures(RunArgs),
    /// Generate a synthetic office dataset to data.csv.
    Synth(SynthArgs),
    /// Write report.md combining fit, bootstrap and figures.
    Report(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub response: Option<String>,
    #[arg(long)]
    pub focal: Option<String>,
    /// Add the squared focal term.
    #[arg(long, conflicts_with = "linear")]
    pub quadratic: bool,
    /// Drop the squared focal term even if the config asks for it.
    #[arg(long)]
    pub linear: bool,
    /// Comma-separated control columns; an empty value means none.
    #[arg(long, value_delimiter = ',')]
    pub controls: Option<Vec<String>>,
    /// Reference value for a control in prediction curves, as name=value.
    #[arg(long = "ref", value_name = "NAME=VALUE", value_parser = parse_ref)]
    pub reference: Vec<(String, f64)>,
    #[arg(long)]
    pub resamples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Confidence level in (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<f64>,
    /// Number of focal grid points for bands and curves.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Focal grid bounds as lo,hi instead of the observed range.
    #[arg(long, value_name = "LO,HI", value_parser = parse_range, allow_hyphen_values = true)]
    pub grid_range: Option<(f64, f64)>,
    #[arg(long)]
    pub allow_extrapolation: bool,
    /// Tolerated fraction of singular resamples redrawn.
    #[arg(long, allow_hyphen_values = true)]
    pub skip_budget: Option<f64>,
    /// Resample curves drawn in fig3.
    #[arg(long)]
    pub spaghetti: Option<usize>,
    /// Worker threads for the bootstrap; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of json,csv,md,svg.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub noise_sd: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_ref(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    Ok((num(lo)?, num(hi)?))
}

/// Merges flags over the config file over built-in defaults.
pub fn resolve(args: &RunArgs) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let response = args.response.clone().or(file.response).unwrap_or_else(|| "performance".into());
    let focal = args.focal.clone().or(file.focal).unwrap_or_else(|| "turnover".into());
    let quadratic = if args.quadratic {
        true
    } else if args.linear {
        false
    } else {
        file.quadratic.unwrap_or(false)
    };
    let controls: Vec<String> = args
        .controls
        .clone()
        .or(file.controls)
        .unwrap_or_else(|| DEFAULT_CONTROLS.iter().map(|c| c.to_string()).collect())
        .into_iter()
        .map(|c| c.trim().to_string())
        .filter(|c| !c.is_empty())
        .collect();
    let controls: Vec<&str> = controls.iter().map(String::as_str).collect();
    let mut spec = ModelSpec::new(&response, &focal, quadratic, &controls);
    spec.reference = file.reference;
    for (k, v) in &args.reference {
        spec.reference.insert(k.clone(), *v);
    }
    let formats = match args.format.clone().or(file.format) {
        Some(list) => {
            let mut f = list.iter().map(|s| Format::parse(s)).collect::<Result<Vec<_>, _>>()?;
            f.sort();
            f.dedup();
            f
        }
        None => Format::ALL.to_vec(),
    };
    let cfg = RunConfig {
        data: args.data.clone().or(file.data),
        spec,
        resamples: args.resamples.or(file.resamples).unwrap_or(curvboot::bootstrap::DEFAULT_RESAMPLES),
        seed: args.seed.or(file.seed).unwrap_or(0),
        level: args.level.or(file.level).unwrap_or(0.95),
        grid_points: args.grid.or(file.grid).unwrap_or(curvboot::bootstrap::DEFAULT_GRID_POINTS),
        grid_range: args.grid_range.or(file.grid_range.map(|[lo, hi]| (lo, hi))),
        allow_extrapolation: args.allow_extrapolation || file.allow_extrapolation.unwrap_or(false),
        skip_budget: args
            .skip_budget
            .or(file.skip_budget)
            .unwrap_or(curvboot::bootstrap::DEFAULT_SKIP_BUDGET),
        spaghetti: args.spaghetti.or(file.spaghetti).unwrap_or(DEFAULT_SPAGHETTI),
        threads: args.threads.or(file.threads),
        out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
        formats,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Files written and lines for stdout.
#[derive(Debug, Default)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    pub messages: Vec<String>,
}

impl Outcome {
    fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Write {
            path: dir.to_path_buf(),
            reason: e.to_string(),
        })?;
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::Write {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        log::info!("wrote {}", path.display());
        self.written.push(path);
        Ok(())
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 4,
            };
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            for m in &outcome.messages {
                println!("{m}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Fit(a) => cmd_fit(&resolve(a)?),
        Command::Boot(a) => cmd_boot(&resolve(a)?),
        Command::Band(a) => cmd_band(&resolve(a)?),
        Command::Figures(a) => cmd_figures(&resolve(a)?),
        Command::Synth(a) => cmd_synth(a),
        Command::Report(a) => cmd_report(&resolve(a)?),
    }
}

fn load(cfg: &RunConfig) -> Result<Dataset, CliError> {
    let path = cfg.data_path()?;
    if !path.is_file() {
        return Err(CliError::Io {
            path: path.to_path_buf(),
            reason: "no such file".into(),
        });
    }
    Ok(Dataset::from_path(path)?)
}

struct Fitted {
    ds: Dataset,
    fit: Fit,
    curve: Curve,
    reference: BTreeMap<String, f64>,
}

fn fitted(cfg: &RunConfig) -> Result<Fitted, CliError> {
    let ds = load(cfg)?;
    let (x, y) = build_design(&ds, &cfg.spec)?;
    let fit = fit(&x, &y)?;
    let curve = summarize_curve(&fit, &cfg.spec, &ds)?;
    let reference = reference_covariates(&cfg.spec, &ds.summarize())?;
    Ok(Fitted {
        ds,
        fit,
        curve,
        reference,
    })
}

fn bootstrap(cfg: &RunConfig, ds: &Dataset) -> Result<BootstrapRun, CliError> {
    let plan = ResamplePlan::new(cfg.resamples, cfg.seed).with_skip_budget(cfg.skip_budget);
    let run = match cfg.threads {
        Some(t) => run_bootstrap_with_threads(ds, &cfg.spec, &plan, t)?,
        None => run_bootstrap(ds, &cfg.spec, &plan)?,
    };
    if run.skipped > 0 {
        log::warn!("{} singular resamples redrawn", run.skipped);
    }
    Ok(run)
}

fn grid(cfg: &RunConfig, ds: &Dataset) -> Result<Vec<f64>, CliError> {
    let grid = match cfg.grid_range {
        Some((lo, hi)) => linear_grid(lo, hi, cfg.grid_points),
        None => default_grid(ds, &cfg.spec, cfg.grid_points)?,
    };
    check_grid(&grid, ds, &cfg.spec, cfg.allow_extrapolation)?;
    Ok(grid)
}

fn percent_label(level: f64) -> String {
    let p = level * 100.0;
    if (p - p.round()).abs() < 1e-9 {
        format!("{p:.0}%")
    } else {
        format!("{p}%")
    }
}

/// Row key used in friendly tables for a design label.
fn table_key(spec: &ModelSpec, label: &str) -> String {
    if spec.quadratic && label == spec.squared_label() {
        "curvature".into()
    } else {
        label.to_string()
    }
}

fn analytic_column(cfg: &RunConfig, fit: &Fit) -> Result<IntervalColumn<f64>, CliError> {
    let mut intervals = BTreeMap::new();
    for (j, label) in fit.labels.iter().enumerate() {
        if label != INTERCEPT_LABEL {
            intervals.insert(table_key(&cfg.spec, label), confidence_interval(fit, j, cfg.level)?);
        }
    }
    Ok(IntervalColumn {
        name: format!("{} CI", percent_label(cfg.level)),
        intervals,
    })
}

fn bootstrap_column(cfg: &RunConfig, run: &BootstrapRun) -> IntervalColumn<f64> {
    let mut intervals = BTreeMap::new();
    for (j, label) in run.labels.iter().enumerate() {
        if label == INTERCEPT_LABEL {
            continue;
        }
        if let Ok(iv) = run.term_interval(j, cfg.level) {
            intervals.insert(table_key(&cfg.spec, label), iv);
        }
    }
    if let Ok(iv) = run.location_interval(cfg.level) {
        intervals.insert("location".into(), iv);
    }
    IntervalColumn {
        name: format!("{} bootstrap CI", percent_label(cfg.level)),
        intervals,
    }
}

pub fn cmd_fit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = fitted(cfg)?;
    let table = render_friendly_table(&f.curve, &[analytic_column(cfg, &f.fit)?]);
    let mut out = Outcome::default();
    out.write(&cfg.out, "fit.json", &f.fit.to_json())?;
    out.write(&cfg.out, "friendly_table.md", &table.to_markdown())?;
    if cfg.wants(Format::Csv) {
        out.write(&cfg.out, "friendly_table.csv", &table.to_csv())?;
    }
    if cfg.wants(Format::Json) {
        out.write(&cfg.out, "curve.json", &f.curve.to_json())?;
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct TermSummary {
    term: String,
    estimate: f64,
    lower: Option<f64>,
    upper: Option<f64>,
    confidence_negative: f64,
    confidence_positive: f64,
}

#[derive(Debug, Serialize)]
struct LocationSummary {
    estimate: Option<f64>,
    lower: Option<f64>,
    upper: Option<f64>,
    /// Resamples with a finite turning point.
    defined: usize,
}

#[derive(Debug, Serialize)]
struct BootSummary<'a> {
    plan: &'a ResamplePlan,
    spec: &'a ModelSpec,
    n: usize,
    skipped: usize,
    level: f64,
    terms: Vec<TermSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shape_confidence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    location: Option<LocationSummary>,
}

fn boot_summary(cfg: &RunConfig, ds: &Dataset, run: &BootstrapRun) -> Result<String, CliError> {
    let mut terms = Vec::new();
    for (j, label) in run.labels.iter().enumerate() {
        let iv = run.term_interval(j, cfg.level).ok();
        terms.push(TermSummary {
            term: label.clone(),
            estimate: run.estimates[j],
            lower: iv.map(|i| i.lower),
            upper: iv.map(|i| i.upper),
            confidence_negative: sign_confidence(run, j, Side::Negative)?,
            confidence_positive: sign_confidence(run, j, Side::Positive)?,
        });
    }
    let (shape, location) = if cfg.spec.quadratic {
        let (b, a) = (run.estimates[1], run.estimates[2]);
        let iv = run.location_interval(cfg.level).ok();
        let defined = run
            .locations
            .as_ref()
            .map_or(0, |l| l.iter().filter(|v| v.is_finite()).count());
        let loc = LocationSummary {
            estimate: curvboot::interpret::turning_point(a, b).ok(),
            lower: iv.map(|i| i.lower),
            upper: iv.map(|i| i.upper),
            defined,
        };
        (Some(shape_confidence(run)?), Some(loc))
    } else {
        (None, None)
    };
    let summary = BootSummary {
        plan: &run.plan,
        spec: &run.spec,
        n: ds.n(),
        skipped: run.skipped,
        level: cfg.level,
        terms,
        shape_confidence: shape,
        location,
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    Ok(text)
}

pub fn cmd_boot(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ds = load(cfg)?;
    let run = bootstrap(cfg, &ds)?;
    let mut out = Outcome::default();
    out.write(&cfg.out, "bootstrap.json", &boot_summary(cfg, &ds, &run)?)?;
    if cfg.wants(Format::Csv) {
        out.write(&cfg.out, "resamples.csv", &run.to_csv())?;
    }
    Ok(out)
}

pub fn cmd_band(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ds = load(cfg)?;
    let grid = grid(cfg, &ds)?;
    let reference = reference_covariates(&cfg.spec, &ds.summarize())?;
    let run = bootstrap(cfg, &ds)?;
    let band = confidence_band(&run, &grid, &reference, cfg.level)?;
    let mut out = Outcome::default();
    out.write(&cfg.out, "band.csv", &band.to_csv())?;
    Ok(out)
}

fn axis_label(name: &str) -> String {
    match name {
        "turnover" => "Staff turnover (%)".into(),
        "absenteeism" => "Absenteeism (%)".into(),
        "mean_age" => "Mean age".into(),
        "performance" => "Performance".into(),
        other => other.to_string(),
    }
}

fn render_figures(cfg: &RunConfig, f: &Fitted, run: &BootstrapRun) -> Result<Vec<(String, Figure)>, CliError> {
    let spec = &cfg.spec;
    let fig_spec = |title: &str| FigureSpec::new(title, &axis_label(&spec.focal), &axis_label(&spec.response));
    let grid = grid(cfg, &f.ds)?;
    let mut figs = vec![(
        "fig1".to_string(),
        scatter_with_curve(&f.ds, &f.fit, spec, &f.reference, &fig_spec("Data and fitted curve"))?,
    )];
    if spec.controls.iter().any(|c| c == "region") {
        figs.push((
            "fig2".into(),
            region_curves(&f.ds, &f.fit, spec, &f.reference, &fig_spec("Fitted curves by region"))?,
        ));
    } else {
        log::warn!("region is not a control; skipping fig2");
    }
    let k = cfg.spaghetti;
    figs.push((
        "fig3".into(),
        spaghetti(run, k, &grid, &f.reference, &fig_spec(&format!("Fitted curve and {k} resample curves")))?,
    ));
    let band = confidence_band(run, &grid, &f.reference, cfg.level)?;
    let title = format!("{} bootstrap confidence band", percent_label(cfg.level));
    figs.push(("fig4".into(), band_figure(&band, Some((&f.ds, spec)), &fig_spec(&title))?));
    Ok(figs)
}

fn write_figures(cfg: &RunConfig, figs: &[(String, Figure)], out: &mut Outcome) -> Result<(), CliError> {
    for (name, fig) in figs {
        out.write(&cfg.out, &format!("{name}.svg"), &fig.svg)?;
        if cfg.wants(Format::Csv) {
            out.write(&cfg.out, &format!("{name}.csv"), &fig.csv)?;
        }
    }
    Ok(())
}

pub fn cmd_figures(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = fitted(cfg)?;
    let run = bootstrap(cfg, &f.ds)?;
    let figs = render_figures(cfg, &f, &run)?;
    let mut out = Outcome::default();
    write_figures(cfg, &figs, &mut out)?;
    Ok(out)
}

/// Realized summary printed after synthesis.
pub fn synth_summary(params: &DgpParams, ds: &Dataset) -> Result<Vec<String>, CliError> {
    let mut lines = vec![format!("n = {}", ds.n())];
    if let Some(opt) = params.true_optimum() {
        let below = ds.records().iter().filter(|r| r.turnover < opt).count();
        lines.push(format!("offices below the true optimum ({opt:.2}% turnover): {below}"));
    }
    let (x, y) = build_design(ds, &params.model_spec())?;
    match fit(&x, &y) {
        Ok(f) => lines.push(format!("fitted adjusted R^2: {:.4}", f.adj_r2)),
        Err(e) => lines.push(format!("model could not be fitted: {e}")),
    }
    Ok(lines)
}

pub fn cmd_synth(args: &SynthArgs) -> Result<Outcome, CliError> {
    let mut params = DgpParams {
        seed: args.seed.unwrap_or(DEFAULT_SEED),
        ..DgpParams::default()
    };
    if let Some(n) = args.n {
        params.n = n;
    }
    if let Some(sd) = args.noise_sd {
        params.noise_sd = sd;
    }
    params.validate().map_err(CliError::BadParams)?;
    let ds = generate(&params)?;
    let mut out = Outcome::default();
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    out.write(&dir, "data.csv", &ds.to_csv())?;
    out.messages = synth_summary(&params, &ds)?;
    Ok(out)
}

fn pct(v: f64, decimals: usize) -> String {
    let text = format!("{:.*}", decimals, v * 100.0);
    let limit = 100.0 - 0.5 * 10f64.powi(-(decimals as i32));
    if v * 100.0 >= limit && v < 1.0 {
        format!(">{:.*}%", decimals, 100.0 - 10f64.powi(-(decimals as i32)))
    } else {
        format!("{text}%")
    }
}

fn format_p(p: f64) -> String {
    if p >= 0.001 {
        format!("{p:.3}")
    } else {
        format!("{p:.1e}")
    }
}

/// Plain-language reading of a two-tailed p value, e.g.
/// "p = 0.007, so 99.65% confidence the impact is negative".
pub fn confidence_sentence(estimate: f64, p: f64) -> Result<String, CliError> {
    let (dir, conf) = sign_confidence_from_p(estimate, p)?;
    Ok(match dir {
        curvboot::interpret::Direction::Indeterminate => {
            format!("p = {}, estimate exactly zero so no direction is favoured", format_p(p))
        }
        d => format!("p = {}, so {} confidence the impact is {}", format_p(p), pct(conf, 2), d.word()),
    })
}

fn shape_sentence(curve: &Curve, shape_conf: f64) -> String {
    let r2 = pct(curve.adj_r2, 1);
    format!(
        "Bootstrap confidence level for the inverted U shape hypothesis: {} (adjusted R² {r2}; the model accounts for only this share of the variation in {}).",
        pct(shape_conf, 0),
        curve.response
    )
}

fn describe_shape(shape: Shape) -> &'static str {
    match shape {
        Shape::InvertedU => "an inverted U with its optimum inside positive values",
        Shape::UprightU => "an upright U with a minimum",
        Shape::DecliningOnly => "declining across all positive values",
        Shape::NoCurvature => "a straight line",
    }
}

fn build_report(cfg: &RunConfig, f: &Fitted, run: &BootstrapRun, figures: bool) -> Result<String, CliError> {
    let spec = &cfg.spec;
    let mut md = String::from("# Curvilinear regression report\n\n");
    let controls = if spec.controls.is_empty() {
        "no controls".to_string()
    } else {
        format!("controls {}", spec.controls.join(", "))
    };
    md.push_str(&format!(
        "Model: {} on {} ({}) with {controls}; n = {}.\n",
        spec.response,
        spec.focal,
        if spec.quadratic { "quadratic" } else { "linear" },
        f.ds.n()
    ));
    md.push_str(&format!(
        "Bootstrap: {} case resamples, seed {}, {} singular resamples redrawn.\n\n",
        NumberFormat::Integer.render(run.resamples() as f64, true),
        run.plan.seed,
        run.skipped
    ));

    md.push_str("## Parameters\n\n");
    let table = render_friendly_table(&f.curve, &[analytic_column(cfg, &f.fit)?, bootstrap_column(cfg, run)]);
    md.push_str(&table.to_markdown());
    md.push('\n');

    md.push_str("## Shape\n\n");
    let r2 = pct(f.curve.adj_r2, 1);
    if spec.quadratic {
        md.push_str(&format!("- {}\n", shape_sentence(&f.curve, shape_confidence(run)?)));
        md.push_str(&format!("- Full-data fit: {} (adjusted R² {r2}).\n", describe_shape(f.curve.shape)));
        if let (Some(loc), Some(below)) = (f.curve.location, f.curve.below_location) {
            md.push_str(&format!(
                "- {below} of {} observations lie below the estimated optimum of {loc:.1}.\n",
                f.ds.n()
            ));
        }
    } else {
        md.push_str(&format!(
            "- The model has no curvature term, so no shape hypothesis is assessed (adjusted R² {r2}).\n"
        ));
    }
    md.push('\n');

    md.push_str("## Direction of each effect\n\n");
    md.push_str(&format!("Adjusted R² {r2}.\n\n"));
    md.push_str("| Term | Estimate | Analytic | Bootstrap share negative | Bootstrap share positive |\n");
    md.push_str("| --- | ---: | --- | ---: | ---: |\n");
    for (j, label) in f.fit.labels.iter().enumerate() {
        if label == INTERCEPT_LABEL {
            continue;
        }
        md.push_str(&format!(
            "| {label} | {:.4} | {} | {} | {} |\n",
            f.fit.coefficients[j],
            confidence_sentence(f.fit.coefficients[j], f.fit.p_values[j])?,
            pct(sign_confidence(run, j, Side::Negative)?, 2),
            pct(sign_confidence(run, j, Side::Positive)?, 2)
        ));
    }
    md.push('\n');

    if figures {
        md.push_str("## Figures\n\n");
        md.push_str("![Data and fitted curve](fig1.svg)\n\n");
        if spec.controls.iter().any(|c| c == "region") {
            md.push_str("![Fitted curves by region](fig2.svg)\n\n");
        }
        md.push_str(&format!(
            "![Fitted curve and {} resample curves](fig3.svg)\n\n",
            cfg.spaghetti
        ));
        md.push_str(&format!(
            "![{} bootstrap confidence band](fig4.svg)\n",
            percent_label(cfg.level)
        ));
    }
    Ok(md)
}

pub fn cmd_report(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = fitted(cfg)?;
    let run = bootstrap(cfg, &f.ds)?;
    let figures = cfg.wants(Format::Svg);
    let mut out = Outcome::default();
    if figures {
        let figs = render_figures(cfg, &f, &run)?;
        write_figures(cfg, &figs, &mut out)?;
    }
    out.write(&cfg.out, "report.md", &build_report(cfg, &f, &run, figures)?)?;
    Ok(out)
}
