use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use mmfilt::fitting::{fit_mbvd, initial_guess, FitOptions, WeightMode};
use mmfilt::io::csv::{fit_report_csv, metrics_csv};
use mmfilt::io::design::{read_design, write_design, DesignDocument, FilterSection};
use mmfilt::io::touchstone::{
    ports_from_path, read_touchstone, write_touchstone, DataFormat, FrequencyUnit, NetworkData,
    OnePort,
};
use mmfilt::metrics::{passband_metrics, DEFAULT_GUARD, METRIC_NAMES};
use mmfilt::network::{admittance_to_reflection, build_ladder_response, reflection_to_admittance};
use mmfilt::network::{ElementKind, LadderDesign};
use mmfilt::synthesis::synthesize_ladder;
use mmfilt::{ComplexCurve, Error, FilterMetrics, SParameterBlock};

use crate::output::{check_outputs, read_input, Outputs};
use crate::spans::{Grid, Span};
use crate::svg::s21_plot;

// Hz and RI keep every written number exactly re-readable.
const UNIT: FrequencyUnit = FrequencyUnit::Hz;
const FORMAT: DataFormat = DataFormat::RI;

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Design file with [filter] topology and resonator sections
    #[arg(long)]
    design: PathBuf,
    /// Frequency grid start:stop:count in hertz
    #[arg(long)]
    grid: Grid,
    /// Touchstone output; .s1p requires a single-element topology
    #[arg(long)]
    out: PathBuf,
    /// Metrics CSV output (two-port only)
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Reference impedance overriding the design file
    #[arg(long)]
    z0: Option<f64>,
    /// Stopband guard as a fraction of the 3-dB edge frequency
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Weighting {
    /// Residuals scaled by 1/|Y|
    InverseMagnitude,
    Uniform,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// One-port Touchstone measurement (.s1p)
    #[arg(long)]
    input: PathBuf,
    /// Fitted design file
    #[arg(long)]
    out: PathBuf,
    /// Fit report CSV
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Residual weighting
    #[arg(long, value_enum, default_value_t = Weighting::InverseMagnitude)]
    weight: Weighting,
    /// Also fit the static-branch resistance r0
    #[arg(long)]
    fit_r0: bool,
}

#[derive(Args, Debug)]
pub struct SynthesizeArgs {
    /// Design file holding a [spec] section
    #[arg(long)]
    spec: PathBuf,
    /// Grid for the written response and metrics, start:stop:count in hertz
    #[arg(long)]
    grid: Grid,
    /// Synthesized design file
    #[arg(long)]
    out: PathBuf,
    /// Two-port Touchstone response of the design
    #[arg(long)]
    s2p: Option<PathBuf>,
    /// Metrics CSV of the design on --grid
    #[arg(long)]
    metrics: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: f64,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    /// Two-port Touchstone file (.s2p)
    #[arg(long)]
    input: PathBuf,
    /// Metrics CSV; printed to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// |S21| plot
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: f64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    design: PathBuf,
    /// Swept value as section.key, e.g. series.ls or filter.z0
    #[arg(long)]
    param: String,
    /// Values start:stop:count
    #[arg(long)]
    range: Span,
    /// Frequency grid start:stop:count in hertz
    #[arg(long)]
    grid: Grid,
    /// CSV with one metrics row per value
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: f64,
}

fn check_guard(guard: f64) -> Result<()> {
    if !(0.0..1.0).contains(&guard) {
        bail!("guard {guard} must lie in [0, 1)");
    }
    Ok(())
}

fn load_design(path: &Path) -> Result<DesignDocument> {
    read_design(&read_input(path)?).with_context(|| format!("{}", path.display()))
}

fn two_port_text(s: &SParameterBlock) -> String {
    write_touchstone(&NetworkData::TwoPort(s.clone()), UNIT, FORMAT)
}

fn metrics_of(s: &SParameterBlock, guard: f64) -> mmfilt::Result<FilterMetrics> {
    passband_metrics(&s.s21()?, guard)
}

pub fn simulate(a: &SimulateArgs) -> Result<Outputs> {
    check_guard(a.guard)?;
    let ports =
        ports_from_path(&a.out).ok_or_else(|| anyhow!("--out must name a .s1p or .s2p file"))?;
    if ports == 1 && a.metrics.is_some() {
        bail!("--metrics needs a two-port (.s2p) output");
    }
    let mut outs: Vec<&Path> = vec![&a.out];
    outs.extend(a.metrics.as_deref());
    check_outputs(&outs)?;
    let doc = load_design(&a.design)?;
    let mut design = doc.ladder()?;
    if let Some(z0) = a.z0 {
        design = LadderDesign::new(design.resonators().to_vec(), design.elements().to_vec(), z0)?;
    }
    let grid = a.grid.frequencies();

    let mut o = Outputs::default();
    if ports == 1 {
        let [element] = design.elements() else {
            bail!("a .s1p output needs a topology with exactly one element");
        };
        let p = design.resonator_of(element);
        let z0 = design.z0();
        let values = grid
            .iter()
            .map(|&f| admittance_to_reflection(p.admittance(f), z0))
            .collect();
        let s11 = ComplexCurve::new(grid, values)?;
        let data = NetworkData::OnePort(OnePort { s11, z0 });
        o.file(&a.out, write_touchstone(&data, UNIT, FORMAT));
        return Ok(o);
    }
    let s = build_ladder_response(&design, &grid)?;
    if let Some(path) = &a.metrics {
        o.file(path, metrics_csv(&metrics_of(&s, a.guard)?));
    }
    o.file(&a.out, two_port_text(&s));
    Ok(o)
}

pub fn fit(a: &FitArgs) -> Result<Outputs> {
    if ports_from_path(&a.input) != Some(1) {
        bail!("--input must be a one-port .s1p file");
    }
    let mut outs: Vec<&Path> = vec![&a.out];
    outs.extend(a.report.as_deref());
    check_outputs(&outs)?;
    let (_, data) = read_touchstone(&read_input(&a.input)?, 1)
        .with_context(|| format!("{}", a.input.display()))?;
    let NetworkData::OnePort(port) = data else {
        unreachable!("one-port read returns one-port data");
    };
    let z0 = port.z0;
    let y = port.s11.map(|_, s| reflection_to_admittance(s, z0));
    let opts = FitOptions {
        max_iterations: a.max_iter,
        weight_mode: match a.weight {
            Weighting::InverseMagnitude => WeightMode::InverseMagnitude,
            Weighting::Uniform => WeightMode::Uniform,
        },
        fit_r0: a.fit_r0,
        ..FitOptions::default()
    };
    let init = initial_guess(&y)?;
    let result = fit_mbvd(&y, &init, &opts)?;
    let summary = result.summary()?;
    if !result.converged {
        eprintln!(
            "warning: fit stopped after {} iterations without converging",
            result.iterations
        );
    }
    let doc = DesignDocument {
        series: Some(result.params),
        filter: Some(FilterSection {
            z0,
            topology: vec![ElementKind::Series],
        }),
        ..DesignDocument::default()
    };
    let mut o = Outputs::default();
    o.file(&a.out, write_design(&doc));
    if let Some(path) = &a.report {
        o.file(path, fit_report_csv(&result, &summary));
    }
    Ok(o)
}

pub fn synthesize(a: &SynthesizeArgs) -> Result<Outputs> {
    check_guard(a.guard)?;
    if let Some(p) = &a.s2p {
        if ports_from_path(p) != Some(2) {
            bail!("--s2p must name a .s2p file");
        }
    }
    let mut outs: Vec<&Path> = vec![&a.out];
    outs.extend(a.s2p.as_deref());
    outs.extend(a.metrics.as_deref());
    check_outputs(&outs)?;
    let spec = load_design(&a.spec)?
        .spec
        .ok_or_else(|| anyhow!("{} has no [spec] section", a.spec.display()))?;

    let result = synthesize_ladder(&spec)?;
    if result.metrics.is_none() {
        bail!("synthesis found no design with a measurable passband");
    }
    eprintln!(
        "synthesis: {} (objective {}, {} evaluations)",
        if result.feasible {
            "feasible"
        } else {
            "infeasible"
        },
        result.objective,
        result.evaluations
    );

    let mut doc = DesignDocument::from_ladder(&result.design)?;
    doc.spec = Some(spec);
    let mut o = Outputs::default();
    o.file(&a.out, write_design(&doc));
    if a.s2p.is_some() || a.metrics.is_some() {
        let s = build_ladder_response(&result.design, &a.grid.frequencies())?;
        if let Some(path) = &a.metrics {
            o.file(path, metrics_csv(&metrics_of(&s, a.guard)?));
        }
        if let Some(path) = &a.s2p {
            o.file(path, two_port_text(&s));
        }
    }
    Ok(o)
}

pub fn metrics(a: &MetricsArgs) -> Result<Outputs> {
    check_guard(a.guard)?;
    if ports_from_path(&a.input) != Some(2) {
        bail!("--input must be a two-port .s2p file");
    }
    let mut outs: Vec<&Path> = Vec::new();
    outs.extend(a.out.as_deref());
    outs.extend(a.svg.as_deref());
    check_outputs(&outs)?;
    let (_, data) = read_touchstone(&read_input(&a.input)?, 2)
        .with_context(|| format!("{}", a.input.display()))?;
    let NetworkData::TwoPort(s) = data else {
        unreachable!("two-port read returns two-port data");
    };
    let csv = metrics_csv(&metrics_of(&s, a.guard)?);
    let mut o = Outputs::default();
    match &a.out {
        Some(path) => o.file(path, csv),
        None => o.stdout(csv),
    }
    if let Some(path) = &a.svg {
        o.file(path, s21_plot(&s.s21()?));
    }
    Ok(o)
}

/// Short machine-readable tag for the status column of a sweep row.
fn status_tag(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::InfeasibleCoupling { .. } => "infeasible_coupling",
        Error::Search(_) => "search",
        Error::Alignment(_) => "alignment",
        Error::SingularConversion { .. } => "singular_conversion",
        Error::BandEdge { .. } => "band_edge",
        Error::DegeneratePassband(_) => "degenerate_passband",
        Error::EmptyStopband { .. } => "empty_stopband",
        Error::Structure(_) => "structure",
        Error::Infeasible(_) => "infeasible",
        Error::Format { .. } => "format",
    }
}

const RESONATOR_KEYS: [&str; 7] = ["rm", "lm", "cm", "c0", "rs", "ls", "r0"];

fn set_param(doc: &mut DesignDocument, section: &str, key: &str, value: f64) {
    let resonator = match section {
        "series" => doc.series.as_mut(),
        "shunt" => doc.shunt.as_mut(),
        _ => None,
    };
    if let Some(p) = resonator {
        match key {
            "rm" => p.rm = value,
            "lm" => p.lm = value,
            "cm" => p.cm = value,
            "c0" => p.c0 = value,
            "rs" => p.rs = value,
            "ls" => p.ls = value,
            "r0" => p.r0 = value,
            _ => {}
        }
    } else if let (Some(f), "z0") = (doc.filter.as_mut(), key) {
        f.z0 = value;
    }
}

pub fn sweep(a: &SweepArgs) -> Result<Outputs> {
    check_guard(a.guard)?;
    let (section, key) = a
        .param
        .split_once('.')
        .ok_or_else(|| anyhow!("--param must look like section.key"))?;
    let known = match section {
        "series" | "shunt" => RESONATOR_KEYS.contains(&key),
        "filter" => key == "z0",
        _ => false,
    };
    if !known {
        bail!("cannot sweep '{}'", a.param);
    }
    check_outputs(&[&a.out])?;
    let doc = load_design(&a.design)?;
    let present = match section {
        "series" => doc.series.is_some(),
        "shunt" => doc.shunt.is_some(),
        _ => doc.filter.is_some(),
    };
    if !present {
        bail!("{} has no [{section}] section", a.design.display());
    }
    doc.ladder()?;
    let grid = a.grid.frequencies();

    let mut csv = format!("value,{},status\n", METRIC_NAMES.join(","));
    for value in a.range.values() {
        let mut d = doc.clone();
        set_param(&mut d, section, key, value);
        let row = d
            .ladder()
            .and_then(|l| build_ladder_response(&l, &grid))
            .and_then(|s| metrics_of(&s, a.guard));
        let _ = write!(csv, "{value}");
        match row {
            Ok(m) => {
                for (_, v) in m.named() {
                    let _ = write!(csv, ",{v}");
                }
                csv.push_str(",ok\n");
            }
            Err(e) => {
                csv.push_str(&",".repeat(METRIC_NAMES.len()));
                let _ = writeln!(csv, ",{}", status_tag(&e));
            }
        }
    }
    let mut o = Outputs::default();
    o.file(&a.out, csv);
    Ok(o)
}
