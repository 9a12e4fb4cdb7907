//! Modified mmWave Butterworth-Van Dyke resonator model.
//!
//! The circuit is a motional branch (`rm`, `lm`, `cm` in series) in parallel
//! with the static branch (`r0` in series with `c0`), fed through the routing
//! parasitics `rs` and `ls`:
//!
//! ```text
//!   o--[rs]--[ls]--+--[rm]--[lm]--||cm--+
//!                  |                    |
//!                  +--[r0]------||c0----+--o
//! ```
//!
//! All values are SI base units.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::curve::{log_grid, validate_grid, ComplexCurve};
use crate::error::{domain, Error, Result};

/// `k² = K2_SCALE · (fp² − fs²) / fp²`.
pub const K2_SCALE: f64 = PI * PI / 8.0;

/// Points per decade of the coarse scan that brackets an extremum.
pub const SCAN_POINTS_PER_DECADE: usize = 2000;

/// Relative width at which golden-section refinement stops.
pub const EXTREMUM_REL_TOL: f64 = 1e-10;

/// Relative step of the central difference used for the phase-slope Q.
pub const Q_FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbvdParams {
    /// Motional resistance.
    pub rm: f64,
    /// Motional inductance.
    pub lm: f64,
    /// Motional capacitance.
    pub cm: f64,
    /// Static capacitance.
    pub c0: f64,
    /// Routing resistance.
    pub rs: f64,
    /// Routing inductance.
    pub ls: f64,
    /// Loss in series with `c0`.
    pub r0: f64,
}

impl MbvdParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rm", self.rm),
            ("lm", self.lm),
            ("cm", self.cm),
            ("c0", self.c0),
            ("rs", self.rs),
            ("ls", self.ls),
            ("r0", self.r0),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(domain(format!("{name} = {v} is not finite")));
            }
        }
        for (name, v) in [("lm", self.lm), ("cm", self.cm), ("c0", self.c0)] {
            if v <= 0.0 {
                return Err(domain(format!("{name} = {v} must be positive")));
            }
        }
        for (name, v) in [
            ("rm", self.rm),
            ("rs", self.rs),
            ("ls", self.ls),
            ("r0", self.r0),
        ] {
            if v < 0.0 {
                return Err(domain(format!("{name} = {v} must be non-negative")));
            }
        }
        Ok(())
    }

    /// Input impedance at `f` hertz. Does not validate.
    pub fn impedance(&self, f: f64) -> Complex64 {
        let w = 2.0 * PI * f;
        let z_motional = Complex64::new(self.rm, w * self.lm - 1.0 / (w * self.cm));
        let z_static = Complex64::new(self.r0, -1.0 / (w * self.c0));
        let y_core = z_motional.inv() + z_static.inv();
        Complex64::new(self.rs, w * self.ls) + y_core.inv()
    }

    /// Input admittance at `f` hertz. Does not validate.
    pub fn admittance(&self, f: f64) -> Complex64 {
        self.impedance(f).inv()
    }

    pub fn is_lossless(&self) -> bool {
        self.rm == 0.0 && self.rs == 0.0 && self.r0 == 0.0
    }
}

/// Admittance of the resonator sampled on `grid`.
pub fn resonator_admittance(p: &MbvdParams, grid: &[f64]) -> Result<ComplexCurve> {
    p.validate()?;
    validate_grid(grid)?;
    let values = grid.iter().map(|&f| p.admittance(f)).collect();
    ComplexCurve::new(grid.to_vec(), values)
}

/// Mechanical resonance `1 / (2π √(lm·cm))`.
pub fn series_resonance(p: &MbvdParams) -> Result<f64> {
    if !(p.lm > 0.0 && p.cm > 0.0 && p.lm.is_finite() && p.cm.is_finite()) {
        return Err(domain(format!(
            "lm = {} and cm = {} must be positive and finite",
            p.lm, p.cm
        )));
    }
    Ok(1.0 / (2.0 * PI * (p.lm * p.cm).sqrt()))
}

/// Anti-resonance of the unloaded model, `fs·√(1 + cm/c0)`.
pub fn antiresonance(p: &MbvdParams) -> Result<f64> {
    let fs = series_resonance(p)?;
    if !(p.c0 > 0.0 && p.c0.is_finite()) {
        return Err(domain(format!("c0 = {} must be positive and finite", p.c0)));
    }
    Ok(fs * (1.0 + p.cm / p.c0).sqrt())
}

/// Electromechanical coupling from the resonance pair.
///
/// Returns 0 when the two frequencies coincide.
pub fn coupling_k2(p: &MbvdParams) -> Result<f64> {
    let fs = series_resonance(p)?;
    let fp = antiresonance(p)?;
    if fp <= fs {
        return Ok(0.0);
    }
    // (fp² − fs²)/fp² = r/(1 + r) with r = cm/c0, which avoids cancellation.
    let ratio = p.cm / p.c0;
    Ok(K2_SCALE * ratio / (1.0 + ratio))
}

/// Inverse of [`series_resonance`] and [`coupling_k2`]: motional values
/// that hit `fs` and `k2` for the given static capacitance, with `rm` set
/// so that the motional branch has quality factor `q` at `fs`.
///
/// `q = ∞` yields `rm = 0`.
pub fn mbvd_from_targets(
    fs: f64,
    k2: f64,
    c0: f64,
    q: f64,
    rs: f64,
    ls: f64,
) -> Result<MbvdParams> {
    if !(k2 > 0.0 && k2 < K2_SCALE) {
        return Err(Error::InfeasibleCoupling { k2 });
    }
    if !(fs > 0.0 && fs.is_finite()) {
        return Err(domain(format!("fs = {fs} must be positive and finite")));
    }
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(domain(format!("c0 = {c0} must be positive and finite")));
    }
    if q.is_nan() || q <= 0.0 {
        return Err(domain(format!("q = {q} must be positive")));
    }
    let x = k2 / K2_SCALE;
    // cm/c0 = 1/(1 − x) − 1 = x/(1 − x)
    let cm = c0 * x / (1.0 - x);
    let w = 2.0 * PI * fs;
    let lm = 1.0 / (w * w * cm);
    let rm = if q.is_infinite() { 0.0 } else { w * lm / q };
    let p = MbvdParams {
        rm,
        lm,
        cm,
        c0,
        rs,
        ls,
        r0: 0.0,
    };
    p.validate()?;
    Ok(p)
}

/// Golden-section search for the maximum of a unimodal `g` on `[a, b]`.
pub(crate) fn golden_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..200 {
        if (b - a) <= rel_tol * 0.5 * (a + b).abs() {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}

/// Locates the largest interior local maximum of `g` over `[lo, hi]`:
/// a log-spaced scan brackets it and golden-section refines it.
pub(crate) fn interior_max(g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let grid = log_grid(lo, hi, SCAN_POINTS_PER_DECADE)?;
    let values: Vec<f64> = grid.iter().map(|&f| g(f)).collect();
    let mut best: Option<usize> = None;
    for i in 1..grid.len() - 1 {
        let v = values[i];
        if v > values[i - 1] && v >= values[i + 1] && best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    let i = best
        .ok_or_else(|| Error::Search(format!("no interior maximum between {lo} Hz and {hi} Hz")))?;
    Ok(golden_max(g, grid[i - 1], grid[i + 1], EXTREMUM_REL_TOL))
}

/// Frequency of the `|Y|` maximum inside `band`, i.e. the resonance a
/// measurement perceives once routing parasitics are present.
pub fn perceived_resonance(p: &MbvdParams, band: (f64, f64)) -> Result<f64> {
    p.validate()?;
    let (lo, hi) = band;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(domain(format!("invalid search band {lo}..{hi}")));
    }
    interior_max(|f| p.admittance(f).norm(), lo, hi)
}

/// Band searched for the perceived resonance: from `fs/2` up to the
/// midpoint between `fs` and `fp`.
pub fn default_resonance_band(p: &MbvdParams) -> Result<(f64, f64)> {
    let fs = series_resonance(p)?;
    let fp = antiresonance(p)?;
    Ok((0.5 * fs, 0.5 * (fs + fp)))
}

/// Quality factor evaluated at anti-resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quality {
    Finite(f64),
    /// Every resistance is zero, so the phase slope diverges.
    Unbounded,
}

impl Quality {
    pub fn value(self) -> f64 {
        match self {
            Quality::Finite(q) => q,
            Quality::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Quality::Unbounded)
    }
}

/// Frequency of the impedance-magnitude maximum between `fs` and `2·fp`.
pub fn impedance_peak(p: &MbvdParams) -> Result<f64> {
    p.validate()?;
    let fs = series_resonance(p)?;
    let fp = antiresonance(p)?;
    interior_max(|f| p.impedance(f).norm(), fs, 2.0 * fp)
}

/// Phase-slope quality factor `Q = (f/2)·|dφ/df|` of the input impedance,
/// taken at the impedance maximum.
pub fn q_at_antiresonance(p: &MbvdParams) -> Result<Quality> {
    p.validate()?;
    if p.is_lossless() {
        return Ok(Quality::Unbounded);
    }
    let f = impedance_peak(p)?;
    let h = Q_FD_STEP * f;
    // arg of the ratio is the phase difference without branch wrapping
    let dphi = (p.impedance(f + h) / p.impedance(f - h)).arg();
    let q = 0.5 * f * (dphi / (2.0 * h)).abs();
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::Search(format!(
            "phase slope at {f} Hz gives Q = {q}"
        )));
    }
    Ok(Quality::Finite(q))
}

/// Derived scalar figures of one resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorSummary {
    pub fs: f64,
    pub fp: f64,
    pub f_perceived: f64,
    pub k2: f64,
    pub q_antires: Quality,
}

pub fn summarize(p: &MbvdParams) -> Result<ResonatorSummary> {
    p.validate()?;
    Ok(ResonatorSummary {
        fs: series_resonance(p)?,
        fp: antiresonance(p)?,
        f_perceived: perceived_resonance(p, default_resonance_band(p)?)?,
        k2: coupling_k2(p)?,
        q_antires: q_at_antiresonance(p)?,
    })
}
