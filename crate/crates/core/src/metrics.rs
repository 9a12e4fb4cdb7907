//! Passband figures of merit from a transmission curve.
//!
//! All quantities are read from `|S21|` in dB. Band edges are the crossings
//! nearest to the peak on each side, linearly interpolated in frequency.
//! The "3-dB" edges sit at the half-power level, `10·log10(2)` below the peak.

use crate::curve::ComplexCurve;
use crate::error::{domain, Error, Result, Side};

/// Fractional offset between the 3-dB edges and the stopband.
pub const DEFAULT_GUARD: f64 = 0.15;

/// Half-power drop, the exact level behind the nominal 3-dB edges.
pub const HALF_POWER_DB: f64 = 3.010_299_956_639_812;

/// Drop defining the 20-dB edges of the shape factor.
pub const SHAPE_LEVEL_DB: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterMetrics {
    /// Mean of the 3-dB edges.
    pub fc: f64,
    pub il_db: f64,
    pub bw3_hz: f64,
    pub fbw3: f64,
    pub f_lo3: f64,
    pub f_hi3: f64,
    pub bw20_hz: f64,
    pub shape_factor20: f64,
    pub oob_rejection_db: f64,
}

/// Report names of the [`FilterMetrics`] fields, in reporting order.
pub const METRIC_NAMES: [&str; 9] = [
    "fc_hz",
    "il_db",
    "bw3_hz",
    "fbw3",
    "f_lo3_hz",
    "f_hi3_hz",
    "bw20_hz",
    "shape_factor20",
    "oob_rejection_db",
];

impl FilterMetrics {
    /// Name/value pairs in reporting order.
    pub fn named(&self) -> [(&'static str, f64); 9] {
        let values = [
            self.fc,
            self.il_db,
            self.bw3_hz,
            self.fbw3,
            self.f_lo3,
            self.f_hi3,
            self.bw20_hz,
            self.shape_factor20,
            self.oob_rejection_db,
        ];
        std::array::from_fn(|i| (METRIC_NAMES[i], values[i]))
    }
}

/// Frequency at which the segment `(f_a, y_a)` to `(f_b, y_b)` reaches `target`.
pub fn crossing_interpolate(f_a: f64, y_a: f64, f_b: f64, y_b: f64, target: f64) -> Result<f64> {
    if !(f_a < f_b) {
        return Err(domain(format!("segment {f_a}..{f_b} is not increasing")));
    }
    let (lo, hi) = if y_a < y_b { (y_a, y_b) } else { (y_b, y_a) };
    if !(target > lo && target < hi) && !(target == y_a || target == y_b) {
        return Err(domain(format!("{target} dB is outside [{lo}, {hi}] dB")));
    }
    if y_a == y_b {
        return Ok(f_a);
    }
    Ok(f_a + (target - y_a) * (f_b - f_a) / (y_b - y_a))
}

/// Nearest crossing of `level` walking outward from `peak`.
fn edge(
    freqs: &[f64],
    db: &[f64],
    peak: usize,
    level: f64,
    side: Side,
    level_db: f64,
) -> Result<f64> {
    let unbracketed = Error::BandEdge { side, level_db };
    match side {
        Side::Lower => {
            let i = (0..peak)
                .rev()
                .find(|&i| db[i] < level)
                .ok_or(unbracketed)?;
            crossing_interpolate(freqs[i], db[i], freqs[i + 1], db[i + 1], level)
        }
        Side::Upper => {
            let i = (peak + 1..db.len())
                .find(|&i| db[i] < level)
                .ok_or(unbracketed)?;
            crossing_interpolate(freqs[i - 1], db[i - 1], freqs[i], db[i], level)
        }
    }
}

pub fn passband_metrics(s21: &ComplexCurve, guard: f64) -> Result<FilterMetrics> {
    if !(0.0..1.0).contains(&guard) {
        return Err(domain(format!("guard {guard} must lie in [0, 1)")));
    }
    let freqs = s21.freqs();
    let db = s21.magnitude_db();
    if db.len() < 3 {
        return Err(Error::DegeneratePassband(format!("{} samples", db.len())));
    }
    if let Some(i) = db.iter().position(|v| v.is_nan()) {
        return Err(domain(format!("|S21| at {} Hz is not a number", freqs[i])));
    }
    let peak = db
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > db[best] { i } else { best });
    let peak_db = db[peak];
    if peak == 0 || peak == db.len() - 1 {
        return Err(Error::DegeneratePassband(format!(
            "|S21| peaks at the grid boundary ({} Hz)",
            freqs[peak]
        )));
    }
    if !peak_db.is_finite() {
        return Err(Error::DegeneratePassband("no transmission".into()));
    }

    let l3 = peak_db - HALF_POWER_DB;
    let l20 = peak_db - SHAPE_LEVEL_DB;
    let f_lo3 = edge(freqs, &db, peak, l3, Side::Lower, 3.0)?;
    let f_hi3 = edge(freqs, &db, peak, l3, Side::Upper, 3.0)?;
    let f_lo20 = edge(freqs, &db, peak, l20, Side::Lower, SHAPE_LEVEL_DB)?;
    let f_hi20 = edge(freqs, &db, peak, l20, Side::Upper, SHAPE_LEVEL_DB)?;

    let stop_lo = f_lo3 * (1.0 - guard);
    let stop_hi = f_hi3 * (1.0 + guard);
    let worst_stop = freqs
        .iter()
        .zip(&db)
        .filter(|(&f, _)| f <= stop_lo || f >= stop_hi)
        .map(|(_, &v)| v)
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        })
        .ok_or(Error::EmptyStopband { guard })?;

    let fc = 0.5 * (f_lo3 + f_hi3);
    let bw3 = f_hi3 - f_lo3;
    let bw20 = f_hi20 - f_lo20;
    Ok(FilterMetrics {
        fc,
        il_db: -peak_db,
        bw3_hz: bw3,
        fbw3: bw3 / fc,
        f_lo3,
        f_hi3,
        bw20_hz: bw20,
        shape_factor20: bw20 / bw3,
        oob_rejection_db: peak_db - worst_stop,
    })
}
