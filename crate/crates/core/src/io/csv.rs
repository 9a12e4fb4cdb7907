//! CSV reports with fixed column contracts.

use std::fmt::Write as _;

use crate::curve::ComplexCurve;
use crate::fitting::FitResult;
use crate::mbvd::ResonatorSummary;
use crate::metrics::FilterMetrics;

/// `frequency_hz,re,im,mag_db,phase_deg`, one row per sample.
pub fn curve_csv(curve: &ComplexCurve) -> String {
    let mut out = String::from("frequency_hz,re,im,mag_db,phase_deg\n");
    for (f, v) in curve.iter() {
        let _ = writeln!(
            out,
            "{f},{},{},{},{}",
            v.re,
            v.im,
            20.0 * v.norm().log10(),
            v.arg().to_degrees()
        );
    }
    out
}

/// `metric,value`, one row per named metric.
pub fn metrics_csv(m: &FilterMetrics) -> String {
    let mut out = String::from("metric,value\n");
    for (name, v) in m.named() {
        let _ = writeln!(out, "{name},{v}");
    }
    out
}

/// `key,value` rows: fitted parameters, fit diagnostics and derived figures.
/// Numbers use exponent notation since the parameters span many decades.
pub fn fit_report_csv(r: &FitResult, summary: &ResonatorSummary) -> String {
    let p = &r.params;
    let mut out = String::from("key,value\n");
    let rows: [(&str, f64); 12] = [
        ("rm", p.rm),
        ("lm", p.lm),
        ("cm", p.cm),
        ("c0", p.c0),
        ("rs", p.rs),
        ("ls", p.ls),
        ("r0", p.r0),
        ("residual_norm", r.residual_norm),
        ("fs_hz", summary.fs),
        ("fp_hz", summary.fp),
        ("f_perceived_hz", summary.f_perceived),
        ("k2", summary.k2),
    ];
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v:e}");
    }
    let _ = writeln!(out, "q_antiresonance,{:e}", summary.q_antires.value());
    let _ = writeln!(out, "iterations,{}", r.iterations);
    let _ = writeln!(out, "converged,{}", r.converged);
    out
}

/// Parses a `metric,value` table written by [`metrics_csv`].
pub fn parse_metrics_csv(text: &str) -> Option<Vec<(String, f64)>> {
    let mut lines = text.lines();
    if lines.next()? != "metric,value" {
        return None;
    }
    lines
        .map(|l| {
            let (k, v) = l.split_once(',')?;
            Some((k.to_string(), v.parse().ok()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn curve_columns() {
        let c = ComplexCurve::new(vec![1e9], vec![Complex64::new(0.0, 0.1)]).unwrap();
        let text = curve_csv(&c);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("frequency_hz,re,im,mag_db,phase_deg"));
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(row[0], 1e9);
        assert!((row[3] + 20.0).abs() < 1e-12);
        assert!((row[4] - 90.0).abs() < 1e-12);
    }

    #[test]
    fn metrics_rows_parse_back() {
        let m = FilterMetrics {
            fc: 23.5e9,
            il_db: 1.47,
            bw3_hz: 3.76e9,
            fbw3: 0.16,
            f_lo3: 21.62e9,
            f_hi3: 25.38e9,
            bw20_hz: 7e9,
            shape_factor20: 7.0 / 3.76,
            oob_rejection_db: 12.6,
        };
        let rows = parse_metrics_csv(&metrics_csv(&m)).unwrap();
        assert_eq!(rows.len(), 9);
        for ((name, v), (n2, v2)) in rows.iter().zip(m.named()) {
            assert_eq!(name, n2);
            assert_eq!(*v, v2);
        }
    }
}
