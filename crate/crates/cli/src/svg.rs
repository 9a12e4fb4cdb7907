//! Minimal |S21| plot: one polyline, two axes, tick marks and labels.
//! Coordinates are printed with fixed precision so output is reproducible.

use std::fmt::Write as _;

use mmfilt::ComplexCurve;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const X_TICKS: usize = 6;
const DB_STEP: f64 = 10.0;
/// Lowest level drawn; deeper nulls are clipped here.
const DB_CLIP: f64 = -100.0;

pub fn s21_plot(s21: &ComplexCurve) -> String {
    let freqs = s21.freqs();
    let db: Vec<f64> = s21
        .magnitude_db()
        .into_iter()
        .map(|v| v.max(DB_CLIP))
        .collect();
    let (f_lo, f_hi) = match (freqs.first(), freqs.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        (Some(&a), _) => (0.5 * a, 1.5 * a),
        _ => (0.0, 1.0),
    };
    let top_db = (db.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / DB_STEP).ceil() * DB_STEP;
    let top_db = if top_db.is_finite() {
        top_db.max(0.0)
    } else {
        0.0
    };
    let low_db = (db.iter().cloned().fold(f64::INFINITY, f64::min) / DB_STEP).floor() * DB_STEP;
    let low_db = if low_db.is_finite() && low_db < top_db {
        low_db
    } else {
        top_db - DB_STEP
    };

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |f: f64| LEFT + (f - f_lo) / (f_hi - f_lo) * plot_w;
    let y = |v: f64| TOP + (top_db - v) / (top_db - low_db) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<path d="M{LEFT:.2} {TOP:.2} L{LEFT:.2} {:.2} L{:.2} {:.2}" fill="none" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );

    for i in 0..X_TICKS {
        let f = f_lo + (f_hi - f_lo) * i as f64 / (X_TICKS - 1) as f64;
        let px = x(f);
        let _ = writeln!(
            out,
            r#"<path d="M{px:.2} {:.2} L{px:.2} {:.2}" stroke="black"/>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{:.2}" font-size="12" text-anchor="middle">{:.2}</text>"#,
            TOP + plot_h + 20.0,
            f / 1e9
        );
    }
    let mut level = top_db;
    while level >= low_db - 1e-9 {
        let py = y(level);
        let _ = writeln!(
            out,
            r#"<path d="M{:.2} {py:.2} L{LEFT:.2} {py:.2}" stroke="black"/>"#,
            LEFT - 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{level:.0}</text>"#,
            LEFT - 8.0,
            py + 4.0
        );
        level -= DB_STEP;
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">Frequency (GHz)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">|S21| (dB)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let mut d = String::new();
    for (i, (&f, &v)) in freqs.iter().zip(&db).enumerate() {
        let _ = write!(
            d,
            "{}{:.2} {:.2}",
            if i == 0 { "M" } else { " L" },
            x(f),
            y(v)
        );
    }
    if !d.is_empty() {
        let _ = writeln!(
            out,
            r#"<path d="{d}" fill="none" stroke="blue" stroke-width="1.5"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}
