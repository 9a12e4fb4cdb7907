//! Touchstone v1 reader and writer for one- and two-port S-parameters.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::curve::ComplexCurve;
use crate::error::{format_err, Result};
use crate::network::{SMatrix, SParameterBlock, DEFAULT_Z0};

/// Magnitude written for an exact zero in DB format, which has no logarithm.
const DB_FLOOR: f64 = -6000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FrequencyUnit {
    pub fn multiplier(self) -> f64 {
        match self {
            FrequencyUnit::Hz => 1.0,
            FrequencyUnit::KHz => 1e3,
            FrequencyUnit::MHz => 1e6,
            FrequencyUnit::GHz => 1e9,
        }
    }

    fn token(self) -> &'static str {
        match self {
            FrequencyUnit::Hz => "HZ",
            FrequencyUnit::KHz => "KHZ",
            FrequencyUnit::MHz => "MHZ",
            FrequencyUnit::GHz => "GHZ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Real and imaginary parts.
    RI,
    /// Linear magnitude and angle in degrees.
    MA,
    /// `20·log10` magnitude and angle in degrees.
    DB,
}

impl DataFormat {
    fn token(self) -> &'static str {
        match self {
            DataFormat::RI => "RI",
            DataFormat::MA => "MA",
            DataFormat::DB => "DB",
        }
    }

    fn decode(self, a: f64, b: f64) -> Complex64 {
        match self {
            DataFormat::RI => Complex64::new(a, b),
            DataFormat::MA => Complex64::from_polar(a, b * PI / 180.0),
            DataFormat::DB => Complex64::from_polar(10f64.powf(a / 20.0), b * PI / 180.0),
        }
    }

    fn encode(self, z: Complex64) -> (f64, f64) {
        match self {
            DataFormat::RI => (z.re, z.im),
            DataFormat::MA => (z.norm(), z.arg().to_degrees()),
            DataFormat::DB => {
                let db = 20.0 * z.norm().log10();
                (
                    if db.is_finite() { db } else { DB_FLOOR },
                    z.arg().to_degrees(),
                )
            }
        }
    }
}

/// Contents of the `#` option line. Only S parameters are supported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TouchstoneHeader {
    pub frequency_unit: FrequencyUnit,
    pub format: DataFormat,
    pub reference_resistance: f64,
}

impl Default for TouchstoneHeader {
    fn default() -> Self {
        Self {
            frequency_unit: FrequencyUnit::GHz,
            format: DataFormat::MA,
            reference_resistance: DEFAULT_Z0,
        }
    }
}

/// Reflection coefficient of a one-port against `z0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OnePort {
    pub s11: ComplexCurve,
    pub z0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NetworkData {
    OnePort(OnePort),
    TwoPort(SParameterBlock),
}

impl NetworkData {
    pub fn ports(&self) -> usize {
        match self {
            NetworkData::OnePort(_) => 1,
            NetworkData::TwoPort(_) => 2,
        }
    }

    pub fn z0(&self) -> f64 {
        match self {
            NetworkData::OnePort(p) => p.z0,
            NetworkData::TwoPort(b) => b.z0(),
        }
    }
}

/// Port count implied by a `.sNp` file name, for N of 1 or 2.
pub fn ports_from_path(path: &std::path::Path) -> Option<usize> {
    match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
        "s1p" => Some(1),
        "s2p" => Some(2),
        _ => None,
    }
}

fn parse_option_line(rest: &str, line: usize) -> Result<TouchstoneHeader> {
    let mut header = TouchstoneHeader::default();
    let mut tokens = rest.split_whitespace();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            "HZ" => header.frequency_unit = FrequencyUnit::Hz,
            "KHZ" => header.frequency_unit = FrequencyUnit::KHz,
            "MHZ" => header.frequency_unit = FrequencyUnit::MHz,
            "GHZ" => header.frequency_unit = FrequencyUnit::GHz,
            "S" => {}
            "Y" | "Z" | "G" | "H" => {
                return Err(format_err(
                    line,
                    format!("unsupported parameter type '{tok}'"),
                ));
            }
            "RI" => header.format = DataFormat::RI,
            "MA" => header.format = DataFormat::MA,
            "DB" => header.format = DataFormat::DB,
            "R" => {
                let v = tokens
                    .next()
                    .ok_or_else(|| format_err(line, "'R' without a resistance"))?;
                let r = parse_number(v, line)?;
                if r <= 0.0 {
                    return Err(format_err(
                        line,
                        format!("reference resistance {r} must be positive"),
                    ));
                }
                header.reference_resistance = r;
            }
            _ => return Err(format_err(line, format!("unknown option token '{tok}'"))),
        }
    }
    Ok(header)
}

fn parse_number(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format_err(line, format!("malformed number '{tok}'"))),
    }
}

/// Parses Touchstone v1 text holding `ports` ports (1 or 2).
///
/// Two-port lines carry `S11 S21 S12 S22`. Frequencies are returned in hertz.
pub fn read_touchstone(text: &str, ports: usize) -> Result<(TouchstoneHeader, NetworkData)> {
    if !(ports == 1 || ports == 2) {
        return Err(format_err(0, format!("{ports}-port data is not supported")));
    }
    let columns = 1 + 2 * ports * ports;
    let mut header: Option<TouchstoneHeader> = None;
    let mut freqs: Vec<f64> = Vec::new();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('#') {
            if !freqs.is_empty() {
                return Err(format_err(line, "option line after network data"));
            }
            if header.is_some() {
                // later option lines are ignored, as in the v1 format
                continue;
            }
            header = Some(parse_option_line(rest, line)?);
            continue;
        }
        let h = *header.get_or_insert_with(TouchstoneHeader::default);
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != columns {
            return Err(format_err(
                line,
                format!(
                    "expected {columns} columns for {ports}-port data, found {}",
                    tokens.len()
                ),
            ));
        }
        let values = tokens
            .iter()
            .map(|t| parse_number(t, line))
            .collect::<Result<Vec<f64>>>()?;
        let f = values[0] * h.frequency_unit.multiplier();
        if f <= 0.0 {
            return Err(format_err(
                line,
                format!("frequency {f} Hz must be positive"),
            ));
        }
        if let Some(&prev) = freqs.last() {
            if f <= prev {
                return Err(format_err(
                    line,
                    format!("frequency {f} Hz does not increase"),
                ));
            }
        }
        freqs.push(f);
        rows.push(
            values[1..]
                .chunks(2)
                .map(|p| h.format.decode(p[0], p[1]))
                .collect(),
        );
    }

    let header = header.unwrap_or_default();
    let z0 = header.reference_resistance;
    let data = if ports == 1 {
        let s11 = ComplexCurve::new(freqs, rows.into_iter().map(|r| r[0]).collect())
            .map_err(|e| format_err(0, e.to_string()))?;
        NetworkData::OnePort(OnePort { s11, z0 })
    } else {
        let mats = rows
            .into_iter()
            .map(|r| SMatrix {
                s11: r[0],
                s21: r[1],
                s12: r[2],
                s22: r[3],
            })
            .collect();
        NetworkData::TwoPort(
            SParameterBlock::new(freqs, mats, z0).map_err(|e| format_err(0, e.to_string()))?,
        )
    };
    Ok((header, data))
}

/// Serializes `data` with the given unit and format. Numbers are written
/// in shortest round-trip form, so reading the text back is lossless up to
/// the unit and format conversions.
pub fn write_touchstone(data: &NetworkData, unit: FrequencyUnit, format: DataFormat) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} S {} R {:?}",
        unit.token(),
        format.token(),
        data.z0()
    );
    let scale = unit.multiplier();
    let mut row = |f: f64, values: &[Complex64]| {
        let _ = write!(out, "{:e}", f / scale);
        for v in values {
            let (a, b) = format.encode(*v);
            let _ = write!(out, " {a:e} {b:e}");
        }
        out.push('\n');
    };
    match data {
        NetworkData::OnePort(p) => {
            for (f, v) in p.s11.iter() {
                row(f, &[v]);
            }
        }
        NetworkData::TwoPort(b) => {
            for (&f, m) in b.freqs().iter().zip(b.matrices()) {
                row(f, &[m.s11, m.s21, m.s12, m.s22]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn one_port(text: &str) -> OnePort {
        match read_touchstone(text, 1).unwrap().1 {
            NetworkData::OnePort(p) => p,
            _ => unreachable!(),
        }
    }

    fn line_of(e: Error) -> usize {
        match e {
            Error::Format { line, .. } => line,
            other => panic!("not a format error: {other}"),
        }
    }

    #[test]
    fn magnitude_angle_read() {
        let p = one_port("# GHz S MA R 50\n1.0 0.5 0.0\n");
        assert_eq!(p.s11.freqs(), &[1e9]);
        assert_eq!(p.s11.values()[0], Complex64::new(0.5, 0.0));
        assert_eq!(p.z0, 50.0);
    }

    #[test]
    fn real_imaginary_two_port_read() {
        let text = "! comment\n# Hz S RI R 50\n2e10 0.1 -0.2 0.3 0.4 0.3 0.4 0.0 1.0 ! trailing\n";
        let (h, d) = read_touchstone(text, 2).unwrap();
        assert_eq!(h.format, DataFormat::RI);
        let NetworkData::TwoPort(b) = d else {
            unreachable!()
        };
        assert_eq!(b.freqs(), &[2e10]);
        assert_eq!(b.matrices()[0].s11, Complex64::new(0.1, -0.2));
        assert_eq!(b.matrices()[0].s22, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn decibel_read() {
        let p = one_port("# GHZ S DB R 50\n1.0 -6.0206 0.0\n");
        assert!((p.s11.values()[0].norm() - 0.5).abs() < 1e-5);
    }

    #[test]
    fn defaults_without_option_line() {
        let (h, d) = read_touchstone("1.0 0.5 90\n", 1).unwrap();
        assert_eq!(h, TouchstoneHeader::default());
        let NetworkData::OnePort(p) = d else {
            unreachable!()
        };
        assert_eq!(p.s11.freqs(), &[1e9]);
        assert!((p.s11.values()[0] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn rejects_malformed_input() {
        let e = read_touchstone("# GHz S RI R 50\n1 0 0\n1 0 0\n", 1).unwrap_err();
        assert_eq!(line_of(e), 3);
        let e = read_touchstone("# GHz S RI R 50\n1 0 0 0\n", 1).unwrap_err();
        assert_eq!(line_of(e), 2);
        let e = read_touchstone("# GHz S RI Q 50\n", 1).unwrap_err();
        assert_eq!(line_of(e), 1);
        let e = read_touchstone("# GHz Z RI\n", 1).unwrap_err();
        assert_eq!(line_of(e), 1);
        let e = read_touchstone("# GHz S RI\n1 0,5 0\n", 1).unwrap_err();
        assert_eq!(line_of(e), 2);
        let e = read_touchstone("# GHz S RI\n1 nan 0\n", 1).unwrap_err();
        assert_eq!(line_of(e), 2);
        let e = read_touchstone("\n\n1 0 0\n# MHz\n", 1).unwrap_err();
        assert_eq!(line_of(e), 4);
        assert!(read_touchstone("", 3).is_err());
    }

    #[test]
    fn empty_block_round_trips() {
        let b = SParameterBlock::new(vec![], vec![], 50.0).unwrap();
        let text = write_touchstone(
            &NetworkData::TwoPort(b.clone()),
            FrequencyUnit::GHz,
            DataFormat::RI,
        );
        assert_eq!(text.lines().count(), 1);
        let (_, back) = read_touchstone(&text, 2).unwrap();
        assert_eq!(back, NetworkData::TwoPort(b));
    }

    #[test]
    fn zero_magnitude_in_db_format() {
        let s11 = ComplexCurve::new(vec![1e9], vec![Complex64::new(0.0, 0.0)]).unwrap();
        let text = write_touchstone(
            &NetworkData::OnePort(OnePort { s11, z0: 50.0 }),
            FrequencyUnit::Hz,
            DataFormat::DB,
        );
        let p = one_port(&text);
        assert!(p.s11.values()[0].norm() < 1e-290);
    }

    #[test]
    fn port_count_from_extension() {
        use std::path::Path;
        assert_eq!(ports_from_path(Path::new("a/b.s1p")), Some(1));
        assert_eq!(ports_from_path(Path::new("b.S2P")), Some(2));
        assert_eq!(ports_from_path(Path::new("b.s4p")), None);
    }
}
