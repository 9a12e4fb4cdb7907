//! `start:stop:count` parsing for frequency grids and sweep ranges.

use std::fmt;
use std::str::FromStr;

/// Inclusive linear span with `count ≥ 2` points and `start < stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Span {
    /// Sample values; the last one is exactly `stop`.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count - 1;
        let step = (self.stop - self.start) / n as f64;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got '{s}'"));
        };
        let num = |t: &str| -> Result<f64, String> {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{t}' is not a finite number"))
        };
        let (start, stop) = (num(start)?, num(stop)?);
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| format!("'{count}' is not a point count"))?;
        if count < 2 {
            return Err(format!("count must be at least 2, got {count}"));
        }
        if !(start < stop) {
            return Err(format!("start {start} must be below stop {stop}"));
        }
        Ok(Span { start, stop, count })
    }
}

/// A span of frequencies, which must also be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid(pub Span);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let span: Span = s.parse()?;
        if span.start <= 0.0 {
            return Err(format!("grid start {} must be positive", span.start));
        }
        Ok(Grid(span))
    }
}

impl Grid {
    pub fn frequencies(&self) -> Vec<f64> {
        self.0.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_samples() {
        let s: Span = "0:1e-10:5".parse().unwrap();
        let v = s.values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[4], 1e-10);
        let g: Grid = "1e9:4e10:4001".parse().unwrap();
        assert_eq!(g.frequencies()[4000], 4e10);
    }

    #[test]
    fn rejects_bad_spans() {
        for bad in [
            "1:2", "1:2:1", "2:1:5", "a:2:3", "1:2:x", "1:inf:3", "1:2:3:4",
        ] {
            assert!(bad.parse::<Span>().is_err(), "{bad}");
        }
        assert!("0:1e9:3".parse::<Grid>().is_err());
        assert!("-1:1e9:3".parse::<Grid>().is_err());
    }
}
