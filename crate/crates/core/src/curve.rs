//! Frequency grids and complex-valued frequency responses.

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Checks that a frequency grid is finite, positive and strictly increasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    for (i, &f) in grid.iter().enumerate() {
        if !f.is_finite() || f <= 0.0 {
            return Err(domain(format!(
                "frequency {f} at index {i} is not positive and finite"
            )));
        }
        if i > 0 && grid[i - 1] >= f {
            return Err(domain(format!(
                "grid is not strictly increasing at index {i} ({} >= {f})",
                grid[i - 1]
            )));
        }
    }
    Ok(())
}

/// `count` evenly spaced points from `start` to `stop`, both included.
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(domain("grid needs at least two points"));
    }
    if !(start.is_finite() && stop.is_finite()) || start <= 0.0 || start >= stop {
        return Err(domain(format!("invalid grid span {start}..{stop}")));
    }
    let step = (stop - start) / (count - 1) as f64;
    let mut grid: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
    grid[count - 1] = stop;
    Ok(grid)
}

/// Log-spaced grid with `per_decade` intervals per decade, always including both ends.
pub fn log_grid(start: f64, stop: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite()) || start <= 0.0 || start >= stop {
        return Err(domain(format!("invalid grid span {start}..{stop}")));
    }
    let decades = (stop / start).log10();
    let intervals = ((decades * per_decade as f64).ceil() as usize).max(2);
    let ratio = (stop / start).ln() / intervals as f64;
    let mut grid: Vec<f64> = (0..=intervals)
        .map(|i| start * (ratio * i as f64).exp())
        .collect();
    grid[0] = start;
    grid[intervals] = stop;
    Ok(grid)
}

/// A strictly increasing frequency grid paired with complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCurve {
    freqs: Vec<f64>,
    values: Vec<Complex64>,
}

impl ComplexCurve {
    pub fn new(freqs: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if freqs.len() != values.len() {
            return Err(domain(format!(
                "{} frequencies but {} samples",
                freqs.len(),
                values.len()
            )));
        }
        validate_grid(&freqs)?;
        if let Some(i) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(domain(format!("sample {i} is not finite")));
        }
        Ok(Self { freqs, values })
    }

    /// Builds a curve from samples in arbitrary order, sorting by frequency.
    pub fn from_unsorted(mut samples: Vec<(f64, Complex64)>) -> Result<Self> {
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (freqs, values) = samples.into_iter().unzip();
        Self::new(freqs, values)
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.freqs.iter().copied().zip(self.values.iter().copied())
    }

    /// Magnitude in dB, `20·log10|x|`.
    pub fn magnitude_db(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| 20.0 * v.norm().log10())
            .collect()
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        Self {
            freqs: self.freqs.clone(),
            values: self.iter().map(|(fr, v)| f(fr, v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(validate_grid(&[1.0, 2.0, 3.0]).is_ok());
        assert!(validate_grid(&[]).is_ok());
        assert!(validate_grid(&[1.0, 1.0]).is_err());
        assert!(validate_grid(&[0.0, 1.0]).is_err());
        assert!(validate_grid(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn linear_grid_endpoints() {
        let g = linear_grid(1e9, 4e10, 4001).unwrap();
        assert_eq!(g.len(), 4001);
        assert_eq!(g[0], 1e9);
        assert_eq!(g[4000], 4e10);
        assert!(linear_grid(2.0, 1.0, 10).is_err());
        assert!(linear_grid(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn log_grid_density() {
        let g = log_grid(1e9, 1e10, 2000).unwrap();
        assert_eq!(g.len(), 2001);
        assert_eq!(*g.last().unwrap(), 1e10);
        validate_grid(&g).unwrap();
    }

    #[test]
    fn unsorted_samples_are_sorted() {
        let c = ComplexCurve::from_unsorted(vec![
            (3.0, Complex64::new(3.0, 0.0)),
            (1.0, Complex64::new(1.0, 0.0)),
        ])
        .unwrap();
        assert_eq!(c.freqs(), &[1.0, 3.0]);
        assert_eq!(c.values()[0].re, 1.0);
    }
}
