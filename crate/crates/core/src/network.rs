//! Two-port network algebra: ABCD cascades, S-parameter conversion and the
//! ladder filter built from MBVD resonators.

use num_complex::Complex64;

use crate::curve::{validate_grid, ComplexCurve};
use crate::error::{domain, Error, Result};
use crate::mbvd::MbvdParams;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Default reference impedance.
pub const DEFAULT_Z0: f64 = 50.0;

/// One 2×2 transmission matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abcd {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Abcd {
    pub const IDENTITY: Abcd = Abcd {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    pub fn series(z: Complex64) -> Self {
        Abcd {
            b: z,
            ..Self::IDENTITY
        }
    }

    pub fn shunt(y: Complex64) -> Self {
        Abcd {
            c: y,
            ..Self::IDENTITY
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d]
            .iter()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl std::ops::Mul for Abcd {
    type Output = Abcd;

    fn mul(self, r: Abcd) -> Abcd {
        Abcd {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

/// ABCD matrices on a shared frequency grid.
///
/// Determinants are carried alongside the matrices. A cascade multiplies
/// them, which stays accurate where `ad − bc` of the product would cancel.
#[derive(Debug, Clone, PartialEq)]
pub struct AbcdBlock {
    freqs: Vec<f64>,
    mats: Vec<Abcd>,
    dets: Vec<Complex64>,
}

impl AbcdBlock {
    pub fn new(freqs: Vec<f64>, mats: Vec<Abcd>) -> Result<Self> {
        if freqs.len() != mats.len() {
            return Err(domain(format!(
                "{} frequencies but {} matrices",
                freqs.len(),
                mats.len()
            )));
        }
        validate_grid(&freqs)?;
        if let Some(i) = mats.iter().position(|m| !m.is_finite()) {
            return Err(domain(format!(
                "ABCD matrix at {} Hz is not finite",
                freqs[i]
            )));
        }
        let dets = mats.iter().map(Abcd::det).collect();
        Ok(Self { freqs, mats, dets })
    }

    pub fn identity(grid: &[f64]) -> Result<Self> {
        Self::new(grid.to_vec(), vec![Abcd::IDENTITY; grid.len()])
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn matrices(&self) -> &[Abcd] {
        &self.mats
    }

    pub fn determinants(&self) -> &[Complex64] {
        &self.dets
    }
}

/// Per-frequency scattering matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix {
    pub s11: Complex64,
    pub s21: Complex64,
    pub s12: Complex64,
    pub s22: Complex64,
}

impl SMatrix {
    /// Largest singular value, from the eigenvalues of `SᴴS`.
    pub fn max_singular_value(&self) -> f64 {
        let trace =
            self.s11.norm_sqr() + self.s12.norm_sqr() + self.s21.norm_sqr() + self.s22.norm_sqr();
        let det = (self.s11 * self.s22 - self.s12 * self.s21).norm_sqr();
        let disc = (0.25 * trace * trace - det).max(0.0);
        (0.5 * trace + disc.sqrt()).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SParameterBlock {
    freqs: Vec<f64>,
    mats: Vec<SMatrix>,
    z0: f64,
}

impl SParameterBlock {
    pub fn new(freqs: Vec<f64>, mats: Vec<SMatrix>, z0: f64) -> Result<Self> {
        if !(z0 > 0.0 && z0.is_finite()) {
            return Err(domain(format!("reference impedance {z0} must be positive")));
        }
        if freqs.len() != mats.len() {
            return Err(domain(format!(
                "{} frequencies but {} matrices",
                freqs.len(),
                mats.len()
            )));
        }
        validate_grid(&freqs)?;
        Ok(Self { freqs, mats, z0 })
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn matrices(&self) -> &[SMatrix] {
        &self.mats
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    fn entry(&self, pick: impl Fn(&SMatrix) -> Complex64) -> Result<ComplexCurve> {
        ComplexCurve::new(self.freqs.clone(), self.mats.iter().map(pick).collect())
    }

    pub fn s11(&self) -> Result<ComplexCurve> {
        self.entry(|m| m.s11)
    }

    pub fn s21(&self) -> Result<ComplexCurve> {
        self.entry(|m| m.s21)
    }

    pub fn s12(&self) -> Result<ComplexCurve> {
        self.entry(|m| m.s12)
    }

    pub fn s22(&self) -> Result<ComplexCurve> {
        self.entry(|m| m.s22)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Series,
    Shunt,
}

impl ElementKind {
    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Series => "series",
            ElementKind::Shunt => "shunt",
        }
    }
}

/// One ladder position, referring to a resonator record of the design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderElement {
    pub kind: ElementKind,
    pub resonator: usize,
}

/// Ordered series/shunt resonators between two ports of impedance `z0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderDesign {
    resonators: Vec<MbvdParams>,
    elements: Vec<LadderElement>,
    z0: f64,
}

impl LadderDesign {
    pub fn new(resonators: Vec<MbvdParams>, elements: Vec<LadderElement>, z0: f64) -> Result<Self> {
        if elements.is_empty() {
            return Err(domain("a ladder needs at least one element"));
        }
        if !(z0 > 0.0 && z0.is_finite()) {
            return Err(domain(format!("reference impedance {z0} must be positive")));
        }
        for (i, e) in elements.iter().enumerate() {
            if e.resonator >= resonators.len() {
                return Err(domain(format!(
                    "element {i} references resonator {} of {}",
                    e.resonator,
                    resonators.len()
                )));
            }
        }
        for r in &resonators {
            r.validate()?;
        }
        Ok(Self {
            resonators,
            elements,
            z0,
        })
    }

    /// Shunt-series-shunt filter whose two shunt positions share one record.
    pub fn three_resonator(series: MbvdParams, shunt: MbvdParams, z0: f64) -> Result<Self> {
        let elements = vec![
            LadderElement {
                kind: ElementKind::Shunt,
                resonator: 1,
            },
            LadderElement {
                kind: ElementKind::Series,
                resonator: 0,
            },
            LadderElement {
                kind: ElementKind::Shunt,
                resonator: 1,
            },
        ];
        Self::new(vec![series, shunt], elements, z0)
    }

    pub fn resonators(&self) -> &[MbvdParams] {
        &self.resonators
    }

    pub fn elements(&self) -> &[LadderElement] {
        &self.elements
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn resonator_of(&self, element: &LadderElement) -> &MbvdParams {
        &self.resonators[element.resonator]
    }

    /// The same ladder seen from the other port.
    pub fn reversed(&self) -> Self {
        let mut elements = self.elements.clone();
        elements.reverse();
        Self {
            resonators: self.resonators.clone(),
            elements,
            z0: self.z0,
        }
    }
}

/// Transmission matrix of one resonator placed in series or in shunt.
pub fn element_abcd(kind: ElementKind, p: &MbvdParams, grid: &[f64]) -> Result<AbcdBlock> {
    if grid.is_empty() {
        return Err(domain("empty frequency grid"));
    }
    p.validate()?;
    validate_grid(grid)?;
    let mats = grid
        .iter()
        .map(|&f| match kind {
            ElementKind::Series => Abcd::series(p.impedance(f)),
            ElementKind::Shunt => Abcd::shunt(p.admittance(f)),
        })
        .collect();
    AbcdBlock::new(grid.to_vec(), mats)
}

/// Left-to-right product of `blocks`, all sampled on `grid`.
pub fn cascade(grid: &[f64], blocks: &[AbcdBlock]) -> Result<AbcdBlock> {
    validate_grid(grid)?;
    for (i, b) in blocks.iter().enumerate() {
        if b.freqs.as_slice() != grid {
            return Err(Error::Alignment(format!(
                "block {i} has a different frequency grid"
            )));
        }
    }
    let mats: Vec<Abcd> = (0..grid.len())
        .map(|k| blocks.iter().fold(Abcd::IDENTITY, |acc, b| acc * b.mats[k]))
        .collect();
    if let Some(i) = mats.iter().position(|m| !m.is_finite()) {
        return Err(domain(format!("cascade overflows at {} Hz", grid[i])));
    }
    let dets = (0..grid.len())
        .map(|k| blocks.iter().fold(ONE, |acc, b| acc * b.dets[k]))
        .collect();
    Ok(AbcdBlock {
        freqs: grid.to_vec(),
        mats,
        dets,
    })
}

pub fn abcd_to_smatrix(m: &Abcd, z0: f64) -> Option<SMatrix> {
    smatrix_with_det(m, m.det(), z0)
}

fn smatrix_with_det(m: &Abcd, det: Complex64, z0: f64) -> Option<SMatrix> {
    let b = m.b / z0;
    let c = m.c * z0;
    let delta = m.a + b + c + m.d;
    if delta == ZERO || !(delta.re.is_finite() && delta.im.is_finite()) {
        return None;
    }
    Some(SMatrix {
        s11: (m.a + b - c - m.d) / delta,
        s21: 2.0 / delta,
        s12: 2.0 * det / delta,
        s22: (-m.a + b - c + m.d) / delta,
    })
}

pub fn abcd_to_s(block: &AbcdBlock, z0: f64) -> Result<SParameterBlock> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(domain(format!("reference impedance {z0} must be positive")));
    }
    let mats = block
        .freqs
        .iter()
        .zip(block.mats.iter().zip(&block.dets))
        .map(|(&f, (m, &det))| {
            smatrix_with_det(m, det, z0).ok_or(Error::SingularConversion { frequency: f })
        })
        .collect::<Result<Vec<_>>>()?;
    SParameterBlock::new(block.freqs.clone(), mats, z0)
}

/// Two-port response of the ladder on `grid`.
pub fn build_ladder_response(design: &LadderDesign, grid: &[f64]) -> Result<SParameterBlock> {
    let blocks = design
        .elements
        .iter()
        .map(|e| element_abcd(e.kind, design.resonator_of(e), grid))
        .collect::<Result<Vec<_>>>()?;
    abcd_to_s(&cascade(grid, &blocks)?, design.z0)
}

/// Reflection coefficient of a one-port with admittance `y`.
pub fn admittance_to_reflection(y: Complex64, z0: f64) -> Complex64 {
    let yn = y * z0;
    (ONE - yn) / (ONE + yn)
}

/// Admittance of a one-port with reflection coefficient `s11`.
pub fn reflection_to_admittance(s11: Complex64, z0: f64) -> Complex64 {
    (ONE - s11) / ((ONE + s11) * z0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mbvd::{mbvd_from_targets, resonator_admittance};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn res(fs: f64) -> MbvdParams {
        mbvd_from_targets(fs, 0.42, 80e-15, 40.0, 0.5, 10e-12).unwrap()
    }

    #[test]
    fn element_identities() {
        let grid = [1e9];
        assert_eq!(Abcd::series(ZERO), Abcd::IDENTITY);
        assert_eq!(Abcd::shunt(ZERO), Abcd::IDENTITY);
        assert!(element_abcd(ElementKind::Series, &res(20e9), &[]).is_err());
        let b = element_abcd(ElementKind::Shunt, &res(20e9), &grid).unwrap();
        assert!((b.matrices()[0].det() - ONE).norm() < 1e-12);
    }

    #[test]
    fn series_element_matches_admittance() {
        let p = mbvd_from_targets(20e9, 0.42, 50e-15, 40.0, 0.0, 0.0).unwrap();
        let grid = [19e9, 20e9, 21e9];
        let block = element_abcd(ElementKind::Series, &p, &grid).unwrap();
        let y = resonator_admittance(&p, &grid).unwrap();
        for (m, yv) in block.matrices().iter().zip(y.values()) {
            let z = yv.inv();
            assert!((m.b - z).norm() < 1e-12 * z.norm());
            assert!((m.det() - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn cascade_basics() {
        let grid = vec![1e9, 2e9];
        let empty = cascade(&grid, &[]).unwrap();
        assert!(empty.matrices().iter().all(|m| *m == Abcd::IDENTITY));

        let x = element_abcd(ElementKind::Shunt, &res(20e9), &grid).unwrap();
        assert_eq!(cascade(&grid, std::slice::from_ref(&x)).unwrap(), x);

        let z1 = c(10.0, 3.0);
        let z2 = c(-2.0, 7.5);
        let s1 = AbcdBlock::new(grid.clone(), vec![Abcd::series(z1); 2]).unwrap();
        let s2 = AbcdBlock::new(grid.clone(), vec![Abcd::series(z2); 2]).unwrap();
        let both = cascade(&grid, &[s1, s2]).unwrap();
        assert_eq!(both.matrices()[0], Abcd::series(z1 + z2));
    }

    #[test]
    fn cascade_rejects_mixed_grids() {
        let a = AbcdBlock::identity(&[1e9, 2e9]).unwrap();
        let b = AbcdBlock::identity(&[1e9, 3e9]).unwrap();
        assert!(matches!(
            cascade(&[1e9, 2e9], &[a, b]),
            Err(Error::Alignment(_))
        ));
    }

    #[test]
    fn conversion_examples() {
        let s = abcd_to_smatrix(&Abcd::IDENTITY, 50.0).unwrap();
        assert_eq!(s.s11, ZERO);
        assert_eq!(s.s21, ONE);

        let s = abcd_to_smatrix(&Abcd::series(c(50.0, 0.0)), 50.0).unwrap();
        assert!((s.s21 - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((20.0 * s.s21.norm().log10() + 3.522).abs() < 1e-3);

        let s = abcd_to_smatrix(&Abcd::shunt(c(0.02, 0.0)), 50.0).unwrap();
        assert!((s.s21 - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_conversion_names_frequency() {
        let m = Abcd {
            a: c(1.0, 0.0),
            b: ZERO,
            c: ZERO,
            d: c(-1.0, 0.0),
        };
        let block = AbcdBlock::new(vec![5e9], vec![m]).unwrap();
        assert_eq!(
            abcd_to_s(&block, 50.0),
            Err(Error::SingularConversion { frequency: 5e9 })
        );
        assert!(abcd_to_s(&block, 0.0).is_err());
    }

    #[test]
    fn ladder_through_and_reversal() {
        let grid: Vec<f64> = (1..=200).map(|i| i as f64 * 2e8).collect();
        let design = LadderDesign::three_resonator(res(23.5e9), res(19.0e9), 50.0).unwrap();
        let fwd = build_ladder_response(&design, &grid).unwrap();
        let rev = build_ladder_response(&design.reversed(), &grid).unwrap();
        for (a, b) in fwd.matrices().iter().zip(rev.matrices()) {
            assert!((a.s21 - b.s21).norm() < 1e-12);
            assert!((a.s12 - a.s21).norm() < 1e-12 * a.s21.norm().max(1e-300));
        }
        assert!(LadderDesign::new(vec![], vec![], 50.0).is_err());
        let dangling = vec![LadderElement {
            kind: ElementKind::Series,
            resonator: 3,
        }];
        assert!(LadderDesign::new(vec![res(1e9)], dangling, 50.0).is_err());
    }

    #[test]
    fn one_port_conversions_invert() {
        let y = c(0.013, -0.021);
        let back = reflection_to_admittance(admittance_to_reflection(y, 50.0), 50.0);
        assert!((back - y).norm() < 1e-15);
    }

    #[test]
    fn singular_value_of_unitary_is_one() {
        let s = SMatrix {
            s11: c(0.6, 0.0),
            s21: c(0.0, 0.8),
            s12: c(0.0, 0.8),
            s22: c(0.6, 0.0),
        };
        assert!((s.max_singular_value() - 1.0).abs() < 1e-15);
    }
}
