//! Three-resonator ladder synthesis against a target specification.
//!
//! The search starts from the textbook placement (series resonance and
//! shunt anti-resonance both at the center frequency, shunt `c0` presenting
//! `1/z0` of susceptance at center) and then tunes the two resonance
//! frequencies and two static capacitances with Nelder-Mead on a fixed
//! penalty. Everything is deterministic.

use std::f64::consts::PI;

use crate::curve::{linear_grid, validate_grid};
use crate::error::{domain, Error, Result};
use crate::mbvd::{mbvd_from_targets, K2_SCALE};
use crate::metrics::{passband_metrics, FilterMetrics, DEFAULT_GUARD};
use crate::network::{build_ladder_response, LadderDesign};
use crate::optimize::nelder_mead;

/// Objective evaluations allowed per synthesis run.
pub const MAX_EVALUATIONS: usize = 2000;
/// Points in the evaluation grid.
pub const GRID_POINTS: usize = 1601;
/// Evaluation grid span as multiples of the target center frequency.
pub const GRID_SPAN: (f64, f64) = (0.5, 1.8);
/// Relative size of the start simplex.
const SIMPLEX_STEP: f64 = 0.05;
/// Objective for candidates whose response has no measurable passband.
pub const UNMEASURABLE: f64 = 1e6;

/// Acceptance window on the achieved center frequency (relative).
pub const FC_TOLERANCE: f64 = 0.005;
/// Acceptance window on the achieved fractional bandwidth (absolute).
pub const FBW_TOLERANCE: f64 = 0.015;

/// Target specification. Frequencies in hertz, levels in dB, `fbw_target`
/// and `k2` as fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignSpec {
    pub fc_target: f64,
    pub fbw_target: f64,
    pub z0: f64,
    pub oob_min_db: f64,
    pub k2: f64,
    pub q: f64,
    pub rs: f64,
    pub ls: f64,
    pub il_max_db: f64,
}

impl DesignSpec {
    /// Rejects specifications the search cannot even start from.
    pub fn validate(&self) -> Result<()> {
        if !(self.k2 > 0.0) {
            return Err(Error::Infeasible(format!(
                "coupling k2 = {} leaves no bandwidth",
                self.k2
            )));
        }
        if !(self.q > 0.0) {
            return Err(Error::Infeasible(format!(
                "quality factor {} must be positive",
                self.q
            )));
        }
        if self.k2 >= K2_SCALE {
            return Err(Error::InfeasibleCoupling { k2: self.k2 });
        }
        let positive = [
            ("fc_target", self.fc_target),
            ("fbw_target", self.fbw_target),
            ("z0", self.z0),
            ("oob_min_db", self.oob_min_db),
            ("il_max_db", self.il_max_db),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("{name} = {v} must be positive")));
            }
        }
        for (name, v) in [("rs", self.rs), ("ls", self.ls)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(domain(format!("{name} = {v} must be non-negative")));
            }
        }
        Ok(())
    }

    /// Coarse upper bound on the bandwidth a ladder of this coupling can pass.
    pub fn bandwidth_plausible(&self) -> bool {
        self.fbw_target < 2.0 * self.k2 / K2_SCALE
    }

    /// True when `m` satisfies every target.
    pub fn is_met_by(&self, m: &FilterMetrics) -> bool {
        m.il_db <= self.il_max_db
            && ((m.fc - self.fc_target) / self.fc_target).abs() <= FC_TOLERANCE
            && (m.fbw3 - self.fbw_target).abs() <= FBW_TOLERANCE
            && m.oob_rejection_db >= self.oob_min_db
    }

    /// Penalty minimized by the search; zero when every target is met exactly.
    pub fn objective(&self, m: &FilterMetrics) -> f64 {
        10.0 * (m.il_db - self.il_max_db).max(0.0)
            + 5.0 * (m.fbw3 - self.fbw_target).abs()
            + 2.0 * (self.oob_min_db - m.oob_rejection_db).max(0.0)
            + 20.0 * (m.fc - self.fc_target).abs() / self.fc_target
    }
}

/// The four tuned quantities of a three-resonator ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderTuning {
    pub fs_series: f64,
    pub fs_shunt: f64,
    pub c0_series: f64,
    pub c0_shunt: f64,
}

impl LadderTuning {
    /// Starting point of the search.
    pub fn initial(spec: &DesignSpec) -> Self {
        let x = spec.k2 / K2_SCALE;
        let cm_over_c0 = x / (1.0 - x);
        let c0_shunt = 1.0 / (2.0 * PI * spec.fc_target * spec.z0);
        Self {
            fs_series: spec.fc_target,
            fs_shunt: spec.fc_target / (1.0 + cm_over_c0).sqrt(),
            c0_series: 0.5 * c0_shunt,
            c0_shunt,
        }
    }

    fn to_vec(self) -> [f64; 4] {
        [self.fs_series, self.fs_shunt, self.c0_series, self.c0_shunt]
    }

    fn scaled(self, x: &[f64]) -> Self {
        Self {
            fs_series: self.fs_series * x[0],
            fs_shunt: self.fs_shunt * x[1],
            c0_series: self.c0_series * x[2],
            c0_shunt: self.c0_shunt * x[3],
        }
    }

    /// Shunt-series-shunt ladder realizing this tuning under `spec`.
    pub fn design(&self, spec: &DesignSpec) -> Result<LadderDesign> {
        if self.to_vec().iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(domain(format!("non-positive tuning {self:?}")));
        }
        let series = mbvd_from_targets(
            self.fs_series,
            spec.k2,
            self.c0_series,
            spec.q,
            spec.rs,
            spec.ls,
        )?;
        let shunt = mbvd_from_targets(
            self.fs_shunt,
            spec.k2,
            self.c0_shunt,
            spec.q,
            spec.rs,
            spec.ls,
        )?;
        LadderDesign::three_resonator(series, shunt, spec.z0)
    }
}

/// Grid on which candidates are scored.
pub fn synthesis_grid(fc_target: f64) -> Result<Vec<f64>> {
    linear_grid(
        GRID_SPAN.0 * fc_target,
        GRID_SPAN.1 * fc_target,
        GRID_POINTS,
    )
}

/// Metrics of `design` on `grid`, with the default stopband guard.
pub fn evaluate(design: &LadderDesign, grid: &[f64]) -> Result<FilterMetrics> {
    validate_grid(grid)?;
    let s = build_ladder_response(design, grid)?;
    passband_metrics(&s.s21()?, DEFAULT_GUARD)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub design: LadderDesign,
    pub tuning: LadderTuning,
    /// `None` when even the best candidate has no measurable passband.
    pub metrics: Option<FilterMetrics>,
    pub feasible: bool,
    pub objective: f64,
    pub evaluations: usize,
}

/// Tunes a shunt-series-shunt ladder toward `spec`.
///
/// Specs that cannot be met still return the best candidate found, with
/// `feasible == false`.
pub fn synthesize_ladder(spec: &DesignSpec) -> Result<SynthesisResult> {
    spec.validate()?;
    let grid = synthesis_grid(spec.fc_target)?;
    let start = LadderTuning::initial(spec);

    let score = |x: &[f64]| -> f64 {
        let tuning = start.scaled(x);
        match tuning.design(spec).and_then(|d| evaluate(&d, &grid)) {
            Ok(m) => spec.objective(&m),
            Err(_) => UNMEASURABLE,
        }
    };
    let best = nelder_mead(score, &[1.0; 4], &[SIMPLEX_STEP; 4], MAX_EVALUATIONS, 0.0);

    let tuning = start.scaled(&best.x);
    let design = tuning.design(spec)?;
    let metrics = evaluate(&design, &grid).ok();
    Ok(SynthesisResult {
        feasible: metrics.as_ref().is_some_and(|m| spec.is_met_by(m)),
        objective: metrics.as_ref().map_or(UNMEASURABLE, |m| spec.objective(m)),
        design,
        tuning,
        metrics,
        evaluations: best.evaluations,
    })
}

/// Plate thickness to resonance scaling: frequency goes as `1/thickness`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThicknessScaling {
    pub f_ref: f64,
    pub t_ref: f64,
}

pub fn thickness_scale(scaling: &ThicknessScaling, t_new: f64) -> Result<f64> {
    if !(scaling.f_ref > 0.0 && scaling.t_ref > 0.0) {
        return Err(domain("reference frequency and thickness must be positive"));
    }
    if !(t_new > 0.0 && t_new.is_finite()) {
        return Err(domain(format!("thickness {t_new} must be positive")));
    }
    Ok(scaling.f_ref * (scaling.t_ref / t_new))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> DesignSpec {
        DesignSpec {
            fc_target: 23.5e9,
            fbw_target: 0.16,
            z0: 50.0,
            oob_min_db: 12.0,
            k2: 0.46,
            q: 50.0,
            rs: 0.0,
            ls: 0.0,
            il_max_db: 1.6,
        }
    }

    #[test]
    fn thickness_scaling() {
        let s = ThicknessScaling {
            f_ref: 20e9,
            t_ref: 90e-9,
        };
        assert_eq!(thickness_scale(&s, 90e-9).unwrap(), 20e9);
        assert!((thickness_scale(&s, 75e-9).unwrap() / 20e9 - 1.2).abs() < 1e-15);
        let s = ThicknessScaling {
            f_ref: 7e9,
            t_ref: 100e-9,
        };
        assert_eq!(thickness_scale(&s, 50e-9).unwrap(), 14e9);
        assert!(thickness_scale(&s, 0.0).is_err());
        assert!(thickness_scale(&s, -1e-9).is_err());
    }

    #[test]
    fn initial_placement() {
        let s = spec();
        let t = LadderTuning::initial(&s);
        assert_eq!(t.fs_series, s.fc_target);
        let d = t.design(&s).unwrap();
        let shunt = &d.resonators()[1];
        let fp = crate::mbvd::antiresonance(shunt).unwrap();
        assert!((fp / s.fc_target - 1.0).abs() < 1e-12);
        assert!((2.0 * PI * s.fc_target * t.c0_shunt * s.z0 - 1.0).abs() < 1e-12);
        assert_eq!(t.c0_series, t.c0_shunt / 2.0);
    }

    #[test]
    fn invalid_specs_fail_before_search() {
        assert!(matches!(
            synthesize_ladder(&DesignSpec { k2: 0.0, ..spec() }),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            synthesize_ladder(&DesignSpec { q: 0.0, ..spec() }),
            Err(Error::Infeasible(_))
        ));
        assert!(synthesize_ladder(&DesignSpec {
            z0: -50.0,
            ..spec()
        })
        .is_err());
    }

    #[test]
    fn objective_is_zero_on_target() {
        let s = spec();
        let m = FilterMetrics {
            fc: s.fc_target,
            il_db: 1.0,
            bw3_hz: 0.16 * s.fc_target,
            fbw3: 0.16,
            f_lo3: 0.92 * s.fc_target,
            f_hi3: 1.08 * s.fc_target,
            bw20_hz: 0.3 * s.fc_target,
            shape_factor20: 1.875,
            oob_rejection_db: 15.0,
        };
        assert_eq!(s.objective(&m), 0.0);
        assert!(s.is_met_by(&m));
        let worse = FilterMetrics { il_db: 2.0, ..m };
        assert!(!s.is_met_by(&worse));
        assert!((s.objective(&worse) - 4.0).abs() < 1e-12);
    }
}
