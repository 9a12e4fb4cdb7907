//! Extraction of modified-MBVD parameters from a one-port admittance curve.
//!
//! [`initial_guess`] reads the resonance, anti-resonance and EM
//! self-resonance off the `|Y|` trace; [`fit_mbvd`] then refines every free
//! parameter with damped Gauss-Newton (Levenberg-Marquardt) on the weighted
//! complex residual. The optimizer works on `ln(value)` so that no iterate
//! can leave the positive orthant.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::curve::ComplexCurve;
use crate::error::{domain, Error, Result};
use crate::mbvd::{summarize, MbvdParams, ResonatorSummary};

/// Ratio by which `|Y|` must fall (or rise) to confirm an extremum.
const EXTREMUM_RATIO: f64 = 1.5;
/// Seed for the routing resistance.
const RS_SEED: f64 = 0.5;
/// Stand-ins for zero-valued parameters, which have no logarithm.
const RESISTANCE_FLOOR: f64 = 1e-6;
const INDUCTANCE_FLOOR: f64 = 1e-16;
/// Relative step of the central-difference Jacobian.
const JACOBIAN_STEP: f64 = 1e-6;
const MAX_DAMPING: f64 = 1e16;
/// Residual at this fraction of the weighted data norm is rounding noise.
const NOISE_FLOOR: f64 = 1e-13;
/// Smallest log-space step still considered progress.
const MIN_STEP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Each sample is scaled by `1/|Y|`.
    InverseMagnitude,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub relative_tolerance: f64,
    pub initial_damping: f64,
    pub weight_mode: WeightMode,
    /// Fit `r0` as a seventh parameter instead of holding it at its initial value.
    pub fit_r0: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            relative_tolerance: 1e-10,
            initial_damping: 1e-3,
            weight_mode: WeightMode::InverseMagnitude,
            fit_r0: false,
        }
    }
}

impl FitOptions {
    fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(domain("max_iterations must be at least 1"));
        }
        if !(self.relative_tolerance > 0.0) || !(self.initial_damping > 0.0) {
            return Err(domain("tolerance and damping must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: MbvdParams,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    /// Derived resonator figures, recomputed from the fitted parameters.
    pub fn summary(&self) -> Result<ResonatorSummary> {
        summarize(&self.params)
    }
}

#[derive(Debug, Clone, Copy)]
struct Extrema {
    resonance: usize,
    antiresonance: usize,
    em: Option<usize>,
}

/// First confirmed maximum of `mags`, the minimum after it, and the largest
/// interior sample after that minimum.
fn find_extrema(mags: &[f64]) -> Option<Extrema> {
    let mut best = 0;
    let mut resonance = None;
    for i in 1..mags.len() {
        if mags[i] > mags[best] {
            best = i;
        } else if mags[i] < mags[best] / EXTREMUM_RATIO {
            resonance = Some(best);
            break;
        }
    }
    let resonance = resonance.filter(|&i| i > 0)?;

    let mut low = resonance;
    let mut antiresonance = None;
    for i in resonance + 1..mags.len() {
        if mags[i] < mags[low] {
            low = i;
        } else if mags[i] > mags[low] * EXTREMUM_RATIO {
            antiresonance = Some(low);
            break;
        }
    }
    let antiresonance = antiresonance?;

    let em = (antiresonance + 1..mags.len())
        .max_by(|&a, &b| mags[a].total_cmp(&mags[b]))
        .filter(|&i| i + 1 < mags.len() && mags[i] > mags[antiresonance] * EXTREMUM_RATIO);
    Some(Extrema {
        resonance,
        antiresonance,
        em,
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Low-frequency capacitance: median of `Im(Y)/ω` over the lowest 10% of the grid.
fn low_frequency_capacitance(freqs: &[f64], ys: &[Complex64]) -> f64 {
    let n = (freqs.len() / 10).max(1);
    median(
        freqs[..n]
            .iter()
            .zip(&ys[..n])
            .map(|(&f, y)| y.im / (2.0 * PI * f))
            .collect(),
    )
}

/// Heuristic starting point for [`fit_mbvd`].
pub fn initial_guess(curve: &ComplexCurve) -> Result<MbvdParams> {
    let freqs = curve.freqs();
    let ys = curve.values();
    let mags: Vec<f64> = ys.iter().map(|y| y.norm()).collect();
    let raw = find_extrema(&mags).ok_or_else(|| {
        Error::Structure("no |Y| maximum followed by a minimum in the curve".into())
    })?;

    let c_low = low_frequency_capacitance(freqs, ys);
    let ratio = |fs: f64, fp: f64| (fp / fs).powi(2);
    let c0_raw = c_low / ratio(freqs[raw.resonance], freqs[raw.antiresonance]);

    // strip the routing inductance before reading the acoustic resonances
    let (ls, freqs_acoustic, ys_acoustic) = match raw.em {
        Some(i) if c0_raw > 0.0 => {
            let w_em = 2.0 * PI * freqs[i];
            let ls = 1.0 / (w_em * w_em * c0_raw);
            let cut = freqs
                .iter()
                .position(|&f| f > 0.5 * (freqs[raw.antiresonance] + freqs[i]))
                .unwrap_or(freqs.len());
            let stripped: Vec<Complex64> = freqs[..cut]
                .iter()
                .zip(ys)
                .map(|(&f, y)| (y.inv() - Complex64::new(0.0, 2.0 * PI * f * ls)).inv())
                .collect();
            (ls, &freqs[..cut], stripped)
        }
        _ => (0.0, freqs, ys.to_vec()),
    };
    let mags: Vec<f64> = ys_acoustic.iter().map(|y| y.norm()).collect();
    let ex = find_extrema(&mags).unwrap_or(raw);
    let fs = freqs_acoustic[ex.resonance];
    let fp = freqs_acoustic[ex.antiresonance];
    let c0 = low_frequency_capacitance(freqs_acoustic, &ys_acoustic) / ratio(fs, fp);
    if !(c0 > 0.0 && fp > fs) {
        return Err(Error::Structure(format!(
            "inconsistent resonance pair (fs {fs} Hz, fp {fp} Hz, c0 {c0} F)"
        )));
    }
    let cm = c0 * (ratio(fs, fp) - 1.0);
    let w = 2.0 * PI * fs;
    let params = MbvdParams {
        rm: 1.0 / mags[ex.resonance],
        lm: 1.0 / (w * w * cm),
        cm,
        c0,
        rs: RS_SEED,
        ls,
        r0: 0.0,
    };
    params.validate()?;
    Ok(params)
}

/// Free-parameter bookkeeping between `MbvdParams` and log space.
#[derive(Debug, Clone, Copy)]
struct Packing {
    fit_r0: bool,
    fixed: MbvdParams,
}

impl Packing {
    fn len(&self) -> usize {
        if self.fit_r0 {
            7
        } else {
            6
        }
    }

    fn pack(&self, p: &MbvdParams) -> DVector<f64> {
        let mut v = vec![
            p.rm.max(RESISTANCE_FLOOR),
            p.lm,
            p.cm,
            p.c0,
            p.rs.max(RESISTANCE_FLOOR),
            p.ls.max(INDUCTANCE_FLOOR),
        ];
        if self.fit_r0 {
            v.push(p.r0.max(RESISTANCE_FLOOR));
        }
        DVector::from_iterator(v.len(), v.into_iter().map(f64::ln))
    }

    fn unpack(&self, theta: &DVector<f64>) -> MbvdParams {
        let e = |i: usize| theta[i].exp();
        MbvdParams {
            rm: e(0),
            lm: e(1),
            cm: e(2),
            c0: e(3),
            rs: e(4),
            ls: e(5),
            r0: if self.fit_r0 { e(6) } else { self.fixed.r0 },
        }
    }
}

struct Problem<'a> {
    freqs: &'a [f64],
    data: &'a [Complex64],
    weights: Vec<f64>,
    packing: Packing,
}

impl Problem<'_> {
    fn residuals(&self, theta: &DVector<f64>) -> DVector<f64> {
        let p = self.packing.unpack(theta);
        let n = self.freqs.len();
        let mut r = DVector::zeros(2 * n);
        for (i, (&f, y)) in self.freqs.iter().zip(self.data).enumerate() {
            let e = (p.admittance(f) - y) * self.weights[i];
            r[i] = e.re;
            r[n + i] = e.im;
        }
        r
    }

    fn jacobian(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let m = 2 * self.freqs.len();
        let mut j = DMatrix::zeros(m, theta.len());
        for k in 0..theta.len() {
            let mut hi = theta.clone();
            let mut lo = theta.clone();
            hi[k] += JACOBIAN_STEP;
            lo[k] -= JACOBIAN_STEP;
            let col = (self.residuals(&hi) - self.residuals(&lo)) / (2.0 * JACOBIAN_STEP);
            j.set_column(k, &col);
        }
        j
    }
}

fn all_finite(v: &DVector<f64>) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Refines `init` against `curve` by Levenberg-Marquardt.
pub fn fit_mbvd(curve: &ComplexCurve, init: &MbvdParams, opts: &FitOptions) -> Result<FitResult> {
    opts.validate()?;
    init.validate()?;
    let packing = Packing {
        fit_r0: opts.fit_r0,
        fixed: *init,
    };
    let n_free = packing.len();
    if curve.len() < n_free + 1 {
        return Err(domain(format!(
            "{} samples cannot determine {n_free} parameters",
            curve.len()
        )));
    }
    let weights: Vec<f64> = match opts.weight_mode {
        WeightMode::InverseMagnitude => curve.values().iter().map(|y| 1.0 / y.norm()).collect(),
        WeightMode::Uniform => vec![1.0; curve.len()],
    };
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(domain(
            "zero admittance sample cannot be inverse-magnitude weighted",
        ));
    }
    let data_norm = curve
        .values()
        .iter()
        .zip(&weights)
        .map(|(y, w)| (y * w).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let problem = Problem {
        freqs: curve.freqs(),
        data: curve.values(),
        weights,
        packing,
    };

    let mut theta = packing.pack(init);
    let mut r = problem.residuals(&theta);
    if !all_finite(&r) {
        return Err(domain("initial parameters give a non-finite residual"));
    }
    let mut norm = r.norm();
    let mut damping = opts.initial_damping;
    let mut converged = norm <= NOISE_FLOOR * data_norm;
    let mut iterations = 0;

    'outer: while !converged && iterations < opts.max_iterations {
        iterations += 1;
        let j = problem.jacobian(&theta);
        let jtj = j.transpose() * &j;
        let grad = j.transpose() * &r;
        let diag_floor = jtj.diagonal().max() * 1e-15;
        loop {
            let mut lhs = jtj.clone();
            for k in 0..n_free {
                lhs[(k, k)] += damping * jtj[(k, k)].max(diag_floor);
            }
            let step = lhs.cholesky().map(|c| -c.solve(&grad));
            let accepted = match step {
                Some(step) if all_finite(&step) => {
                    let trial = &theta + &step;
                    let r_trial = problem.residuals(&trial);
                    let norm_trial = r_trial.norm();
                    if norm_trial.is_finite() && norm_trial <= norm {
                        let change = (norm - norm_trial) / norm.max(f64::MIN_POSITIVE);
                        theta = trial;
                        r = r_trial;
                        norm = norm_trial;
                        converged =
                            change < opts.relative_tolerance || norm <= NOISE_FLOOR * data_norm;
                        true
                    } else if step.amax() < MIN_STEP {
                        // no representable progress left
                        converged = true;
                        break 'outer;
                    } else {
                        false
                    }
                }
                _ => false,
            };
            if accepted {
                damping = (damping / 10.0).max(1e-15);
                break;
            }
            damping *= 10.0;
            if damping > MAX_DAMPING {
                break 'outer;
            }
        }
    }

    let params = packing.unpack(&theta);
    Ok(FitResult {
        params,
        residual_norm: norm,
        iterations,
        converged,
    })
}
