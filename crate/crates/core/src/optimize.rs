//! Derivative-free minimization.

/// Outcome of [`nelder_mead`].
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Nelder-Mead simplex search with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
///
/// The start simplex is `x0` plus `x0 + step_i·e_i` for every coordinate.
/// Stops after `max_evals` objective calls or once the simplex values agree
/// to `f_tol`. Ties are broken by vertex index, so runs are reproducible.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    steps: &[f64],
    max_evals: usize,
    f_tol: f64,
) -> Minimum {
    let n = x0.len();
    assert_eq!(steps.len(), n, "one step per coordinate");
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };

    while evals < max_evals {
        // stable sort keeps the older vertex first on ties
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if (worst - best).abs() <= f_tol * (1.0 + best.abs()) {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }

        let reflected = lerp(&centroid, &simplex[n].0, -1.0);
        let fr = eval(&reflected, &mut evals);
        if fr < best {
            let expanded = lerp(&centroid, &simplex[n].0, -2.0);
            let fe = eval(&expanded, &mut evals);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst {
            let x = lerp(&centroid, &reflected, 0.5);
            let v = eval(&x, &mut evals);
            (x, v)
        } else {
            let x = lerp(&centroid, &simplex[n].0, 0.5);
            let v = eval(&x, &mut evals);
            (x, v)
        };
        if fc < worst.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = lerp(&anchor, &vertex.0, 0.5);
            let v = eval(&x, &mut evals);
            *vertex = (x, v);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        evaluations: evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_rosenbrock_minimum() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(rosen, &[-1.2, 1.0], &[0.1, 0.1], 5000, 1e-16);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4,
            "{m:?}"
        );
    }

    #[test]
    fn respects_evaluation_cap() {
        let mut calls = 0;
        let m = nelder_mead(
            |x| {
                calls += 1;
                x.iter().map(|v| v * v).sum()
            },
            &[3.0, -2.0, 1.0, 5.0],
            &[0.05; 4],
            50,
            0.0,
        );
        // one iteration may overrun the cap by at most a shrink (n evaluations)
        assert!(m.evaluations <= 50 + 4);
        assert_eq!(m.evaluations, calls);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| (x[0] - 0.3).abs() + (x[1] + 0.7).powi(2);
        let a = nelder_mead(f, &[1.0, 1.0], &[0.05, 0.05], 400, 0.0);
        let b = nelder_mead(f, &[1.0, 1.0], &[0.05, 0.05], 400, 0.0);
        assert_eq!(a, b);
    }

    #[test]
    fn nan_is_treated_as_worst() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 1.0).powi(2)
            }
        };
        let m = nelder_mead(f, &[0.1], &[0.05], 500, 0.0);
        assert!((m.x[0] - 1.0).abs() < 1e-5);
    }
}
