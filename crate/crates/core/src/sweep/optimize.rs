//! Coarse grid scan followed by golden-section (1D) or Nelder–Mead (2D)
//! refinement. Objectives are treated as black boxes since every QFI value
//! already embeds a finite-difference derivative.

use rayon::prelude::*;

use super::{apply_axis, SweepAxis};
use crate::error::{Error, Result};
use crate::scenarios::{qfi_at, ScenarioSpec};

/// Grid points per free axis in the coarse scan.
pub const COARSE_POINTS: usize = 33;
/// Parameter tolerance of the refinement stage.
const PARAM_TOL: f64 = 1e-6;
const MAX_NM_ITERATIONS: usize = 2000;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq)]
pub struct Maximum {
    pub argmax: Vec<f64>,
    pub value: f64,
    /// Best value seen in the coarse scan.
    pub coarse_value: f64,
}

/// Maximizes `f` over `[lo, hi]` by golden-section search down to `tol`.
/// Returns `(x, f(x))`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    // compare the interior probes with the end points so boundary maxima are kept
    [(a, f(a)), (b, f(b)), (c, fc), (d, fd)]
        .into_iter()
        .fold((a, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best })
}

/// Nelder–Mead maximization inside a box; trial points are clamped to the
/// bounds. Stops when the simplex diameter falls below `tol`.
pub fn nelder_mead_max(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    steps: &[f64],
    bounds: &[(f64, f64)],
    tol: f64,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let clamp = |x: Vec<f64>| -> Vec<f64> {
        x.iter().zip(bounds).map(|(v, (lo, hi))| v.clamp(*lo, *hi)).collect()
    };
    // minimize −f
    let g = |x: &[f64]| -f(x);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), g(start)));
    for k in 0..n {
        let mut x = start.to_vec();
        let (lo, hi) = bounds[k];
        x[k] = if x[k] + steps[k] <= hi { x[k] + steps[k] } else { (x[k] - steps[k]).max(lo) };
        let v = g(&x);
        simplex.push((x, v));
    }

    for _ in 0..MAX_NM_ITERATIONS {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < tol {
            break;
        }

        let worst = simplex[n].clone();
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |coef: f64| -> Vec<f64> {
            clamp(centroid.iter().zip(&worst.0).map(|(c, w)| c + coef * (c - w)).collect())
        };

        let reflected = along(1.0);
        let fr = g(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(2.0);
            let fe = g(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst.1 {
            let x = along(0.5);
            let v = g(&x);
            (x, v)
        } else {
            let x = along(-0.5);
            let v = g(&x);
            (x, v)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = vertex.0.iter().zip(&best).map(|(v, b)| b + 0.5 * (v - b)).collect();
            let v = g(&x);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (x, -v)
}

/// Maximizes `f` over a box of one or two dimensions: a coarse scan with
/// [`COARSE_POINTS`] points per axis, then local refinement from the best
/// grid point. Points where `f` fails are skipped.
pub fn maximize<F>(f: F, bounds: &[(f64, f64)]) -> Result<Maximum>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if bounds.is_empty() || bounds.len() > 2 {
        return Err(Error::InvalidArgument(format!(
            "maximization needs 1 or 2 free parameters, got {}",
            bounds.len()
        )));
    }
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!("invalid bounds [{lo}, {hi}]")));
        }
    }
    let axis_value = |k: usize, i: usize| {
        let (lo, hi) = bounds[k];
        if i + 1 == COARSE_POINTS {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (COARSE_POINTS - 1) as f64
        }
    };
    let grid: Vec<Vec<usize>> = if bounds.len() == 1 {
        (0..COARSE_POINTS).map(|i| vec![i]).collect()
    } else {
        (0..COARSE_POINTS)
            .flat_map(|i| (0..COARSE_POINTS).map(move |j| vec![i, j]))
            .collect()
    };
    let scanned: Vec<(Vec<usize>, Result<f64>)> = grid
        .into_par_iter()
        .map(|idx| {
            let x: Vec<f64> = idx.iter().enumerate().map(|(k, &i)| axis_value(k, i)).collect();
            let v = f(&x);
            (idx, v)
        })
        .collect();

    let mut first_err = None;
    let mut best: Option<(Vec<usize>, f64)> = None;
    for (idx, v) in scanned {
        match v {
            Ok(v) if v.is_finite() => {
                if best.as_ref().is_none_or(|(_, b)| v > *b) {
                    best = Some((idx, v));
                }
            }
            Ok(v) => {
                first_err.get_or_insert(Error::NumericalFailure(format!("objective returned {v}")));
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let Some((best_idx, coarse_value)) = best else {
        return Err(first_err.unwrap_or_else(|| Error::NumericalFailure("empty scan".into())));
    };

    let safe = |x: &[f64]| f(x).ok().filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY);
    let coarse_x: Vec<f64> = best_idx.iter().enumerate().map(|(k, &i)| axis_value(k, i)).collect();

    let (x, value) = if bounds.len() == 1 {
        let i = best_idx[0];
        let lo = axis_value(0, i.saturating_sub(1));
        let hi = axis_value(0, (i + 1).min(COARSE_POINTS - 1));
        let (x, v) = golden_section_max(|x| safe(&[x]), lo, hi, PARAM_TOL);
        (vec![x], v)
    } else {
        let steps: Vec<f64> =
            bounds.iter().map(|(lo, hi)| (hi - lo) / (COARSE_POINTS - 1) as f64).collect();
        nelder_mead_max(safe, &coarse_x, &steps, bounds, PARAM_TOL)
    };

    if value >= coarse_value {
        Ok(Maximum { argmax: x, value, coarse_value })
    } else {
        Ok(Maximum { argmax: coarse_x, value: coarse_value, coarse_value })
    }
}

/// Maximizes the scenario QFI over the given free axes, each with its
/// bounds. `t` is the evolution time unless time itself is free.
pub fn maximize_qfi(spec: &ScenarioSpec, t: f64, free: &[(SweepAxis, f64, f64)]) -> Result<Maximum> {
    for (i, (a, _, _)) in free.iter().enumerate() {
        if free[..i].iter().any(|(b, _, _)| b == a) {
            return Err(Error::InvalidArgument(format!("axis {a} listed twice")));
        }
    }
    let bounds: Vec<(f64, f64)> = free.iter().map(|&(_, lo, hi)| (lo, hi)).collect();
    maximize(
        |x| {
            let (mut s, mut time) = (*spec, t);
            for (&(axis, _, _), &v) in free.iter().zip(x) {
                (s, time) = apply_axis(&s, time, axis, v);
            }
            Ok(qfi_at(&s, time)?.value)
        },
        &bounds,
    )
}
