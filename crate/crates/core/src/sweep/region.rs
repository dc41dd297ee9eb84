use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scenarios::{qfi_at, ScenarioSpec};

pub const PRESCAN_POINTS: usize = 101;
/// Bisection stops once the bracket around an endpoint is this narrow.
pub const DEFAULT_REGION_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

/// Interval where an objective reaches `threshold`.
///
/// When the objective exceeds the threshold on several disjoint pieces of
/// the bracket, `lower` and `upper` are the outermost crossings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionResult {
    pub lower: f64,
    pub upper: f64,
    pub threshold: f64,
    pub resolved: bool,
}

impl RegionResult {
    pub fn width(&self) -> f64 {
        if self.resolved {
            self.upper - self.lower
        } else {
            0.0
        }
    }
}

/// Locates `{x ∈ bracket : f(x) ≥ threshold}` with a 101-point pre-scan and
/// bisection on each crossing down to `tol`.
pub fn find_region<F>(f: F, threshold: f64, bracket: (f64, f64), tol: f64) -> Result<RegionResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let (a, b) = bracket;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument(format!("invalid bracket [{a}, {b}]")));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::InvalidArgument(format!("threshold {threshold} must be positive")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }

    let last = PRESCAN_POINTS - 1;
    let xs: Vec<f64> = (0..PRESCAN_POINTS)
        .map(|i| if i == last { b } else { a + (b - a) * i as f64 / last as f64 })
        .collect();
    let values = xs.par_iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let above = |v: f64| v >= threshold;

    let (Some(first), Some(final_)) =
        (values.iter().position(|&v| above(v)), values.iter().rposition(|&v| above(v)))
    else {
        let best = values
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .map(|(i, _)| xs[i])
            .unwrap_or(a);
        return Ok(RegionResult { lower: best, upper: best, threshold, resolved: false });
    };

    let crossing = |inside: f64, outside: f64| -> Result<f64> {
        let (mut inside, mut outside) = (inside, outside);
        for _ in 0..MAX_BISECTIONS {
            if (inside - outside).abs() <= tol {
                break;
            }
            let mid = 0.5 * (inside + outside);
            if above(f(mid)?) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(0.5 * (inside + outside))
    };

    let lower = if first == 0 { a } else { crossing(xs[first], xs[first - 1])? };
    let upper = if final_ == last { b } else { crossing(xs[final_], xs[final_ + 1])? };
    Ok(RegionResult { lower, upper, threshold, resolved: true })
}

/// [`find_region`] over `B_z` for the QFI of a scenario at time `t`.
pub fn find_scenario_region(
    spec: &ScenarioSpec,
    t: f64,
    threshold: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<RegionResult> {
    find_region(|b| Ok(qfi_at(&spec.with_b_z(b), t)?.value), threshold, bracket, tol)
}
