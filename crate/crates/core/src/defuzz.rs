//! Percentile defuzzification over the possibilistic area under the curve.
//!
//! `pi` is treated as linear between grid nodes, so its running integral is
//! piecewise quadratic. A cut point for fraction `p` is where that integral
//! reaches `p * auc`, solved exactly inside the cell that straddles it.

use serde::Serialize;

use crate::error::DefuzzError;
use crate::inference::PossibilityDistribution;

pub const DEFAULT_PERCENTILES: [f64; 3] = [0.1, 0.5, 0.9];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    pub p: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSet {
    pub percentiles: Vec<Scenario>,
    pub total_auc: f64,
}

fn cumulative(grid: &[f64], pi: &[f64]) -> Vec<f64> {
    let mut acc = Vec::with_capacity(grid.len());
    let mut total = 0.0;
    acc.push(0.0);
    for i in 1..grid.len() {
        total += 0.5 * (pi[i - 1] + pi[i]) * (grid[i] - grid[i - 1]);
        acc.push(total);
    }
    acc
}

fn values(dist: &PossibilityDistribution) -> Vec<f64> {
    dist.pi().iter().map(|p| p.value()).collect()
}

/// Composite trapezoidal integral of `pi` over the grid.
pub fn auc(dist: &PossibilityDistribution) -> f64 {
    let pi = values(dist);
    *cumulative(dist.grid(), &pi)
        .last()
        .expect("grid has at least two nodes")
}

/// Offset `s` in `[0, width]` at which the integral of a line running from
/// `a` to `b` across the cell reaches `mass`.
fn solve_in_cell(a: f64, b: f64, width: f64, mass: f64) -> f64 {
    let slope = (b - a) / width;
    let s = if slope.abs() <= f64::EPSILON * (a.abs() + b.abs()) {
        mass / a.max(f64::MIN_POSITIVE)
    } else {
        // a*s + slope*s^2/2 = mass, positive root in a cancellation-free form
        let disc = (a * a + 2.0 * slope * mass).max(0.0);
        2.0 * mass / (a + disc.sqrt())
    };
    s.clamp(0.0, width)
}

pub fn percentile_defuzz(
    dist: &PossibilityDistribution,
    ps: &[f64],
) -> Result<ScenarioSet, DefuzzError> {
    let grid = dist.grid();
    if grid.len() < 2 {
        return Err(DefuzzError::TooFewPoints);
    }
    if let Some(&bad) = ps.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(DefuzzError::InvalidPercentile(bad));
    }
    let pi = values(dist);
    let cum = cumulative(grid, &pi);
    let total = *cum.last().unwrap();
    if total.is_nan() || total <= 0.0 {
        return Err(DefuzzError::NoMass);
    }
    let percentiles = ps
        .iter()
        .map(|&p| {
            let target = p * total;
            // first node whose running mass reaches the target: leftmost tie-break
            let hi = cum
                .partition_point(|&c| c < target)
                .clamp(1, grid.len() - 1);
            let lo = hi - 1;
            let width = grid[hi] - grid[lo];
            let s = solve_in_cell(pi[lo], pi[hi], width, target - cum[lo]);
            Scenario {
                p,
                value: (grid[lo] + s).min(grid[hi]),
            }
        })
        .collect();
    Ok(ScenarioSet {
        percentiles,
        total_auc: total,
    })
}
