//! Brute-force reference solvers for certifying the allocators on small
//! instances. Slow by design; they share no code with the solvers.

use crate::allocation::AllocationProblem;
use crate::error::{Error, Result};

/// Uniform grid over `[0, min(cap_k, budget)]` in every dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { resolution: 200 }
    }
}

impl GridSpec {
    fn axis(&self, upper: f64) -> Vec<f64> {
        let steps = (self.resolution - 1) as f64;
        (0..self.resolution).map(|i| upper * i as f64 / steps).collect()
    }

    /// Largest grid spacing used for `problem`.
    pub fn cell_width(&self, problem: &AllocationProblem) -> f64 {
        problem
            .sensors()
            .iter()
            .map(|s| s.cap.min(problem.budget()))
            .fold(0.0, f64::max)
            / (self.resolution - 1) as f64
    }

    /// Bound on how far a grid optimum can fall short of the true optimum:
    /// the objective's Lipschitz constant times one cell per coordinate.
    pub fn lipschitz_tolerance(&self, problem: &AllocationProblem) -> f64 {
        let slope = problem
            .sensors()
            .iter()
            .map(|s| s.a * s.b * s.lambda)
            .fold(0.0, f64::max);
        problem.len() as f64 * slope * self.cell_width(problem)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    pub powers: Vec<f64>,
    pub objective: f64,
}

fn check_small(problem: &AllocationProblem, grid: &GridSpec) -> Result<()> {
    if problem.len() > 3 {
        return Err(Error::OracleRefused(format!(
            "grid search supports at most 3 sensors, got {}",
            problem.len()
        )));
    }
    if grid.resolution < 2 {
        return Err(Error::InvalidParameter("grid resolution must be >= 2".into()));
    }
    Ok(())
}

/// Visits every grid point of the first `dims` coordinates.
fn for_each_point(axes: &[Vec<f64>], mut visit: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; axes.len()];
    if axes.is_empty() {
        visit(&idx);
        return;
    }
    loop {
        visit(&idx);
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == axes.len() {
                return;
            }
        }
    }
}

/// Exhaustive maximizer of total harvested power over grid points with
/// `sum(p) <= budget`.
pub fn grid_max_total(problem: &AllocationProblem, grid: &GridSpec) -> Result<GridOptimum> {
    check_small(problem, grid)?;
    let sensors = problem.sensors();
    let budget = problem.budget();
    let axes: Vec<Vec<f64>> = sensors.iter().map(|s| grid.axis(s.cap.min(budget))).collect();
    let values: Vec<Vec<f64>> = sensors
        .iter()
        .zip(&axes)
        .map(|(s, axis)| axis.iter().map(|&p| s.a * (s.b * s.lambda * p).ln_1p()).collect())
        .collect();

    let mut best = GridOptimum {
        powers: vec![0.0; sensors.len()],
        objective: f64::NEG_INFINITY,
    };
    for_each_point(&axes, |idx| {
        let spent: f64 = idx.iter().enumerate().map(|(k, &i)| axes[k][i]).sum();
        if spent > budget * (1.0 + 1e-12) {
            return;
        }
        let obj: f64 = idx.iter().enumerate().map(|(k, &i)| values[k][i]).sum();
        if obj > best.objective {
            best.objective = obj;
            best.powers = idx.iter().enumerate().map(|(k, &i)| axes[k][i]).collect();
        }
    });
    Ok(best)
}

/// Exhaustive maximizer of `min_k (u_k + r_k(p_k))` spending the whole budget.
///
/// All but the last coordinate walk the grid; the last takes whatever budget
/// remains. When the caps cannot absorb the budget every cap is returned.
pub fn grid_max_min(problem: &AllocationProblem, grid: &GridSpec) -> Result<GridOptimum> {
    check_small(problem, grid)?;
    let sensors = problem.sensors();
    let budget = problem.budget();
    let level = |k: usize, p: f64| {
        let s = &sensors[k];
        s.u + s.a * (s.b * s.lambda * p).ln_1p()
    };

    let total_cap: f64 = sensors.iter().map(|s| s.cap).sum();
    if total_cap <= budget {
        let powers: Vec<f64> = sensors.iter().map(|s| s.cap).collect();
        let objective = (0..sensors.len()).map(|k| level(k, powers[k])).fold(f64::INFINITY, f64::min);
        return Ok(GridOptimum { powers, objective });
    }

    let n = sensors.len();
    let axes: Vec<Vec<f64>> = sensors[..n - 1].iter().map(|s| grid.axis(s.cap.min(budget))).collect();
    let last_cap = sensors[n - 1].cap;
    let mut best = GridOptimum {
        powers: vec![0.0; n],
        objective: f64::NEG_INFINITY,
    };
    for_each_point(&axes, |idx| {
        let spent: f64 = idx.iter().enumerate().map(|(k, &i)| axes[k][i]).sum();
        let last = budget - spent;
        if last < 0.0 || last > last_cap {
            return;
        }
        let mut obj = level(n - 1, last);
        for (k, &i) in idx.iter().enumerate() {
            obj = obj.min(level(k, axes[k][i]));
        }
        if obj > best.objective {
            best.objective = obj;
            best.powers = idx.iter().enumerate().map(|(k, &i)| axes[k][i]).chain([last]).collect();
        }
    });
    if best.objective == f64::NEG_INFINITY {
        return Err(Error::OracleRefused(
            "grid too coarse to place the budget exactly".into(),
        ));
    }
    Ok(best)
}

/// Euclidean projection onto `{0 <= p_k <= cap_k, sum p <= budget}`.
pub fn project_capped_simplex(x: &[f64], caps: &[f64], budget: f64) -> Vec<f64> {
    project_capped_simplex_weighted(x, caps, &vec![1.0; x.len()], budget)
}

/// Projection onto the same set in the metric `sum w_k (p_k - x_k)^2`, i.e.
/// `p_k = clamp(x_k - theta / w_k, 0, cap_k)` with the smallest feasible
/// `theta >= 0`, found by bisection.
pub fn project_capped_simplex_weighted(x: &[f64], caps: &[f64], weights: &[f64], budget: f64) -> Vec<f64> {
    let clamp = |theta: f64| -> Vec<f64> {
        x.iter()
            .zip(caps)
            .zip(weights)
            .map(|((&v, &c), &w)| (v - theta / w).clamp(0.0, c))
            .collect()
    };
    let direct = clamp(0.0);
    if direct.iter().sum::<f64>() <= budget {
        return direct;
    }
    let mut lo = 0.0;
    let mut hi = x.iter().zip(weights).map(|(&v, &w)| v * w).fold(0.0, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if clamp(mid).iter().sum::<f64>() > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    clamp(hi)
}

/// Projected gradient ascent on total harvested power.
///
/// The objective is separable, so each coordinate gets its own step
/// `lr / L_k` with `L_k = a_k (b_k lambda_k)^2` its largest curvature, and
/// the projection uses the matching metric. Any `lr` in `(0, 1]` guarantees
/// ascent; the method fails if the objective ever decreases, which means
/// `lr` is too large.
pub fn projected_gradient_total(problem: &AllocationProblem, steps: usize, lr: f64) -> Result<Vec<f64>> {
    if problem.len() > 16 {
        return Err(Error::OracleRefused(format!(
            "projected gradient oracle supports at most 16 sensors, got {}",
            problem.len()
        )));
    }
    if !(lr > 0.0) {
        return Err(Error::InvalidParameter(format!("lr must be > 0, got {lr}")));
    }
    let sensors = problem.sensors();
    let caps: Vec<f64> = sensors.iter().map(|s| s.cap).collect();
    let curvature: Vec<f64> = sensors
        .iter()
        .map(|s| s.a * (s.b * s.lambda).powi(2))
        .map(|c| if c > 0.0 { c } else { 1.0 })
        .collect();
    let objective = |p: &[f64]| -> f64 {
        sensors
            .iter()
            .zip(p)
            .map(|(s, &x)| s.a * (s.b * s.lambda * x).ln_1p())
            .sum()
    };

    let n = sensors.len() as f64;
    let budget = problem.budget();
    let mut p = project_capped_simplex_weighted(&vec![budget / n; sensors.len()], &caps, &curvature, budget);
    let mut value = objective(&p);
    for step in 0..steps {
        let moved: Vec<f64> = sensors
            .iter()
            .zip(&p)
            .zip(&curvature)
            .map(|((s, &x), &l)| {
                let g = s.b * s.lambda;
                x + lr / l * s.a * g / (1.0 + g * x)
            })
            .collect();
        let next = project_capped_simplex_weighted(&moved, &caps, &curvature, budget);
        let next_value = objective(&next);
        // Rounding in the projection can cost a few ulps; real divergence is far larger.
        if next_value < value - 1e-10 * value.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::OracleDiverged {
                step,
                before: value,
                after: next_value,
            });
        }
        let unchanged = next == p;
        p = next;
        value = next_value;
        if unchanged {
            break;
        }
    }
    Ok(p)
}
