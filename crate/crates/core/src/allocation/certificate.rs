//! Optimality certificates that can be checked against any allocation
//! without re-running a solver.

use crate::error::{Error, Result};

use super::{AllocationProblem, AllocationResult, CrpmReport};

fn fail<T>(msg: String) -> Result<T> {
    Err(Error::Certificate(msg))
}

fn check_box(problem: &AllocationProblem, powers: &[f64]) -> Result<()> {
    if powers.len() != problem.len() {
        return fail(format!("{} powers for {} sensors", powers.len(), problem.len()));
    }
    for (k, (s, &p)) in problem.sensors().iter().zip(powers).enumerate() {
        if !(p >= 0.0 && p <= s.cap) {
            return fail(format!("sensor {k}: power {p} outside [0, {}]", s.cap));
        }
        if !s.is_live() && p != 0.0 {
            return fail(format!("sensor {k} has no usable channel but receives {p}"));
        }
    }
    Ok(())
}

/// KKT conditions for the total-power problem.
///
/// With price `mu = 1 / level`, every live sensor must fall in exactly one
/// case: `p = 0` with marginal gain at zero `<= mu`, `0 < p < cap` with
/// marginal gain `= mu`, or `p = cap` with marginal gain at the cap `>= mu`.
/// Gains are compared relative to `mu` with tolerance `tol`. The total must
/// equal `min(budget, sum of live caps)` within `budget_tol * budget`.
pub fn check_trpm_kkt(problem: &AllocationProblem, result: &AllocationResult, tol: f64, budget_tol: f64) -> Result<()> {
    check_box(problem, &result.powers)?;
    let sensors = problem.sensors();
    let live_cap: f64 = sensors.iter().filter(|s| s.is_live()).map(|s| s.cap).sum();
    let target = problem.budget().min(live_cap);
    let spent = result.allocated();
    if (spent - target).abs() > budget_tol * problem.budget() {
        return fail(format!("spent {spent}, expected {target}"));
    }

    let Some(level) = result.level else {
        for (k, (s, &p)) in sensors.iter().zip(&result.powers).enumerate() {
            if s.is_live() && p != s.cap {
                return fail(format!("no water level but sensor {k} is below its cap"));
            }
        }
        return Ok(());
    };
    if !(level > 0.0 && level.is_finite()) {
        return fail(format!("water level {level} is not positive"));
    }
    let mu = 1.0 / level;
    for (k, (s, &p)) in sensors.iter().zip(&result.powers).enumerate() {
        if !s.is_live() {
            continue;
        }
        let g = s.b * s.lambda;
        let marginal = s.a * g / (1.0 + g * p);
        let rel = marginal / mu - 1.0;
        let ok = if p == 0.0 {
            rel <= tol
        } else if p == s.cap {
            rel >= -tol
        } else {
            rel.abs() <= tol
        };
        if !ok {
            return fail(format!(
                "sensor {k}: p = {p}, cap = {}, marginal {marginal} vs price {mu}",
                s.cap
            ));
        }
    }
    Ok(())
}

/// Equal-level conditions for the max-min problem.
///
/// Against the reported common level `alpha`: sensors strictly between zero
/// and their cap end within `tol` of `alpha`, sensors at their cap end at or
/// below it, and sensors that receive nothing already sit at or above it.
/// Every outer pass must also have bracketed its level, and the total may
/// exceed the budget by at most `budget_tol * budget`.
pub fn check_crpm_levels(problem: &AllocationProblem, report: &CrpmReport, tol: f64, budget_tol: f64) -> Result<()> {
    let result = &report.result;
    check_box(problem, &result.powers)?;
    if result.allocated() > problem.budget() * (1.0 + budget_tol) {
        return fail(format!("spent {} of {}", result.allocated(), problem.budget()));
    }
    for (i, pass) in report.passes.iter().enumerate() {
        let (lo, hi) = pass.bracket;
        if !(lo <= pass.alpha && pass.alpha <= hi) {
            return fail(format!("pass {i}: level {} outside bracket [{lo}, {hi}]", pass.alpha));
        }
    }
    let Some(alpha) = result.level else {
        return Ok(());
    };
    for (k, (s, &p)) in problem.sensors().iter().zip(&result.powers).enumerate() {
        if !s.is_live() {
            continue;
        }
        let level = s.level(p);
        let ok = if p == s.cap {
            level <= alpha + tol
        } else if p > 0.0 {
            (level - alpha).abs() <= tol
        } else {
            level >= alpha - tol
        };
        if !ok {
            return fail(format!("sensor {k}: p = {p}, level {level} vs common level {alpha}"));
        }
    }
    Ok(())
}
