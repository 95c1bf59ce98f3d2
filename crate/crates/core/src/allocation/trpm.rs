//! Total received power maximization.
//!
//! Maximizes `sum a_k ln(1 + b_k lambda_k p_k)` over the capped simplex. The
//! optimum is `p_k = clamp(h a_k - 1/(b_k lambda_k), 0, cap_k)` for a single
//! water level `h`. Each term is piecewise linear in `h` with breakpoints at
//! `1/(a_k b_k lambda_k)` and `(cap_k + 1/(b_k lambda_k)) / a_k`, so the level
//! is found exactly by sweeping the sorted breakpoints.

use super::{AllocationProblem, AllocationResult, AllocationStatus, SensorRecord};

/// Allocation for a given water level.
fn power_at(s: &SensorRecord, h: f64) -> f64 {
    let floor = 1.0 / (s.a * s.b * s.lambda);
    (s.a * (h - floor)).clamp(0.0, s.cap)
}

/// Water level `h` at which the clamped allocations spend exactly the budget.
///
/// Returns `None` when the live sensors' caps sum to no more than the budget,
/// in which case no interior level exists and every cap binds.
pub fn find_water_level(problem: &AllocationProblem) -> Option<f64> {
    let live: Vec<&SensorRecord> = problem.sensors().iter().filter(|s| s.is_live()).collect();
    let total_cap: f64 = live.iter().map(|s| s.cap).sum();
    if live.is_empty() || total_cap <= problem.budget() {
        return None;
    }

    // (position, change in slope)
    let mut events: Vec<(f64, f64)> = Vec::with_capacity(2 * live.len());
    for s in &live {
        let floor = 1.0 / (s.a * s.b * s.lambda);
        events.push((floor, s.a));
        events.push((floor + s.cap / s.a, -s.a));
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));

    let budget = problem.budget();
    let mut h = events[0].0;
    if budget == 0.0 {
        return Some(h);
    }
    let mut spent = 0.0;
    let mut slope = 0.0;
    for &(pos, delta) in &events {
        let reach = spent + slope * (pos - h);
        if slope > 0.0 && reach >= budget {
            h += (budget - spent) / slope;
            return Some(refine(&live, h, budget));
        }
        spent = reach;
        h = pos;
        slope += delta;
    }
    // Unreachable when total_cap > budget, barring rounding at the last breakpoint.
    Some(refine(&live, h, budget))
}

/// One Newton step on the interior set to absorb accumulated rounding.
fn refine(live: &[&SensorRecord], h: f64, budget: f64) -> f64 {
    let spent: f64 = live.iter().map(|s| power_at(s, h)).sum();
    let slope: f64 = live
        .iter()
        .filter(|s| {
            let p = power_at(s, h);
            p > 0.0 && p < s.cap
        })
        .map(|s| s.a)
        .sum();
    if slope > 0.0 {
        h + (budget - spent) / slope
    } else {
        h
    }
}

/// Powers at level `h`, with the remaining rounding residual spread over the
/// interior sensors in proportion to `a_k`. At realistic scales `h` is many
/// orders of magnitude above the powers, so correcting in power space keeps
/// digits that a further level update would lose.
fn settle(problem: &AllocationProblem, h: f64) -> Vec<f64> {
    let sensors = problem.sensors();
    let mut powers: Vec<f64> = sensors
        .iter()
        .map(|s| if s.is_live() { power_at(s, h) } else { 0.0 })
        .collect();
    let interior = |s: &SensorRecord, p: f64| p > 0.0 && p < s.cap;
    let weight: f64 = sensors
        .iter()
        .zip(&powers)
        .filter(|&(s, &p)| interior(s, p))
        .map(|(s, _)| s.a)
        .sum();
    let residual = problem.budget() - powers.iter().sum::<f64>();
    if weight > 0.0 {
        for (s, p) in sensors.iter().zip(powers.iter_mut()) {
            if interior(s, *p) {
                *p = (*p + residual * s.a / weight).clamp(0.0, s.cap);
            }
        }
    }
    powers
}

pub fn trpm(problem: &AllocationProblem) -> AllocationResult {
    let n = problem.len();
    let sensors = problem.sensors();
    if !sensors.iter().any(|s| s.lambda > 0.0) {
        let status = if problem.budget() > 0.0 {
            AllocationStatus::NoReceiver
        } else {
            AllocationStatus::Complete
        };
        return AllocationResult::idle(n, status);
    }

    match find_water_level(problem) {
        Some(h) => AllocationResult {
            powers: settle(problem, h),
            level: Some(h),
            iterations: 1,
            status: AllocationStatus::Complete,
        },
        None => {
            let powers: Vec<f64> = sensors
                .iter()
                .map(|s| if s.is_live() { s.cap } else { 0.0 })
                .collect();
            let leftover = problem.budget() - powers.iter().sum::<f64>();
            AllocationResult {
                powers,
                level: None,
                iterations: 1,
                status: if leftover > 0.0 {
                    AllocationStatus::Saturated { leftover }
                } else {
                    AllocationStatus::Complete
                },
            }
        }
    }
}
