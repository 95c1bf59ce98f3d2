//! Common received power maximization (max-min fairness).
//!
//! Each pass raises every active sensor to a common level `alpha`, found by
//! bisection on the budget it consumes. Sensors pushed past their cap are
//! pinned there, their excess goes back into the residual budget and they
//! leave the active set. Sensors already above the level receive nothing.

use crate::error::{Error, Result};

use super::{AllocationProblem, AllocationResult, AllocationStatus, SensorRecord};

#[derive(Debug, Clone, Copy)]
pub struct CrpmOptions {
    /// Outer pass limit. `None` uses the number of sensors.
    pub max_passes: Option<usize>,
    /// Bisection stops once the demanded power is within `eps` below the budget.
    pub eps: f64,
    pub max_bisection_steps: usize,
}

impl Default for CrpmOptions {
    fn default() -> Self {
        Self {
            max_passes: None,
            eps: 1e-9,
            max_bisection_steps: 200,
        }
    }
}

/// Diagnostics for one outer pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrpmPass {
    pub residual_budget: f64,
    pub bracket: (f64, f64),
    pub alpha: f64,
    pub active: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrpmReport {
    pub result: AllocationResult,
    pub passes: Vec<CrpmPass>,
}

/// Total transmit power needed to lift every record to `alpha`.
pub fn demand(records: &[SensorRecord], alpha: f64) -> f64 {
    records.iter().map(|s| s.power_for_level(alpha)).sum()
}

/// Search interval for the common level: the lowest and highest level reached
/// when `e_r` is split evenly across the records.
pub fn alpha_bracket(records: &[SensorRecord], e_r: f64) -> (f64, f64) {
    let share = e_r / records.len() as f64;
    records
        .iter()
        .map(|s| s.level(share))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Common level `alpha` at which `demand(records, alpha)` equals `e_r`.
pub fn bisect_alpha(records: &[SensorRecord], e_r: f64, eps: f64) -> Result<f64> {
    bisect_alpha_capped(records, e_r, eps, CrpmOptions::default().max_bisection_steps)
}

fn bisect_alpha_capped(records: &[SensorRecord], e_r: f64, eps: f64, max_steps: usize) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be > 0, got {eps}")));
    }
    if !(e_r > 0.0 && e_r.is_finite()) {
        return Err(Error::domain("e_r", "finite and > 0", e_r));
    }
    if records.is_empty() {
        return Err(Error::Empty("active set"));
    }
    if let Some(s) = records.iter().find(|s| !(s.lambda > 0.0)) {
        return Err(Error::domain("lambda", "> 0 in the active set", s.lambda));
    }

    let (mut lo, mut hi) = alpha_bracket(records, e_r);
    if lo == hi {
        return Ok(lo);
    }
    // Stop only on the feasible side so the allocation never overspends.
    let mut alpha = 0.5 * (lo + hi);
    for _ in 0..max_steps {
        let gap = demand(records, alpha) - e_r;
        if gap <= 0.0 && gap > -eps {
            break;
        }
        if gap > 0.0 {
            hi = alpha;
        } else {
            lo = alpha;
        }
        let next = 0.5 * (lo + hi);
        if next == alpha {
            break;
        }
        alpha = next;
    }
    if demand(records, alpha) > e_r {
        alpha = lo;
    }
    Ok(alpha)
}

/// Record whose origin is shifted to an existing allocation `p`, so that
/// further power `x` gives the same level as `p + x` on the original record.
fn shifted(s: &SensorRecord, p: f64) -> SensorRecord {
    let gain = s.b * s.lambda;
    SensorRecord {
        a: s.a,
        b: s.b / (1.0 + gain * p),
        lambda: s.lambda,
        u: s.level(p),
        cap: s.cap - p,
    }
}

pub fn crpm(problem: &AllocationProblem, opts: CrpmOptions) -> AllocationResult {
    crpm_detailed(problem, opts).result
}

pub fn crpm_detailed(problem: &AllocationProblem, opts: CrpmOptions) -> CrpmReport {
    let sensors = problem.sensors();
    let n = sensors.len();
    let max_passes = opts.max_passes.unwrap_or(n);
    let mut powers = vec![0.0; n];
    let mut active: Vec<usize> = (0..n).filter(|&k| sensors[k].is_live()).collect();
    let mut residual = problem.budget();
    let mut passes = Vec::new();

    if active.is_empty() {
        let status = if residual > 0.0 && !sensors.iter().any(|s| s.lambda > 0.0) {
            AllocationStatus::NoReceiver
        } else if residual > 0.0 {
            AllocationStatus::Saturated { leftover: residual }
        } else {
            AllocationStatus::Complete
        };
        return CrpmReport {
            result: AllocationResult::idle(n, status),
            passes,
        };
    }

    let mut level = None;
    while residual > 0.0 && passes.len() < max_passes && !active.is_empty() {
        let records: Vec<SensorRecord> = active.iter().map(|&k| shifted(&sensors[k], powers[k])).collect();
        let bracket = alpha_bracket(&records, residual);
        let alpha = bisect_alpha_capped(&records, residual, opts.eps, opts.max_bisection_steps)
            .expect("active records are validated and the residual budget is positive");
        passes.push(CrpmPass {
            residual_budget: residual,
            bracket,
            alpha,
            active: active.len(),
        });
        level = Some(alpha);

        residual = 0.0;
        active.retain(|&k| {
            let s = &sensors[k];
            let p = powers[k].max(s.power_for_level(alpha));
            if p > s.cap {
                residual += p - s.cap;
                powers[k] = s.cap;
                false
            } else {
                powers[k] = p;
                true
            }
        });
    }

    let status = if residual <= 0.0 {
        AllocationStatus::Complete
    } else if active.is_empty() {
        AllocationStatus::Saturated { leftover: residual }
    } else {
        AllocationStatus::IterationLimit { leftover: residual }
    };
    CrpmReport {
        result: AllocationResult {
            powers,
            level,
            iterations: passes.len(),
            status,
        },
        passes,
    }
}
