//! Solvers for the linear rectifier model `h * lambda * p`.

use crate::error::{Error, Result};

use super::{AllocationResult, AllocationStatus};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSensorRecord {
    pub h: f64,
    pub lambda: f64,
    pub u: f64,
    pub cap: f64,
}

impl LinearSensorRecord {
    pub fn new(h: f64, lambda: f64, u: f64, cap: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::domain("h", "finite and > 0", h));
        }
        for (name, v) in [("lambda", lambda), ("u", u), ("cap", cap)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(name, "finite and >= 0", v));
            }
        }
        Ok(Self { h, lambda, u, cap })
    }

    #[inline]
    pub fn slope(&self) -> f64 {
        self.h * self.lambda
    }

    #[inline]
    pub fn level(&self, p: f64) -> f64 {
        self.u + self.slope() * p
    }

    fn is_live(&self) -> bool {
        self.lambda > 0.0 && self.cap > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProblem {
    sensors: Vec<LinearSensorRecord>,
    budget: f64,
}

impl LinearProblem {
    pub fn new(sensors: Vec<LinearSensorRecord>, budget: f64) -> Result<Self> {
        if sensors.is_empty() {
            return Err(Error::Empty("sensors"));
        }
        if !(budget.is_finite() && budget >= 0.0) {
            return Err(Error::domain("budget", "finite and >= 0", budget));
        }
        Ok(Self { sensors, budget })
    }

    pub fn sensors(&self) -> &[LinearSensorRecord] {
        &self.sensors
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn objective(&self, powers: &[f64]) -> f64 {
        self.sensors.iter().zip(powers).map(|(s, &p)| s.slope() * p).sum()
    }

    pub fn min_level(&self, powers: &[f64]) -> f64 {
        self.sensors
            .iter()
            .zip(powers)
            .map(|(s, &p)| s.level(p))
            .fold(f64::INFINITY, f64::min)
    }
}

fn finish(powers: Vec<f64>, level: Option<f64>, iterations: usize, leftover: f64, exhausted: bool) -> AllocationResult {
    let status = if leftover <= 0.0 {
        AllocationStatus::Complete
    } else if exhausted {
        AllocationStatus::Saturated { leftover }
    } else {
        AllocationStatus::IterationLimit { leftover }
    };
    AllocationResult {
        powers,
        level,
        iterations,
        status,
    }
}

/// Greedy fill in descending order of `h * lambda`; optimal for the linear program.
pub fn ltrpm(problem: &LinearProblem) -> AllocationResult {
    let sensors = &problem.sensors;
    let mut powers = vec![0.0; sensors.len()];
    if !sensors.iter().any(|s| s.lambda > 0.0) {
        let status = if problem.budget > 0.0 {
            AllocationStatus::NoReceiver
        } else {
            AllocationStatus::Complete
        };
        return AllocationResult {
            powers,
            level: None,
            iterations: 0,
            status,
        };
    }
    let mut order: Vec<usize> = (0..sensors.len()).filter(|&k| sensors[k].is_live()).collect();
    order.sort_by(|&i, &j| sensors[j].slope().total_cmp(&sensors[i].slope()));

    let mut remaining = problem.budget;
    for &k in &order {
        if remaining <= 0.0 {
            break;
        }
        let p = sensors[k].cap.min(remaining);
        powers[k] = p;
        remaining -= p;
    }
    finish(powers, None, 1, remaining, true)
}

/// How the linear max-min solver picks its per-pass level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LcrpmMode {
    /// Equalize `u + h lambda p` across the active set; sensors already
    /// above the level receive nothing.
    #[default]
    EqualizeLevels,
    /// Spread the residual so every active sensor gains the same increment
    /// `alpha = E_r / sum(1 / (h lambda))`, ignoring accumulated energy.
    EqualIncrement,
}

/// Level `alpha` such that `sum max(0, (alpha - level_k) / slope_k) = budget`.
fn linear_common_level(levels: &[(f64, f64)], budget: f64) -> f64 {
    let mut sorted = levels.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    // Running sums over the j lowest levels of w = 1/slope and w * level.
    let (mut sw, mut swl) = (0.0, 0.0);
    let mut alpha = sorted[0].0;
    for (j, &(level, slope)) in sorted.iter().enumerate() {
        let w = 1.0 / slope;
        sw += w;
        swl += w * level;
        alpha = (budget + swl) / sw;
        match sorted.get(j + 1) {
            Some(&(next, _)) if alpha > next => continue,
            _ => break,
        }
    }
    alpha
}

pub fn lcrpm(problem: &LinearProblem, mode: LcrpmMode) -> AllocationResult {
    let sensors = &problem.sensors;
    let n = sensors.len();
    let mut powers = vec![0.0; n];
    let mut active: Vec<usize> = (0..n).filter(|&k| sensors[k].is_live()).collect();
    if active.is_empty() {
        let status = if problem.budget > 0.0 && !sensors.iter().any(|s| s.lambda > 0.0) {
            AllocationStatus::NoReceiver
        } else if problem.budget > 0.0 {
            AllocationStatus::Saturated {
                leftover: problem.budget,
            }
        } else {
            AllocationStatus::Complete
        };
        return AllocationResult {
            powers,
            level: None,
            iterations: 0,
            status,
        };
    }

    let max_passes = n;
    let mut residual = problem.budget;
    let mut passes = 0;
    let mut level = None;
    while residual > 0.0 && passes < max_passes && !active.is_empty() {
        match mode {
            LcrpmMode::EqualizeLevels => {
                let levels: Vec<(f64, f64)> = active
                    .iter()
                    .map(|&k| (sensors[k].level(powers[k]), sensors[k].slope()))
                    .collect();
                let alpha = linear_common_level(&levels, residual);
                for (&k, &(l, slope)) in active.iter().zip(&levels) {
                    if alpha > l {
                        powers[k] += (alpha - l) / slope;
                    }
                }
                level = Some(alpha);
            }
            LcrpmMode::EqualIncrement => {
                let inv: f64 = active.iter().map(|&k| 1.0 / sensors[k].slope()).sum();
                let alpha = residual / inv;
                for &k in &active {
                    powers[k] += alpha / sensors[k].slope();
                }
                level = Some(alpha);
            }
        }
        passes += 1;

        residual = 0.0;
        active.retain(|&k| {
            let cap = sensors[k].cap;
            if powers[k] > cap {
                residual += powers[k] - cap;
                powers[k] = cap;
                false
            } else {
                true
            }
        });
    }
    let exhausted = active.is_empty();
    finish(powers, level, passes, residual, exhausted)
}
