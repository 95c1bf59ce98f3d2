//! Transmit-power allocation over the sensors served in one round.
//!
//! Every solver takes the selected sensors and the transmitter budget and
//! returns one transmit power per sensor with `0 <= p_k <= cap_k` and
//! `sum(p) <= budget`. Sensors with a zero beamforming gain receive nothing.

pub mod certificate;
mod crpm;
mod linear;
mod trpm;

pub use crpm::{alpha_bracket, bisect_alpha, crpm, crpm_detailed, demand, CrpmOptions, CrpmPass, CrpmReport};
pub use linear::{lcrpm, ltrpm, LcrpmMode, LinearProblem, LinearSensorRecord};
pub use trpm::{find_water_level, trpm};

use crate::error::{Error, Result};

/// One selected sensor as seen by the nonlinear solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorRecord {
    /// Rectifier scale.
    pub a: f64,
    /// Rectifier curvature.
    pub b: f64,
    /// Beamforming gain.
    pub lambda: f64,
    /// Energy harvested before this round.
    pub u: f64,
    /// Largest transmit power this sensor may receive, `min(c / lambda, P_c)`.
    pub cap: f64,
}

impl SensorRecord {
    pub fn new(a: f64, b: f64, lambda: f64, u: f64, cap: f64) -> Result<Self> {
        let record = Self { a, b, lambda, u, cap };
        record.validate()?;
        Ok(record)
    }

    fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::domain(name, "finite and > 0", v))
            }
        };
        let nonnegative = |name, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::domain(name, "finite and >= 0", v))
            }
        };
        positive("a", self.a)?;
        positive("b", self.b)?;
        nonnegative("lambda", self.lambda)?;
        nonnegative("u", self.u)?;
        nonnegative("cap", self.cap)
    }

    /// Harvested power for transmit power `p`.
    #[inline]
    pub fn harvested(&self, p: f64) -> f64 {
        self.a * (self.b * self.lambda * p).ln_1p()
    }

    /// Accumulated energy after receiving `p`.
    #[inline]
    pub fn level(&self, p: f64) -> f64 {
        self.u + self.harvested(p)
    }

    /// Transmit power that lifts this sensor to `alpha`, clamped at zero.
    #[inline]
    pub fn power_for_level(&self, alpha: f64) -> f64 {
        (((alpha - self.u) / self.a).exp_m1() / (self.b * self.lambda)).max(0.0)
    }

    pub(crate) fn is_live(&self) -> bool {
        self.lambda > 0.0 && self.cap > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationProblem {
    sensors: Vec<SensorRecord>,
    budget: f64,
}

impl AllocationProblem {
    pub fn new(sensors: Vec<SensorRecord>, budget: f64) -> Result<Self> {
        if sensors.is_empty() {
            return Err(Error::Empty("sensors"));
        }
        for s in &sensors {
            s.validate()?;
        }
        if !(budget.is_finite() && budget >= 0.0) {
            return Err(Error::domain("budget", "finite and >= 0", budget));
        }
        Ok(Self { sensors, budget })
    }

    pub fn sensors(&self) -> &[SensorRecord] {
        &self.sensors
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.sensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sensors.is_empty()
    }

    /// Sum of harvested power for an allocation.
    pub fn total_harvested(&self, powers: &[f64]) -> f64 {
        self.sensors.iter().zip(powers).map(|(s, &p)| s.harvested(p)).sum()
    }

    /// Lowest post-allocation accumulated energy.
    pub fn min_level(&self, powers: &[f64]) -> f64 {
        self.sensors
            .iter()
            .zip(powers)
            .map(|(s, &p)| s.level(p))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AllocationStatus {
    /// The whole budget was placed.
    Complete,
    /// Every live sensor sits at its cap; `leftover` of the budget is unused.
    Saturated { leftover: f64 },
    /// No selected sensor has a usable channel.
    NoReceiver,
    /// The outer iteration limit stopped the solver with budget left.
    IterationLimit { leftover: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub powers: Vec<f64>,
    /// Water level for TRPM, common level for the max-min solvers.
    pub level: Option<f64>,
    pub iterations: usize,
    pub status: AllocationStatus,
}

impl AllocationResult {
    pub fn allocated(&self) -> f64 {
        self.powers.iter().sum()
    }

    fn idle(n: usize, status: AllocationStatus) -> Self {
        Self {
            powers: vec![0.0; n],
            level: None,
            iterations: 0,
            status,
        }
    }
}

/// Equal split of the budget across the selected bands, clamped at each cap.
/// Clamped excess is not redistributed.
pub fn epd(problem: &AllocationProblem) -> AllocationResult {
    let share = problem.budget / problem.len() as f64;
    let powers: Vec<f64> = problem.sensors.iter().map(|s| share.min(s.cap)).collect();
    let leftover = problem.budget - powers.iter().sum::<f64>();
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

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(cap: f64) -> SensorRecord {
        SensorRecord::new(0.1, 1.0, 1.0, 0.0, cap).unwrap()
    }

    #[test]
    fn epd_examples() {
        let p = AllocationProblem::new(vec![rec(4.0); 8], 4.0).unwrap();
        assert!(epd(&p).powers.iter().all(|&x| x == 0.5));

        let mut sensors = vec![rec(4.0); 4];
        sensors[2] = rec(0.1);
        let r = epd(&AllocationProblem::new(sensors, 4.0).unwrap());
        assert_eq!(r.powers, vec![1.0, 1.0, 0.1, 1.0]);
        assert!(matches!(r.status, AllocationStatus::Saturated { .. }));

        let r = epd(&AllocationProblem::new(vec![rec(2.5)], 4.0).unwrap());
        assert_eq!(r.powers, vec![2.5]);
        let r = epd(&AllocationProblem::new(vec![rec(5.0)], 4.0).unwrap());
        assert_eq!(r.powers, vec![4.0]);
    }

    #[test]
    fn problem_validation() {
        assert!(AllocationProblem::new(vec![], 1.0).is_err());
        assert!(AllocationProblem::new(vec![rec(1.0)], -1.0).is_err());
        assert!(SensorRecord::new(0.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(SensorRecord::new(1.0, 1.0, -1.0, 0.0, 1.0).is_err());
        assert!(SensorRecord::new(1.0, 1.0, 1.0, -0.5, 1.0).is_err());
        assert!(SensorRecord::new(1.0, 1.0, 1.0, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn level_inverts_power_for_level() {
        let s = SensorRecord::new(0.0319, 3.6169, 2e-5, 0.013, 4.0).unwrap();
        let p = s.power_for_level(0.01300001);
        assert!((s.level(p) - 0.01300001).abs() < 1e-15);
        assert_eq!(s.power_for_level(0.0), 0.0);
    }
}
