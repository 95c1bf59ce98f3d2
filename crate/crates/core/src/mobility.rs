//! One-dimensional random walk of sensor distances.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    /// Displacement per round, m.
    pub step: f64,
    /// Distances never drop below this, m.
    pub d_min: f64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self {
            step: 0.03,
            d_min: 1.0,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step >= 0.0) {
            return Err(Error::domain("step", "finite and >= 0", self.step));
        }
        if !(self.d_min.is_finite() && self.d_min > 0.0) {
            return Err(Error::domain("d_min", "finite and > 0", self.d_min));
        }
        Ok(())
    }
}

/// Distance from the transmitter, m.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SensorPosition {
    pub distance: f64,
}

/// Uniform draws in `[lo, hi]`.
pub fn init_positions<R: Rng + ?Sized>(m: usize, range: (f64, f64), rng: &mut R) -> Vec<SensorPosition> {
    let (lo, hi) = range;
    (0..m)
        .map(|_| SensorPosition {
            distance: rng.random_range(lo..=hi),
        })
        .collect()
}

/// Possible outcomes of one walk step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Stay,
    Closer,
    Farther,
}

impl Move {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        match rng.random_range(0..3u8) {
            0 => Move::Stay,
            1 => Move::Closer,
            _ => Move::Farther,
        }
    }
}

/// Moves every sensor independently: stay, step closer or step farther,
/// each with probability 1/3.
pub fn step<R: Rng + ?Sized>(positions: &mut [SensorPosition], cfg: &WalkConfig, rng: &mut R) {
    for pos in positions.iter_mut() {
        let next = match Move::draw(rng) {
            Move::Stay => pos.distance,
            Move::Closer => pos.distance - cfg.step,
            Move::Farther => pos.distance + cfg.step,
        };
        pos.distance = next.max(cfg.d_min);
    }
}
