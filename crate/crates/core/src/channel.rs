//! Path loss, Rayleigh fading and energy beamforming.
//!
//! With perfect channel knowledge the optimal energy beam for a single-antenna
//! receiver is the dominant eigenvector of the rank-one matrix `h h^H`, and the
//! received RF power is `lambda * p_t` with `lambda = ||h||^2`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Gamma, StandardNormal};

use crate::error::{Error, Result};

/// Complex baseband channel from each transmit antenna to one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector(Vec<Complex64>);

impl ChannelVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "channel vector needs at least one antenna".into(),
            ));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParameter("channel entries must be finite".into()));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn antennas(&self) -> usize {
        self.0.len()
    }

    /// Unit-norm beamforming weights `conj(h) / ||h||`, or `None` for a dead channel.
    pub fn beam_weights(&self) -> Option<Vec<Complex64>> {
        let norm = beamforming_gain(self).value().sqrt();
        (norm > 0.0).then(|| self.0.iter().map(|z| z.conj() / norm).collect())
    }
}

/// Effective power gain of a beamformed link.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BeamformingGain(f64);

impl BeamformingGain {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::domain("lambda", "finite and >= 0", lambda));
        }
        Ok(Self(lambda))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams {
    /// Loss at the reference distance.
    pub l0: f64,
    /// Reference distance, m.
    pub d0: f64,
    /// Path-loss exponent.
    pub alpha: f64,
}

impl Default for PathLossParams {
    fn default() -> Self {
        Self {
            l0: 1e-3,
            d0: 1.0,
            alpha: 3.0,
        }
    }
}

impl PathLossParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.l0.is_finite() && self.l0 > 0.0) {
            return Err(Error::domain("l0", "finite and > 0", self.l0));
        }
        if !(self.d0.is_finite() && self.d0 > 0.0) {
            return Err(Error::domain("d0", "finite and > 0", self.d0));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::domain("alpha", "finite and >= 0", self.alpha));
        }
        Ok(())
    }
}

/// `l0 * (d / d0)^(-alpha)`.
pub fn path_loss(d: f64, params: &PathLossParams) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain("d", "> 0", d));
    }
    Ok(params.l0 * (d / params.d0).powf(-params.alpha))
}

/// Draws an i.i.d. Rayleigh channel whose per-entry mean power equals `loss`.
pub fn sample_channel<R: Rng + ?Sized>(n_t: usize, loss: f64, rng: &mut R) -> Result<ChannelVector> {
    if n_t == 0 {
        return Err(Error::InvalidParameter("n_t must be >= 1".into()));
    }
    if !(loss.is_finite() && loss > 0.0) {
        return Err(Error::domain("loss", "finite and > 0", loss));
    }
    let sigma = (loss / 2.0).sqrt();
    let entries = (0..n_t)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(sigma * re, sigma * im)
        })
        .collect();
    ChannelVector::new(entries)
}

/// Mean beamforming gain over `draws` independent Rayleigh realizations.
///
/// `||h||^2` of one draw is Gamma(`n_t`, `loss`), so the mean of `draws` of
/// them is Gamma(`n_t * draws`, `loss / draws`) and is sampled directly.
/// A single draw goes through [`sample_channel`].
pub fn sample_mean_gain<R: Rng + ?Sized>(n_t: usize, loss: f64, draws: usize, rng: &mut R) -> Result<BeamformingGain> {
    if draws == 0 {
        return Err(Error::InvalidParameter("draws must be >= 1".into()));
    }
    if draws == 1 {
        return Ok(beamforming_gain(&sample_channel(n_t, loss, rng)?));
    }
    if n_t == 0 {
        return Err(Error::InvalidParameter("n_t must be >= 1".into()));
    }
    if !(loss.is_finite() && loss > 0.0) {
        return Err(Error::domain("loss", "finite and > 0", loss));
    }
    let gamma = Gamma::new((n_t * draws) as f64, loss / draws as f64)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    BeamformingGain::new(rng.sample(gamma))
}

/// The only nonzero eigenvalue of `h h^H`, i.e. `||h||^2`.
pub fn beamforming_gain(h: &ChannelVector) -> BeamformingGain {
    BeamformingGain(h.0.iter().map(|z| z.norm_sqr()).sum())
}

pub fn received_rf_power(gain: BeamformingGain, p_t: f64) -> Result<f64> {
    if !(p_t >= 0.0) {
        return Err(Error::domain("p_t", ">= 0", p_t));
    }
    Ok(gain.0 * p_t)
}
