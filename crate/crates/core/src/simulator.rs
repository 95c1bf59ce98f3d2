//! Monte-Carlo engine for mobile sensors charged by one multi-antenna transmitter.
//!
//! Every round: walk the sensors, redraw each channel, pick the served set,
//! allocate transmit power over it and credit each served sensor with the
//! energy its rectifier actually harvests.

use std::fmt;
use std::str::FromStr;

use crate::allocation::{
    crpm, epd, lcrpm, ltrpm, trpm, AllocationProblem, AllocationResult, CrpmOptions, LcrpmMode,
    LinearProblem, LinearSensorRecord, SensorRecord,
};
use crate::channel::{path_loss, sample_mean_gain, PathLossParams};
use crate::ehmodel::{fit_linear, LinearEhParams, LogEhParams, RectifierSample};
use crate::error::{Error, Result};
use crate::mobility::{self, SensorPosition, WalkConfig};
use crate::rng::{stream, SimRng, Stream};
use crate::selection::{round_robin, ssep, SelectionState};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Selector {
    Ssep,
    RoundRobin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Allocator {
    Crpm,
    Trpm,
    Epd,
}

/// Rectifier model the allocator plans with. Harvested energy is always
/// credited with the logarithmic curve of the sensor's rectifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EhModel {
    Log,
    Linear,
}

impl Selector {
    pub fn name(self) -> &'static str {
        match self {
            Selector::Ssep => "ssep",
            Selector::RoundRobin => "round_robin",
        }
    }
}

impl Allocator {
    pub fn name(self) -> &'static str {
        match self {
            Allocator::Crpm => "crpm",
            Allocator::Trpm => "trpm",
            Allocator::Epd => "epd",
        }
    }
}

impl EhModel {
    pub fn name(self) -> &'static str {
        match self {
            EhModel::Log => "log",
            EhModel::Linear => "linear",
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Allocator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for EhModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Selector {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ssep" => Ok(Selector::Ssep),
            "round_robin" | "round-robin" | "rr" => Ok(Selector::RoundRobin),
            other => Err(format!("unknown selector `{other}` (expected ssep | round_robin)")),
        }
    }
}

impl FromStr for EhModel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "log" | "nonlinear" => Ok(EhModel::Log),
            "linear" => Ok(EhModel::Linear),
            other => Err(format!("unknown eh_model `{other}` (expected log | linear)")),
        }
    }
}

/// Parses an allocator name. `lcrpm` and `ltrpm` also imply the linear model.
pub fn parse_allocator(s: &str) -> std::result::Result<(Allocator, Option<EhModel>), String> {
    match s.to_ascii_lowercase().as_str() {
        "crpm" => Ok((Allocator::Crpm, None)),
        "trpm" => Ok((Allocator::Trpm, None)),
        "epd" => Ok((Allocator::Epd, None)),
        "lcrpm" => Ok((Allocator::Crpm, Some(EhModel::Linear))),
        "ltrpm" => Ok((Allocator::Trpm, Some(EhModel::Linear))),
        other => Err(format!(
            "unknown allocator `{other}` (expected crpm | trpm | epd | lcrpm | ltrpm)"
        )),
    }
}

/// A (selector, allocator, model) triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scheme {
    pub selector: Selector,
    pub allocator: Allocator,
    pub eh_model: EhModel,
}

impl Scheme {
    pub const fn new(selector: Selector, allocator: Allocator, eh_model: EhModel) -> Self {
        Self {
            selector,
            allocator,
            eh_model,
        }
    }

    /// Solver name including the linear prefix, e.g. `lcrpm`.
    pub fn solver_name(&self) -> &'static str {
        match (self.allocator, self.eh_model) {
            (Allocator::Crpm, EhModel::Linear) => "lcrpm",
            (Allocator::Trpm, EhModel::Linear) => "ltrpm",
            (a, _) => a.name(),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}", self.selector, self.eh_model, self.allocator)
    }
}

/// Watts per unit of the catalogue fits: both were made on milliwatt data.
pub const RECTIFIER_FIT_UNIT: f64 = 1e-3;

/// Fitted `(a, b)` of the two catalogue rectifiers, in milliwatt units.
pub const RECTIFIER_FITS: [(f64, f64); 2] = [(0.0319, 3.6169), (0.2411, 0.4566)];

/// Two-point rectifier catalogue in SI units with a 3 mW operating limit.
pub fn default_rectifier_options() -> Vec<LogEhParams> {
    RECTIFIER_FITS
        .iter()
        .map(|&(a, b)| LogEhParams::from_scaled_fit(a, b, 3e-3, RECTIFIER_FIT_UNIT).expect("catalogue constants are positive"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Number of sensors.
    pub m: usize,
    /// Transmit antennas.
    pub n_t: usize,
    /// Orthogonal bands, i.e. sensors served per round.
    pub n_c: usize,
    /// Transmitter budget per round, W.
    pub e_c: f64,
    /// Per-band transmit limit, W.
    pub p_c: f64,
    pub iterations: usize,
    pub batch_size: usize,
    pub walk_step: f64,
    /// Lower distance clamp for the walk, m.
    pub d_min: f64,
    /// Initial placement interval, m.
    pub placement: (f64, f64),
    pub seed: u64,
    pub scheme: Scheme,
    pub lcrpm_mode: LcrpmMode,
    pub path_loss: PathLossParams,
    /// Each sensor draws one of these uniformly at random.
    pub rectifier_options: Vec<LogEhParams>,
    /// Rayleigh realizations averaged into each round's beamforming gain.
    /// `1` redraws a single channel vector per round.
    pub fading_draws: usize,
    pub record_rounds: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            m: 16,
            n_t: 4,
            n_c: 8,
            e_c: 4.0,
            p_c: 4.0,
            iterations: 10_000,
            batch_size: 100,
            walk_step: 0.03,
            d_min: 1.0,
            placement: (5.0, 15.0),
            seed: 0,
            scheme: Scheme::new(Selector::Ssep, Allocator::Crpm, EhModel::Log),
            lcrpm_mode: LcrpmMode::EqualizeLevels,
            path_loss: PathLossParams::default(),
            rectifier_options: default_rectifier_options(),
            fading_draws: 1000,
            record_rounds: false,
        }
    }
}

fn config_err(key: &'static str, reason: impl Into<String>) -> Error {
    Error::Config {
        key,
        reason: reason.into(),
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("m", self.m),
            ("n_t", self.n_t),
            ("n_c", self.n_c),
            ("iterations", self.iterations),
            ("batch_size", self.batch_size),
            ("fading_draws", self.fading_draws),
        ] {
            if v == 0 {
                return Err(config_err(key, "must be >= 1"));
            }
        }
        if self.n_c > self.m {
            return Err(config_err("n_c", format!("cannot serve {} of {} sensors", self.n_c, self.m)));
        }
        for (key, v) in [("e_c", self.e_c), ("p_c", self.p_c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(config_err(key, format!("must be finite and > 0, got {v}")));
            }
        }
        if !(self.walk_step.is_finite() && self.walk_step >= 0.0) {
            return Err(config_err("walk_step", format!("must be finite and >= 0, got {}", self.walk_step)));
        }
        if !(self.d_min.is_finite() && self.d_min > 0.0) {
            return Err(config_err("d_min", format!("must be finite and > 0, got {}", self.d_min)));
        }
        let (lo, hi) = self.placement;
        if !(lo.is_finite() && lo >= self.d_min) {
            return Err(config_err("placement_min", format!("need d_min <= min, got {lo}")));
        }
        if !(hi.is_finite() && lo <= hi) {
            return Err(config_err("placement_max", format!("need min <= max, got [{lo}, {hi}]")));
        }
        self.path_loss.validate().map_err(|e| match e {
            Error::Domain { name: "l0", .. } => config_err("l0", e.to_string()),
            Error::Domain { name: "d0", .. } => config_err("d0", e.to_string()),
            _ => config_err("alpha", e.to_string()),
        })?;
        if self.rectifier_options.is_empty() {
            return Err(config_err("rectifier_options", "at least one rectifier is required"));
        }
        for r in &self.rectifier_options {
            LogEhParams::new(r.a, r.b, r.c).map_err(|e| config_err("rectifier_options", e.to_string()))?;
        }
        Ok(())
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_walk_step(mut self, step: f64) -> Self {
        self.walk_step = step;
        self
    }
}

/// Least-squares linear slope matched to a logarithmic rectifier over `[0, c]`.
pub fn matched_linear_slope(params: &LogEhParams) -> Result<LinearEhParams> {
    const POINTS: usize = 64;
    let samples: Vec<RectifierSample> = (1..=POINTS)
        .map(|i| {
            let x = params.c * i as f64 / POINTS as f64;
            RectifierSample::new(x, params.output(x))
        })
        .collect::<Result<_>>()?;
    fit_linear(&samples)
}

/// Draws each sensor's rectifier uniformly from `options`.
pub fn assign_rectifiers_from<R: Rng + ?Sized>(options: &[LogEhParams], m: usize, rng: &mut R) -> Vec<LogEhParams> {
    (0..m).map(|_| options[rng.random_range(0..options.len())]).collect()
}

pub fn assign_rectifiers<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<LogEhParams> {
    assign_rectifiers_from(&default_rectifier_options(), m, rng)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchRecord {
    pub batch_index: usize,
    /// Rounds completed when this record was taken.
    pub rounds: usize,
    pub min_energy: f64,
    pub total_energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub selected: Vec<usize>,
    pub powers: Vec<f64>,
    pub allocated: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub scheme: Scheme,
    pub batches: Vec<BatchRecord>,
    /// Energy harvested by each sensor over the whole run, J.
    pub final_energy: Vec<f64>,
    pub rounds: Option<Vec<RoundRecord>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub final_min: f64,
    pub final_total: f64,
}

pub fn metrics(trace: &SimTrace) -> Result<Summary> {
    if trace.final_energy.is_empty() {
        return Err(Error::Empty("trace"));
    }
    Ok(Summary {
        final_min: trace.final_energy.iter().copied().fold(f64::INFINITY, f64::min),
        final_total: trace.final_energy.iter().sum(),
    })
}

/// One simulation instance. Owns its random streams; run one per thread.
pub struct Simulation {
    config: SimConfig,
    positions: Vec<SensorPosition>,
    rectifiers: Vec<LogEhParams>,
    linear: Vec<LinearEhParams>,
    energy: Vec<f64>,
    gains: Vec<f64>,
    rr_state: SelectionState,
    mobility_rng: SimRng,
    fading_rng: SimRng,
    round: usize,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let positions = mobility::init_positions(config.m, config.placement, &mut stream(config.seed, Stream::Placement));
        let rectifiers = assign_rectifiers_from(
            &config.rectifier_options,
            config.m,
            &mut stream(config.seed, Stream::Rectifier),
        );
        let linear = rectifiers.iter().map(matched_linear_slope).collect::<Result<_>>()?;
        Ok(Self {
            positions,
            rectifiers,
            linear,
            energy: vec![0.0; config.m],
            gains: vec![0.0; config.m],
            rr_state: SelectionState::default(),
            mobility_rng: stream(config.seed, Stream::Mobility),
            fading_rng: stream(config.seed, Stream::Fading),
            round: 0,
            config,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn energy(&self) -> &[f64] {
        &self.energy
    }

    pub fn positions(&self) -> &[SensorPosition] {
        &self.positions
    }

    pub fn rectifiers(&self) -> &[LogEhParams] {
        &self.rectifiers
    }

    pub fn linear_slopes(&self) -> &[LinearEhParams] {
        &self.linear
    }

    pub fn rounds_completed(&self) -> usize {
        self.round
    }

    /// Advances one round and returns what was served.
    pub fn step(&mut self) -> RoundRecord {
        let cfg = &self.config;
        let walk = WalkConfig {
            step: cfg.walk_step,
            d_min: cfg.d_min,
        };
        mobility::step(&mut self.positions, &walk, &mut self.mobility_rng);

        for (k, pos) in self.positions.iter().enumerate() {
            let loss = path_loss(pos.distance, &cfg.path_loss).expect("walk keeps distances >= d_min > 0");
            self.gains[k] = sample_mean_gain(cfg.n_t, loss, cfg.fading_draws, &mut self.fading_rng)
                .expect("validated channel parameters")
                .value();
        }

        let selected = match cfg.scheme.selector {
            Selector::Ssep => ssep(&self.energy, cfg.n_c),
            Selector::RoundRobin => {
                let (sel, next) = round_robin(self.rr_state, cfg.m, cfg.n_c);
                self.rr_state = next;
                sel
            }
        };

        let result = self.allocate(&selected);
        for (&k, &p) in selected.iter().zip(&result.powers) {
            self.energy[k] += self.rectifiers[k].output(self.gains[k] * p);
        }
        self.round += 1;
        RoundRecord {
            allocated: result.allocated(),
            powers: result.powers,
            selected,
        }
    }

    fn cap(&self, k: usize) -> f64 {
        let lambda = self.gains[k];
        if lambda > 0.0 {
            (self.rectifiers[k].c / lambda).min(self.config.p_c)
        } else {
            self.config.p_c
        }
    }

    fn allocate(&self, selected: &[usize]) -> AllocationResult {
        let cfg = &self.config;
        let scheme = cfg.scheme;
        match (scheme.allocator, scheme.eh_model) {
            (Allocator::Epd, _) | (_, EhModel::Log) => {
                let records = selected
                    .iter()
                    .map(|&k| {
                        let r = &self.rectifiers[k];
                        SensorRecord::new(r.a, r.b, self.gains[k], self.energy[k], self.cap(k))
                    })
                    .collect::<Result<Vec<_>>>()
                    .expect("simulation state stays within record invariants");
                let problem = AllocationProblem::new(records, cfg.e_c).expect("nonempty selection");
                match scheme.allocator {
                    Allocator::Crpm => crpm(&problem, CrpmOptions::default()),
                    Allocator::Trpm => trpm(&problem),
                    Allocator::Epd => epd(&problem),
                }
            }
            (alloc, EhModel::Linear) => {
                let records = selected
                    .iter()
                    .map(|&k| LinearSensorRecord::new(self.linear[k].h, self.gains[k], self.energy[k], self.cap(k)))
                    .collect::<Result<Vec<_>>>()
                    .expect("simulation state stays within record invariants");
                let problem = LinearProblem::new(records, cfg.e_c).expect("nonempty selection");
                match alloc {
                    Allocator::Crpm => lcrpm(&problem, cfg.lcrpm_mode),
                    _ => ltrpm(&problem),
                }
            }
        }
    }

    pub fn run(mut self) -> SimTrace {
        let iterations = self.config.iterations;
        let batch = self.config.batch_size;
        let mut batches = Vec::with_capacity(iterations.div_ceil(batch));
        let mut rounds = self.config.record_rounds.then(|| Vec::with_capacity(iterations));
        for r in 1..=iterations {
            let record = self.step();
            if let Some(rounds) = rounds.as_mut() {
                rounds.push(record);
            }
            if r % batch == 0 || r == iterations {
                batches.push(BatchRecord {
                    batch_index: batches.len(),
                    rounds: r,
                    min_energy: self.energy.iter().copied().fold(f64::INFINITY, f64::min),
                    total_energy: self.energy.iter().sum(),
                });
            }
        }
        SimTrace {
            scheme: self.config.scheme,
            batches,
            final_energy: self.energy,
            rounds,
        }
    }
}

/// Validates `config` and runs it to completion.
pub fn run(config: SimConfig) -> Result<SimTrace> {
    Ok(Simulation::new(config)?.run())
}
