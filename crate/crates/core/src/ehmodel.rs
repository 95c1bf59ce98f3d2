//! Rectifier (energy-harvesting) models.
//!
//! The logarithmic model maps received RF power `x` to harvested DC power
//! `a * ln(1 + b * min(x, c))`, where `c` is the rectifier's operating limit.
//! The linear model is `h * min(x, c)`. Both can be fitted by least squares
//! from sampled rectifier curves.

use std::io::Read;

use crate::error::{Error, Result};

/// Parameters of the logarithmic rectifier curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEhParams {
    /// Scale, in watts.
    pub a: f64,
    /// Curvature, in 1/W.
    pub b: f64,
    /// Operating input limit, in watts.
    pub c: f64,
}

impl LogEhParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(name, "finite and > 0", v));
            }
        }
        Ok(Self { a, b, c })
    }

    /// Converts a fit made with input and output measured in `unit` watts
    /// (e.g. `1e-3` for milliwatts) to SI. The curve is unchanged; `c` is
    /// already in watts.
    pub fn from_scaled_fit(a: f64, b: f64, c: f64, unit: f64) -> Result<Self> {
        if !(unit.is_finite() && unit > 0.0) {
            return Err(Error::domain("unit", "finite and > 0", unit));
        }
        Self::new(a * unit, b / unit, c)
    }

    /// Harvested power for a nonnegative input. Inputs above `c` saturate.
    #[inline]
    pub fn output(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        self.a * (self.b * x.min(self.c)).ln_1p()
    }

    /// Largest achievable output, reached at `x >= c`.
    pub fn saturation(&self) -> f64 {
        self.output(self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearEhParams {
    /// Conversion slope (W/W).
    pub h: f64,
}

impl LinearEhParams {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h <= 1.0) {
            return Err(Error::domain("h", "in (0, 1]", h));
        }
        Ok(Self { h })
    }

    #[inline]
    pub fn output(&self, x: f64, c: f64) -> f64 {
        debug_assert!(x >= 0.0);
        self.h * x.min(c)
    }
}

/// One digitized point of a rectifier curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectifierSample {
    pub input_power: f64,
    pub output_power: f64,
}

impl RectifierSample {
    pub fn new(input_power: f64, output_power: f64) -> Result<Self> {
        if !(input_power.is_finite() && input_power >= 0.0) {
            return Err(Error::domain("input_power", "finite and >= 0", input_power));
        }
        if !(output_power.is_finite() && output_power >= 0.0) {
            return Err(Error::domain("output_power", "finite and >= 0", output_power));
        }
        Ok(Self {
            input_power,
            output_power,
        })
    }
}

pub fn harvest_log(x: f64, params: &LogEhParams) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("x", ">= 0", x));
    }
    Ok(params.output(x))
}

pub fn harvest_linear(x: f64, params: &LinearEhParams, c: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("x", ">= 0", x));
    }
    Ok(params.output(x, c))
}

/// Settings for [`fit_log_with`].
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Converged once an accepted step lowers the SSE by less than this fraction.
    pub relative_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            relative_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LogFit {
    pub params: LogEhParams,
    pub sse: f64,
    pub iterations: usize,
    /// SSE after initialization followed by the SSE after every iteration.
    pub sse_history: Vec<f64>,
}

/// Least-squares fit of the logarithmic model. `c` is taken as the largest
/// observed input.
pub fn fit_log(samples: &[RectifierSample]) -> Result<LogEhParams> {
    fit_log_with(samples, FitOptions::default()).map(|f| f.params)
}

/// Levenberg-Marquardt fit of `(a, b)` with Marquardt diagonal scaling.
pub fn fit_log_with(samples: &[RectifierSample], opts: FitOptions) -> Result<LogFit> {
    if samples.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    let x_max = samples.iter().map(|s| s.input_power).fold(f64::MIN, f64::max);
    let x_min = samples.iter().map(|s| s.input_power).fold(f64::MAX, f64::min);
    if x_max == x_min {
        return Err(Error::InsufficientData("all inputs identical".into()));
    }
    let y_max = samples.iter().map(|s| s.output_power).fold(0.0, f64::max);
    if y_max <= 0.0 {
        return Err(Error::DegenerateData("all outputs are zero".into()));
    }
    let x_mean = samples.iter().map(|s| s.input_power).sum::<f64>() / samples.len() as f64;

    let sse_of = |a: f64, b: f64| -> f64 {
        samples
            .iter()
            .map(|s| {
                let r = a * (b * s.input_power).ln_1p() - s.output_power;
                r * r
            })
            .sum()
    };

    let (mut a, mut b) = (y_max, 1.0 / x_mean);
    let mut sse = sse_of(a, b);
    let mut history = vec![sse];
    let mut damping = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        iterations += 1;
        if sse == 0.0 {
            converged = true;
            history.push(sse);
            break;
        }

        // Normal equations for the 2x2 problem.
        let (mut jaa, mut jab, mut jbb, mut ga, mut gb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for s in samples {
            let x = s.input_power;
            let da = (b * x).ln_1p();
            let db = a * x / (1.0 + b * x);
            let r = a * da - s.output_power;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }

        let mut accepted = false;
        while damping < 1e20 {
            let m00 = jaa * (1.0 + damping);
            let m11 = jbb * (1.0 + damping);
            let det = m00 * m11 - jab * jab;
            if det > 0.0 && det.is_finite() {
                let step_a = -(m11 * ga - jab * gb) / det;
                let step_b = -(m00 * gb - jab * ga) / det;
                let (na, nb) = (a + step_a, b + step_b);
                if na > 0.0 && nb > 0.0 && na.is_finite() && nb.is_finite() {
                    let trial = sse_of(na, nb);
                    if trial < sse {
                        let decrease = sse - trial;
                        a = na;
                        b = nb;
                        damping = (damping / 3.0).max(1e-15);
                        accepted = true;
                        if decrease <= opts.relative_tolerance * sse {
                            converged = true;
                        }
                        sse = trial;
                        break;
                    }
                }
            }
            damping *= 4.0;
        }
        history.push(sse);
        if !accepted {
            // No descent direction left at working precision.
            converged = true;
        }
        if converged {
            break;
        }
    }

    if !converged {
        return Err(Error::NoConvergence { iterations, sse });
    }
    Ok(LogFit {
        params: LogEhParams::new(a, b, x_max)?,
        sse,
        iterations,
        sse_history: history,
    })
}

/// Least-squares slope of a line through the origin.
pub fn fit_linear(samples: &[RectifierSample]) -> Result<LinearEhParams> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let (sxy, sxx) = samples.iter().fold((0.0, 0.0), |(sxy, sxx), s| {
        (
            sxy + s.input_power * s.output_power,
            sxx + s.input_power * s.input_power,
        )
    });
    if sxx == 0.0 {
        return Err(Error::DegenerateData("all inputs are zero".into()));
    }
    LinearEhParams::new(sxy / sxx)
        .map_err(|_| Error::DegenerateData(format!("fitted slope {} outside (0, 1]", sxy / sxx)))
}

pub fn rmse<F: Fn(f64) -> f64>(model: F, samples: &[RectifierSample]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("samples"));
    }
    let sum: f64 = samples
        .iter()
        .map(|s| {
            let r = model(s.input_power) - s.output_power;
            r * r
        })
        .sum();
    Ok((sum / samples.len() as f64).sqrt())
}

/// Reads `(input_power_W, output_power_W)` rows. A non-numeric first row is
/// treated as a header.
pub fn read_samples_csv<R: Read>(reader: R) -> Result<Vec<RectifierSample>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::Csv(format!(
                "row {}: expected 2 columns, found {}",
                i + 1,
                record.len()
            )));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(x), Ok(y)) => out.push(RectifierSample::new(x, y)?),
            _ if i == 0 => continue,
            _ => {
                return Err(Error::Csv(format!(
                    "row {}: cannot parse `{}`, `{}` as numbers",
                    i + 1,
                    &record[0],
                    &record[1]
                )))
            }
        }
    }
    Ok(out)
}
