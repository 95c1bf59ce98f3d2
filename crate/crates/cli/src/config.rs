//! Flat `key = value` experiment configuration.
//!
//! Blank lines and `#` comments are ignored. Any key left out keeps its
//! default. Overrides are applied after the file in the order given.

use std::path::Path;
use std::str::FromStr;

use fairwpt::simulator::parse_allocator;
use fairwpt::{EhModel, LcrpmMode, Selector, SimConfig};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error(transparent)]
    Invalid(#[from] fairwpt::Error),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl ConfigError {
    /// The configuration key the error refers to, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownKey(k) | ConfigError::BadValue { key: k, .. } => Some(k),
            ConfigError::Invalid(fairwpt::Error::Config { key, .. }) => Some(key),
            _ => None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "m",
    "n_t",
    "n_c",
    "e_c",
    "p_c",
    "iterations",
    "batch_size",
    "walk_step",
    "d_min",
    "placement_min",
    "placement_max",
    "seed",
    "selector",
    "allocator",
    "eh_model",
    "lcrpm_mode",
    "l0",
    "d0",
    "alpha",
    "fading_draws",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::BadValue {
        key: key.into(),
        value: value.into(),
        reason: e.to_string(),
    })
}

fn parse_lcrpm_mode(value: &str) -> Result<LcrpmMode, String> {
    match value.to_ascii_lowercase().as_str() {
        "equalize_levels" | "equalize" => Ok(LcrpmMode::EqualizeLevels),
        "equal_increment" | "increment" => Ok(LcrpmMode::EqualIncrement),
        other => Err(format!("unknown lcrpm_mode `{other}` (expected equalize_levels | equal_increment)")),
    }
}

/// Sets one key on `cfg`. Does not validate ranges; see [`finish`].
pub fn apply(cfg: &mut SimConfig, key: &str, value: &str) -> Result<(), ConfigError> {
    let value = value.trim();
    let bad = |reason: String| ConfigError::BadValue {
        key: key.into(),
        value: value.into(),
        reason,
    };
    match key {
        "m" => cfg.m = parse(key, value)?,
        "n_t" => cfg.n_t = parse(key, value)?,
        "n_c" => cfg.n_c = parse(key, value)?,
        "e_c" => cfg.e_c = parse(key, value)?,
        "p_c" => cfg.p_c = parse(key, value)?,
        "iterations" => cfg.iterations = parse(key, value)?,
        "batch_size" => cfg.batch_size = parse(key, value)?,
        "walk_step" => cfg.walk_step = parse(key, value)?,
        "d_min" => cfg.d_min = parse(key, value)?,
        "placement_min" => cfg.placement.0 = parse(key, value)?,
        "placement_max" => cfg.placement.1 = parse(key, value)?,
        "seed" => cfg.seed = parse(key, value)?,
        "selector" => cfg.scheme.selector = Selector::from_str(value).map_err(bad)?,
        "allocator" => {
            let (alloc, model) = parse_allocator(value).map_err(bad)?;
            cfg.scheme.allocator = alloc;
            if let Some(m) = model {
                cfg.scheme.eh_model = m;
            }
        }
        "eh_model" => cfg.scheme.eh_model = EhModel::from_str(value).map_err(bad)?,
        "lcrpm_mode" => cfg.lcrpm_mode = parse_lcrpm_mode(value).map_err(bad)?,
        "l0" => cfg.path_loss.l0 = parse(key, value)?,
        "d0" => cfg.path_loss.d0 = parse(key, value)?,
        "alpha" => cfg.path_loss.alpha = parse(key, value)?,
        "fading_draws" => cfg.fading_draws = parse(key, value)?,
        other => return Err(ConfigError::UnknownKey(other.into())),
    }
    Ok(())
}

/// Splits `key=value`.
pub fn split_pair(text: &str) -> Option<(&str, &str)> {
    let (k, v) = text.split_once('=')?;
    let k = k.trim();
    (!k.is_empty()).then_some((k, v.trim()))
}

/// Parses configuration text on top of the defaults, then applies
/// `overrides` and validates the result.
pub fn parse_config_str(text: &str, overrides: &[(String, String)]) -> Result<SimConfig, ConfigError> {
    let mut cfg = SimConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = split_pair(line).ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            text: raw.into(),
        })?;
        apply(&mut cfg, k, v)?;
    }
    for (k, v) in overrides {
        apply(&mut cfg, k, v)?;
    }
    finish(cfg)
}

/// Reads `path` (or nothing) and delegates to [`parse_config_str`].
pub fn parse_config(path: Option<&Path>, overrides: &[(String, String)]) -> Result<SimConfig, ConfigError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
            path: p.display().to_string(),
            source,
        })?,
        None => String::new(),
    };
    parse_config_str(&text, overrides)
}

fn finish(cfg: SimConfig) -> Result<SimConfig, ConfigError> {
    cfg.validate()?;
    Ok(cfg)
}
