//! Sweep configuration: a flat `key = value` text document.
//!
//! ```text
//! # utility vs. number of carriers
//! sweep_axis  = K
//! axis_values = 10:10:100      # start:step:end, or a comma list
//! n_users     = 20
//! snr_db      = 10
//! draws       = 500
//! seed        = 1
//! strategies  = feat, nash, optimal, pooling
//! ```

use std::fmt;
use std::str::FromStr;

use feat_core::{EfficiencyConfig64, FeatParams64, NashConfig64};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Users,
    Carriers,
    Snr,
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "N" | "n" | "users" => Ok(Self::Users),
            "K" | "k" | "carriers" => Ok(Self::Carriers),
            "SNR" | "snr" => Ok(Self::Snr),
            other => Err(format!("unknown sweep axis '{other}' (expected N, K or SNR)")),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Users => "N",
            Self::Carriers => "K",
            Self::Snr => "SNR",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Feat,
    Nash,
    Optimal,
    Pooling,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Self::Feat, Self::Nash, Self::Optimal, Self::Pooling];

    pub fn name(self) -> &'static str {
        match self {
            Self::Feat => "feat",
            Self::Nash => "nash",
            Self::Optimal => "optimal",
            Self::Pooling => "pooling",
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|st| st.name() == s.trim())
            .ok_or_else(|| format!("unknown strategy '{}'", s.trim()))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub axis: Axis,
    pub axis_values: Vec<f64>,
    /// Values of the two parameters not swept.
    pub n_users: usize,
    pub n_carriers: usize,
    pub snr_db: f64,
    pub draws: usize,
    pub seed: u64,
    pub strategies: Vec<Strategy>,
    pub feat: FeatParams64,
    pub nash: NashConfig64,
    pub ee: EfficiencyConfig64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            axis: Axis::Carriers,
            axis_values: vec![10.0],
            n_users: 20,
            n_carriers: 40,
            snr_db: 10.0,
            draws: 500,
            seed: 1,
            strategies: Strategy::ALL.to_vec(),
            feat: FeatParams64::default(),
            nash: NashConfig64::default(),
            ee: EfficiencyConfig64::default(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub draws: Option<usize>,
    pub delta: Option<f64>,
    pub beta: Option<f64>,
}

fn parse_num<T: FromStr>(value: &str, what: &str) -> Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("invalid {what} '{}'", value.trim()))
}

fn parse_axis_values(value: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() == 3 {
        let start: f64 = parse_num(parts[0], "range start")?;
        let step: f64 = parse_num(parts[1], "range step")?;
        let end: f64 = parse_num(parts[2], "range end")?;
        if !(step > 0.0) || end < start {
            return Err("range needs a positive step and end >= start".into());
        }
        let count = ((end - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| start + step * i as f64).collect());
    }
    value.split(',').map(|v| parse_num::<f64>(v, "axis value")).collect()
}

impl SweepConfig {
    /// Parses a config document. Keys not present keep their defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Line {
                line,
                msg: format!("expected 'key = value', got '{content}'"),
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|msg| ConfigError::Line { line, msg })?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "sweep_axis" => self.axis = value.parse()?,
            "axis_values" => self.axis_values = parse_axis_values(value)?,
            "n_users" => self.n_users = parse_num(value, key)?,
            "n_carriers" => self.n_carriers = parse_num(value, key)?,
            "snr_db" => self.snr_db = parse_num(value, key)?,
            "draws" => self.draws = parse_num(value, key)?,
            "seed" => self.seed = parse_num(value, key)?,
            "strategies" => {
                self.strategies = value.split(',').map(str::parse).collect::<Result<_, _>>()?;
            }
            "delta" => self.feat.delta = parse_num(value, key)?,
            "beta" => self.feat.beta = parse_num(value, key)?,
            "nash_tolerance" => self.nash.tolerance = parse_num(value, key)?,
            "nash_max_rounds" => self.nash.max_rounds = parse_num(value, key)?,
            "ee_rate_bps" => self.ee.rate_bps = parse_num(value, key)?,
            "ee_exponent" => self.ee.exponent = parse_num(value, key)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(draws) = o.draws {
            self.draws = draws;
        }
        if let Some(delta) = o.delta {
            self.feat.delta = delta;
        }
        if let Some(beta) = o.beta {
            self.feat.beta = beta;
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.axis_values.is_empty() {
            return Err(invalid("axis_values must not be empty"));
        }
        if self.axis_values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("axis_values must be finite"));
        }
        if self.axis_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("axis_values must be strictly increasing"));
        }
        if matches!(self.axis, Axis::Users | Axis::Carriers)
            && self.axis_values.iter().any(|v| *v < 1.0 || v.fract() != 0.0)
        {
            return Err(invalid(format!("{} axis values must be positive integers", self.axis)));
        }
        if (self.axis != Axis::Users && self.n_users == 0) || (self.axis != Axis::Carriers && self.n_carriers == 0) {
            return Err(invalid("n_users and n_carriers must be at least 1"));
        }
        if !self.snr_db.is_finite() {
            return Err(invalid("snr_db must be finite"));
        }
        if self.draws == 0 {
            return Err(invalid("draws must be at least 1"));
        }
        if self.strategies.is_empty() {
            return Err(invalid("at least one strategy is required"));
        }
        FeatParams64::new(self.feat.delta, self.feat.beta).map_err(|e| invalid(e.to_string()))?;
        NashConfig64::new(self.nash.tolerance, self.nash.max_rounds).map_err(|e| invalid(e.to_string()))?;
        if !(self.ee.rate_bps > 0.0 && self.ee.exponent > 0.0) {
            return Err(invalid("ee_rate_bps and ee_exponent must be positive"));
        }
        Ok(())
    }

    /// `(n_users, n_carriers, snr_db)` at one axis point.
    pub fn point(&self, axis_value: f64) -> (usize, usize, f64) {
        match self.axis {
            Axis::Users => (axis_value as usize, self.n_carriers, self.snr_db),
            Axis::Carriers => (self.n_users, axis_value as usize, self.snr_db),
            Axis::Snr => (self.n_users, self.n_carriers, axis_value),
        }
    }
}
