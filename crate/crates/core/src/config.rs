//! Flat `key = value` configuration covering the system parameters, the
//! power split and the sampling settings.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{CrsError, Result};
use crate::model::{PowerSplit, SystemParams};
use crate::montecarlo::SimConfig;

/// Recognised keys, in the order they are listed by [`Settings::to_text`].
pub const KEYS: [&str; 19] = [
    "P",
    "sigma2",
    "alpha",
    "r_c",
    "r_e",
    "r_0",
    "K",
    "M",
    "N",
    "F",
    "zeta",
    "xi",
    "u",
    "beta",
    "rho",
    "samples",
    "seed",
    "chunk_size",
    "workers",
];

/// Everything needed to evaluate one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub params: SystemParams,
    pub beta: f64,
    pub rho: f64,
    pub sim: SimConfig,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { params: SystemParams::default(), beta: 0.5, rho: 0.5, sim: SimConfig::default() }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| CrsError::Parse(format!("invalid value `{value}` for key `{key}`")))
}

impl Settings {
    /// Sets one key; values are validated as a whole by [`Settings::validate`].
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let p = &mut self.params;
        match key {
            "P" => p.power = parse(key, value)?,
            "sigma2" => p.noise = parse(key, value)?,
            "alpha" => p.path_loss = parse(key, value)?,
            "r_c" => p.r_center = parse(key, value)?,
            "r_e" => p.r_edge = parse(key, value)?,
            "r_0" => p.r_outer = parse(key, value)?,
            "K" => p.receivers = parse(key, value)?,
            "M" => p.cache_size = parse(key, value)?,
            "N" => p.cc_depth = parse(key, value)?,
            "F" => p.library = parse(key, value)?,
            "zeta" => p.zeta = parse(key, value)?,
            "xi" => p.xi = parse(key, value)?,
            "u" => p.u = parse(key, value)?,
            "beta" => self.beta = parse(key, value)?,
            "rho" => self.rho = parse(key, value)?,
            "samples" => self.sim.samples = parse(key, value)?,
            "seed" => self.sim.seed = parse(key, value)?,
            "chunk_size" => self.sim.chunk_size = parse(key, value)?,
            "workers" => self.sim.workers = Some(parse(key, value)?),
            _ => return Err(CrsError::Parse(format!("unknown key `{key}` (known: {})", KEYS.join(", ")))),
        }
        Ok(())
    }

    /// Applies a `key=value` assignment.
    pub fn apply_assignment(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CrsError::Parse(format!("expected key=value, got `{assignment}`")))?;
        self.apply(key.trim(), value.trim())
    }

    /// Applies every assignment of a config file. Blank lines and text
    /// after `#` are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            self.apply_assignment(line).map_err(|e| CrsError::Parse(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        s.apply_text(text)?;
        Ok(s)
    }

    pub fn split(&self) -> Result<PowerSplit> {
        PowerSplit::new(self.beta, self.rho)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.split()?;
        self.sim.validate()
    }

    /// Renders the settings in the same format `apply_text` reads.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let values: [String; 19] = [
            p.power.to_string(),
            p.noise.to_string(),
            p.path_loss.to_string(),
            p.r_center.to_string(),
            p.r_edge.to_string(),
            p.r_outer.to_string(),
            p.receivers.to_string(),
            p.cache_size.to_string(),
            p.cc_depth.to_string(),
            p.library.to_string(),
            p.zeta.to_string(),
            p.xi.to_string(),
            p.u.to_string(),
            self.beta.to_string(),
            self.rho.to_string(),
            self.sim.samples.to_string(),
            self.sim.seed.to_string(),
            self.sim.chunk_size.to_string(),
            self.sim.workers.map_or_else(|| "0".into(), |w| w.to_string()),
        ];
        for (k, v) in KEYS.iter().zip(values) {
            if *k == "workers" && self.sim.workers.is_none() {
                continue;
            }
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}
