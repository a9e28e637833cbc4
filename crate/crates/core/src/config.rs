//! Run configuration read from a TOML file.
//!
//! ```toml
//! prime = 3
//! precision = 20
//! n_max = 50
//! grid = 8
//! window = 3
//! gap_threshold = 2
//! energy_scale = 1.0
//! weight_exponent = 2.0
//! ap_limit = 10000
//! output_dir = "out"
//! ```
//!
//! Every key is optional; unknown keys are rejected. `ARITHDYN_OUT_DIR`
//! overrides `output_dir`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::is_prime;

pub const OUT_DIR_VAR: &str = "ARITHDYN_OUT_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("{key} = {value} is outside {range}")]
    OutOfRange { key: &'static str, value: String, range: &'static str },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub prime: u64,
    pub precision: u32,
    pub n_max: usize,
    /// Number of grid steps; the surface grid has `grid + 1` fibers.
    pub grid: usize,
    pub window: usize,
    pub gap_threshold: usize,
    pub energy_scale: f64,
    pub weight_exponent: f64,
    pub ap_limit: u64,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            prime: 3,
            precision: 20,
            n_max: 50,
            grid: 8,
            window: 3,
            gap_threshold: 2,
            energy_scale: 1.0,
            weight_exponent: 2.0,
            ap_limit: crate::elliptic::AP_LIMIT,
            output_dir: PathBuf::from("."),
        }
    }
}

fn check(ok: bool, key: &'static str, value: impl ToString, range: &'static str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::OutOfRange {
            key,
            value: value.to_string(),
            range,
        })
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        check(is_prime(self.prime), "prime", self.prime, "the primes")?;
        check((1..=10_000).contains(&self.precision), "precision", self.precision, "1..=10000")?;
        check((1..=100_000).contains(&self.n_max), "n_max", self.n_max, "1..=100000")?;
        check((1..=10_000).contains(&self.grid), "grid", self.grid, "1..=10000")?;
        check(self.window >= 1, "window", self.window, "1..")?;
        check(self.gap_threshold >= 1, "gap_threshold", self.gap_threshold, "1..")?;
        check(self.energy_scale.is_finite() && self.energy_scale > 0.0, "energy_scale", self.energy_scale, "(0, inf)")?;
        check(
            self.weight_exponent.is_finite() && self.weight_exponent >= 0.0,
            "weight_exponent",
            self.weight_exponent,
            "[0, inf)",
        )?;
        check((2..=1_000_000).contains(&self.ap_limit), "ap_limit", self.ap_limit, "2..=1000000")
    }

    /// Applies the output-directory override from the environment.
    pub fn with_env(mut self) -> Self {
        if let Some(dir) = std::env::var_os(OUT_DIR_VAR) {
            self.output_dir = PathBuf::from(dir);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
        let c = RunConfig::parse("prime = 11\ngrid = 4\n").unwrap();
        assert_eq!((c.prime, c.grid, c.n_max), (11, 4, 50));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(RunConfig::parse("colour = 1"), Err(ConfigError::Parse(_))));
        assert!(matches!(RunConfig::parse("prime = 12"), Err(ConfigError::OutOfRange { key: "prime", .. })));
        assert!(matches!(RunConfig::parse("energy_scale = -1.0"), Err(ConfigError::OutOfRange { .. })));
    }
}
