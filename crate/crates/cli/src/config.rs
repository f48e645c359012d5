use std::fs;

use twirlkit_core::backaction::ThresholdRule;
use twirlkit_core::MAX_QUBITS;

use crate::args::ParsedArgs;
use crate::error::{CliError, CliResult};

/// Scalar knobs shared by every subcommand, populated from defaults, then
/// the config file, then command-line flags.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub t1: f64,
    pub t_step: f64,
    pub horizon: f64,
    pub qubit_range: (usize, usize),
    pub beta_grid: Vec<f64>,
    pub dt: f64,
    pub fd_step: f64,
    pub threshold_rule: ThresholdRule,
    pub output_path: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            t1: 1.0,
            t_step: 0.01,
            horizon: 15.0,
            qubit_range: (1, 3),
            beta_grid: vec![0.0, 1.0, 10.0, 100.0],
            dt: 1e-3,
            fd_step: 1e-4,
            threshold_rule: ThresholdRule::BitFlip,
            output_path: "-".to_string(),
        }
    }
}

impl ExperimentConfig {
    /// Defaults overlaid with the --config file (when given) and then the
    /// remaining flags.
    pub fn from_args(args: &ParsedArgs) -> CliResult<Self> {
        let mut config = Self::default();
        if let Some((_, path)) = args.flags.iter().find(|(name, _)| name == "config") {
            config.load_file(path)?;
        }
        for (name, value) in &args.flags {
            if name != "config" {
                config.set(name, value)?;
            }
        }
        config.validate()?;
        Ok(config)
    }

    fn load_file(&mut self, path: &str) -> CliResult<()> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config '{path}': {e}")))?;
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::input(format!("{path}:{}: expected 'key = value'", line_no + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::input(format!("{path}:{}: {}", line_no + 1, e.message())))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "t1" => self.t1 = parse_f64(key, value)?,
            "t_step" | "t-step" => self.t_step = parse_f64(key, value)?,
            "horizon" => self.horizon = parse_f64(key, value)?,
            "dt" => self.dt = parse_f64(key, value)?,
            "fd_step" | "fd-step" => self.fd_step = parse_f64(key, value)?,
            "qubits" => self.qubit_range = parse_range(value)?,
            "beta" => self.beta_grid = parse_grid(value)?,
            "threshold" => {
                self.threshold_rule = match value {
                    "px" => ThresholdRule::BitFlip,
                    "pxy" => ThresholdRule::BitPhaseFlip,
                    other => {
                        return Err(CliError::input(format!(
                            "threshold must be px or pxy, got '{other}'"
                        )))
                    }
                }
            }
            "out" => self.output_path = value.to_string(),
            other => return Err(CliError::input(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    fn validate(&self) -> CliResult<()> {
        for (name, value) in [
            ("t1", self.t1),
            ("t_step", self.t_step),
            ("horizon", self.horizon),
            ("dt", self.dt),
            ("fd_step", self.fd_step),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(CliError::input(format!("{name} must be positive, got {value}")));
            }
        }
        if self.fd_step >= self.t_step {
            return Err(CliError::input(format!(
                "fd_step ({}) must be smaller than t_step ({})",
                self.fd_step, self.t_step
            )));
        }
        let (lo, hi) = self.qubit_range;
        if lo == 0 || hi < lo || hi > MAX_QUBITS {
            return Err(CliError::input(format!(
                "qubit range {lo}..{hi} must satisfy 1 <= a <= b <= {MAX_QUBITS}"
            )));
        }
        if self.beta_grid.is_empty() {
            return Err(CliError::input("beta grid must not be empty"));
        }
        for &beta in &self.beta_grid {
            if !(beta >= 0.0 && beta.is_finite()) {
                return Err(CliError::input(format!("beta must be nonnegative, got {beta}")));
            }
        }
        Ok(())
    }
}

fn parse_f64(key: &str, value: &str) -> CliResult<f64> {
    value
        .parse()
        .map_err(|_| CliError::input(format!("{key}: cannot parse '{value}' as a number")))
}

fn parse_range(value: &str) -> CliResult<(usize, usize)> {
    let (lo, hi) = value
        .split_once("..")
        .ok_or_else(|| CliError::input(format!("qubits: expected 'a..b', got '{value}'")))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("qubits: bad lower bound '{lo}'")))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("qubits: bad upper bound '{hi}'")))?;
    Ok((lo, hi))
}

fn parse_grid(value: &str) -> CliResult<Vec<f64>> {
    value
        .split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| CliError::input(format!("beta: cannot parse '{part}'")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(pairs: &[(&str, &str)]) -> ParsedArgs {
        ParsedArgs {
            flags: pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            positionals: Vec::new(),
        }
    }

    #[test]
    fn defaults_are_valid() {
        let config = ExperimentConfig::from_args(&args(&[])).unwrap();
        assert_eq!(config.qubit_range, (1, 3));
        assert_eq!(config.output_path, "-");
    }

    #[test]
    fn flags_override_defaults() {
        let config = ExperimentConfig::from_args(&args(&[
            ("t1", "2.5"),
            ("qubits", "2..4"),
            ("beta", "0, 0.5"),
            ("threshold", "pxy"),
        ]))
        .unwrap();
        assert_eq!(config.t1, 2.5);
        assert_eq!(config.qubit_range, (2, 4));
        assert_eq!(config.beta_grid, vec![0.0, 0.5]);
        assert_eq!(config.threshold_rule, ThresholdRule::BitPhaseFlip);
    }

    #[test]
    fn invalid_settings_are_rejected() {
        assert!(ExperimentConfig::from_args(&args(&[("t1", "-1")])).is_err());
        assert!(ExperimentConfig::from_args(&args(&[("qubits", "0..2")])).is_err());
        assert!(ExperimentConfig::from_args(&args(&[("qubits", "2..9")])).is_err());
        assert!(ExperimentConfig::from_args(&args(&[("fd-step", "0.5")])).is_err());
        assert!(ExperimentConfig::from_args(&args(&[("threshold", "qq")])).is_err());
    }
}
