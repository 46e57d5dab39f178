//! Optional JSON config file: a flat object of numeric parameters using
//! the same names as the flags (underscores for dashes). Flags always
//! win; keys a command does not define are rejected.

use std::path::Path;

use serde_json::Value;

use crate::error::CliError;

pub struct Config {
    entries: serde_json::Map<String, Value>,
}

impl Config {
    /// Loads the file, or yields an empty config when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Config {
                entries: serde_json::Map::new(),
            });
        };
        let text = std::fs::read_to_string(path).map_err(|err| {
            CliError::parameter(format!("cannot read config {}: {err}", path.display()))
        })?;
        let value: Value = serde_json::from_str(&text).map_err(|err| {
            CliError::parameter(format!("config {}: invalid JSON: {err}", path.display()))
        })?;
        match value {
            Value::Object(entries) => Ok(Config { entries }),
            other => Err(CliError::parameter(format!(
                "config {}: expected a JSON object, got {other}",
                path.display()
            ))),
        }
    }

    /// Removes `key` and returns it as a float. `None` when absent.
    pub fn take_number(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(Value::Number(number)) => number.as_f64().map(Some).ok_or_else(|| {
                CliError::parameter(format!("config key `{key}` is not representable as a float"))
            }),
            Some(other) => Err(CliError::parameter(format!(
                "config key `{key}` must be a number, got {other}"
            ))),
        }
    }

    /// Removes `key` and returns it as a nonnegative integer seed.
    pub fn take_integer(&mut self, key: &str) -> Result<Option<u64>, CliError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(Value::Number(number)) => number.as_u64().map(Some).ok_or_else(|| {
                CliError::parameter(format!(
                    "config key `{key}` must be a nonnegative integer"
                ))
            }),
            Some(other) => Err(CliError::parameter(format!(
                "config key `{key}` must be a nonnegative integer, got {other}"
            ))),
        }
    }

    /// After a command has taken every key it defines, anything left is
    /// unknown and rejected.
    pub fn finish(self) -> Result<(), CliError> {
        if self.entries.is_empty() {
            return Ok(());
        }
        let mut keys: Vec<&str> = self.entries.keys().map(String::as_str).collect();
        keys.sort_unstable();
        Err(CliError::parameter(format!(
            "config contains keys this command does not accept: {}",
            keys.join(", ")
        )))
    }
}

/// A "start:stop:step" grid, from a flag string or three config keys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::parameter(format!(
                "grid `{text}` must have the form start:stop:step"
            )));
        }
        let mut numbers = [0.0f64; 3];
        for (slot, part) in numbers.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| {
                CliError::parameter(format!("grid component `{part}` is not a number"))
            })?;
        }
        GridSpec {
            start: numbers[0],
            stop: numbers[1],
            step: numbers[2],
        }
        .validated()
    }

    /// Resolves a grid from (in order of precedence) a flag string, the
    /// config triplet `grid_start`/`grid_stop`/`grid_step`, or a default.
    pub fn resolve(
        flag: Option<&str>,
        config: &mut Config,
        default: Option<GridSpec>,
    ) -> Result<Option<GridSpec>, CliError> {
        let start = config.take_number("grid_start")?;
        let stop = config.take_number("grid_stop")?;
        let step = config.take_number("grid_step")?;
        if let Some(text) = flag {
            return GridSpec::parse(text).map(Some);
        }
        match (start, stop, step) {
            (Some(start), Some(stop), Some(step)) => {
                GridSpec { start, stop, step }.validated().map(Some)
            }
            (None, None, None) => Ok(default),
            _ => Err(CliError::parameter(
                "grid via config needs all three of grid_start, grid_stop, grid_step",
            )),
        }
    }

    fn validated(self) -> Result<Self, CliError> {
        if !self.start.is_finite() || !self.stop.is_finite() || !self.step.is_finite() {
            return Err(CliError::parameter("grid bounds and step must be finite"));
        }
        if self.step <= 0.0 {
            return Err(CliError::parameter(format!(
                "grid step must be positive, got {}",
                self.step
            )));
        }
        if self.stop < self.start {
            return Err(CliError::parameter(format!(
                "grid stop {} is below start {}",
                self.stop, self.start
            )));
        }
        let count = ((self.stop - self.start) / self.step).floor() as u64 + 1;
        if count > 1_000_000 {
            return Err(CliError::parameter(format!(
                "grid would have {count} points; the limit is 1000000"
            )));
        }
        Ok(self)
    }

    /// Inclusive grid values: start, start+step, …, up to stop (within
    /// half an ulp-scaled tolerance so `17:57:1` includes 57).
    pub fn values(&self) -> Vec<f64> {
        let mut values = Vec::new();
        let tolerance = self.step * 1e-9;
        let mut index = 0u64;
        loop {
            let value = self.start + index as f64 * self.step;
            if value > self.stop + tolerance {
                break;
            }
            values.push(value);
            index += 1;
        }
        values
    }
}
