//! Run configuration: a JSON document whose fields are overridden by flags.
//!
//! Precedence, lowest first: built-in defaults, the `--config` document,
//! `IPKIT_OUT_DIR` (output directory only), command-line flags.

use crate::error::CliError;
use crate::records::Format;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;

pub const OUT_DIR_ENV: &str = "IPKIT_OUT_DIR";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub replicas: Option<usize>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    /// Reads a config document, or the `config` field of a run manifest.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))?;
        let v = match v {
            Value::Object(mut m) if m.contains_key("config") && m.contains_key("artifacts") => m.remove("config").unwrap(),
            other => other,
        };
        serde_json::from_value(v).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    /// Typed view of `params`.
    pub fn typed<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| CliError::Validation(format!("{} parameters: {e}", self.command)))
    }

    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Validation(format!("`{}` is stochastic and needs --seed", self.command)))
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

/// Flag text to a JSON value: integers, then floats, then booleans, else a string.
pub fn flag_value(raw: &str) -> Value {
    if let Ok(i) = raw.parse::<i64>() {
        return Value::from(i);
    }
    if let Ok(x) = raw.parse::<f64>() {
        if x.is_finite() {
            return Value::from(x);
        }
    }
    match raw {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => Value::String(raw.to_string()),
    }
}

/// `a:b:h` → a, a+h, …, up to b.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Validation(format!("grid `{spec}` is not of the form start:stop:step"));
    let parts: Vec<f64> = spec.split(':').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let [a, b, h] = parts[..] else { return Err(bad()) };
    if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(CliError::Validation(format!("grid `{spec}` has more than 10^6 points")));
    }
    Ok((0..=n).map(|i| a + h * i as f64).collect())
}

/// `a:b` → a..=b, or a comma-separated list.
pub fn parse_sites(spec: &str) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::Validation(format!("sites `{spec}` must be `a:b` or a comma list"));
    if let Some((a, b)) = spec.split_once(':') {
        let (a, b) = (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?);
        if b < a || b - a > 2000 {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    spec.split(',').map(|p| p.trim().parse::<i64>().map_err(|_| bad())).collect()
}

pub fn parse_list<T: std::str::FromStr>(spec: &str) -> Result<Vec<T>, CliError> {
    spec.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| CliError::Validation(format!("cannot parse list `{spec}`"))))
        .collect()
}
