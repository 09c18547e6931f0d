//! Experiment configuration: defaults, `key=value` files and overrides.

use greedy_sensors::data::SnapshotFormat;
use greedy_sensors::Method;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {msg}")]
    BadValue { key: String, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Random,
    Cv,
    SubmodReport,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Random => "random",
            Mode::Cv => "cv",
            Mode::SubmodReport => "submod",
        })
    }
}

/// What the sensors read in cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    /// Raw field values at the sensor locations.
    Raw,
    /// The rank-`r` projection of the field, `y = C z_true`.
    Reduced,
}

impl FromStr for Observation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(Observation::Raw),
            "reduced" => Ok(Observation::Reduced),
            other => Err(format!("expected raw or reduced, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: usize,
    pub r: usize,
    pub p_min: usize,
    pub p_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub k: usize,
    pub methods: Vec<Method>,
    pub data_path: Option<PathBuf>,
    pub format: SnapshotFormat,
    /// `None` selects the scale-free default per candidate matrix.
    pub epsilon: Option<f64>,
    pub sigma: f64,
    pub subtract_mean: bool,
    pub observation: Observation,
    /// Evaluate each fold on its own training snapshots.
    pub test_on_train: bool,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn defaults(mode: Mode) -> Self {
        Self {
            mode,
            n: 500,
            r: 10,
            p_min: 1,
            p_max: 20,
            trials: 200,
            seed: 0,
            k: 5,
            methods: vec![Method::Dg, Method::Ag, Method::Eg, Method::Random],
            data_path: None,
            format: SnapshotFormat::Csv,
            epsilon: None,
            sigma: 0.0,
            subtract_mean: false,
            observation: Observation::Raw,
            test_on_train: false,
            out_dir: PathBuf::from("out"),
        }
    }

    /// Applies one `key=value` setting. Keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let bad = |msg: String| ConfigError::BadValue { key: key.clone(), msg };
        fn num<T: FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            v.parse::<T>().map_err(|e| e.to_string())
        }
        match key.as_str() {
            "n" => self.n = num(value).map_err(bad)?,
            "r" => self.r = num(value).map_err(bad)?,
            "p_min" => self.p_min = num(value).map_err(bad)?,
            "p_max" => self.p_max = num(value).map_err(bad)?,
            "trials" => self.trials = num(value).map_err(bad)?,
            "seed" => self.seed = num(value).map_err(bad)?,
            "k" => self.k = num(value).map_err(bad)?,
            "methods" => self.methods = parse_methods(value).map_err(bad)?,
            "data" | "data_path" => self.data_path = Some(PathBuf::from(value)),
            "format" => self.format = parse_format(value).map_err(bad)?,
            "epsilon" => self.epsilon = Some(num(value).map_err(bad)?),
            "sigma" => self.sigma = num(value).map_err(bad)?,
            "subtract_mean" => self.subtract_mean = num(value).map_err(bad)?,
            "observation" => self.observation = value.parse().map_err(bad)?,
            "test_on_train" => self.test_on_train = num(value).map_err(bad)?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value),
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    /// Reads `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        self.apply_str(&text, &path.display().to_string())
    }

    pub fn apply_str(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                path: origin.to_string(),
                line: lineno + 1,
                msg: format!("expected key=value, got `{line}`"),
            })?;
            self.set(k, v).map_err(|e| ConfigError::Parse {
                path: origin.to_string(),
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.methods.is_empty() {
            return fail("methods must not be empty");
        }
        if self.r == 0 {
            return fail("r must be at least 1");
        }
        if self.p_min == 0 || self.p_min > self.p_max {
            return fail("need 1 <= p_min <= p_max");
        }
        if !(self.sigma >= 0.0) {
            return fail("sigma must be nonnegative");
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0) {
                return fail("epsilon must be positive");
            }
        }
        match self.mode {
            Mode::Random => {
                if self.p_max > self.n {
                    return fail("need p_max <= n");
                }
                if self.trials == 0 {
                    return fail("trials must be at least 1");
                }
            }
            Mode::Cv => {
                if self.data_path.is_none() {
                    return fail("cv needs a data path");
                }
                if self.k < 2 {
                    return fail("k must be at least 2");
                }
            }
            Mode::SubmodReport => {}
        }
        if self.methods.contains(&Method::Dc) {
            return fail("method dc is not available");
        }
        Ok(())
    }
}

pub fn parse_methods(s: &str) -> Result<Vec<Method>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: Method = part.parse().map_err(|e: greedy_sensors::Error| e.to_string())?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

pub fn parse_format(s: &str) -> Result<SnapshotFormat, String> {
    match s.to_ascii_lowercase().as_str() {
        "csv" => Ok(SnapshotFormat::Csv),
        "raw" | "raw_f64" => Ok(SnapshotFormat::Raw),
        other => Err(format!("expected csv or raw, got `{other}`")),
    }
}
