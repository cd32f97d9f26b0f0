//! Line-oriented `section.key = value` experiment files.
//!
//! Blank lines and text after `#` are ignored. Every key is optional; unknown
//! or repeated keys are rejected, and so is any value that fails to parse or
//! is inconsistent with the grid.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use gravwave::dtn::DtnParams;
use gravwave::grid::Grid;
use gravwave::zakharov::{DataKind, DtnMode, InitialData, Scheme};

/// A rejected configuration, naming the key at fault.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError { key: key.to_string(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config key `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

const KEYS: &[&str] = &[
    "grid.n",
    "grid.R",
    "dtn.Y",
    "dtn.ny",
    "dtn.tol",
    "dtn.max_iter",
    "dtn.mode",
    "evolution.dt",
    "evolution.scheme",
    "evolution.T",
    "evolution.snapshot_every",
    "evolution.log_every",
    "data.kind",
    "data.epsilon",
    "data.seed",
    "data.width",
    "data.phi_ratio",
    "data.mode",
    "data.offset",
    "data.noise",
    "experiment.epsilons",
    "experiment.times",
    "experiment.k_band",
    "experiment.block",
    "experiment.fit_window",
    "experiment.T_max",
    "experiment.sample_dt",
];

/// Everything a subcommand needs, validated against the grid.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub grid: Grid,
    pub dtn: DtnParams,
    pub mode: DtnMode,
    pub dt: f64,
    pub scheme: Scheme,
    pub t_final: f64,
    /// Steps between snapshots; 0 disables them.
    pub snapshot_every: usize,
    pub log_every: usize,
    pub data: InitialData,
    pub seed: u64,
    /// Relative amplitude of a seeded random perturbation of `h`.
    pub noise: f64,
    pub epsilons: Option<Vec<f64>>,
    pub times: Option<Vec<f64>>,
    /// Radius of the random band-limited fields, in lattice units.
    pub k_band: Option<usize>,
    /// Littlewood-Paley block for the decay curve.
    pub block: Option<i32>,
    pub fit_window: Option<[f64; 2]>,
    pub t_max: Option<f64>,
    pub sample_dt: Option<f64>,
}

impl ExperimentConfig {
    /// Band of the seeded perturbation.
    pub fn noise_band(&self) -> usize {
        self.k_band.unwrap_or(4).min(((self.grid.n() + 2) / 3 - 1).max(1))
    }

    /// Band of the order-check fields: cubic products of the data must stay
    /// inside the half-rule band `(n + 3)/4 - 1`.
    pub fn cubic_band(&self) -> Result<usize, ConfigError> {
        let limit = ((self.grid.n() + 3) / 4 - 1) / 3;
        match self.k_band {
            None if limit >= 1 => Ok(limit.min(4)),
            Some(k) if k <= limit => Ok(k),
            _ => Err(ConfigError::new("experiment.k_band", format!("cubic products need a band of at most {limit} for n = {}", self.grid.n()))),
        }
    }

    /// Amplitude sweep, falling back to `fallback`.
    pub fn epsilons_or(&self, fallback: &[f64]) -> Vec<f64> {
        self.epsilons.clone().unwrap_or_else(|| fallback.to_vec())
    }
}

impl FromStr for ExperimentConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let raw = parse_lines(text)?;
        Values { raw }.build()
    }
}

fn parse_lines(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut raw = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::new(line, format!("line {} is not of the form `section.key = value`", no + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(ConfigError::new(key, "unknown key"));
        }
        if value.is_empty() {
            return Err(ConfigError::new(key, "missing value"));
        }
        if raw.insert(key.to_string(), value.to_string()).is_some() {
            return Err(ConfigError::new(key, "given more than once"));
        }
    }
    Ok(raw)
}

struct Values {
    raw: BTreeMap<String, String>,
}

impl Values {
    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.raw
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| ConfigError::new(key, format!("cannot parse `{v}`"))))
            .transpose()
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some(v) = self.raw.get(key) else { return Ok(None) };
        v.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| ConfigError::new(key, format!("cannot parse `{}` as a number", s.trim()))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.or(key, default)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(ConfigError::new(key, format!("must be positive, got {v}")));
        }
        Ok(v)
    }

    fn build(&self) -> Result<ExperimentConfig, ConfigError> {
        let n: usize = self.or("grid.n", 32)?;
        let period = self.positive("grid.R", 2.0 * PI)?;
        let grid = Grid::new(n, period).map_err(|e| ConfigError::new("grid.n", e.to_string()))?;
        let third = (n as i64 + 2) / 3 - 1;

        let mut dtn = DtnParams::default().with_tol(1e-10);
        if self.raw.contains_key("dtn.Y") {
            dtn.depth = Some(self.positive("dtn.Y", 1.0)?);
        }
        dtn.ny = self.or("dtn.ny", dtn.ny)?;
        if dtn.ny < 4 {
            return Err(ConfigError::new("dtn.ny", "need at least 4 vertical nodes"));
        }
        dtn.tol = self.positive("dtn.tol", dtn.tol)?;
        dtn.max_iter = self.or("dtn.max_iter", dtn.max_iter)?;
        if dtn.max_iter == 0 {
            return Err(ConfigError::new("dtn.max_iter", "must be at least 1"));
        }
        let mode = self.or_parsed("dtn.mode", DtnMode::Full)?;

        let dt = self.positive("evolution.dt", 0.01)?;
        let kmax = (0..grid.len()).map(|i| grid.abs_xi(i)).fold(0.0, f64::max);
        if dt > 0.5 / kmax.sqrt() {
            return Err(ConfigError::new("evolution.dt", format!("{dt} exceeds the stability limit {:.6}", 0.5 / kmax.sqrt())));
        }
        let scheme = self.or_parsed("evolution.scheme", Scheme::Ifrk4)?;
        let t_final = self.positive("evolution.T", 1.0)?;
        let snapshot_every = self.or("evolution.snapshot_every", 0)?;
        let log_every: usize = self.or("evolution.log_every", 1)?;
        if log_every == 0 {
            return Err(ConfigError::new("evolution.log_every", "must be at least 1"));
        }

        let kind = self.or_parsed("data.kind", DataKind::Gaussian)?;
        let epsilon = self.or("data.epsilon", 0.01)?;
        check_amplitude("data.epsilon", epsilon)?;
        let mut data = InitialData::new(kind, epsilon);
        data.width = self.positive("data.width", data.width)?;
        data.phi_ratio = self.or("data.phi_ratio", data.phi_ratio)?;
        if !data.phi_ratio.is_finite() {
            return Err(ConfigError::new("data.phi_ratio", "must be finite"));
        }
        data.offset = self.or("data.offset", data.offset)?;
        if let Some(v) = self.raw.get("data.mode") {
            let parts: Vec<Option<i64>> = v.split(',').map(|s| s.trim().parse().ok()).collect();
            data.mode = match parts[..] {
                [Some(a), Some(b)] => (a, b),
                _ => return Err(ConfigError::new("data.mode", format!("expected `m1, m2`, got `{v}`"))),
            };
        }
        if kind == DataKind::Mode {
            let (a, b) = data.mode;
            if (a, b) == (0, 0) || a.abs().max(b.abs()) > third {
                return Err(ConfigError::new("data.mode", format!("mode must be nonzero and within the resolved band |m| <= {third}")));
            }
        }
        let seed = self.or("data.seed", 0u64)?;
        let noise = self.or("data.noise", 0.0)?;
        if !(noise >= 0.0) || noise > 1.0 {
            return Err(ConfigError::new("data.noise", format!("must lie in [0, 1], got {noise}")));
        }

        let epsilons = self.list("experiment.epsilons")?;
        if let Some(es) = &epsilons {
            if es.len() < 2 {
                return Err(ConfigError::new("experiment.epsilons", "a sweep needs at least two amplitudes"));
            }
            for &e in es {
                check_amplitude("experiment.epsilons", e)?;
                if e == 0.0 {
                    return Err(ConfigError::new("experiment.epsilons", "amplitudes in a sweep must be positive"));
                }
            }
        }
        let times = self.list("experiment.times")?;
        if let Some(ts) = &times {
            if ts.is_empty() || ts.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) || ts.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(ConfigError::new("experiment.times", "times must be finite, nonnegative and strictly increasing"));
            }
        }
        let k_band: Option<usize> = self.get("experiment.k_band")?;
        if k_band.is_some_and(|k| k == 0 || k as i64 > third) {
            return Err(ConfigError::new("experiment.k_band", format!("must lie in 1..={third} for n = {n}")));
        }
        let block = self.get("experiment.block")?;
        let fit_window = match self.list("experiment.fit_window")? {
            None => None,
            Some(w) if w.len() == 2 && w[0] >= 0.0 && w[1] > w[0] => Some([w[0], w[1]]),
            Some(_) => return Err(ConfigError::new("experiment.fit_window", "expected `start, end` with 0 <= start < end")),
        };
        let t_max = self.get::<f64>("experiment.T_max")?.map(|_| self.positive("experiment.T_max", 1.0)).transpose()?;
        let sample_dt = self.get::<f64>("experiment.sample_dt")?.map(|_| self.positive("experiment.sample_dt", 1.0)).transpose()?;

        Ok(ExperimentConfig {
            grid,
            dtn,
            mode,
            dt,
            scheme,
            t_final,
            snapshot_every,
            log_every,
            data,
            seed,
            noise,
            epsilons,
            times,
            k_band,
            block,
            fit_window,
            t_max,
            sample_dt,
        })
    }

    fn or_parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.raw.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|e: T::Err| ConfigError::new(key, e.to_string())),
        }
    }
}

fn check_amplitude(key: &str, e: f64) -> Result<(), ConfigError> {
    if !(0.0..=0.1).contains(&e) {
        return Err(ConfigError::new(key, format!("amplitude {e} outside the small-data range [0, 0.1]")));
    }
    Ok(())
}
