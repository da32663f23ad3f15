//! Flat `key = value` configuration with `[section]` headers.
//!
//! ```text
//! # Werner state decaying into a shared zero-temperature bath
//! [state]
//! werner = 0.5
//! [bath]
//! gamma = 1
//! n = 0
//! [coupling]
//! a = 0.75
//! [memory]
//! lambda = markov
//! [grid]
//! t_end = 5
//! samples = 501
//! ```
//!
//! Keys are addressed as `section.key`. Command-line flags are applied on
//! top of the file with [`RawConfig::set`], so flags win.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use super::{HarnessError, HarnessResult};
use crate::linalg::C64;
use crate::lindblad::ExchangeHamiltonian;
use crate::params::{collective_rate_ratio, BathSpec, GeometrySpec, MemorySpec};
use crate::xstate::SymXState;

const KNOWN_KEYS: &[&str] = &[
    "state.werner",
    "state.xstate",
    "state.matrix",
    "bath.gamma",
    "bath.n",
    "bath.hw_kt",
    "coupling.a",
    "coupling.k0r",
    "coupling.cos_mu_r",
    "memory.lambda",
    "measure.phi",
    "grid.t_end",
    "grid.samples",
    "run.engine",
    "run.dt",
    "run.out",
    "run.allow_nonpositive",
    "run.generator",
    "hamiltonian.omega12",
    "hamiltonian.phi",
    "sweep.axis1",
    "sweep.axis2",
    "sweep.probe_t",
    "sweep.horizon",
    "sweep.samples",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> HarnessResult<Self> {
        let mut cfg = Self::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let full = if section.is_empty() || key.contains('.') {
                key.to_string()
            } else {
                format!("{section}.{key}")
            };
            cfg.set(&full, value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> HarnessResult<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> HarnessResult<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(HarnessError::Usage(format!("unknown config key '{key}'")));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str) -> HarnessResult<Option<f64>> {
        self.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    fn f64_or(&self, key: &str, default: f64) -> HarnessResult<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }
}

pub fn parse_f64(key: &str, value: &str) -> HarnessResult<f64> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| HarnessError::Usage(format!("{key}: '{value}' is not a number")))?;
    if !v.is_finite() {
        return Err(HarnessError::Usage(format!("{key}: value must be finite")));
    }
    Ok(v)
}

/// `markov` or a positive inverse memory time.
pub fn parse_memory(value: &str) -> HarnessResult<MemorySpec> {
    if value.trim().eq_ignore_ascii_case("markov") {
        return Ok(MemorySpec::Markov);
    }
    let lambda = parse_f64("memory.lambda", value)?;
    MemorySpec::finite(lambda).map_err(|e| HarnessError::Usage(e.to_string()))
}

fn parse_bool(key: &str, value: &str) -> HarnessResult<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(HarnessError::Usage(format!(
            "{key}: '{other}' is not a boolean"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Werner(f64),
    XState(SymXState),
    MatrixFile(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingSource {
    Direct(f64),
    Geometry(GeometrySpec),
}

impl CouplingSource {
    pub fn ratio(&self) -> f64 {
        match self {
            Self::Direct(a) => *a,
            Self::Geometry(g) => collective_rate_ratio(g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    ClosedForm,
    Printed,
    Rk4,
}

impl Engine {
    pub fn parse(value: &str) -> HarnessResult<Self> {
        match value.trim() {
            "closed-form" => Ok(Self::ClosedForm),
            "printed" => Ok(Self::Printed),
            "rk4" => Ok(Self::Rk4),
            other => Err(HarnessError::Usage(format!(
                "unknown engine '{other}' (expected closed-form, printed or rk4)"
            ))),
        }
    }
}

/// Which equations the `rk4` engine integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// The four reduced X-state equations.
    Reduced,
    /// The full 4x4 global Lindblad generator.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub state: StateSource,
    pub bath: BathSpec,
    pub coupling: CouplingSource,
    pub memory: MemorySpec,
    pub phi: f64,
    pub t_end: f64,
    pub samples: usize,
    pub engine: Engine,
    pub dt: Option<f64>,
    pub out: Option<PathBuf>,
    pub allow_nonpositive: bool,
    pub generator: GeneratorKind,
    pub hamiltonian: Option<ExchangeHamiltonian>,
}

impl RunConfig {
    /// Interprets a raw configuration. `require_state` is false for
    /// commands that pick their own initial state.
    pub fn from_raw(raw: &RawConfig, require_state: bool) -> HarnessResult<Self> {
        let state = parse_state(raw, require_state)?;

        let gamma = raw.f64_or("bath.gamma", 1.0)?;
        let bath = match (raw.f64("bath.n")?, raw.f64("bath.hw_kt")?) {
            (Some(_), Some(_)) => {
                return Err(HarnessError::Usage(
                    "bath.n and bath.hw_kt are mutually exclusive".into(),
                ))
            }
            (_, Some(ratio)) => BathSpec::from_temperature_ratio(gamma, ratio),
            (n, None) => BathSpec::new(gamma, n.unwrap_or(0.0)),
        }
        .map_err(|e| HarnessError::Usage(e.to_string()))?;

        let coupling = match (
            raw.f64("coupling.a")?,
            raw.f64("coupling.k0r")?,
            raw.f64("coupling.cos_mu_r")?,
        ) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(HarnessError::Usage(
                    "give either coupling.a or the geometry (coupling.k0r, coupling.cos_mu_r)"
                        .into(),
                ))
            }
            (Some(a), None, None) => CouplingSource::Direct(a),
            (None, Some(k0r), cos) => CouplingSource::Geometry(
                GeometrySpec::new(k0r, cos.unwrap_or(0.0))
                    .map_err(|e| HarnessError::Usage(e.to_string()))?,
            ),
            (None, None, Some(_)) => {
                return Err(HarnessError::Usage(
                    "coupling.cos_mu_r needs coupling.k0r".into(),
                ))
            }
            (None, None, None) => CouplingSource::Direct(0.0),
        };

        let memory = raw
            .get("memory.lambda")
            .map(parse_memory)
            .transpose()?
            .unwrap_or(MemorySpec::Markov);
        let phi = raw.f64_or("measure.phi", FRAC_PI_4)?;
        let t_end = raw.f64_or("grid.t_end", 5.0)?;
        let samples = match raw.get("grid.samples") {
            Some(v) => v
                .trim()
                .parse::<usize>()
                .map_err(|_| HarnessError::Usage(format!("grid.samples: '{v}' is not a count")))?,
            None => 501,
        };
        if samples < 2 {
            return Err(HarnessError::Usage("grid.samples must be >= 2".into()));
        }
        if !(t_end > 0.0) {
            return Err(HarnessError::Usage("grid.t_end must be > 0".into()));
        }

        let engine = raw
            .get("run.engine")
            .map(Engine::parse)
            .transpose()?
            .unwrap_or(Engine::ClosedForm);
        let dt = raw.f64("run.dt")?;
        if let Some(dt) = dt {
            if !(dt > 0.0) {
                return Err(HarnessError::Usage("run.dt must be > 0".into()));
            }
        }
        let allow_nonpositive = raw
            .get("run.allow_nonpositive")
            .map(|v| parse_bool("run.allow_nonpositive", v))
            .transpose()?
            .unwrap_or(false);
        let generator = match raw.get("run.generator").map(str::trim) {
            None | Some("reduced") => GeneratorKind::Reduced,
            Some("full") => GeneratorKind::Full,
            Some(other) => {
                return Err(HarnessError::Usage(format!(
                    "unknown generator '{other}' (expected reduced or full)"
                )))
            }
        };
        let hamiltonian = match raw.f64("hamiltonian.omega12")? {
            Some(omega12) => Some(ExchangeHamiltonian {
                omega12,
                phi: raw.f64_or("hamiltonian.phi", 0.0)?,
            }),
            None => None,
        };

        Ok(Self {
            state,
            bath,
            coupling,
            memory,
            phi,
            t_end,
            samples,
            engine,
            dt,
            out: raw.get("run.out").map(PathBuf::from),
            allow_nonpositive,
            generator,
            hamiltonian,
        })
    }

    pub fn ratio(&self) -> f64 {
        self.coupling.ratio()
    }
}

fn parse_state(raw: &RawConfig, require_state: bool) -> HarnessResult<StateSource> {
    let sources: Vec<&str> = ["state.werner", "state.xstate", "state.matrix"]
        .into_iter()
        .filter(|k| raw.get(k).is_some())
        .collect();
    match sources.as_slice() {
        [] if require_state => Err(HarnessError::Usage(
            "no initial state: set one of state.werner, state.xstate or state.matrix".into(),
        )),
        [] => Ok(StateSource::Werner(0.5)),
        ["state.werner"] => Ok(StateSource::Werner(parse_f64(
            "state.werner",
            raw.get("state.werner").unwrap(),
        )?)),
        ["state.xstate"] => {
            let parts: Vec<f64> = raw
                .get("state.xstate")
                .unwrap()
                .split(',')
                .map(|p| parse_f64("state.xstate", p))
                .collect::<HarnessResult<_>>()?;
            if parts.len() != 6 {
                return Err(HarnessError::Usage(
                    "state.xstate expects r11,r22,re_r23,im_r23,re_r14,im_r14".into(),
                ));
            }
            let s = SymXState::new(
                parts[0],
                parts[1],
                C64::new(parts[2], parts[3]),
                C64::new(parts[4], parts[5]),
            )
            .map_err(|e| HarnessError::Usage(e.to_string()))?;
            Ok(StateSource::XState(s))
        }
        ["state.matrix"] => Ok(StateSource::MatrixFile(PathBuf::from(
            raw.get("state.matrix").unwrap(),
        ))),
        _ => Err(HarnessError::Usage(format!(
            "state sources are mutually exclusive, got {}",
            sources.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let raw = RawConfig::parse(
            "# comment\n[state]\nwerner = 0.5\n[bath]\ngamma = 2 # inline\nn=0.5\n[memory]\nlambda = markov\n",
        )
        .unwrap();
        let cfg = RunConfig::from_raw(&raw, true).unwrap();
        assert_eq!(cfg.state, StateSource::Werner(0.5));
        assert_eq!(cfg.bath.gamma(), 2.0);
        assert_eq!(cfg.bath.n_occ(), 0.5);
        assert_eq!(cfg.memory, MemorySpec::Markov);
        assert_eq!(cfg.samples, 501);
    }

    #[test]
    fn flags_override_file() {
        let mut raw = RawConfig::parse("[coupling]\na = 0.2\n").unwrap();
        raw.set("coupling.a", "0.9").unwrap();
        raw.set("state.werner", "0.3").unwrap();
        assert_eq!(RunConfig::from_raw(&raw, true).unwrap().ratio(), 0.9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RawConfig::parse("[bogus]\nkey = 1\n").is_err());
        assert!(RawConfig::parse("[state]\nwerner\n").is_err());
        let raw = RawConfig::parse("[state]\nwerner = 0.5\nxstate = 0.25,0.25,0,0,0,0\n").unwrap();
        assert!(RunConfig::from_raw(&raw, true).is_err());
        let raw =
            RawConfig::parse("[state]\nwerner = 0.5\n[grid]\nt_end = 0\nsamples = 2\n").unwrap();
        assert_eq!(RunConfig::from_raw(&raw, true).unwrap_err().exit_code(), 2);
        assert!(RunConfig::from_raw(&RawConfig::default(), true).is_err());
    }

    #[test]
    fn geometry_coupling() {
        let raw = RawConfig::parse("[coupling]\nk0r = 0.001\ncos_mu_r = 0.3\n").unwrap();
        let cfg = RunConfig::from_raw(&raw, false).unwrap();
        assert!((cfg.ratio() - 1.0).abs() < 1e-6);
    }
}
