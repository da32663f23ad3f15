//! `evolve`: time series of the state and its measures.

use std::path::Path;

use super::config::{Engine, GeneratorKind, RunConfig, StateSource};
use super::format::Csv;
use super::{uniform_grid, HarnessError, HarnessResult};
use crate::linalg::{ComplexMatrix, C64};
use crate::lindblad::{integrate_grid, integrate_reduced, DensityMatrix, GeneratorSpec, Mode};
use crate::measures::{
    measures_general, measures_xstate, werner_series_printed, FisherObservable, MeasureTriple,
};
use crate::params::damping_spectrum;
use crate::xstate::{from_werner, propagate, propagate_printed, SymXState, WernerParam};

pub const EVOLVE_HEADER: [&str; 11] = [
    "t",
    "gamma_t",
    "r11",
    "r22",
    "re_r23",
    "im_r23",
    "re_r14",
    "im_r14",
    "coherence_l1",
    "concurrence",
    "qfi",
];

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveRow {
    pub t: f64,
    pub gamma_t: f64,
    pub r11: f64,
    pub r22: f64,
    pub r23: C64,
    pub r14: C64,
    pub measures: MeasureTriple,
}

/// Parses a 4x4 matrix written as 16 `re im` lines in row-major order.
pub fn parse_matrix_text(text: &str) -> HarnessResult<DensityMatrix> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    if lines.len() != 16 {
        return Err(HarnessError::Usage(format!(
            "matrix file needs 16 're im' lines, found {}",
            lines.len()
        )));
    }
    let mut entries = Vec::with_capacity(16);
    for (k, line) in lines.iter().enumerate() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| {
                HarnessError::Usage(format!("matrix line {}: '{s}' is not a number", k + 1))
            })
        };
        match parts.as_slice() {
            [re, im] => entries.push(C64::new(parse(re)?, parse(im)?)),
            _ => {
                return Err(HarnessError::Usage(format!(
                    "matrix line {}: expected 're im'",
                    k + 1
                )))
            }
        }
    }
    let m = ComplexMatrix::new(4, entries).map_err(|e| HarnessError::Usage(e.to_string()))?;
    DensityMatrix::new(m).map_err(|e| HarnessError::Usage(format!("matrix file: {e}")))
}

pub fn load_matrix_file(path: &Path) -> HarnessResult<DensityMatrix> {
    parse_matrix_text(&std::fs::read_to_string(path)?)
}

fn xstate_row(t: f64, gamma: f64, s: &SymXState, measures: MeasureTriple) -> EvolveRow {
    EvolveRow {
        t,
        gamma_t: gamma * t,
        r11: s.r11,
        r22: s.r22,
        r23: s.r23,
        r14: s.r14,
        measures,
    }
}

pub fn evolve(cfg: &RunConfig) -> HarnessResult<Vec<EvolveRow>> {
    let a = cfg.ratio();
    let spectrum = damping_spectrum(&cfg.bath, a);
    if !spectrum.positive && !cfg.allow_nonpositive {
        return Err(HarnessError::Positivity(format!(
            "a = {a} gives damping eigenvalue {} < 0 (pass --allow-nonpositive to override)",
            spectrum.values[0]
        )));
    }
    let times = uniform_grid(cfg.t_end, cfg.samples);
    let gamma = cfg.bath.gamma();
    let obs = FisherObservable::new(cfg.phi);

    let full_generator = cfg.engine == Engine::Rk4
        && (cfg.generator == GeneratorKind::Full
            || matches!(cfg.state, StateSource::MatrixFile(_)));
    if full_generator {
        let rho0 = match &cfg.state {
            StateSource::Werner(x) => from_werner(WernerParam::new(*x)?).to_density()?,
            StateSource::XState(s) => s.to_density()?,
            StateSource::MatrixFile(p) => load_matrix_file(p)?,
        };
        let mut spec =
            GeneratorSpec::new(cfg.bath, a, cfg.memory, Mode::Global, cfg.allow_nonpositive)?;
        if let Some(h) = cfg.hamiltonian {
            spec = spec.with_hamiltonian(h);
        }
        let dt = cfg.dt.unwrap_or_else(|| spec.default_dt());
        let traj = integrate_grid(&spec, &rho0, &times, dt)?;
        return traj
            .times
            .iter()
            .zip(&traj.states)
            .map(|(&t, rho)| {
                let m = rho.matrix();
                Ok(EvolveRow {
                    t,
                    gamma_t: gamma * t,
                    r11: m[(0, 0)].re,
                    r22: m[(1, 1)].re,
                    r23: m[(1, 2)],
                    r14: m[(0, 3)],
                    measures: measures_general(rho, &obs)?,
                })
            })
            .collect();
    }

    if cfg.hamiltonian.is_some() {
        return Err(HarnessError::Usage(
            "the exchange Hamiltonian is only supported by the rk4 engine with the full generator"
                .into(),
        ));
    }
    let s0 = match &cfg.state {
        StateSource::Werner(x) => from_werner(WernerParam::new(*x)?),
        StateSource::XState(s) => *s,
        StateSource::MatrixFile(p) => SymXState::from_density(&load_matrix_file(p)?)
            .map_err(|e| HarnessError::Usage(format!("{e}; general matrices need --engine rk4")))?,
    };

    let rows = match cfg.engine {
        Engine::ClosedForm => times
            .iter()
            .map(|&t| {
                let s = propagate(&s0, &cfg.bath, a, cfg.memory, t)?;
                Ok(xstate_row(t, gamma, &s, measures_xstate(&s, &obs)))
            })
            .collect::<HarnessResult<Vec<_>>>()?,
        Engine::Printed => {
            let printed_measures = match cfg.state {
                StateSource::Werner(x) => Some(werner_series_printed(
                    x, &cfg.bath, a, cfg.memory, cfg.phi, &times,
                )?),
                _ => None,
            };
            times
                .iter()
                .enumerate()
                .map(|(k, &t)| {
                    let s = propagate_printed(&s0, &cfg.bath, a, cfg.memory, t)?;
                    let m = match &printed_measures {
                        Some(series) => series[k],
                        None => measures_xstate(&s, &obs),
                    };
                    Ok(xstate_row(t, gamma, &s, m))
                })
                .collect::<HarnessResult<Vec<_>>>()?
        }
        Engine::Rk4 => {
            let dt = cfg.dt.unwrap_or(1e-3 / cfg.bath.kappa());
            let states = integrate_reduced(&cfg.bath, a, cfg.memory, &s0, &times, dt)?;
            times
                .iter()
                .zip(states)
                .map(|(&t, s)| xstate_row(t, gamma, &s, measures_xstate(&s, &obs)))
                .collect()
        }
    };
    Ok(rows)
}

pub fn rows_to_csv(rows: &[EvolveRow]) -> String {
    let mut csv = Csv::new(&EVOLVE_HEADER);
    for r in rows {
        csv.numeric_row(&[
            r.t,
            r.gamma_t,
            r.r11,
            r.r22,
            r.r23.re,
            r.r23.im,
            r.r14.re,
            r.r14.im,
            r.measures.coherence_l1,
            r.measures.concurrence,
            r.measures.qfi,
        ]);
    }
    csv.finish()
}

/// Runs `evolve` and writes the CSV to `cfg.out` (returned as well).
pub fn cmd_evolve(cfg: &RunConfig) -> HarnessResult<String> {
    let csv = rows_to_csv(&evolve(cfg)?);
    if let Some(path) = &cfg.out {
        std::fs::write(path, &csv)?;
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_text_parsing() {
        let mut text = String::new();
        for i in 0..4 {
            for j in 0..4 {
                text.push_str(if i == j { "0.25 0\n" } else { "0 0\n" });
            }
        }
        let rho = parse_matrix_text(&text).unwrap();
        assert_eq!(rho.matrix()[(2, 2)].re, 0.25);
        assert!(parse_matrix_text("1 0\n").is_err());
        assert!(parse_matrix_text(&text.replace("0.25 0\n", "0.5 0\n")).is_err());
    }
}
