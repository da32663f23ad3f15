//! Curve data behind the five published figures.
//!
//! Figures 1-3 plot coherence, concurrence and Fisher information of the
//! `x = 1/2` Werner state for `a` in `{0, 1/2, 3/4, 1}`; figure 4 compares
//! the three measures normalised to their initial values at `a = 1/2`;
//! figure 5 repeats figures 1-3 with a finite bath memory.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use super::format::Csv;
use super::{uniform_grid, HarnessError, HarnessResult};
use crate::measures::{werner_series_oracle, werner_series_printed, MeasureTriple};
use crate::params::{BathSpec, MemorySpec};

pub const FIGURE_RATIOS: [f64; 4] = [0.0, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureMode {
    /// Published closed forms.
    Printed,
    /// Measures of the exactly propagated state.
    Oracle,
}

impl FigureMode {
    pub fn parse(s: &str) -> HarnessResult<Self> {
        match s {
            "printed" => Ok(Self::Printed),
            "oracle" => Ok(Self::Oracle),
            other => Err(HarnessError::Usage(format!(
                "unknown figure mode '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Coherence,
    Concurrence,
    Qfi,
}

impl Measure {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Coherence => "coherence",
            Self::Concurrence => "concurrence",
            Self::Qfi => "qfi",
        }
    }

    pub fn pick(&self, m: &MeasureTriple) -> f64 {
        match self {
            Self::Coherence => m.coherence_l1,
            Self::Concurrence => m.concurrence,
            Self::Qfi => m.qfi,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FigureOptions {
    pub x: f64,
    pub gamma: f64,
    pub n_occ: f64,
    pub phi: f64,
    /// Memory rate for figure 5, in units of `gamma`.
    pub lambda_over_gamma: f64,
    pub t_end: f64,
    pub samples: usize,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            x: 0.5,
            gamma: 1.0,
            n_occ: 0.0,
            phi: FRAC_PI_4,
            lambda_over_gamma: 1.0,
            t_end: 5.0,
            samples: 501,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub figure: u8,
    pub measure: Measure,
    pub a: f64,
    pub normalized: bool,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Curve {
    pub fn file_name(&self) -> String {
        format!(
            "fig{}_{}{}_a{:.2}.csv",
            self.figure,
            self.measure.name(),
            if self.normalized { "_norm" } else { "" },
            self.a
        )
    }

    pub fn to_csv(&self, gamma: f64) -> String {
        let mut csv = Csv::new(&["t", "gamma_t", "value"]);
        for (&t, &v) in self.times.iter().zip(&self.values) {
            csv.numeric_row(&[t, gamma * t, v]);
        }
        csv.finish()
    }
}

fn series(
    mode: FigureMode,
    opts: &FigureOptions,
    a: f64,
    memory: MemorySpec,
    times: &[f64],
) -> HarnessResult<Vec<MeasureTriple>> {
    let bath = BathSpec::new(opts.gamma, opts.n_occ)?;
    Ok(match mode {
        FigureMode::Printed => werner_series_printed(opts.x, &bath, a, memory, opts.phi, times)?,
        FigureMode::Oracle => werner_series_oracle(opts.x, &bath, a, memory, opts.phi, times)?,
    })
}

fn curve(
    figure: u8,
    measure: Measure,
    a: f64,
    times: &[f64],
    data: &[MeasureTriple],
    normalized: bool,
) -> Curve {
    let mut values: Vec<f64> = data.iter().map(|m| measure.pick(m)).collect();
    if normalized {
        let v0 = values[0];
        for v in &mut values {
            *v = if v0 != 0.0 { *v / v0 } else { 0.0 };
        }
    }
    Curve {
        figure,
        measure,
        a,
        normalized,
        times: times.to_vec(),
        values,
    }
}

/// All curves of one figure (`which` in `1..=5`).
pub fn figure_curves(
    which: u8,
    mode: FigureMode,
    opts: &FigureOptions,
) -> HarnessResult<Vec<Curve>> {
    if opts.samples < 2 || !(opts.t_end > 0.0) {
        return Err(HarnessError::Usage(
            "figure grid needs t_end > 0 and at least 2 samples".into(),
        ));
    }
    let times = uniform_grid(opts.t_end / opts.gamma, opts.samples);
    let mut curves = Vec::new();
    match which {
        1..=3 => {
            let measure =
                [Measure::Coherence, Measure::Concurrence, Measure::Qfi][which as usize - 1];
            for a in FIGURE_RATIOS {
                let data = series(mode, opts, a, MemorySpec::Markov, &times)?;
                curves.push(curve(which, measure, a, &times, &data, false));
            }
        }
        4 => {
            let data = series(mode, opts, 0.5, MemorySpec::Markov, &times)?;
            for measure in [Measure::Coherence, Measure::Qfi, Measure::Concurrence] {
                curves.push(curve(4, measure, 0.5, &times, &data, true));
            }
        }
        5 => {
            let memory = MemorySpec::finite(opts.lambda_over_gamma * opts.gamma)?;
            for a in FIGURE_RATIOS {
                let data = series(mode, opts, a, memory, &times)?;
                for measure in [Measure::Coherence, Measure::Qfi, Measure::Concurrence] {
                    curves.push(curve(5, measure, a, &times, &data, false));
                }
            }
        }
        other => {
            return Err(HarnessError::Usage(format!(
                "unknown figure id {other} (expected 1-5)"
            )))
        }
    }
    Ok(curves)
}

/// Writes one CSV per curve into `outdir` and returns the paths written.
pub fn cmd_figures(
    which: &[u8],
    mode: FigureMode,
    opts: &FigureOptions,
    outdir: &Path,
) -> HarnessResult<Vec<PathBuf>> {
    let mut all = Vec::new();
    for &w in which {
        all.extend(figure_curves(w, mode, opts)?);
    }
    std::fs::create_dir_all(outdir)?;
    let mut written = Vec::new();
    for c in &all {
        let path = outdir.join(c.file_name());
        std::fs::write(&path, c.to_csv(opts.gamma))?;
        written.push(path);
    }
    Ok(written)
}
