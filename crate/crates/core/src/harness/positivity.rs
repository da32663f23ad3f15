//! `positivity`: damping spectrum and the geometric form of the condition.

use std::fmt::Write as _;

use super::config::{CouplingSource, RunConfig};
use super::format::g12;
use super::{HarnessError, HarnessResult};
use crate::error::Error;
use crate::params::{damping_spectrum, geometry_positivity, DampingSpectrum, GeometryPositivity};

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub gamma: f64,
    pub n_occ: f64,
    pub a: f64,
    pub spectrum: DampingSpectrum,
    /// Present when the coupling was given as a geometry.
    pub geometry: Option<GeometryPositivity>,
}

impl PositivityReport {
    pub fn verdict(&self) -> &'static str {
        if self.spectrum.positive {
            "POSITIVE"
        } else {
            "NEGATIVE"
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "gamma={}", g12(self.gamma));
        let _ = writeln!(out, "n={}", g12(self.n_occ));
        let _ = writeln!(out, "a={}", g12(self.a));
        for (k, v) in self.spectrum.values.iter().enumerate() {
            let _ = writeln!(out, "eigenvalue{}={}", k + 1, g12(*v));
        }
        match &self.geometry {
            Some(g) => {
                let _ = writeln!(out, "geometry.r={}", g12(g.r));
                let _ = writeln!(out, "geometry.theta={}", g12(g.theta));
                let _ = writeln!(out, "geometry.lhs={}", g12(g.lhs));
                let _ = writeln!(out, "geometry.bound={}", g12(2.0 / 3.0));
                let _ = writeln!(out, "geometry.holds={}", g.holds);
            }
            None => {
                let _ = writeln!(out, "geometry=none");
            }
        }
        let _ = writeln!(out, "verdict={}", self.verdict());
        out
    }
}

pub fn positivity(cfg: &RunConfig) -> HarnessResult<PositivityReport> {
    let a = cfg.ratio();
    let geometry = match &cfg.coupling {
        CouplingSource::Direct(_) => None,
        CouplingSource::Geometry(g) => Some(geometry_positivity(g).map_err(|e| match e {
            Error::DegenerateGeometry => {
                HarnessError::Usage("degenerate geometry: dipoles along the separation".into())
            }
            other => HarnessError::Model(other),
        })?),
    };
    let spectrum = damping_spectrum(&cfg.bath, a);
    if !spectrum.positive && !cfg.allow_nonpositive {
        return Err(HarnessError::Positivity(format!(
            "a = {} gives damping eigenvalue {} < 0 (pass --allow-nonpositive to report anyway)",
            g12(a),
            g12(spectrum.values[0])
        )));
    }
    Ok(PositivityReport {
        gamma: cfg.bath.gamma(),
        n_occ: cfg.bath.n_occ(),
        a,
        spectrum,
        geometry,
    })
}

pub fn cmd_positivity(cfg: &RunConfig) -> HarnessResult<String> {
    let text = positivity(cfg)?.render();
    if let Some(path) = &cfg.out {
        std::fs::write(path, &text)?;
    }
    Ok(text)
}
