//! `sweep`: measures at a probe time and the entanglement sudden-death time
//! over a one- or two-dimensional parameter grid.

use super::config::{parse_f64, parse_memory, Engine, RunConfig, StateSource};
use super::evolve::load_matrix_file;
use super::format::{g12, Csv};
use super::{uniform_grid, HarnessError, HarnessResult};
use crate::measures::{
    concurrence_margin, measures_xstate, werner_printed_at, werner_printed_concurrence_margin,
    FisherObservable, MeasureTriple,
};
use crate::params::{BathSpec, MemorySpec};
use crate::xstate::{
    from_werner, integrated_rate, propagate, propagate_printed, SymXState, WernerParam,
};

const DEATH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    X,
    A,
    N,
    Lambda,
    Phi,
}

impl SweepParam {
    pub fn parse(name: &str) -> HarnessResult<Self> {
        match name.trim() {
            "x" => Ok(Self::X),
            "a" => Ok(Self::A),
            "n" | "N" => Ok(Self::N),
            "lambda" => Ok(Self::Lambda),
            "phi" => Ok(Self::Phi),
            other => Err(HarnessError::Usage(format!(
                "unknown sweep axis '{other}' (expected x, a, n, lambda or phi)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::X => "x",
            Self::A => "a",
            Self::N => "n",
            Self::Lambda => "lambda",
            Self::Phi => "phi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisValue {
    Num(f64),
    Markov,
}

impl AxisValue {
    fn render(&self) -> String {
        match self {
            Self::Num(v) => g12(*v),
            Self::Markov => "markov".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<AxisValue>,
}

impl SweepAxis {
    /// Parses `name=v1,v2,...`; `lambda` also accepts `markov`.
    pub fn parse(spec: &str) -> HarnessResult<Self> {
        let (name, list) = spec.split_once(['=', ':']).ok_or_else(|| {
            HarnessError::Usage(format!("sweep axis '{spec}': expected name=v1,v2,..."))
        })?;
        let param = SweepParam::parse(name)?;
        let values = list
            .split(',')
            .map(|v| match param {
                SweepParam::Lambda => Ok(match parse_memory(v)? {
                    MemorySpec::Markov => AxisValue::Markov,
                    MemorySpec::Finite(l) => AxisValue::Num(l),
                }),
                _ => parse_f64(param.name(), v).map(AxisValue::Num),
            })
            .collect::<HarnessResult<Vec<_>>>()?;
        if values.len() < 2 {
            return Err(HarnessError::Usage(format!(
                "sweep axis '{}' needs at least 2 points",
                param.name()
            )));
        }
        Ok(Self { param, values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub probe_t: f64,
    pub horizon: f64,
    pub samples: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            probe_t: 1.0,
            horizon: 10.0,
            samples: 1001,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub coords: Vec<AxisValue>,
    pub measures: MeasureTriple,
    /// First time the concurrence reaches zero; 0 if it starts at zero and
    /// -1 if it stays positive over the horizon.
    pub death_time: f64,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    werner: Option<f64>,
    state: SymXState,
    bath: BathSpec,
    a: f64,
    memory: MemorySpec,
    phi: f64,
}

impl Cell {
    fn measures_at(&self, engine: Engine, t: f64) -> HarnessResult<(MeasureTriple, f64)> {
        let obs = FisherObservable::new(self.phi);
        match (engine, self.werner) {
            (Engine::Printed, Some(x)) => {
                let k = integrated_rate(&self.bath, self.memory, t)?;
                Ok((
                    werner_printed_at(x, self.a, self.phi, k),
                    werner_printed_concurrence_margin(x, self.a, k),
                ))
            }
            (Engine::Printed, None) => {
                let s = propagate_printed(&self.state, &self.bath, self.a, self.memory, t)?;
                Ok((measures_xstate(&s, &obs), concurrence_margin(&s)))
            }
            _ => {
                let s = propagate(&self.state, &self.bath, self.a, self.memory, t)?;
                Ok((measures_xstate(&s, &obs), concurrence_margin(&s)))
            }
        }
    }
}

/// First zero of `margin` on `[0, horizon]`, located by bisection inside the
/// first sign-change bracket of a uniform sample.
pub fn sudden_death_time(
    mut margin: impl FnMut(f64) -> HarnessResult<f64>,
    horizon: f64,
    samples: usize,
) -> HarnessResult<f64> {
    if margin(0.0)? <= 0.0 {
        return Ok(0.0);
    }
    let grid = uniform_grid(horizon, samples.max(2));
    let mut prev = 0.0;
    for &t in &grid[1..] {
        if margin(t)? <= 0.0 {
            let (mut lo, mut hi) = (prev, t);
            while hi - lo > DEATH_TOL {
                let mid = 0.5 * (lo + hi);
                if margin(mid)? <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        prev = t;
    }
    Ok(-1.0)
}

pub fn sweep(
    base: &RunConfig,
    axes: &[SweepAxis],
    opts: &SweepOptions,
) -> HarnessResult<Vec<SweepRow>> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(HarnessError::Usage("sweep needs one or two axes".into()));
    }
    if axes.len() == 2 && axes[0].param == axes[1].param {
        return Err(HarnessError::Usage("sweep axes must differ".into()));
    }
    if base.engine == Engine::Rk4 {
        return Err(HarnessError::Usage(
            "sweep supports the closed-form and printed engines".into(),
        ));
    }
    if !(opts.horizon > 0.0) || !(opts.probe_t >= 0.0) {
        return Err(HarnessError::Usage(
            "sweep needs horizon > 0 and probe time >= 0".into(),
        ));
    }
    let sweeps_x = axes.iter().any(|ax| ax.param == SweepParam::X);
    let (werner, state) = match &base.state {
        StateSource::Werner(x) => (Some(*x), None),
        StateSource::XState(s) if !sweeps_x => (None, Some(*s)),
        StateSource::MatrixFile(p) if !sweeps_x => {
            (None, Some(SymXState::from_density(&load_matrix_file(p)?)?))
        }
        _ => {
            return Err(HarnessError::Usage(
                "an x axis requires a Werner initial state".into(),
            ))
        }
    };

    let combos: Vec<Vec<AxisValue>> = match axes {
        [one] => one.values.iter().map(|v| vec![*v]).collect(),
        [first, second] => first
            .values
            .iter()
            .flat_map(|u| second.values.iter().map(move |v| vec![*u, *v]))
            .collect(),
        _ => unreachable!(),
    };

    let mut rows = Vec::with_capacity(combos.len());
    for coords in combos {
        let mut x = werner;
        let mut a = base.ratio();
        let mut n = base.bath.n_occ();
        let mut memory = base.memory;
        let mut phi = base.phi;
        for (axis, value) in axes.iter().zip(&coords) {
            match (axis.param, *value) {
                (SweepParam::X, AxisValue::Num(v)) => x = Some(v),
                (SweepParam::A, AxisValue::Num(v)) => a = v,
                (SweepParam::N, AxisValue::Num(v)) => n = v,
                (SweepParam::Lambda, AxisValue::Num(v)) => memory = MemorySpec::finite(v)?,
                (SweepParam::Lambda, AxisValue::Markov) => memory = MemorySpec::Markov,
                (SweepParam::Phi, AxisValue::Num(v)) => phi = v,
                (p, AxisValue::Markov) => {
                    return Err(HarnessError::Usage(format!(
                        "'markov' is not a value for axis {}",
                        p.name()
                    )))
                }
            }
        }
        let state = match x {
            Some(x) => from_werner(WernerParam::new(x)?),
            None => state.expect("non-Werner sweeps carry an explicit state"),
        };
        let cell = Cell {
            werner: x,
            state,
            bath: BathSpec::new(base.bath.gamma(), n)?,
            a,
            memory,
            phi,
        };
        let (measures, _) = cell.measures_at(base.engine, opts.probe_t)?;
        let death_time = sudden_death_time(
            |t| cell.measures_at(base.engine, t).map(|(_, m)| m),
            opts.horizon,
            opts.samples,
        )?;
        rows.push(SweepRow {
            coords,
            measures,
            death_time,
        });
    }
    Ok(rows)
}

pub fn rows_to_csv(axes: &[SweepAxis], rows: &[SweepRow]) -> String {
    let mut header: Vec<&str> = axes.iter().map(|a| a.param.name()).collect();
    header.extend(["coherence_l1", "concurrence", "qfi", "death_time"]);
    let mut csv = Csv::new(&header);
    for r in rows {
        let mut cells: Vec<String> = r.coords.iter().map(AxisValue::render).collect();
        cells.extend(
            [
                r.measures.coherence_l1,
                r.measures.concurrence,
                r.measures.qfi,
                r.death_time,
            ]
            .iter()
            .map(|&v| g12(v)),
        );
        csv.row(cells);
    }
    csv.finish()
}

pub fn cmd_sweep(
    base: &RunConfig,
    axes: &[SweepAxis],
    opts: &SweepOptions,
) -> HarnessResult<String> {
    let csv = rows_to_csv(axes, &sweep(base, axes, opts)?);
    if let Some(path) = &base.out {
        std::fs::write(path, &csv)?;
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        let ax = SweepAxis::parse("lambda=markov,2").unwrap();
        assert_eq!(ax.values, vec![AxisValue::Markov, AxisValue::Num(2.0)]);
        assert!(SweepAxis::parse("a=0.5").is_err());
        assert!(SweepAxis::parse("q=1,2").is_err());
        assert!(SweepAxis::parse("a").is_err());
    }

    #[test]
    fn death_time_of_linear_margin() {
        let t = sudden_death_time(|t| Ok(0.3 - t), 1.0, 11).unwrap();
        assert!((t - 0.3).abs() < 1e-6);
        assert_eq!(sudden_death_time(|_| Ok(-1.0), 1.0, 11).unwrap(), 0.0);
        assert_eq!(sudden_death_time(|_| Ok(1.0), 1.0, 11).unwrap(), -1.0);
    }
}
