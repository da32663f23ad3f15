//! Argument parsing and dispatch for the `collective-decay` binary.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{parse_f64, parse_memory, RawConfig, RunConfig};
use super::evolve::cmd_evolve;
use super::figures::{cmd_figures, FigureMode, FigureOptions};
use super::positivity::cmd_positivity;
use super::sweep::{cmd_sweep, SweepAxis, SweepOptions};
use super::validate::{cmd_validate, ValidateOptions};
use super::{HarnessError, HarnessResult};

#[derive(Debug, Parser)]
#[command(
    name = "collective-decay",
    version,
    about = "Two-qubit decay into a shared thermal bath"
)]
pub struct Cli {
    /// Configuration file (`[section]` + `key = value`)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file (directory for `figures`); stdout when omitted
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Accept |a| > 1 and report the resulting non-positive map
    #[arg(long, global = true)]
    pub allow_nonpositive: bool,

    /// closed-form, printed or rk4
    #[arg(long, global = true, value_name = "ENGINE")]
    pub engine: Option<String>,

    /// RK4 step
    #[arg(long, global = true, value_name = "VALUE")]
    pub dt: Option<f64>,

    /// Override any config key, e.g. `--set bath.n=0.5` (repeatable)
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time series of the state and the three measures as CSV
    Evolve(ModelArgs),
    /// Curve data for the five figures, one CSV per curve
    Figures(FigureArgs),
    /// Measures and sudden-death time over a parameter grid
    Sweep(SweepArgs),
    /// Invariant grid and audit report
    Validate(ValidateArgs),
    /// Damping spectrum and geometric positivity condition
    Positivity(ModelArgs),
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    /// Werner parameter of the initial state
    #[arg(long)]
    pub werner: Option<String>,
    /// Symmetric X state `r11,r22,re_r23,im_r23,re_r14,im_r14`
    #[arg(long)]
    pub xstate: Option<String>,
    /// 4x4 initial matrix, 16 lines of `re im`
    #[arg(long)]
    pub matrix: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    /// Thermal occupation N
    #[arg(long)]
    pub n: Option<String>,
    /// hbar omega / k_B T instead of N
    #[arg(long)]
    pub hw_kt: Option<String>,
    /// Collective decay ratio
    #[arg(long)]
    pub a: Option<String>,
    /// Separation in units of the inverse wavenumber
    #[arg(long)]
    pub k0r: Option<String>,
    #[arg(long)]
    pub cos_mu_r: Option<String>,
    /// Memory rate or `markov`
    #[arg(long)]
    pub lambda: Option<String>,
    /// Phase of the Fisher observable
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub t_end: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    /// reduced or full (rk4 engine only)
    #[arg(long)]
    pub generator: Option<String>,
    /// Exchange coupling strength (full generator only)
    #[arg(long)]
    pub omega12: Option<String>,
    #[arg(long)]
    pub h_phi: Option<String>,
}

impl ModelArgs {
    fn apply(&self, raw: &mut RawConfig) -> HarnessResult<()> {
        let pairs = [
            ("state.werner", &self.werner),
            ("state.xstate", &self.xstate),
            ("state.matrix", &self.matrix),
            ("bath.gamma", &self.gamma),
            ("bath.n", &self.n),
            ("bath.hw_kt", &self.hw_kt),
            ("coupling.a", &self.a),
            ("coupling.k0r", &self.k0r),
            ("coupling.cos_mu_r", &self.cos_mu_r),
            ("memory.lambda", &self.lambda),
            ("measure.phi", &self.phi),
            ("grid.t_end", &self.t_end),
            ("grid.samples", &self.samples),
            ("run.generator", &self.generator),
            ("hamiltonian.omega12", &self.omega12),
            ("hamiltonian.phi", &self.h_phi),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure ids, e.g. `1,2,4` (default all)
    #[arg(long, value_delimiter = ',', default_values_t = vec![1u8, 2, 3, 4, 5])]
    pub which: Vec<u8>,
    /// printed or oracle
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub n: f64,
    /// Memory rate of figure 5 in units of gamma
    #[arg(long, default_value_t = 1.0)]
    pub lambda_over_gamma: f64,
    /// Horizon in units of 1/gamma
    #[arg(long, default_value_t = 5.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 501)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `name=v1,v2,...` over x, a, n, lambda or phi (one or two)
    #[arg(long = "axis")]
    pub axes: Vec<String>,
    #[arg(long)]
    pub probe_t: Option<String>,
    #[arg(long)]
    pub horizon: Option<String>,
    /// Samples used to bracket the sudden-death time
    #[arg(long)]
    pub death_samples: Option<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_delimiter = ',')]
    pub a_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Option<Vec<f64>>,
    /// Memory rates, `markov` allowed
    #[arg(long, value_delimiter = ',')]
    pub lambda_grid: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub x_grid: Option<Vec<f64>>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub random_cases: Option<usize>,
    /// Scale the reference decay rate by `1 + SCALE` to exercise the failure path
    #[arg(long, value_name = "SCALE", num_args = 0..=1, default_missing_value = "1e-6")]
    pub inject_fault: Option<f64>,
}

impl Cli {
    fn raw_config(&self) -> HarnessResult<RawConfig> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::load(p)?,
            None => RawConfig::default(),
        };
        for kv in &self.overrides {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                HarnessError::Usage(format!("--set expects KEY=VALUE, got '{kv}'"))
            })?;
            raw.set(k.trim(), v.trim())?;
        }
        Ok(raw)
    }

    /// Shared tail of the flag layering: global flags win over everything.
    fn apply_globals(&self, raw: &mut RawConfig) -> HarnessResult<()> {
        if let Some(e) = &self.engine {
            raw.set("run.engine", e)?;
        }
        if let Some(dt) = self.dt {
            raw.set("run.dt", &dt.to_string())?;
        }
        if let Some(out) = &self.out {
            raw.set("run.out", &out.to_string_lossy())?;
        }
        if self.allow_nonpositive {
            raw.set("run.allow_nonpositive", "true")?;
        }
        Ok(())
    }

    fn run_config(&self, model: &ModelArgs, require_state: bool) -> HarnessResult<RunConfig> {
        let mut raw = self.raw_config()?;
        model.apply(&mut raw)?;
        self.apply_globals(&mut raw)?;
        RunConfig::from_raw(&raw, require_state)
    }
}

/// Runs one command and returns the text destined for stdout.
pub fn run(cli: &Cli) -> HarnessResult<String> {
    match &cli.command {
        Command::Evolve(model) => {
            let cfg = cli.run_config(model, true)?;
            let csv = cmd_evolve(&cfg)?;
            Ok(if cfg.out.is_some() {
                String::new()
            } else {
                csv
            })
        }
        Command::Positivity(model) => {
            let cfg = cli.run_config(model, false)?;
            let text = cmd_positivity(&cfg)?;
            Ok(if cfg.out.is_some() {
                String::new()
            } else {
                text
            })
        }
        Command::Sweep(args) => {
            let mut raw = cli.raw_config()?;
            args.model.apply(&mut raw)?;
            for (key, value) in [
                ("sweep.probe_t", &args.probe_t),
                ("sweep.horizon", &args.horizon),
                ("sweep.samples", &args.death_samples),
            ] {
                if let Some(v) = value {
                    raw.set(key, v)?;
                }
            }
            let mut axis_specs: Vec<String> = args.axes.clone();
            if axis_specs.is_empty() {
                axis_specs.extend(
                    ["sweep.axis1", "sweep.axis2"]
                        .iter()
                        .filter_map(|k| raw.get(k).map(String::from)),
                );
            }
            cli.apply_globals(&mut raw)?;
            let cfg = RunConfig::from_raw(&raw, false)?;
            let axes = axis_specs
                .iter()
                .map(|s| SweepAxis::parse(s))
                .collect::<HarnessResult<Vec<_>>>()?;
            let defaults = SweepOptions::default();
            let opts = SweepOptions {
                probe_t: raw.f64("sweep.probe_t")?.unwrap_or(defaults.probe_t),
                horizon: raw.f64("sweep.horizon")?.unwrap_or(defaults.horizon),
                samples: match raw.get("sweep.samples") {
                    Some(v) => v.trim().parse().map_err(|_| {
                        HarnessError::Usage(format!("sweep.samples: '{v}' is not a count"))
                    })?,
                    None => defaults.samples,
                },
            };
            let csv = cmd_sweep(&cfg, &axes, &opts)?;
            Ok(if cfg.out.is_some() {
                String::new()
            } else {
                csv
            })
        }
        Command::Figures(args) => {
            let mode = match (&args.mode, cli.engine.as_deref()) {
                (Some(m), _) => FigureMode::parse(m)?,
                (None, None | Some("printed")) => FigureMode::Printed,
                (None, Some("closed-form")) => FigureMode::Oracle,
                (None, Some(other)) => {
                    return Err(HarnessError::Usage(format!(
                        "figures support printed or oracle curves, not '{other}'"
                    )))
                }
            };
            let raw = cli.raw_config()?;
            let opts = FigureOptions {
                x: args.x,
                gamma: raw.f64("bath.gamma")?.unwrap_or(1.0),
                n_occ: args.n,
                phi: raw
                    .f64("measure.phi")?
                    .unwrap_or(std::f64::consts::FRAC_PI_4),
                lambda_over_gamma: args.lambda_over_gamma,
                t_end: args.t_end,
                samples: args.samples,
            };
            let outdir = cli.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
            let written = cmd_figures(&args.which, mode, &opts, &outdir)?;
            Ok(written
                .iter()
                .map(|p| format!("{}\n", p.display()))
                .collect())
        }
        Command::Validate(args) => {
            let mut opts = ValidateOptions::default();
            if let Some(v) = &args.a_grid {
                opts.a_grid = v.clone();
            }
            if let Some(v) = &args.n_grid {
                opts.n_grid = v.clone();
            }
            if let Some(v) = &args.lambda_grid {
                opts.memory_grid = v
                    .iter()
                    .map(|s| parse_memory(s))
                    .collect::<HarnessResult<_>>()?;
            }
            if let Some(v) = &args.x_grid {
                opts.x_grid = v.clone();
            }
            if let Some(v) = args.t_end {
                opts.t_end = parse_f64("t_end", &v.to_string())?;
            }
            if let Some(v) = args.samples {
                opts.samples = v;
            }
            if let Some(v) = args.seed {
                opts.seed = v;
            }
            if let Some(v) = args.random_cases {
                opts.random_cases = v;
            }
            opts.fault_scale = args.inject_fault;
            let text = cmd_validate(&opts, cli.out.as_deref())?;
            Ok(if cli.out.is_some() {
                String::new()
            } else {
                text
            })
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Output goes to `stdout`, diagnostics to `stderr`.
pub fn main_with_args<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match run(&cli) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
