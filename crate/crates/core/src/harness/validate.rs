//! `validate`: the invariant grid and the audit of the published formulas.
//!
//! The report is a sequence of records, each opened by a `case=<id>` line and
//! followed by `key=value` lines. Records of kind `PASS` carry a `status`
//! and decide the exit code; records of kind `INFO` quantify known
//! discrepancies and never fail.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::g12;
use super::sweep::sudden_death_time;
use super::{uniform_grid, HarnessError, HarnessResult};
use crate::linalg::{herm_eig, C64};
use crate::lindblad::{
    apply_generator, integrate_grid, integrate_reduced, monotonicity_witness, ode_reduced,
    DensityMatrix, GeneratorSpec, Mode,
};
use crate::measures::{
    concurrence_general, concurrence_margin, concurrence_xstate, measures_xstate, qfi_spectral,
    qfi_xstate, werner_printed_at, werner_series_oracle, werner_series_printed, FisherObservable,
    MeasureTriple,
};
use crate::params::{
    collective_rate_ratio, damping_matrix, damping_spectrum, geometry_positivity, memory_theta,
    BathSpec, GeometrySpec, MemorySpec,
};
use crate::xstate::{from_werner, propagate, propagate_printed, SymXState, WernerParam};

pub const ORACLE_TOL: f64 = 1e-10;
pub const MARKOV_TOL: f64 = 1e-12;
pub const FREEZE_TOL: f64 = 1e-10;
pub const FIXED_POINT_TOL: f64 = 1e-14;
pub const QFI_TOL: f64 = 1e-10;
pub const EIGEN_FLOOR: f64 = -1e-10;
pub const DEFAULT_SEED: u64 = 0x005e_edc0_11ec_710e;

/// Printed r23 at a = 1, x = 1/2 tends to -5/24; the exact state stays at -1/4.
pub const R23_ASYMPTOTE_GAP: f64 = 0.25 - 5.0 / 24.0;

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    pub a_grid: Vec<f64>,
    pub n_grid: Vec<f64>,
    pub memory_grid: Vec<MemorySpec>,
    pub x_grid: Vec<f64>,
    pub gamma: f64,
    pub t_end: f64,
    pub samples: usize,
    pub phi: f64,
    /// Test hook: the RK4 reference runs with `gamma * (1 + fault)`.
    pub fault_scale: Option<f64>,
    pub random_cases: usize,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            a_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            n_grid: vec![0.0, 0.5, 2.0],
            memory_grid: vec![
                MemorySpec::Markov,
                MemorySpec::Finite(10.0),
                MemorySpec::Finite(1.0),
                MemorySpec::Finite(0.1),
            ],
            x_grid: vec![-0.3, 0.2, 0.5, 1.0],
            gamma: 1.0,
            t_end: 5.0,
            samples: 501,
            phi: FRAC_PI_4,
            fault_scale: None,
            random_cases: 1000,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    Pass,
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub id: String,
    pub kind: RecordKind,
    /// Meaningful for `Pass` records only.
    pub passed: bool,
    pub fields: Vec<(String, String)>,
}

impl Record {
    fn pass(id: impl Into<String>, passed: bool) -> Self {
        Self {
            id: id.into(),
            kind: RecordKind::Pass,
            passed,
            fields: Vec::new(),
        }
    }

    fn info(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind: RecordKind::Info,
            passed: true,
            fields: Vec::new(),
        }
    }

    fn num(mut self, key: &str, v: f64) -> Self {
        self.fields.push((key.into(), g12(v)));
        self
    }

    fn text(mut self, key: &str, v: impl ToString) -> Self {
        self.fields.push((key.into(), v.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(|v| v.parse().ok())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub seed: u64,
    pub records: Vec<Record>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn record(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed={}", self.seed);
        let _ = writeln!(out, "records={}", self.records.len());
        let _ = writeln!(out, "failures={}", self.failures().count());
        for r in &self.records {
            let _ = writeln!(out);
            let _ = writeln!(out, "case={}", r.id);
            match r.kind {
                RecordKind::Pass => {
                    let _ = writeln!(out, "kind=PASS");
                    let _ = writeln!(out, "status={}", if r.passed { "pass" } else { "fail" });
                }
                RecordKind::Info => {
                    let _ = writeln!(out, "kind=INFO");
                }
            }
            for (k, v) in &r.fields {
                let _ = writeln!(out, "{k}={v}");
            }
        }
        out
    }
}

fn memory_label(m: MemorySpec) -> String {
    match m {
        MemorySpec::Markov => "markov".into(),
        MemorySpec::Finite(l) => g12(l),
    }
}

fn werner(x: f64) -> HarnessResult<SymXState> {
    Ok(from_werner(WernerParam::new(x)?))
}

fn min_eigenvalue(s: &SymXState) -> f64 {
    (s.r11 - s.r14.norm()).min(s.r22 - s.r23.norm())
}

fn component_diffs(p: &SymXState, q: &SymXState) -> [f64; 4] {
    [
        (p.r11 - q.r11).abs(),
        (p.r22 - q.r22).abs(),
        (p.r23 - q.r23).norm(),
        (p.r14 - q.r14).norm(),
    ]
}

fn measure_diffs(p: &MeasureTriple, q: &MeasureTriple) -> [f64; 3] {
    [
        (p.coherence_l1 - q.coherence_l1).abs(),
        (p.concurrence - q.concurrence).abs(),
        (p.qfi - q.qfi).abs(),
    ]
}

fn fold_max<const K: usize>(acc: &mut [f64; K], v: [f64; K]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a.max(b);
    }
}

/// One cell of the oracle grid: closed form against RK4 on the reduced
/// equations, positivity minima, and the printed-formula deviations.
fn oracle_case(
    opts: &ValidateOptions,
    a: f64,
    n: f64,
    memory: MemorySpec,
    x: f64,
) -> HarnessResult<Record> {
    let bath = BathSpec::new(opts.gamma, n)?;
    let ref_bath = BathSpec::new(opts.gamma * (1.0 + opts.fault_scale.unwrap_or(0.0)), n)?;
    let times = uniform_grid(opts.t_end / opts.gamma, opts.samples);
    let s0 = werner(x)?;
    let obs = FisherObservable::new(opts.phi);

    let rk4 = integrate_reduced(&ref_bath, a, memory, &s0, &times, 1e-3 / bath.kappa())?;
    let printed_measures = werner_series_printed(x, &bath, a, memory, opts.phi, &times)?;

    let mut max_err = 0.0f64;
    let mut min_eig_closed = f64::INFINITY;
    let mut min_eig_rk4 = f64::INFINITY;
    let mut comp_dev = [0.0; 4];
    let mut measure_dev = [0.0; 3];
    for (k, &t) in times.iter().enumerate() {
        let exact = propagate(&s0, &bath, a, memory, t)?;
        let printed = propagate_printed(&s0, &bath, a, memory, t)?;
        max_err = max_err.max(exact.max_abs_diff(&rk4[k]));
        min_eig_closed = min_eig_closed.min(min_eigenvalue(&exact));
        min_eig_rk4 = min_eig_rk4.min(min_eigenvalue(&rk4[k]));
        fold_max(&mut comp_dev, component_diffs(&printed, &exact));
        fold_max(
            &mut measure_dev,
            measure_diffs(&printed_measures[k], &measures_xstate(&exact, &obs)),
        );
    }
    let passed =
        max_err <= ORACLE_TOL && min_eig_closed >= EIGEN_FLOOR && min_eig_rk4 >= EIGEN_FLOOR;
    Ok(Record::pass(
        format!(
            "oracle.a{}.n{}.lambda_{}.x{}",
            g12(a),
            g12(n),
            memory_label(memory),
            g12(x)
        ),
        passed,
    )
    .num("a", a)
    .num("n", n)
    .text("lambda", memory_label(memory))
    .num("x", x)
    .num("max_abs_error", max_err)
    .num("tolerance", ORACLE_TOL)
    .num("min_eigenvalue_closed_form", min_eig_closed)
    .num("min_eigenvalue_rk4", min_eig_rk4)
    .num("printed_dev_r11", comp_dev[0])
    .num("printed_dev_r22", comp_dev[1])
    .num("printed_dev_r23", comp_dev[2])
    .num("printed_dev_r14", comp_dev[3])
    .num("printed_dev_coherence", measure_dev[0])
    .num("printed_dev_concurrence", measure_dev[1])
    .num("printed_dev_qfi", measure_dev[2]))
}

fn markov_reduction(opts: &ValidateOptions) -> HarnessResult<Record> {
    let times = uniform_grid(opts.t_end / opts.gamma, opts.samples);
    let mut worst = 0.0f64;
    for &n in &opts.n_grid {
        let bath = BathSpec::new(opts.gamma, n)?;
        for &x in &opts.x_grid {
            let s0 = werner(x)?;
            for &t in &times {
                let s = propagate(&s0, &bath, 0.0, MemorySpec::Markov, t)?;
                let expect = s0.r23 * (-bath.kappa() * t).exp();
                worst = worst.max((s.r23 - expect).norm());
            }
        }
    }
    Ok(Record::pass("markov_reduction", worst <= MARKOV_TOL)
        .num("max_abs_error", worst)
        .num("tolerance", MARKOV_TOL))
}

fn freezing(opts: &ValidateOptions) -> HarnessResult<Record> {
    let times = uniform_grid(opts.t_end / opts.gamma, opts.samples);
    let target = [0.5, 0.125, 1.0 / 6.0];
    let mut series_dev = 0.0f64;
    let mut fixed_point = 0.0f64;
    let s0 = werner(0.5)?;
    for &n in &opts.n_grid {
        let bath = BathSpec::new(opts.gamma, n)?;
        for memory in [MemorySpec::Markov, MemorySpec::Finite(opts.gamma)] {
            for m in werner_series_oracle(0.5, &bath, 1.0, memory, FRAC_PI_4, &times)? {
                let got = [m.coherence_l1, m.concurrence, m.qfi];
                for (g, t) in got.iter().zip(target) {
                    series_dev = series_dev.max((g - t).abs());
                }
            }
            for &t in &[0.0, 0.5, 3.0] {
                fixed_point = fixed_point.max(ode_reduced(&bath, 1.0, memory, t, &s0).max_abs());
            }
        }
    }
    Ok(Record::pass(
        "freezing",
        series_dev <= FREEZE_TOL && fixed_point < FIXED_POINT_TOL,
    )
    .num("coherence", target[0])
    .num("concurrence", target[1])
    .num("qfi", target[2])
    .num("max_series_deviation", series_dev)
    .num("max_derivative", fixed_point))
}

/// Random symmetric X state with both eigenvalue gaps at least `margin`.
fn random_xstate(rng: &mut ChaCha8Rng, margin: f64) -> SymXState {
    loop {
        let r22 = rng.gen_range(0.0..0.5);
        let r11 = 0.5 - r22;
        if r11 < margin || r22 < margin {
            continue;
        }
        let r23 = C64::from_polar(rng.gen_range(0.0..r22 - margin), rng.gen_range(-PI..PI));
        let r14 = C64::from_polar(rng.gen_range(0.0..r11 - margin), rng.gen_range(-PI..PI));
        if let Ok(s) = SymXState::new(r11, r22, r23, r14) {
            return s;
        }
    }
}

fn qfi_consistency(opts: &ValidateOptions, rng: &mut ChaCha8Rng) -> HarnessResult<Record> {
    let mut worst = 0.0f64;
    for _ in 0..opts.random_cases {
        let s = random_xstate(rng, 1e-3);
        let obs = FisherObservable::new(rng.gen_range(-PI..PI));
        let closed = qfi_xstate(&s, &obs)?;
        let spectral = qfi_spectral(&s.to_density()?, &obs)?;
        worst = worst.max((closed - spectral).abs());
    }
    let w = werner(0.5)?;
    let obs = FisherObservable::new(FRAC_PI_4);
    let werner_closed = qfi_xstate(&w, &obs)?;
    let werner_spectral = qfi_spectral(&w.to_density()?, &obs)?;
    let werner_ok = (werner_closed - 1.0 / 6.0).abs() <= QFI_TOL
        && (werner_spectral - 1.0 / 6.0).abs() <= QFI_TOL;
    Ok(
        Record::pass("qfi_consistency", worst <= QFI_TOL && werner_ok)
            .num("cases", opts.random_cases as f64)
            .num("max_abs_difference", worst)
            .num("werner_closed_form", werner_closed)
            .num("werner_spectral", werner_spectral),
    )
}

fn damping_scan(opts: &ValidateOptions) -> HarnessResult<Record> {
    let mut mismatches = 0usize;
    let mut eig_dev = 0.0f64;
    let mut scanned = 0usize;
    let mut a_values: Vec<f64> = (-30..=30).map(|k| k as f64 / 20.0).collect();
    a_values.extend([1.0 + 1e-12, -1.0 - 1e-12, 1.0 - 1e-12, 1.2]);
    for &n in &opts.n_grid {
        let bath = BathSpec::new(opts.gamma, n)?;
        for &a in &a_values {
            let spec = damping_spectrum(&bath, a);
            if spec.positive != (a.abs() <= 1.0) {
                mismatches += 1;
            }
            let numeric = herm_eig(&damping_matrix(&bath, a))?;
            for (x, y) in numeric.values.iter().zip(spec.values) {
                eig_dev = eig_dev.max((x - y).abs());
            }
            scanned += 1;
        }
    }
    Ok(
        Record::pass("damping_spectrum", mismatches == 0 && eig_dev <= 1e-12)
            .num("cases", scanned as f64)
            .num("flag_mismatches", mismatches as f64)
            .num("max_eigenvalue_deviation", eig_dev),
    )
}

fn geometry_agreement(opts: &ValidateOptions, rng: &mut ChaCha8Rng) -> HarnessResult<Record> {
    let mut mismatches = 0usize;
    let mut lhs_dev = 0.0f64;
    for _ in 0..opts.random_cases {
        let g = GeometrySpec::new(rng.gen_range(0.05..20.0), rng.gen_range(-0.99..0.99))?;
        let a = collective_rate_ratio(&g);
        let rec = geometry_positivity(&g)?;
        if rec.holds != (a <= 1.0) {
            mismatches += 1;
        }
        lhs_dev = lhs_dev.max((rec.lhs - 2.0 * a / 3.0).abs());
    }
    Ok(
        Record::pass("geometry_positivity", mismatches == 0 && lhs_dev <= 1e-12)
            .num("cases", opts.random_cases as f64)
            .num("mismatches", mismatches as f64)
            .num("max_lhs_minus_two_thirds_a", lhs_dev),
    )
}

/// Minimum eigenvalue along full-generator RK4 trajectories with `a <= 1`.
fn full_generator_positivity(opts: &ValidateOptions) -> HarnessResult<Record> {
    let mut initial = vec![
        werner(0.5)?.to_density()?,
        werner(-0.3)?.to_density()?,
        DensityMatrix::basis_state(3),
    ];
    let s = 0.5f64.sqrt();
    initial.push(DensityMatrix::pure(&[
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
        C64::new(0.0, s),
        C64::new(0.0, 0.0),
    ])?);
    let times = uniform_grid(opts.t_end / opts.gamma, 51);
    let mut min_eig = f64::INFINITY;
    let mut runs = 0usize;
    for &n in &opts.n_grid {
        let bath = BathSpec::new(opts.gamma, n)?;
        for &a in &opts.a_grid {
            let spec = GeneratorSpec::new(bath, a, MemorySpec::Markov, Mode::Global, false)?;
            for rho0 in &initial {
                let traj = integrate_grid(&spec, rho0, &times, 1e-2 / bath.kappa())?;
                for rho in &traj.states {
                    min_eig = min_eig.min(rho.min_eigenvalue()?);
                }
                runs += 1;
            }
        }
    }
    Ok(
        Record::pass("full_generator_positivity", min_eig >= EIGEN_FLOOR)
            .num("trajectories", runs as f64)
            .num("min_eigenvalue", min_eig)
            .num("floor", EIGEN_FLOOR),
    )
}

/// At `a = 1`, `N = 0` the antisymmetric state does not decay.
fn subradiance(opts: &ValidateOptions) -> HarnessResult<Record> {
    let s = 0.5f64.sqrt();
    let dark = DensityMatrix::pure(&[
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
        C64::new(0.0, 0.0),
    ])?;
    let spec = GeneratorSpec::new(
        BathSpec::new(opts.gamma, 0.0)?,
        1.0,
        MemorySpec::Markov,
        Mode::Global,
        false,
    )?;
    let rate = apply_generator(&spec, &dark, 0.0)?.max_abs();
    Ok(Record::pass("subradiance", rate < FIXED_POINT_TOL).num("max_derivative", rate))
}

fn memory_checks(opts: &ValidateOptions) -> HarnessResult<Record> {
    let theta = memory_theta(MemorySpec::Finite(1.0), 1.0)?;
    let theta_err = (theta - (-1.0f64).exp()).abs();

    let times = uniform_grid(opts.t_end / opts.gamma, opts.samples);
    let mut dominance_violation = 0.0f64;
    for &n in &opts.n_grid {
        let bath = BathSpec::new(opts.gamma, n)?;
        for &a in &opts.a_grid {
            for &x in &opts.x_grid {
                let markov =
                    werner_series_oracle(x, &bath, a, MemorySpec::Markov, opts.phi, &times)?;
                for &m in opts.memory_grid.iter().filter(|m| !m.is_markov()) {
                    let finite = werner_series_oracle(x, &bath, a, m, opts.phi, &times)?;
                    for (f, mk) in finite.iter().zip(&markov) {
                        dominance_violation =
                            dominance_violation.max(mk.coherence_l1 - f.coherence_l1);
                    }
                }
            }
        }
    }

    let mut limit_dev = 0.0f64;
    let bath = BathSpec::new(opts.gamma, 0.0)?;
    let t1 = [1.0 / opts.gamma];
    for &a in &opts.a_grid {
        for &x in &opts.x_grid {
            let fast = werner_series_oracle(
                x,
                &bath,
                a,
                MemorySpec::Finite(1e9 * opts.gamma),
                opts.phi,
                &t1,
            )?;
            let markov = werner_series_oracle(x, &bath, a, MemorySpec::Markov, opts.phi, &t1)?;
            limit_dev = limit_dev.max(
                measure_diffs(&fast[0], &markov[0])
                    .into_iter()
                    .fold(0.0, f64::max),
            );
        }
    }
    let passed = theta_err <= 1e-12 && dominance_violation <= 1e-15 && limit_dev <= 1e-6;
    Ok(Record::pass("memory", passed)
        .num("theta_at_one", theta)
        .num("theta_error", theta_err)
        .num("max_markov_excess_coherence", dominance_violation)
        .num("fast_memory_vs_markov", limit_dev))
}

fn sudden_death(opts: &ValidateOptions) -> HarnessResult<Record> {
    let bath = BathSpec::new(opts.gamma, 0.0)?;
    let s0 = werner(0.5)?;
    let t_star = sudden_death_time(
        |t| {
            Ok(concurrence_margin(&propagate(
                &s0,
                &bath,
                0.0,
                MemorySpec::Markov,
                t,
            )?))
        },
        opts.t_end / opts.gamma,
        opts.samples,
    )?;
    let gamma_t = opts.gamma * t_star;
    let exact = -(3.0f64.sqrt() - 1.0).ln();
    Ok(Record::pass(
        "sudden_death",
        (gamma_t - 0.31188).abs() <= 1e-3 && (gamma_t - exact).abs() <= 1e-6,
    )
    .num("gamma_t", gamma_t)
    .num("root", exact))
}

fn monotone_witness(opts: &ValidateOptions) -> HarnessResult<Record> {
    let bath = BathSpec::new(opts.gamma, 0.0)?;
    let times = uniform_grid(opts.t_end / opts.gamma, opts.samples);
    let oracle = werner_series_oracle(0.5, &bath, 0.0, MemorySpec::Markov, opts.phi, &times)?;
    let pick = |f: fn(&MeasureTriple) -> f64| oracle.iter().map(f).collect::<Vec<_>>();
    let w_c = monotonicity_witness(&pick(|m| m.coherence_l1))?;
    let w_e = monotonicity_witness(&pick(|m| m.concurrence))?;
    let w_f = monotonicity_witness(&pick(|m| m.qfi))?;
    let printed = werner_series_printed(0.5, &bath, 1.0, MemorySpec::Markov, opts.phi, &times)?;
    let w_p = monotonicity_witness(&printed.iter().map(|m| m.coherence_l1).collect::<Vec<_>>())?;
    Ok(Record::pass(
        "monotone_witness",
        w_c == 0.0 && w_e == 0.0 && w_f == 0.0 && w_p == 0.0,
    )
    .num("a0_coherence", w_c)
    .num("a0_concurrence", w_e)
    .num("a0_qfi", w_f)
    .num("a1_printed_coherence", w_p))
}

fn printed_r23_asymptote() -> HarnessResult<Record> {
    let bath = BathSpec::new(1.0, 0.0)?;
    let s0 = werner(0.5)?;
    let t = 100.0;
    let printed = propagate_printed(&s0, &bath, 1.0, MemorySpec::Markov, t)?;
    let exact = propagate(&s0, &bath, 1.0, MemorySpec::Markov, t)?;
    Ok(Record::info("audit.r23_asymptote")
        .num("a", 1.0)
        .num("x", 0.5)
        .num("gamma_t", t)
        .num("printed_r23", printed.r23.re)
        .num("oracle_r23", exact.r23.re)
        .num("gap", (printed.r23.re - exact.r23.re).abs())
        .num("expected_gap", R23_ASYMPTOTE_GAP))
}

fn printed_qfi_ratio() -> HarnessResult<Record> {
    let w = werner(0.5)?;
    let obs = FisherObservable::new(FRAC_PI_4);
    let printed = werner_printed_at(0.5, 0.0, FRAC_PI_4, 0.0).qfi;
    let spectral = qfi_spectral(&w.to_density()?, &obs)?;
    Ok(Record::info("audit.qfi_ratio")
        .num("x", 0.5)
        .num("phi", FRAC_PI_4)
        .num("printed_qfi", printed)
        .num("spectral_qfi", spectral)
        .num("ratio", printed / spectral))
}

fn wootters_ratio(opts: &ValidateOptions, rng: &mut ChaCha8Rng) -> HarnessResult<Record> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut found = 0usize;
    while found < opts.random_cases {
        let s = random_xstate(rng, 0.02);
        let shortcut = concurrence_xstate(&s);
        if shortcut < 1e-2 {
            continue;
        }
        let ratio = concurrence_general(&s.to_density()?)? / shortcut;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        found += 1;
    }
    Ok(Record::info("audit.concurrence_ratio")
        .num("cases", found as f64)
        .num("min_ratio", lo)
        .num("max_ratio", hi))
}

/// Largest difference between the full generator restricted to symmetric X
/// states and the reduced equations.
fn full_vs_reduced(opts: &ValidateOptions) -> HarnessResult<Record> {
    let mut worst = 0.0f64;
    for &n in &opts.n_grid {
        let bath = BathSpec::new(opts.gamma, n)?;
        for &a in &opts.a_grid {
            let spec = GeneratorSpec::new(bath, a, MemorySpec::Markov, Mode::Global, false)?;
            for &x in &opts.x_grid {
                let s = werner(x)?;
                let full = apply_generator(&spec, &s.to_density()?, 0.0)?;
                let r = ode_reduced(&bath, a, MemorySpec::Markov, 0.0, &s);
                let diffs = [
                    (full[(0, 0)].re - r.d11).abs(),
                    (full[(1, 1)].re - r.d22).abs(),
                    (full[(1, 2)] - r.d23).norm(),
                    (full[(0, 3)] - r.d14).norm(),
                ];
                worst = diffs.into_iter().fold(worst, f64::max);
            }
        }
    }
    Ok(Record::info("audit.full_vs_reduced").num("max_rate_difference", worst))
}

fn figure2_at_one() -> HarnessResult<Record> {
    let bath = BathSpec::new(1.0, 0.0)?;
    let times = [0.0, 1.0, 5.0, 50.0];
    let printed = werner_series_printed(0.5, &bath, 1.0, MemorySpec::Markov, FRAC_PI_4, &times)?;
    let oracle = werner_series_oracle(0.5, &bath, 1.0, MemorySpec::Markov, FRAC_PI_4, &times)?;
    let mut rec = Record::info("audit.concurrence_a1");
    for (k, t) in times.iter().enumerate() {
        rec = rec
            .num(&format!("printed_t{}", g12(*t)), printed[k].concurrence)
            .num(&format!("oracle_t{}", g12(*t)), oracle[k].concurrence);
    }
    Ok(rec.num("printed_limit", 1.0 / 12.0))
}

fn printed_summary(cases: &[Record]) -> Record {
    let keys = [
        "printed_dev_r11",
        "printed_dev_r22",
        "printed_dev_r23",
        "printed_dev_r14",
        "printed_dev_coherence",
        "printed_dev_concurrence",
        "printed_dev_qfi",
    ];
    let mut rec = Record::info("audit.printed_vs_oracle");
    for key in keys {
        let worst = cases
            .iter()
            .filter_map(|r| r.get_f64(key))
            .fold(0.0, f64::max);
        rec = rec.num(key.trim_start_matches("printed_dev_"), worst);
    }
    rec
}

pub fn validate(opts: &ValidateOptions) -> HarnessResult<ValidationReport> {
    if opts.samples < 2 || !(opts.t_end > 0.0) || !(opts.gamma > 0.0) {
        return Err(HarnessError::Usage(
            "validate needs t_end > 0, gamma > 0 and samples >= 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut records = Vec::new();
    for &a in &opts.a_grid {
        for &n in &opts.n_grid {
            for &m in &opts.memory_grid {
                for &x in &opts.x_grid {
                    records.push(oracle_case(opts, a, n, m, x)?);
                }
            }
        }
    }
    let summary = printed_summary(&records);
    records.push(markov_reduction(opts)?);
    records.push(freezing(opts)?);
    records.push(qfi_consistency(opts, &mut rng)?);
    records.push(damping_scan(opts)?);
    records.push(geometry_agreement(opts, &mut rng)?);
    records.push(full_generator_positivity(opts)?);
    records.push(subradiance(opts)?);
    records.push(memory_checks(opts)?);
    records.push(sudden_death(opts)?);
    records.push(monotone_witness(opts)?);
    records.push(summary);
    records.push(printed_r23_asymptote()?);
    records.push(printed_qfi_ratio()?);
    records.push(wootters_ratio(opts, &mut rng)?);
    records.push(full_vs_reduced(opts)?);
    records.push(figure2_at_one()?);
    Ok(ValidationReport {
        seed: opts.seed,
        records,
    })
}

/// Writes the report (to `out` if given) and maps failures to exit code 1.
pub fn cmd_validate(
    opts: &ValidateOptions,
    out: Option<&std::path::Path>,
) -> HarnessResult<String> {
    let report = validate(opts)?;
    let text = report.render();
    if let Some(path) = out {
        std::fs::write(path, &text)?;
    }
    if !report.all_passed() {
        let ids: Vec<&str> = report.failures().map(|r| r.id.as_str()).collect();
        return Err(HarnessError::Validation(format!(
            "{} failing record(s): {}\n{text}",
            ids.len(),
            ids.join(", ")
        )));
    }
    Ok(text)
}
