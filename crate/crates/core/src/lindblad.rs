//! Lindblad generators for two qubits coupled to a common thermal bath,
//! fixed-step RK4 integration and the reduced X-state equations.
//!
//! The full generator is
//!
//! ```text
//! d rho/dt = sum_ij G_ij(t) (N+1) ( s_i^- rho s_j^+ - {s_i^+ s_j^-, rho}/2 )
//!          + sum_ij G_ij(t) N     ( s_i^+ rho s_j^- - {s_i^- s_j^+, rho}/2 )
//!          - i [H_int, rho]
//! ```
//!
//! with `G_ii = gamma f(t)`, `G_12 = G_21 = a gamma f(t)` in global mode and
//! `f(t) = 1 - exp(-lambda t)` (or 1 without memory).
//!
//! The reduced equations in [`ode_reduced`] are a separate model: they are
//! the four published equations for symmetric X states, taken as given.

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, sigma_minus, sigma_plus, ComplexMatrix, C64};
use crate::params::{damping_spectrum, BathSpec, MemorySpec};
use crate::xstate::SymXState;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const NEG_EIG_TOL: f64 = 1e-10;
const DRIFT_TOL: f64 = 1e-8;

/// Validated 4x4 two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::Dimension {
                expected: 4,
                got: mat.dim(),
            });
        }
        let dev = mat.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let mat = mat.hermitize();
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let lmin = herm_eig(&mat)?.values[0];
        if lmin < -NEG_EIG_TOL {
            return Err(Error::NotPsd { eigenvalue: lmin });
        }
        Ok(Self { mat })
    }

    /// Computational basis projector `|k><k|`, `k` in `0..4`.
    pub fn basis_state(k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(4);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self { mat: m }
    }

    /// Pure state from an (unnormalised) amplitude vector.
    pub fn pure(amplitudes: &[C64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(herm_eig(&self.mat)?.values[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Independent baths: no cross-decay.
    Local,
    /// Shared bath with cross-decay `a gamma`.
    Global,
}

/// Coherent dipole-dipole exchange `omega12 (e^{i phi} s^- (x) s^+ + h.c.)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeHamiltonian {
    pub omega12: f64,
    pub phi: f64,
}

impl ExchangeHamiltonian {
    pub fn matrix(&self) -> ComplexMatrix {
        let e = C64::from_polar(1.0, self.phi);
        let lower_raise = kron(&sigma_minus(), &sigma_plus());
        let raise_lower = kron(&sigma_plus(), &sigma_minus());
        (&lower_raise.scale(e) + &raise_lower.scale(e.conj())).scale_re(self.omega12)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub bath: BathSpec,
    a: f64,
    pub memory: MemorySpec,
    pub mode: Mode,
    pub hamiltonian: Option<ExchangeHamiltonian>,
}

impl GeneratorSpec {
    /// Dissipator-only generator. `|a| > 1` is rejected unless
    /// `allow_nonpositive` is set.
    pub fn new(
        bath: BathSpec,
        a: f64,
        memory: MemorySpec,
        mode: Mode,
        allow_nonpositive: bool,
    ) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::NonFinite);
        }
        let a = if mode == Mode::Local { 0.0 } else { a };
        let spectrum = damping_spectrum(&bath, a);
        if !spectrum.positive && !allow_nonpositive {
            return Err(Error::Positivity {
                a,
                min_eigenvalue: spectrum.values[0],
            });
        }
        Ok(Self {
            bath,
            a,
            memory,
            mode,
            hamiltonian: None,
        })
    }

    pub fn with_hamiltonian(mut self, h: ExchangeHamiltonian) -> Self {
        self.hamiltonian = Some(h);
        self
    }

    /// Effective cross-decay ratio (always 0 in local mode).
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Default RK4 step `1e-3 / (gamma (2N+1))`.
    pub fn default_dt(&self) -> f64 {
        1e-3 / self.bath.kappa()
    }
}

struct Operators {
    lower: [ComplexMatrix; 2],
    raise: [ComplexMatrix; 2],
}

impl Operators {
    fn new() -> Self {
        let id = ComplexMatrix::identity(2);
        Self {
            lower: [kron(&sigma_minus(), &id), kron(&id, &sigma_minus())],
            raise: [kron(&sigma_plus(), &id), kron(&id, &sigma_plus())],
        }
    }
}

/// `J rho K^dagger - {K^dagger J, rho}/2` with `J`, `K^dagger` given directly.
fn dissipator_term(
    jump: &ComplexMatrix,
    jump_adj_other: &ComplexMatrix,
    rho: &ComplexMatrix,
) -> ComplexMatrix {
    let sandwich = &(jump * rho) * jump_adj_other;
    let number = jump_adj_other * jump;
    &sandwich - &number.anticommutator(rho).scale_re(0.5)
}

fn rhs(spec: &GeneratorSpec, ops: &Operators, rho: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let f = spec.memory.rate_factor(t);
    let gamma = spec.bath.gamma();
    let n = spec.bath.n_occ();
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            let g = if i == j {
                gamma * f
            } else if spec.mode == Mode::Global {
                spec.a * gamma * f
            } else {
                continue;
            };
            if g == 0.0 {
                continue;
            }
            // emission: s_i^- rho s_j^+ - {s_j^+ s_i^-, rho}/2
            let emit = dissipator_term(&ops.lower[i], &ops.raise[j], rho);
            out = &out + &emit.scale_re(g * (n + 1.0));
            if n > 0.0 {
                let absorb = dissipator_term(&ops.raise[i], &ops.lower[j], rho);
                out = &out + &absorb.scale_re(g * n);
            }
        }
    }
    if let Some(h) = &spec.hamiltonian {
        let comm = h.matrix().commutator(rho);
        out = &out + &comm.scale(C64::new(0.0, -1.0));
    }
    out
}

/// `d rho / dt` at time `t`.
pub fn apply_generator(spec: &GeneratorSpec, rho: &DensityMatrix, t: f64) -> Result<ComplexMatrix> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    Ok(rhs(spec, &Operators::new(), rho.matrix(), t))
}

/// Time-stamped sequence of states.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory is never empty")
    }
}

#[derive(Debug, Clone)]
pub struct Integration {
    pub trajectory: Trajectory,
    /// `max |rho_dt(T) - rho_{dt/2}(T)|` at the final time.
    pub error_estimate: f64,
}

fn rk4_step(
    spec: &GeneratorSpec,
    ops: &Operators,
    rho: &ComplexMatrix,
    t: f64,
    h: f64,
) -> ComplexMatrix {
    let k1 = rhs(spec, ops, rho, t);
    let y2 = rho + &k1.scale_re(h / 2.0);
    let k2 = rhs(spec, ops, &y2, t + h / 2.0);
    let y3 = rho + &k2.scale_re(h / 2.0);
    let k3 = rhs(spec, ops, &y3, t + h / 2.0);
    let y4 = rho + &k3.scale_re(h);
    let k4 = rhs(spec, ops, &y4, t + h);
    let incr = &(&k1 + &k2.scale_re(2.0)) + &(&k3.scale_re(2.0) + &k4);
    rho + &incr.scale_re(h / 6.0)
}

fn check_time_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() || !(times[0] >= 0.0) {
        return Err(Error::Domain(
            "time grid must be non-empty and start at t >= 0".into(),
        ));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain(
            "time grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn substeps(span: f64, dt: f64) -> usize {
    ((span / dt) - 1e-9).ceil().max(1.0) as usize
}

fn settle(m: ComplexMatrix, t: f64) -> Result<DensityMatrix> {
    if !m.is_finite() {
        return Err(Error::Integration {
            time: t,
            detail: "non-finite state".into(),
        });
    }
    let m = m.hermitize();
    let drift = (m.trace().re - 1.0).abs();
    if drift > DRIFT_TOL {
        return Err(Error::Integration {
            time: t,
            detail: format!("trace drift {drift:e}"),
        });
    }
    let lmin = herm_eig(&m)
        .map_err(|e| Error::Integration {
            time: t,
            detail: e.to_string(),
        })?
        .values[0];
    if lmin < -DRIFT_TOL {
        return Err(Error::Integration {
            time: t,
            detail: format!("negative eigenvalue {lmin:e}"),
        });
    }
    Ok(DensityMatrix { mat: m })
}

/// RK4 with step at most `dt`, reporting the state at every time in `times`.
///
/// `times[0]` is the time of `rho0`; each interval is split into the
/// smallest number of equal substeps not exceeding `dt`.
pub fn integrate_grid(
    spec: &GeneratorSpec,
    rho0: &DensityMatrix,
    times: &[f64],
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("step must be > 0, got {dt}")));
    }
    check_time_grid(times)?;
    let ops = Operators::new();
    let mut states = Vec::with_capacity(times.len());
    states.push(rho0.clone());
    let mut rho = rho0.matrix().clone();
    for w in times.windows(2) {
        let steps = substeps(w[1] - w[0], dt);
        let h = (w[1] - w[0]) / steps as f64;
        for k in 0..steps {
            rho = rk4_step(spec, &ops, &rho, w[0] + k as f64 * h, h);
        }
        let state = settle(rho, w[1])?;
        rho = state.matrix().clone();
        states.push(state);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}

/// Fixed-step RK4 from `t = 0` to `t_end`, emitting every step, with a
/// step-halving estimate of the final-state error.
pub fn integrate(
    spec: &GeneratorSpec,
    rho0: &DensityMatrix,
    t_end: f64,
    dt: f64,
) -> Result<Integration> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::Domain(format!(
            "need dt > 0 and t_end >= 0 (dt = {dt}, t_end = {t_end})"
        )));
    }
    if t_end == 0.0 {
        return Ok(Integration {
            trajectory: Trajectory {
                times: vec![0.0],
                states: vec![rho0.clone()],
            },
            error_estimate: 0.0,
        });
    }
    if dt > t_end {
        return Err(Error::Domain(format!("step {dt} exceeds t_end {t_end}")));
    }
    let steps = substeps(t_end, dt);
    let times: Vec<f64> = (0..=steps)
        .map(|k| t_end * k as f64 / steps as f64)
        .collect();
    let trajectory = integrate_grid(spec, rho0, &times, dt)?;
    let fine = integrate_grid(spec, rho0, &[0.0, t_end], t_end / (2 * steps) as f64)?;
    let error_estimate = trajectory
        .last()
        .matrix()
        .max_abs_diff(fine.last().matrix());
    Ok(Integration {
        trajectory,
        error_estimate,
    })
}

/// Right-hand side of the reduced X-state equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateRates {
    pub d11: f64,
    pub d22: f64,
    pub d23: C64,
    pub d14: C64,
}

impl XStateRates {
    pub fn max_abs(&self) -> f64 {
        [
            self.d11.abs(),
            self.d22.abs(),
            self.d23.norm(),
            self.d14.norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// The four published X-state equations with `kappa = gamma (2N+1) f(t)`:
///
/// ```text
/// r11' = -kappa r11 + kappa r22 + a kappa (r23 + r23*)/2
/// r22' = +kappa r11 - kappa r22 - a kappa (r23 + r23*)/2
/// r23' = -kappa r23 + a kappa (r11 - r22)
/// r14' = -kappa r14
/// ```
pub fn ode_reduced(
    bath: &BathSpec,
    a: f64,
    memory: MemorySpec,
    t: f64,
    s: &SymXState,
) -> XStateRates {
    let kappa = bath.kappa() * memory.rate_factor(t);
    let feed = a * kappa * s.r23.re;
    XStateRates {
        d11: -kappa * s.r11 + kappa * s.r22 + feed,
        d22: kappa * s.r11 - kappa * s.r22 - feed,
        d23: -kappa * s.r23 + C64::new(a * kappa * (s.r11 - s.r22), 0.0),
        d14: -kappa * s.r14,
    }
}

/// [`ode_reduced`] written back as a 4x4 matrix derivative.
pub fn reduced_generator_matrix(
    bath: &BathSpec,
    a: f64,
    memory: MemorySpec,
    t: f64,
    s: &SymXState,
) -> ComplexMatrix {
    let r = ode_reduced(bath, a, memory, t, s);
    SymXState::new_unchecked(r.d11, r.d22, r.d23, r.d14).to_matrix()
}

fn axpy(s: &SymXState, r: &XStateRates, h: f64) -> SymXState {
    SymXState::new_unchecked(
        s.r11 + h * r.d11,
        s.r22 + h * r.d22,
        s.r23 + r.d23 * h,
        s.r14 + r.d14 * h,
    )
}

/// RK4 on [`ode_reduced`] reporting the state at each time in `times`.
///
/// This is the numerical reference for the closed-form propagator, so no
/// positivity projection is applied.
pub fn integrate_reduced(
    bath: &BathSpec,
    a: f64,
    memory: MemorySpec,
    s0: &SymXState,
    times: &[f64],
    dt: f64,
) -> Result<Vec<SymXState>> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("step must be > 0, got {dt}")));
    }
    check_time_grid(times)?;
    let f = |t: f64, s: &SymXState| ode_reduced(bath, a, memory, t, s);
    let mut out = Vec::with_capacity(times.len());
    let mut s = *s0;
    out.push(s);
    for w in times.windows(2) {
        let steps = substeps(w[1] - w[0], dt);
        let h = (w[1] - w[0]) / steps as f64;
        for k in 0..steps {
            let t = w[0] + k as f64 * h;
            let k1 = f(t, &s);
            let k2 = f(t + h / 2.0, &axpy(&s, &k1, h / 2.0));
            let k3 = f(t + h / 2.0, &axpy(&s, &k2, h / 2.0));
            let k4 = f(t + h, &axpy(&s, &k3, h));
            s = SymXState::new_unchecked(
                s.r11 + h / 6.0 * (k1.d11 + 2.0 * k2.d11 + 2.0 * k3.d11 + k4.d11),
                s.r22 + h / 6.0 * (k1.d22 + 2.0 * k2.d22 + 2.0 * k3.d22 + k4.d22),
                s.r23 + (k1.d23 + k2.d23 * 2.0 + k3.d23 * 2.0 + k4.d23) * (h / 6.0),
                s.r14 + (k1.d14 + k2.d14 * 2.0 + k3.d14 * 2.0 + k4.d14) * (h / 6.0),
            );
        }
        out.push(s);
    }
    Ok(out)
}

/// Largest positive increment between consecutive samples (0 for a
/// non-increasing series).
pub fn monotonicity_witness(series: &[f64]) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::Domain("series needs at least two samples".into()));
    }
    Ok(series.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xstate::{from_werner, WernerParam};

    fn spec(n: f64, a: f64, mode: Mode) -> GeneratorSpec {
        GeneratorSpec::new(
            BathSpec::new(1.0, n).unwrap(),
            a,
            MemorySpec::Markov,
            mode,
            false,
        )
        .unwrap()
    }

    #[test]
    fn ground_state_is_stationary_at_zero_temperature() {
        let g = DensityMatrix::basis_state(0);
        for mode in [Mode::Local, Mode::Global] {
            let d = apply_generator(&spec(0.0, 0.7, mode), &g, 0.0).unwrap();
            assert_eq!(d.max_abs(), 0.0);
        }
    }

    #[test]
    fn doubly_excited_local_decay() {
        let e = DensityMatrix::basis_state(3);
        let d = apply_generator(&spec(0.0, 0.0, Mode::Local), &e, 0.0).unwrap();
        let expect = ComplexMatrix::from_diag(&[0.0, 1.0, 1.0, -2.0]);
        assert!(d.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn reduced_lift_of_werner_is_stationary_at_unit_ratio() {
        let w = from_werner(WernerParam::new(0.5).unwrap());
        let b = BathSpec::new(1.0, 0.0).unwrap();
        let d = reduced_generator_matrix(&b, 1.0, MemorySpec::Markov, 0.0, &w);
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn reduced_rates_examples() {
        let w = from_werner(WernerParam::new(0.5).unwrap());
        let b = BathSpec::new(1.0, 0.0).unwrap();
        let r = ode_reduced(&b, 1.0, MemorySpec::Markov, 0.0, &w);
        assert_eq!(r.max_abs(), 0.0);
        let r = ode_reduced(&b, 0.0, MemorySpec::Markov, 0.0, &w);
        assert_eq!((r.d11, r.d22, r.d23.re, r.d14.re), (0.25, -0.25, 0.25, 0.0));
        let s = SymXState::new(0.25, 0.25, C64::new(0.0, 0.1), C64::new(0.0, 0.0)).unwrap();
        let r = ode_reduced(&b, 0.8, MemorySpec::Markov, 0.0, &s);
        assert_eq!((r.d11, r.d22), (0.0, 0.0));
    }

    #[test]
    fn local_equals_global_without_cross_decay() {
        let rho = DensityMatrix::pure(&[
            C64::new(0.3, 0.1),
            C64::new(-0.2, 0.4),
            C64::new(0.5, 0.0),
            C64::new(0.1, -0.6),
        ])
        .unwrap();
        let b = BathSpec::new(0.8, 0.6).unwrap();
        let l = GeneratorSpec::new(b, 0.0, MemorySpec::Markov, Mode::Local, false).unwrap();
        let g = GeneratorSpec::new(b, 0.0, MemorySpec::Markov, Mode::Global, false).unwrap();
        assert_eq!(
            apply_generator(&l, &rho, 0.3).unwrap(),
            apply_generator(&g, &rho, 0.3).unwrap()
        );
    }

    #[test]
    fn positivity_guard() {
        let b = BathSpec::new(1.0, 0.0).unwrap();
        assert!(matches!(
            GeneratorSpec::new(b, 1.2, MemorySpec::Markov, Mode::Global, false),
            Err(Error::Positivity { .. })
        ));
        assert!(GeneratorSpec::new(b, 1.2, MemorySpec::Markov, Mode::Global, true).is_ok());
        // local mode discards the ratio entirely
        assert_eq!(
            GeneratorSpec::new(b, 1.2, MemorySpec::Markov, Mode::Local, false)
                .unwrap()
                .a(),
            0.0
        );
    }

    #[test]
    fn fixed_point_trajectory_is_constant() {
        let g = DensityMatrix::basis_state(0);
        let run = integrate(&spec(0.0, 0.5, Mode::Global), &g, 1.0, 0.01).unwrap();
        for s in &run.trajectory.states {
            assert_eq!(s.matrix(), g.matrix());
        }
        assert_eq!(run.error_estimate, 0.0);
    }

    #[test]
    fn integrate_rejects_bad_steps() {
        let g = DensityMatrix::basis_state(0);
        let s = spec(0.0, 0.5, Mode::Global);
        assert!(integrate(&s, &g, 1.0, 0.0).is_err());
        assert!(integrate(&s, &g, 1.0, 2.0).is_err());
        assert_eq!(
            integrate(&s, &g, 0.0, 0.1).unwrap().trajectory.states.len(),
            1
        );
    }

    #[test]
    fn witness_examples() {
        assert_eq!(monotonicity_witness(&[3.0, 2.0, 1.0]).unwrap(), 0.0);
        assert_eq!(monotonicity_witness(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert!((monotonicity_witness(&[1.0, 0.5, 0.8, 0.2]).unwrap() - 0.3).abs() < 1e-15);
        assert!(monotonicity_witness(&[1.0]).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::from_diag(&[0.5, 0.5, 0.0, 0.0])).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::from_diag(&[0.6, 0.5, 0.0, 0.0])).is_err());
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_diag(&[0.6, 0.5, -0.1, 0.0])),
            Err(Error::NotPsd { .. })
        ));
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
    }
}
