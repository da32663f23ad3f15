//! Symmetric two-qubit X states and their exact dynamics.
//!
//! A symmetric X state has the matrix form
//!
//! ```text
//! | r11   0     0     r14 |
//! | 0     r22   r23   0   |
//! | 0     r23*  r22   0   |
//! | r14*  0     0     r11 |
//! ```
//!
//! The reduced equations of motion couple `u = r11 - r22` and
//! `v = 2 Re r23` through `kappa [[-2, a], [2a, -1]]`, while `Im r23` and
//! `r14` decay as plain exponentials. Writing that matrix as
//! `-(3/2) I + B` with `B^2 = (1 + 8a^2)/4 I` gives the propagator in closed
//! form; [`propagate`] evaluates it. [`propagate_printed`] evaluates the
//! published component formulas literally so that they can be compared
//! against it.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::lindblad::DensityMatrix;
use crate::params::{damping_spectrum, BathSpec, MemorySpec};

const STATE_TOL: f64 = 1e-12;
const CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymXState {
    pub r11: f64,
    pub r22: f64,
    pub r23: C64,
    pub r14: C64,
}

impl SymXState {
    /// Validated constructor: unit trace, non-negative populations and
    /// `|r23| <= r22`, `|r14| <= r11` (all within `1e-12`).
    pub fn new(r11: f64, r22: f64, r23: C64, r14: C64) -> Result<Self> {
        let s = Self { r11, r22, r23, r14 };
        s.check(STATE_TOL)?;
        Ok(s)
    }

    pub(crate) fn new_unchecked(r11: f64, r22: f64, r23: C64, r14: C64) -> Self {
        Self { r11, r22, r23, r14 }
    }

    fn check(&self, tol: f64) -> Result<()> {
        let finite = [
            self.r11,
            self.r22,
            self.r23.re,
            self.r23.im,
            self.r14.re,
            self.r14.im,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::NonFinite);
        }
        if (2.0 * (self.r11 + self.r22) - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!(
                "trace 2(r11 + r22) = {} differs from 1",
                2.0 * (self.r11 + self.r22)
            )));
        }
        if self.r11 < -tol || self.r22 < -tol {
            return Err(Error::InvalidState("negative population".into()));
        }
        if self.r23.norm() > self.r22 + tol {
            return Err(Error::InvalidState(format!(
                "|r23| = {} exceeds r22 = {}",
                self.r23.norm(),
                self.r22
            )));
        }
        if self.r14.norm() > self.r11 + tol {
            return Err(Error::InvalidState(format!(
                "|r14| = {} exceeds r11 = {}",
                self.r14.norm(),
                self.r11
            )));
        }
        Ok(())
    }

    /// Whether the state satisfies the positivity constraints within `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.check(tol).is_ok()
    }

    /// `Re r23`, written `zeta(0)` when evaluated on the initial state.
    pub fn zeta(&self) -> f64 {
        self.r23.re
    }

    /// `i Im r23`.
    pub fn zeta_bar(&self) -> C64 {
        C64::new(0.0, self.r23.im)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let z = C64::new(0.0, 0.0);
        let d = |x: f64| C64::new(x, 0.0);
        ComplexMatrix::new(
            4,
            vec![
                d(self.r11),
                z,
                z,
                self.r14,
                z,
                d(self.r22),
                self.r23,
                z,
                z,
                self.r23.conj(),
                d(self.r22),
                z,
                self.r14.conj(),
                z,
                z,
                d(self.r11),
            ],
        )
        .expect("finite entries")
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix())
    }

    /// Reads a symmetric X state back out of a 4x4 density matrix.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let m = rho.matrix();
        let zero_slots = [
            (0, 1),
            (0, 2),
            (1, 0),
            (1, 3),
            (2, 0),
            (2, 3),
            (3, 1),
            (3, 2),
        ];
        if zero_slots.iter().any(|&ij| m[ij].norm() > STATE_TOL) {
            return Err(Error::InvalidState("matrix is not of X form".into()));
        }
        if (m[(0, 0)].re - m[(3, 3)].re).abs() > STATE_TOL
            || (m[(1, 1)].re - m[(2, 2)].re).abs() > STATE_TOL
        {
            return Err(Error::InvalidState(
                "X state is not symmetric (rho44 != rho11 or rho33 != rho22)".into(),
            ));
        }
        Self::new(m[(0, 0)].re, m[(1, 1)].re, m[(1, 2)], m[(0, 3)])
    }

    /// Largest componentwise difference over `(r11, r22, r23, r14)`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            (self.r11 - other.r11).abs(),
            (self.r22 - other.r22).abs(),
            (self.r23 - other.r23).norm(),
            (self.r14 - other.r14).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Clamps positivity violations up to `1e-9`; larger ones are errors.
    fn project_physical(mut self) -> Result<Self> {
        self.check(CLAMP_TOL)?;
        if self.r23.norm() > self.r22 {
            self.r23 *= self.r22.max(0.0) / self.r23.norm();
        }
        if self.r14.norm() > self.r11 {
            self.r14 *= self.r11.max(0.0) / self.r14.norm();
        }
        Ok(self)
    }
}

/// Werner parameter `x` of `(1-x)/4 I + x |psi-><psi-|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParam(f64);

impl WernerParam {
    /// Accepts `-1/3 < x <= 1`.
    pub fn new(x: f64) -> Result<Self> {
        if !(x > -1.0 / 3.0 && x <= 1.0) {
            return Err(Error::Domain(format!(
                "Werner parameter must lie in (-1/3, 1], got {x}"
            )));
        }
        Ok(Self(x))
    }

    pub fn x(&self) -> f64 {
        self.0
    }
}

pub fn from_werner(w: WernerParam) -> SymXState {
    let x = w.0;
    SymXState::new_unchecked(
        (1.0 - x) / 4.0,
        (1.0 + x) / 4.0,
        C64::new(-x / 2.0, 0.0),
        C64::new(0.0, 0.0),
    )
}

fn check_ratio(b: &BathSpec, a: f64) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if a.abs() > 1.0 {
        let spec = damping_spectrum(b, a);
        return Err(Error::Positivity {
            a,
            min_eigenvalue: spec.values[0],
        });
    }
    Ok(())
}

/// `(e^{-3K/2} cosh(SK/2), e^{-3K/2} sinh(SK/2))` without overflow.
fn damped_hyperbolics(s: f64, k: f64) -> (f64, f64) {
    let ep = ((-3.0 + s) * k / 2.0).exp();
    let em = ((-3.0 - s) * k / 2.0).exp();
    ((ep + em) / 2.0, (ep - em) / 2.0)
}

/// Integrated relaxation `K = gamma (2N+1) t Theta(t)`.
pub fn integrated_rate(b: &BathSpec, m: MemorySpec, t: f64) -> Result<f64> {
    Ok(b.kappa() * m.effective_time(t)?)
}

/// Exact solution of the reduced X-state equations at time `t`.
pub fn propagate(s0: &SymXState, b: &BathSpec, a: f64, m: MemorySpec, t: f64) -> Result<SymXState> {
    check_ratio(b, a)?;
    let k = integrated_rate(b, m, t)?;
    if k == 0.0 {
        return Ok(*s0);
    }
    let s = (1.0 + 8.0 * a * a).sqrt();
    let (ch, sh) = damped_hyperbolics(s, k);

    let pop = s0.r11 + s0.r22;
    let u0 = s0.r11 - s0.r22;
    let v0 = 2.0 * s0.r23.re;
    let u = ch * u0 + sh * (-u0 + 2.0 * a * v0) / s;
    let v = ch * v0 + sh * (4.0 * a * u0 + v0) / s;
    let decay = (-k).exp();

    SymXState::new_unchecked(
        (pop + u) / 2.0,
        (pop - u) / 2.0,
        C64::new(v / 2.0, s0.r23.im * decay),
        s0.r14 * decay,
    )
    .project_physical()
}

/// The published component solutions, evaluated as typeset.
///
/// The cross-coupling coefficient is `a / sqrt(1 + 8a^2)` in all three
/// formulas. For finite memory the Markov exponent `gamma (2N+1) t` becomes
/// `gamma Theta (2N+1) t`. No positivity projection is applied.
pub fn propagate_printed(
    s0: &SymXState,
    b: &BathSpec,
    a: f64,
    m: MemorySpec,
    t: f64,
) -> Result<SymXState> {
    check_ratio(b, a)?;
    let k = integrated_rate(b, m, t)?;
    let s = (1.0 + 8.0 * a * a).sqrt();
    let (ch, sh) = damped_hyperbolics(s, k);

    let half_pop = (s0.r11 + s0.r22) / 2.0;
    let diff = s0.r11 - s0.r22;
    let zeta = s0.zeta();
    let pop_term = diff / (2.0 * s) * (s * ch - sh);
    let feed = a / s * zeta * sh;

    let r11 = half_pop + pop_term + feed;
    let r22 = half_pop - pop_term - feed;
    let r23 =
        C64::new(zeta / s * (sh + s * ch) + a / s * diff * sh, 0.0) + s0.zeta_bar() * (-k).exp();
    let r14 = s0.r14 * (-k).exp();
    Ok(SymXState::new_unchecked(r11, r22, r23, r14))
}

/// State expressed in the collective basis `|g>=|00>, |e>=|11>`,
/// `|s>, |as> = (|10> +- |01>)/sqrt 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveView {
    pub p_g: f64,
    pub p_e: f64,
    pub p_s: f64,
    pub p_as: f64,
    /// `<s| rho |as>`
    pub s_as: C64,
    /// `<g| rho |e>`
    pub g_e: C64,
}

pub fn to_collective(s: &SymXState) -> CollectiveView {
    CollectiveView {
        p_g: s.r11,
        p_e: s.r11,
        p_s: s.r22 + s.r23.re,
        p_as: s.r22 - s.r23.re,
        s_as: C64::new(0.0, s.r23.im),
        g_e: s.r14,
    }
}
