//! Coherence, entanglement and Fisher-information measures.
//!
//! Each measure comes as a general function of a 4x4 density matrix and as a
//! shortcut for symmetric X states. The Werner-state closed forms exist in
//! two flavours: [`werner_series_printed`] transcribes the published
//! formulas, [`werner_series_oracle`] evaluates the measures on the exactly
//! propagated state.

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, sigma_y, ComplexMatrix, C64};
use crate::lindblad::{DensityMatrix, ExchangeHamiltonian};
use crate::params::{BathSpec, MemorySpec};
use crate::xstate::{from_werner, integrated_rate, propagate, SymXState, WernerParam};

/// Eigenvalue pairs with `lambda_m + lambda_n` at or below this are skipped.
const QFI_SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureTriple {
    pub coherence_l1: f64,
    pub concurrence: f64,
    pub qfi: f64,
}

/// Phase of the exchange observable
/// `A = e^{i phi} s^- (x) s^+ + e^{-i phi} s^+ (x) s^-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherObservable {
    pub phi: f64,
}

impl FisherObservable {
    pub fn new(phi: f64) -> Self {
        Self { phi }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ExchangeHamiltonian {
            omega12: 1.0,
            phi: self.phi,
        }
        .matrix()
    }
}

/// Sum of moduli of the off-diagonal entries in the computational basis.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

pub fn l1_coherence_xstate(s: &SymXState) -> f64 {
    2.0 * s.r23.norm() + 2.0 * s.r14.norm()
}

/// Wootters concurrence.
///
/// The spin-flip spectrum is taken from the Hermitian matrix
/// `sqrt(rho) rho~ sqrt(rho)`, which is isospectral with `rho rho~`.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    let eig = herm_eig(m)?;
    let sqrt_rho = eig.map_spectrum(|l| l.max(0.0).sqrt());
    let yy = kron(&sigma_y(), &sigma_y());
    let flipped = &(&yy * &m.conj()) * &yy;
    let r = &(&sqrt_rho * &flipped) * &sqrt_rho;
    let mut roots: Vec<f64> = herm_eig(&r.hermitize())?
        .values
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// `max(|r23| - r11, |r14| - r22)`, before flooring at zero.
pub fn concurrence_margin(s: &SymXState) -> f64 {
    (s.r23.norm() - s.r11).max(s.r14.norm() - s.r22)
}

/// The published X-state shortcut `max{0, |r23| - sqrt(r11 r44), |r14| - sqrt(r22 r33)}`.
///
/// On symmetric X states Wootters' formula gives exactly twice this value.
pub fn concurrence_xstate(s: &SymXState) -> f64 {
    concurrence_margin(s).max(0.0)
}

/// `F = 1/2 sum_{m,n} (l_m - l_n)^2 / (l_m + l_n) |<m|A|n>|^2`.
pub fn qfi_spectral(rho: &DensityMatrix, obs: &FisherObservable) -> Result<f64> {
    let eig = herm_eig(rho.matrix())?;
    let a = obs.matrix();
    let n = eig.values.len();
    let vecs: Vec<Vec<C64>> = (0..n).map(|k| eig.vector(k)).collect();
    let mut total = 0.0;
    for m in 0..n {
        for k in 0..n {
            let (lm, lk) = (eig.values[m], eig.values[k]);
            let denom = lm + lk;
            if denom <= QFI_SUPPORT_TOL {
                continue;
            }
            let diff = lm - lk;
            if diff == 0.0 {
                continue;
            }
            total += diff * diff / denom * a.sandwich(&vecs[m], &vecs[k]).norm_sqr();
        }
    }
    Ok(0.5 * total)
}

/// Closed-form Fisher information of a symmetric X state,
/// `2 |r23|^2 sin^2(phi - arg r23) / r22`.
///
/// For real `r23` this is the published `2 |r23|^2 sin^2(phi) / r22`
/// (see [`qfi_xstate_printed`]); the phase of `r23` only matters when
/// `Im r23 != 0`.
pub fn qfi_xstate(s: &SymXState, obs: &FisherObservable) -> Result<f64> {
    if !(s.r22 > 0.0) {
        return Err(Error::DegenerateState(
            "r22 = 0: Fisher information closed form undefined".into(),
        ));
    }
    // |r23| sin(phi - arg r23) = Im(e^{i phi} conj(r23)), exact for real r23 at phi = 0
    let skew = (C64::from_polar(1.0, obs.phi) * s.r23.conj()).im;
    Ok(2.0 * skew * skew / s.r22)
}

/// `2 |r23|^2 sin^2(phi) / r22` exactly as published.
pub fn qfi_xstate_printed(s: &SymXState, obs: &FisherObservable) -> Result<f64> {
    if !(s.r22 > 0.0) {
        return Err(Error::DegenerateState(
            "r22 = 0: Fisher information closed form undefined".into(),
        ));
    }
    Ok(2.0 * s.r23.norm_sqr() * obs.phi.sin().powi(2) / s.r22)
}

/// The three measures of a symmetric X state via the shortcut formulas.
///
/// A state with `r22 = 0` has `r23 = 0` and is assigned zero Fisher
/// information, the limit of the spectral formula.
pub fn measures_xstate(s: &SymXState, obs: &FisherObservable) -> MeasureTriple {
    MeasureTriple {
        coherence_l1: l1_coherence_xstate(s),
        concurrence: concurrence_xstate(s),
        qfi: qfi_xstate(s, obs).unwrap_or(0.0),
    }
}

/// Measures of a general two-qubit state (Wootters concurrence).
pub fn measures_general(rho: &DensityMatrix, obs: &FisherObservable) -> Result<MeasureTriple> {
    Ok(MeasureTriple {
        coherence_l1: l1_coherence(rho),
        concurrence: concurrence_general(rho)?,
        qfi: qfi_spectral(rho, obs)?,
    })
}

/// `e^{-3K/2} [cosh(SK/2) + c sinh(SK/2)]` evaluated without overflow.
fn bracket(s: f64, k: f64, c: f64) -> f64 {
    let ep = ((-3.0 + s) * k / 2.0).exp();
    let em = ((-3.0 - s) * k / 2.0).exp();
    // grouped by exponential so that c = 1, S = 3 gives exactly 1
    (1.0 + c) / 2.0 * ep + (1.0 - c) / 2.0 * em
}

/// Published Werner-state formulas at integrated rate `k = gamma (2N+1) t Theta`.
pub fn werner_printed_at(x: f64, a: f64, phi: f64, k: f64) -> MeasureTriple {
    let s = (1.0 + 8.0 * a * a).sqrt();
    let coh = bracket(s, k, (1.0 + 2.0 * a) / s);
    let coherence_l1 = x.abs() * coh;
    let concurrence = werner_printed_concurrence_margin(x, a, k);
    // e^{-3K/2}/S [S cosh - (1 - 2a) sinh] = bracket with c = -(1-2a)/S
    let denom = 1.0 - x * bracket(s, k, -(1.0 - 2.0 * a) / s);
    let qfi = 2.0 * phi.sin().powi(2) * x * x * coh * coh / denom;
    MeasureTriple {
        coherence_l1,
        concurrence: concurrence.max(0.0),
        qfi,
    }
}

/// Published Werner concurrence before flooring at zero; its first zero is
/// the sudden-death time.
pub fn werner_printed_concurrence_margin(x: f64, a: f64, k: f64) -> f64 {
    let s = (1.0 + 8.0 * a * a).sqrt();
    x.abs() / 2.0 * bracket(s, k, (1.0 + 2.0 * a) / s)
        + x / 4.0 * bracket(s, k, (2.0 * a - 1.0) / s)
        - 0.25
}

/// The memory-kernel formulas published for `x = 1/2`; the Fisher
/// information there carries `sin^2(phi) = 1/2` built in.
pub fn werner_printed_memory_half(a: f64, k: f64) -> MeasureTriple {
    let s = (1.0 + 8.0 * a * a).sqrt();
    let coh = bracket(s, k, (1.0 + 2.0 * a) / s);
    let concurrence = 0.125 * 3.0 * bracket(s, k, (1.0 + 6.0 * a) / (3.0 * s)) - 0.25;
    let denom = 1.0 - 0.5 * bracket(s, k, -(1.0 - 2.0 * a) / s);
    MeasureTriple {
        coherence_l1: 0.5 * coh,
        concurrence: concurrence.max(0.0),
        qfi: 0.25 * coh * coh / denom,
    }
}

fn check_werner_inputs(x: f64, a: f64) -> Result<WernerParam> {
    let w = WernerParam::new(x)?;
    if !(a.abs() <= 1.0) {
        return Err(Error::Positivity {
            a,
            min_eigenvalue: f64::NAN,
        });
    }
    Ok(w)
}

/// Published Werner closed forms over a time grid.
///
/// Markov memory uses the Markovian formulas; finite memory substitutes the
/// integrated rate, and for `x = 1/2` uses the memory-kernel formulas as
/// published (whose Fisher information ignores `phi`).
pub fn werner_series_printed(
    x: f64,
    bath: &BathSpec,
    a: f64,
    memory: MemorySpec,
    phi: f64,
    times: &[f64],
) -> Result<Vec<MeasureTriple>> {
    check_werner_inputs(x, a)?;
    times
        .iter()
        .map(|&t| {
            let k = integrated_rate(bath, memory, t)?;
            Ok(if !memory.is_markov() && x == 0.5 {
                werner_printed_memory_half(a, k)
            } else {
                werner_printed_at(x, a, phi, k)
            })
        })
        .collect()
}

/// Measures on the exactly propagated Werner state.
pub fn werner_series_oracle(
    x: f64,
    bath: &BathSpec,
    a: f64,
    memory: MemorySpec,
    phi: f64,
    times: &[f64],
) -> Result<Vec<MeasureTriple>> {
    let w = check_werner_inputs(x, a)?;
    let s0 = from_werner(w);
    let obs = FisherObservable::new(phi);
    times
        .iter()
        .map(|&t| Ok(measures_xstate(&propagate(&s0, bath, a, memory, t)?, &obs)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn werner(x: f64) -> SymXState {
        from_werner(WernerParam::new(x).unwrap())
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn coherence_examples() {
        let diag = DensityMatrix::new(ComplexMatrix::from_diag(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        assert_eq!(l1_coherence(&diag), 0.0);
        assert_eq!(l1_coherence(&werner(0.5).to_density().unwrap()), 0.5);
        let uniform =
            DensityMatrix::new(ComplexMatrix::from_real(4, &[0.25; 16]).unwrap()).unwrap();
        assert!((l1_coherence(&uniform) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        let product =
            DensityMatrix::pure(&[c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(concurrence_general(&product).unwrap() < 1e-7);
        let singlet =
            DensityMatrix::pure(&[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((concurrence_general(&singlet).unwrap() - 1.0).abs() < 1e-12);
        let w = werner(0.5);
        assert!((concurrence_general(&w.to_density().unwrap()).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(concurrence_xstate(&w), 0.125);
        assert!(concurrence_xstate(&werner(1.0 / 3.0)).abs() < 1e-16);
        assert_eq!(concurrence_xstate(&werner(1.0)), 0.5);
    }

    #[test]
    fn qfi_examples() {
        let obs = FisherObservable::new(FRAC_PI_4);
        let w = werner(0.5);
        assert!((qfi_spectral(&w.to_density().unwrap(), &obs).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert!((qfi_xstate(&w, &obs).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(qfi_xstate(&w, &FisherObservable::new(0.0)).unwrap(), 0.0);
        let real = SymXState::new(0.2, 0.3, c(0.1, 0.0), c(0.05, 0.02)).unwrap();
        assert!(
            qfi_spectral(&real.to_density().unwrap(), &FisherObservable::new(0.0)).unwrap() < 1e-14
        );
        let none = SymXState::new(0.2, 0.3, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(qfi_xstate(&none, &obs).unwrap(), 0.0);
        let empty = SymXState::new(0.5, 0.0, c(0.0, 0.0), c(0.1, 0.0)).unwrap();
        assert!(matches!(
            qfi_xstate(&empty, &obs),
            Err(Error::DegenerateState(_))
        ));
    }

    #[test]
    fn qfi_vanishes_for_commuting_state() {
        // diagonal in the eigenbasis of A: mixture of |00>, |11> and A's eigenvectors
        let obs = FisherObservable::new(0.3);
        let eig = herm_eig(&obs.matrix()).unwrap();
        let probs = [0.1, 0.2, 0.3, 0.4];
        let rho = eig.map_spectrum(|_| 0.0);
        let mut rho = rho;
        for (k, p) in probs.iter().enumerate() {
            let v = eig.vector(k);
            rho = &rho + &ComplexMatrix::outer(&v, &v).scale_re(*p);
        }
        let rho = DensityMatrix::new(rho).unwrap();
        assert!(qfi_spectral(&rho, &obs).unwrap() < 1e-14);
    }

    #[test]
    fn printed_series_examples() {
        let b = BathSpec::new(1.0, 0.0).unwrap();
        let times = [0.0, 1.0, 3.0];
        let s = werner_series_printed(0.5, &b, 0.0, MemorySpec::Markov, FRAC_PI_4, &times).unwrap();
        assert!((s[1].coherence_l1 - 0.5 * (-1.0f64).exp()).abs() < 1e-15);
        let s = werner_series_printed(0.5, &b, 1.0, MemorySpec::Markov, FRAC_PI_4, &times).unwrap();
        for m in &s {
            assert!((m.coherence_l1 - 0.5).abs() < 1e-15);
        }
        assert!((s[0].qfi - 0.5).abs() < 1e-15);
    }

    #[test]
    fn memory_half_formulas_agree_with_general_form() {
        for &a in &[0.0, 0.5, 0.75, 1.0] {
            for &k in &[0.0, 0.3, 2.0] {
                let general = werner_printed_at(0.5, a, FRAC_PI_4, k);
                let half = werner_printed_memory_half(a, k);
                assert!((general.coherence_l1 - half.coherence_l1).abs() < 1e-15);
                assert!((general.concurrence - half.concurrence).abs() < 1e-15);
                assert!((general.qfi - half.qfi).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn oracle_series_frozen() {
        let b = BathSpec::new(1.0, 0.0).unwrap();
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 0.5).collect();
        let s = werner_series_oracle(0.5, &b, 1.0, MemorySpec::Markov, FRAC_PI_4, &times).unwrap();
        for m in s {
            assert!((m.coherence_l1 - 0.5).abs() < 1e-12);
            assert!((m.concurrence - 0.125).abs() < 1e-12);
            assert!((m.qfi - 1.0 / 6.0).abs() < 1e-12);
        }
    }
}
