//! Physical inputs and the quantities derived from them.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Spontaneous decay rate and thermal occupation of the shared bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    gamma: f64,
    n_occ: f64,
}

impl BathSpec {
    pub fn new(gamma: f64, n_occ: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
        }
        if !(n_occ.is_finite() && n_occ >= 0.0) {
            return Err(Error::Domain(format!(
                "thermal occupation must be >= 0, got {n_occ}"
            )));
        }
        Ok(Self { gamma, n_occ })
    }

    /// Bath at temperature given through `hbar*omega / (k_B T)`.
    pub fn from_temperature_ratio(gamma: f64, ratio: f64) -> Result<Self> {
        Self::new(gamma, planck_occupation(ratio)?)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n_occ(&self) -> f64 {
        self.n_occ
    }

    /// Total population relaxation rate `gamma (2N + 1)`.
    pub fn kappa(&self) -> f64 {
        self.gamma * (2.0 * self.n_occ + 1.0)
    }
}

/// Dimensionless separation `k0 r` and the cosine of the angle between the
/// transition dipole and the separation vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySpec {
    k0r: f64,
    cos_mu_r: f64,
}

impl GeometrySpec {
    pub fn new(k0r: f64, cos_mu_r: f64) -> Result<Self> {
        if !(k0r.is_finite() && k0r > 0.0) {
            return Err(Error::Domain(format!("k0 r must be > 0, got {k0r}")));
        }
        if !(cos_mu_r.is_finite() && cos_mu_r.abs() <= 1.0) {
            return Err(Error::Domain(format!(
                "cos(mu, r) must lie in [-1, 1], got {cos_mu_r}"
            )));
        }
        Ok(Self { k0r, cos_mu_r })
    }

    pub fn k0r(&self) -> f64 {
        self.k0r
    }

    pub fn cos_mu_r(&self) -> f64 {
        self.cos_mu_r
    }
}

/// Bath memory: either memoryless or an exponential kernel with inverse
/// correlation time `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MemorySpec {
    Markov,
    Finite(f64),
}

impl MemorySpec {
    pub fn finite(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Domain(format!(
                "memory rate must be > 0, got {lambda}"
            )));
        }
        Ok(Self::Finite(lambda))
    }

    pub fn is_markov(&self) -> bool {
        matches!(self, Self::Markov)
    }

    /// Instantaneous rate multiplier `1 - exp(-lambda t)` (1 for Markov).
    pub fn rate_factor(&self, t: f64) -> f64 {
        match *self {
            Self::Markov => 1.0,
            Self::Finite(lambda) => -(-lambda * t).exp_m1(),
        }
    }

    /// Integrated rate multiplier `\int_0^t (1 - e^{-lambda s}) ds = t * Theta(t)`.
    pub fn effective_time(&self, t: f64) -> Result<f64> {
        Ok(t * memory_theta(*self, t)?)
    }
}

/// Mean thermal occupation `1 / (exp(ratio) - 1)`.
///
/// Results below `1e-300` are flushed to zero.
pub fn planck_occupation(ratio: f64) -> Result<f64> {
    if !(ratio > 0.0) {
        return Err(Error::Domain(format!(
            "hbar*omega/(k_B T) must be > 0, got {ratio}"
        )));
    }
    let n = 1.0 / ratio.exp_m1();
    Ok(if n < 1e-300 { 0.0 } else { n })
}

/// `(z cos z - sin z) / z^3`, with a series branch near the origin.
fn near_field_term(z: f64) -> f64 {
    if z < 0.5 {
        // sum_{k>=1} (-1)^k 2k / (2k+1)! z^{2k-2}
        let z2 = z * z;
        let mut sum = 0.0;
        let mut pow = 1.0;
        let mut fact = 6.0; // (2k+1)! for k = 1
        for k in 1..=12 {
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            sum += sign * (2 * k) as f64 / fact * pow;
            pow *= z2;
            let m = (2 * k + 2) as f64;
            fact *= m * (m + 1.0);
        }
        sum
    } else {
        (z * z.cos() - z.sin()) / (z * z * z)
    }
}

/// Collective decay ratio `a = gamma_12 / gamma`.
pub fn collective_rate_ratio(g: &GeometrySpec) -> f64 {
    let z = g.k0r;
    let c2 = g.cos_mu_r * g.cos_mu_r;
    let sinc = if z < 1e-4 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    };
    1.5 * ((1.0 - c2) * sinc + (1.0 - 3.0 * c2) * near_field_term(z))
}

/// Dipole-dipole coupling `Omega_12` for decay rates `gamma1`, `gamma2`.
pub fn coherent_coupling(g: &GeometrySpec, gamma1: f64, gamma2: f64) -> Result<f64> {
    if !(gamma1 > 0.0 && gamma2 > 0.0) {
        return Err(Error::Domain("decay rates must be > 0".into()));
    }
    let z = g.k0r;
    let c2 = g.cos_mu_r * g.cos_mu_r;
    let bracket =
        -(1.0 - c2) * z.cos() / z + (1.0 - 3.0 * c2) * (z.sin() / (z * z) + z.cos() / (z * z * z));
    Ok(0.75 * (gamma1 * gamma2).sqrt() * bracket)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingSpectrum {
    /// Ascending eigenvalues of the damping-basis coefficient matrix.
    pub values: [f64; 4],
    pub positive: bool,
}

/// Damping-basis coefficient matrix in the `(sigma_1^-, sigma_1^+, sigma_2^-, sigma_2^+)` ordering.
pub fn damping_matrix(b: &BathSpec, a: f64) -> ComplexMatrix {
    let g = b.gamma;
    let n = b.n_occ;
    let g12 = a * g;
    #[rustfmt::skip]
    let m = [
        g * (n + 1.0), 0.0,   g12 * (n + 1.0), 0.0,
        0.0,           g * n, 0.0,             g12 * n,
        g12 * (n + 1.0), 0.0, g * (n + 1.0),   0.0,
        0.0,           g12 * n, 0.0,           g * n,
    ];
    ComplexMatrix::from_real(4, &m).expect("finite damping matrix")
}

/// Spectrum of [`damping_matrix`], obtained from its 2x2 block structure.
pub fn damping_spectrum(b: &BathSpec, a: f64) -> DampingSpectrum {
    let g = b.gamma;
    let n = b.n_occ;
    let mut values = [
        g * (n + 1.0) * (1.0 - a),
        g * (n + 1.0) * (1.0 + a),
        g * n * (1.0 - a),
        g * n * (1.0 + a),
    ];
    values.sort_by(f64::total_cmp);
    // N = 0 leaves two exact zeros whatever a is, so test the factors instead
    let positive = (1.0 - a) >= 0.0 && (1.0 + a) >= 0.0;
    DampingSpectrum { values, positive }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryPositivity {
    pub r: f64,
    pub theta: f64,
    pub lhs: f64,
    pub holds: bool,
}

/// Positivity in the `R sin^2(phi) sin(k0 r - theta) / k0 r <= 2/3` form.
///
/// `theta` comes from `atan2`, which fixes the quadrant so that
/// `R cos(theta) = 1 + q/z^2` and `R sin(theta) = q/z` with `q = 2 cot^2 phi - 1`.
pub fn geometry_positivity(g: &GeometrySpec) -> Result<GeometryPositivity> {
    let c2 = g.cos_mu_r * g.cos_mu_r;
    let s2 = 1.0 - c2;
    if s2 <= 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    let z = g.k0r;
    let q = 2.0 * c2 / s2 - 1.0;
    let x = 1.0 + q / (z * z);
    let y = q / z;
    let r = x.hypot(y);
    let theta = y.atan2(x);
    let lhs = r * s2 * (z - theta).sin() / z;
    Ok(GeometryPositivity {
        r,
        theta,
        lhs,
        holds: lhs <= 2.0 / 3.0,
    })
}

/// Memory factor `Theta = 1 + (exp(-lambda t) - 1) / (lambda t)`.
///
/// `Theta(0) = 0` by continuity and Markov memory gives exactly 1. Below
/// `lambda t = 0.5` the alternating series is summed directly to avoid the
/// cancellation in `exp(-y) - 1 + y`.
pub fn memory_theta(m: MemorySpec, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    let lambda = match m {
        MemorySpec::Markov => return Ok(1.0),
        MemorySpec::Finite(l) => l,
    };
    let y = lambda * t;
    if y < 0.5 {
        Ok(theta_series(y, 30))
    } else {
        Ok(1.0 + (-y).exp_m1() / y)
    }
}

/// `sum_{k=1}^{terms} (-1)^{k+1} y^k / (k+1)!`
pub(crate) fn theta_series(y: f64, terms: usize) -> f64 {
    let mut sum = 0.0;
    let mut term = y / 2.0;
    for k in 1..=terms {
        sum += term;
        term *= -y / (k as f64 + 2.0);
        if term == 0.0 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::herm_eig;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn planck_values() {
        assert_eq!(planck_occupation(700.0).unwrap(), 0.0);
        assert!((planck_occupation(2f64.ln()).unwrap() - 1.0).abs() < 1e-14);
        // 1/(e - 1)
        assert!((planck_occupation(1.0).unwrap() - 0.581_976_706_869_326_4).abs() < 1e-12);
        assert!(planck_occupation(0.0).is_err());
        assert!(planck_occupation(-1.0).is_err());
    }

    #[test]
    fn ratio_special_cases() {
        let c = (1.0f64 / 3.0).sqrt();
        let g = GeometrySpec::new(FRAC_PI_2, c).unwrap();
        assert!((collective_rate_ratio(&g) - 2.0 / PI).abs() < 1e-12);
        for cos in [-1.0, -0.3, 0.0, 0.5, 1.0] {
            let g = GeometrySpec::new(1e-3, cos).unwrap();
            assert!((collective_rate_ratio(&g) - 1.0).abs() < 1e-6);
        }
        let g = GeometrySpec::new(1000.0, c).unwrap();
        assert!(collective_rate_ratio(&g).abs() <= 2e-3);
    }

    #[test]
    fn series_branch_is_continuous() {
        for cos in [0.0, 0.4, 1.0] {
            let lo = collective_rate_ratio(&GeometrySpec::new(0.5 - 1e-12, cos).unwrap());
            let hi = collective_rate_ratio(&GeometrySpec::new(0.5 + 1e-12, cos).unwrap());
            assert!((lo - hi).abs() < 1e-12);
        }
    }

    #[test]
    fn coherent_coupling_cases() {
        let c = (1.0f64 / 3.0).sqrt();
        let g = GeometrySpec::new(PI, c).unwrap();
        let omega = coherent_coupling(&g, 1.0, 1.0).unwrap();
        assert!((omega - 1.0 / (2.0 * PI)).abs() < 1e-12);
        let far = GeometrySpec::new(1e8, 0.2).unwrap();
        assert!(coherent_coupling(&far, 1.0, 1.0).unwrap().abs() < 1e-7);
        assert!(coherent_coupling(&g, 0.0, 1.0).is_err());
    }

    #[test]
    fn damping_examples() {
        let b = BathSpec::new(1.0, 0.0).unwrap();
        let s = damping_spectrum(&b, 0.5);
        assert_eq!(s.values, [0.0, 0.0, 0.5, 1.5]);
        assert!(s.positive);
        let s = damping_spectrum(&b, 1.0);
        assert_eq!(s.values, [0.0, 0.0, 0.0, 2.0]);
        assert!(s.positive);
        let s = damping_spectrum(&b, 1.2);
        assert!((s.values[0] + 0.2).abs() < 1e-15);
        assert!(!s.positive);
    }

    #[test]
    fn damping_spectrum_matches_eigensolver() {
        for &(n, a) in &[(0.0, 0.3), (0.7, 0.9), (2.0, 1.3), (1.0, -0.4)] {
            let b = BathSpec::new(1.3, n).unwrap();
            let eig = herm_eig(&damping_matrix(&b, a)).unwrap();
            let s = damping_spectrum(&b, a);
            for (x, y) in eig.values.iter().zip(s.values) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn geometry_examples() {
        let c = (1.0f64 / 3.0).sqrt();
        let p = geometry_positivity(&GeometrySpec::new(2.7, c).unwrap()).unwrap();
        assert!(p.theta.abs() < 1e-15);
        assert!((p.r - 1.0).abs() < 1e-15);
        let p = geometry_positivity(&GeometrySpec::new(FRAC_PI_2, c).unwrap()).unwrap();
        assert!((p.lhs - (2.0 / PI) * (2.0 / 3.0)).abs() < 1e-12);
        assert!(p.holds);
        let p = geometry_positivity(&GeometrySpec::new(1e-3, c).unwrap()).unwrap();
        assert!(p.lhs < 2.0 / 3.0 && p.lhs > 2.0 / 3.0 - 1e-6);
        assert!(p.holds);
        assert_eq!(
            geometry_positivity(&GeometrySpec::new(1.0, 1.0).unwrap()),
            Err(Error::DegenerateGeometry)
        );
    }

    #[test]
    fn lhs_is_two_thirds_of_ratio() {
        for &(z, c) in &[(0.3, 0.1), (2.0, 0.9), (7.5, -0.5), (40.0, 0.0)] {
            let g = GeometrySpec::new(z, c).unwrap();
            let p = geometry_positivity(&g).unwrap();
            assert!((1.5 * p.lhs - collective_rate_ratio(&g)).abs() < 1e-9);
        }
    }

    #[test]
    fn theta_examples() {
        let m = MemorySpec::finite(2.0).unwrap();
        assert!((memory_theta(m, 0.5).unwrap() - (-1.0f64).exp()).abs() < 1e-12);
        assert!((memory_theta(m, 1e6).unwrap() - 1.0).abs() < 1e-6);
        let y = 1e-8;
        let th = memory_theta(MemorySpec::Finite(1.0), y).unwrap();
        assert!((th / (y / 2.0) - 1.0).abs() < 1e-6);
        assert_eq!(memory_theta(m, 0.0).unwrap(), 0.0);
        assert_eq!(memory_theta(MemorySpec::Markov, 3.0).unwrap(), 1.0);
        assert!(memory_theta(m, -1.0).is_err());
        assert!(MemorySpec::finite(0.0).is_err());
    }

    #[test]
    fn theta_branch_continuity() {
        let m = MemorySpec::Finite(1.0);
        let lo = memory_theta(m, 0.5 - 1e-13).unwrap();
        let hi = memory_theta(m, 0.5).unwrap();
        assert!((lo - hi).abs() < 1e-13);
    }
}
