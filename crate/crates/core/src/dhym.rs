//! The dHYM ↔ generalized Monge-Ampère dictionary.
//!
//! With `μ` the eigenvalues of `√−1F` relative to `ω`, the dHYM equation is
//! `Im(e^{−iθ̂} Π_j (1 + iμ_j)) = 0`. Shifting the background by a multiple
//! of `ω` (`−tan θ̂` in odd dimension, `+cot θ̂` in even dimension) turns it
//! into `Ω_φ^n = Σ_{k<n} c_k Ω_φ^k ω^{n−k}`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symfun::binomial;

/// Minimum of `|cos θ̂|` (odd n) or `|sin θ̂|` (even n).
pub const PHASE_FLOOR: f64 = 1e-8;
/// Below this, the leading coefficient of the expansion is degenerate.
pub const KAPPA_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DhymError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("phase {theta_hat} is outside the admissible window for n = {n} ({parity:?} needs |{}| >= {PHASE_FLOOR:e})", if *.parity == Parity::Odd { "cos" } else { "sin" })]
    InadmissiblePhase {
        n: usize,
        theta_hat: f64,
        parity: Parity,
    },
    #[error("degenerate phase: leading coefficient {kappa:e}")]
    DegeneratePhase { kappa: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Parity {
    Odd,
    Even,
}

/// Dimension and constant phase angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpec {
    n: usize,
    theta_hat: f64,
}

impl PhaseSpec {
    pub fn new(n: usize, theta_hat: f64) -> Result<Self, DhymError> {
        if n == 0 {
            return Err(DhymError::ZeroDimension);
        }
        let parity = parity_of(n);
        let guard = match parity {
            Parity::Odd => theta_hat.cos().abs(),
            Parity::Even => theta_hat.sin().abs(),
        };
        if !(guard >= PHASE_FLOOR) {
            return Err(DhymError::InadmissiblePhase {
                n,
                theta_hat,
                parity,
            });
        }
        Ok(Self { n, theta_hat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta_hat(&self) -> f64 {
        self.theta_hat
    }

    pub fn parity(&self) -> Parity {
        parity_of(self.n)
    }

    /// The scalar `s` with `Ω = √−1F_0 + s·ω`: `−tan θ̂` (odd) or `cot θ̂` (even).
    pub fn shift(&self) -> f64 {
        match self.parity() {
            Parity::Odd => -self.theta_hat.tan(),
            Parity::Even => 1.0 / self.theta_hat.tan(),
        }
    }
}

pub fn parity_of(n: usize) -> Parity {
    if n % 2 == 1 {
        Parity::Odd
    } else {
        Parity::Even
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoefficientSource {
    ClosedForm,
    Oracle,
}

/// `c_0..c_{n−1}` in the `Ω_φ^n = Σ c_k Ω_φ^k ω^{n−k}` convention, with the
/// leading coefficient `κ` of `Im(e^{−iθ̂} W^n)`, so that
/// `Im(e^{−iθ̂} W^n) = κ (a^n − Σ c_k a^k b^{n−k})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DhymCoefficients {
    pub c: Vec<f64>,
    pub kappa: f64,
    pub source: CoefficientSource,
}

/// Expands `E(a, b) = Im(e^{−iθ̂} (b(1 + i s') + i a)^n)` as a polynomial
/// and reads off the coefficients. `s' = tan θ̂` (odd) or `−cot θ̂` (even).
pub fn oracle_ck(spec: &PhaseSpec) -> Result<DhymCoefficients, DhymError> {
    let n = spec.n();
    let t = -spec.shift();
    let u = Complex64::new(1.0, t); // coefficient of b in W
    let i = Complex64::new(0.0, 1.0); // coefficient of a in W
    // poly[k] = coefficient of a^k b^{n−k} in W^n, built by repeated
    // multiplication with (u·b + i·a).
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..n {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (k, p) in poly.iter().enumerate() {
            next[k] += p * u;
            next[k + 1] += p * i;
        }
        poly = next;
    }
    let rot = Complex64::from_polar(1.0, -spec.theta_hat());
    let e: Vec<f64> = poly.iter().map(|p| (rot * p).im).collect();
    let kappa = e[n];
    if kappa.abs() < KAPPA_FLOOR {
        return Err(DhymError::DegeneratePhase { kappa });
    }
    Ok(DhymCoefficients {
        c: e[..n].iter().map(|ek| -ek / kappa).collect(),
        kappa,
        source: CoefficientSource::Oracle,
    })
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Closed-form coefficients.
///
/// Odd `n = 2m+1`:
/// `c_{2j}   = (−1)^{m+j+1} C(n,2j)   sec^{2m+2−2j}θ̂ sin((2m−2j)θ̂)`,
/// `c_{2j+1} = (−1)^{m+j+1} C(n,2j+1) sec^{2m−2j+1}θ̂ cos((2m−2j−1)θ̂)`.
///
/// Even `n = 2m`:
/// `c_k = csc^{2m−k}θ̂ (−1)^k C(2m,k) [cot θ̂ sin((2m−k)θ̂) − cos((2m−k)θ̂)]`.
///
/// `κ` is `(−1)^m cos θ̂` (odd) or `−(−1)^m sin θ̂` (even).
pub fn closed_form_ck(spec: &PhaseSpec) -> Result<DhymCoefficients, DhymError> {
    let n = spec.n();
    let th = spec.theta_hat();
    let m = n / 2;
    let (c, kappa) = match spec.parity() {
        Parity::Odd => {
            let sec = 1.0 / th.cos();
            let c = (0..n)
                .map(|k| {
                    let j = k / 2;
                    let s = sign(m + j + 1);
                    if k % 2 == 0 {
                        s * binomial(n, k)
                            * sec.powi((2 * m + 2 - 2 * j) as i32)
                            * ((2 * m - 2 * j) as f64 * th).sin()
                    } else {
                        s * binomial(n, k)
                            * sec.powi((2 * m - 2 * j + 1) as i32)
                            * ((2 * m - 2 * j - 1) as f64 * th).cos()
                    }
                })
                .collect();
            (c, sign(m) * th.cos())
        }
        Parity::Even => {
            let csc = 1.0 / th.sin();
            let cot = th.cos() / th.sin();
            let c = (0..n)
                .map(|k| {
                    let p = (n - k) as f64;
                    csc.powi((n - k) as i32)
                        * sign(k)
                        * binomial(n, k)
                        * (cot * (p * th).sin() - (p * th).cos())
                })
                .collect();
            (c, -sign(m) * th.sin())
        }
    };
    if kappa.abs() < KAPPA_FLOOR {
        return Err(DhymError::DegeneratePhase { kappa });
    }
    Ok(DhymCoefficients {
        c,
        kappa,
        source: CoefficientSource::ClosedForm,
    })
}

/// The alternative even-dimensional expression
/// `csc^{2m−k}θ̂ (−1)^{2m−k+1} C(2m,k) sin((2m−k−1)θ̂)`.
///
/// It equals `−sin θ̂` times [`closed_form_ck`] and is kept only for
/// comparison; it does not solve the equation.
pub fn alt_even_ck(spec: &PhaseSpec) -> Option<Vec<f64>> {
    if spec.parity() != Parity::Even {
        return None;
    }
    let n = spec.n();
    let th = spec.theta_hat();
    let csc = 1.0 / th.sin();
    Some(
        (0..n)
            .map(|k| {
                csc.powi((n - k) as i32)
                    * sign(n - k + 1)
                    * binomial(n, k)
                    * ((n - k - 1) as f64 * th).sin()
            })
            .collect(),
    )
}

/// Pointwise closed-form coefficients for a spatially varying phase.
/// Returns one field per `c_k`.
pub fn closed_form_ck_field(n: usize, thetas: &[f64]) -> Result<Vec<Vec<f64>>, DhymError> {
    let mut fields = vec![Vec::with_capacity(thetas.len()); n];
    for &th in thetas {
        let c = closed_form_ck(&PhaseSpec::new(n, th)?)?;
        for (f, ck) in fields.iter_mut().zip(c.c) {
            f.push(ck);
        }
    }
    Ok(fields)
}

/// `Σ arctan μ_i`, principal branch per summand.
pub fn lagrangian_phase(mu: &[f64]) -> f64 {
    mu.iter().map(|m| m.atan()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Supercritical {
    pub holds: bool,
    pub phase: f64,
    /// Signed distance to the nearer endpoint of `((n−2)π/2, nπ/2)`.
    pub margin: f64,
}

pub fn is_supercritical(mu: &[f64]) -> Supercritical {
    let n = mu.len() as f64;
    let phase = lagrangian_phase(mu);
    let lo = (n - 2.0) * FRAC_PI_2;
    let hi = n * FRAC_PI_2;
    let margin = (phase - lo).min(hi - phase);
    Supercritical {
        holds: margin > 0.0,
        phase,
        margin,
    }
}

/// `Im(e^{−iθ̂} Π_j (1 + iμ_j))`.
pub fn dhym_residual(mu: &[f64], theta_hat: f64) -> f64 {
    let prod = mu
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &m| acc * Complex64::new(1.0, m));
    (Complex64::from_polar(1.0, -theta_hat) * prod).im
}

/// `Ω = α + s·ω` with `s` from [`PhaseSpec::shift`].
pub fn background_shift(
    spec: &PhaseSpec,
    alpha: &DMatrix<Complex64>,
    omega: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>, DhymError> {
    check_square(spec.n(), alpha)?;
    check_square(spec.n(), omega)?;
    Ok(alpha + omega.scale(spec.shift()))
}

/// Inverse of [`background_shift`].
pub fn background_unshift(
    spec: &PhaseSpec,
    big_omega: &DMatrix<Complex64>,
    omega: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>, DhymError> {
    check_square(spec.n(), big_omega)?;
    check_square(spec.n(), omega)?;
    Ok(big_omega - omega.scale(spec.shift()))
}

fn check_square(n: usize, m: &DMatrix<Complex64>) -> Result<(), DhymError> {
    if m.nrows() != n || m.ncols() != n {
        return Err(DhymError::DimensionMismatch {
            expected: n,
            found: m.nrows(),
        });
    }
    Ok(())
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}
