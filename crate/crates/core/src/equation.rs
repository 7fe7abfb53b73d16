//! Canonical form of the generalized Monge-Ampère equation.
//!
//! Pointwise the equation reads `σ_n(λ) = Σ_{k<n} γ_k σ_k(λ)` where `λ` are
//! the eigenvalues of `Ω_φ` relative to `ω`. Two other coefficient
//! conventions are accepted as adapters:
//!
//! * [`Convention::Geneq`]: `Ω_φ^n = Σ_{k=0}^{n-1} C(n,k) c_k Ω_φ^{n-k} ω^k`
//! * [`Convention::Speclagma`]: `Ω_φ^n = Σ_{k<n} c_k Ω_φ^k ω^{n-k}`
//!
//! Both are reduced with `Ω_φ^k ∧ ω^{n-k} / ω^n = σ_k(λ) / C(n,k)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symfun::{binomial, sigma_all, sigma_deleted, Spectrum};

/// Default positivity floor for "strictly positive throughout".
pub const DEFAULT_EPS_POS: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquationError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("GENEQ conversion needs c_0 < 1, got c_0 = {c0}")]
    DegenerateLeadingCoefficient { c0: f64 },
    #[error("spectrum is not positive (min eigenvalue {min})")]
    NonPositiveSpectrum { min: f64 },
    #[error("class integral I_0 must be positive, got {i0}")]
    NonPositiveVolume { i0: f64 },
    #[error("coefficient gamma_0 is nonzero ({gamma0}); it has no GENEQ representation")]
    NotRepresentable { gamma0: f64 },
    #[error("field coefficient has {found} samples, expected {expected}")]
    FieldLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Convention {
    Geneq,
    Speclagma,
    Direct,
}

/// A coefficient that is either constant or sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Constant(f64),
    Field(Vec<f64>),
}

impl Coefficient {
    #[inline]
    pub fn at(&self, idx: usize) -> f64 {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Field(v) => v[idx],
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Field(v) => v.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Field(v) => v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Coefficient::Constant(_))
    }

    /// Grid mean, using the fixed-order chunked sum of [`crate::reduce`].
    pub fn mean(&self) -> f64 {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Field(v) => crate::reduce::mean(v),
        }
    }
}

/// Canonical coefficients `(γ_0, …, γ_{n-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaCoefficients {
    n: usize,
    gamma: Vec<Coefficient>,
    origin: Convention,
}

impl GammaCoefficients {
    pub fn constant(gamma: Vec<f64>, origin: Convention) -> Result<Self, EquationError> {
        if gamma.is_empty() {
            return Err(EquationError::ZeroDimension);
        }
        Ok(Self {
            n: gamma.len(),
            gamma: gamma.into_iter().map(Coefficient::Constant).collect(),
            origin,
        })
    }

    pub fn from_coefficients(
        gamma: Vec<Coefficient>,
        origin: Convention,
    ) -> Result<Self, EquationError> {
        if gamma.is_empty() {
            return Err(EquationError::ZeroDimension);
        }
        let mut len = None;
        for c in &gamma {
            if let Coefficient::Field(v) = c {
                match len {
                    None => len = Some(v.len()),
                    Some(l) if l != v.len() => {
                        return Err(EquationError::FieldLength {
                            expected: l,
                            found: v.len(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(Self {
            n: gamma.len(),
            gamma,
            origin,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn origin(&self) -> Convention {
        self.origin
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.gamma
    }

    pub fn coefficient(&self, k: usize) -> &Coefficient {
        &self.gamma[k]
    }

    /// Replaces `γ_0`, keeping the tail.
    pub fn with_gamma0(&self, gamma0: Coefficient) -> Self {
        let mut g = self.clone();
        g.gamma[0] = gamma0;
        g
    }

    /// Constant values, or `None` if any entry is a field.
    pub fn as_constants(&self) -> Option<Vec<f64>> {
        self.gamma
            .iter()
            .map(|c| match c {
                Coefficient::Constant(v) => Some(*v),
                Coefficient::Field(_) => None,
            })
            .collect()
    }

    /// Constant tail `(γ_1, …, γ_{n-1})`, or `None` if any tail entry is a field.
    pub fn constant_tail(&self) -> Option<Vec<f64>> {
        self.gamma[1..]
            .iter()
            .map(|c| match c {
                Coefficient::Constant(v) => Some(*v),
                Coefficient::Field(_) => None,
            })
            .collect()
    }

    /// Writes the coefficient values at grid point `idx` into `out[..n]`.
    #[inline]
    pub fn values_at(&self, idx: usize, out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.gamma) {
            *o = c.at(idx);
        }
    }
}

/// Converts coefficients from `convention` to canonical γ.
pub fn to_gamma(
    c: &[f64],
    convention: Convention,
    n: usize,
) -> Result<GammaCoefficients, EquationError> {
    if n == 0 {
        return Err(EquationError::ZeroDimension);
    }
    if c.len() != n {
        return Err(EquationError::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let gamma = match convention {
        Convention::Direct => c.to_vec(),
        Convention::Speclagma => c
            .iter()
            .enumerate()
            .map(|(k, &ck)| ck / binomial(n, k))
            .collect(),
        Convention::Geneq => {
            let c0 = c[0];
            if c0 >= 1.0 || !c0.is_finite() {
                return Err(EquationError::DegenerateLeadingCoefficient { c0 });
            }
            let scale = 1.0 - c0;
            let mut gamma = vec![0.0; n];
            for k in 1..n {
                gamma[n - k] = c[k] / scale;
            }
            gamma
        }
    };
    GammaCoefficients::constant(gamma, convention)
}

/// Inverse of [`to_gamma`] for constant coefficients. GENEQ needs `c0`
/// because the canonical form does not retain it.
pub fn from_gamma(
    gamma: &[f64],
    convention: Convention,
    c0: f64,
) -> Result<Vec<f64>, EquationError> {
    let n = gamma.len();
    if n == 0 {
        return Err(EquationError::ZeroDimension);
    }
    Ok(match convention {
        Convention::Direct => gamma.to_vec(),
        Convention::Speclagma => gamma
            .iter()
            .enumerate()
            .map(|(k, &g)| g * binomial(n, k))
            .collect(),
        Convention::Geneq => {
            if c0 >= 1.0 {
                return Err(EquationError::DegenerateLeadingCoefficient { c0 });
            }
            if gamma[0] != 0.0 {
                return Err(EquationError::NotRepresentable { gamma0: gamma[0] });
            }
            let scale = 1.0 - c0;
            let mut c = vec![0.0; n];
            c[0] = c0;
            for k in 1..n {
                c[k] = gamma[n - k] * scale;
            }
            c
        }
    })
}

/// `σ_n − Σ γ_k σ_k` given precomputed σ's.
#[inline]
pub fn residual_from_sigmas(sigma: &[f64], gamma: &[f64]) -> f64 {
    let n = gamma.len();
    let mut r = sigma[n];
    for k in 0..n {
        r -= gamma[k] * sigma[k];
    }
    r
}

/// Pointwise residual `σ_n(λ) − Σ_k γ_k σ_k(λ)`.
pub fn residual(lam: &Spectrum, gamma: &[f64]) -> Result<f64, EquationError> {
    if lam.n() != gamma.len() {
        return Err(EquationError::DimensionMismatch {
            expected: gamma.len(),
            found: lam.n(),
        });
    }
    Ok(residual_from_sigmas(&sigma_all(lam.values()), gamma))
}

/// Margins `m_i = σ_{n-1}(λ_{-i}) − Σ_{k≥1} γ_k σ_{k-1}(λ_{-i})` without
/// the positivity precondition. These are the partial derivatives of the
/// residual in the eigenvalues.
pub fn cone_margins_unchecked(lam: &[f64], gamma: &[f64]) -> Vec<f64> {
    let n = lam.len();
    (0..n)
        .map(|i| {
            let del = sigma_deleted(lam, i);
            let mut m = del[n - 1];
            for k in 1..n {
                m -= gamma[k] * del[k - 1];
            }
            m
        })
        .collect()
}

/// Cone margins at a positive spectrum; the cone condition holds at this
/// point iff every margin is positive.
pub fn cone_margins(lam: &Spectrum, gamma: &[f64]) -> Result<Vec<f64>, EquationError> {
    if lam.n() != gamma.len() {
        return Err(EquationError::DimensionMismatch {
            expected: gamma.len(),
            found: lam.n(),
        });
    }
    if !lam.is_positive() {
        return Err(EquationError::NonPositiveSpectrum { min: lam.min() });
    }
    Ok(cone_margins_unchecked(lam.values(), gamma))
}

/// `I_k = ∫ Ω^k ∧ ω^{n-k}` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassIntegrals {
    values: Vec<f64>,
}

impl ClassIntegrals {
    pub fn new(values: Vec<f64>) -> Result<Self, EquationError> {
        if values.len() < 2 {
            return Err(EquationError::ZeroDimension);
        }
        if values[0] <= 0.0 || !values[0].is_finite() {
            return Err(EquationError::NonPositiveVolume { i0: values[0] });
        }
        Ok(Self { values })
    }

    /// Class integrals of a background with constant spectrum on a space of
    /// ω-volume `volume`: `I_k = volume · σ_k(λ) / C(n,k)`.
    pub fn from_constant_spectrum(lam: &[f64], volume: f64) -> Result<Self, EquationError> {
        let n = lam.len();
        let s = sigma_all(lam);
        Self::new((0..=n).map(|k| volume * s[k] / binomial(n, k)).collect())
    }

    /// Class integrals from per-point σ vectors of a sampled field, with unit
    /// total ω-volume.
    pub fn from_sigma_samples<'a, I>(n: usize, samples: I) -> Result<Self, EquationError>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut acc = vec![Vec::new(); n + 1];
        for s in samples {
            for (k, a) in acc.iter_mut().enumerate() {
                a.push(s[k]);
            }
        }
        Self::new(
            acc.iter()
                .enumerate()
                .map(|(k, a)| crate::reduce::mean(a) / binomial(n, k))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// The `γ_0` that makes the integrated equation consistent:
/// `γ_0 = (I_n − Σ_{k=1}^{n-1} γ_k C(n,k) I_k) / I_0`.
pub fn calibrate_gamma0(tail: &[f64], integrals: &ClassIntegrals) -> Result<f64, EquationError> {
    let n = integrals.n();
    if tail.len() + 1 != n {
        return Err(EquationError::DimensionMismatch {
            expected: n - 1,
            found: tail.len(),
        });
    }
    let i = integrals.values();
    let mut num = i[n];
    for k in 1..n {
        num -= tail[k - 1] * binomial(n, k) * i[k];
    }
    Ok(num / i[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoefficientClass {
    IdenticallyZero,
    UniformlyPositive,
    Inadmissible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub classes: Vec<CoefficientClass>,
    pub minima: Vec<f64>,
    pub maxima: Vec<f64>,
    pub eps_pos: f64,
    pub admissible: bool,
}

/// Classifies every γ_k as identically zero, uniformly positive (min ≥
/// `eps_pos`), or inadmissible. Admissible iff nothing is inadmissible and
/// `Σ γ_k > 0` somewhere.
pub fn admissibility_check(g: &GammaCoefficients, eps_pos: f64) -> AdmissibilityReport {
    let mut classes = Vec::with_capacity(g.n());
    let mut minima = Vec::with_capacity(g.n());
    let mut maxima = Vec::with_capacity(g.n());
    for c in g.coefficients() {
        let (lo, hi) = (c.min(), c.max());
        minima.push(lo);
        maxima.push(hi);
        classes.push(if lo == 0.0 && hi == 0.0 {
            CoefficientClass::IdenticallyZero
        } else if lo >= eps_pos {
            CoefficientClass::UniformlyPositive
        } else {
            CoefficientClass::Inadmissible
        });
    }
    let none_bad = classes.iter().all(|c| *c != CoefficientClass::Inadmissible);
    // With no inadmissible entry all γ_k ≥ 0, so Σγ_k > 0 somewhere iff some
    // entry is uniformly positive.
    let some_positive = classes.contains(&CoefficientClass::UniformlyPositive);
    AdmissibilityReport {
        classes,
        minima,
        maxima,
        eps_pos,
        admissible: none_bad && some_positive,
    }
}
