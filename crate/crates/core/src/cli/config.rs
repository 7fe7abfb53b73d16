//! JSON configuration schemas. Unknown keys are rejected everywhere.

use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::equation::Convention;
use crate::toric::Q;
use crate::torus::{Background, SolverError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsConfig {
    pub n: usize,
    pub theta_hat: f64,
    /// Convention in which the coefficients are also reported.
    #[serde(default = "speclagma")]
    pub convention: Convention,
}

fn speclagma() -> Convention {
    Convention::Speclagma
}

fn direct() -> Convention {
    Convention::Direct
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    /// Eigenvalues of `Ω_φ` relative to `ω`.
    pub lambda: Vec<f64>,
    pub coefficients: Vec<f64>,
    #[serde(default = "direct")]
    pub convention: Convention,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BackgroundConfig {
    /// `s·ω`.
    Scale(f64),
    /// Row-major `n×n` entries as `[re, im]` pairs.
    Entries(Vec<[f64; 2]>),
}

impl BackgroundConfig {
    pub fn build(&self, n: usize) -> Result<Background, SolverError> {
        match self {
            BackgroundConfig::Scale(s) => Background::scaled_identity(n, *s),
            BackgroundConfig::Entries(e) => {
                let entries: Vec<Complex64> =
                    e.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                Background::from_entries(n, &entries)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientConfig {
    #[serde(default = "direct")]
    pub convention: Convention,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DhymConfig {
    pub theta_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub amplitude: f64,
    /// Integer wave vector ordered like the grid axes `x_1..x_n, y_1..y_n`.
    pub mode: Vec<i64>,
}

/// Manufactured problem: `φ*` is a sum of cosine modes and `γ_0` is the
/// field that makes it an exact solution for the constant `tail`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturedConfig {
    pub tail: Vec<f64>,
    pub modes: Vec<ModeConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub n: usize,
    pub grid_size: usize,
    pub background: BackgroundConfig,
    #[serde(default)]
    pub coefficients: Option<CoefficientConfig>,
    #[serde(default)]
    pub dhym: Option<DhymConfig>,
    #[serde(default)]
    pub manufactured: Option<ManufacturedConfig>,
    #[serde(default = "default_steps")]
    pub continuation_steps: usize,
    #[serde(default)]
    pub tol: Option<f64>,
    /// Potential to check; only read by `verify`.
    #[serde(default)]
    pub phi: Option<String>,
}

fn default_steps() -> usize {
    4
}

impl SolveConfig {
    pub(crate) fn check(&self) -> Result<(), CliError> {
        let sources = [
            self.coefficients.is_some(),
            self.dhym.is_some(),
            self.manufactured.is_some(),
        ];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(CliError::Invalid(
                "exactly one of `coefficients`, `dhym`, `manufactured` is required".into(),
            ));
        }
        if self.continuation_steps == 0 {
            return Err(CliError::Invalid("continuation_steps must be positive".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(CliError::Invalid("tol must be positive".into()));
            }
        }
        Ok(())
    }
}

/// An exact rational written either as an integer or as a string like `"3/2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rational {
    Int(i64),
    Text(String),
}

impl Rational {
    pub fn to_q(&self) -> Result<Q, CliError> {
        match self {
            Rational::Int(i) => Ok(Q::from_integer((*i).into())),
            Rational::Text(s) => Q::from_str(s.trim())
                .map_err(|_| CliError::Invalid(format!("`{s}` is not a rational number"))),
        }
    }
}

pub(crate) fn rationals(v: &[Rational]) -> Result<Vec<Q>, CliError> {
    v.iter().map(Rational::to_q).collect()
}

/// Half-space `⟨normal, x⟩ ≤ support` with a primitive outward normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetConfig {
    pub normal: Vec<i64>,
    pub support: Rational,
}

/// Support numbers per facet, in the order of `facets`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassesConfig {
    #[serde(default)]
    pub omega: Option<Vec<Rational>>,
    #[serde(default, rename = "Omega")]
    pub big_omega: Option<Vec<Rational>>,
    #[serde(default)]
    pub alpha: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem13Config {
    /// `c_1..c_n`.
    pub c: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corollary14Config {
    pub theta_hat: f64,
    #[serde(default)]
    pub branch_shift: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricConfig {
    pub facets: Vec<FacetConfig>,
    #[serde(default)]
    pub classes: ClassesConfig,
    #[serde(default)]
    pub theorem13: Option<Theorem13Config>,
    #[serde(default)]
    pub corollary14: Option<Corollary14Config>,
}
