//! Spectral Newton and continuation solver for the gMA equation on flat
//! complex tori `C^n / Z^{2n}` with `ω` the identity.
//!
//! The unknown is a real potential `φ` sampled on a uniform grid; the
//! complex Hessian `φ_{jk̄}` is computed with trigonometric differentiation,
//! so band-limited fields are differentiated exactly.

mod continuation;
mod grid;
mod hessian;
mod io;
mod manufactured;
mod newton;
mod pointwise;
mod verify;

pub use continuation::{continuity_solve, resolved_gamma, ContinuationOptions, MIN_STEP};
pub use grid::{TorusGrid, DEFAULT_MEMORY_BUDGET, FIELDS_PER_POINT};
pub use hessian::{apply_linearization, complex_hessian, HessianField};
pub use io::{read_field, write_field, FieldHeader};
pub use manufactured::{cosine_mode, manufactured_problem};
pub use newton::{newton_solve, NewtonOptions};
pub use pointwise::SmallHerm;
pub use verify::{verify_solution, SolveReport};

use num_complex::Complex64;
use thiserror::Error;

use crate::dhym::DhymError;
use crate::equation::{ClassIntegrals, EquationError};
use crate::reduce;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("complex dimension {n} is not supported (1..=3)")]
    UnsupportedDimension { n: usize },
    #[error("grid size {size} must be a power of two and at least 4")]
    GridSize { size: usize },
    #[error("grid needs about {required} bytes, budget is {budget}")]
    MemoryBudget { required: usize, budget: usize },
    #[error("field has {found} samples, grid has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("background must be a Hermitian positive definite {n}x{n} matrix")]
    Background { n: usize },
    #[error("initial potential is not admissible (positive: {positive}, cone: {cone})")]
    Precondition { positive: bool, cone: bool },
    #[error("manufactured gamma_0 has minimum {min}, not above {eps_pos}")]
    Admissibility { min: f64, eps_pos: f64 },
    #[error("coefficient tail must be constant for continuation")]
    UnsupportedFieldTail,
    #[error("line search failed at Newton iteration {iteration} (sup|R| = {residual_sup:e})")]
    LineSearchFailure { iteration: usize, residual_sup: f64 },
    #[error("no convergence after {iterations} Newton iterations (sup|R| = {residual_sup:e})")]
    MaxIterations { iterations: usize, residual_sup: f64 },
    #[error("linear solver stagnated at Newton iteration {iteration} (relative residual {relative_residual:e})")]
    Stagnation {
        iteration: usize,
        relative_residual: f64,
    },
    #[error("continuation step underflow after tau = {last_tau}")]
    StepUnderflow {
        last_tau: f64,
        phi: Box<PotentialGrid>,
        report: Box<SolveReport>,
    },
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Dhym(#[from] DhymError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed field header: {0}")]
    Header(String),
}

impl SolverError {
    /// Whether a continuation step may recover from this error by shrinking
    /// the step.
    pub fn is_corrector_failure(&self) -> bool {
        matches!(
            self,
            SolverError::Precondition { .. }
                | SolverError::LineSearchFailure { .. }
                | SolverError::MaxIterations { .. }
                | SolverError::Stagnation { .. }
        )
    }
}

/// Constant background form `Ω`, Hermitian positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Background {
    form: SmallHerm,
}

impl Background {
    /// `s·ω` with `ω` the identity.
    pub fn scaled_identity(n: usize, s: f64) -> Result<Self, SolverError> {
        if !(1..=3).contains(&n) {
            return Err(SolverError::UnsupportedDimension { n });
        }
        Self::from_form(SmallHerm::scaled_identity(n, s))
    }

    /// From `n²` row-major entries.
    pub fn from_entries(n: usize, entries: &[Complex64]) -> Result<Self, SolverError> {
        if !(1..=3).contains(&n) {
            return Err(SolverError::UnsupportedDimension { n });
        }
        if entries.len() != n * n {
            return Err(SolverError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let form = SmallHerm::from_entries(n, entries);
        for j in 0..n {
            for k in 0..n {
                if (form.a[j][k] - form.a[k][j].conj()).norm() > 1e-12 {
                    return Err(SolverError::Background { n });
                }
            }
        }
        Self::from_form(form)
    }

    fn from_form(form: SmallHerm) -> Result<Self, SolverError> {
        if !form.is_positive_definite() {
            return Err(SolverError::Background { n: form.n });
        }
        Ok(Self { form })
    }

    pub fn n(&self) -> usize {
        self.form.n
    }

    pub fn form(&self) -> &SmallHerm {
        &self.form
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.form.eigenvalues()[..self.form.n].to_vec()
    }

    /// `I_k = ∫ Ω^k ∧ ω^{n-k}` on the unit-volume torus.
    pub fn class_integrals(&self) -> Result<ClassIntegrals, SolverError> {
        Ok(ClassIntegrals::from_constant_spectrum(&self.eigenvalues(), 1.0)?)
    }
}

/// Real potential on a [`TorusGrid`], kept with grid mean zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid {
    values: Vec<f64>,
}

impl PotentialGrid {
    pub fn zeros(grid: &TorusGrid) -> Self {
        Self {
            values: vec![0.0; grid.len()],
        }
    }

    /// Wraps `values`, subtracting their mean.
    pub fn new(grid: &TorusGrid, mut values: Vec<f64>) -> Result<Self, SolverError> {
        if values.len() != grid.len() {
            return Err(SolverError::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        reduce::project_mean_zero(&mut values);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut Vec<f64> {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup(&self) -> f64 {
        reduce::max(&self.values)
    }

    pub fn inf(&self) -> f64 {
        reduce::min(&self.values)
    }

    pub fn mean(&self) -> f64 {
        reduce::mean(&self.values)
    }

    /// `sup |self − other|`.
    pub fn sup_distance(&self, other: &PotentialGrid) -> f64 {
        let d: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        reduce::sup_abs(&d)
    }
}
