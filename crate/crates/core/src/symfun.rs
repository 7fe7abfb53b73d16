//! Elementary symmetric polynomials of eigenvalue vectors, the quotient
//! functions `S_k = σ_{n-k} / σ_n`, their gradients, and eigenvalues of
//! Hermitian pencils.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

/// Below this magnitude `σ_n` is treated as zero.
pub const SINGULAR_FLOOR: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("singular spectrum: |sigma_n| = {sigma_n:e} is below the floor")]
    SingularSpectrum { sigma_n: f64 },
    #[error("index k = {k} out of range for n = {n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("metric is not positive definite (minimal eigenvalue {min_eigenvalue:e})")]
    MetricNotPositive { min_eigenvalue: f64 },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("spectrum must be nonempty")]
    Empty,
}

/// Eigenvalues of a Hermitian form relative to a background metric,
/// in nondecreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Builds a spectrum, sorting the values into nondecreasing order.
    pub fn new(mut values: Vec<f64>) -> Result<Self, SymError> {
        if values.is_empty() {
            return Err(SymError::Empty);
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    /// Like [`Spectrum::new`] but also checks the declared dimension.
    pub fn with_dim(values: Vec<f64>, n: usize) -> Result<Self, SymError> {
        if values.len() != n {
            return Err(SymError::DimensionMismatch {
                expected: n,
                found: values.len(),
            });
        }
        Self::new(values)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    /// True when every eigenvalue is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.values[0] > 0.0
    }
}

/// `(σ_0, …, σ_n)` of `lam`, multiplying out `Π (1 + t λ_i)` one factor at
/// a time.
pub fn sigma_all(lam: &[f64]) -> Vec<f64> {
    let mut sigma = vec![0.0; lam.len() + 1];
    sigma[0] = 1.0;
    for (i, &l) in lam.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            sigma[k] += l * sigma[k - 1];
        }
    }
    sigma
}

/// σ's of `lam` with the `i`-th entry removed (length `n`).
pub fn sigma_deleted(lam: &[f64], i: usize) -> Vec<f64> {
    let rest: Vec<f64> = lam
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &l)| l)
        .collect();
    sigma_all(&rest)
}

fn checked_sigma_n(sigma: &[f64]) -> Result<f64, SymError> {
    let sn = *sigma.last().expect("sigma vector is never empty");
    if sn.abs() < SINGULAR_FLOOR || !sn.is_finite() {
        return Err(SymError::SingularSpectrum { sigma_n: sn });
    }
    Ok(sn)
}

/// `S_k(λ) = σ_{n-k}(λ) / σ_n(λ)`.
pub fn s_k(lam: &Spectrum, k: usize) -> Result<f64, SymError> {
    let n = lam.n();
    if k > n {
        return Err(SymError::IndexOutOfRange { k, n });
    }
    let sigma = sigma_all(lam.values());
    let sn = checked_sigma_n(&sigma)?;
    Ok(sigma[n - k] / sn)
}

/// Analytic gradient of `S_k` in the eigenvalues.
///
/// Uses `∂σ_j/∂λ_i = σ_{j-1}(λ_{-i})` and the quotient rule.
pub fn ds_k_dlam(lam: &Spectrum, k: usize) -> Result<Vec<f64>, SymError> {
    let n = lam.n();
    if k > n {
        return Err(SymError::IndexOutOfRange { k, n });
    }
    let sigma = sigma_all(lam.values());
    let sn = checked_sigma_n(&sigma)?;
    let top = sigma[n - k];
    Ok((0..n)
        .map(|i| {
            let del = sigma_deleted(lam.values(), i);
            let d_top = if n - k >= 1 { del[n - k - 1] } else { 0.0 };
            let d_sn = del[n - 1];
            (d_top * sn - top * d_sn) / (sn * sn)
        })
        .collect())
}

/// A Hermitian matrix with an optional positive-definite background metric.
#[derive(Debug, Clone)]
pub struct HermitianForm {
    entries: DMatrix<Complex64>,
    metric: Option<DMatrix<Complex64>>,
}

/// Tolerance for the Hermitian-symmetry check, relative to the largest entry.
const HERMITIAN_TOL: f64 = 1e-12;

fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

impl HermitianForm {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self, SymError> {
        if entries.nrows() != entries.ncols() {
            return Err(SymError::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        if entries.nrows() == 0 {
            return Err(SymError::Empty);
        }
        let dev = hermitian_deviation(&entries);
        if dev > HERMITIAN_TOL {
            return Err(SymError::NotHermitian { deviation: dev });
        }
        Ok(Self {
            entries,
            metric: None,
        })
    }

    /// Attaches a background metric; it must be Hermitian positive definite.
    pub fn with_metric(mut self, metric: DMatrix<Complex64>) -> Result<Self, SymError> {
        if metric.nrows() != self.n() || metric.ncols() != self.n() {
            return Err(SymError::DimensionMismatch {
                expected: self.n(),
                found: metric.nrows(),
            });
        }
        let dev = hermitian_deviation(&metric);
        if dev > HERMITIAN_TOL {
            return Err(SymError::NotHermitian { deviation: dev });
        }
        let min_eig = hermitian_eigenvalues(&metric)[0];
        if min_eig <= 0.0 {
            return Err(SymError::MetricNotPositive {
                min_eigenvalue: min_eig,
            });
        }
        self.metric = Some(metric);
        Ok(self)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self, SymError> {
        let n = diag.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn metric(&self) -> Option<&DMatrix<Complex64>> {
        self.metric.as_ref()
    }
}

/// Eigenvalues of a Hermitian matrix, nondecreasing. The matrix is
/// symmetrized before decomposition.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let sym = (m + m.adjoint()).scale(0.5);
    let mut vals: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Solutions of `det(A − λG) = 0`, computed as the eigenvalues of
/// `L⁻¹ A L⁻*` with `G = L L*`. Without a metric, `G = I`.
pub fn pencil_eigenvalues(form: &HermitianForm) -> Result<Spectrum, SymError> {
    let a = form.entries();
    let Some(g) = form.metric() else {
        return Spectrum::new(hermitian_eigenvalues(a));
    };
    let chol = nalgebra::Cholesky::new(g.clone()).ok_or_else(|| SymError::MetricNotPositive {
        min_eigenvalue: hermitian_eigenvalues(g)[0],
    })?;
    let l = chol.l();
    let n = a.nrows();
    // X = L⁻¹ A, then reduced = L⁻¹ X* = L⁻¹ A* L⁻* = L⁻¹ A L⁻*.
    let x = l
        .solve_lower_triangular(a)
        .ok_or(SymError::MetricNotPositive { min_eigenvalue: 0.0 })?;
    let reduced = l
        .solve_lower_triangular(&x.adjoint())
        .ok_or(SymError::MetricNotPositive { min_eigenvalue: 0.0 })?;
    debug_assert_eq!(reduced.nrows(), n);
    Spectrum::new(hermitian_eigenvalues(&reduced))
}

/// Binomial coefficient as a float (exact for the small arguments used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
