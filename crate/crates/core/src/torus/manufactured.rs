use std::f64::consts::PI;

use rayon::prelude::*;

use super::grid::TorusGrid;
use super::hessian::complex_hessian;
use super::{Background, PotentialGrid, SolverError};
use crate::equation::DEFAULT_EPS_POS;
use crate::reduce;

/// `γ_0(x) = σ_n(λ) − Σ_{k≥1} γ_k σ_k(λ)` evaluated at `Ω + i∂∂̄φ*`, so that
/// `phi_star` solves the discrete equation exactly.
///
/// Fails if `Ω_{φ*}` is not positive somewhere or if `min γ_0 ≤ 1e-10`.
pub fn manufactured_problem(
    grid: &TorusGrid,
    phi_star: &PotentialGrid,
    tail: &[f64],
    bg: &Background,
) -> Result<Vec<f64>, SolverError> {
    let n = grid.n();
    if tail.len() + 1 != n || bg.n() != n {
        return Err(SolverError::DimensionMismatch {
            expected: n - 1,
            found: tail.len(),
        });
    }
    let h = complex_hessian(grid, phi_star.values())?;
    let omega = *bg.form();
    let (gamma0, positive): (Vec<f64>, Vec<bool>) = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let s = omega.add(&h.at(idx)).sigmas();
            let mut g0 = s[n];
            for k in 1..n {
                g0 -= tail[k - 1] * s[k];
            }
            (g0, (1..=n).all(|k| s[k] > 0.0))
        })
        .unzip();
    if !positive.iter().all(|&p| p) {
        return Err(SolverError::Precondition {
            positive: false,
            cone: false,
        });
    }
    let min = reduce::min(&gamma0);
    if min <= DEFAULT_EPS_POS {
        return Err(SolverError::Admissibility {
            min,
            eps_pos: DEFAULT_EPS_POS,
        });
    }
    Ok(gamma0)
}

/// `amplitude · cos(2π ⟨mode, (x, y)⟩)` with `mode` ordered like the grid
/// axes `x_1..x_n, y_1..y_n`.
pub fn cosine_mode(
    grid: &TorusGrid,
    amplitude: f64,
    mode: &[i64],
) -> Result<PotentialGrid, SolverError> {
    if mode.len() != grid.axes() {
        return Err(SolverError::DimensionMismatch {
            expected: grid.axes(),
            found: mode.len(),
        });
    }
    let values = grid.sample(|x| {
        let arg: f64 = x.iter().zip(mode).map(|(xi, &m)| xi * m as f64).sum();
        amplitude * (2.0 * PI * arg).cos()
    });
    PotentialGrid::new(grid, values)
}
