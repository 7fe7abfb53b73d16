use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::TorusGrid;
use super::hessian::complex_hessian;
use super::{Background, PotentialGrid, SolverError};
use crate::dhym::{dhym_residual, is_supercritical, PhaseSpec};
use crate::equation::{cone_margins_unchecked, residual_from_sigmas, GammaCoefficients};
use crate::reduce::CHUNK;

/// Diagnostics recomputed from a final potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    pub grid_size: usize,
    pub residual_sup: f64,
    pub cone_margin_min: f64,
    pub min_eigenvalue: f64,
    pub phi_sup: f64,
    pub phi_inf: f64,
    /// Constant to add to the mean-zero potential so that `sup φ = 0`.
    pub sup_zero_offset: f64,
    /// Constant to add to the mean-zero potential so that `inf φ = 1`.
    pub inf_one_offset: f64,
    pub newton_iterations: Vec<usize>,
    pub continuation_taus: Vec<f64>,
    pub residual_history: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dhym_residual_sup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub supercritical_margin_min: Option<f64>,
}

#[derive(Clone, Copy)]
struct Acc {
    res: f64,
    margin: f64,
    eig: f64,
    dhym: f64,
    superc: f64,
}

impl Acc {
    fn identity() -> Self {
        Self {
            res: 0.0,
            margin: f64::INFINITY,
            eig: f64::INFINITY,
            dhym: 0.0,
            superc: f64::INFINITY,
        }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            res: self.res.max(o.res),
            margin: self.margin.min(o.margin),
            eig: self.eig.min(o.eig),
            dhym: self.dhym.max(o.dhym),
            superc: self.superc.min(o.superc),
        }
    }
}

/// Recomputes residual, cone margins, eigenvalues and (with `spec`) the
/// dHYM residual and supercritical margin of `Ω + i∂∂̄φ` at every point.
///
/// For a dHYM problem the background is `Ω = α + s·ω`, so the eigenvalues
/// of `α` are recovered as `μ = λ − s`.
pub fn verify_solution(
    grid: &TorusGrid,
    phi: &PotentialGrid,
    bg: &Background,
    g: &GammaCoefficients,
    spec: Option<&PhaseSpec>,
) -> Result<SolveReport, SolverError> {
    let n = grid.n();
    if bg.n() != n || g.n() != n {
        return Err(SolverError::DimensionMismatch {
            expected: n,
            found: bg.n().max(g.n()),
        });
    }
    let h = complex_hessian(grid, phi.values())?;
    let omega = *bg.form();
    let shift = spec.map(|s| s.shift());
    let theta = spec.map(|s| s.theta_hat());
    let partials: Vec<Acc> = (0..grid.len())
        .into_par_iter()
        .chunks(CHUNK)
        .map(|idxs| {
            let mut acc = Acc::identity();
            let mut gamma = [0.0; 3];
            for idx in idxs {
                let a = omega.add(&h.at(idx));
                let lam = a.eigenvalues();
                let lam = &lam[..n];
                g.values_at(idx, &mut gamma[..n]);
                let margins = cone_margins_unchecked(lam, &gamma[..n]);
                let mut p = Acc {
                    res: residual_from_sigmas(&a.sigmas()[..=n], &gamma[..n]).abs(),
                    margin: margins.iter().copied().fold(f64::INFINITY, f64::min),
                    eig: lam[0],
                    ..Acc::identity()
                };
                if let (Some(sh), Some(th)) = (shift, theta) {
                    let mu: Vec<f64> = lam.iter().map(|l| l - sh).collect();
                    p.dhym = dhym_residual(&mu, th).abs();
                    p.superc = is_supercritical(&mu).margin;
                }
                acc = acc.merge(p);
            }
            acc
        })
        .collect();
    let total = partials.into_iter().fold(Acc::identity(), Acc::merge);
    let (sup, inf) = (phi.sup(), phi.inf());
    Ok(SolveReport {
        n,
        grid_size: grid.size(),
        residual_sup: total.res,
        cone_margin_min: total.margin,
        min_eigenvalue: total.eig,
        phi_sup: sup,
        phi_inf: inf,
        sup_zero_offset: -sup,
        inf_one_offset: 1.0 - inf,
        newton_iterations: Vec::new(),
        continuation_taus: Vec::new(),
        residual_history: Vec::new(),
        theta_hat: theta,
        dhym_residual_sup: spec.map(|_| total.dhym),
        supercritical_margin_min: spec.map(|_| total.superc),
    })
}
