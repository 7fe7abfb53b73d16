use rayon::prelude::*;

use super::grid::TorusGrid;
use super::hessian::{
    apply_linearization_into, complex_hessian_into, linearize_in_place, HessianField,
    Preconditioner, Workspace,
};
use super::verify::{verify_solution, SolveReport};
use super::{Background, PotentialGrid, SolverError};
use crate::equation::{residual_from_sigmas, GammaCoefficients};
use crate::reduce;

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOptions {
    /// Stop when `sup|R| ≤ tol`.
    pub tol: f64,
    pub max_iterations: usize,
    /// Bytes available for the Krylov basis; sets the GMRES restart length.
    pub krylov_budget: usize,
    pub max_linear_iterations: usize,
    pub max_halvings: usize,
}

impl NewtonOptions {
    pub fn default_tol(n: usize) -> f64 {
        if n <= 2 {
            1e-9
        } else {
            1e-7
        }
    }

    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iterations: 50,
            krylov_budget: 1 << 30,
            max_linear_iterations: 400,
            max_halvings: 30,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct NewtonStats {
    pub iterations: usize,
    pub residual_history: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct PointFlags {
    positive: bool,
    cone_strict: bool,
    cone_closed: bool,
}

/// Writes `R = σ_n(A) − Σ γ_k σ_k(A)` with `A = Ω + H` into `r` and reports
/// whether `A > 0`, `M > 0` and `M ≥ 0` hold everywhere.
fn evaluate(bg: &Background, g: &GammaCoefficients, h: &HessianField, r: &mut [f64]) -> PointFlags {
    let n = bg.n();
    let omega = *bg.form();
    r.par_iter_mut()
        .enumerate()
        .map(|(idx, out)| {
            let a = omega.add(&h.at(idx));
            let s = a.sigmas();
            let mut gamma = [0.0; 3];
            g.values_at(idx, &mut gamma[..n]);
            *out = residual_from_sigmas(&s[..=n], &gamma[..n]);
            let positive = (1..=n).all(|k| s[k] > 0.0);
            let ms = a.linearization(&gamma[..n]).sigmas();
            PointFlags {
                positive,
                cone_strict: (1..=n).all(|k| ms[k] > 0.0),
                cone_closed: (1..=n).all(|k| ms[k] >= 0.0),
            }
        })
        .reduce(
            || PointFlags {
                positive: true,
                cone_strict: true,
                cone_closed: true,
            },
            |a, b| PointFlags {
                positive: a.positive && b.positive,
                cone_strict: a.cone_strict && b.cone_strict,
                cone_closed: a.cone_closed && b.cone_closed,
            },
        )
}

fn check_inputs(
    grid: &TorusGrid,
    bg: &Background,
    g: &GammaCoefficients,
    len: usize,
) -> Result<(), SolverError> {
    if bg.n() != grid.n() || g.n() != grid.n() {
        return Err(SolverError::DimensionMismatch {
            expected: grid.n(),
            found: if bg.n() != grid.n() { bg.n() } else { g.n() },
        });
    }
    if len != grid.len() {
        return Err(SolverError::DimensionMismatch {
            expected: grid.len(),
            found: len,
        });
    }
    for c in g.coefficients() {
        if let crate::equation::Coefficient::Field(v) = c {
            if v.len() != grid.len() {
                return Err(SolverError::DimensionMismatch {
                    expected: grid.len(),
                    found: v.len(),
                });
            }
        }
    }
    Ok(())
}

/// Damped Newton for `R(φ) = 0` from `phi0`, returning the solution and a
/// report recomputed from it.
pub fn newton_solve(
    grid: &TorusGrid,
    bg: &Background,
    g: &GammaCoefficients,
    phi0: &PotentialGrid,
    opts: &NewtonOptions,
) -> Result<(PotentialGrid, SolveReport), SolverError> {
    let mut phi = phi0.clone();
    let stats = newton_core(grid, bg, g, &mut phi, opts)?;
    let mut report = verify_solution(grid, &phi, bg, g, None)?;
    report.newton_iterations = vec![stats.iterations];
    report.residual_history = stats.residual_history;
    Ok((phi, report))
}

pub(crate) fn newton_core(
    grid: &TorusGrid,
    bg: &Background,
    g: &GammaCoefficients,
    phi: &mut PotentialGrid,
    opts: &NewtonOptions,
) -> Result<NewtonStats, SolverError> {
    check_inputs(grid, bg, g, phi.len())?;
    reduce::project_mean_zero(phi.values_mut());
    let len = grid.len();
    let mut ws = Workspace::new(grid);
    let mut h = HessianField::zeros(grid.n(), len);
    let mut r = vec![0.0; len];
    complex_hessian_into(grid, phi.values(), &mut ws, &mut h);
    let flags = evaluate(bg, g, &h, &mut r);
    if !(flags.positive && flags.cone_strict) {
        return Err(SolverError::Precondition {
            positive: flags.positive,
            cone: flags.cone_strict,
        });
    }
    let mut res_sup = reduce::sup_abs(&r);
    let mut stats = NewtonStats {
        iterations: 0,
        residual_history: vec![res_sup],
    };
    if res_sup <= opts.tol {
        return Ok(stats);
    }

    let mut gmres = Gmres::new(len, opts);
    let mut trial = vec![0.0; len];
    let mut r_trial = vec![0.0; len];
    for iteration in 1..=opts.max_iterations {
        linearize_in_place(&mut h, bg, g);
        let pre = Preconditioner::new(&h);
        let rhs: Vec<f64> = r.par_iter().map(|x| -x).collect();
        let eta = res_sup.min(1e-3).max(1e-12);
        let (mut delta, rel) = gmres.solve(grid, &h, &pre, &rhs, eta, &mut ws);
        if rel > 0.5 {
            return Err(SolverError::Stagnation {
                iteration,
                relative_residual: rel,
            });
        }
        reduce::project_mean_zero(&mut delta);

        let norm0 = reduce::norm2(&r);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            trial
                .par_iter_mut()
                .zip(phi.values().par_iter().zip(delta.par_iter()))
                .for_each(|(o, (p, d))| *o = p + t * d);
            reduce::project_mean_zero(&mut trial);
            complex_hessian_into(grid, &trial, &mut ws, &mut h);
            let f = evaluate(bg, g, &h, &mut r_trial);
            if f.positive && f.cone_closed && reduce::norm2(&r_trial) <= (1.0 - 1e-4 * t) * norm0 {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(SolverError::LineSearchFailure {
                iteration,
                residual_sup: res_sup,
            });
        }
        std::mem::swap(phi.values_mut(), &mut trial);
        std::mem::swap(&mut r, &mut r_trial);
        res_sup = reduce::sup_abs(&r);
        stats.iterations = iteration;
        stats.residual_history.push(res_sup);
        if res_sup <= opts.tol {
            return Ok(stats);
        }
    }
    Err(SolverError::MaxIterations {
        iterations: opts.max_iterations,
        residual_sup: res_sup,
    })
}

/// Restarted GMRES with right preconditioning for `L P u = b`, `δ = P u`.
struct Gmres {
    restart: usize,
    max_iterations: usize,
    basis: Vec<Vec<f64>>,
    tmp: Vec<f64>,
}

impl Gmres {
    fn new(len: usize, opts: &NewtonOptions) -> Self {
        let restart = (opts.krylov_budget / (8 * len.max(1)))
            .saturating_sub(1)
            .clamp(4, 40);
        Self {
            restart,
            max_iterations: opts.max_linear_iterations,
            basis: Vec::new(),
            tmp: vec![0.0; len],
        }
    }

    fn operator(
        &mut self,
        grid: &TorusGrid,
        m: &HessianField,
        pre: &Preconditioner,
        v: &[f64],
        ws: &mut Workspace,
        out: &mut [f64],
    ) {
        pre.apply(grid, v, ws, &mut self.tmp);
        apply_linearization_into(grid, m, &self.tmp, ws, out);
    }

    /// Returns `δ` and the achieved relative residual.
    fn solve(
        &mut self,
        grid: &TorusGrid,
        m: &HessianField,
        pre: &Preconditioner,
        b: &[f64],
        eta: f64,
        ws: &mut Workspace,
    ) -> (Vec<f64>, f64) {
        let len = b.len();
        let beta = reduce::norm2(b);
        if beta == 0.0 {
            return (vec![0.0; len], 0.0);
        }
        let target = eta * beta;
        let mr = self.restart;
        if self.basis.len() < mr + 1 {
            self.basis.resize_with(mr + 1, || vec![0.0; len]);
        }
        let mut u = vec![0.0; len];
        let mut w = vec![0.0; len];
        let mut total = 0;
        let mut resid = beta;
        while total < self.max_iterations {
            // r = b − L P u
            self.operator(grid, m, pre, &u, ws, &mut w);
            w.par_iter_mut().zip(b.par_iter()).for_each(|(x, bi)| *x = bi - *x);
            let rnorm = reduce::norm2(&w);
            resid = rnorm;
            if rnorm <= target {
                break;
            }
            self.basis[0]
                .par_iter_mut()
                .zip(w.par_iter())
                .for_each(|(v, x)| *v = x / rnorm);
            let mut hess = vec![vec![0.0; mr]; mr + 1];
            let mut cs = vec![0.0; mr];
            let mut sn = vec![0.0; mr];
            let mut gvec = vec![0.0; mr + 1];
            gvec[0] = rnorm;
            let mut k = 0;
            while k < mr && total < self.max_iterations {
                total += 1;
                let (head, tail) = self.basis.split_at_mut(k + 1);
                let vk = &head[k];
                pre.apply(grid, vk, ws, &mut self.tmp);
                apply_linearization_into(grid, m, &self.tmp, ws, &mut w);
                for (i, vi) in head.iter().enumerate() {
                    let hij = reduce::dot(&w, vi);
                    hess[i][k] = hij;
                    w.par_iter_mut().zip(vi.par_iter()).for_each(|(x, v)| *x -= hij * v);
                }
                let hn = reduce::norm2(&w);
                hess[k + 1][k] = hn;
                if hn > 0.0 {
                    tail[0]
                        .par_iter_mut()
                        .zip(w.par_iter())
                        .for_each(|(v, x)| *v = x / hn);
                }
                for i in 0..k {
                    let t = cs[i] * hess[i][k] + sn[i] * hess[i + 1][k];
                    hess[i + 1][k] = -sn[i] * hess[i][k] + cs[i] * hess[i + 1][k];
                    hess[i][k] = t;
                }
                let (a, bb) = (hess[k][k], hess[k + 1][k]);
                let d = a.hypot(bb);
                (cs[k], sn[k]) = if d == 0.0 { (1.0, 0.0) } else { (a / d, bb / d) };
                hess[k][k] = d;
                hess[k + 1][k] = 0.0;
                gvec[k + 1] = -sn[k] * gvec[k];
                gvec[k] *= cs[k];
                resid = gvec[k + 1].abs();
                k += 1;
                if resid <= target || hn == 0.0 {
                    break;
                }
            }
            let mut y = vec![0.0; k];
            for i in (0..k).rev() {
                let mut s = gvec[i];
                for j in i + 1..k {
                    s -= hess[i][j] * y[j];
                }
                y[i] = if hess[i][i] != 0.0 { s / hess[i][i] } else { 0.0 };
            }
            for (i, yi) in y.iter().enumerate() {
                let vi = &self.basis[i];
                u.par_iter_mut().zip(vi.par_iter()).for_each(|(x, v)| *x += yi * v);
            }
            if resid <= target {
                break;
            }
        }
        let mut delta = vec![0.0; len];
        pre.apply(grid, &u, ws, &mut delta);
        (delta, resid / beta)
    }
}
