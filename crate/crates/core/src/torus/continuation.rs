use super::grid::TorusGrid;
use super::newton::{newton_core, NewtonOptions};
use super::verify::{verify_solution, SolveReport};
use super::{Background, PotentialGrid, SolverError};
use crate::dhym::PhaseSpec;
use crate::equation::{calibrate_gamma0, Coefficient, GammaCoefficients};

/// Smallest τ-step tried before reporting a stuck continuation.
pub const MIN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationOptions {
    /// Initial number of uniform τ-steps.
    pub steps: usize,
    pub newton: NewtonOptions,
}

impl ContinuationOptions {
    pub fn new(steps: usize, tol: f64) -> Self {
        Self {
            steps: steps.max(1),
            newton: NewtonOptions::with_tol(tol),
        }
    }
}

/// `γ(τ)` on the homotopy from the calibrated Monge-Ampère start to the
/// target, with `γ_0` shifted by a constant so the integrated equation
/// holds at every τ.
fn gamma_at(
    tau: f64,
    start0: f64,
    target: &GammaCoefficients,
    target_tail: &[f64],
    bg: &Background,
) -> Result<GammaCoefficients, SolverError> {
    let tail: Vec<f64> = target_tail.iter().map(|t| tau * t).collect();
    let calibrated = calibrate_gamma0(&tail, &bg.class_integrals()?)?;
    let blend = |t0: f64| (1.0 - tau) * start0 + tau * t0;
    let gamma0 = match target.coefficient(0) {
        Coefficient::Constant(_) => Coefficient::Constant(calibrated),
        Coefficient::Field(v) => {
            let blended: Vec<f64> = v.iter().map(|&t0| blend(t0)).collect();
            let shift = calibrated - crate::reduce::mean(&blended);
            Coefficient::Field(blended.into_iter().map(|b| b + shift).collect())
        }
    };
    let mut coeffs = vec![gamma0];
    coeffs.extend(tail.into_iter().map(Coefficient::Constant));
    Ok(GammaCoefficients::from_coefficients(coeffs, target.origin())?)
}

/// Continuity method from `φ = 0` at the calibrated Monge-Ampère equation
/// `σ_n = I_n / I_0` to `g_target`, with adaptive bisection of the τ-step.
///
/// Returns the potential at τ = 1 and its report; `spec` adds the dHYM
/// diagnostics to the report.
pub fn continuity_solve(
    grid: &TorusGrid,
    bg: &Background,
    g_target: &GammaCoefficients,
    opts: &ContinuationOptions,
    spec: Option<&PhaseSpec>,
) -> Result<(PotentialGrid, SolveReport), SolverError> {
    let tail = g_target
        .constant_tail()
        .ok_or(SolverError::UnsupportedFieldTail)?;
    let integrals = bg.class_integrals()?;
    let zero_tail = vec![0.0; tail.len()];
    let start0 = calibrate_gamma0(&zero_tail, &integrals)?;

    let mut phi = PotentialGrid::zeros(grid);
    let mut taus = Vec::new();
    let mut iterations = Vec::new();
    let mut history = Vec::new();

    let g0 = gamma_at(0.0, start0, g_target, &tail, bg)?;
    let stats = newton_core(grid, bg, &g0, &mut phi, &opts.newton)?;
    taus.push(0.0);
    iterations.push(stats.iterations);

    let max_step = 1.0 / opts.steps as f64;
    let mut step = max_step;
    let mut tau = 0.0;
    let mut last_gamma = g0;
    while tau < 1.0 {
        let next = if tau + step >= 1.0 - 1e-12 { 1.0 } else { tau + step };
        let g = gamma_at(next, start0, g_target, &tail, bg)?;
        let mut trial = phi.clone();
        match newton_core(grid, bg, &g, &mut trial, &opts.newton) {
            Ok(stats) => {
                phi = trial;
                tau = next;
                taus.push(tau);
                iterations.push(stats.iterations);
                history = stats.residual_history;
                last_gamma = g;
                step = (2.0 * step).min(max_step);
            }
            Err(e) if e.is_corrector_failure() => {
                step *= 0.5;
                if step < MIN_STEP {
                    let mut report = verify_solution(grid, &phi, bg, &last_gamma, spec)?;
                    report.newton_iterations = iterations;
                    report.continuation_taus = taus;
                    return Err(SolverError::StepUnderflow {
                        last_tau: tau,
                        phi: Box::new(phi),
                        report: Box::new(report),
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    let mut report = verify_solution(grid, &phi, bg, &last_gamma, spec)?;
    report.newton_iterations = iterations;
    report.continuation_taus = taus;
    report.residual_history = history;
    Ok((phi, report))
}

/// `γ` actually solved at τ = 1: the target with `γ_0` recalibrated.
pub fn resolved_gamma(
    bg: &Background,
    g_target: &GammaCoefficients,
) -> Result<GammaCoefficients, SolverError> {
    let tail = g_target
        .constant_tail()
        .ok_or(SolverError::UnsupportedFieldTail)?;
    let start0 = calibrate_gamma0(&vec![0.0; tail.len()], &bg.class_integrals()?)?;
    gamma_at(1.0, start0, g_target, &tail, bg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::Convention;

    #[test]
    fn target_equal_to_start() {
        let grid = TorusGrid::new(2, 8).unwrap();
        let bg = Background::scaled_identity(2, 1.5).unwrap();
        let g = GammaCoefficients::constant(vec![2.25, 0.0], Convention::Direct).unwrap();
        let (phi, rep) =
            continuity_solve(&grid, &bg, &g, &ContinuationOptions::new(1, 1e-9), None).unwrap();
        assert!(phi.values().iter().all(|&v| v == 0.0));
        assert_eq!(rep.continuation_taus, vec![0.0, 1.0]);
        assert!(rep.residual_sup < 1e-12);
    }

    #[test]
    fn flat_dhym_n2() {
        let grid = TorusGrid::new(2, 8).unwrap();
        let bg = Background::scaled_identity(2, 2f64.sqrt()).unwrap();
        let g = GammaCoefficients::constant(vec![2.0, 0.0], Convention::Direct).unwrap();
        let spec = PhaseSpec::new(2, 0.75 * std::f64::consts::PI).unwrap();
        let (phi, rep) =
            continuity_solve(&grid, &bg, &g, &ContinuationOptions::new(4, 1e-9), Some(&spec))
                .unwrap();
        assert!(phi.values().iter().all(|&v| v == 0.0));
        assert!(rep.dhym_residual_sup.unwrap() < 1e-12);
    }

    #[test]
    fn field_tail_rejected() {
        let grid = TorusGrid::new(2, 4).unwrap();
        let bg = Background::scaled_identity(2, 1.0).unwrap();
        let g = GammaCoefficients::from_coefficients(
            vec![
                Coefficient::Constant(1.0),
                Coefficient::Field(vec![0.1; grid.len()]),
            ],
            Convention::Direct,
        )
        .unwrap();
        let err = continuity_solve(&grid, &bg, &g, &ContinuationOptions::new(2, 1e-9), None)
            .unwrap_err();
        assert!(matches!(err, SolverError::UnsupportedFieldTail));
    }
}
