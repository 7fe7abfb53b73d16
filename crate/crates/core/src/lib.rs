//! Numerics for generalized Monge-Ampère equations and the deformed
//! Hermitian Yang-Mills equation.
//!
//! * [`symfun`]: elementary symmetric polynomials, `S_k` quotients, Hermitian pencils.
//! * [`equation`]: canonical coefficients, residuals, cone margins, calibration.
//! * [`dhym`]: dHYM coefficients, phase functions and the dHYM residual.
//! * [`torus`]: spectral Newton/continuation solver on flat complex tori.
//! * [`toric`]: exact intersection-number checks from moment polytopes.
//! * [`cli`]: configuration schemas and subcommand drivers for the `gma` binary.

pub mod cli;
pub mod dhym;
pub mod equation;
pub mod reduce;
pub mod symfun;
pub mod toric;
pub mod torus;
