use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{rationals, CoeffsConfig, ConeConfig, SolveConfig, ToricConfig};
use super::{CliError, ExitStatus, Outcome};
use crate::dhym::{
    alt_even_ck, closed_form_ck, oracle_ck, DhymCoefficients, Parity, PhaseSpec,
};
use crate::equation::{
    admissibility_check, cone_margins_unchecked, from_gamma, residual_from_sigmas, to_gamma,
    AdmissibilityReport, Coefficient, Convention, GammaCoefficients, DEFAULT_EPS_POS,
};
use crate::symfun::sigma_all;
use crate::toric::{
    check_corollary14, check_theorem13, NormalFan, StabilityReport, ToricClass, Verdict,
};
use crate::torus::{
    continuity_solve, cosine_mode, manufactured_problem, read_field, resolved_gamma, verify_solution,
    write_field, Background, ContinuationOptions, FieldHeader, NewtonOptions, PotentialGrid,
    SolveReport, SolverError, TorusGrid,
};

/// Entries below this fraction of the largest magnitude count as zero when
/// classifying floating-point coefficients.
const ZERO_FLOOR: f64 = 1e-10;

fn snap_zeros(v: &[f64]) -> Vec<f64> {
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    v.iter()
        .map(|&x| if x.abs() <= ZERO_FLOOR * scale { 0.0 } else { x })
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[derive(Debug, Serialize)]
struct CoeffsBody {
    n: usize,
    theta_hat: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    parity: Option<Parity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<DhymCoefficients>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<DhymCoefficients>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alt_even: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_abs_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_rel_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<Vec<f64>>,
    convention: Convention,
    #[serde(skip_serializing_if = "Option::is_none")]
    converted: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conversion_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    admissibility: Option<AdmissibilityReport>,
    admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// dHYM coefficients at `(n, θ̂)` from both the polynomial oracle and the
/// closed form, their canonical `γ`, and the admissibility verdict.
pub fn coeffs(cfg: &CoeffsConfig) -> Outcome {
    let mut body = CoeffsBody {
        n: cfg.n,
        theta_hat: cfg.theta_hat,
        parity: None,
        shift: None,
        oracle: None,
        closed_form: None,
        alt_even: None,
        max_abs_delta: None,
        max_rel_delta: None,
        gamma: None,
        convention: cfg.convention,
        converted: None,
        conversion_error: None,
        admissibility: None,
        admissible: false,
        error: None,
    };
    let computed = PhaseSpec::new(cfg.n, cfg.theta_hat)
        .and_then(|spec| Ok((spec, oracle_ck(&spec)?, closed_form_ck(&spec)?)));
    let (spec, oracle, closed) = match computed {
        Ok(t) => t,
        Err(e) => {
            let summary = format!("coeffs: inadmissible phase: {e}");
            body.error = Some(e.to_string());
            return Outcome::new("coeffs", ExitStatus::InadmissiblePhase, &body, summary);
        }
    };
    body.parity = Some(spec.parity());
    body.shift = Some(spec.shift());
    body.alt_even = alt_even_ck(&spec);
    let delta = max_abs_diff(&oracle.c, &closed.c);
    let scale = oracle.c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    body.max_abs_delta = Some(delta);
    body.max_rel_delta = Some(if scale > 0.0 { delta / scale } else { delta });

    let c = snap_zeros(&oracle.c);
    match to_gamma(&c, Convention::Speclagma, cfg.n) {
        Ok(g) => {
            let values = g.as_constants().unwrap_or_default();
            match from_gamma(&values, cfg.convention, 0.0) {
                Ok(v) => body.converted = Some(v),
                Err(e) => body.conversion_error = Some(e.to_string()),
            }
            let adm = admissibility_check(&g, DEFAULT_EPS_POS);
            body.admissible = adm.admissible;
            body.admissibility = Some(adm);
            body.gamma = Some(values);
        }
        Err(e) => body.error = Some(e.to_string()),
    }
    body.oracle = Some(oracle);
    body.closed_form = Some(closed);
    let status = if body.admissible {
        ExitStatus::Success
    } else {
        ExitStatus::InadmissiblePhase
    };
    let summary = format!(
        "coeffs: n = {}, theta_hat = {}, c = {:?}, {}",
        cfg.n,
        cfg.theta_hat,
        c,
        if body.admissible { "admissible" } else { "inadmissible" }
    );
    Outcome::new("coeffs", status, &body, summary)
}

#[derive(Debug, Serialize)]
struct ConeBody {
    n: usize,
    lambda: Vec<f64>,
    gamma: Vec<f64>,
    residual: f64,
    positive: bool,
    cone_margins: Vec<f64>,
    cone_margin_min: f64,
    admissibility: AdmissibilityReport,
    holds: bool,
}

/// Residual and cone margins of a single spectrum; the condition holds when
/// the spectrum is positive and every margin is positive.
pub fn check_cone(cfg: &ConeConfig) -> Result<Outcome, CliError> {
    let n = cfg.lambda.len();
    let g = to_gamma(&cfg.coefficients, cfg.convention, n)?;
    let gamma = g.as_constants().unwrap_or_default();
    let sigma = sigma_all(&cfg.lambda);
    let margins = cone_margins_unchecked(&cfg.lambda, &gamma);
    let margin_min = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let positive = cfg.lambda.iter().all(|&l| l > 0.0);
    let holds = positive && margin_min > 0.0;
    let body = ConeBody {
        n,
        lambda: cfg.lambda.clone(),
        residual: residual_from_sigmas(&sigma, &gamma),
        gamma,
        positive,
        cone_margins: margins,
        cone_margin_min: margin_min,
        admissibility: admissibility_check(&g, DEFAULT_EPS_POS),
        holds,
    };
    let summary = format!(
        "check-cone: min margin {margin_min:e}, {}",
        if holds { "holds" } else { "violated" }
    );
    let status = if holds {
        ExitStatus::Success
    } else {
        ExitStatus::Fail
    };
    Ok(Outcome::new("check-cone", status, &body, summary))
}

struct Problem {
    grid: TorusGrid,
    bg: Background,
    gamma: GammaCoefficients,
    spec: Option<PhaseSpec>,
    phi_star: Option<PotentialGrid>,
    tol: f64,
}

fn build_problem(cfg: &SolveConfig) -> Result<Problem, CliError> {
    cfg.check()?;
    let n = cfg.n;
    let grid = TorusGrid::new(n, cfg.grid_size)?;
    let bg = cfg.background.build(n)?;
    let mut spec = None;
    let mut phi_star = None;
    let gamma = if let Some(c) = &cfg.coefficients {
        to_gamma(&c.values, c.convention, n)?
    } else if let Some(d) = &cfg.dhym {
        let s = PhaseSpec::new(n, d.theta_hat)?;
        spec = Some(s);
        to_gamma(&closed_form_ck(&s)?.c, Convention::Speclagma, n)?
    } else {
        let m = cfg.manufactured.as_ref().expect("checked by SolveConfig::check");
        let mut values = vec![0.0; grid.len()];
        for mode in &m.modes {
            let f = cosine_mode(&grid, mode.amplitude, &mode.mode)?;
            for (v, x) in values.iter_mut().zip(f.values()) {
                *v += x;
            }
        }
        let star = PotentialGrid::new(&grid, values)?;
        let g0 = manufactured_problem(&grid, &star, &m.tail, &bg)?;
        phi_star = Some(star);
        let mut coeffs = vec![Coefficient::Field(g0)];
        coeffs.extend(m.tail.iter().map(|&t| Coefficient::Constant(t)));
        GammaCoefficients::from_coefficients(coeffs, Convention::Direct)?
    };
    Ok(Problem {
        tol: cfg.tol.unwrap_or_else(|| NewtonOptions::default_tol(n)),
        grid,
        bg,
        gamma,
        spec,
        phi_star,
    })
}

fn gamma_json(g: &GammaCoefficients) -> Vec<Value> {
    g.coefficients()
        .iter()
        .map(|c| match c {
            Coefficient::Constant(x) => json!(x),
            Coefficient::Field(_) => json!({
                "field": { "min": c.min(), "mean": c.mean(), "max": c.max() }
            }),
        })
        .collect()
}

fn phi_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".phi");
    PathBuf::from(s)
}

fn store_phi(grid: &TorusGrid, phi: &PotentialGrid, out: Option<&Path>) -> Result<Option<String>, CliError> {
    let Some(out) = out else {
        return Ok(None);
    };
    let path = phi_path(out);
    let header = FieldHeader {
        shape: grid.shape(),
        n: grid.n(),
        size: grid.size(),
        field_name: "phi".into(),
    };
    write_field(&path, &header, phi.values())?;
    Ok(Some(path.display().to_string()))
}

#[derive(Debug, Serialize)]
struct SolveBody {
    n: usize,
    grid_size: usize,
    tol: f64,
    converged: bool,
    gamma: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    last_tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    manufactured_sup_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<SolveReport>,
}

/// Continuity-method solve. The potential goes to `<out>.phi` (with a
/// `.phi.json` sidecar) when `out` is given.
pub fn solve(cfg: &SolveConfig, out: Option<&Path>) -> Result<Outcome, CliError> {
    let p = build_problem(cfg)?;
    let opts = ContinuationOptions::new(cfg.continuation_steps, p.tol);
    let resolved = resolved_gamma(&p.bg, &p.gamma)?;
    let mut body = SolveBody {
        n: cfg.n,
        grid_size: cfg.grid_size,
        tol: p.tol,
        converged: false,
        gamma: gamma_json(&resolved),
        last_tau: None,
        diagnostics: None,
        manufactured_sup_error: None,
        phi_file: None,
        report: None,
    };
    let (status, summary) = match continuity_solve(&p.grid, &p.bg, &p.gamma, &opts, p.spec.as_ref()) {
        Ok((phi, report)) => {
            body.converged = report.residual_sup <= p.tol && report.cone_margin_min > 0.0;
            body.manufactured_sup_error = p.phi_star.as_ref().map(|s| phi.sup_distance(s));
            body.phi_file = store_phi(&p.grid, &phi, out)?;
            let summary = format!(
                "solve: sup|R| = {:e}, min cone margin = {:e}",
                report.residual_sup, report.cone_margin_min
            );
            body.report = Some(report);
            let status = if body.converged {
                ExitStatus::Success
            } else {
                ExitStatus::ContinuationStuck
            };
            (status, summary)
        }
        Err(SolverError::StepUnderflow {
            last_tau,
            phi,
            report,
        }) => {
            body.last_tau = Some(last_tau);
            body.diagnostics = Some(format!("continuation step underflow after tau = {last_tau}"));
            body.phi_file = store_phi(&p.grid, &phi, out)?;
            body.report = Some(*report);
            (
                ExitStatus::ContinuationStuck,
                format!("solve: continuation stuck after tau = {last_tau}"),
            )
        }
        Err(e) if e.is_corrector_failure() => {
            body.last_tau = Some(0.0);
            body.diagnostics = Some(e.to_string());
            (ExitStatus::ContinuationStuck, format!("solve: {e}"))
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome::new("solve", status, &body, summary))
}

#[derive(Debug, Serialize)]
struct VerifyBody {
    n: usize,
    grid_size: usize,
    tol: f64,
    gamma: Vec<Value>,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    manufactured_sup_error: Option<f64>,
    report: SolveReport,
}

/// Recomputes the diagnostics of the stored potential `cfg.phi` against the
/// problem described by `cfg`. Relative paths are taken from `base`.
pub fn verify(cfg: &SolveConfig, base: &Path) -> Result<Outcome, CliError> {
    let p = build_problem(cfg)?;
    let rel = cfg
        .phi
        .as_ref()
        .ok_or_else(|| CliError::Invalid("verify needs `phi`, the path of a stored potential".into()))?;
    let path = if Path::new(rel).is_absolute() {
        PathBuf::from(rel)
    } else {
        base.join(rel)
    };
    let (header, values) = read_field(&path)?;
    if header.n != cfg.n || header.size != cfg.grid_size || header.shape != p.grid.shape() {
        return Err(CliError::Invalid(format!(
            "stored field has n = {}, N = {}; config has n = {}, N = {}",
            header.n, header.size, cfg.n, cfg.grid_size
        )));
    }
    let phi = PotentialGrid::new(&p.grid, values)?;
    let resolved = resolved_gamma(&p.bg, &p.gamma)?;
    let report = verify_solution(&p.grid, &phi, &p.bg, &resolved, p.spec.as_ref())?;
    let holds = report.residual_sup <= p.tol
        && report.cone_margin_min > 0.0
        && report.min_eigenvalue > 0.0
        && report.supercritical_margin_min.map_or(true, |m| m > 0.0);
    let summary = format!(
        "verify: sup|R| = {:e}, min cone margin = {:e}, {}",
        report.residual_sup,
        report.cone_margin_min,
        if holds { "holds" } else { "violated" }
    );
    let body = VerifyBody {
        n: cfg.n,
        grid_size: cfg.grid_size,
        tol: p.tol,
        gamma: gamma_json(&resolved),
        holds,
        manufactured_sup_error: p.phi_star.as_ref().map(|s| phi.sup_distance(s)),
        report,
    };
    let status = if holds {
        ExitStatus::Success
    } else {
        ExitStatus::Fail
    };
    Ok(Outcome::new("verify", status, &body, summary))
}

/// Theorem-1.3 and/or Corollary-1.4 checks for the polytope configuration.
pub fn toric(cfg: &ToricConfig) -> Result<Outcome, CliError> {
    let first = cfg
        .facets
        .first()
        .ok_or_else(|| CliError::Invalid("`facets` is empty".into()))?;
    let dim = first.normal.len();
    let normals: Vec<Vec<i64>> = cfg.facets.iter().map(|f| f.normal.clone()).collect();
    let fan = NormalFan::new(dim, normals)?;
    let supports: Vec<_> = cfg.facets.iter().map(|f| f.support.clone()).collect();
    let omega_q = rationals(cfg.classes.omega.as_deref().unwrap_or(&supports))?;
    let omega = ToricClass::new(&fan, omega_q)?;

    if cfg.theorem13.is_none() && cfg.corollary14.is_none() {
        return Err(CliError::Invalid(
            "nothing to check: give `theorem13` and/or `corollary14`".into(),
        ));
    }
    let theorem13 = match &cfg.theorem13 {
        Some(t) => {
            let big = cfg.classes.big_omega.as_ref().ok_or_else(|| {
                CliError::Invalid("`theorem13` needs `classes.Omega`".into())
            })?;
            let big = ToricClass::new(&fan, rationals(big)?)?;
            Some(check_theorem13(&omega, &big, &rationals(&t.c)?)?)
        }
        None => None,
    };
    let corollary14 = match &cfg.corollary14 {
        Some(c) => {
            let alpha = cfg.classes.alpha.as_ref().ok_or_else(|| {
                CliError::Invalid("`corollary14` needs `classes.alpha`".into())
            })?;
            let alpha = ToricClass::new(&fan, rationals(alpha)?)?;
            Some(check_corollary14(&omega, &alpha, c.theta_hat, c.branch_shift)?)
        }
        None => None,
    };
    let report = StabilityReport::new(theorem13, corollary14);
    let status = match report.verdict {
        Verdict::Pass => ExitStatus::Success,
        Verdict::Boundary => ExitStatus::Boundary,
        Verdict::Fail => ExitStatus::Fail,
    };
    let summary = format!("toric: {:?}", report.verdict);
    Ok(Outcome::new("toric", status, &report, summary))
}
