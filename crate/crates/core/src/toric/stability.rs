use std::f64::consts::{FRAC_PI_2, PI};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{binomial_q, faces, mixed_power, rational_to_f64, FaceData, ToricClass, ToricError, Q};
use crate::dhym::{oracle_ck, wrap_angle, PhaseSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Boundary,
    Fail,
}

impl Verdict {
    /// The more severe of two verdicts.
    pub fn worst(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceMargin {
    pub facets: Vec<usize>,
    pub dim: usize,
    /// Exact rational, as a string.
    pub margin: String,
    #[serde(skip)]
    pub exact: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonInterval {
    /// The constant `C` in the substitution `c_1 → ε`, `c_n → c_n − Cε`.
    pub constant_c: String,
    pub lower: String,
    pub upper: String,
    pub midpoint: Option<String>,
    pub nonempty: bool,
    #[serde(skip)]
    pub exact: Option<(Q, Q)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem13Report {
    pub n: usize,
    pub c: Vec<String>,
    pub top_margin: String,
    pub faces: Vec<FaceMargin>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<EpsilonInterval>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub top_exact: Q,
}

fn qs(x: &Q) -> String {
    x.to_string()
}

fn classify<'a, I: IntoIterator<Item = &'a Q>>(margins: I) -> Verdict {
    let mut v = Verdict::Pass;
    for m in margins {
        if m.is_negative() {
            return Verdict::Fail;
        }
        if m.is_zero() {
            v = Verdict::Boundary;
        }
    }
    v
}

/// Margin `∫_V Ω^p − Σ_{k=1}^{p} c_k C(p,k) ∫_V ω^k Ω^{p−k}` for `p = dim V`,
/// as affine data `(value, d/dc_1, d/dc_n)` for the ε preprocessor.
fn margin(
    omega: &ToricClass,
    big: &ToricClass,
    c: &[Q],
    face: Option<&FaceData>,
) -> Result<(Q, Q, Q), ToricError> {
    let n = omega.fan().dim();
    let p = face.map_or(n, |f| f.dim);
    let mut value = mixed_power(big, p, omega, 0, face)?;
    let mut d1 = Q::zero();
    let mut dn = Q::zero();
    for k in 1..=p {
        let term = binomial_q(p, k) * mixed_power(omega, k, big, p - k, face)?;
        value -= &c[k - 1] * &term;
        if k == 1 {
            d1 = -term.clone();
        }
        if k == n {
            dn = -term;
        }
    }
    Ok((value, d1, dn))
}

/// Checks the intersection-number inequalities for `c = (c_1, …, c_n)`:
/// the top class with `≥ 0` and every proper face with `> 0`.
///
/// With `c_1 = 0` it also reports the exact interval of `ε ∈ (0, c_n/C)`
/// for which the substitution `c_1 → ε, c_n → c_n − Cε` keeps every
/// margin positive.
pub fn check_theorem13(
    omega: &ToricClass,
    big: &ToricClass,
    c: &[Q],
) -> Result<Theorem13Report, ToricError> {
    if omega.fan() != big.fan() {
        return Err(ToricError::FanMismatch);
    }
    let n = omega.fan().dim();
    if c.len() != n {
        return Err(ToricError::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    if let Some((k, v)) = c.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(ToricError::NegativeCoefficient {
            k: k + 1,
            value: qs(v),
        });
    }
    if c[0].is_zero() && c[n - 1].is_zero() {
        return Err(ToricError::Hypothesis);
    }
    let (top, top_d1, top_dn) = margin(omega, big, c, None)?;
    let face_list = faces(omega);
    let mut face_margins = Vec::with_capacity(face_list.len());
    let mut affine = vec![(top.clone(), top_d1, top_dn)];
    for f in &face_list {
        let (m, d1, dn) = margin(omega, big, c, Some(f))?;
        face_margins.push(FaceMargin {
            facets: f.facets.clone(),
            dim: f.dim,
            margin: qs(&m),
            exact: m.clone(),
        });
        affine.push((m, d1, dn));
    }
    let verdict = classify(
        std::iter::once(&top).chain(face_margins.iter().map(|f| &f.exact)),
    );
    let epsilon = if c[0].is_zero() {
        Some(epsilon_interval(omega, big, c, &affine)?)
    } else {
        None
    };
    Ok(Theorem13Report {
        n,
        c: c.iter().map(qs).collect(),
        top_margin: qs(&top),
        faces: face_margins,
        epsilon,
        verdict,
        top_exact: top,
    })
}

fn epsilon_interval(
    omega: &ToricClass,
    big: &ToricClass,
    c: &[Q],
    affine: &[(Q, Q, Q)],
) -> Result<EpsilonInterval, ToricError> {
    let n = omega.fan().dim();
    let num = q_usize(n) * mixed_power(omega, 1, big, n - 1, None)?;
    let den = mixed_power(omega, n, big, 0, None)?;
    let cc = num / den + Q::one();
    let cn = &c[n - 1];
    let mut lo = Q::zero();
    let mut hi = cn / &cc;
    // margin(ε) = m + ε·d1 − Cε·dn, using c_1: 0 → ε and c_n → c_n − Cε.
    for (m, d1, dn) in affine {
        let slope = d1 - &cc * dn;
        if slope.is_positive() {
            let bound = -m / &slope;
            if bound > lo {
                lo = bound;
            }
        } else if slope.is_negative() {
            let bound = -m / &slope;
            if bound < hi {
                hi = bound;
            }
        } else if !m.is_positive() {
            hi = lo.clone();
        }
    }
    let nonempty = lo < hi;
    let midpoint = nonempty.then(|| (&lo + &hi) / q_usize(2));
    Ok(EpsilonInterval {
        constant_c: qs(&cc),
        lower: qs(&lo),
        upper: qs(&hi),
        midpoint: midpoint.as_ref().map(qs),
        nonempty,
        exact: nonempty.then(|| (lo.clone(), hi.clone())),
    })
}

fn q_usize(k: usize) -> Q {
    super::q(k as i64, 1)
}

/// Margins of [`check_theorem13`] with `c` replaced by `c'` where
/// `c'_1 = ε` and `c'_n = c_n − Cε`.
pub fn substituted_coefficients(c: &[Q], eps: &Q, constant_c: &Q) -> Vec<Q> {
    let n = c.len();
    let mut out = c.to_vec();
    out[0] = eps.clone();
    out[n - 1] = &c[n - 1] - constant_c * eps;
    out
}

/// `Arg Σ_k C(p,k) i^k ∫_V ω^{p−k} α^k`, principal value in `(−π, π]`.
pub fn theta_v(
    omega: &ToricClass,
    alpha: &ToricClass,
    face: Option<&FaceData>,
) -> Result<f64, ToricError> {
    let (re, im) = complex_integral(omega, alpha, face)?;
    if re.is_zero() && im.is_zero() {
        return Err(ToricError::ZeroIntegral);
    }
    let (x, y) = (rational_to_f64(&re), rational_to_f64(&im));
    let t = y.atan2(x);
    Ok(if t == -PI { PI } else { t })
}

fn complex_integral(
    omega: &ToricClass,
    alpha: &ToricClass,
    face: Option<&FaceData>,
) -> Result<(Q, Q), ToricError> {
    if omega.fan() != alpha.fan() {
        return Err(ToricError::FanMismatch);
    }
    let p = face.map_or(omega.fan().dim(), |f| f.dim);
    let mut re = Q::zero();
    let mut im = Q::zero();
    for k in 0..=p {
        let term = binomial_q(p, k) * mixed_power(omega, p - k, alpha, k, face)?;
        match k % 4 {
            0 => re += term,
            1 => im += term,
            2 => re -= term,
            _ => im -= term,
        }
    }
    Ok((re, im))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceAngle {
    pub facets: Vec<usize>,
    pub dim: usize,
    pub theta: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition2 {
    pub holds: bool,
    pub c: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corollary14Report {
    pub n: usize,
    pub theta_hat: f64,
    pub branch_shift: i64,
    pub theta_top: f64,
    /// `θ_X − θ̂` wrapped into `(−π, π]`.
    pub top_consistency: f64,
    pub faces: Vec<FaceAngle>,
    pub condition1: Verdict,
    pub condition2: Condition2,
    pub verdict: Verdict,
}

/// Relative floor for treating a floating `c_k` as nonnegative.
const CK_FLOOR: f64 = 1e-10;

/// Angle conditions on every proper face plus the sign condition on the
/// dHYM coefficients at `theta_hat`.
///
/// Face margins are `θ_V + 2π·branch_shift − (θ̂ − (n − dim V)π/2)`.
pub fn check_corollary14(
    omega: &ToricClass,
    alpha: &ToricClass,
    theta_hat: f64,
    branch_shift: i64,
) -> Result<Corollary14Report, ToricError> {
    if omega.fan() != alpha.fan() {
        return Err(ToricError::FanMismatch);
    }
    let n = omega.fan().dim();
    let theta_top = theta_v(omega, alpha, None)?;
    let shift = 2.0 * PI * branch_shift as f64;
    let mut angles = Vec::new();
    let mut condition1 = Verdict::Pass;
    for f in faces(omega) {
        let theta = theta_v(omega, alpha, Some(&f))?;
        let m = theta + shift - (theta_hat - (n - f.dim) as f64 * FRAC_PI_2);
        if m < 0.0 {
            condition1 = Verdict::Fail;
        } else if m == 0.0 {
            condition1 = condition1.worst(Verdict::Boundary);
        }
        angles.push(FaceAngle {
            facets: f.facets,
            dim: f.dim,
            theta,
            margin: m,
        });
    }
    let condition2 = match PhaseSpec::new(n, theta_hat).and_then(|s| oracle_ck(&s)) {
        Ok(d) => {
            let scale = d.c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let floor = CK_FLOOR * scale;
            let nonneg = d.c.iter().all(|&x| x >= -floor);
            let c0 = d.c[0] > floor;
            Condition2 {
                holds: nonneg && c0,
                reason: (!(nonneg && c0)).then(|| {
                    if !c0 {
                        format!("c_0 = {} is not positive", d.c[0])
                    } else {
                        "some c_k is negative".to_string()
                    }
                }),
                c: d.c,
            }
        }
        Err(e) => Condition2 {
            holds: false,
            c: Vec::new(),
            reason: Some(e.to_string()),
        },
    };
    let verdict = if condition2.holds {
        condition1
    } else {
        Verdict::Fail
    };
    Ok(Corollary14Report {
        n,
        theta_hat,
        branch_shift,
        theta_top,
        top_consistency: wrap_angle(theta_top - theta_hat),
        faces: angles,
        condition1,
        condition2,
        verdict,
    })
}

/// Combined report for a toric configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem13: Option<Theorem13Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary14: Option<Corollary14Report>,
    pub verdict: Verdict,
}

impl StabilityReport {
    pub fn new(theorem13: Option<Theorem13Report>, corollary14: Option<Corollary14Report>) -> Self {
        let verdict = theorem13
            .iter()
            .map(|r| r.verdict)
            .chain(corollary14.iter().map(|r| r.verdict))
            .fold(Verdict::Pass, Verdict::worst);
        Self {
            theorem13,
            corollary14,
            verdict,
        }
    }
}
