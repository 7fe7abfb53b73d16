//! Exact toric intersection numbers from moment polytopes.
//!
//! A Kähler class on a toric manifold is a polytope `{x : ⟨u_i, x⟩ ≤ h_i}`
//! over a fixed set of primitive outward normals `u_i`; classes differ only
//! in their support numbers `h_i`. Intersection numbers are `n!` times mixed
//! volumes, and on a `p`-dimensional face they are `p!` times mixed volumes
//! measured in the face's own lattice. All arithmetic is over `Q`.

mod hull;
pub mod lattice;
mod stability;

pub use stability::{
    check_corollary14, check_theorem13, substituted_coefficients, theta_v, Condition2, Corollary14Report, EpsilonInterval,
    FaceAngle, FaceMargin, StabilityReport, Theorem13Report, Verdict,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

pub type Q = BigRational;
pub type Point = Vec<Q>;

/// `num/den` as a rational.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Maximum supported ambient dimension.
pub const MAX_DIM: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToricError {
    #[error("dimension {0} is not supported (1..=3)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("facet normal {0:?} is not a primitive integer vector")]
    NonPrimitiveNormal(Vec<i64>),
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is unbounded or has no vertices")]
    Unbounded,
    #[error("hull is degenerate (affine dimension {affine_dim} < {dim})")]
    Degenerate { affine_dim: usize, dim: usize },
    #[error("classes do not share a normal fan")]
    FanMismatch,
    #[error("coefficient c_{k} = {value} is negative")]
    NegativeCoefficient { k: usize, value: String },
    #[error("hypothesis violated: c_1 and c_n are both zero")]
    Hypothesis,
    #[error("complex intersection number vanishes; its argument is undefined")]
    ZeroIntegral,
    #[error("{0}")]
    Phase(String),
    #[error("invalid face")]
    InvalidFace,
}

/// Convex polytope given by its extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
}

impl Polytope {
    /// Convex hull of `points` in `R^dim`.
    pub fn from_points(dim: usize, points: &[Point]) -> Result<Self, ToricError> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(ToricError::UnsupportedDimension(dim));
        }
        if points.is_empty() {
            return Err(ToricError::Empty);
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(ToricError::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        Ok(Self {
            dim,
            vertices: hull::hull(points).vertices,
        })
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_integer_points(dim: usize, points: &[Vec<i64>]) -> Result<Self, ToricError> {
        let pts: Vec<Point> = points
            .iter()
            .map(|p| p.iter().map(|&x| q(x, 1)).collect())
            .collect();
        Self::from_points(dim, &pts)
    }

    /// Axis-parallel box `Π [0, side_i]`.
    pub fn orthotope(sides: &[Q]) -> Result<Self, ToricError> {
        let d = sides.len();
        let pts: Vec<Point> = (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            sides[i].clone()
                        } else {
                            Q::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_points(d, &pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        hull::affine_frame(&self.vertices).0
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope, ToricError> {
        if self.dim != other.dim {
            return Err(ToricError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .flat_map(|a| {
                other
                    .vertices
                    .iter()
                    .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
            })
            .collect();
        Polytope::from_points(self.dim, &pts)
    }

    /// `t · P` for `t ≥ 0`.
    pub fn scale(&self, t: &Q) -> Polytope {
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * t).collect())
            .collect();
        Polytope {
            dim: self.dim,
            vertices: hull::hull(&pts).vertices,
        }
    }
}

/// Exact Euclidean volume of a full-dimensional polytope.
pub fn volume(p: &Polytope) -> Result<Q, ToricError> {
    let h = hull::hull(&p.vertices);
    if h.affine_dim < p.dim {
        return Err(ToricError::Degenerate {
            affine_dim: h.affine_dim,
            dim: p.dim,
        });
    }
    Ok(h.volume)
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k, 1))
}

fn binom(n: usize, k: usize) -> Q {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `V(K_1, …, K_d) = (1/d!) Σ_{∅≠S} (−1)^{d−|S|} vol(Σ_{i∈S} K_i)`.
pub fn mixed_volume(ps: &[&Polytope]) -> Result<Q, ToricError> {
    let d = ps.first().map(|p| p.dim).ok_or(ToricError::Empty)?;
    if ps.len() != d {
        return Err(ToricError::DimensionMismatch {
            expected: d,
            found: ps.len(),
        });
    }
    if let Some(p) = ps.iter().find(|p| p.dim != d) {
        return Err(ToricError::DimensionMismatch {
            expected: d,
            found: p.dim,
        });
    }
    let mut sums: Vec<Option<Vec<Point>>> = vec![None; 1 << d];
    let mut total = Q::zero();
    for mask in 1usize..1 << d {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let pts: Vec<Point> = if rest == 0 {
            ps[low].vertices.clone()
        } else {
            let base = sums[rest].as_ref().expect("subsets are visited in increasing order");
            let raw: Vec<Point> = base
                .iter()
                .flat_map(|a| {
                    ps[low]
                        .vertices
                        .iter()
                        .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
                })
                .collect();
            hull::hull(&raw).vertices
        };
        let h = hull::hull(&pts);
        let sign = if (d - mask.count_ones() as usize) % 2 == 0 {
            Q::one()
        } else {
            -Q::one()
        };
        total += sign * h.volume;
        sums[mask] = Some(h.vertices);
    }
    Ok(total / factorial(d))
}

/// Shared set of primitive outward facet normals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFan {
    dim: usize,
    normals: Vec<Vec<i64>>,
}

impl NormalFan {
    pub fn new(dim: usize, normals: Vec<Vec<i64>>) -> Result<Self, ToricError> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(ToricError::UnsupportedDimension(dim));
        }
        for u in &normals {
            if u.len() != dim {
                return Err(ToricError::DimensionMismatch {
                    expected: dim,
                    found: u.len(),
                });
            }
            if u.iter().fold(0i64, |g, &x| g.gcd(&x)) != 1 {
                return Err(ToricError::NonPrimitiveNormal(u.clone()));
            }
        }
        Ok(Self { dim, normals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    fn eval(&self, i: usize, x: &[Q]) -> Q {
        self.normals[i]
            .iter()
            .zip(x)
            .fold(Q::zero(), |s, (&u, xi)| s + q(u, 1) * xi)
    }
}

/// A class: support numbers over a shared [`NormalFan`], with its polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct ToricClass {
    fan: NormalFan,
    supports: Vec<Q>,
    polytope: Polytope,
}

impl ToricClass {
    pub fn new(fan: &NormalFan, supports: Vec<Q>) -> Result<Self, ToricError> {
        if supports.len() != fan.normals.len() {
            return Err(ToricError::FanMismatch);
        }
        let n = fan.dim;
        let m = supports.len();
        let mut found: Vec<Point> = Vec::new();
        let mut subset: Vec<usize> = (0..n).collect();
        if m >= n {
            loop {
                if let Some(x) = solve_facets(fan, &supports, &subset) {
                    if (0..m).all(|i| fan.eval(i, &x) <= supports[i]) && !found.contains(&x) {
                        found.push(x);
                    }
                }
                if !next_subset(&mut subset, m) {
                    break;
                }
            }
        }
        if found.is_empty() {
            return Err(ToricError::Unbounded);
        }
        let polytope = Polytope::from_points(n, &found)?;
        Ok(Self {
            fan: fan.clone(),
            supports,
            polytope,
        })
    }

    pub fn fan(&self) -> &NormalFan {
        &self.fan
    }

    pub fn supports(&self) -> &[Q] {
        &self.supports
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    /// Vertices lying on every facet in `facets`.
    fn face_points(&self, facets: &[usize]) -> Vec<Point> {
        self.polytope
            .vertices
            .iter()
            .filter(|v| facets.iter().all(|&i| self.fan.eval(i, v) == self.supports[i]))
            .cloned()
            .collect()
    }
}

/// Solves `⟨u_i, x⟩ = h_i` for `i ∈ subset` (square system).
fn solve_facets(fan: &NormalFan, h: &[Q], subset: &[usize]) -> Option<Point> {
    let n = fan.dim;
    let mut m: Vec<Vec<Q>> = subset
        .iter()
        .map(|&i| {
            let mut row: Vec<Q> = fan.normals[i].iter().map(|&u| q(u, 1)).collect();
            row.push(h[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let pr = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = &row[col] / &pr[col];
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some((0..n).map(|i| &m[i][n] / &m[i][i]).collect())
}

/// Advances `s` to the next `k`-subset of `0..m` in lexicographic order.
fn next_subset(s: &mut [usize], m: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < m - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A proper face of the reference polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceData {
    /// Every facet containing the face, ascending.
    pub facets: Vec<usize>,
    pub dim: usize,
    /// Integer basis of the face's tangent lattice.
    pub lattice_basis: Vec<Vec<i64>>,
}

/// All faces of dimension `0..n−1` of `reference`, ordered by dimension and
/// then lexicographically by facet set.
pub fn faces(reference: &ToricClass) -> Vec<FaceData> {
    let fan = &reference.fan;
    let n = fan.dim;
    let m = fan.normals.len();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in 0..n {
        let k = n - p;
        if k > m {
            continue;
        }
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let pts = reference.face_points(&subset);
            if !pts.is_empty() && hull::affine_frame(&pts).0 == p {
                let facets: Vec<usize> = (0..m)
                    .filter(|&i| pts.iter().all(|v| fan.eval(i, v) == reference.supports[i]))
                    .collect();
                if seen.insert(facets.clone()) {
                    let rows: Vec<Vec<i64>> = facets.iter().map(|&i| fan.normals[i].clone()).collect();
                    let lattice_basis = lattice::integer_kernel(&rows, n);
                    out.push(FaceData {
                        facets,
                        dim: p,
                        lattice_basis,
                    });
                }
            }
            if !next_subset(&mut subset, m) {
                break;
            }
        }
    }
    out
}

/// The face of `class` cut out by `face.facets`, in the face's lattice
/// coordinates (a `p`-dimensional polytope).
pub fn face_polytope(class: &ToricClass, face: &FaceData) -> Result<Polytope, ToricError> {
    let pts = class.face_points(&face.facets);
    if pts.is_empty() {
        return Err(ToricError::InvalidFace);
    }
    let local = lattice::to_lattice(&face.lattice_basis, &pts).ok_or(ToricError::InvalidFace)?;
    Polytope::from_points(face.dim, &local)
}

/// `∫_V Π classes` for a face `V` (or the whole variety when `face` is
/// `None`); needs exactly `dim V` classes. The empty product over a
/// torus-fixed point is 1.
pub fn intersection_number(
    classes: &[&ToricClass],
    face: Option<&FaceData>,
) -> Result<Q, ToricError> {
    if classes.is_empty() && face.is_some_and(|f| f.dim == 0) {
        return Ok(Q::one());
    }
    let first = classes.first().ok_or(ToricError::Empty)?;
    if classes.iter().any(|c| c.fan != first.fan) {
        return Err(ToricError::FanMismatch);
    }
    match face {
        None => {
            let ps: Vec<&Polytope> = classes.iter().map(|c| &c.polytope).collect();
            Ok(factorial(first.fan.dim) * mixed_volume(&ps)?)
        }
        Some(f) => {
            if classes.len() != f.dim {
                return Err(ToricError::DimensionMismatch {
                    expected: f.dim,
                    found: classes.len(),
                });
            }
            let ps = classes
                .iter()
                .map(|c| face_polytope(c, f))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&Polytope> = ps.iter().collect();
            Ok(factorial(f.dim) * mixed_volume(&refs)?)
        }
    }
}

/// `∫_V a^i b^j` with `i + j = dim V`.
pub fn mixed_power(
    a: &ToricClass,
    i: usize,
    b: &ToricClass,
    j: usize,
    face: Option<&FaceData>,
) -> Result<Q, ToricError> {
    let mut list: Vec<&ToricClass> = vec![a; i];
    list.extend(std::iter::repeat(b).take(j));
    intersection_number(&list, face)
}

pub(crate) fn rational_to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub(crate) fn binomial_q(n: usize, k: usize) -> Q {
    binom(n, k)
}
