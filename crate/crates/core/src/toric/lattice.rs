//! Integer lattices of face tangent spaces.

use num_integer::Integer;
use num_traits::Zero;

use super::{Point, Q};

/// Basis of the saturated integer kernel `{x ∈ Z^n : A x = 0}` for the rows
/// `a`, as columns of a unimodular transform.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    // u[c] is column c of the transform.
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|c| (0..n).map(|r| i128::from(r == c)).collect())
        .collect();
    let mut r = 0;
    for row in 0..m.len() {
        if r == n {
            break;
        }
        for q in r + 1..n {
            let (av, bv) = (m[row][r], m[row][q]);
            if bv == 0 {
                continue;
            }
            let e = av.extended_gcd(&bv);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (s, t) = (av / g, bv / g);
            combine(&mut m, r, q, x, y, -t, s);
            for_cols(&mut u, r, q, x, y, -t, s);
        }
        if m[row][r] != 0 {
            r += 1;
        }
    }
    u[r..]
        .iter()
        .map(|c| c.iter().map(|&x| x as i64).collect())
        .collect()
}

/// Columns `(p, q) ← (x·p + y·q, z·p + w·q)` of a row-major matrix.
fn combine(m: &mut [Vec<i128>], p: usize, q: usize, x: i128, y: i128, z: i128, w: i128) {
    for row in m.iter_mut() {
        let (a, b) = (row[p], row[q]);
        row[p] = x * a + y * b;
        row[q] = z * a + w * b;
    }
}

/// Same update on a matrix stored as a list of columns.
fn for_cols(u: &mut [Vec<i128>], p: usize, q: usize, x: i128, y: i128, z: i128, w: i128) {
    let (cp, cq) = (u[p].clone(), u[q].clone());
    for i in 0..cp.len() {
        u[p][i] = x * cp[i] + y * cq[i];
        u[q][i] = z * cp[i] + w * cq[i];
    }
}

/// Coordinates `t` with `v = Σ t_j basis_j`, for `v` in the span.
pub fn coordinates(basis: &[Vec<i64>], v: &[Q]) -> Option<Vec<Q>> {
    let p = basis.len();
    let n = v.len();
    // Augmented n×(p+1) system.
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = basis.iter().map(|b| Q::from_integer(b[i].into())).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let mut r = 0;
    for col in 0..p {
        let piv = (r..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(r, piv);
        let pr = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = &row[col] / &pr[col];
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    if m[r..].iter().any(|row| !row[p].is_zero()) {
        return None;
    }
    Some((0..p).map(|j| &m[j][p] / &m[j][j]).collect())
}

/// Maps face points to lattice coordinates relative to the first point.
pub fn to_lattice(basis: &[Vec<i64>], points: &[Point]) -> Option<Vec<Point>> {
    let Some(origin) = points.first() else {
        return Some(Vec::new());
    };
    points
        .iter()
        .map(|p| {
            let d: Vec<Q> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
            coordinates(basis, &d)
        })
        .collect()
}
