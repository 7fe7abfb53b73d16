//! Exact convex hulls and volumes in dimensions 1 to 3.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use super::{Point, Q};

fn sub(a: &[Q], b: &[Q]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross2(o: &[Q], a: &[Q], b: &[Q]) -> Q {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

fn det3(a: &[Q], b: &[Q], c: &[Q]) -> Q {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn cross3(a: &[Q], b: &[Q]) -> Point {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |s, (x, y)| s + x * y)
}

fn lex(a: &[Q], b: &[Q]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Affine rank of `points` and the coordinate axes onto which projection
/// is injective on their affine span.
pub(crate) fn affine_frame(points: &[Point]) -> (usize, Vec<usize>) {
    if points.is_empty() {
        return (0, Vec::new());
    }
    let mut rows: Vec<Point> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    let d = points[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..d {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let pr = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if !row[col].is_zero() {
                let f = &row[col] / &pr[col];
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (r, pivots)
}

fn project(points: &[Point], axes: &[usize]) -> Vec<Point> {
    points
        .iter()
        .map(|p| axes.iter().map(|&a| p[a].clone()).collect())
        .collect()
}

/// Distinct points in lexicographic order.
fn dedup(points: &[Point]) -> Vec<Point> {
    let mut v = points.to_vec();
    v.sort_by(|a, b| lex(a, b));
    v.dedup();
    v
}

/// Indices of the extreme points of `pts` (2D), counterclockwise, without
/// collinear boundary points. `pts` must be distinct.
fn hull2_indices(pts: &[Point]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| lex(&pts[a], &pts[b]));
    if order.len() < 3 {
        return order;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2
            && !cross2(&pts[lower[lower.len() - 2]], &pts[lower[lower.len() - 1]], &pts[i])
                .is_positive()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && !cross2(&pts[upper[upper.len() - 2]], &pts[upper[upper.len() - 1]], &pts[i])
                .is_positive()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn area2(pts: &[Point], poly: &[usize]) -> Q {
    let mut s = Q::zero();
    for i in 0..poly.len() {
        let (a, b) = (&pts[poly[i]], &pts[poly[(i + 1) % poly.len()]]);
        s += &a[0] * &b[1] - &a[1] * &b[0];
    }
    s.abs() / Q::from_integer(2.into())
}

/// Outward facets of a full-dimensional 3D point set, each a
/// counterclockwise-unordered polygon of point indices.
fn facets3(pts: &[Point]) -> Vec<Vec<usize>> {
    let np = pts.len();
    let supports = |a: usize, b: usize, c: usize| -> Option<(Point, Q)> {
        let nrm = cross3(&sub(&pts[b], &pts[a]), &sub(&pts[c], &pts[a]));
        if nrm.iter().all(|x| x.is_zero()) {
            return None;
        }
        let off = dot(&nrm, &pts[a]);
        let (mut pos, mut neg) = (false, false);
        for p in pts {
            let s = dot(&nrm, p) - &off;
            pos |= s.is_positive();
            neg |= s.is_negative();
            if pos && neg {
                return None;
            }
        }
        Some((nrm, off))
    };
    let on_plane = |nrm: &Point, off: &Q| -> Vec<usize> {
        (0..np).filter(|&i| dot(nrm, &pts[i]) == *off).collect()
    };
    let polygon = |idx: &[usize], nrm: &Point| -> Vec<usize> {
        let drop = (0..3).find(|&k| !nrm[k].is_zero()).expect("nonzero normal");
        let axes: Vec<usize> = (0..3).filter(|&k| k != drop).collect();
        let sub_pts: Vec<Point> = idx.iter().map(|&i| project(&[pts[i].clone()], &axes)[0].clone()).collect();
        hull2_indices(&sub_pts).into_iter().map(|j| idx[j]).collect()
    };

    // Initial facet through the lowest point.
    let a = 0;
    let mut first = None;
    'outer: for b in 1..np {
        for c in b + 1..np {
            if let Some(pl) = supports(a, b, c) {
                first = Some(pl);
                break 'outer;
            }
        }
    }
    let (n0, o0) = first.expect("full-dimensional point set has a facet through a vertex");
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let idx0 = on_plane(&n0, &o0);
    seen.insert(idx0.clone());
    queue.push_back((idx0, n0));
    while let Some((idx, nrm)) = queue.pop_front() {
        let poly = polygon(&idx, &nrm);
        for e in 0..poly.len() {
            let (u, v) = (poly[e], poly[(e + 1) % poly.len()]);
            for c in 0..np {
                if idx.binary_search(&c).is_ok() {
                    continue;
                }
                if let Some((n2, o2)) = supports(u, v, c) {
                    let key = on_plane(&n2, &o2);
                    if seen.insert(key.clone()) {
                        queue.push_back((key, n2));
                    }
                    break;
                }
            }
        }
        out.push(poly);
    }
    out
}

/// Convex hull summary: affine dimension, extreme points, and the
/// full-dimensional volume (zero if the hull is degenerate).
pub(crate) struct Hull {
    pub affine_dim: usize,
    pub vertices: Vec<Point>,
    pub volume: Q,
}

pub(crate) fn hull(points: &[Point]) -> Hull {
    let pts = dedup(points);
    let d = pts.first().map_or(0, |p| p.len());
    let (rank, axes) = affine_frame(&pts);
    let proj = project(&pts, &axes);
    let vertex_idx: Vec<usize> = match rank {
        0 => (0..pts.len().min(1)).collect(),
        1 => {
            let cmp = |i: &usize, j: &usize| proj[*i][0].cmp(&proj[*j][0]);
            let lo = (0..pts.len()).min_by(cmp).unwrap();
            let hi = (0..pts.len()).max_by(cmp).unwrap();
            vec![lo, hi]
        }
        2 => hull2_indices(&proj),
        _ => {
            let fs = facets3(&proj);
            let set: BTreeSet<usize> = fs.iter().flatten().copied().collect();
            set.into_iter().collect()
        }
    };
    let volume = if rank < d || d == 0 {
        Q::zero()
    } else {
        match d {
            1 => &proj[vertex_idx[1]][0] - &proj[vertex_idx[0]][0],
            2 => area2(&proj, &vertex_idx),
            _ => volume3(&proj, &vertex_idx),
        }
    };
    Hull {
        affine_dim: rank,
        vertices: vertex_idx.into_iter().map(|i| pts[i].clone()).collect(),
        volume,
    }
}

fn volume3(pts: &[Point], vertex_idx: &[usize]) -> Q {
    let verts: Vec<Point> = vertex_idx.iter().map(|&i| pts[i].clone()).collect();
    let k = Q::from_integer((verts.len() as i64).into());
    let centroid: Point = (0..3)
        .map(|c| verts.iter().fold(Q::zero(), |s, v| s + &v[c]) / &k)
        .collect();
    let six = Q::from_integer(6.into());
    facets3(&verts)
        .iter()
        .map(|poly| {
            let base = sub(&verts[poly[0]], &centroid);
            (1..poly.len() - 1)
                .map(|i| {
                    let b = sub(&verts[poly[i]], &centroid);
                    let c = sub(&verts[poly[i + 1]], &centroid);
                    det3(&base, &b, &c).abs()
                })
                .fold(Q::zero(), |s, x| s + x)
        })
        .fold(Q::zero(), |s, x| s + x)
        / six
}
