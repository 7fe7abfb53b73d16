//! Deterministic reductions over grid fields.
//!
//! Partials are taken over fixed-size chunks (possibly in parallel) and
//! combined in chunk order, so results do not depend on the thread count.

use rayon::prelude::*;

pub const CHUNK: usize = 4096;

pub fn sum(v: &[f64]) -> f64 {
    let partials: Vec<f64> = v.par_chunks(CHUNK).map(|c| c.iter().sum::<f64>()).collect();
    partials.iter().sum()
}

pub fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    sum(v) / v.len() as f64
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    partials.iter().sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sup_abs(v: &[f64]) -> f64 {
    v.par_iter().map(|x| x.abs()).reduce(|| 0.0, f64::max)
}

pub fn min(v: &[f64]) -> f64 {
    v.par_iter().copied().reduce(|| f64::INFINITY, f64::min)
}

pub fn max(v: &[f64]) -> f64 {
    v.par_iter().copied().reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Subtracts the mean in place.
pub fn project_mean_zero(v: &mut [f64]) {
    let m = mean(v);
    v.par_iter_mut().for_each(|x| *x -= m);
}
