//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

/// `σ_k` by explicit enumeration of `k`-subsets.
pub fn sigma_subsets(lam: &[f64]) -> Vec<f64> {
    let n = lam.len();
    let mut s = vec![0.0; n + 1];
    for mask in 0u32..(1 << n) {
        let prod: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| lam[i]).product();
        s[mask.count_ones() as usize] += prod;
    }
    s
}

/// `σ_k` from power sums through the Newton–Girard identities
/// `k σ_k = Σ_{i=1}^k (−1)^{i−1} σ_{k−i} p_i`.
pub fn sigma_newton_girard(lam: &[f64]) -> Vec<f64> {
    let n = lam.len();
    let p: Vec<f64> = (0..=n).map(|i| lam.iter().map(|x| x.powi(i as i32)).sum()).collect();
    let mut s = vec![0.0; n + 1];
    s[0] = 1.0;
    for k in 1..=n {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * s[k - i] * p[i];
        }
        s[k] = acc / k as f64;
    }
    s
}

/// Eigenvalues of a Hermitian matrix through the real symmetric
/// `2n × 2n` embedding `[[Re, −Im], [Im, Re]]`, each reported once.
pub fn hermitian_eigs_real_embedding(a: &DMatrix<Complex64>) -> Vec<f64> {
    let n = a.nrows();
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            m[(i, j)] = z.re;
            m[(i + n, j + n)] = z.re;
            m[(i, j + n)] = -z.im;
            m[(i + n, j)] = z.im;
        }
    }
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e.into_iter().step_by(2).collect()
}

/// `S_k(A) = σ_{n−k}(A)/σ_n(A)` of a Hermitian matrix.
pub fn s_k_matrix(a: &DMatrix<Complex64>, k: usize) -> f64 {
    let s = sigma_subsets(&hermitian_eigs_real_embedding(a));
    let n = a.nrows();
    s[n - k] / s[n]
}

/// Second directional derivative of `S_k` at `diag(lam)` along `b`
/// (fourth-order central differences) plus `Σ_{i,j} (∂S_k/∂λ_i)|b_ij|²/λ_j`,
/// with the eigenvalue gradient also taken by central differences.
pub fn concavity_form(lam: &[f64], b: &DMatrix<Complex64>, k: usize, h: f64) -> f64 {
    let n = lam.len();
    let a = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(lam[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let f = |t: f64| s_k_matrix(&(&a + b.scale(t)), k);
    let second = (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h))
        / (12.0 * h * h);
    let sk = |l: &[f64]| {
        let s = sigma_subsets(l);
        s[n - k] / s[n]
    };
    let mut first = 0.0;
    for i in 0..n {
        let step = 1e-6 * lam[i];
        let mut lp = lam.to_vec();
        let mut lm = lam.to_vec();
        lp[i] += step;
        lm[i] -= step;
        let d = (sk(&lp) - sk(&lm)) / (2.0 * step);
        for j in 0..n {
            first += d * b[(i, j)].norm_sqr() / lam[j];
        }
    }
    second + first
}

/// Central difference of `f` at `x` along coordinate `i`.
pub fn central_diff<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], i: usize, h: f64) -> f64 {
    let mut p = x.to_vec();
    let mut m = x.to_vec();
    p[i] += h;
    m[i] -= h;
    (f(&p) - f(&m)) / (2.0 * h)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Inverse of the periodic Laplacian-type operator `u ↦ c·Δu` on a
/// 2D grid (axes `x, y`, last axis fastest) by a naive `O(N⁴)` DFT.
/// The mean of `f` is dropped.
pub fn naive_dft_inverse_laplacian(f: &[f64], n: usize, c: f64) -> Vec<f64> {
    use std::f64::consts::PI;
    let freq = |i: usize| -> f64 {
        if i <= n / 2 {
            i as f64
        } else {
            i as f64 - n as f64
        }
    };
    let mut hat = vec![Complex64::new(0.0, 0.0); n * n];
    for a in 0..n {
        for b in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for x in 0..n {
                for y in 0..n {
                    let ang = -2.0 * PI * ((a * x + b * y) as f64) / n as f64;
                    s += f[x * n + y] * Complex64::from_polar(1.0, ang);
                }
            }
            hat[a * n + b] = s;
        }
    }
    for a in 0..n {
        for b in 0..n {
            let k2 = freq(a).powi(2) + freq(b).powi(2);
            hat[a * n + b] = if k2 == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                hat[a * n + b] / (-4.0 * PI * PI * k2 * c)
            };
        }
    }
    let mut out = vec![0.0; n * n];
    for x in 0..n {
        for y in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    let ang = 2.0 * PI * ((a * x + b * y) as f64) / n as f64;
                    s += hat[a * n + b] * Complex64::from_polar(1.0, ang);
                }
            }
            out[x * n + y] = s.re / (n * n) as f64;
        }
    }
    out
}

/// Real root of `s³ = 6s + 4` in `[2, 4]` by bisection.
pub fn calibration_root() -> f64 {
    let f = |s: f64| s * s * s - 6.0 * s - 4.0;
    let (mut lo, mut hi) = (2.0f64, 4.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
