//! Per-point algebra on Hermitian matrices of size at most 3.

use nalgebra::{Matrix2, Matrix3, SymmetricEigen};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Hermitian `n×n` matrix, `n ≤ 3`, stored in a fixed 3×3 array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallHerm {
    pub n: usize,
    pub a: [[Complex64; 3]; 3],
}

impl SmallHerm {
    pub fn zero(n: usize) -> Self {
        debug_assert!((1..=3).contains(&n));
        Self { n, a: [[ZERO; 3]; 3] }
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Self::zero(n);
        for j in 0..n {
            m.a[j][j] = Complex64::new(s, 0.0);
        }
        m
    }

    /// Builds from a row-major slice of `n²` entries.
    pub fn from_entries(n: usize, e: &[Complex64]) -> Self {
        let mut m = Self::zero(n);
        for j in 0..n {
            for k in 0..n {
                m.a[j][k] = e[j * n + k];
            }
        }
        m
    }

    #[inline]
    pub fn add(&self, other: &Self) -> Self {
        let mut m = *self;
        for j in 0..self.n {
            for k in 0..self.n {
                m.a[j][k] += other.a[j][k];
            }
        }
        m
    }

    #[inline]
    pub fn add_scaled(&self, other: &Self, t: f64) -> Self {
        let mut m = *self;
        for j in 0..self.n {
            for k in 0..self.n {
                m.a[j][k] += other.a[j][k] * t;
            }
        }
        m
    }

    #[inline]
    fn mul(&self, other: &Self) -> Self {
        let mut m = Self::zero(self.n);
        for j in 0..self.n {
            for k in 0..self.n {
                let mut s = ZERO;
                for l in 0..self.n {
                    s += self.a[j][l] * other.a[l][k];
                }
                m.a[j][k] = s;
            }
        }
        m
    }

    #[inline]
    fn diag_re(&self, j: usize) -> f64 {
        self.a[j][j].re
    }

    /// `(σ_0, …, σ_n)` of the eigenvalues, from sums of principal minors.
    #[inline]
    pub fn sigmas(&self) -> [f64; 4] {
        let a = &self.a;
        match self.n {
            1 => [1.0, self.diag_re(0), 0.0, 0.0],
            2 => {
                let (d0, d1) = (self.diag_re(0), self.diag_re(1));
                [1.0, d0 + d1, d0 * d1 - a[0][1].norm_sqr(), 0.0]
            }
            _ => {
                let (d0, d1, d2) = (self.diag_re(0), self.diag_re(1), self.diag_re(2));
                let (n01, n02, n12) = (a[0][1].norm_sqr(), a[0][2].norm_sqr(), a[1][2].norm_sqr());
                let s2 = d0 * d1 - n01 + d0 * d2 - n02 + d1 * d2 - n12;
                let cyc = (a[0][1] * a[1][2] * a[2][0]).re;
                let det = d0 * d1 * d2 + 2.0 * cyc - d0 * n12 - d1 * n02 - d2 * n01;
                [1.0, d0 + d1 + d2, s2, det]
            }
        }
    }

    /// Newton tensors `T_0..T_{n-1}` with `dσ_k = tr(T_{k-1} dA)`:
    /// `T_0 = I`, `T_m = σ_m I − A T_{m−1}`.
    #[inline]
    pub fn newton_tensors(&self, sigma: &[f64; 4]) -> [SmallHerm; 3] {
        let mut t = [Self::zero(self.n); 3];
        t[0] = Self::scaled_identity(self.n, 1.0);
        for m in 1..self.n {
            let at = self.mul(&t[m - 1]);
            let mut next = Self::scaled_identity(self.n, sigma[m]);
            for j in 0..self.n {
                for k in 0..self.n {
                    next.a[j][k] -= at.a[j][k];
                }
            }
            t[m] = next;
        }
        t
    }

    /// Linearization `M = ∂R/∂A` of `R(A) = σ_n(A) − Σ γ_k σ_k(A)`, so that
    /// `dR = tr(M dA)`. Its eigenvalues are the cone margins.
    #[inline]
    pub fn linearization(&self, gamma: &[f64]) -> SmallHerm {
        let sigma = self.sigmas();
        let t = self.newton_tensors(&sigma);
        let mut m = t[self.n - 1];
        for k in 1..self.n {
            let g = gamma[k];
            if g != 0.0 {
                m = m.add_scaled(&t[k - 1], -g);
            }
        }
        m
    }

    /// `tr(self · h)` for Hermitian `self`, `h`.
    #[inline]
    pub fn contract(&self, h: &SmallHerm) -> f64 {
        let mut s = 0.0;
        for j in 0..self.n {
            for k in 0..self.n {
                s += (self.a[k][j] * h.a[j][k]).re;
            }
        }
        s
    }

    /// All eigenvalues strictly positive (every σ_k > 0).
    #[inline]
    pub fn is_positive_definite(&self) -> bool {
        let s = self.sigmas();
        (1..=self.n).all(|k| s[k] > 0.0)
    }

    /// All eigenvalues nonnegative (every σ_k ≥ 0).
    #[inline]
    pub fn is_positive_semidefinite(&self) -> bool {
        let s = self.sigmas();
        (1..=self.n).all(|k| s[k] >= 0.0)
    }

    /// Eigenvalues in nondecreasing order (first `n` entries valid).
    pub fn eigenvalues(&self) -> [f64; 3] {
        let a = &self.a;
        let mut out = [0.0; 3];
        match self.n {
            1 => out[0] = a[0][0].re,
            2 => {
                let m = Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1]);
                let e = SymmetricEigen::new(m).eigenvalues;
                out[0] = e[0];
                out[1] = e[1];
            }
            _ => {
                let m = Matrix3::new(
                    a[0][0], a[0][1], a[0][2], a[1][0], a[1][1], a[1][2], a[2][0], a[2][1],
                    a[2][2],
                );
                let e = SymmetricEigen::new(m).eigenvalues;
                out = [e[0], e[1], e[2]];
            }
        }
        out[..self.n].sort_by(f64::total_cmp);
        out
    }
}
