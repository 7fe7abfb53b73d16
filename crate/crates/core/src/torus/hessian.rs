use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::TorusGrid;
use super::pointwise::SmallHerm;
use super::{Background, SolverError};
use crate::equation::GammaCoefficients;

const PI2: f64 = PI * PI;

/// Field of Hermitian `n×n` matrices on a grid: real diagonal entries and
/// the complex upper-triangular entries `(j,k)`, `j<k`, in row order.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianField {
    n: usize,
    diag: Vec<Vec<f64>>,
    off: Vec<Vec<Complex64>>,
}

pub(crate) fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut p = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            p.push((j, k));
        }
    }
    p
}

impl HessianField {
    pub fn zeros(n: usize, len: usize) -> Self {
        Self {
            n,
            diag: vec![vec![0.0; len]; n],
            off: vec![vec![Complex64::default(); len]; n * (n - 1) / 2],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.diag[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn diag(&self, j: usize) -> &[f64] {
        &self.diag[j]
    }

    /// Entries `(j,k)` with `j<k`.
    pub fn off(&self, j: usize, k: usize) -> &[Complex64] {
        let p = pairs(self.n).iter().position(|&q| q == (j, k)).expect("j<k<n");
        &self.off[p]
    }

    /// Entry `(j,k)` at grid point `idx`.
    pub fn entry(&self, idx: usize, j: usize, k: usize) -> Complex64 {
        use std::cmp::Ordering::*;
        match j.cmp(&k) {
            Equal => Complex64::new(self.diag[j][idx], 0.0),
            Less => self.off(j, k)[idx],
            Greater => self.off(k, j)[idx].conj(),
        }
    }

    #[inline]
    pub fn at(&self, idx: usize) -> SmallHerm {
        let mut m = SmallHerm::zero(self.n);
        for j in 0..self.n {
            m.a[j][j] = Complex64::new(self.diag[j][idx], 0.0);
        }
        for (p, &(j, k)) in pairs(self.n).iter().enumerate() {
            let z = self.off[p][idx];
            m.a[j][k] = z;
            m.a[k][j] = z.conj();
        }
        m
    }

    /// Grid mean of the field.
    pub fn mean(&self) -> SmallHerm {
        let mut m = SmallHerm::zero(self.n);
        let len = self.len() as f64;
        for j in 0..self.n {
            m.a[j][j] = Complex64::new(crate::reduce::mean(&self.diag[j]), 0.0);
        }
        for (p, &(j, k)) in pairs(self.n).iter().enumerate() {
            let re: Vec<f64> = self.off[p].iter().map(|z| z.re).collect();
            let im: Vec<f64> = self.off[p].iter().map(|z| z.im).collect();
            let z = Complex64::new(crate::reduce::sum(&re), crate::reduce::sum(&im)) / len;
            m.a[j][k] = z;
            m.a[k][j] = z.conj();
        }
        m
    }

    /// Applies `f` to the matrix at every point, in place.
    pub(crate) fn map_in_place<F>(&mut self, f: F)
    where
        F: Fn(usize, &SmallHerm) -> SmallHerm + Sync,
    {
        let n = self.n;
        let len = self.len();
        let pr = pairs(n);
        // Process in blocks so each block is read and written by one task.
        const BLOCK: usize = 4096;
        let mut diag_chunks: Vec<_> = self.diag.iter_mut().map(|d| d.chunks_mut(BLOCK)).collect();
        let mut off_chunks: Vec<_> = self.off.iter_mut().map(|d| d.chunks_mut(BLOCK)).collect();
        let mut blocks = Vec::with_capacity(len.div_ceil(BLOCK));
        for b in 0..len.div_ceil(BLOCK) {
            let ds: Vec<&mut [f64]> = diag_chunks.iter_mut().map(|it| it.next().unwrap()).collect();
            let os: Vec<&mut [Complex64]> =
                off_chunks.iter_mut().map(|it| it.next().unwrap()).collect();
            blocks.push((b * BLOCK, ds, os));
        }
        blocks.into_par_iter().for_each(|(start, mut ds, mut os)| {
            for i in 0..ds[0].len() {
                let mut m = SmallHerm::zero(n);
                for j in 0..n {
                    m.a[j][j] = Complex64::new(ds[j][i], 0.0);
                }
                for (p, &(j, k)) in pr.iter().enumerate() {
                    m.a[j][k] = os[p][i];
                    m.a[k][j] = os[p][i].conj();
                }
                let r = f(start + i, &m);
                for j in 0..n {
                    ds[j][i] = r.a[j][j].re;
                }
                for (p, &(j, k)) in pr.iter().enumerate() {
                    os[p][i] = r.a[j][k];
                }
            }
        });
    }
}

/// Scratch buffers for spectral operations.
pub(crate) struct Workspace {
    spec: Vec<Complex64>,
    work: Vec<Complex64>,
    freq: Vec<f64>,
    dfreq: Vec<f64>,
}

impl Workspace {
    pub(crate) fn new(grid: &TorusGrid) -> Self {
        let n = grid.size();
        Self {
            spec: vec![Complex64::default(); grid.len()],
            work: vec![Complex64::default(); grid.len()],
            freq: (0..n).map(|i| grid.frequency(i)).collect(),
            dfreq: (0..n).map(|i| grid.derivative_frequency(i)).collect(),
        }
    }
}

/// Fourier symbol of `∂_j ∂̄_k` (so that `φ_{jk̄} = IFFT(symbol · φ̂)`).
#[inline]
fn symbol(n: usize, j: usize, k: usize, bins: &[usize], freq: &[f64], dfreq: &[f64]) -> Complex64 {
    if j == k {
        let (a, b) = (freq[bins[j]], freq[bins[n + j]]);
        Complex64::new(-PI2 * (a * a + b * b), 0.0)
    } else {
        let (xj, yj) = (dfreq[bins[j]], dfreq[bins[n + j]]);
        let (xk, yk) = (dfreq[bins[k]], dfreq[bins[n + k]]);
        Complex64::new(-PI2 * (xj * xk + yj * yk), -PI2 * (xj * yk - yj * xk))
    }
}

#[inline]
fn bins_of(grid: &TorusGrid, idx: usize) -> [usize; 6] {
    let mut b = [0usize; 6];
    grid.bins(idx, &mut b[..grid.axes()]);
    b
}

fn forward_real(grid: &TorusGrid, v: &[f64], out: &mut [Complex64]) {
    out.par_iter_mut()
        .zip(v.par_iter())
        .for_each(|(o, &x)| *o = Complex64::new(x, 0.0));
    grid.fft_forward(out);
}

/// Fills `ws.work` with `IFFT(symbol_{jk} · ws.spec)`.
fn derivative_pair(grid: &TorusGrid, ws: &mut Workspace, j: usize, k: usize) {
    let n = grid.n();
    let (spec, freq, dfreq) = (&ws.spec, &ws.freq, &ws.dfreq);
    ws.work.par_iter_mut().enumerate().for_each(|(idx, w)| {
        let b = bins_of(grid, idx);
        *w = spec[idx] * symbol(n, j, k, &b, freq, dfreq);
    });
    grid.fft_inverse(&mut ws.work);
}

/// Complex Hessian `φ_{jk̄}` of a real field.
pub fn complex_hessian(grid: &TorusGrid, phi: &[f64]) -> Result<HessianField, SolverError> {
    if phi.len() != grid.len() {
        return Err(SolverError::DimensionMismatch {
            expected: grid.len(),
            found: phi.len(),
        });
    }
    let mut ws = Workspace::new(grid);
    let mut out = HessianField::zeros(grid.n(), grid.len());
    complex_hessian_into(grid, phi, &mut ws, &mut out);
    Ok(out)
}

pub(crate) fn complex_hessian_into(
    grid: &TorusGrid,
    phi: &[f64],
    ws: &mut Workspace,
    out: &mut HessianField,
) {
    forward_real(grid, phi, &mut ws.spec);
    for j in 0..grid.n() {
        derivative_pair(grid, ws, j, j);
        out.diag[j]
            .par_iter_mut()
            .zip(ws.work.par_iter())
            .for_each(|(o, z)| *o = z.re);
    }
    for (p, (j, k)) in pairs(grid.n()).into_iter().enumerate() {
        derivative_pair(grid, ws, j, k);
        out.off[p].par_iter_mut().zip(ws.work.par_iter()).for_each(|(o, z)| *o = *z);
    }
}

/// Replaces a Hessian field `H` by the linearization `M = ∂R/∂A` at
/// `A = Ω + H` for coefficients `g`.
pub(crate) fn linearize_in_place(field: &mut HessianField, bg: &Background, g: &GammaCoefficients) {
    let n = field.n();
    let omega = *bg.form();
    field.map_in_place(|idx, h| {
        let mut gamma = [0.0; 3];
        g.values_at(idx, &mut gamma[..n]);
        omega.add(h).linearization(&gamma[..n])
    });
}

/// `L[v] = tr(M · ∂∂̄v)` for a linearization field `m`.
pub fn apply_linearization(
    grid: &TorusGrid,
    m: &HessianField,
    v: &[f64],
) -> Result<Vec<f64>, SolverError> {
    if v.len() != grid.len() || m.len() != grid.len() {
        return Err(SolverError::DimensionMismatch {
            expected: grid.len(),
            found: v.len(),
        });
    }
    let mut ws = Workspace::new(grid);
    let mut out = vec![0.0; grid.len()];
    apply_linearization_into(grid, m, v, &mut ws, &mut out);
    Ok(out)
}

pub(crate) fn apply_linearization_into(
    grid: &TorusGrid,
    m: &HessianField,
    v: &[f64],
    ws: &mut Workspace,
    out: &mut [f64],
) {
    forward_real(grid, v, &mut ws.spec);
    out.par_iter_mut().for_each(|o| *o = 0.0);
    for j in 0..grid.n() {
        derivative_pair(grid, ws, j, j);
        out.par_iter_mut()
            .zip(ws.work.par_iter().zip(m.diag[j].par_iter()))
            .for_each(|(o, (h, mjj))| *o += mjj * h.re);
    }
    for (p, (j, k)) in pairs(grid.n()).into_iter().enumerate() {
        derivative_pair(grid, ws, j, k);
        out.par_iter_mut()
            .zip(ws.work.par_iter().zip(m.off[p].par_iter()))
            .for_each(|(o, (h, mjk))| *o += 2.0 * (mjk.conj() * h).re);
    }
}

/// Constant-coefficient inverse of `v ↦ tr(M̄ ∂∂̄v)` on mean-zero fields.
pub(crate) struct Preconditioner {
    mbar: SmallHerm,
}

impl Preconditioner {
    pub(crate) fn new(m: &HessianField) -> Self {
        Self { mbar: m.mean() }
    }

    pub(crate) fn apply(&self, grid: &TorusGrid, v: &[f64], ws: &mut Workspace, out: &mut [f64]) {
        let n = grid.n();
        forward_real(grid, v, &mut ws.spec);
        let (freq, dfreq, mbar) = (&ws.freq, &ws.dfreq, &self.mbar);
        ws.spec.par_iter_mut().enumerate().for_each(|(idx, z)| {
            let b = bins_of(grid, idx);
            let mut s = 0.0;
            for j in 0..n {
                s += mbar.a[j][j].re * symbol(n, j, j, &b, freq, dfreq).re;
                for k in j + 1..n {
                    s += 2.0 * (mbar.a[j][k].conj() * symbol(n, j, k, &b, freq, dfreq)).re;
                }
            }
            *z = if s.abs() > 1e-300 { *z / s } else { Complex64::default() };
        });
        grid.fft_inverse(&mut ws.spec);
        out.par_iter_mut()
            .zip(ws.spec.par_iter())
            .for_each(|(o, z)| *o = z.re);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau() -> f64 {
        2.0 * PI
    }

    #[test]
    fn zero_field() {
        let g = TorusGrid::new(2, 8).unwrap();
        let h = complex_hessian(&g, &vec![0.0; g.len()]).unwrap();
        for idx in 0..g.len() {
            assert_eq!(h.at(idx), SmallHerm::zero(2));
        }
    }

    #[test]
    fn single_cosine() {
        let g = TorusGrid::new(2, 8).unwrap();
        let phi = g.sample(|x| (tau() * x[0]).cos());
        let h = complex_hessian(&g, &phi).unwrap();
        for idx in 0..g.len() {
            let x = g.coords(idx);
            assert!((h.diag(0)[idx] + PI2 * (tau() * x[0]).cos()).abs() < 1e-12);
            assert!(h.diag(1)[idx].abs() < 1e-12);
            assert!(h.off(0, 1)[idx].norm() < 1e-12);
        }
    }

    #[test]
    fn product_mode() {
        let g = TorusGrid::new(1, 8).unwrap();
        let phi = g.sample(|x| (tau() * x[0]).cos() * (tau() * x[1]).cos());
        let h = complex_hessian(&g, &phi).unwrap();
        for idx in 0..g.len() {
            let x = g.coords(idx);
            let expect = -2.0 * PI2 * (tau() * x[0]).cos() * (tau() * x[1]).cos();
            assert!((h.diag(0)[idx] - expect).abs() < 1e-11);
        }
    }

    #[test]
    fn mixed_entry_matches_formula() {
        // φ = sin(2π(x_1 + y_2)): φ_{12̄} = (1/4)(∂x1∂x2 + ∂y1∂y2 + i(∂x1∂y2 − ∂y1∂x2))φ
        //                               = (i/4)·(−4π²)·sin(...)
        let g = TorusGrid::new(2, 8).unwrap();
        let phi = g.sample(|x| (tau() * (x[0] + x[3])).sin());
        let h = complex_hessian(&g, &phi).unwrap();
        for idx in 0..g.len() {
            let x = g.coords(idx);
            let s = (tau() * (x[0] + x[3])).sin();
            let z = h.entry(idx, 0, 1);
            assert!(z.re.abs() < 1e-11 && (z.im + PI2 * s).abs() < 1e-11);
            let w = h.entry(idx, 1, 0);
            assert_eq!(w, z.conj());
        }
    }

    #[test]
    fn linearization_of_identity_is_quarter_laplacian() {
        let g = TorusGrid::new(2, 8).unwrap();
        let mut m = HessianField::zeros(2, g.len());
        for j in 0..2 {
            m.diag[j].iter_mut().for_each(|x| *x = 1.0);
        }
        let v = g.sample(|x| (tau() * (x[1] + 2.0 * x[2])).cos());
        let lv = apply_linearization(&g, &m, &v).unwrap();
        for (a, b) in lv.iter().zip(&v) {
            assert!((a + PI2 * 5.0 * b).abs() < 1e-10);
        }
        let pre = Preconditioner::new(&m);
        let mut ws = Workspace::new(&g);
        let mut back = vec![0.0; g.len()];
        pre.apply(&g, &lv, &mut ws, &mut back);
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
