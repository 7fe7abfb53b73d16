use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::SolverError;

/// Default cap on the bytes of one real field times [`FIELDS_PER_POINT`].
pub const DEFAULT_MEMORY_BUDGET: usize = 4 << 30;
/// Rough number of f64-sized values the solver keeps per grid point.
pub const FIELDS_PER_POINT: usize = 24;

/// Uniform periodic grid on the 2n-torus `[0,1)^{2n}`.
///
/// Axes are ordered `x_1..x_n, y_1..y_n` with `z_j = x_j + i y_j`; storage is
/// row-major with the last axis fastest.
#[derive(Clone)]
pub struct TorusGrid {
    n: usize,
    size: usize,
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorusGrid")
            .field("n", &self.n)
            .field("size", &self.size)
            .finish()
    }
}

impl TorusGrid {
    pub fn new(n: usize, size: usize) -> Result<Self, SolverError> {
        Self::with_budget(n, size, DEFAULT_MEMORY_BUDGET)
    }

    pub fn with_budget(n: usize, size: usize, budget: usize) -> Result<Self, SolverError> {
        if !(1..=3).contains(&n) {
            return Err(SolverError::UnsupportedDimension { n });
        }
        if size < 4 || !size.is_power_of_two() {
            return Err(SolverError::GridSize { size });
        }
        let len = size
            .checked_pow(2 * n as u32)
            .ok_or(SolverError::MemoryBudget {
                required: usize::MAX,
                budget,
            })?;
        let required = len.saturating_mul(8 * FIELDS_PER_POINT);
        if required > budget {
            return Err(SolverError::MemoryBudget { required, budget });
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            size,
            len,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        })
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Points per real axis.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn axes(&self) -> usize {
        2 * self.n
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.size; self.axes()]
    }

    fn stride(&self, axis: usize) -> usize {
        self.size.pow((self.axes() - 1 - axis) as u32)
    }

    /// Integer index along `axis` of the flat index `idx`.
    #[inline]
    pub fn axis_index(&self, idx: usize, axis: usize) -> usize {
        (idx / self.stride(axis)) % self.size
    }

    /// Coordinates `(x_1..x_n, y_1..y_n)` in `[0,1)` of grid point `idx`.
    pub fn coords(&self, idx: usize) -> Vec<f64> {
        (0..self.axes())
            .map(|a| self.axis_index(idx, a) as f64 / self.size as f64)
            .collect()
    }

    /// Signed frequency of FFT bin `i`; the Nyquist bin maps to `-N/2`.
    #[inline]
    pub fn frequency(&self, i: usize) -> f64 {
        if i < self.size / 2 {
            i as f64
        } else {
            i as f64 - self.size as f64
        }
    }

    /// Frequency used for first derivatives: as [`Self::frequency`] but zero
    /// at the Nyquist bin, so odd derivatives of real fields stay real.
    #[inline]
    pub fn derivative_frequency(&self, i: usize) -> f64 {
        if i == self.size / 2 {
            0.0
        } else {
            self.frequency(i)
        }
    }

    /// Bin indices along every axis for flat index `idx`.
    #[inline]
    pub fn bins(&self, mut idx: usize, out: &mut [usize]) {
        for a in (0..self.axes()).rev() {
            out[a] = idx % self.size;
            idx /= self.size;
        }
    }

    pub fn fft_forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.forward);
    }

    /// Inverse transform including the `1/len` normalization.
    pub fn fft_inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.inverse);
        let scale = 1.0 / self.len as f64;
        buf.par_iter_mut().for_each(|z| *z *= scale);
    }

    fn transform(&self, buf: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        assert_eq!(buf.len(), self.len);
        let n = self.size;
        for axis in 0..self.axes() {
            let stride = self.stride(axis);
            if stride == 1 {
                buf.par_chunks_mut(n * 64).for_each(|chunk| {
                    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
                    fft.process_with_scratch(chunk, &mut scratch);
                });
                continue;
            }
            // View as [outer, n, stride]; lines run along the middle index.
            let block = n * stride;
            let width = stride.min(256);
            buf.par_chunks_mut(block).for_each(|blk| {
                let mut lines = vec![Complex64::default(); n * width];
                let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
                let mut col = 0;
                while col < stride {
                    let w = width.min(stride - col);
                    for c in 0..w {
                        for r in 0..n {
                            lines[c * n + r] = blk[r * stride + col + c];
                        }
                    }
                    fft.process_with_scratch(&mut lines[..w * n], &mut scratch);
                    for c in 0..w {
                        for r in 0..n {
                            blk[r * stride + col + c] = lines[c * n + r];
                        }
                    }
                    col += w;
                }
            });
        }
    }

    /// Samples `f` at every grid point.
    pub fn sample<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        (0..self.len)
            .into_par_iter()
            .map(|idx| f(&self.coords(idx)))
            .collect()
    }
}
