//! Thin wrappers around `rustfft` for row-major 2D data.
//!
//! All transforms here are unnormalized; callers own the scaling.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// In-place 1D transform (forward: e^{−2πikn/N}).
pub(crate) fn fft1(data: &mut [Complex64], inverse: bool) {
    let f = plan(data.len(), inverse);
    f.process(data);
}

/// Transforms every contiguous row of length `ncols`.
pub(crate) fn fft_rows(data: &mut [Complex64], ncols: usize, inverse: bool) {
    let f = plan(ncols, inverse);
    let mut scratch = vec![Complex64::default(); f.get_inplace_scratch_len()];
    f.process_with_scratch(data, &mut scratch);
}

/// Transforms every strided column of an `nrows × ncols` row-major array.
pub(crate) fn fft_cols(data: &mut [Complex64], nrows: usize, ncols: usize, inverse: bool) {
    let f = plan(nrows, inverse);
    let mut scratch = vec![Complex64::default(); f.get_inplace_scratch_len()];
    let mut col = vec![Complex64::default(); nrows];
    for j in 0..ncols {
        for i in 0..nrows {
            col[i] = data[i * ncols + j];
        }
        f.process_with_scratch(&mut col, &mut scratch);
        for i in 0..nrows {
            data[i * ncols + j] = col[i];
        }
    }
}

/// Full 2D transform of an `nx × ny` array stored x-major (index i·ny + j).
pub(crate) fn fft2(data: &mut [Complex64], nx: usize, ny: usize, inverse: bool) {
    fft_rows(data, ny, inverse);
    fft_cols(data, nx, ny, inverse);
}

/// Signed angular wavenumbers 2πk/(n·h) in standard DFT order.
pub(crate) fn wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let scale = 2.0 * std::f64::consts::PI / (n as f64 * h);
    (0..n)
        .map(|k| {
            let ks = if k < n / 2 { k as isize } else { k as isize - n as isize };
            ks as f64 * scale
        })
        .collect()
}
