//! Two-dimensional FFTs on square row-major buffers.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Columns gathered per pass when transforming along the second axis.
const COLUMN_BLOCK: usize = 16;

/// In-place unnormalised 2D DFT of an `n × n` row-major buffer.
///
/// The forward transform uses `exp(-2πi jk/n)`; the inverse uses the
/// conjugate kernel and is not divided by `n²`. Columns are processed in
/// small gathered blocks so no full-size scratch buffer is needed.
pub fn fft2_inplace(data: &mut [Complex64], n: usize, inverse: bool) {
    assert_eq!(data.len(), n * n, "buffer is not n x n");
    let mut planner = FftPlanner::<f64>::new();
    let fft: Arc<dyn Fft<f64>> = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    let mut block = vec![Complex64::default(); COLUMN_BLOCK * n];
    let mut c0 = 0;
    while c0 < n {
        let w = COLUMN_BLOCK.min(n - c0);
        for r in 0..n {
            let src = &data[r * n + c0..r * n + c0 + w];
            for (c, v) in src.iter().enumerate() {
                block[c * n + r] = *v;
            }
        }
        for col in block[..w * n].chunks_exact_mut(n) {
            fft.process_with_scratch(col, &mut scratch);
        }
        for r in 0..n {
            let dst = &mut data[r * n + c0..r * n + c0 + w];
            for (c, v) in dst.iter_mut().enumerate() {
                *v = block[c * n + r];
            }
        }
        c0 += w;
    }
}

/// Signed frequency index of DFT bin `k` on an `n`-point grid.
pub fn signed_index(k: usize, n: usize) -> i64 {
    if k < n.div_ceil(2) {
        k as i64
    } else {
        k as i64 - n as i64
    }
}
