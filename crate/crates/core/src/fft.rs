//! Axis-by-axis complex FFTs over the `(t, x1, x2, x3)` sample layout.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

type Plan = Arc<dyn Fft<f64>>;

fn plan(n: usize, direction: FftDirection) -> Plan {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<(usize, bool), Plan>)>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    let (planner, plans) = &mut *guard;
    let key = (n, direction == FftDirection::Forward);
    plans.entry(key).or_insert_with(|| planner.plan_fft(n, direction)).clone()
}

// Lines gathered per scratch batch when transforming a strided axis.
const BATCH: usize = 64;

fn transform_axis(data: &mut [Complex64], dims: [usize; 4], axis: usize, direction: FftDirection) {
    let n = dims[axis];
    let stride: usize = dims[axis + 1..].iter().product();
    let fft = plan(n, direction);

    if stride == 1 {
        data.par_chunks_mut(n * BATCH).for_each(|chunk| {
            let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(chunk, &mut scratch);
        });
        return;
    }

    let block = n * stride;
    let run_block = |blk: &mut [Complex64]| {
        let mut lines = vec![Complex64::default(); n * BATCH];
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        let mut col = 0;
        while col < stride {
            let width = BATCH.min(stride - col);
            for c in 0..width {
                for j in 0..n {
                    lines[c * n + j] = blk[j * stride + col + c];
                }
            }
            fft.process_with_scratch(&mut lines[..width * n], &mut scratch);
            for c in 0..width {
                for j in 0..n {
                    blk[j * stride + col + c] = lines[c * n + j];
                }
            }
            col += width;
        }
    };

    if data.len() > block {
        data.par_chunks_mut(block).for_each(run_block);
    } else {
        // Single block (outermost axis): split the columns across threads instead.
        let columns: Vec<usize> = (0..stride).step_by(BATCH).collect();
        let ptr = SharedMut(data.as_mut_ptr());
        columns.par_iter().for_each(|&col| {
            let ptr = &ptr;
            let width = BATCH.min(stride - col);
            let mut lines = vec![Complex64::default(); n * width];
            let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
            for c in 0..width {
                for j in 0..n {
                    // SAFETY: each task touches only columns col..col+width, disjoint across tasks.
                    lines[c * n + j] = unsafe { *ptr.0.add(j * stride + col + c) };
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            for c in 0..width {
                for j in 0..n {
                    unsafe { *ptr.0.add(j * stride + col + c) = lines[c * n + j] };
                }
            }
        });
    }
}

struct SharedMut(*mut Complex64);
unsafe impl Send for SharedMut {}
unsafe impl Sync for SharedMut {}

/// Unnormalized forward transform, `sum x_j e^{-2 pi i jk/n}` along every axis.
pub fn forward(data: &mut [Complex64], dims: [usize; 4]) {
    debug_assert_eq!(data.len(), dims.iter().product::<usize>());
    for axis in 0..4 {
        transform_axis(data, dims, axis, FftDirection::Forward);
    }
}

/// Unnormalized inverse transform, `sum c_k e^{+2 pi i jk/n}` along every axis.
pub fn inverse(data: &mut [Complex64], dims: [usize; 4]) {
    debug_assert_eq!(data.len(), dims.iter().product::<usize>());
    for axis in 0..4 {
        transform_axis(data, dims, axis, FftDirection::Inverse);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn naive_dft(data: &[Complex64], dims: [usize; 4]) -> Vec<Complex64> {
        let len = data.len();
        let unravel = |mut i: usize| {
            let mut out = [0usize; 4];
            for a in (0..4).rev() {
                out[a] = i % dims[a];
                i /= dims[a];
            }
            out
        };
        (0..len)
            .map(|k| {
                let kk = unravel(k);
                let mut acc = Complex64::default();
                for (j, x) in data.iter().enumerate() {
                    let jj = unravel(j);
                    let phase: f64 = (0..4)
                        .map(|a| (kk[a] * jj[a]) as f64 / dims[a] as f64)
                        .sum();
                    acc += x * Complex64::from_polar(1.0, -2.0 * PI * phase);
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_direct_summation_on_uneven_dims() {
        let dims = [4, 6, 4, 2];
        let data: Vec<Complex64> = (0..dims.iter().product::<usize>())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let expect = naive_dft(&data, dims);
        let mut got = data.clone();
        forward(&mut got, dims);
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-11);
        }
        inverse(&mut got, dims);
        let scale = data.len() as f64;
        for (a, b) in got.iter().zip(&data) {
            assert!((a / scale - b).norm() < 1e-13);
        }
    }

    #[test]
    fn wide_outer_axis_uses_column_split() {
        // stride 8*8*8 = 512 > BATCH exercises multiple column batches on the time axis
        let dims = [4, 8, 8, 8];
        let len: usize = dims.iter().product();
        let data: Vec<Complex64> =
            (0..len).map(|i| Complex64::new(((i * 7919) % 101) as f64, 0.0)).collect();
        let mut got = data.clone();
        forward(&mut got, dims);
        inverse(&mut got, dims);
        for (a, b) in got.iter().zip(&data) {
            assert!((a / len as f64 - b).norm() < 1e-10);
        }
    }
}
