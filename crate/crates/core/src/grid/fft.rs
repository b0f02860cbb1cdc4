//! Unnormalized multi-dimensional complex FFT over a row-major array.

use rustfft::{FftDirection, FftPlanner};

use crate::scalar::{Cplx, Real};

/// In-place transform along every axis of a row-major array of the given shape.
/// The last axis is contiguous. No normalization is applied.
pub(crate) fn fft_nd<T: Real>(data: &mut [Cplx<T>], shape: &[usize], direction: FftDirection) {
    debug_assert_eq!(data.len(), shape.iter().product::<usize>());
    let mut planner = FftPlanner::<T>::new();
    let ndim = shape.len();
    for axis in 0..ndim {
        let len = shape[axis];
        if len <= 1 {
            continue;
        }
        let fft = planner.plan_fft(len, direction);
        let stride: usize = shape[axis + 1..].iter().product();
        if stride == 1 {
            fft.process(data);
            continue;
        }
        let outer: usize = shape[..axis].iter().product();
        let block = len * stride;
        // Gather each block into lane-major order, transform all lanes, scatter back.
        let mut buf = vec![Cplx::new(T::zero(), T::zero()); block];
        for o in 0..outer {
            let chunk = &mut data[o * block..(o + 1) * block];
            for k in 0..len {
                for s in 0..stride {
                    buf[s * len + k] = chunk[k * stride + s];
                }
            }
            fft.process(&mut buf);
            for k in 0..len {
                for s in 0..stride {
                    chunk[k * stride + s] = buf[s * len + k];
                }
            }
        }
    }
}
