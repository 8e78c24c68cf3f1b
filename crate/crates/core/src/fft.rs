//! Power-of-two complex FFTs.
//!
//! With the `std` feature transforms go through `rustfft`; without it an
//! in-place iterative radix-2 transform is used.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[cfg(feature = "std")]
pub(crate) use self::rustfft_backend::FftPlan;
#[cfg(not(feature = "std"))]
pub(crate) use self::Radix2Plan as FftPlan;

#[cfg(feature = "std")]
mod rustfft_backend {
    extern crate std;

    use alloc::sync::Arc;
    use alloc::vec;
    use alloc::vec::Vec;
    use core::cell::RefCell;

    use num_complex::Complex64;
    use rustfft::{Fft, FftPlanner};

    std::thread_local! {
        static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    }

    pub(crate) struct FftPlan {
        len: usize,
        forward: Arc<dyn Fft<f64>>,
        inverse: Arc<dyn Fft<f64>>,
        scratch: RefCell<Vec<Complex64>>,
    }

    impl FftPlan {
        pub(crate) fn new(len: usize) -> Self {
            assert!(len.is_power_of_two());
            let (forward, inverse) = PLANNER.with(|p| {
                let mut p = p.borrow_mut();
                (p.plan_fft_forward(len), p.plan_fft_inverse(len))
            });
            let scratch_len = forward
                .get_inplace_scratch_len()
                .max(inverse.get_inplace_scratch_len());
            Self {
                len,
                forward,
                inverse,
                scratch: RefCell::new(vec![Complex64::new(0.0, 0.0); scratch_len]),
            }
        }

        pub(crate) fn len(&self) -> usize {
            self.len
        }

        pub(crate) fn forward(&self, data: &mut [Complex64]) {
            self.forward.process_with_scratch(data, &mut self.scratch.borrow_mut());
        }

        /// Unscaled inverse; callers divide by `len`.
        pub(crate) fn inverse(&self, data: &mut [Complex64]) {
            self.inverse.process_with_scratch(data, &mut self.scratch.borrow_mut());
        }
    }
}

/// Twiddle table for one power-of-two length. Built per call site and never
/// shared between threads.
#[cfg_attr(feature = "std", allow(dead_code))]
pub(crate) struct Radix2Plan {
    len: usize,
    twiddles: Vec<Complex64>,
}

#[cfg_attr(feature = "std", allow(dead_code))]
impl Radix2Plan {
    pub(crate) fn new(len: usize) -> Self {
        assert!(len.is_power_of_two());
        let half = len / 2;
        let twiddles = (0..half)
            .map(|j| {
                let angle = -2.0 * PI * j as f64 / len as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        Self { len, twiddles }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    /// Unscaled inverse; callers divide by `len`.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.len;
        assert_eq!(data.len(), n);
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for chunk in data.chunks_exact_mut(size) {
                let (lo, hi) = chunk.split_at_mut(half);
                for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let mut w = self.twiddles[j * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            size *= 2;
        }
    }
}
