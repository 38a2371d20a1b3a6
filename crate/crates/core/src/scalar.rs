//! Scalar abstraction shared by every numerical module.
//!
//! All algorithms are written against [`Real`], which is implemented for
//! `f32` and `f64`. The FFT backend is reached through [`Real::fft`] so that
//! `rustfft`'s `Signed` bound does not leak into generic code (it would make
//! `abs`/`signum` ambiguous next to `num_traits::Float`).

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::{Debug, Display, LowerExp};
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::{Fft, FftPlanner};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Transform direction for [`Real::fft`]. Neither direction is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FftDirection {
    /// Kernel `e^{-2πi jk/N}`.
    Forward,
    /// Kernel `e^{+2πi jk/N}`.
    Inverse,
}

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Unnormalised in-place complex FFT of length `buf.len()`.
    fn fft(buf: &mut [Complex<Self>], direction: FftDirection);

    /// Converts an `f64` literal. Panics only if the value is not
    /// representable, which cannot happen for `f32`/`f64`.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64` for reporting and the eigensolver.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite conversion to f64")
    }
}

type PlanCache<T> = RefCell<HashMap<(usize, FftDirection), Arc<dyn Fft<T>>>>;

thread_local! {
    static PLANS_F64: PlanCache<f64> = RefCell::new(HashMap::new());
    static PLANS_F32: PlanCache<f32> = RefCell::new(HashMap::new());
}

fn plan_cached<T: rustfft::FftNum>(
    cache: &PlanCache<T>,
    len: usize,
    direction: FftDirection,
) -> Arc<dyn Fft<T>> {
    cache
        .borrow_mut()
        .entry((len, direction))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            match direction {
                FftDirection::Forward => planner.plan_fft_forward(len),
                FftDirection::Inverse => planner.plan_fft_inverse(len),
            }
        })
        .clone()
}

impl Real for f64 {
    fn fft(buf: &mut [Complex<f64>], direction: FftDirection) {
        if buf.len() <= 1 {
            return;
        }
        let plan = PLANS_F64.with(|c| plan_cached(c, buf.len(), direction));
        plan.process(buf);
    }
}

impl Real for f32 {
    fn fft(buf: &mut [Complex<f32>], direction: FftDirection) {
        if buf.len() <= 1 {
            return;
        }
        let plan = PLANS_F32.with(|c| plan_cached(c, buf.len(), direction));
        plan.process(buf);
    }
}
