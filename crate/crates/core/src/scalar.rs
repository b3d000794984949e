//! Real scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type the crate can compute with (`f32` or `f64`).
///
/// Tolerances throughout the crate are written for `f64`. `tol` lifts them to
/// something the scalar type can actually resolve: `f64` keeps the requested
/// value, `f32` floors it at `TOL_FLOOR`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Smallest tolerance meaningful for this type.
    const TOL_FLOOR: f64;

    /// Converts an `f64` constant.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    /// Tolerance `t`, floored to what the type can resolve.
    #[inline]
    fn tol(t: f64) -> Self {
        Self::c(t.max(Self::TOL_FLOOR))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    #[inline]
    fn count(n: usize) -> Self {
        Self::c(n as f64)
    }
}

impl Real for f64 {
    const TOL_FLOOR: f64 = 0.0;
}

impl Real for f32 {
    const TOL_FLOOR: f64 = 1e-4;
}

/// Complex amplitude over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn cz<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> Cplx<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: Cplx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
