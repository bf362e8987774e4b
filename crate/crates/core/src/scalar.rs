//! Scalar abstraction shared by every numerical kernel.

use std::fmt::{Debug, Display, LowerExp};

use faer::traits::RealField;
use num_complex::Complex;
use num_traits::{Float, FloatConst, NumCast, ToPrimitive};

/// Real floating-point type the library is generic over (`f32` or `f64`).
///
/// Operators are complex matrices over `Complex<T>`; all tolerances are
/// configured in `f64` and converted with [`Real::of`].
pub trait Real:
    RealField
    + crate::operators::linalg::Field
    + Float
    + FloatConst
    + Copy
    + Send
    + Sync
    + Debug
    + Display
    + LowerExp
    + 'static
{
    fn of(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 constant representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn cf<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::of(re), T::of(im))
}

#[inline]
pub fn imag_unit<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::one())
}

pub fn cast_complex<T: Real, U: Real>(z: C<T>) -> C<U> {
    Complex::new(U::of(z.re.as_f64()), U::of(z.im.as_f64()))
}
