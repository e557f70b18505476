use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

/// Field element for the dense kernels. Implemented for `f64` and
/// `Complex64` so real inputs run the cheaper real arithmetic.
pub(crate) trait Scalar:
    Copy
    + Send
    + Sync
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    fn zero() -> Self;
    fn from_f64(x: f64) -> Self;
    fn conj(self) -> Self;
    fn abs_sq(self) -> f64;
    fn re(self) -> f64;
    fn scale(self, s: f64) -> Self;
    /// |re| + |im|, the cheap norm used by balancing and deflation tests.
    fn abs1(self) -> f64;

    fn abs(self) -> f64 {
        self.abs_sq().sqrt()
    }

    /// `self / |self|`, or one for zero.
    fn phase(self) -> Self {
        let a = self.abs();
        if a == 0.0 {
            Self::from_f64(1.0)
        } else {
            self.scale(1.0 / a)
        }
    }
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn abs_sq(self) -> f64 {
        self * self
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn abs1(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn abs_sq(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn abs1(self) -> f64 {
        self.re.abs() + self.im.abs()
    }
    #[inline]
    fn abs(self) -> f64 {
        self.norm()
    }
}

/// Row-dot `Σ conj(a_i) b_i`.
#[inline]
pub(crate) fn dotc<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

/// `y += alpha · x`.
#[inline]
pub(crate) fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub(crate) fn norm2<T: Scalar>(x: &[T]) -> f64 {
    // Scaled accumulation to stay clear of overflow for huge entries.
    let scale = x.iter().map(|v| v.abs1()).fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    if scale < f64::MIN_POSITIVE {
        // 1/scale would overflow for subnormal inputs.
        let s = T::from_f64(scale);
        return x.iter().map(|&v| (v / s).abs_sq()).sum::<f64>().sqrt() * scale;
    }
    let inv = 1.0 / scale;
    x.iter().map(|v| v.scale(inv).abs_sq()).sum::<f64>().sqrt() * scale
}
