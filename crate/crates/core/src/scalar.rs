use std::fmt::{Debug, Display};

use num_traits::Num;

use crate::rational::Rational;

/// Number types that measures and transport plans can be expressed in.
///
/// `Rational` is exact; the float impls compare with a relative tolerance
/// and never report overflow except for non-finite results.
pub trait Scalar: Num + Copy + PartialOrd + Debug + Display + Send + Sync {
    fn from_ratio(num: i64, den: i64) -> Option<Self>;
    fn try_add(self, rhs: Self) -> Option<Self>;
    fn try_sub(self, rhs: Self) -> Option<Self>;
    fn try_mul(self, rhs: Self) -> Option<Self>;
    fn try_div(self, rhs: Self) -> Option<Self>;
    /// Equality up to the type's natural precision.
    fn approx_eq(self, other: Self) -> bool;
    fn to_f64(self) -> f64;

    fn from_usize(n: usize) -> Option<Self> {
        Self::from_ratio(i64::try_from(n).ok()?, 1)
    }
}

impl Scalar for Rational {
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        Rational::new(num, den).ok()
    }
    fn try_add(self, rhs: Self) -> Option<Self> {
        self.checked_add(rhs).ok()
    }
    fn try_sub(self, rhs: Self) -> Option<Self> {
        self.checked_sub(rhs).ok()
    }
    fn try_mul(self, rhs: Self) -> Option<Self> {
        self.checked_mul(rhs).ok()
    }
    fn try_div(self, rhs: Self) -> Option<Self> {
        self.checked_div(rhs).ok()
    }
    fn approx_eq(self, other: Self) -> bool {
        self == other
    }
    fn to_f64(self) -> f64 {
        Rational::to_f64(self)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_ratio(num: i64, den: i64) -> Option<Self> {
                (den != 0).then(|| num as $t / den as $t)
            }
            fn try_add(self, rhs: Self) -> Option<Self> {
                Some(self + rhs).filter(|v| v.is_finite())
            }
            fn try_sub(self, rhs: Self) -> Option<Self> {
                Some(self - rhs).filter(|v| v.is_finite())
            }
            fn try_mul(self, rhs: Self) -> Option<Self> {
                Some(self * rhs).filter(|v| v.is_finite())
            }
            fn try_div(self, rhs: Self) -> Option<Self> {
                Some(self / rhs).filter(|v| v.is_finite())
            }
            fn approx_eq(self, other: Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= 64.0 * <$t>::EPSILON * scale
            }
            fn to_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);
