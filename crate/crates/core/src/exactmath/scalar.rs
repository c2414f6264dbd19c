use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered field scalar the bound calculus is written against.
///
/// Exact types (`BigRational`, `Ratio<i64>`) give sound certificates. The
/// float impls exist for quick numeric previews only.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + FromStr
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    /// True if the value is an integer.
    fn is_integral(&self) -> bool;

    /// Smallest integer `>= self`, as a scalar.
    fn ceil_value(&self) -> Self;

    /// Lossy conversion used for display columns.
    fn approx_f64(&self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every scalar type represents small integers")
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("every scalar type represents small integers")
    }
}

impl Scalar for BigRational {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn ceil_value(&self) -> Self {
        self.ceil()
    }

    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_scalar_small_ratio {
    ($($t:ty),*) => {
        $(
            impl Scalar for Ratio<$t> {
                fn is_integral(&self) -> bool {
                    self.is_integer()
                }

                fn ceil_value(&self) -> Self {
                    self.ceil()
                }

                fn approx_f64(&self) -> f64 {
                    *self.numer() as f64 / *self.denom() as f64
                }
            }
        )*
    };
}

impl_scalar_small_ratio!(i64, i128);

macro_rules! impl_scalar_float {
    ($($t:ty),*) => {
        $(
            impl Scalar for $t {
                fn is_integral(&self) -> bool {
                    self.fract() == 0.0
                }

                fn ceil_value(&self) -> Self {
                    self.ceil()
                }

                fn approx_f64(&self) -> f64 {
                    *self as f64
                }
            }
        )*
    };
}

impl_scalar_float!(f32, f64);

/// Ceiling of a nonnegative rational as a machine integer.
pub fn ceil_to_u64(r: &BigRational) -> Option<u64> {
    if r.is_negative() {
        return None;
    }
    r.ceil().to_integer().to_u64()
}

/// Fixed-point decimal rendering with `digits` fractional digits, rounded
/// half away from zero. Never used for machine output.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * BigRational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let (whole, frac) = rounded.abs().div_rem(&scale);
    let mut frac_str = frac.to_string();
    while frac_str.len() < digits as usize {
        frac_str.insert(0, '0');
    }
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac_str}")
    }
}
