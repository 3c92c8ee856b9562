//! Numeric abstraction shared by every game computation.
//!
//! Payoff algebra only needs field operations and an ordering, so the whole
//! engine is generic over [`Scalar`]. Floating point (`f32`, `f64`) is the
//! everyday choice; [`Exact`] rationals make boundary ties and welfare
//! differences exact when the inputs are short decimals.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, Num, Signed, ToPrimitive, Zero};

/// Exact rational arithmetic over 128-bit integers.
pub type Exact = Ratio<i128>;

/// Largest number of fractional decimal digits accepted when lifting an
/// `f64` into [`Exact`]. Keeps products of several parameters well inside
/// the `i128` range.
const MAX_EXACT_DIGITS: i32 = 9;

pub trait Scalar:
    Copy + PartialOrd + Num + Signed + Debug + Display + Send + Sync + 'static
{
    /// Converts a decimal input value. `None` when the value cannot be
    /// represented (non-finite, or too many digits for exact arithmetic).
    fn from_f64_checked(value: f64) -> Option<Self>;

    fn as_f64(self) -> f64;

    fn from_count(count: usize) -> Self;

    /// `self^exponent` for non-negative bases. `None` when the result is not
    /// representable in this arithmetic.
    fn pow_real(self, exponent: Self) -> Option<Self>;

    fn is_finite_value(self) -> bool;

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn clamp_unit(self) -> Self {
        if self < Self::zero() {
            Self::zero()
        } else if self > Self::one() {
            Self::one()
        } else {
            self
        }
    }
}

/// Scalars that support transcendental functions, required by the ODE
/// integrator and anything that relies on rounding behaviour.
pub trait FloatScalar: Scalar + Float {}

impl FloatScalar for f32 {}
impl FloatScalar for f64 {}

impl Scalar for f64 {
    fn from_f64_checked(value: f64) -> Option<Self> {
        value.is_finite().then_some(value)
    }

    fn as_f64(self) -> f64 {
        self
    }

    fn from_count(count: usize) -> Self {
        count as f64
    }

    fn pow_real(self, exponent: Self) -> Option<Self> {
        Some(self.powf(exponent))
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn from_f64_checked(value: f64) -> Option<Self> {
        let narrowed = value as f32;
        narrowed.is_finite().then_some(narrowed)
    }

    fn as_f64(self) -> f64 {
        f64::from(self)
    }

    fn from_count(count: usize) -> Self {
        count as f32
    }

    fn pow_real(self, exponent: Self) -> Option<Self> {
        Some(self.powf(exponent))
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Exact {
    /// Lifts the shortest decimal representation of `value`, so `0.3`
    /// becomes `3/10` rather than the nearest binary fraction.
    fn from_f64_checked(value: f64) -> Option<Self> {
        if !value.is_finite() {
            return None;
        }
        if value == 0.0 {
            return Some(Exact::zero());
        }
        let text = format!("{value:e}");
        let (mantissa, exponent) = text.split_once('e')?;
        let exponent: i32 = exponent.parse().ok()?;
        let negative = mantissa.starts_with('-');
        let digits_part = mantissa.trim_start_matches('-');
        let (int_part, frac_part) = digits_part.split_once('.').unwrap_or((digits_part, ""));
        let digits: i128 = format!("{int_part}{frac_part}").parse().ok()?;
        let scale = exponent - frac_part.len() as i32;
        if !(-MAX_EXACT_DIGITS..=18).contains(&scale) {
            return None;
        }
        let magnitude = if scale >= 0 {
            Ratio::from_integer(digits.checked_mul(10i128.checked_pow(scale as u32)?)?)
        } else {
            Ratio::new(digits, 10i128.pow((-scale) as u32))
        };
        Some(if negative { -magnitude } else { magnitude })
    }

    fn as_f64(self) -> f64 {
        self.to_f64()
            .unwrap_or_else(|| *self.numer() as f64 / *self.denom() as f64)
    }

    fn from_count(count: usize) -> Self {
        Ratio::from_integer(count as i128)
    }

    /// Only integral exponents stay rational; anything else is refused.
    fn pow_real(self, exponent: Self) -> Option<Self> {
        if !exponent.is_integer() {
            return None;
        }
        let power = exponent.to_integer();
        let power = i32::try_from(power).ok()?;
        if self.is_zero() && power <= 0 {
            return None;
        }
        Some(num_traits::Pow::pow(self, power))
    }

    fn is_finite_value(self) -> bool {
        true
    }
}
