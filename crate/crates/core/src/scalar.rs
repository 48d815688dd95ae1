//! Number types used by the drivers and the flow solver.
//!
//! Integer-weighted graphs run with `Ratio<i128>` ratios and `i128`
//! capacities, so saturation tests and ratio comparisons are exact. Real
//! weights fall back to `f64` with a relative saturation tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::float::FloatCore;
use num_traits::{CheckedMul, FromPrimitive, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Relative slack used for float saturation tests.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Arc capacity type of a flow network.
pub trait Capacity:
    Copy + Debug + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Send + Sync
{
    fn zero() -> Self;
    /// Residual amounts at or below this are treated as saturated.
    fn tolerance(cap: Self) -> Self;
    fn to_f64(self) -> f64;
}

impl Capacity for i128 {
    fn zero() -> Self {
        0
    }
    fn tolerance(_: Self) -> Self {
        0
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Capacity for f64 {
    fn zero() -> Self {
        0.0
    }
    fn tolerance(cap: Self) -> Self {
        FLOAT_TOLERANCE * cap.abs()
    }
    fn to_f64(self) -> f64 {
        self
    }
}

/// Ratio arithmetic for the fractional drivers.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    type Cap: Capacity;
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// Exact for integers; rationals are recovered from nearby floats.
    fn from_f64(x: f64) -> Result<Self>;
    fn to_f64(&self) -> f64;
    fn from_ratio(num: i128, den: i128) -> Self;
    /// A multiplier that makes every value integral (`1` for floats).
    fn common_scale(values: &[Self]) -> Result<Self>;
    /// `self * scale` as a capacity.
    fn to_cap(&self, scale: &Self) -> Result<Self::Cap>;
    /// A point strictly inside `(lo, hi)` used by bisection.
    fn bisect(lo: &Self, hi: &Self) -> Self;
    /// Converts an exact rational; used for thresholds computed as ratios.
    fn from_rational(r: Rational) -> Self;
    fn as_rational(&self) -> Option<Rational>;
}

impl Scalar for Rational {
    type Cap = i128;
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_f64(x: f64) -> Result<Self> {
        rational_from_f64(x)
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn from_ratio(num: i128, den: i128) -> Self {
        Ratio::new(num, den)
    }
    fn common_scale(values: &[Self]) -> Result<Self> {
        let mut l: i128 = 1;
        for v in values {
            let d = *v.denom();
            let g = l.gcd(&d);
            l = (l / g).checked_mul(d).ok_or(Error::Overflow)?;
        }
        Ok(Ratio::from_integer(l))
    }
    fn to_cap(&self, scale: &Self) -> Result<i128> {
        let scaled = self.checked_mul(scale).ok_or(Error::Overflow)?;
        if !scaled.is_integer() {
            return Err(Error::InvalidParameter("capacity scale does not clear denominator".into()));
        }
        Ok(scaled.to_integer())
    }
    fn bisect(lo: &Self, hi: &Self) -> Self {
        // Plain midpoints double the denominator every step. The simplest
        // rational in the middle half keeps capacities small and still cuts
        // the bracket by at least a quarter.
        let quarter = (hi - lo) / Ratio::from_integer(4);
        simplest_between(&(lo + quarter), &(hi - quarter))
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(*self)
    }
}

impl Scalar for f64 {
    type Cap = f64;
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Result<Self> {
        Ok(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_ratio(num: i128, den: i128) -> Self {
        num as f64 / den as f64
    }
    fn common_scale(_: &[Self]) -> Result<Self> {
        Ok(1.0)
    }
    fn to_cap(&self, scale: &Self) -> Result<f64> {
        Ok(self * scale)
    }
    fn bisect(lo: &Self, hi: &Self) -> Self {
        0.5 * (lo + hi)
    }
    fn from_rational(r: Rational) -> Self {
        ratio_to_f64(&r)
    }
    fn as_rational(&self) -> Option<Rational> {
        None
    }
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]`, for `0 <= lo <= hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(!lo.is_negative() && lo <= hi);
    let floor = lo.floor();
    if lo.is_integer() {
        return *lo;
    }
    let next = floor + <Rational as One>::one();
    if next <= *hi {
        return next;
    }
    // lo and hi share the integer part; recurse on the reciprocals of the
    // fractional parts, which swaps the bounds.
    let inner = simplest_between(&(hi - floor).recip(), &(lo - floor).recip());
    floor + inner.recip()
}

/// Recovers a short rational from a float: the simplest rational within a
/// relative `1e-12` of `x`. Integers convert exactly.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidParameter(format!("{x} is not a finite non-negative number")));
    }
    if x.fract() == 0.0 {
        return i128::from_f64(x).map(Ratio::from_integer).ok_or(Error::Overflow);
    }
    let (mantissa, exponent, _) = x.integer_decode();
    if !(-120..0).contains(&exponent) {
        return Err(Error::Overflow);
    }
    let exact = Ratio::new(mantissa as i128, 1i128 << (-exponent));
    let slack = exact / Ratio::from_integer(1_000_000_000_000);
    Ok(simplest_between(&(exact - slack), &(exact + slack)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Ratio::new(n, d)
    }

    #[test]
    fn simplest_rational_cases() {
        assert_eq!(simplest_between(&r(1, 3), &r(1, 2)), r(1, 2));
        assert_eq!(simplest_between(&r(3, 10), &r(2, 5)), r(1, 3));
        assert_eq!(simplest_between(&r(5, 2), &r(7, 2)), r(3, 1));
        assert_eq!(simplest_between(&r(0, 1), &r(1, 100)), r(0, 1));
        assert_eq!(simplest_between(&r(1, 101), &r(1, 100)), r(1, 100));
    }

    #[test]
    fn recovers_decimal_parameters() {
        assert_eq!(rational_from_f64(0.1).unwrap(), r(1, 10));
        assert_eq!(rational_from_f64(10.0).unwrap(), r(10, 1));
        assert_eq!(rational_from_f64(1.0 / 722.0).unwrap(), r(1, 722));
        assert!(rational_from_f64(-1.0).is_err());
    }

    #[test]
    fn bisect_stays_inside_middle_half() {
        let lo = r(0, 1);
        let hi = r(5, 19);
        let mid = Rational::bisect(&lo, &hi);
        assert!(mid >= hi / r(4, 1) && mid <= hi * r(3, 4));
        assert!(*mid.denom() <= 19);
    }

    #[test]
    fn common_scale_clears_denominators() {
        let vals = [r(1, 6), r(3, 4), r(2, 1)];
        let s = Rational::common_scale(&vals).unwrap();
        assert_eq!(s, r(12, 1));
        assert_eq!(vals[0].to_cap(&s).unwrap(), 2);
        assert_eq!(vals[1].to_cap(&s).unwrap(), 9);
    }
}
