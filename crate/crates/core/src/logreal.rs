//! Nonnegative reals stored as base-2 logarithms.

use alloc::vec::Vec;
use core::fmt;
use core::iter::Sum;
use core::ops::{Div, Mul};

use crate::math;

/// A nonnegative real `x` stored as `log2(x)`, with `x = 0` represented by
/// `-inf`. Every ensemble quantity in this crate is nonnegative, so no sign
/// is carried.
#[derive(Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
pub struct LogReal(f64);

impl LogReal {
    pub const ZERO: LogReal = LogReal(f64::NEG_INFINITY);
    pub const ONE: LogReal = LogReal(0.0);

    /// From a linear value. Panics on negative or NaN input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0, "LogReal requires a nonnegative value, got {x}");
        LogReal(math::log2(x))
    }

    pub fn from_log2(l: f64) -> Self {
        debug_assert!(!l.is_nan());
        LogReal(l)
    }

    pub fn from_ln(l: f64) -> Self {
        debug_assert!(!l.is_nan());
        LogReal(l / math::LN_2)
    }

    #[inline]
    pub fn log2(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.0 * math::LN_2
    }

    /// Linear value; underflows to 0 or overflows to `inf` outside double range.
    #[inline]
    pub fn to_f64(self) -> f64 {
        math::exp2(self.0)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn powf(self, e: f64) -> Self {
        if e == 0.0 {
            return LogReal::ONE;
        }
        LogReal(self.0 * e)
    }

    /// Relative difference `|a - b| / max(a, b)` computed without leaving the
    /// log domain.
    pub fn relative_difference(self, other: LogReal) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        let (hi, lo) = if self.0 >= other.0 { (self.0, other.0) } else { (other.0, self.0) };
        -math::exp_m1((lo - hi) * math::LN_2)
    }

    /// Sum of nonnegative terms by max-term factoring.
    pub fn sum_slice(terms: &[LogReal]) -> LogReal {
        let max = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return LogReal::ZERO;
        }
        if max == f64::INFINITY {
            return LogReal(f64::INFINITY);
        }
        let mut acc = math::CompensatedSum::default();
        for t in terms {
            acc.add(math::exp2(t.0 - max));
        }
        LogReal(max + math::log2(acc.value()))
    }
}

impl fmt::Debug for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogReal(2^{})", self.0)
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        if self.is_zero() || rhs.is_zero() {
            return LogReal::ZERO;
        }
        LogReal(self.0 + rhs.0)
    }
}

impl Div for LogReal {
    type Output = LogReal;
    fn div(self, rhs: LogReal) -> LogReal {
        assert!(!rhs.is_zero(), "LogReal division by zero");
        if self.is_zero() {
            return LogReal::ZERO;
        }
        LogReal(self.0 - rhs.0)
    }
}

impl core::ops::Add for LogReal {
    type Output = LogReal;
    fn add(self, rhs: LogReal) -> LogReal {
        LogReal::sum_slice(&[self, rhs])
    }
}

impl Sum for LogReal {
    fn sum<I: Iterator<Item = LogReal>>(iter: I) -> LogReal {
        let terms: Vec<LogReal> = iter.collect();
        LogReal::sum_slice(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one() {
        assert!(LogReal::from_f64(0.0).is_zero());
        assert_eq!(LogReal::from_f64(1.0), LogReal::ONE);
        assert_eq!((LogReal::ZERO + LogReal::ONE).to_f64(), 1.0);
        assert!((LogReal::ZERO * LogReal::from_log2(5000.0)).is_zero());
        assert_eq!(LogReal::ZERO.powf(0.0), LogReal::ONE);
    }

    #[test]
    fn sums_far_below_double_range() {
        let a = LogReal::from_log2(-5000.0);
        let s: LogReal = [a, a, a, a].into_iter().sum();
        assert!((s.log2() + 4998.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn round_trip_near_one(x in 0.0625f64..16.0) {
            let y = LogReal::from_f64(x).to_f64();
            prop_assert!(((y - x) / x).abs() < 1e-15);
        }

        #[test]
        fn round_trip_full_range(x in 1e-300f64..1e300) {
            // stored exponent carries |log2 x| * 2^-53 absolute error
            let y = LogReal::from_f64(x).to_f64();
            let bound = 1e-15 + crate::math::log2(x).abs() * 1.2e-16;
            prop_assert!(((y - x) / x).abs() < bound);
        }

        #[test]
        fn sum_matches_linear(xs in proptest::collection::vec(0.0f64..1e6, 1..20)) {
            let s: LogReal = xs.iter().map(|&x| LogReal::from_f64(x)).sum();
            let direct: f64 = xs.iter().sum();
            prop_assert!(crate::math::relative_difference(s.to_f64(), direct) < 1e-12);
        }

        #[test]
        fn relative_difference_matches_linear(a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
            let d = LogReal::from_f64(a).relative_difference(LogReal::from_f64(b));
            prop_assert!((d - crate::math::relative_difference(a, b)).abs() < 1e-12);
        }
    }
}
