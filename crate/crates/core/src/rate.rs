//! Exact non-negative data rates.

use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul};
use core::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational number used for densities and ratio bounds.
pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RateError {
    #[error("rate denominator is zero")]
    ZeroDenominator,
    #[error("rate {0} is negative")]
    Negative(Rational),
    #[error("cannot parse rate from {0:?}")]
    Parse(alloc::string::String),
}

/// A non-negative exact rational amount of data (or of computing resource,
/// since one unit of data takes one unit of resource to process).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rate(Rational);

impl Rate {
    pub const ZERO: Rate = Rate(Ratio::new_raw(0, 1));

    pub fn new(num: i128, den: i128) -> Result<Rate, RateError> {
        if den == 0 {
            return Err(RateError::ZeroDenominator);
        }
        Rate::from_rational(Ratio::new(num, den))
    }

    pub fn from_rational(value: Rational) -> Result<Rate, RateError> {
        if value.is_negative() {
            Err(RateError::Negative(value))
        } else {
            Ok(Rate(value))
        }
    }

    pub fn integer(value: u64) -> Rate {
        Rate(Ratio::from_integer(i128::from(value)))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn as_rational(&self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `max(self - other, 0)`.
    pub fn saturating_sub(self, other: Rate) -> Rate {
        if other >= self {
            Rate::ZERO
        } else {
            Rate(self.0 - other.0)
        }
    }

    pub fn checked_sub(self, other: Rate) -> Option<Rate> {
        (other <= self).then(|| Rate(self.0 - other.0))
    }

    /// Number of instances of capacity `capacity` needed to process `self`:
    /// `ceil(self / capacity)`, and 0 when `self` is 0.
    ///
    /// Panics if `capacity` is zero.
    pub fn ceil_div(self, capacity: Rate) -> u64 {
        assert!(!capacity.is_zero(), "capacity must be positive");
        let q = self.0 / capacity.0;
        let (n, d) = (*q.numer(), *q.denom());
        let c = (n + d - 1) / d;
        u64::try_from(c).expect("instance count overflows u64")
    }

    /// `self * k`.
    pub fn times(self, k: u64) -> Rate {
        Rate(self.0 * Ratio::from_integer(i128::from(k)))
    }
}

impl Add for Rate {
    type Output = Rate;
    fn add(self, rhs: Rate) -> Rate {
        Rate(self.0 + rhs.0)
    }
}

impl AddAssign for Rate {
    fn add_assign(&mut self, rhs: Rate) {
        self.0 = self.0 + rhs.0;
    }
}

impl Mul<u64> for Rate {
    type Output = Rate;
    fn mul(self, rhs: u64) -> Rate {
        self.times(rhs)
    }
}

/// Division by a positive integer.
impl Div<u64> for Rate {
    type Output = Rate;
    fn div(self, rhs: u64) -> Rate {
        Rate(self.0 / Ratio::from_integer(i128::from(rhs)))
    }
}

impl Sum for Rate {
    fn sum<I: Iterator<Item = Rate>>(iter: I) -> Rate {
        iter.fold(Rate::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Rate> for Rate {
    fn sum<I: Iterator<Item = &'a Rate>>(iter: I) -> Rate {
        iter.copied().sum()
    }
}

impl From<Rate> for Rational {
    fn from(rate: Rate) -> Rational {
        rate.0
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Accepts `p` or `p/q`.
impl FromStr for Rate {
    type Err = RateError;
    fn from_str(s: &str) -> Result<Rate, RateError> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let parse = |t: &str| t.parse::<i128>().map_err(|_| RateError::Parse(s.into()));
        Rate::new(parse(num)?, parse(den)?)
    }
}
