//! Exact rational scalars.
//!
//! [`Rat`] wraps a reduced `i128` fraction. Every operation is checked: an
//! intermediate that does not fit panics with `rational overflow` instead of
//! wrapping, so a result is either exact or absent.

use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};

/// A reduced fraction `numer / denom` with `denom >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(Ratio<i128>);

#[cold]
#[inline(never)]
fn overflow() -> ! {
    panic!("rational overflow")
}

impl Rat {
    pub const ZERO: Rat = Rat(Ratio::new_raw(0, 1));
    pub const ONE: Rat = Rat(Ratio::new_raw(1, 1));
    pub const MINUS_ONE: Rat = Rat(Ratio::new_raw(-1, 1));

    /// Builds `numer / denom`, reducing to lowest terms.
    ///
    /// Panics when `denom == 0`.
    pub fn new(numer: i128, denom: i128) -> Rat {
        assert!(denom != 0, "zero denominator");
        let g = numer.gcd(&denom);
        let (mut n, mut d) = (numer / g, denom / g);
        if d < 0 {
            n = n.checked_neg().unwrap_or_else(|| overflow());
            d = d.checked_neg().unwrap_or_else(|| overflow());
        }
        Rat(Ratio::new_raw(n, d))
    }

    pub fn from_int(n: i128) -> Rat {
        Rat(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Rat::ONE
    }

    pub fn is_integer(&self) -> bool {
        self.denom() == 1
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -*self
        } else {
            *self
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "inverse of zero");
        Rat::new(self.denom(), self.numer())
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Rat {
        let base = if exp < 0 { self.recip() } else { *self };
        let mut e = exp.unsigned_abs();
        let mut acc = Rat::ONE;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc *= sq;
            }
            e >>= 1;
            if e > 0 {
                sq *= sq;
            }
        }
        acc
    }

    pub fn checked_add(&self, rhs: &Rat) -> Option<Rat> {
        self.0.checked_add(&rhs.0).map(Rat)
    }

    pub fn checked_mul(&self, rhs: &Rat) -> Option<Rat> {
        self.0.checked_mul(&rhs.0).map(Rat)
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::ZERO
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n as i128)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Rat {
        Rat::from_int(n as i128)
    }
}

impl Add for Rat {
    type Output = Rat;
    #[inline]
    fn add(self, rhs: Rat) -> Rat {
        // integer fast path keeps the hot loops cheap
        if self.denom() == 1 && rhs.denom() == 1 {
            return match self.numer().checked_add(rhs.numer()) {
                Some(n) => Rat(Ratio::new_raw(n, 1)),
                None => overflow(),
            };
        }
        self.0.checked_add(&rhs.0).map(Rat).unwrap_or_else(|| overflow())
    }
}

impl Sub for Rat {
    type Output = Rat;
    #[inline]
    fn sub(self, rhs: Rat) -> Rat {
        if self.denom() == 1 && rhs.denom() == 1 {
            return match self.numer().checked_sub(rhs.numer()) {
                Some(n) => Rat(Ratio::new_raw(n, 1)),
                None => overflow(),
            };
        }
        self.0.checked_sub(&rhs.0).map(Rat).unwrap_or_else(|| overflow())
    }
}

impl Mul for Rat {
    type Output = Rat;
    #[inline]
    fn mul(self, rhs: Rat) -> Rat {
        if self.denom() == 1 && rhs.denom() == 1 {
            return match self.numer().checked_mul(rhs.numer()) {
                Some(n) => Rat(Ratio::new_raw(n, 1)),
                None => overflow(),
            };
        }
        self.0.checked_mul(&rhs.0).map(Rat).unwrap_or_else(|| overflow())
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        self.0.checked_div(&rhs.0).map(Rat).unwrap_or_else(|| overflow())
    }
}

impl Neg for Rat {
    type Output = Rat;
    #[inline]
    fn neg(self) -> Rat {
        match self.numer().checked_neg() {
            Some(n) => Rat(Ratio::new_raw(n, self.denom())),
            None => overflow(),
        }
    }
}

impl AddAssign for Rat {
    #[inline]
    fn add_assign(&mut self, rhs: Rat) {
        *self = *self + rhs;
    }
}

impl SubAssign for Rat {
    #[inline]
    fn sub_assign(&mut self, rhs: Rat) {
        *self = *self - rhs;
    }
}

impl MulAssign for Rat {
    #[inline]
    fn mul_assign(&mut self, rhs: Rat) {
        *self = *self * rhs;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error for a malformed rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub alloc::string::String);

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `p` or `p/q` with optional sign on `p`; `q` must be positive.
    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let bad = || ParseRatError(s.into());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (t, None),
        };
        let valid_int = |x: &str, signed: bool| {
            let digits = if signed {
                x.strip_prefix('-').or_else(|| x.strip_prefix('+')).unwrap_or(x)
            } else {
                x
            };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid_int(n, true) {
            return Err(bad());
        }
        let numer: i128 = n.parse().map_err(|_| bad())?;
        let denom: i128 = match d {
            Some(d) => {
                if !valid_int(d, false) {
                    return Err(bad());
                }
                d.parse().map_err(|_| bad())?
            }
            None => 1,
        };
        if denom == 0 {
            return Err(bad());
        }
        Ok(Rat::new(numer, denom))
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        self.denom() == 1 && self.numer() == *other as i128
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.partial_cmp(&Rat::from(*other))
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn reduces_and_normalizes_sign() {
        let r = Rat::new(4, -6);
        assert_eq!(r.numer(), -2);
        assert_eq!(r.denom(), 3);
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!(Rat::new(6, 3).to_string(), "2");
    }

    #[test]
    fn parses_literals() {
        assert_eq!("3/6".parse::<Rat>().unwrap(), Rat::new(1, 2));
        assert_eq!("-7".parse::<Rat>().unwrap(), Rat::from(-7));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("1/-2".parse::<Rat>().is_err());
        assert!("1.5".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(Rat::from(2).pow(6), Rat::from(64));
        assert_eq!(Rat::from(2).pow(-3), Rat::new(1, 8));
        assert_eq!(Rat::new(-1, 3).pow(0), Rat::ONE);
    }

    #[test]
    #[should_panic(expected = "rational overflow")]
    fn overflow_panics() {
        let big = Rat::from_int(i128::MAX / 2 + 1);
        let _ = big + big;
    }
}
