//! The finite grading domain `B` and its sign conventions.

use core::fmt;

use crate::error::Error;

/// The grading domain. Finite integral domains are fields, so only the
/// trivial ring and the prime fields `Z/p` occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradingGroup {
    Trivial,
    Zp(u32),
}

/// A homogeneous degree, stored as its integer representative in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Degree(pub u32);

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl GradingGroup {
    /// `Zp(p)`, rejecting non-primes.
    pub fn zp(p: u32) -> Result<GradingGroup, Error> {
        if is_prime(p) {
            Ok(GradingGroup::Zp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn z2() -> GradingGroup {
        GradingGroup::Zp(2)
    }

    /// Number of elements of `B`.
    pub fn size(&self) -> u32 {
        match self {
            GradingGroup::Trivial => 1,
            GradingGroup::Zp(p) => *p,
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = Degree> {
        (0..self.size()).map(Degree)
    }

    pub fn contains(&self, b: Degree) -> bool {
        b.0 < self.size()
    }

    pub fn check(&self, b: Degree) -> Result<Degree, Error> {
        if self.contains(b) {
            Ok(b)
        } else {
            Err(Error::DegreeOutOfRange {
                degree: b.0,
                size: self.size(),
            })
        }
    }

    pub fn add(&self, a: Degree, b: Degree) -> Degree {
        Degree((a.0 + b.0) % self.size())
    }

    pub fn neg(&self, a: Degree) -> Degree {
        Degree((self.size() - a.0) % self.size())
    }

    /// Ring product in `B`.
    pub fn mul(&self, a: Degree, b: Degree) -> Degree {
        Degree(((a.0 as u64 * b.0 as u64) % self.size() as u64) as u32)
    }

    /// Additive order of `b`; `order(0) = 1`.
    pub fn order(&self, b: Degree) -> u32 {
        if b.0 == 0 {
            1
        } else {
            self.size()
        }
    }

    /// `(-1)^order(b)`.
    pub fn epsilon(&self, b: Degree) -> i32 {
        if self.order(b) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The commutation sign `xy = sign_commute(|x|,|y|) yx` of a
    /// `B`-commutative algebra: `epsilon(|x||y|)`.
    pub fn sign_commute(&self, a: Degree, b: Degree) -> i32 {
        self.epsilon(self.mul(a, b))
    }

    /// Display name used by the text format: `trivial`, `Z2`, `Zp:<p>`.
    pub fn label(&self) -> alloc::string::String {
        use alloc::format;
        match self {
            GradingGroup::Trivial => "trivial".into(),
            GradingGroup::Zp(2) => "Z2".into(),
            GradingGroup::Zp(p) => format!("Zp:{p}"),
        }
    }
}

/// `(-1)^e` for an integer exponent built from degree representatives.
pub fn parity_sign(e: u64) -> i32 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_is_anticommutative() {
        let b = GradingGroup::Trivial;
        assert_eq!(b.order(Degree(0)), 1);
        assert_eq!(b.sign_commute(Degree(0), Degree(0)), -1);
    }

    #[test]
    fn z2_signs() {
        let b = GradingGroup::z2();
        assert_eq!(b.sign_commute(Degree(1), Degree(1)), 1);
        assert_eq!(b.sign_commute(Degree(0), Degree(1)), -1);
        assert_eq!(b.sign_commute(Degree(1), Degree(0)), -1);
        assert_eq!(b.sign_commute(Degree(0), Degree(0)), -1);
    }

    #[test]
    fn odd_prime_degrees() {
        let b = GradingGroup::zp(3).unwrap();
        assert_eq!(b.order(Degree(2)), 3);
        assert_eq!(b.add(Degree(2), Degree(2)), Degree(1));
        assert_eq!(b.neg(Degree(1)), Degree(2));
        assert_eq!(b.epsilon(Degree(1)), -1);
        assert!(GradingGroup::zp(4).is_err());
        assert!(b.check(Degree(3)).is_err());
    }
}
