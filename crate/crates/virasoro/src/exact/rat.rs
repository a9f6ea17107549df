//! Arbitrary-precision rational scalars.
//!
//! `Rat` is a thin wrapper around [`num_rational::BigRational`] that pins the
//! canonical-form contract (reduced fraction, positive denominator) and adds
//! the handful of combinatorial helpers the mode algebra needs: integer
//! powers, factorials, and the generalized binomial coefficient
//!
//! ```text
//! binom(n, k) = n (n-1) ... (n-k+1) / k!
//! ```
//!
//! which is defined for *any* integer n (negative included), as required when
//! differentiating fields written in the z^{-j-1} mode convention.

use alloc::string::String;
use core::fmt;
use core::iter::{Product, Sum};
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// p/q, reduced. Panics if `q == 0`.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "denominator must be nonzero");
        Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(p: BigInt, q: BigInt) -> Self {
        assert!(!q.is_zero(), "denominator must be nonzero");
        Rat(BigRational::new(p, q))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    /// Integer power, with negative exponents inverting. Panics on 0^(-k).
    pub fn pow(&self, e: i64) -> Self {
        if e >= 0 {
            Rat(self.0.pow(e as i32))
        } else {
            let inv = self.inv().expect("zero has no negative powers");
            Rat(inv.0.pow((-e) as i32))
        }
    }

    /// k! as a rational.
    pub fn factorial(k: u32) -> Self {
        let mut acc = BigInt::one();
        for i in 2..=k {
            acc *= BigInt::from(i);
        }
        Rat(BigRational::from_integer(acc))
    }

    /// Generalized binomial coefficient binom(n, k) for any integer n.
    pub fn binom(n: i64, k: u32) -> Self {
        let mut num = BigInt::one();
        for i in 0..k {
            num *= BigInt::from(n) - BigInt::from(i);
        }
        Rat(BigRational::new(num, Self::factorial(k).0.to_integer()))
    }

    /// Nearest f64; used only by the numeric companion crate.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rat {
    /// `p/q`, or just `p` for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse error for `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError(pub String);

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed rational: {}", self.0)
    }
}

impl core::error::Error for ParseRatError {}

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `p` or `p/q` with optional sign, q > 0 after reduction.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRatError(String::from(s));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, q),
            None => (s, "1"),
        };
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(Rat(BigRational::new(p, q)))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rat {
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.0.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.0.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Rat {
    fn mul_assign(&mut self, rhs: Rat) {
        self.0 *= rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |a, b| a * b)
    }
}

/// Shorthand for `Rat::new(p, q)`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = Rat::new(6, -4);
        assert_eq!(r, Rat::new(-3, 2));
        assert_eq!(r.to_string(), "-3/2");
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "7", "-7", "3/4", "-22/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        assert_eq!("4/6".parse::<Rat>().unwrap(), Rat::new(2, 3));
    }

    #[test]
    fn generalized_binomial() {
        // binom(-1, k) = (-1)^k, binom(4, 2) = 6, binom(-3, 2) = 6.
        assert_eq!(Rat::binom(-1, 3), Rat::from_int(-1));
        assert_eq!(Rat::binom(4, 2), Rat::from_int(6));
        assert_eq!(Rat::binom(-3, 2), Rat::from_int(6));
        assert_eq!(Rat::binom(2, 5), Rat::zero());
    }

    #[test]
    fn powers_and_inverse() {
        assert_eq!(rat(2, 3).pow(-2), rat(9, 4));
        assert_eq!(rat(5, 1).pow(0), Rat::one());
        assert!(Rat::zero().inv().is_none());
        assert_eq!(rat(3, 7).inv().unwrap(), rat(7, 3));
    }
}
