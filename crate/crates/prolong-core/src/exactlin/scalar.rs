//! Gaussian-rational scalars.
//!
//! [`ExactScalar`] is an element of `Q(i)`: a pair of arbitrary-precision
//! rationals. Arithmetic is exact and canonical (fractions stay reduced), so
//! equality is decidable. Values small enough for machine words are kept in
//! an `i64` fast path and promoted to big rationals only on overflow.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

/// A rational number stored small when possible.
#[derive(Clone, Debug)]
enum Rat {
    Small(Rational64),
    Big(Box<BigRational>),
}

use Rat::{Big, Small};

impl Rat {
    fn zero() -> Self {
        Small(Rational64::zero())
    }

    fn from_i64(n: i64) -> Self {
        Small(Rational64::from_integer(n))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Small(Rational64::new(num, den))
    }

    fn to_big(&self) -> BigRational {
        match self {
            Small(r) => BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Big(r) => (**r).clone(),
        }
    }

    /// Canonical constructor: demotes to the small representation whenever
    /// numerator and denominator both fit in an `i64`.
    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            Small(Rational64::new_raw(n, d))
        } else {
            Big(Box::new(r))
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Small(r) => r.is_zero(),
            Big(r) => r.is_zero(),
        }
    }

    fn add(&self, other: &Rat) -> Rat {
        if let (Small(a), Small(b)) = (self, other) {
            if let Some(c) = a.checked_add(b) {
                return Small(c);
            }
        }
        Rat::from_big(self.to_big() + other.to_big())
    }

    fn sub(&self, other: &Rat) -> Rat {
        if let (Small(a), Small(b)) = (self, other) {
            if let Some(c) = a.checked_sub(b) {
                return Small(c);
            }
        }
        Rat::from_big(self.to_big() - other.to_big())
    }

    fn mul(&self, other: &Rat) -> Rat {
        if self.is_zero() || other.is_zero() {
            return Rat::zero();
        }
        if let (Small(a), Small(b)) = (self, other) {
            if let Some(c) = a.checked_mul(b) {
                return Small(c);
            }
        }
        Rat::from_big(self.to_big() * other.to_big())
    }

    fn div(&self, other: &Rat) -> Rat {
        assert!(!other.is_zero(), "division by zero");
        if let (Small(a), Small(b)) = (self, other) {
            let recip = Rational64::new(*b.denom(), *b.numer());
            if let Some(c) = a.checked_mul(&recip) {
                return Small(c);
            }
        }
        Rat::from_big(self.to_big() / other.to_big())
    }

    fn neg(&self) -> Rat {
        match self {
            Small(r) => {
                if *r.numer() == i64::MIN {
                    Rat::from_big(-self.to_big())
                } else {
                    Small(-*r)
                }
            }
            Big(r) => Rat::from_big(-(**r).clone()),
        }
    }

    fn is_integer(&self) -> bool {
        match self {
            Small(r) => r.is_integer(),
            Big(r) => r.is_integer(),
        }
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Small(a), Small(b)) => a == b,
            // Canonical storage keeps equal values in the same variant, but
            // compare through big rationals anyway.
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rat {}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Small(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

/// An element of the Gaussian rationals `Q(i)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactScalar {
    re: Rat,
    im: Rat,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        ExactScalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactScalar {
            re: Rat::zero(),
            im: Rat::from_i64(1),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar {
            re: Rat::from_i64(n),
            im: Rat::zero(),
        }
    }

    /// The rational `num/den`. Panics on a zero denominator.
    pub fn from_frac(num: i64, den: i64) -> Self {
        ExactScalar {
            re: Rat::from_frac(num, den),
            im: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &ExactScalar::one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when both parts are integers.
    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn add(&self, other: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn mul(&self, other: &ExactScalar) -> ExactScalar {
        // Skip the complex cross terms in the (common) all-real case.
        if self.im.is_zero() && other.im.is_zero() {
            return ExactScalar {
                re: self.re.mul(&other.re),
                im: Rat::zero(),
            };
        }
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        ExactScalar { re, im }
    }

    pub fn neg(&self) -> ExactScalar {
        ExactScalar {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> ExactScalar {
        ExactScalar {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> ExactScalar {
        assert!(!self.is_zero(), "inverse of zero");
        if self.im.is_zero() {
            return ExactScalar {
                re: Rat::from_i64(1).div(&self.re),
                im: Rat::zero(),
            };
        }
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        ExactScalar {
            re: self.re.div(&norm),
            im: self.im.neg().div(&norm),
        }
    }

    pub fn div(&self, other: &ExactScalar) -> ExactScalar {
        self.mul(&other.inv())
    }

    /// `self + c * x`, the elimination kernel's inner step.
    pub fn add_scaled(&self, c: &ExactScalar, x: &ExactScalar) -> ExactScalar {
        self.add(&c.mul(x))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        if self.im.to_big().is_negative() {
            write!(f, "{}-{}*i", self.re, self.im.neg())
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Error produced when parsing a scalar string fails.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal: {0}")]
pub struct ParseScalarError(pub String);

fn parse_rat(s: &str) -> Result<Rat, ParseScalarError> {
    let bad = || ParseScalarError(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::from_big(BigRational::new(n, d)))
        }
        None => {
            let n: BigInt = s.trim().parse().map_err(|_| bad())?;
            Ok(Rat::from_big(BigRational::from_integer(n)))
        }
    }
}

impl FromStr for ExactScalar {
    type Err = ParseScalarError;

    /// Parses `"a/b"`, `"c/d*i"` or `"a/b+c/d*i"` (integer parts may omit
    /// the denominator; a bare `i` or `-i` is accepted).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseScalarError(s.to_string()));
        }
        // Split at the last top-level '+'/'-' that separates two terms.
        let bytes = s.as_bytes();
        let mut split_at = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && bytes[k - 1] as char != '/' {
                let prev = bytes[k - 1] as char;
                if prev.is_ascii_digit() || prev == 'i' {
                    split_at = Some(k);
                    break;
                }
            }
        }
        let (re_str, im_str) = match split_at {
            Some(k) if s.ends_with('i') => (&s[..k], &s[k..]),
            _ if s.ends_with('i') => ("", s),
            _ => (s, ""),
        };
        let re = if re_str.is_empty() {
            Rat::zero()
        } else {
            parse_rat(re_str)?
        };
        let im = if im_str.is_empty() {
            Rat::zero()
        } else {
            let body = im_str
                .strip_suffix("*i")
                .or_else(|| im_str.strip_suffix('i'))
                .ok_or_else(|| ParseScalarError(s.to_string()))?;
            match body.trim() {
                "" | "+" => Rat::from_i64(1),
                "-" => Rat::from_i64(-1),
                other => parse_rat(other)?,
            }
        };
        Ok(ExactScalar { re, im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = ExactScalar::from_frac(1, 3);
        let b = ExactScalar::from_frac(-7, 11);
        assert_eq!(a.add(&b).sub(&b), a);
        assert_eq!(a.mul(&b).div(&b), a);
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = ExactScalar::i();
        assert_eq!(i.mul(&i), s(-1));
        assert_eq!(i.inv(), i.neg());
    }

    #[test]
    fn overflow_promotes_to_big() {
        let big = ExactScalar::from_int(i64::MAX);
        let sq = big.mul(&big);
        assert_eq!(sq.div(&big), big);
        assert!(!sq.is_zero());
    }

    #[test]
    fn display_round_trips() {
        let cases = [
            "0",
            "2",
            "-1/2",
            "1*i",
            "-3/4*i",
            "1/2+1/3*i",
            "2-5*i",
        ];
        for c in cases {
            let v: ExactScalar = c.parse().unwrap();
            assert_eq!(v.to_string(), c, "canonical form of {c}");
        }
        let alt: ExactScalar = "i".parse().unwrap();
        assert_eq!(alt, ExactScalar::i());
        let neg: ExactScalar = "-i".parse().unwrap();
        assert_eq!(neg, ExactScalar::i().neg());
    }

    #[test]
    fn conjugate_multiplies_to_norm() {
        let z: ExactScalar = "3/2-2*i".parse().unwrap();
        let n = z.mul(&z.conj());
        assert!(n.is_real());
        assert_eq!(n, ExactScalar::from_frac(25, 4));
    }
}
