//! Scalar abstraction shared by the exact and the floating-point code paths.
//!
//! [`Scalar`] is what the sequence and order-check code needs: field
//! arithmetic, ordering and a tolerance policy tied to the working precision.
//! [`Real`] adds the transcendental functions needed by the Dirichlet-series
//! machinery. Exact rationals implement only [`Scalar`]; `f64` and the
//! multiprecision [`Mp`](crate::Mp) types implement both.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, NumAssign, One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Num
    + NumAssign
    + Signed
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    /// Significand bits, or `None` when arithmetic is exact.
    const PRECISION: Option<u32>;

    fn from_exact(q: &BigRational) -> Self;

    /// Exact value of `self`; `None` for NaN and infinities.
    fn to_exact(&self) -> Option<BigRational>;

    fn to_f64(&self) -> f64;

    /// Round-trip decimal rendering used in reports.
    fn to_decimal(&self) -> String;

    /// `2^exp`, exactly.
    fn pow2(exp: i32) -> Self;

    fn is_finite(&self) -> bool {
        true
    }

    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_u64(n as u64).expect("usize fits")
    }

    /// `2^-(p - slack_bits) * |scale|` at working precision `p`, zero when exact.
    fn tolerance(scale: &Self, slack_bits: u32) -> Self {
        match Self::PRECISION {
            None => Self::zero(),
            Some(p) => scale.abs() * Self::pow2(slack_bits as i32 - p as i32),
        }
    }

    fn cast<U: Scalar>(&self) -> U {
        match self.to_exact() {
            Some(q) => U::from_exact(&q),
            None => U::from_f64(self.to_f64()).unwrap_or_else(U::zero),
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

/// Floating-point scalars with the elementary functions.
pub trait Real: Scalar {
    /// The next precision up, used to recheck witnesses.
    type Wider: Real;

    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn powf(&self, exponent: &Self) -> Self;

    fn from_f64_lossless(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite f64")
    }

    fn epsilon() -> Self {
        Self::pow2(1 - Self::PRECISION.expect("floating type") as i32)
    }

    fn precision_bits() -> u32 {
        Self::PRECISION.expect("floating type")
    }

    fn widen(&self) -> Self::Wider {
        self.cast()
    }

    /// Scientific notation with `digits` significant digits.
    fn to_sci(&self, digits: usize) -> String;
}

impl Scalar for BigRational {
    const PRECISION: Option<u32> = None;

    fn from_exact(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_exact(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_decimal(&self) -> String {
        exact_to_decimal(self)
    }

    fn pow2(exp: i32) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    }
}

impl Scalar for f64 {
    const PRECISION: Option<u32> = Some(53);

    fn from_exact(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_exact(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_decimal(&self) -> String {
        format!("{self:?}")
    }

    fn pow2(exp: i32) -> Self {
        2f64.powi(exp)
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Real for f64 {
    type Wider = crate::Mp128;

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn powf(&self, exponent: &Self) -> Self {
        f64::powf(*self, *exponent)
    }

    fn to_sci(&self, digits: usize) -> String {
        format!("{:.*e}", digits.saturating_sub(1), self)
    }
}

/// Renders a rational as a terminating decimal when one exists, `p/q` otherwise.
pub fn exact_to_decimal(q: &BigRational) -> String {
    let (numer, denom) = (q.numer(), q.denom());
    if denom.is_one() {
        return numer.to_string();
    }
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut rest = denom.clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    while rest.is_even() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{numer}/{denom}");
    }
    let digits = twos.max(fives);
    let scaled = numer * num_traits::pow(BigInt::from(10), digits as usize) / denom;
    let negative = scaled.sign() == Sign::Minus;
    let mut body = scaled.magnitude().to_string();
    let width = digits as usize + 1;
    if body.len() < width {
        body = format!("{}{}", "0".repeat(width - body.len()), body);
    }
    let (int_part, frac_part) = body.split_at(body.len() - digits as usize);
    format!("{}{}.{}", if negative { "-" } else { "" }, int_part, frac_part)
}

/// Parses `"-1.25e-3"`, `"7"`, `".5"` or `"3/8"` into an exact rational.
pub fn parse_exact(text: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("not a number: {text:?}"));
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if exponent.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut value = if shift >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, shift.unsigned_abs() as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Supported floating-point precisions, selected at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Precision {
    F64,
    P128,
    P256,
    P512,
    P1024,
    P2048,
    P4096,
}

impl Precision {
    /// Smallest supported precision with at least `bits` significand bits.
    pub fn at_least(bits: u32) -> Result<Self, Error> {
        Ok(match bits {
            0..=52 => return Err(Error::Config(format!("precision {bits} < 53 bits"))),
            53 => Precision::F64,
            54..=128 => Precision::P128,
            129..=256 => Precision::P256,
            257..=512 => Precision::P512,
            513..=1024 => Precision::P1024,
            1025..=2048 => Precision::P2048,
            2049..=4096 => Precision::P4096,
            _ => return Err(Error::Config(format!("precision {bits} exceeds 4096 bits"))),
        })
    }

    pub fn bits(self) -> u32 {
        match self {
            Precision::F64 => 53,
            Precision::P128 => 128,
            Precision::P256 => 256,
            Precision::P512 => 512,
            Precision::P1024 => 1024,
            Precision::P2048 => 2048,
            Precision::P4096 => 4096,
        }
    }
}

/// Runs `$body` with `$t` bound to the [`Real`] type for a [`Precision`].
#[macro_export]
macro_rules! with_precision {
    ($prec:expr, $t:ident => $body:expr) => {
        match $prec {
            $crate::Precision::F64 => {
                type $t = f64;
                $body
            }
            $crate::Precision::P128 => {
                type $t = $crate::Mp128;
                $body
            }
            $crate::Precision::P256 => {
                type $t = $crate::Mp256;
                $body
            }
            $crate::Precision::P512 => {
                type $t = $crate::Mp512;
                $body
            }
            $crate::Precision::P1024 => {
                type $t = $crate::Mp1024;
                $body
            }
            $crate::Precision::P2048 => {
                type $t = $crate::Mp2048;
                $body
            }
            $crate::Precision::P4096 => {
                type $t = $crate::Mp4096;
                $body
            }
        }
    };
}

/// Serde helpers rendering scalars through [`Scalar::to_decimal`].
pub mod serde_scalar {
    use super::Scalar;
    use serde::ser::{SerializeSeq, Serializer};

    pub fn serialize<T: Scalar, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_decimal())
    }

    pub mod vec {
        use super::*;

        pub fn serialize<T: Scalar, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_decimal())?;
            }
            seq.end()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_decimal_forms() {
        assert_eq!(parse_exact("0.5").unwrap(), q(1, 2));
        assert_eq!(parse_exact("-1.25e-3").unwrap(), q(-1, 800));
        assert_eq!(parse_exact(".1").unwrap(), q(1, 10));
        assert_eq!(parse_exact("3/9").unwrap(), q(1, 3));
        assert_eq!(parse_exact("2E2").unwrap(), q(200, 1));
        assert!(parse_exact("abc").is_err());
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact(".").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(exact_to_decimal(&q(1, 8)), "0.125");
        assert_eq!(exact_to_decimal(&q(-3, 20)), "-0.15");
        assert_eq!(exact_to_decimal(&q(1, 3)), "1/3");
        assert_eq!(exact_to_decimal(&q(7, 1)), "7");
        assert_eq!(exact_to_decimal(&q(1, 1000)), "0.001");
    }

    #[test]
    fn tolerance_policy() {
        assert!(<BigRational as Scalar>::tolerance(&q(1, 1), 10).is_zero());
        assert_eq!(<f64 as Scalar>::tolerance(&2.0, 10), 2.0 * 2f64.powi(-43));
    }

    #[test]
    fn precision_selection() {
        assert_eq!(Precision::at_least(53).unwrap(), Precision::F64);
        assert_eq!(Precision::at_least(100).unwrap(), Precision::P128);
        assert_eq!(Precision::at_least(512).unwrap(), Precision::P512);
        assert!(Precision::at_least(52).is_err());
        assert!(Precision::at_least(5000).is_err());
    }
}
