//! Fixed-precision binary floating point backed by MPFR.
//!
//! The precision is a const parameter so that `Mp<B>` can implement the
//! `num-traits` constructors (`zero()`, `one()`, ...) which take no context.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};
use rug::integer::Order;
use rug::{Float, Integer, Rational};

use crate::scalar::{Real, Scalar};

#[derive(Clone)]
pub struct Mp<const BITS: u32>(Float);

impl<const BITS: u32> Mp<BITS> {
    pub fn new<T>(value: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        Mp(Float::with_val(BITS, value))
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }
}

fn bigint_to_rug(v: &BigInt) -> Integer {
    let (sign, bytes) = v.to_bytes_le();
    let m = Integer::from_digits(&bytes, Order::Lsf);
    if sign == Sign::Minus {
        -m
    } else {
        m
    }
}

fn rug_to_bigint(v: &Integer) -> BigInt {
    let bytes = v.to_digits::<u8>(Order::Lsf);
    let sign = match v.cmp0() {
        Ordering::Less => Sign::Minus,
        Ordering::Equal => Sign::NoSign,
        Ordering::Greater => Sign::Plus,
    };
    BigInt::from_bytes_le(sign, &bytes)
}

impl<const BITS: u32> fmt::Debug for Mp<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_radix(10, None))
    }
}

impl<const BITS: u32> fmt::Display for Mp<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl<const BITS: u32> PartialEq for Mp<BITS> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<const BITS: u32> PartialOrd for Mp<BITS> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl<const BITS: u32> $tr for Mp<BITS> {
            type Output = Self;
            fn $m(mut self, rhs: Self) -> Self {
                self.0.$am(&rhs.0);
                self
            }
        }
        impl<'a, const BITS: u32> $tr<&'a Mp<BITS>> for Mp<BITS> {
            type Output = Self;
            fn $m(mut self, rhs: &'a Self) -> Self {
                self.0.$am(&rhs.0);
                self
            }
        }
        impl<'a, const BITS: u32> $tr<&'a Mp<BITS>> for &'a Mp<BITS> {
            type Output = Mp<BITS>;
            fn $m(self, rhs: &'a Mp<BITS>) -> Mp<BITS> {
                Mp(Float::with_val(BITS, (&self.0).$m(&rhs.0)))
            }
        }
        impl<const BITS: u32> $atr for Mp<BITS> {
            fn $am(&mut self, rhs: Self) {
                self.0.$am(&rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);
binop!(Rem, rem, RemAssign, rem_assign);

impl<const BITS: u32> Neg for Mp<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        Mp(-self.0)
    }
}

impl<const BITS: u32> Zero for Mp<BITS> {
    fn zero() -> Self {
        Mp(Float::new(BITS))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<const BITS: u32> One for Mp<BITS> {
    fn one() -> Self {
        Mp(Float::with_val(BITS, 1))
    }
}

impl<const BITS: u32> Num for Mp<BITS> {
    type FromStrRadixErr = rug::float::ParseFloatError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let parsed = Float::parse_radix(s, radix as i32)?;
        Ok(Mp(Float::with_val(BITS, parsed)))
    }
}

impl<const BITS: u32> Signed for Mp<BITS> {
    fn abs(&self) -> Self {
        Mp(self.0.clone().abs())
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self.0 <= other.0 {
            Self::zero()
        } else {
            self - other
        }
    }
    fn signum(&self) -> Self {
        if self.0.is_zero() {
            Self::zero()
        } else {
            Mp(self.0.clone().signum())
        }
    }
    fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }
    fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }
}

impl<const BITS: u32> FromPrimitive for Mp<BITS> {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Mp(Float::with_val(BITS, n)))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Mp(Float::with_val(BITS, n)))
    }
    fn from_f64(n: f64) -> Option<Self> {
        n.is_finite().then(|| Mp(Float::with_val(BITS, n)))
    }
}

impl<const BITS: u32> Scalar for Mp<BITS> {
    const PRECISION: Option<u32> = Some(BITS);

    fn from_exact(q: &BigRational) -> Self {
        let r = Rational::from((bigint_to_rug(q.numer()), bigint_to_rug(q.denom())));
        Mp(Float::with_val(BITS, r))
    }

    fn to_exact(&self) -> Option<BigRational> {
        let r = self.0.to_rational()?;
        let (n, d) = r.into_numer_denom();
        Some(BigRational::new(rug_to_bigint(&n), rug_to_bigint(&d)))
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn to_decimal(&self) -> String {
        self.0.to_string_radix(10, None)
    }

    fn pow2(exp: i32) -> Self {
        Mp(Float::with_val(BITS, 1) << exp)
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
}

macro_rules! real_impl {
    ($bits:literal => $wider:literal) => {
        impl Real for Mp<$bits> {
            type Wider = Mp<$wider>;

            fn ln(&self) -> Self {
                Mp(Float::with_val($bits, self.0.ln_ref()))
            }

            fn exp(&self) -> Self {
                Mp(Float::with_val($bits, self.0.exp_ref()))
            }

            fn powf(&self, exponent: &Self) -> Self {
                Mp(Float::with_val($bits, (&self.0).pow(&exponent.0)))
            }

            fn to_sci(&self, digits: usize) -> String {
                self.0.to_string_radix(10, Some(digits.max(1)))
            }
        }
    };
}

use rug::ops::Pow;

real_impl!(128 => 256);
real_impl!(256 => 512);
real_impl!(512 => 1024);
real_impl!(1024 => 2048);
real_impl!(2048 => 4096);
real_impl!(4096 => 4096);
