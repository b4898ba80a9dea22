//! Exact scalars: complex numbers with rational real and imaginary parts.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A Gaussian rational: `re + im*i` with both parts arbitrary-precision
/// rationals kept in lowest terms with positive denominators.
///
/// Equality is structural; the reduced representation is unique, so two
/// values are equal as complex numbers iff their fields are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`, real.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re^2 + im^2`, a nonnegative rational; zero iff the value is zero.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = rhs.norm_sqr();
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &n;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &n;
        Ok(GaussianRational { re, im })
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// Structural order (lexicographic on re, im). Used for canonical
    /// sorting of containers only; it is not compatible with the arithmetic.
    pub fn cmp_structural(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

/// Panics on a zero divisor; use `checked_div` where the divisor is untrusted.
impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: Self) -> GaussianRational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: Self) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl $trait<GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form shared by all JSON files and CLI I/O:
/// `3`, `-1/2`, `i`, `2-3/4i`, `0`. Emission is whitespace-free.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        if !self.re.is_zero() {
            out.push_str(&fmt_rational(&self.re));
        }
        if !self.im.is_zero() {
            let abs = self.im.abs();
            let coeff = if abs.is_one() {
                String::new()
            } else {
                fmt_rational(&abs)
            };
            if self.im.is_negative() {
                out.push('-');
            } else if !self.re.is_zero() {
                out.push('+');
            }
            out.push_str(&coeff);
            out.push('i');
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if den_str.is_empty() || !den_str.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = num_str.strip_prefix(['+', '-']).unwrap_or(num_str);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let num = BigInt::from_str(num_str).map_err(|_| bad())?;
    let den = BigInt::from_str(den_str).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

/// Grammar: `SIGN? INT ('/' INT)? (('+'|'-') (INT ('/' INT)?)? 'i')?`, plus
/// the pure-imaginary forms `i`, `-i`, `3/4i`. Whitespace is ignored.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if let Some(body) = s.strip_suffix('i') {
            // Last sign past position 0 separates the real part from the
            // imaginary coefficient; INT tokens never contain signs.
            let split = body
                .char_indices()
                .rev()
                .find(|&(p, c)| p > 0 && (c == '+' || c == '-'))
                .map(|(p, _)| p);
            let (re_str, im_str) = match split {
                Some(p) => (&body[..p], &body[p..]),
                None => ("", body),
            };
            let re = if re_str.is_empty() {
                BigRational::zero()
            } else {
                parse_rational(re_str)?
            };
            let im = match im_str {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                t => parse_rational(t)?,
            };
            Ok(GaussianRational { re, im })
        } else {
            Ok(Self::from_rational(parse_rational(&s)?))
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gq(s: &str) -> GaussianRational {
        s.parse().expect(s)
    }

    #[test]
    fn product_with_conjugate_gives_norm() {
        let z = gq("1+2i");
        assert_eq!(&z * &z.conjugate(), gq("5"));
    }

    #[test]
    fn conjugate_negates_imaginary_part() {
        assert_eq!(gq("3/2-1/4i").conjugate(), gq("3/2+1/4i"));
    }

    #[test]
    fn additive_inverse_parts_cancel() {
        assert_eq!(gq("1/3+i") + gq("2/3-i"), gq("1"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            gq("1").checked_div(&gq("0")),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn display_is_canonical() {
        for (input, expect) in [
            ("3", "3"),
            ("-1/2", "-1/2"),
            ("i", "i"),
            ("2-3/4i", "2-3/4i"),
            ("0", "0"),
            ("0i", "0"),
            ("-i", "-i"),
            ("2/4", "1/2"),
            ("+1", "1"),
            (" 2 - 3/4 i ", "2-3/4i"),
            ("1+1i", "1+i"),
            ("-2i", "-2i"),
            ("5/1i", "5i"),
        ] {
            assert_eq!(gq(input).to_string(), expect, "input {input}");
        }
    }

    #[test]
    fn malformed_inputs_rejected() {
        for bad in ["", "1/0", "/2", "1/", "i2", "2+-3i", "1.5", "a", "--1", "1/-2"] {
            assert!(bad.parse::<GaussianRational>().is_err(), "accepted {bad}");
        }
    }

    fn arb_gq() -> impl Strategy<Value = GaussianRational> {
        (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12).prop_map(|(a, b, c, d)| {
            GaussianRational::new(
                BigRational::new(BigInt::from(a), BigInt::from(b)),
                BigRational::new(BigInt::from(c), BigInt::from(d)),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn field_axioms(a in arb_gq(), b in arb_gq(), c in arb_gq()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &GaussianRational::zero(), a.clone());
            prop_assert_eq!(&a * &GaussianRational::one(), a.clone());
            prop_assert_eq!(&a - &a, GaussianRational::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inverse().unwrap(), GaussianRational::one());
            }
        }

        #[test]
        fn display_parse_round_trip(a in arb_gq()) {
            let shown = a.to_string();
            prop_assert_eq!(shown.parse::<GaussianRational>().unwrap(), a);
        }

        #[test]
        fn conjugation_is_multiplicative(a in arb_gq(), b in arb_gq()) {
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        }
    }
}
