//! Scalar backends shared by every module.
//!
//! [`GaussRat`] is exact arithmetic over the Gaussian rationals ℚ(i); `Complex64`
//! is the floating backend. Code that must run on both is written against
//! [`Scalar`], and comparisons go through a [`Tolerance`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// Field operations needed by the gluing model and identity checks.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether equality is decided exactly.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact for `GaussRat` (every finite double is a dyadic rational).
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn is_zero(&self) -> bool;
    /// Modulus as a double.
    fn norm(&self) -> f64;
    fn conj(&self) -> Self;

    fn powu(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// Gaussian rational `re + im·i` with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `(a/b) + (c/d) i`.
    pub fn from_fracs(a: i64, b: i64, c: i64, d: i64) -> Self {
        GaussRat::new(
            BigRational::new(a.into(), b.into()),
            BigRational::new(c.into(), d.into()),
        )
    }

    pub fn i() -> Self {
        GaussRat::from_ints(0, 1)
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to a scaled quotient when numerator and denominator overflow separately.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

fn f64_to_rat(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite double")
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        GaussRat::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        GaussRat::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::real(self.re * o.re);
        }
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        GaussRat::new(re, im)
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    /// Panics on division by zero, like the underlying rationals.
    fn div(self, o: GaussRat) -> GaussRat {
        if o.im.is_zero() {
            return GaussRat::new(self.re / &o.re, self.im / &o.re);
        }
        let den = o.norm_sqr();
        let re = (&self.re * &o.re + &self.im * &o.im) / &den;
        let im = (&self.im * &o.re - &self.re * &o.im) / &den;
        GaussRat::new(re, im)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl Scalar for GaussRat {
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussRat::from_ints(0, 0)
    }
    fn one() -> Self {
        GaussRat::from_ints(1, 0)
    }
    fn from_i64(v: i64) -> Self {
        GaussRat::from_ints(v, 0)
    }
    fn from_c64(z: Complex64) -> Self {
        GaussRat::new(f64_to_rat(z.re), f64_to_rat(z.im))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn norm(&self) -> f64 {
        self.to_c64().norm()
    }
    fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() { String::new() } else { fmt_rat(&im_abs) };
        let sign = if self.im.is_negative() { '-' } else { '+' };
        if self.re.is_zero() {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{im_txt}i")
        } else {
            write!(f, "{}{sign}{im_txt}i", fmt_rat(&self.re))
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let txt = String::deserialize(d)?;
        txt.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a real literal: integer, `a/b`, or decimal (with optional exponent), exactly.
pub fn parse_rational(txt: &str) -> Result<BigRational, ParseError> {
    let t = txt.trim();
    let bad = || ParseError::Number(txt.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((a, b)) = t.split_once('/') {
        let a = parse_rational(a)?;
        let b = parse_rational(b)?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(a / b);
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
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
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all).map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

impl FromStr for GaussRat {
    type Err = ParseError;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with rational or decimal parts.
    fn from_str(txt: &str) -> Result<Self, ParseError> {
        let t: String = txt.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || ParseError::Number(txt.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix(['i', 'j']) else {
            return Ok(GaussRat::real(parse_rational(&t)?));
        };
        // Split at the last sign that is not the leading one and not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_txt, im_txt) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let im = match im_txt {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other)?,
        };
        let re = parse_rational(re_txt).map_err(|_| bad())?;
        Ok(GaussRat::new(re, im))
    }
}

/// Parses a complex literal into a double-precision value.
pub fn parse_c64(txt: &str) -> Result<Complex64, ParseError> {
    Ok(txt.parse::<GaussRat>()?.to_c64())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

impl FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}` (expected exact or float)")),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

/// A complex entry in JSON: `[re, im]` with numeric parts, or a literal such as `"1/2-3i"`.
/// Numeric parts are read from their decimal text, so `0.1` is exactly one tenth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexDoc {
    Pair([serde_json::Number; 2]),
    Text(String),
}

impl ComplexDoc {
    pub fn to_exact(&self) -> Result<GaussRat, ParseError> {
        match self {
            ComplexDoc::Pair([re, im]) => Ok(GaussRat::new(
                parse_rational(&re.to_string())?,
                parse_rational(&im.to_string())?,
            )),
            ComplexDoc::Text(t) => t.parse(),
        }
    }
}

/// Comparison policy: exact identity, or relative error with a magnitude floor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub floor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, floor: 1e-300 }
    }
}

impl Tolerance {
    pub fn with_rel(rel: f64) -> Self {
        Tolerance { rel, ..Tolerance::default() }
    }

    /// Exact backends ignore the tolerance and compare for identity.
    pub fn eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        if S::EXACT {
            return a == b;
        }
        let scale = a.norm().max(b.norm());
        (a.clone() - b.clone()).norm() <= self.rel * scale.max(self.floor)
    }

    /// Whether `x` is zero relative to the magnitude `scale` of the terms that produced it.
    pub fn vanishes<S: Scalar>(&self, x: &S, scale: f64) -> bool {
        if S::EXACT {
            return x.is_zero();
        }
        x.norm() <= self.rel * scale.max(self.floor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_literals() {
        assert_eq!("1+i".parse::<GaussRat>().unwrap(), GaussRat::from_ints(1, 1));
        assert_eq!("-i".parse::<GaussRat>().unwrap(), GaussRat::from_ints(0, -1));
        assert_eq!("3/4-1/2i".parse::<GaussRat>().unwrap(), GaussRat::from_fracs(3, 4, -1, 2));
        assert_eq!("0.25".parse::<GaussRat>().unwrap(), GaussRat::from_fracs(1, 4, 0, 1));
        assert_eq!("2e-1+0i".parse::<GaussRat>().unwrap(), GaussRat::from_fracs(1, 5, 0, 1));
        assert_eq!("-2".parse::<GaussRat>().unwrap(), GaussRat::from_ints(-2, 0));
        assert!("1+".parse::<GaussRat>().is_err());
        assert!("abc".parse::<GaussRat>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for txt in ["0", "5", "-7/3", "i", "-i", "2-3i", "1/2+5/7i", "-4i"] {
            let z: GaussRat = txt.parse().unwrap();
            assert_eq!(z.to_string(), txt);
            assert_eq!(z.to_string().parse::<GaussRat>().unwrap(), z);
        }
    }

    #[test]
    fn field_axioms_on_samples() {
        let a = GaussRat::from_fracs(3, 2, -1, 5);
        let b = GaussRat::from_fracs(-7, 3, 2, 9);
        let q = a.clone() / b.clone();
        assert_eq!(q * b.clone(), a);
        assert_eq!(b.clone() * b.inv(), GaussRat::one());
        assert_eq!(GaussRat::i().powu(2), GaussRat::from_i64(-1));
    }

    #[test]
    fn float_conversion_is_exact() {
        let z = Complex64::new(0.1, -3.75e-5);
        assert_eq!(GaussRat::from_c64(z).to_c64(), z);
    }

    #[test]
    fn tolerance_semantics() {
        let tol = Tolerance::default();
        let a = Complex64::new(1.0, 0.0);
        assert!(tol.eq(&a, &Complex64::new(1.0 + 1e-12, 0.0)));
        assert!(!tol.eq(&a, &Complex64::new(1.0 + 1e-6, 0.0)));
        assert!(tol.vanishes(&Complex64::new(1e-14, 0.0), 1.0));
        assert!(!tol.eq(&GaussRat::one(), &(GaussRat::one() + GaussRat::from_fracs(1, 1000000000, 0, 1))));
    }
}
