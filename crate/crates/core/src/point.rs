//! Points of the complex plane.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A point of the complex plane, used both as evaluation argument and pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CPoint<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> CPoint<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn real(re: T) -> Self {
        Self::new(re, T::zero())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one())
    }

    pub fn from_polar(radius: T, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(radius * c, radius * s)
    }

    /// Checked constructor: both components must be finite.
    pub fn try_new(re: T, im: T) -> Result<Self> {
        Self::new(re, im).checked()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn checked(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::domain(format!("non-finite point {self}")))
        }
    }

    pub fn modulus(&self) -> T {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(&self) -> T {
        self.re * self.re + self.im * self.im
    }

    /// `log|z|`, computed without squaring.
    pub fn ln_modulus(&self) -> T {
        self.modulus().ln()
    }

    pub fn arg(&self) -> T {
        self.im.atan2(self.re)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    pub fn dist(&self, other: &Self) -> T {
        (*self - *other).modulus()
    }

    /// Converts between scalar types (used to run the same inputs through
    /// `f32` and `f64` paths).
    pub fn cast<U: Real>(&self) -> CPoint<U> {
        CPoint::new(
            U::from(self.re).expect("component representable"),
            U::from(self.im).expect("component representable"),
        )
    }
}

impl<T: Real> Add for CPoint<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Real> Sub for CPoint<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Real> Neg for CPoint<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<T: Real> Mul for CPoint<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl<T: Real> Div for CPoint<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // Smith's algorithm
        if rhs.re.abs() >= rhs.im.abs() {
            let ratio = rhs.im / rhs.re;
            let denom = rhs.re + rhs.im * ratio;
            Self::new(
                (self.re + self.im * ratio) / denom,
                (self.im - self.re * ratio) / denom,
            )
        } else {
            let ratio = rhs.re / rhs.im;
            let denom = rhs.re * ratio + rhs.im;
            Self::new(
                (self.re * ratio + self.im) / denom,
                (self.im * ratio - self.re) / denom,
            )
        }
    }
}

impl<T: Real> fmt::Display for CPoint<T> {
    /// Renders as the complex literal `a+bi` accepted by [`FromStr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

/// Error returned when a complex literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid complex literal {0:?} (expected a+bi)")]
pub struct ParsePointError(pub String);

fn parse_part(s: &str, literal: &str) -> std::result::Result<f64, ParsePointError> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => s
            .parse::<f64>()
            .map_err(|_| ParsePointError(literal.to_string())),
    }
}

impl<T: Real> FromStr for CPoint<T> {
    type Err = ParsePointError;

    /// Parses `a+bi`, `a-bi`, `a`, `bi` with optional signs and exponents on
    /// either part.
    fn from_str(literal: &str) -> std::result::Result<Self, Self::Err> {
        let s: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || ParsePointError(literal.to_string());
        if s.is_empty() {
            return Err(bad());
        }
        let (re, im) = match s.strip_suffix(['i', 'j']) {
            None => (s.parse::<f64>().map_err(|_| bad())?, 0.0),
            Some(body) => {
                let bytes = body.as_bytes();
                let split = (1..bytes.len()).rev().find(|&k| {
                    matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E')
                });
                match split {
                    Some(k) => {
                        let re = body[..k].parse::<f64>().map_err(|_| bad())?;
                        (re, parse_part(&body[k..], literal)?)
                    }
                    None => (0.0, parse_part(body, literal)?),
                }
            }
        };
        if !(re.is_finite() && im.is_finite()) {
            return Err(bad());
        }
        Ok(CPoint::new(T::lit(re), T::lit(im)))
    }
}
