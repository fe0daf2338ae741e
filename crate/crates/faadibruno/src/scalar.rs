//! Dual-mode arithmetic: exact rationals by default, IEEE doubles when
//! transcendental functions are needed.
//!
//! Everything downstream (tensors, composition, the oracle) is generic over
//! this trait so the exact and approximate pipelines share one code path and
//! can never drift apart structurally.

use std::fmt;

use num::{BigRational, BigUint, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Relative tolerance for float comparisons: |a - b| <= RTOL · max(1, |a|, |b|).
pub const FLOAT_RTOL: f64 = 1e-9;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Rational,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Sized {
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn powi(&self, exp: u32) -> Self;
    fn from_count(count: &BigUint) -> Self;
    fn from_rational(q: &BigRational) -> Self;

    /// Transcendentals; rational mode refuses them.
    fn try_sin(&self) -> Result<Self>;
    fn try_cos(&self) -> Result<Self>;
    fn try_exp(&self) -> Result<Self>;

    /// Equality in rational mode, relative tolerance in float mode.
    fn approx_matches(&self, other: &Self) -> bool;
    /// |a - b| / max(1, |a|, |b|) as f64, for reporting.
    fn rel_error(&self, other: &Self) -> f64;
    fn to_f64(&self) -> f64;

    /// JSON value encoding: `"p/q"` strings for rationals, numbers for
    /// floats.
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn powi(&self, exp: u32) -> Self {
        num::pow::pow(self.clone(), exp as usize)
    }

    fn from_count(count: &BigUint) -> Self {
        BigRational::from_integer(count.clone().into())
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn try_sin(&self) -> Result<Self> {
        Err(Error::NonPolynomial { operation: "sin" })
    }

    fn try_cos(&self) -> Result<Self> {
        Err(Error::NonPolynomial { operation: "cos" })
    }

    fn try_exp(&self) -> Result<Self> {
        Err(Error::NonPolynomial { operation: "exp" })
    }

    fn approx_matches(&self, other: &Self) -> bool {
        self == other
    }

    fn rel_error(&self, other: &Self) -> f64 {
        if self == other {
            return 0.0;
        }
        let diff = (self - other).abs();
        let scale = BigRational::from_integer(1.into())
            .max(self.abs())
            .max(other.abs());
        ToPrimitive::to_f64(&(diff / scale)).unwrap_or(f64::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_json(&self) -> Value {
        // Ratio's Display already reduces and elides unit denominators.
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        let s = v.as_str().ok_or_else(|| Error::Schema {
            context: "rational value must be a \"p/q\" string".into(),
        })?;
        s.parse::<BigRational>().map_err(|_| Error::Schema {
            context: format!("\"{s}\" is not a rational p/q"),
        })
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn powi(&self, exp: u32) -> Self {
        f64::powi(*self, exp as i32)
    }

    fn from_count(count: &BigUint) -> Self {
        count.to_f64().unwrap_or(f64::INFINITY)
    }

    fn from_rational(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn try_sin(&self) -> Result<Self> {
        Ok(f64::sin(*self))
    }

    fn try_cos(&self) -> Result<Self> {
        Ok(f64::cos(*self))
    }

    fn try_exp(&self) -> Result<Self> {
        Ok(f64::exp(*self))
    }

    fn approx_matches(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_RTOL * 1.0_f64.max(self.abs()).max(other.abs())
    }

    fn rel_error(&self, other: &Self) -> f64 {
        (self - other).abs() / 1.0_f64.max(self.abs()).max(other.abs())
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(format!("{self}")))
    }

    fn from_json(v: &Value) -> Result<Self> {
        if let Some(x) = v.as_f64() {
            return Ok(x);
        }
        Err(Error::Schema {
            context: "float value must be a JSON number".into(),
        })
    }
}
