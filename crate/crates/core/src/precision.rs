//! Configurable-precision real scalars.
//!
//! Every numeric pipeline in this crate is written once against [`PScalar`]
//! and run either in native double precision or in MPFR arithmetic carrying a
//! requested number of significant decimal digits. The precision is an
//! explicit [`PrecisionLevel`] value threaded through every call; there is no
//! ambient global precision.
//!
//! Mixing operands from different levels is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::model::GeomParams;
use crate::Error;

/// Smallest digit count accepted for the decimal mode.
pub const MIN_DECIMAL_DIGITS: u32 = 20;

/// Extra mantissa bits carried on top of `ceil(P·log2 10)`.
const GUARD_BITS: u32 = 8;

/// Arithmetic mode: native binary64 or MPFR with `P` significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrecisionLevel {
    DoubleNative,
    Decimal(u32),
}

impl PrecisionLevel {
    /// Validated constructor for the decimal mode.
    pub fn decimal(digits: u32) -> Result<Self, Error> {
        if digits < MIN_DECIMAL_DIGITS {
            return Err(Error::Precision(format!(
                "decimal precision needs at least {MIN_DECIMAL_DIGITS} digits, got {digits}"
            )));
        }
        Ok(PrecisionLevel::Decimal(digits))
    }

    /// Effective significant decimal digits (16 for binary64).
    pub fn digits(self) -> u32 {
        match self {
            PrecisionLevel::DoubleNative => 16,
            PrecisionLevel::Decimal(p) => p,
        }
    }

    /// MPFR mantissa bits used for the decimal mode.
    pub fn bits(self) -> u32 {
        match self {
            PrecisionLevel::DoubleNative => 53,
            PrecisionLevel::Decimal(p) => ((p as f64) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS,
        }
    }

    /// `10^(k - P)` as an `f64`, the shape of every precision-tied tolerance.
    pub fn tol(self, k: i32) -> f64 {
        10f64.powi(k - self.digits() as i32)
    }

    /// Same tolerance as a scalar at this level (no underflow at high `P`).
    pub fn tol_scalar(self, k: i32) -> PScalar {
        PScalar::from_int(10, self).powi(k - self.digits() as i32)
    }

    pub fn is_native(self) -> bool {
        matches!(self, PrecisionLevel::DoubleNative)
    }
}

impl fmt::Display for PrecisionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrecisionLevel::DoubleNative => f.write_str("native"),
            PrecisionLevel::Decimal(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for PrecisionLevel {
    type Err = Error;

    /// Parses the `--digits` flag: `native` or a digit count.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("native") || s.eq_ignore_ascii_case("dp") {
            return Ok(PrecisionLevel::DoubleNative);
        }
        let p: u32 = s
            .parse()
            .map_err(|_| Error::Precision(format!("invalid precision '{s}'")))?;
        PrecisionLevel::decimal(p)
    }
}

/// A real number evaluated under a [`PrecisionLevel`].
#[derive(Clone, PartialEq)]
pub enum PScalar {
    Native(f64),
    Mp(Float),
}

impl fmt::Debug for PScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl fmt::Display for PScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

macro_rules! mismatch {
    () => {
        panic!("mixed-precision arithmetic between native and decimal scalars")
    };
}

impl PScalar {
    pub fn zero(level: PrecisionLevel) -> Self {
        Self::from_int(0, level)
    }

    pub fn one(level: PrecisionLevel) -> Self {
        Self::from_int(1, level)
    }

    pub fn from_int(v: i64, level: PrecisionLevel) -> Self {
        match level {
            PrecisionLevel::DoubleNative => PScalar::Native(v as f64),
            PrecisionLevel::Decimal(_) => PScalar::Mp(Float::with_val(level.bits(), v)),
        }
    }

    /// Widens an `f64` exactly (binary64 values are representable at every decimal level).
    pub fn from_f64(v: f64, level: PrecisionLevel) -> Self {
        match level {
            PrecisionLevel::DoubleNative => PScalar::Native(v),
            PrecisionLevel::Decimal(_) => PScalar::Mp(Float::with_val(level.bits(), v)),
        }
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(r: &Rational, level: PrecisionLevel) -> Self {
        match level {
            PrecisionLevel::DoubleNative => PScalar::Native(Float::with_val(53, r).to_f64()),
            PrecisionLevel::Decimal(_) => PScalar::Mp(Float::with_val(level.bits(), r)),
        }
    }

    /// π at the level's precision.
    pub fn pi(level: PrecisionLevel) -> Self {
        match level {
            PrecisionLevel::DoubleNative => PScalar::Native(std::f64::consts::PI),
            PrecisionLevel::Decimal(_) => PScalar::Mp(Float::with_val(level.bits(), rug::float::Constant::Pi)),
        }
    }

    /// Parses a decimal literal (`0.3196`, `-1.5e-3`) with correct rounding at the level.
    pub fn parse_decimal(s: &str, level: PrecisionLevel) -> Result<Self, Error> {
        let r = parse_decimal_rational(s)?;
        Ok(Self::from_rational(&r, level))
    }

    pub fn level(&self) -> PrecisionLevel {
        match self {
            PScalar::Native(_) => PrecisionLevel::DoubleNative,
            PScalar::Mp(x) => {
                let bits = x.prec();
                let p = (((bits - GUARD_BITS) as f64) / std::f64::consts::LOG2_10).floor() as u32;
                PrecisionLevel::Decimal(p)
            }
        }
    }

    /// A constant at the same precision as `self`.
    pub fn lit(&self, v: f64) -> Self {
        match self {
            PScalar::Native(_) => PScalar::Native(v),
            PScalar::Mp(x) => PScalar::Mp(Float::with_val(x.prec(), v)),
        }
    }

    pub fn zero_like(&self) -> Self {
        self.lit(0.0)
    }

    pub fn one_like(&self) -> Self {
        self.lit(1.0)
    }

    /// Nearest binary64 value.
    pub fn to_f64(&self) -> f64 {
        match self {
            PScalar::Native(v) => *v,
            PScalar::Mp(x) => x.to_f64_round(Round::Nearest),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PScalar::Native(v) => *v == 0.0,
            PScalar::Mp(x) => x.is_zero(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            PScalar::Native(v) => v.is_finite(),
            PScalar::Mp(x) => x.is_finite(),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            PScalar::Native(v) => PScalar::Native(v.abs()),
            PScalar::Mp(x) => PScalar::Mp(x.clone().abs()),
        }
    }

    pub fn sqrt(&self) -> Self {
        match self {
            PScalar::Native(v) => PScalar::Native(v.sqrt()),
            PScalar::Mp(x) => PScalar::Mp(x.clone().sqrt()),
        }
    }

    pub fn sin(&self) -> Self {
        match self {
            PScalar::Native(v) => PScalar::Native(v.sin()),
            PScalar::Mp(x) => PScalar::Mp(x.clone().sin()),
        }
    }

    pub fn cos(&self) -> Self {
        match self {
            PScalar::Native(v) => PScalar::Native(v.cos()),
            PScalar::Mp(x) => PScalar::Mp(x.clone().cos()),
        }
    }

    pub fn atan2(&self, other: &PScalar) -> Self {
        match (self, other) {
            (PScalar::Native(y), PScalar::Native(x)) => PScalar::Native(y.atan2(*x)),
            (PScalar::Mp(y), PScalar::Mp(x)) => PScalar::Mp(y.clone().atan2(x)),
            _ => mismatch!(),
        }
    }

    pub fn powi(&self, n: i32) -> Self {
        match self {
            PScalar::Native(v) => PScalar::Native(v.powi(n)),
            PScalar::Mp(x) => PScalar::Mp(x.clone().pow(n)),
        }
    }

    pub fn square(&self) -> Self {
        self.clone() * self
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn signum(&self) -> Self {
        if self.is_sign_negative() {
            self.lit(-1.0)
        } else {
            self.lit(1.0)
        }
    }

    pub fn is_sign_negative(&self) -> bool {
        match self {
            PScalar::Native(v) => *v < 0.0,
            PScalar::Mp(x) => x.is_sign_negative() && !x.is_zero(),
        }
    }

    /// Full-precision decimal string: 17 significant digits for binary64,
    /// `P` digits for the decimal mode.
    pub fn to_decimal_string(&self) -> String {
        match self {
            PScalar::Native(v) => format!("{v:.16e}"),
            PScalar::Mp(x) => {
                let p = self.level().digits() as usize;
                if x.is_zero() {
                    return "0".to_string();
                }
                x.to_string_radix(10, Some(p))
            }
        }
    }

    /// Decimal string with `sig` significant digits, for human-readable tables.
    pub fn to_short_string(&self, sig: usize) -> String {
        match self {
            PScalar::Native(v) => format!("{:.*e}", sig.saturating_sub(1), v),
            PScalar::Mp(x) => x.to_string_radix(10, Some(sig)),
        }
    }

    /// Rounds to a new precision level (used only for reporting and cross-level comparison).
    pub fn convert(&self, level: PrecisionLevel) -> Self {
        match (self, level) {
            (PScalar::Native(v), _) => PScalar::from_f64(*v, level),
            (PScalar::Mp(x), PrecisionLevel::DoubleNative) => PScalar::Native(x.to_f64()),
            (PScalar::Mp(x), PrecisionLevel::Decimal(_)) => PScalar::Mp(Float::with_val(level.bits(), x)),
        }
    }
}

/// Parses a decimal literal into an exact rational.
pub fn parse_decimal_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("invalid decimal literal '{s}'"));
    let t = s.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let num = rug::Integer::from_str_radix(if all.is_empty() { "0" } else { &all }, 10).map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = rug::Integer::from(10);
    let mut r = Rational::from(num);
    if scale >= 0 {
        r *= Rational::from(ten.pow(scale as u32));
    } else {
        r /= Rational::from(ten.pow((-scale) as u32));
    }
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Evaluates an arithmetic expression over geometry symbols at the given level.
pub fn eval_expr(expr: &str, env: &GeomParams, level: PrecisionLevel) -> Result<PScalar, Error> {
    let parsed = Expr::parse(expr)?;
    parsed.eval(env, level)
}

impl PartialOrd for PScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (PScalar::Native(a), PScalar::Native(b)) => a.partial_cmp(b),
            (PScalar::Mp(a), PScalar::Mp(b)) => a.partial_cmp(b),
            _ => mismatch!(),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $tra:ident, $amethod:ident, $op:tt, $aop:tt) => {
        impl $tr<&PScalar> for PScalar {
            type Output = PScalar;
            fn $method(self, rhs: &PScalar) -> PScalar {
                match (self, rhs) {
                    (PScalar::Native(a), PScalar::Native(b)) => PScalar::Native(a $op b),
                    (PScalar::Mp(a), PScalar::Mp(b)) => {
                        debug_assert_eq!(a.prec(), b.prec(), "mixed decimal precisions");
                        PScalar::Mp(a $op b)
                    }
                    _ => mismatch!(),
                }
            }
        }
        impl $tr<PScalar> for PScalar {
            type Output = PScalar;
            fn $method(self, rhs: PScalar) -> PScalar {
                self $op &rhs
            }
        }
        impl $tr<&PScalar> for &PScalar {
            type Output = PScalar;
            fn $method(self, rhs: &PScalar) -> PScalar {
                self.clone() $op rhs
            }
        }
        impl $tr<PScalar> for &PScalar {
            type Output = PScalar;
            fn $method(self, rhs: PScalar) -> PScalar {
                self.clone() $op &rhs
            }
        }
        impl $tra<&PScalar> for PScalar {
            fn $amethod(&mut self, rhs: &PScalar) {
                match (self, rhs) {
                    (PScalar::Native(a), PScalar::Native(b)) => *a $aop *b,
                    (PScalar::Mp(a), PScalar::Mp(b)) => {
                        debug_assert_eq!(a.prec(), b.prec(), "mixed decimal precisions");
                        *a $aop b
                    }
                    _ => mismatch!(),
                }
            }
        }
        impl $tra<PScalar> for PScalar {
            fn $amethod(&mut self, rhs: PScalar) {
                <PScalar as $tra<&PScalar>>::$amethod(self, &rhs)
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +, +=);
binop!(Sub, sub, SubAssign, sub_assign, -, -=);
binop!(Mul, mul, MulAssign, mul_assign, *, *=);
binop!(Div, div, DivAssign, div_assign, /, /=);

impl Neg for PScalar {
    type Output = PScalar;
    fn neg(self) -> PScalar {
        match self {
            PScalar::Native(a) => PScalar::Native(-a),
            PScalar::Mp(a) => PScalar::Mp(-a),
        }
    }
}

impl Neg for &PScalar {
    type Output = PScalar;
    fn neg(self) -> PScalar {
        -self.clone()
    }
}
