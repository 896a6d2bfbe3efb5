//! Exact arithmetic in a real quadratic field `Q(√d)`.
//!
//! Every coordinate, length and shear parameter in the crate is a [`QuadExt`].
//! Values are kept in canonical form (reduced rationals, positive
//! denominators), so structural equality is value equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default field parameter.
pub const DEFAULT_D: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field mismatch: Q(√{0}) vs Q(√{1})")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("d = {0} is not a square-free integer ≥ 2")]
    NotSquareFree(u64),
    #[error("cannot parse {0:?} as a field element")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `a + b√d` with `a`, `b` rational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    d: u32,
}

pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn check_d(d: u64) -> Result<u32, FieldError> {
    if is_square_free(d) && d <= u32::MAX as u64 {
        Ok(d as u32)
    } else {
        Err(FieldError::NotSquareFree(d))
    }
}

impl QuadExt {
    /// Builds `a + b√d`. `BigRational` is always reduced, so the value is
    /// already canonical.
    pub fn new(a: BigRational, b: BigRational, d: u32) -> Result<Self, FieldError> {
        let d = check_d(d as u64)?;
        Ok(QuadExt { a, b, d })
    }

    // Callers guarantee `d` came from an existing value.
    fn raw(a: BigRational, b: BigRational, d: u32) -> Self {
        QuadExt { a, b, d }
    }

    pub fn from_int(n: i64, d: u32) -> Self {
        Self::raw(BigRational::from_integer(n.into()), BigRational::zero(), d)
    }

    pub fn from_ratio(p: i64, q: i64, d: u32) -> Self {
        Self::raw(BigRational::new(p.into(), q.into()), BigRational::zero(), d)
    }

    pub fn from_rational(a: BigRational, d: u32) -> Self {
        Self::raw(a, BigRational::zero(), d)
    }

    /// `√d` itself.
    pub fn sqrt_d(d: u32) -> Self {
        Self::raw(BigRational::zero(), BigRational::one(), d)
    }

    pub fn zero(d: u32) -> Self {
        Self::from_int(0, d)
    }

    pub fn one(d: u32) -> Self {
        Self::from_int(1, d)
    }

    /// Same field as `self`, integer value.
    pub fn int(&self, n: i64) -> Self {
        Self::from_int(n, self.d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign of `a + b√d`.
    pub fn sign(&self) -> i8 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        // Opposite signs: compare a² with b²d.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.into());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn conjugate(&self) -> Self {
        Self::raw(self.a.clone(), -self.b.clone(), self.d)
    }

    /// `a² − b²d`, the field norm.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.into())
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.d, other.d))
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.same_field(rhs)?;
        Ok(Self::raw(&self.a + &rhs.a, &self.b + &rhs.b, self.d))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.same_field(rhs)?;
        Ok(Self::raw(&self.a - &rhs.a, &self.b - &rhs.b, self.d))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.same_field(rhs)?;
        let d = BigRational::from_integer(self.d.into());
        let a = &self.a * &rhs.a + &self.b * &rhs.b * d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(Self::raw(a, b, self.d))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.same_field(rhs)?;
        let inv = rhs.try_recip()?;
        self.try_mul(&inv)
    }

    pub fn try_recip(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // 1/(a + b√d) = (a − b√d)/(a² − b²d); the norm is nonzero since √d ∉ Q.
        let n = self.norm();
        Ok(Self::raw(&self.a / &n, -(&self.b / &n), self.d))
    }

    /// Largest integer `≤ self`.
    pub fn floor(&self) -> BigInt {
        let approx = self.to_f64().floor();
        let mut k: BigInt = if approx.is_finite() {
            BigInt::from(approx as i64)
        } else {
            BigInt::zero()
        };
        // Correct the float guess exactly.
        loop {
            let kq = Self::from_rational(BigRational::from_integer(k.clone()), self.d);
            if (self - &kq).sign() < 0 {
                k -= 1;
                continue;
            }
            let k1 = Self::from_rational(BigRational::from_integer(&k + 1), self.d);
            if (self - &k1).sign() >= 0 {
                k += 1;
                continue;
            }
            return k;
        }
    }
}

fn rat_sign(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Checked dispatch over the four field operations.
pub fn arith(lhs: &QuadExt, rhs: &QuadExt, op: ArithOp) -> Result<QuadExt, FieldError> {
    match op {
        ArithOp::Add => lhs.try_add(rhs),
        ArithOp::Sub => lhs.try_sub(rhs),
        ArithOp::Mul => lhs.try_mul(rhs),
        ArithOp::Div => lhs.try_div(rhs),
    }
}

// The operator impls panic on mismatched fields. Within a surface every value
// shares one `d`, which is checked once when the surface is built.
macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                self.$checked(rhs).expect("quadratic field operation")
            }
        }
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$checked(&rhs).expect("quadratic field operation")
            }
        }
        impl $tr<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$checked(rhs).expect("quadratic field operation")
            }
        }
        impl $tr<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$checked(&rhs).expect("quadratic field operation")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::raw(-self.a.clone(), -self.b.clone(), self.d)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

// Values over different fields are incomparable, which `Ord` cannot express.
#[allow(clippy::non_canonical_partial_ord_impl)]
impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.d != other.d {
            return None;
        }
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    /// Panics when the fields differ.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rat(s: &str) -> Result<BigRational, FieldError> {
    let err = || FieldError::Parse(s.to_string());
    let s = s.trim();
    let (n, q) = match s.split_once('/') {
        Some((n, q)) => (n.trim(), q.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let q: BigInt = q.parse().map_err(|_| err())?;
    if q.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, q))
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadExt {
    /// Renders in the `a+b√d` grammar accepted by [`FromStr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = if self.a.denom().is_one() {
            self.a.numer().to_string()
        } else {
            fmt_rat(&self.a)
        };
        if self.b.is_zero() {
            return write!(f, "{}", a);
        }
        let babs = self.b.abs();
        let b = if babs.is_one() {
            String::new()
        } else if babs.denom().is_one() {
            babs.numer().to_string()
        } else {
            fmt_rat(&babs)
        };
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{}{}√{}", lead, b, self.d)
        } else {
            write!(f, "{}{}{}√{}", a, sign, b, self.d)
        }
    }
}

impl FromStr for QuadExt {
    type Err = FieldError;

    /// Parses `a`, `b√d`, `a+b√d` or `a-b√d` with rationals written `p/q`.
    /// `sqrt(d)` is accepted as a spelling of `√d`. A bare rational lands in
    /// `Q(√2)`.
    fn from_str(input: &str) -> Result<Self, FieldError> {
        let err = || FieldError::Parse(input.to_string());
        let s: String = input
            .replace("sqrt(", "√")
            .replace(')', "")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if s.is_empty() {
            return Err(err());
        }
        let Some(root) = s.find('√') else {
            return Ok(QuadExt::from_rational(parse_rat(&s)?, DEFAULT_D));
        };
        let d_str = &s[root + '√'.len_utf8()..];
        let d: u64 = d_str.parse().map_err(|_| err())?;
        let d = check_d(d)?;
        let head = &s[..root];
        // Split `head` into the rational part and the coefficient of √d at the
        // last sign that is not the leading one.
        let split = head
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let a = parse_rat(a_str)?;
        let b = match b_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rat(other.trim_start_matches('+'))?,
        };
        Ok(QuadExt::raw(a, b, d))
    }
}

#[derive(Serialize, Deserialize)]
struct QuadExtRepr {
    a: String,
    b: String,
    d: u64,
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QuadExtRepr {
            a: fmt_rat(&self.a),
            b: fmt_rat(&self.b),
            d: self.d as u64,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = QuadExtRepr::deserialize(deserializer)?;
        let d = check_d(repr.d).map_err(de::Error::custom)?;
        let a = parse_rat(&repr.a).map_err(de::Error::custom)?;
        let b = parse_rat(&repr.b).map_err(de::Error::custom)?;
        Ok(QuadExt::raw(a, b, d))
    }
}

/// `x mod modulus`, in `[0, modulus)` for positive `modulus`.
pub fn rem_euclid(x: &QuadExt, modulus: &QuadExt) -> QuadExt {
    let q = (x / modulus).floor();
    let qv = QuadExt::from_rational(BigRational::from_integer(q), x.d());
    x - &(modulus * &qv)
}
