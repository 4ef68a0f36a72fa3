//! Exact arithmetic in Q(√5) written in the basis {1, φ}.
//!
//! A [`GoldenNumber`] is stored as a normalized triple `(a, b, d)` meaning
//! `(a + bφ) / d` with `d > 0` and `gcd(a, b, d) = 1`. Small values live in
//! `i128` and every operation falls back to big integers on overflow, so the
//! representation is canonical and values compare equal iff their rational
//! coordinates do.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Short alias used throughout the geometry code.
pub type G = GoldenNumber;

/// Arbitrary-precision reduced rational.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoldenError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse golden number from {0:?}")]
    Parse(String),
}

#[derive(Clone, Debug)]
enum Repr {
    Small(i128, i128, i128),
    Big(BigInt, BigInt, BigInt),
}

/// Exact element `a + bφ` of Q(√5), φ = (1+√5)/2.
#[derive(Clone, Debug)]
pub struct GoldenNumber(Repr);

const SMALL_LIMIT: i128 = 1 << 62;

fn fits(v: i128) -> bool {
    (-SMALL_LIMIT..=SMALL_LIMIT).contains(&v)
}

fn gcd3(a: i128, b: i128, d: i128) -> i128 {
    a.gcd(&b).gcd(&d)
}

impl GoldenNumber {
    fn small(a: i128, b: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        let (mut a, mut b, mut d) = (a, b, d);
        if d < 0 {
            a = -a;
            b = -b;
            d = -d;
        }
        let g = gcd3(a, b, d);
        if g > 1 {
            a /= g;
            b /= g;
            d /= g;
        }
        if a == 0 && b == 0 {
            d = 1;
        }
        GoldenNumber(Repr::Small(a, b, d))
    }

    fn big(a: BigInt, b: BigInt, d: BigInt) -> Self {
        let (mut a, mut b, mut d) = (a, b, d);
        if d.is_negative() {
            a = -a;
            b = -b;
            d = -d;
        }
        if a.is_zero() && b.is_zero() {
            return GoldenNumber(Repr::Small(0, 0, 1));
        }
        let g = a.gcd(&b).gcd(&d);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            d /= &g;
        }
        match (a.to_i128(), b.to_i128(), d.to_i128()) {
            (Some(x), Some(y), Some(z)) if fits(x) && fits(y) && fits(z) => {
                GoldenNumber(Repr::Small(x, y, z))
            }
            _ => GoldenNumber(Repr::Big(a, b, d)),
        }
    }

    fn parts_big(&self) -> (BigInt, BigInt, BigInt) {
        match &self.0 {
            Repr::Small(a, b, d) => (BigInt::from(*a), BigInt::from(*b), BigInt::from(*d)),
            Repr::Big(a, b, d) => (a.clone(), b.clone(), d.clone()),
        }
    }

    pub fn zero() -> Self {
        GoldenNumber(Repr::Small(0, 0, 1))
    }

    pub fn one() -> Self {
        GoldenNumber(Repr::Small(1, 0, 1))
    }

    /// The golden ratio φ.
    pub fn phi() -> Self {
        GoldenNumber(Repr::Small(0, 1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        GoldenNumber(Repr::Small(n as i128, 0, 1))
    }

    /// `(a + bφ) / d` from machine integers.
    pub fn from_parts(a: i64, b: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::small(a as i128, b as i128, d as i128)
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_parts(n, 0, d)
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::big(n.clone(), BigInt::zero(), BigInt::one())
    }

    pub fn from_rationals(a: &Rational, b: &Rational) -> Self {
        let d = a.denom().lcm(b.denom());
        let an = a.numer() * (&d / a.denom());
        let bn = b.numer() * (&d / b.denom());
        Self::big(an, bn, d)
    }

    /// Rational coordinate on 1.
    pub fn a(&self) -> Rational {
        let (a, _, d) = self.parts_big();
        Rational::new(a, d)
    }

    /// Rational coordinate on φ.
    pub fn b(&self) -> Rational {
        let (_, b, d) = self.parts_big();
        Rational::new(b, d)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, 0, _))
    }

    pub fn is_rational(&self) -> bool {
        match &self.0 {
            Repr::Small(_, b, _) => *b == 0,
            Repr::Big(_, b, _) => b.is_zero(),
        }
    }

    /// Image under φ ↦ 1 − φ.
    pub fn conjugate(&self) -> Self {
        match &self.0 {
            Repr::Small(a, b, d) => Self::small(a + b, -b, *d),
            Repr::Big(a, b, d) => Self::big(a + b, -b.clone(), d.clone()),
        }
    }

    /// Field norm x·x̄ = a² + ab − b², a rational number.
    pub fn norm(&self) -> Rational {
        let (a, b, d) = self.parts_big();
        Rational::new(&a * &a + &a * &b - &b * &b, &d * &d)
    }

    pub fn inverse(&self) -> Result<Self, GoldenError> {
        if self.is_zero() {
            return Err(GoldenError::DivisionByZero);
        }
        // 1/x = d·x̄ / (a² + ab − b²) for x = (a + bφ)/d
        if let Repr::Small(a, b, d) = self.0 {
            let n = a
                .checked_mul(a)
                .and_then(|aa| a.checked_mul(b).and_then(|ab| aa.checked_add(ab)))
                .and_then(|s| b.checked_mul(b).and_then(|bb| s.checked_sub(bb)));
            let ca = (a + b).checked_mul(d);
            let cb = (-b).checked_mul(d);
            if let (Some(n), Some(ca), Some(cb)) = (n, ca, cb) {
                return Ok(Self::small(ca, cb, n));
            }
        }
        let (a, b, d) = self.parts_big();
        let n = &a * &a + &a * &b - &b * &b;
        Ok(Self::big((&a + &b) * &d, -(&b) * &d, n))
    }

    /// Exact sign of the real value.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(a, b, _) => {
                // value·2d = (2a + b) + b√5
                let p = 2 * a + b;
                let q = *b;
                let sp = p.signum() as i32;
                let sq = q.signum() as i32;
                if sp == 0 {
                    return sq;
                }
                if sq == 0 || sp == sq {
                    return sp;
                }
                match (
                    p.checked_mul(p),
                    q.checked_mul(q).and_then(|qq| qq.checked_mul(5)),
                ) {
                    (Some(pp), Some(qq5)) => match pp.cmp(&qq5) {
                        Ordering::Greater => sp,
                        Ordering::Less => sq,
                        Ordering::Equal => 0,
                    },
                    _ => big_sign(&BigInt::from(p), &BigInt::from(q)),
                }
            }
            Repr::Big(a, b, _) => big_sign(&(BigInt::from(2) * a + b), b),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Double-precision approximation, for display and float seeds only.
    pub fn to_f64(&self) -> f64 {
        const PHI: f64 = 1.618_033_988_749_895;
        match &self.0 {
            Repr::Small(a, b, d) => (*a as f64 + *b as f64 * PHI) / *d as f64,
            Repr::Big(..) => {
                let a = self.a().to_f64().unwrap_or(f64::NAN);
                let b = self.b().to_f64().unwrap_or(f64::NAN);
                a + b * PHI
            }
        }
    }

    /// Exact floor, seeded by a float estimate and certified by sign tests.
    pub fn floor(&self) -> BigInt {
        let est = self.to_f64().floor();
        let mut n = if est.is_finite() && est.abs() < 1e15 {
            BigInt::from(est as i64)
        } else {
            let a = self.a();
            let b = self.b();
            // φ < 2 gives a coarse bracket when the float overflows
            (a + b * Rational::from_integer(BigInt::from(16180339887u64))
                / Rational::from_integer(BigInt::from(10000000000u64)))
            .floor()
            .to_integer()
        };
        loop {
            let lo = self - &GoldenNumber::from_bigint(&n);
            if lo.signum() < 0 {
                n -= 1;
                continue;
            }
            let hi = &lo - &GoldenNumber::one();
            if hi.signum() >= 0 {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Floor as a machine integer; panics if it does not fit.
    pub fn floor_i64(&self) -> i64 {
        self.floor().to_i64().expect("floor out of i64 range")
    }

    /// True when the value is an integer.
    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, b, d) => *b == 0 && *d == 1,
            Repr::Big(_, b, d) => b.is_zero() && d.is_one(),
        }
    }

    /// Serialization as `a_num/a_den b_num/b_den`.
    pub fn to_serial(&self) -> String {
        let a = self.a();
        let b = self.b();
        format!("{}/{} {}/{}", a.numer(), a.denom(), b.numer(), b.denom())
    }

    pub fn parse_serial(s: &str) -> Result<Self, GoldenError> {
        let err = || GoldenError::Parse(s.to_string());
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(err());
        }
        let a = parse_rational(parts[0]).ok_or_else(err)?;
        let b = parse_rational(parts[1]).ok_or_else(err)?;
        Ok(Self::from_rationals(&a, &b))
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
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

fn big_sign(p: &BigInt, q: &BigInt) -> i32 {
    let sp = sgn(p);
    let sq = sgn(q);
    if sp == 0 {
        return sq;
    }
    if sq == 0 || sp == sq {
        return sp;
    }
    match (p * p).cmp(&(q * q * 5)) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => 0,
    }
}

fn sgn(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of the value: −1, 0 or +1.
pub fn sign(x: &GoldenNumber) -> i32 {
    x.signum()
}

pub fn compare(x: &GoldenNumber, y: &GoldenNumber) -> Ordering {
    x.cmp(y)
}

impl PartialEq for GoldenNumber {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b, d), Repr::Small(x, y, z)) => a == x && b == y && d == z,
            (Repr::Big(a, b, d), Repr::Big(x, y, z)) => a == x && b == y && d == z,
            _ => false,
        }
    }
}

impl Eq for GoldenNumber {}

impl Hash for GoldenNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let (a, b, d) = self.parts_big();
        a.hash(state);
        b.hash(state);
        d.hash(state);
    }
}

impl PartialOrd for GoldenNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.a();
        let b = self.b();
        if b.is_zero() {
            return write!(f, "{}", a);
        }
        let bs = if b.is_one() {
            "φ".to_string()
        } else if b == -Rational::one() {
            "-φ".to_string()
        } else {
            format!("{}φ", b)
        };
        if a.is_zero() {
            write!(f, "{}", bs)
        } else if b.is_negative() {
            write!(f, "{} - {}", a, bs.trim_start_matches('-'))
        } else {
            write!(f, "{} + {}", a, bs)
        }
    }
}

impl FromStr for GoldenNumber {
    type Err = GoldenError;

    /// Accepts the four-integer serialization or a plain rational.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.split_whitespace().count() == 2 {
            return Self::parse_serial(t);
        }
        parse_rational(t)
            .map(|r| Self::from_rationals(&r, &Rational::zero()))
            .ok_or_else(|| GoldenError::Parse(s.to_string()))
    }
}

fn add_impl(x: &GoldenNumber, y: &GoldenNumber, negate: bool) -> GoldenNumber {
    if let (Repr::Small(a, b, d), Repr::Small(p, q, r)) = (&x.0, &y.0) {
        let (p, q) = if negate { (-p, -q) } else { (*p, *q) };
        if d == r {
            return GoldenNumber::small(a + p, b + q, *d);
        }
        let t = (|| {
            let na = a.checked_mul(*r)?.checked_add(p.checked_mul(*d)?)?;
            let nb = b.checked_mul(*r)?.checked_add(q.checked_mul(*d)?)?;
            let nd = d.checked_mul(*r)?;
            Some((na, nb, nd))
        })();
        if let Some((na, nb, nd)) = t {
            return GoldenNumber::small(na, nb, nd);
        }
    }
    let (a, b, d) = x.parts_big();
    let (mut p, mut q, r) = y.parts_big();
    if negate {
        p = -p;
        q = -q;
    }
    GoldenNumber::big(&a * &r + &p * &d, &b * &r + &q * &d, &d * &r)
}

fn mul_impl(x: &GoldenNumber, y: &GoldenNumber) -> GoldenNumber {
    if let (Repr::Small(a, b, d), Repr::Small(p, q, r)) = (&x.0, &y.0) {
        let t = (|| {
            let bq = b.checked_mul(*q)?;
            let na = a.checked_mul(*p)?.checked_add(bq)?;
            let nb = a
                .checked_mul(*q)?
                .checked_add(p.checked_mul(*b)?)?
                .checked_add(bq)?;
            let nd = d.checked_mul(*r)?;
            Some((na, nb, nd))
        })();
        if let Some((na, nb, nd)) = t {
            return GoldenNumber::small(na, nb, nd);
        }
    }
    let (a, b, d) = x.parts_big();
    let (p, q, r) = y.parts_big();
    let bq = &b * &q;
    GoldenNumber::big(&a * &p + &bq, &a * &q + &p * &b + &bq, &d * &r)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&GoldenNumber> for &GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: &GoldenNumber) -> GoldenNumber {
                $body(self, rhs)
            }
        }
        impl $tr<GoldenNumber> for GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: GoldenNumber) -> GoldenNumber {
                $body(&self, &rhs)
            }
        }
        impl $tr<&GoldenNumber> for GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: &GoldenNumber) -> GoldenNumber {
                $body(&self, rhs)
            }
        }
        impl $tr<GoldenNumber> for &GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: GoldenNumber) -> GoldenNumber {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |x, y| add_impl(x, y, false));
binop!(Sub, sub, |x, y| add_impl(x, y, true));
binop!(Mul, mul, mul_impl);
binop!(Div, div, |x: &GoldenNumber, y: &GoldenNumber| mul_impl(
    x,
    &y.inverse().expect("division by zero")
));

impl Neg for GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        -&self
    }
}

impl Neg for &GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        match &self.0 {
            Repr::Small(a, b, d) => GoldenNumber(Repr::Small(-a, -b, *d)),
            Repr::Big(a, b, d) => GoldenNumber(Repr::Big(-a, -b, d.clone())),
        }
    }
}

impl Default for GoldenNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for GoldenNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// Shorthand for `a + bφ` with integer coefficients.
pub fn g(a: i64, b: i64) -> GoldenNumber {
    GoldenNumber::from_parts(a, b, 1)
}

/// Shorthand for `(a + bφ) / d`.
pub fn gq(a: i64, b: i64, d: i64) -> GoldenNumber {
    GoldenNumber::from_parts(a, b, d)
}
