//! Exact arithmetic on the real quadratic field ℚ(√2).
//!
//! Every coordinate used by the branching systems lives here: the rotation
//! angle θ = √2 − 1, interval endpoints, and the images of points under the
//! piecewise-affine maps. Values are stored as `a + b·√2` with arbitrary
//! precision rationals, so equality and order are decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QFieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse `{0}` as an element of Q(sqrt 2)")]
    Parse(String),
}

/// An element `a + b·√2` of ℚ(√2).
///
/// The representation is unique: `a + b√2 = 0` iff `a = b = 0`, so the derived
/// `Eq` and `Hash` agree with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QNum {
    a: BigRational,
    b: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QNum {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QNum { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        QNum { a, b: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        QNum::from_rational(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        QNum::from_rational(rat(n, d))
    }

    pub fn zero() -> Self {
        QNum::default()
    }

    pub fn one() -> Self {
        QNum::from_int(1)
    }

    pub fn sqrt2() -> Self {
        QNum::new(BigRational::zero(), BigRational::one())
    }

    /// The rotation angle θ = √2 − 1 ∈ (0, 1).
    pub fn theta() -> Self {
        QNum::new(int(-1), int(1))
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of √2. Nonzero exactly when the value is irrational.
    pub fn sqrt2_coeff(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn conjugate(&self) -> Self {
        QNum::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 2b²`; zero only for zero.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - int(2) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self, QFieldError> {
        if self.is_zero() {
            return Err(QFieldError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QNum::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &QNum) -> Result<Self, QFieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QNum::new(&self.a * k, &self.b * k)
    }

    pub fn add_rational(&self, k: &BigRational) -> Self {
        QNum::new(&self.a + k, self.b.clone())
    }

    /// Exact sign, decided by comparing `a²` against `2b²` when the parts disagree.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (sa, _) => {
                // a and b have opposite signs: sign(a + b√2) = sign(a) * sign(a² - 2b²)
                let n = self.norm().cmp(&BigRational::zero());
                if sa == Ordering::Greater {
                    n
                } else {
                    n.reverse()
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Rational enclosure `lo ≤ self ≤ hi` using the `k`-th convergent pair of √2.
    pub fn bounds(&self, k: usize) -> (BigRational, BigRational) {
        let (lo2, hi2) = sqrt2_bounds(k);
        if self.b.is_negative() {
            (&self.a + &self.b * &hi2, &self.a + &self.b * &lo2)
        } else {
            (&self.a + &self.b * &lo2, &self.a + &self.b * &hi2)
        }
    }

    /// Largest integer `n` with `n ≤ self`.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        let (lo, hi) = self.bounds(4);
        let mut low = lo.floor().to_integer();
        let mut high = hi.floor().to_integer() + BigInt::one();
        // invariant: low ≤ self < high
        while &high - &low > BigInt::one() {
            let mid: BigInt = (&low + &high).div_floor(&BigInt::from(2));
            if QNum::from_rational(BigRational::from_integer(mid.clone())) <= *self {
                low = mid;
            } else {
                high = mid;
            }
        }
        low
    }

    /// `self − floor(self)`, the representative in `[0, 1)`.
    pub fn mod1(&self) -> Self {
        let f = BigRational::from_integer(self.floor());
        QNum::new(&self.a - f, self.b.clone())
    }

    /// A rational `q` with `lo < q < hi`. Requires `lo < hi`.
    pub fn rational_strictly_between(lo: &QNum, hi: &QNum) -> BigRational {
        assert!(lo < hi, "empty interval");
        if let (Some(l), Some(h)) = (lo.as_rational(), hi.as_rational()) {
            return (l + h) / int(2);
        }
        let mut k = 2;
        loop {
            let (_, lo_up) = lo.bounds(k);
            let (hi_down, _) = hi.bounds(k);
            if lo_up < hi_down {
                return (lo_up + hi_down) / int(2);
            }
            k += 2;
        }
    }

    /// Midpoint, exact.
    pub fn midpoint(lo: &QNum, hi: &QNum) -> QNum {
        (lo + hi).scale(&rat(1, 2))
    }

    /// Rough floating-point value, for display only.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

/// Convergent bounds `lo ≤ √2 ≤ hi` from the continued fraction [1; 2, 2, ...].
fn sqrt2_bounds(k: usize) -> (BigRational, BigRational) {
    let mut p = BigInt::one();
    let mut q = BigInt::one();
    let mut below = BigRational::new(p.clone(), q.clone());
    let mut above = int(2);
    for _ in 0..(2 * k + 2) {
        let np = &p + BigInt::from(2) * &q;
        let nq = &p + &q;
        p = np;
        q = nq;
        let c = BigRational::new(p.clone(), q.clone());
        if &p * &p < BigInt::from(2) * &q * &q {
            below = c;
        } else {
            above = c;
        }
    }
    (below, above)
}

impl Ord for QNum {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b == other.b {
            return self.a.cmp(&other.a);
        }
        if let Some(o) = coarse_cmp(self, other) {
            return o;
        }
        (self - other).signum()
    }
}

/// Float comparison, trusted only when the gap dwarfs any rounding error.
fn coarse_cmp(x: &QNum, y: &QNum) -> Option<Ordering> {
    use num_traits::ToPrimitive;
    let fx = x.a.to_f64()? + x.b.to_f64()? * std::f64::consts::SQRT_2;
    let fy = y.a.to_f64()? + y.b.to_f64()? * std::f64::consts::SQRT_2;
    let scale = x.a.to_f64()?.abs() + x.b.to_f64()?.abs() + y.a.to_f64()?.abs() + y.b.to_f64()?.abs();
    if !fx.is_finite() || !fy.is_finite() || !scale.is_finite() || (fx - fy).abs() <= 1e-9 * (scale + 1.0) {
        return None;
    }
    fx.partial_cmp(&fy)
}

impl PartialOrd for QNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<BigRational> for QNum {
    fn from(a: BigRational) -> Self {
        QNum::from_rational(a)
    }
}

impl From<i64> for QNum {
    fn from(n: i64) -> Self {
        QNum::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, |$l:ident, $r:ident| $body:expr) => {
        impl $tr<&QNum> for &QNum {
            type Output = QNum;
            fn $method(self, rhs: &QNum) -> QNum {
                let $l = self;
                let $r = rhs;
                $body
            }
        }
        impl $tr<QNum> for QNum {
            type Output = QNum;
            fn $method(self, rhs: QNum) -> QNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QNum> for QNum {
            type Output = QNum;
            fn $method(self, rhs: &QNum) -> QNum {
                (&self).$method(rhs)
            }
        }
        impl $tr<QNum> for &QNum {
            type Output = QNum;
            fn $method(self, rhs: QNum) -> QNum {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |l, r| QNum::new(&l.a + &r.a, &l.b + &r.b));
forward_binop!(Sub, sub, |l, r| QNum::new(&l.a - &r.a, &l.b - &r.b));
forward_binop!(Mul, mul, |l, r| QNum::new(
    &l.a * &r.a + int(2) * &l.b * &r.b,
    &l.a * &r.b + &l.b * &r.a
));

impl Neg for QNum {
    type Output = QNum;
    fn neg(self) -> QNum {
        QNum::new(-self.a, -self.b)
    }
}

impl Neg for &QNum {
    type Output = QNum;
    fn neg(self) -> QNum {
        QNum::new(-self.a.clone(), -self.b.clone())
    }
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&fmt_rational(r))
}

pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, QFieldError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.strip_prefix('+').unwrap_or(&t);
    if t.is_empty() {
        return Err(QFieldError::Parse(s.to_string()));
    }
    let r: BigRational = t.parse().map_err(|_| QFieldError::Parse(s.to_string()))?;
    Ok(r)
}

impl fmt::Display for QNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&fmt_rational(&self.a));
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{} {} {} r2", fmt_rational(&self.a), sign, fmt_rational(&self.b.abs()))
    }
}

impl fmt::Debug for QNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QNum({self})")
    }
}

impl FromStr for QNum {
    type Err = QFieldError;

    /// Accepts `"p/q"`, `"p/q r2"` and `"p/q + r/s r2"` / `"p/q - r/s r2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let Some(body) = t.strip_suffix("r2") else {
            return Ok(QNum::from_rational(parse_rational(t)?));
        };
        let body = body.trim_end();
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        match split {
            Some(i) => {
                let a = parse_rational(&body[..i])?;
                let mut b = parse_rational(&body[i + 1..])?;
                if &body[i..=i] == "-" {
                    b = -b;
                }
                Ok(QNum::new(a, b))
            }
            None if body.is_empty() => Ok(QNum::sqrt2()),
            None => Ok(QNum::new(BigRational::zero(), parse_rational(body)?)),
        }
    }
}

impl Serialize for QNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
