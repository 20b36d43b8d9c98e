//! Exact rationals, points of the projective line and factored rational
//! functions of one variable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q`; panics when `q == 0`.
    pub fn frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Rat) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &other.0))
    }

    /// Integer power; negative exponents of zero are an error.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mag = e.unsigned_abs();
        let mut base = if e < 0 { self.0.recip() } else { self.0.clone() };
        let mut acc = BigRational::one();
        let mut k = mag;
        while k > 0 {
            if k & 1 == 1 {
                acc *= &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(Rat(acc))
    }

    /// `(-1)^e`.
    pub fn sign_pow(e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            Rat::one()
        } else {
            Rat::from_int(-1)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            let l = self.ln_abs();
            let s = if self.is_negative() { -1.0 } else { 1.0 };
            s * l.exp()
        })
    }

    /// `ln|self|`, accurate even when numerator or denominator overflow `f64`.
    pub fn ln_abs(&self) -> f64 {
        ln_bigint(self.0.numer()) - ln_bigint(self.0.denom())
    }

    /// Principal complex logarithm as `(re, im)`; `im` is `0` or `pi`.
    pub fn ln_complex(&self) -> (f64, f64) {
        let im = if self.is_negative() { std::f64::consts::PI } else { 0.0 };
        (self.ln_abs(), im)
    }

    /// Height used to order candidate base points: `max(|p|, q)`, then `q`,
    /// positive before negative.
    fn height_key(&self) -> (BigInt, BigInt, bool) {
        let p = self.numer().abs();
        let q = self.denom().clone();
        (if p > q { p } else { q.clone() }, q, self.is_negative())
    }
}

fn ln_bigint(n: &BigInt) -> f64 {
    let n = n.abs();
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = &n >> shift;
    top.to_f64().unwrap().ln() + (shift as f64) * std::f64::consts::LN_2
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat(BigRational::new(p, q)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                Rat($tr::$m(&self.0, &o.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                Rat($tr::$m(self.0, o.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                Rat($tr::$m(self.0, &o.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

// Division panics on zero like the underlying type; use `checked_div` when
// the divisor may vanish.
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// Point of the projective line over the rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum P1Point {
    Finite(Rat),
    Infinity,
}

impl P1Point {
    pub fn finite(r: impl Into<Rat>) -> Self {
        P1Point::Finite(r.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, P1Point::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            P1Point::Finite(r) => Some(r),
            P1Point::Infinity => None,
        }
    }
}

/// Finite points in increasing order, infinity last.
impl Ord for P1Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (P1Point::Finite(a), P1Point::Finite(b)) => a.cmp(b),
            (P1Point::Finite(_), P1Point::Infinity) => Ordering::Less,
            (P1Point::Infinity, P1Point::Finite(_)) => Ordering::Greater,
            (P1Point::Infinity, P1Point::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for P1Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(r) => write!(f, "{r}"),
            P1Point::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for P1Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(P1Point::Infinity),
            t => Ok(P1Point::Finite(t.parse()?)),
        }
    }
}

impl Serialize for P1Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for P1Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `constant * prod (x - root)^exp` with distinct roots and nonzero exponents.
///
/// Factors are kept sorted by root so equal functions compare equal.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FactoredFunction1D {
    constant: Rat,
    factors: Vec<(Rat, i64)>,
}

impl FactoredFunction1D {
    /// Validates: nonzero constant, distinct roots, nonzero exponents.
    pub fn new(constant: Rat, factors: Vec<(Rat, i64)>) -> Result<Self> {
        if constant.is_zero() {
            return Err(Error::Invalid("constant must be nonzero".into()));
        }
        let mut factors = factors;
        if let Some((r, _)) = factors.iter().find(|(_, e)| *e == 0) {
            return Err(Error::Invalid(format!("zero exponent at root {r}")));
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid(format!("duplicate root {}", w[0].0)));
            }
        }
        Ok(FactoredFunction1D { constant, factors })
    }

    pub fn constant_fn(c: Rat) -> Result<Self> {
        Self::new(c, Vec::new())
    }

    /// The coordinate function `x`.
    pub fn identity() -> Self {
        Self::new(Rat::one(), vec![(Rat::zero(), 1)]).unwrap()
    }

    pub fn constant(&self) -> &Rat {
        &self.constant
    }

    pub fn factors(&self) -> &[(Rat, i64)] {
        &self.factors
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// Order of vanishing at `p`; at infinity this is minus the degree.
    pub fn order_at(&self, p: &P1Point) -> i64 {
        match p {
            P1Point::Infinity => -self.degree(),
            P1Point::Finite(a) => self
                .factors
                .iter()
                .find(|(r, _)| r == a)
                .map_or(0, |(_, e)| *e),
        }
    }

    /// Value at `p` of `f / t^ord`, where `t = x - a` at a finite point and
    /// `t = 1/x` at infinity.
    pub fn unit_part_at(&self, p: &P1Point) -> Rat {
        match p {
            P1Point::Infinity => self.constant.clone(),
            P1Point::Finite(a) => {
                let mut v = self.constant.clone();
                for (r, e) in &self.factors {
                    if r != a {
                        v = v * (a - r).pow(*e).expect("distinct roots");
                    }
                }
                v
            }
        }
    }

    /// Value at a finite point away from zeros and poles.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let mut v = self.constant.clone();
        for (r, e) in &self.factors {
            let d = x - r;
            if d.is_zero() {
                return Err(Error::PoleOrZero(x.to_string()));
            }
            v = v * d.pow(*e)?;
        }
        Ok(v)
    }

    /// Zeros and poles: finite ones ascending, then infinity when the degree
    /// is nonzero.
    pub fn divisor_support(&self) -> Vec<P1Point> {
        let mut out: Vec<P1Point> = self
            .factors
            .iter()
            .map(|(r, _)| P1Point::Finite(r.clone()))
            .collect();
        if self.degree() != 0 {
            out.push(P1Point::Infinity);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut fs = self.factors.clone();
        for (r, e) in &other.factors {
            match fs.iter_mut().find(|(s, _)| s == r) {
                Some(slot) => slot.1 += e,
                None => fs.push((r.clone(), *e)),
            }
        }
        fs.retain(|(_, e)| *e != 0);
        Self::new(&self.constant * &other.constant, fs).expect("product stays valid")
    }

    pub fn pow(&self, n: i64) -> Self {
        if n == 0 {
            return Self::constant_fn(Rat::one()).unwrap();
        }
        let fs = self.factors.iter().map(|(r, e)| (r.clone(), e * n)).collect();
        Self::new(self.constant.pow(n).expect("nonzero constant"), fs).unwrap()
    }

    /// Rewrites the function in the coordinate `s` with `x = c + 1/s`.
    ///
    /// The point `c` moves to infinity, infinity moves to `0`, and a root `a`
    /// moves to `1/(a - c)`.
    pub fn substitute_inverse(&self, c: &Rat) -> Self {
        let mut constant = self.constant.clone();
        let mut fs = Vec::with_capacity(self.factors.len() + 1);
        for (a, e) in &self.factors {
            if a == c {
                // (x - c) = 1/s
                fs.push((Rat::zero(), -e));
                continue;
            }
            constant = constant * (c - a).pow(*e).unwrap();
            fs.push(((a - c).recip().unwrap(), *e));
            fs.push((Rat::zero(), -e));
        }
        let mut merged: Vec<(Rat, i64)> = Vec::new();
        for (r, e) in fs {
            match merged.iter_mut().find(|(s, _)| *s == r) {
                Some(slot) => slot.1 += e,
                None => merged.push((r, e)),
            }
        }
        merged.retain(|(_, e)| *e != 0);
        Self::new(constant, merged).unwrap()
    }
}

/// Image of a point under `x = c + 1/s`.
pub fn substitute_point(p: &P1Point, c: &Rat) -> P1Point {
    match p {
        P1Point::Infinity => P1Point::Finite(Rat::zero()),
        P1Point::Finite(a) if a == c => P1Point::Infinity,
        P1Point::Finite(a) => P1Point::Finite((a - c).recip().unwrap()),
    }
}

/// Rationals in order of increasing height: `0, 1, -1, 2, -2, 1/2, -1/2, ...`.
pub fn small_height_rationals() -> impl Iterator<Item = Rat> {
    (1i64..).flat_map(|h| {
        let mut v: Vec<Rat> = Vec::new();
        if h == 1 {
            v.push(Rat::zero());
        }
        for q in 1..=h {
            for p in 0..=h {
                if num_integer::gcd(p, q) != 1 || (p != h && q != h) || p == 0 {
                    continue;
                }
                v.push(Rat::frac(p, q));
                v.push(Rat::frac(-p, q));
            }
        }
        v.sort_by(|a, b| a.height_key().cmp(&b.height_key()));
        v.dedup();
        v.into_iter()
    })
}

/// First rational of small height outside `avoid`.
pub fn smallest_rational_avoiding(avoid: &[Rat]) -> Rat {
    small_height_rationals()
        .find(|r| !avoid.contains(r))
        .expect("infinitely many rationals")
}
