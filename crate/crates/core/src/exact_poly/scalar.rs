//! The coefficient field: rationals, cyclotomic numbers, or complex floats.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cyclotomic::{rational_to_f64, Cyclotomic};
use crate::error::{Error, Result};

/// Absolute tolerance below which a float scalar counts as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-10;

/// A field element. Exact variants never silently become floats: mixing an
/// exact value with a float yields a float, and everything else stays exact.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(BigRational),
    /// Never rational: results that land in ℚ are demoted to `Rat`.
    Cyc(Cyclotomic),
    Float(Complex64),
}

/// The field a configuration computes in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarKind {
    Rational,
    Cyclotomic(u32),
    Float,
}

impl FromStr for ScalarKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(ScalarKind::Rational),
            "gaussian" => Ok(ScalarKind::Cyclotomic(4)),
            "float" => Ok(ScalarKind::Float),
            _ => s
                .strip_prefix("cyclotomic:")
                .and_then(|m| m.parse::<u32>().ok())
                .filter(|&m| m >= 1)
                .map(ScalarKind::Cyclotomic)
                .ok_or_else(|| Error::Parse(format!("unknown scalar field {s:?}"))),
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rat(BigRational::new(n.into(), d.into()))
    }

    pub fn root_of_unity(m: u32, k: i64) -> Self {
        Self::from_cyc(Cyclotomic::root_of_unity(m, k))
    }

    pub fn float(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    fn from_cyc(c: Cyclotomic) -> Self {
        match c.as_rational() {
            Some(q) => Scalar::Rat(q),
            None => Scalar::Cyc(c),
        }
    }

    fn as_cyc(&self) -> Option<Cyclotomic> {
        match self {
            Scalar::Rat(q) => Some(Cyclotomic::from_rational(q.clone())),
            Scalar::Cyc(c) => Some(c.clone()),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Cyc(c) => c.is_zero(),
            Scalar::Float(z) => z.norm() <= FLOAT_ZERO_TOL,
        }
    }

    pub fn is_one(&self) -> bool {
        (self - &Scalar::one()).is_zero()
    }

    /// Conductor of the smallest cyclotomic field used by this representation.
    pub fn conductor(&self) -> u32 {
        match self {
            Scalar::Cyc(c) => c.conductor(),
            _ => 1,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Rat(q) => Complex64::new(rational_to_f64(q), 0.0),
            Scalar::Cyc(c) => c.to_c64(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(q) => Some(q),
            _ => None,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Cyc(c) => Self::from_cyc(c.conj()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
            Scalar::Cyc(c) => Self::from_cyc(c.inv()?),
            Scalar::Float(z) => Scalar::Float(z.inv()),
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Scalar::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Coordinates in ℚ(ζ_l), for hashing exact values; `l` must be a
    /// multiple of the conductor.
    pub fn key(&self, l: u32) -> Vec<BigRational> {
        match self {
            Scalar::Rat(q) => Cyclotomic::from_rational(q.clone())
                .lift(l)
                .coeffs()
                .to_vec(),
            Scalar::Cyc(c) => c.lift(l).coeffs().to_vec(),
            Scalar::Float(_) => panic!("float scalars have no exact key"),
        }
    }

    /// Converts into the requested field; exact values pass through unchanged
    /// unless the target is float.
    pub fn into_kind(self, kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Float => Scalar::Float(self.to_c64()),
            _ => self,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self.as_cyc(), other.as_cyc()) {
            (Some(a), Some(b)) => match (self, other) {
                (Scalar::Rat(x), Scalar::Rat(y)) => x == y,
                _ => a == b,
            },
            _ => (self.to_c64() - other.to_c64()).norm() <= FLOAT_ZERO_TOL,
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => {
                Scalar::Float(self.to_c64() + rhs.to_c64())
            }
            _ => Scalar::from_cyc(self.as_cyc().unwrap().add(&rhs.as_cyc().unwrap())),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Cyc(c) => Scalar::Cyc(c.neg()),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => self + &(-rhs),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => {
                Scalar::Float(self.to_c64() * rhs.to_c64())
            }
            (Scalar::Rat(q), Scalar::Cyc(c)) | (Scalar::Cyc(c), Scalar::Rat(q)) => {
                Scalar::from_cyc(c.scale(q))
            }
            (Scalar::Cyc(a), Scalar::Cyc(b)) => Scalar::from_cyc(a.mul(b)),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar { (&self).$f(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| &a + &b)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rat(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

fn fmt_f64(x: f64) -> String {
    // `{:?}` is the shortest round-trip representation
    format!("{x:?}")
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => write!(f, "{q}"),
            Scalar::Cyc(c) => write!(f, "{c}"),
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", fmt_f64(z.re))
                } else if z.im < 0.0 {
                    write!(f, "{}{}*i", fmt_f64(z.re), fmt_f64(z.im))
                } else {
                    write!(f, "{}+{}*i", fmt_f64(z.re), fmt_f64(z.im))
                }
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
            serde_json::Value::Number(n) => n.to_string().parse().map_err(D::Error::custom),
            other => Err(D::Error::custom(format!(
                "expected a scalar, found {other}"
            ))),
        }
    }
}

/// Recursive-descent parser for scalar expressions such as `3/4`,
/// `1/2-1/2*i`, `1/2*z8-1/2*z8^3`, `2.5`, or `cyc8:[0,1/2,0,-1/2]`.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at position {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Scalar> {
        if self.src.starts_with(b"cyc") && self.src.contains(&b':') {
            return self.coefficient_list();
        }
        let v = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(v)
    }

    fn coefficient_list(self) -> Result<Scalar> {
        let s = std::str::from_utf8(self.src).map_err(|_| self.err("invalid utf-8"))?;
        let (head, tail) = s.split_once(':').ok_or_else(|| self.err("missing ':'"))?;
        let m: u32 = head[3..]
            .trim()
            .parse()
            .map_err(|_| self.err("bad conductor"))?;
        let body = tail
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'));
        let body = body.ok_or_else(|| self.err("expected [..]"))?;
        let mut v = Vec::new();
        for part in body.split(',').filter(|p| !p.trim().is_empty()) {
            match part.parse::<Scalar>()? {
                Scalar::Rat(q) => v.push(q),
                _ => return Err(self.err("coefficients must be rational")),
            }
        }
        if m == 0 {
            return Err(self.err("conductor must be positive"));
        }
        Ok(Scalar::from_cyc(Cyclotomic::from_powers(m, &v)))
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    acc = acc.div(&d).map_err(|_| self.err("division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let k = self.digits()?;
            let k: u32 = k.parse().map_err(|_| self.err("bad exponent"))?;
            let p = base.pow(k);
            return if neg {
                p.inv().map_err(|_| self.err("division by zero"))
            } else {
                Ok(p)
            };
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Scalar::root_of_unity(4, 1))
            }
            Some(b'z') => {
                self.pos += 1;
                let m: u32 = self
                    .digits()?
                    .parse()
                    .map_err(|_| self.err("bad conductor"))?;
                if m == 0 {
                    return Err(self.err("conductor must be positive"));
                }
                Ok(Scalar::root_of_unity(m, 1))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            _ => Err(self.err("expected a number, 'i', 'zN' or '('")),
        }
    }

    fn number(&mut self) -> Result<Scalar> {
        let int = if self.src[self.pos] == b'.' {
            String::new()
        } else {
            self.digits()?
        };
        let mut value = BigRational::from_integer(int.parse::<BigInt>().unwrap_or_default());
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let frac = &self.src[start..self.pos];
            if !frac.is_empty() {
                let f: BigInt = String::from_utf8_lossy(frac).parse().unwrap();
                let den = num_traits::pow(BigInt::from(10), frac.len());
                value += BigRational::new(f, den);
            }
        }
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            self.pos += 1;
            let neg = match self.src.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let e: usize = self
                .digits()?
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            let p = BigRational::from_integer(num_traits::pow(BigInt::from(10), e));
            value = if neg { value / p } else { value * p };
        }
        Ok(Scalar::Rat(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(p("3/4"), Scalar::ratio(3, 4));
        assert_eq!(p("-0.25"), Scalar::ratio(-1, 4));
        assert_eq!(p("2e-1"), Scalar::ratio(1, 5));
        assert_eq!(p(" 1 + 1/2 "), Scalar::ratio(3, 2));
    }

    #[test]
    fn parses_roots_of_unity() {
        let i = p("i");
        assert_eq!(&i * &i, Scalar::int(-1));
        let h = p("1/2*z8 - 1/2*z8^3");
        assert_eq!(&h * &h, Scalar::ratio(1, 2));
        assert_eq!(p("z3^3"), Scalar::one());
        assert_eq!(p("z3^-1"), p("z3^2"));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "3/4",
            "1/2-1/2*i",
            "-i",
            "cyc3:[0,1]",
            "cyc8:[0,1/2,0,-1/2]",
        ] {
            let v = p(s);
            assert_eq!(v.to_string(), s, "display of {s}");
            assert_eq!(p(&v.to_string()), v);
        }
    }

    #[test]
    fn rational_results_are_demoted() {
        let w = p("z3");
        let s = &(&w + &w.conj()) + &Scalar::one();
        assert!(matches!(s, Scalar::Rat(_)));
        assert!(s.is_zero());
    }

    #[test]
    fn float_mixing() {
        let x = &Scalar::float(0.5, 0.0) + &Scalar::ratio(1, 2);
        assert!(matches!(x, Scalar::Float(_)));
        assert_eq!(x, Scalar::one());
    }

    #[test]
    fn scalar_kind_names() {
        assert_eq!(
            "gaussian".parse::<ScalarKind>().unwrap(),
            ScalarKind::Cyclotomic(4)
        );
        assert_eq!(
            "cyclotomic:8".parse::<ScalarKind>().unwrap(),
            ScalarKind::Cyclotomic(8)
        );
        assert!("octonion".parse::<ScalarKind>().is_err());
    }
}
