//! Exact arithmetic in cyclotomic fields ℚ(ζ_m).
//!
//! An element is stored as coefficients on the power basis `1, ζ, …, ζ^{φ(m)-1}`,
//! always reduced modulo the cyclotomic polynomial Φ_m. Elements of different
//! conductors are compared and combined in ℚ(ζ_L) with `L = lcm(m, m')`, using
//! `ζ_m = ζ_L^{L/m}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

struct FieldData {
    degree: usize,
    phi: Vec<BigInt>,
    /// `powers[k]` is ζ^k reduced mod Φ_m, for `k < m`.
    powers: Vec<Vec<BigInt>>,
}

fn field(m: u32) -> Arc<FieldData> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.lock().unwrap().get(&m) {
        return d.clone();
    }
    let phi = cyclotomic_polynomial(m);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![BigInt::zero(); degree];
    cur[0] = BigInt::one();
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x, then reduce using the monic Φ_m
        let top = cur[degree - 1].clone();
        for i in (1..degree).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for (i, c) in cur.iter_mut().enumerate() {
                *c -= &top * &phi[i];
            }
        }
    }
    let data = Arc::new(FieldData {
        degree,
        phi,
        powers,
    });
    cache.lock().unwrap().insert(m, data.clone());
    data
}

/// Coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1);
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut q = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

/// An element of ℚ(ζ_m).
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    m: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    /// Builds `Σ v[k] ζ_m^k` for an arbitrary-length coefficient list.
    pub fn from_powers(m: u32, v: &[BigRational]) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let f = field(m);
        let mut coeffs = vec![BigRational::zero(); f.degree];
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in f.powers[k % m as usize].iter().enumerate() {
                if !p.is_zero() {
                    coeffs[i] += c * BigRational::from_integer(p.clone());
                }
            }
        }
        Cyclotomic { m, coeffs }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic {
            m: 1,
            coeffs: vec![q],
        }
    }

    /// ζ_m^k.
    pub fn root_of_unity(m: u32, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        Self::from_powers(m, &v)
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    /// Coefficients on the power basis of ℚ(ζ_m).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The same element written in ℚ(ζ_l); `l` must be a multiple of the conductor.
    pub fn lift(&self, l: u32) -> Self {
        assert!(
            l.is_multiple_of(self.m),
            "cannot lift conductor {} to {}",
            self.m,
            l
        );
        if l == self.m {
            return self.clone();
        }
        let step = (l / self.m) as usize;
        let mut v = vec![BigRational::zero(); step * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Self::from_powers(l, &v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.m.lcm(&other.m);
        (self.lift(l), other.lift(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.common(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let m = a.m as usize;
        let mut v = vec![BigRational::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[(i + j) % m] += x * y;
                }
            }
        }
        Self::from_powers(a.m, &v)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Complex conjugation, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let m = self.m as usize;
        let mut v = vec![BigRational::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[(m - k) % m] += c;
        }
        Self::from_powers(self.m, &v)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_m.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = field(self.m);
        let phi: Vec<BigRational> = f
            .phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let a = trim(self.coeffs.clone());
        // invariant: s * a ≡ r (mod Φ)
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !(r1.len() == 1 && !r1[0].is_zero()) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.iter().all(Zero::is_zero) {
                // Φ_m is irreducible, so this only happens for a zero input
                return Err(Error::DivisionByZero);
            }
        }
        let c = r1[0].clone();
        let s: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        Ok(Self::from_powers(self.m, &s))
    }

    pub fn to_c64(&self) -> Complex64 {
        let m = self.m as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let t = std::f64::consts::TAU * k as f64 / m;
                Complex64::new(t.cos(), t.sin()) * rational_to_f64(c)
            })
            .sum()
    }

    pub fn equals(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        let (n, d) = (
            q.numer().to_f64().unwrap_or(f64::NAN),
            q.denom().to_f64().unwrap_or(f64::NAN),
        );
        n / d
    })
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (i, y) in b.iter().enumerate() {
            r[k + i] -= &c * y;
        }
        q[k] = c;
    }
    (trim(q), trim(r))
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

/// Formats as `cyc<m>:[c0,c1,...]`, or `a+b*i` in ℚ(i).
impl std::fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        if self.m == 4 {
            let (a, b) = (&self.coeffs[0], &self.coeffs[1]);
            let unit = if b.is_one() {
                "i".to_string()
            } else if (-b).is_one() {
                "-i".to_string()
            } else {
                format!("{b}*i")
            };
            return if a.is_zero() {
                write!(f, "{unit}")
            } else if b.is_negative() {
                write!(f, "{a}{unit}")
            } else {
                write!(f, "{a}+{unit}")
            };
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "cyc{}:[{}]", self.m, parts.join(","))
    }
}
