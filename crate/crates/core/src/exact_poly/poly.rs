//! Sparse multivariate polynomials with [`Scalar`] coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Largest exponent allowed on a single variable.
pub const MAX_VAR_DEGREE: usize = 64;

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            let e = *a as usize + *b as usize;
            if e > MAX_VAR_DEGREE {
                return Err(Error::DegreeBound {
                    degree: e,
                    bound: MAX_VAR_DEGREE,
                });
            }
            out.push(e as u8);
        }
        Ok(Monomial(out))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, e)
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All monomials in `nvars` variables of total degree at most `d`, by degree
/// and then lexicographically.
pub fn monomials_up_to(nvars: usize, d: usize) -> Vec<Monomial> {
    fn rec(nvars: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if cur.len() == nvars - 1 {
            cur.push(left as u8);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u8);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return vec![Monomial(vec![])];
    }
    for deg in 0..=d {
        rec(nvars, deg, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && (self - other).is_zero()
    }
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::from_terms(nvars, [(Monomial::one(nvars), c)]).expect("shape is valid")
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let nvars = m.0.len();
        Self::from_terms(nvars, [(m, c)]).expect("shape is valid")
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            if m.0.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: m.0.len(),
                });
            }
            if let Some(&e) = m.0.iter().find(|&&e| e as usize > MAX_VAR_DEGREE) {
                return Err(Error::DegreeBound {
                    degree: e as usize,
                    bound: MAX_VAR_DEGREE,
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Scalar::is_zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Largest coefficient modulus, for float residuals.
    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_c64().norm())
            .fold(0.0, f64::max)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2)?, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::constant(self.nvars, Scalar::one());
        for _ in 0..k {
            out = out.checked_mul(self)?;
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, j: usize) -> Result<Self> {
        if j >= self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: j + 1,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[j];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[j] -= 1;
            out.add_term(m2, c * &Scalar::int(e as i64));
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| &acc * &x.pow(e as u32))
            })
            .sum())
    }

    pub fn evaluate_c64(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.to_c64(), |acc, (&e, x)| acc * x.powu(e as u32))
            })
            .sum())
    }

    /// The polynomial `y ↦ p(y·M)`, with `M` replaced by its entrywise
    /// conjugate when `conjugate` is set (the action on antiholomorphic
    /// coordinates `y = x̄`).
    pub fn act_by_matrix(&self, g: &Matrix, conjugate: bool) -> Result<Self> {
        if !g.is_square() || g.rows() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: g.rows(),
            });
        }
        let n = self.nvars;
        let g = if conjugate { g.conj() } else { g.clone() };
        // (y·M)_i = Σ_k y_k M_{k i}
        let images: Vec<MultiPoly> = (0..n)
            .map(|i| {
                Self::from_terms(
                    n,
                    (0..n).map(|k| (Monomial::var(n, k), g.get(k, i).clone())),
                )
                .expect("shape is valid")
            })
            .collect();
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|l| vec![Self::constant(n, Scalar::one()), l.clone()])
            .collect();
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let mut t = Self::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().checked_mul(&images[i])?;
                    powers[i].push(next);
                }
                t = t.checked_mul(&powers[i][e as usize])?;
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Exact quotient by a linear form, or `NotDivisible`.
    pub fn divide_by_linear(&self, l: &LinearForm) -> Result<Self> {
        if l.coeffs.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: l.coeffs.len(),
            });
        }
        let Some(pivot) = l.coeffs.iter().rposition(|c| !c.is_zero()) else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = l.coeffs[pivot].inv()?;
        let lpoly = l.to_poly();
        let mut rem = self.clone();
        let mut quotient = Self::zero(self.nvars);
        // repeatedly cancel the term with the highest power of the pivot variable
        while let Some((m, c)) = rem
            .terms
            .iter()
            .filter(|(m, _)| m.0[pivot] > 0)
            .max_by(|a, b| a.0 .0[pivot].cmp(&b.0 .0[pivot]).then_with(|| b.0.cmp(a.0)))
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            let mut qm = m;
            qm.0[pivot] -= 1;
            let qt = Self::monomial(qm, &c * &lead_inv);
            rem = rem.checked_sub(&qt.checked_mul(&lpoly)?)?;
            quotient = quotient.checked_add(&qt)?;
        }
        if !rem.is_zero() {
            return Err(Error::NotDivisible(l.to_string()));
        }
        Ok(quotient)
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs)
            .expect("polynomials in different numbers of variables")
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs)
            .expect("polynomials in different numbers of variables")
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomial product failed")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})*{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A linear form `y ↦ Σ α_i y_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub coeffs: Vec<Scalar>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        LinearForm { coeffs }
    }

    pub fn to_poly(&self) -> MultiPoly {
        let n = self.coeffs.len();
        MultiPoly::from_terms(
            n,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
        .expect("shape is valid")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Scaled so that the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Result<LinearForm> {
        let lead = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(Error::DivisionByZero)?;
        let inv = lead.inv()?;
        Ok(LinearForm {
            coeffs: self.coeffs.iter().map(|c| c * &inv).collect(),
        })
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A random polynomial with up to `nterms` monomials of total degree at most
/// `max_degree` and small rational coefficients.
pub fn random_sparse(
    nvars: usize,
    max_degree: usize,
    nterms: usize,
    rng: &mut impl Rng,
) -> MultiPoly {
    let mons = monomials_up_to(nvars, max_degree);
    let mut p = MultiPoly::zero(nvars);
    for _ in 0..nterms {
        let m = mons[rng.random_range(0..mons.len())].clone();
        let c = Scalar::ratio(rng.random_range(-9..=9), rng.random_range(1..=5));
        p.add_term(m, c);
    }
    p
}
