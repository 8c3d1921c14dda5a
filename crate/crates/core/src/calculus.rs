//! The bicovariant first-order calculus on ℂ(G) attached to a subset S.
//!
//! Γ is the free module with basis `δ_g ⊗ e_s` (g ∈ G, s ∈ S). Functions act
//! on the left pointwise at `g` and on the right at `gs`, the germ map sends
//! `s ↦ e_s`, `e ↦ -Σ e_s` and everything else to zero, and
//! `dδ_g = Σ_s (δ_{gs⁻¹} − δ_g) ⊗ e_s`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_poly::{Matrix, Scalar};
use crate::group_core::{GroupElement, GroupTable, SubsetS};

/// An element of the germ space Λ¹ = span{e_s : s ∈ S}.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GermVector(pub BTreeMap<GroupElement, BigRational>);

impl GermVector {
    fn add_term(&mut self, s: GroupElement, c: BigRational) {
        let v = self.0.remove(&s).unwrap_or_else(BigRational::zero) + c;
        if !v.is_zero() {
            self.0.insert(s, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &GermVector) -> GermVector {
        let mut out = self.clone();
        for (&s, c) in &other.0 {
            out.add_term(s, c.clone());
        }
        out
    }
}

/// A ℚ-valued function on the group, indexed by element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionOnG(pub Vec<BigRational>);

impl FunctionOnG {
    pub fn delta(table: &GroupTable, g: GroupElement) -> Self {
        let mut v = vec![BigRational::zero(); table.order()];
        v[g.0] = BigRational::one();
        FunctionOnG(v)
    }

    pub fn at(&self, g: GroupElement) -> &BigRational {
        &self.0[g.0]
    }

    pub fn mul(&self, other: &FunctionOnG) -> FunctionOnG {
        FunctionOnG(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }
}

/// An element of Γ, as coefficients on `δ_g ⊗ e_s` keyed by `(g, s)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaElement(pub BTreeMap<(GroupElement, GroupElement), BigRational>);

impl GammaElement {
    fn add_term(&mut self, g: GroupElement, s: GroupElement, c: BigRational) {
        let v = self.0.remove(&(g, s)).unwrap_or_else(BigRational::zero) + c;
        if !v.is_zero() {
            self.0.insert((g, s), v);
        }
    }

    pub fn add(&self, other: &GammaElement) -> GammaElement {
        let mut out = self.clone();
        for (&(g, s), c) in &other.0 {
            out.add_term(g, s, c.clone());
        }
        out
    }

    pub fn neg(&self) -> GammaElement {
        GammaElement(self.0.iter().map(|(&k, c)| (k, -c)).collect())
    }

    pub fn sub(&self, other: &GammaElement) -> GammaElement {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// The calculus Ω¹(G) determined by (G, S).
#[derive(Clone, Copy, Debug)]
pub struct Calculus<'a> {
    pub table: &'a GroupTable,
    pub s: &'a SubsetS,
}

impl<'a> Calculus<'a> {
    pub fn new(table: &'a GroupTable, s: &'a SubsetS) -> Self {
        Calculus { table, s }
    }

    /// The germ `[g]`.
    pub fn germ(&self, g: GroupElement) -> GermVector {
        let mut out = GermVector::default();
        if self.s.contains(g) {
            out.add_term(g, BigRational::one());
        } else if g == self.table.identity() {
            for s in self.s.iter() {
                out.add_term(s, -BigRational::one());
            }
        }
        out
    }

    /// Checks `Σ_g [g] = 0` and that `[g] = 0` off `S ∪ {e}`; returns an
    /// offending element or `None`.
    pub fn germ_identity_witness(&self) -> Option<String> {
        let mut total = GermVector::default();
        for g in self.table.elements() {
            let germ = self.germ(g);
            if !germ.is_zero() && g != self.table.identity() && !self.s.contains(g) {
                return Some(format!("[{}] is nonzero", self.table.label(g)));
            }
            total = total.add(&germ);
        }
        (!total.is_zero())
            .then(|| format!("sum of germs has {} nonzero coefficients", total.0.len()))
    }

    /// The circle action of a function on germs, `[s] ∘ b = b(s) [s]`.
    pub fn circ_action(&self, theta: &GermVector, b: &FunctionOnG) -> GermVector {
        let mut out = GermVector::default();
        for (&s, c) in &theta.0 {
            out.add_term(s, c * b.at(s));
        }
        out
    }

    /// `dδ_g`.
    pub fn differential_delta(&self, g: GroupElement) -> GammaElement {
        let mut out = GammaElement::default();
        for s in self.s.iter() {
            out.add_term(self.table.mul(g, self.table.inv(s)), s, BigRational::one());
            out.add_term(g, s, -BigRational::one());
        }
        out
    }

    /// `df = Σ_{g,s} (f(gs) − f(g)) δ_g ⊗ e_s`.
    pub fn differential(&self, f: &FunctionOnG) -> GammaElement {
        let mut out = GammaElement::default();
        for g in self.table.elements() {
            for s in self.s.iter() {
                out.add_term(g, s, f.at(self.table.mul(g, s)) - f.at(g));
            }
        }
        out
    }

    /// `b · x`, pointwise at the base point.
    pub fn left_action(&self, b: &FunctionOnG, x: &GammaElement) -> GammaElement {
        let mut out = GammaElement::default();
        for (&(g, s), c) in &x.0 {
            out.add_term(g, s, c * b.at(g));
        }
        out
    }

    /// `x · b`: `(δ_g ⊗ e_s) · b = b(gs) δ_g ⊗ e_s`.
    pub fn right_action(&self, x: &GammaElement, b: &FunctionOnG) -> GammaElement {
        let mut out = GammaElement::default();
        for (&(g, s), c) in &x.0 {
            out.add_term(g, s, c * b.at(self.table.mul(g, s)));
        }
        out
    }

    /// The invariant form `Σ_s 1 ⊗ e_s` whose commutator generates `d`.
    pub fn theta(&self) -> GammaElement {
        let mut out = GammaElement::default();
        for g in self.table.elements() {
            for s in self.s.iter() {
                out.add_term(g, s, BigRational::one());
            }
        }
        out
    }

    /// `θ δ_g − δ_g θ`, which must equal `dδ_g`.
    pub fn inner_derivation(&self, g: GroupElement) -> GammaElement {
        let delta = FunctionOnG::delta(self.table, g);
        let theta = self.theta();
        self.right_action(&theta, &delta)
            .sub(&self.left_action(&delta, &theta))
    }

    /// First element whose differential differs from the inner derivation.
    pub fn inner_derivation_witness(&self) -> Option<GroupElement> {
        self.table
            .elements()
            .find(|&g| self.differential_delta(g) != self.inner_derivation(g))
    }

    /// Checks `(1 ⊗ e_s) · δ_s = δ_e ⊗ e_s` for every s.
    pub fn module_compatibility_witness(&self) -> Option<GroupElement> {
        self.s.iter().find(|&s| {
            let mut one_s = GammaElement::default();
            for g in self.table.elements() {
                one_s.add_term(g, s, BigRational::one());
            }
            let lhs = self.right_action(&one_s, &FunctionOnG::delta(self.table, s));
            let mut rhs = GammaElement::default();
            rhs.add_term(self.table.identity(), s, BigRational::one());
            lhs != rhs
        })
    }

    /// The adjoint coaction `ad(δ_g) = Σ_k δ_{kgk⁻¹} ⊗ δ_k`, as pairs.
    pub fn ad_coaction(&self, g: GroupElement) -> Vec<(GroupElement, GroupElement)> {
        self.table
            .elements()
            .map(|k| (self.table.conjugate(k, g), k))
            .collect()
    }

    /// Checks coassociativity of `ad`: `(ad ⊗ id) ad = (id ⊗ Δ) ad` on δ_g.
    pub fn ad_coaction_is_coassociative(&self, g: GroupElement) -> bool {
        let mut lhs: Vec<_> = self
            .ad_coaction(g)
            .into_iter()
            .flat_map(|(h, k)| {
                self.ad_coaction(h)
                    .into_iter()
                    .map(move |(h2, j)| (h2, j, k))
            })
            .collect();
        let mut rhs: Vec<_> = self
            .ad_coaction(g)
            .into_iter()
            .flat_map(|(h, m)| {
                self.table
                    .elements()
                    .map(move |a| (h, a, self.table.mul(self.table.inv(a), m)))
            })
            .collect();
        lhs.sort();
        rhs.sort();
        lhs == rhs
    }

    /// The braid operator `σ(g, h) = (ghg⁻¹, g)` on S × S.
    pub fn braid_sigma(
        &self,
        g: GroupElement,
        h: GroupElement,
    ) -> Result<(GroupElement, GroupElement)> {
        self.require(g)?;
        self.require(h)?;
        Ok((self.table.conjugate(g, h), g))
    }

    /// `σ⁻¹(g, h) = (h, h⁻¹gh)`.
    pub fn braid_sigma_inv(
        &self,
        g: GroupElement,
        h: GroupElement,
    ) -> Result<(GroupElement, GroupElement)> {
        self.require(g)?;
        self.require(h)?;
        Ok((h, self.table.conjugate(self.table.inv(h), g)))
    }

    fn require(&self, g: GroupElement) -> Result<()> {
        if self.s.contains(g) {
            Ok(())
        } else {
            Err(Error::NotInS(self.table.label(g).to_string()))
        }
    }

    /// σ as a permutation of pair indices `i·|S| + j`.
    pub fn sigma_permutation(&self) -> Vec<usize> {
        let n = self.s.len();
        let m = self.s.members();
        let mut out = vec![0; n * n];
        for (i, &g) in m.iter().enumerate() {
            for (j, &h) in m.iter().enumerate() {
                let (a, b) = self.braid_sigma(g, h).expect("members of S");
                out[i * n + j] = self.s.position(a).unwrap() * n + self.s.position(b).unwrap();
            }
        }
        out
    }

    /// `dim ker(id − σ)` on the span of S × S, i.e. the number of σ-orbits.
    pub fn kernel_dim_id_minus_sigma(&self) -> usize {
        let perm = self.sigma_permutation();
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
        cycles
    }

    /// `dim ker(id − σ)` from the rank of the matrix of `id − σ` over ℚ.
    pub fn kernel_dim_exact(&self) -> usize {
        let perm = self.sigma_permutation();
        let n = perm.len();
        let mut m = Matrix::identity(n);
        for (i, &j) in perm.iter().enumerate() {
            let v = m.get(j, i) - &Scalar::one();
            m.set(j, i, v);
        }
        n - m.rank()
    }

    /// Degree-two dimension of the quadratic exterior algebra: `|S|² − dim ker(id − σ)`.
    pub fn quadratic_degree2_dim(&self) -> usize {
        self.s.len() * self.s.len() - self.kernel_dim_id_minus_sigma()
    }
}
