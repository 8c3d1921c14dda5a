//! Cyclic Dunkl operators acting exactly on polynomials.
//!
//! `D_j p = ∂_j p + Σ_{s∈S} ν(s) (α_s)_j (p − p_s) / L_s`, where
//! `L_s(y) = Σ_i (α_s)_i y_i` and `p_s(y) = p(y·M_s)`. In real mode `M_s` is
//! the representing matrix of s; in complex mode the variables are the
//! antiholomorphic coordinates `y = x̄` and `M_s` is its entrywise conjugate.
//! Divisibility needs `α_s` in the column space of `M_s − I`, which is the
//! eigenline of s written as a row vector.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_poly::{monomials_up_to, LinearForm, Matrix, Monomial, MultiPoly, Scalar};
use crate::group_core::{GroupElement, GroupTable, SubsetS};

/// Largest total degree `commutator_check` accepts.
pub const MAX_COMMUTATOR_DEGREE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Real,
    Complex,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Real => "real",
            Mode::Complex => "complex",
        })
    }
}

/// A reflection with its root and multiplicity.
#[derive(Clone, Debug)]
pub struct ReflectionDatum {
    pub element: GroupElement,
    pub root: LinearForm,
    pub multiplicity: Scalar,
}

/// Everything needed to apply the operators `D_1, …, D_n`.
#[derive(Clone, Debug)]
pub struct DunklConfig {
    table: GroupTable,
    s: SubsetS,
    mode: Mode,
    nvars: usize,
    data: Vec<ReflectionDatum>,
    subst: Vec<Matrix>,
}

/// The substitution matrix of `g` in the given mode.
fn substitution(table: &GroupTable, g: GroupElement, mode: Mode) -> Result<Matrix> {
    let m = table.rep(g)?;
    Ok(match mode {
        Mode::Real => m.clone(),
        Mode::Complex => m.conj(),
    })
}

/// The root of `s` read off from `M_s − I`, scaled so its first nonzero entry is 1.
pub fn default_root(table: &GroupTable, s: GroupElement, mode: Mode) -> Result<LinearForm> {
    let m = substitution(table, s, mode)?;
    let n = m.rows();
    let d = m.sub(&Matrix::identity(n))?;
    let rank = d.rank();
    if rank != 1 {
        return Err(Error::NotAReflection {
            element: table.label(s).to_string(),
            rank,
        });
    }
    let col = (0..n)
        .map(|j| d.column(j))
        .find(|c| c.iter().any(|v| !v.is_zero()))
        .expect("rank one");
    LinearForm::new(col).normalized()
}

impl DunklConfig {
    /// `roots` and `nu` are indexed like `s.members()`; missing roots are
    /// derived from the reflections. Multiplicities must be constant on
    /// conjugacy classes unless `allow_nonconstant` is set.
    pub fn new(
        table: GroupTable,
        s: SubsetS,
        roots: Option<Vec<LinearForm>>,
        nu: Vec<Scalar>,
        mode: Mode,
        allow_nonconstant: bool,
    ) -> Result<Self> {
        let nvars = table.rep_dim()?;
        if nu.len() != s.len() {
            return Err(Error::DimensionMismatch {
                expected: s.len(),
                found: nu.len(),
            });
        }
        if let Some(r) = &roots {
            if r.len() != s.len() {
                return Err(Error::DimensionMismatch {
                    expected: s.len(),
                    found: r.len(),
                });
            }
        }
        let mut data = Vec::with_capacity(s.len());
        let mut subst = Vec::with_capacity(s.len());
        for (i, el) in s.iter().enumerate() {
            let m = substitution(&table, el, mode)?;
            let d = m.sub(&Matrix::identity(nvars))?;
            let rank = d.rank();
            if rank != 1 {
                return Err(Error::NotAReflection {
                    element: table.label(el).to_string(),
                    rank,
                });
            }
            let root = match &roots {
                None => default_root(&table, el, mode)?,
                Some(r) => {
                    let a = &r[i];
                    if a.coeffs.len() != nvars {
                        return Err(Error::DimensionMismatch {
                            expected: nvars,
                            found: a.coeffs.len(),
                        });
                    }
                    let mut rows: Vec<Vec<Scalar>> = (0..nvars).map(|k| d.row(k)).collect();
                    for (row, c) in rows.iter_mut().zip(&a.coeffs) {
                        row.push(c.clone());
                    }
                    if a.is_zero() || Matrix::from_rows(rows)?.rank() != 1 {
                        return Err(Error::Config(format!(
                            "root {a} of {} is not proportional to its eigenline",
                            table.label(el)
                        )));
                    }
                    a.clone()
                }
            };
            data.push(ReflectionDatum {
                element: el,
                root,
                multiplicity: nu[i].clone(),
            });
            subst.push(m);
        }
        if !allow_nonconstant {
            for (i, el) in s.iter().enumerate() {
                for g in table.elements() {
                    let j = s
                        .position(table.conjugate(g, el))
                        .expect("S is conjugation-stable");
                    if nu[j] != nu[i] {
                        return Err(Error::NonConstantMultiplicity(table.label(el).to_string()));
                    }
                }
            }
        }
        Ok(DunklConfig {
            table,
            s,
            mode,
            nvars,
            data,
            subst,
        })
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn s(&self) -> &SubsetS {
        &self.s
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn data(&self) -> &[ReflectionDatum] {
        &self.data
    }

    /// The same configuration with every multiplicity replaced.
    pub fn with_multiplicities(&self, nu: Vec<Scalar>) -> Result<Self> {
        assert_eq!(nu.len(), self.data.len());
        let mut out = self.clone();
        for (d, v) in out.data.iter_mut().zip(nu) {
            d.multiplicity = v;
        }
        Ok(out)
    }

    fn check_poly(&self, p: &MultiPoly) -> Result<()> {
        if p.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: p.nvars(),
            });
        }
        Ok(())
    }

    /// `(p − p_s) / L_s` for the i-th reflection.
    pub fn difference_quotient(&self, i: usize, p: &MultiPoly) -> Result<MultiPoly> {
        self.check_poly(p)?;
        let ps = p.act_by_matrix(&self.subst[i], false)?;
        p.checked_sub(&ps)?.divide_by_linear(&self.data[i].root)
    }

    /// `(D_1 p, …, D_n p)`, sharing the difference quotients.
    pub fn gradient(&self, p: &MultiPoly) -> Result<Vec<MultiPoly>> {
        self.check_poly(p)?;
        let quotients: Vec<MultiPoly> = (0..self.data.len())
            .map(|i| self.difference_quotient(i, p))
            .collect::<Result<_>>()?;
        (0..self.nvars)
            .map(|j| {
                let mut out = p.partial_derivative(j)?;
                for (d, q) in self.data.iter().zip(&quotients) {
                    let c = &d.multiplicity * &d.root.coeffs[j];
                    if !c.is_zero() {
                        out = out.checked_add(&q.scale(&c))?;
                    }
                }
                Ok(out)
            })
            .collect()
    }

    /// `D_j p`.
    pub fn apply(&self, j: usize, p: &MultiPoly) -> Result<MultiPoly> {
        if j >= self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: j + 1,
            });
        }
        Ok(self.gradient(p)?.swap_remove(j))
    }

    /// Checks `D_j (p∘M_g) = Σ_k (M_g)_{jk} (D_k p)∘M_g` for every g; returns
    /// the first failing element and index.
    pub fn equivariance_witness(&self, p: &MultiPoly) -> Result<Option<(GroupElement, usize)>> {
        let grad = self.gradient(p)?;
        for g in self.table.elements() {
            let m = substitution(&self.table, g, self.mode)?;
            let lhs = self.gradient(&p.act_by_matrix(&m, false)?)?;
            let moved: Vec<MultiPoly> = grad
                .iter()
                .map(|q| q.act_by_matrix(&m, false))
                .collect::<Result<_>>()?;
            for (j, l) in lhs.iter().enumerate() {
                let mut rhs = MultiPoly::zero(self.nvars);
                for (k, q) in moved.iter().enumerate() {
                    rhs = rhs.checked_add(&q.scale(m.get(j, k)))?;
                }
                if *l != rhs {
                    return Ok(Some((g, j)));
                }
            }
        }
        Ok(None)
    }
}

/// A nonzero commutator found by [`commutator_check`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CommutatorFailure {
    pub monomial: String,
    pub j: usize,
    pub k: usize,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CommutatorReport {
    pub degree: usize,
    pub monomials: usize,
    pub pairs: usize,
    /// Largest coefficient modulus among all commutators.
    pub max_residual: f64,
    pub failure_count: usize,
    /// The first few failures, in monomial order.
    pub failures: Vec<CommutatorFailure>,
}

impl CommutatorReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

const REPORTED_FAILURES: usize = 5;

/// Evaluates `[D_j, D_k] m` for every monomial m of degree at most `d` and
/// every `j < k`.
pub fn commutator_check(cfg: &DunklConfig, d: usize) -> Result<CommutatorReport> {
    if d > MAX_COMMUTATOR_DEGREE {
        return Err(Error::DegreeBound {
            degree: d,
            bound: MAX_COMMUTATOR_DEGREE,
        });
    }
    let n = cfg.nvars;
    let mons = monomials_up_to(n, d);
    let per_mon: Vec<Vec<(usize, usize, MultiPoly)>> = mons
        .par_iter()
        .map(|m| -> Result<_> {
            let p = MultiPoly::monomial(m.clone(), Scalar::one());
            let grad = cfg.gradient(&p)?;
            let second: Vec<Vec<MultiPoly>> = grad
                .iter()
                .map(|q| cfg.gradient(q))
                .collect::<Result<_>>()?;
            let mut out = Vec::new();
            for j in 0..n {
                for k in j + 1..n {
                    // D_j D_k m − D_k D_j m
                    out.push((j, k, second[k][j].checked_sub(&second[j][k])?));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut report = CommutatorReport {
        degree: d,
        monomials: mons.len(),
        pairs: n * n.saturating_sub(1) / 2,
        max_residual: 0.0,
        failure_count: 0,
        failures: Vec::new(),
    };
    for (m, comms) in mons.iter().zip(per_mon) {
        for (j, k, c) in comms {
            report.max_residual = report.max_residual.max(c.max_abs());
            if !c.is_zero() {
                report.failure_count += 1;
                if report.failures.len() < REPORTED_FAILURES {
                    report.failures.push(CommutatorFailure {
                        monomial: monomial_label(m),
                        j: j + 1,
                        k: k + 1,
                        residual: c.to_string(),
                    });
                }
            }
        }
    }
    Ok(report)
}

fn monomial_label(m: &Monomial) -> String {
    m.to_string()
}
