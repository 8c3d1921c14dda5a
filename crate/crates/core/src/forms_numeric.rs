//! Seeded numeric checks on the antiholomorphic forms `ξ_α(x) = α / ⟨x, α⟩`,
//! `⟨x, α⟩ = Σ x̄_i α_i`, attached to the eigenlines of complex reflections.
//!
//! Eigenlines are row vectors: `μ(s)` spans the row space of `s − I`, so
//! `μ(u s u⁻¹) = μ(s)·u⁻¹`. A group element acts on forms by pullback,
//! `(g·a)(x) = ḡ a(x g)`, which sends `ξ_{μ(s)}` to `ξ_{μ(g s g⁻¹)}`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::calculus::Calculus;
use crate::cyclic_geom::enumerate_orbits;
use crate::error::{Error, Result};
use crate::exact_poly::{Matrix, Scalar};
use crate::group_core::{GroupElement, GroupTable, SubsetS};
use crate::report::Check;

/// Default relative tolerance for the wedge, covariance and invariance checks.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default tolerance for the finite-difference closedness check.
pub const CLOSEDNESS_TOL: f64 = 1e-5;
/// Step of the central finite difference.
pub const FD_STEP: f64 = 1e-5;
/// Points closer than this (relative) to a reflecting hyperplane are rejected.
pub const SINGULAR_GUARD: f64 = 1e-6;
/// Attempts per sample before rejection sampling gives up.
pub const MAX_REJECTIONS: usize = 10_000;

pub type CVec = Vec<Complex64>;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `Σ x̄_i a_i`.
pub fn inner(x: &[Complex64], a: &[Complex64]) -> Complex64 {
    x.iter().zip(a).map(|(x, a)| x.conj() * a).sum()
}

fn normalize_line(v: CVec) -> CVec {
    let n = norm(&v);
    let lead = v
        .iter()
        .find(|z| z.norm() > 1e-12 * n)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = lead / lead.norm();
    v.iter().map(|z| z / (phase * n)).collect()
}

/// The unit row vector spanning the row space of `m − I`, with its first
/// significant entry real and positive. Exact matrices are reduced exactly.
pub fn eigenline(m: &Matrix, label: &str) -> Result<CVec> {
    let n = m.rows();
    let d = m.sub(&Matrix::identity(n))?;
    if d.is_exact() {
        let rows = d.row_space();
        if rows.len() != 1 {
            return Err(Error::NotAReflection {
                element: label.to_string(),
                rank: rows.len(),
            });
        }
        return Ok(normalize_line(rows[0].iter().map(Scalar::to_c64).collect()));
    }
    let rows = d.to_c64_rows();
    let dm = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let sv = dm.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&x| x > 1e-9 * top.max(1e-300)).count();
    if rank != 1 {
        return Err(Error::NotAReflection {
            element: label.to_string(),
            rank,
        });
    }
    let best = rows
        .into_iter()
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .unwrap();
    Ok(normalize_line(best))
}

/// A (0,1)-form evaluated at a point, as its coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Covector(pub CVec);

impl Covector {
    pub fn scale(&self, c: Complex64) -> Covector {
        Covector(self.0.iter().map(|z| z * c).collect())
    }

    pub fn add(&self, other: &Covector) -> Covector {
        Covector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn wedge(&self, other: &Covector) -> TwoForm {
        let n = self.0.len();
        let mut c = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for j in 0..n {
            for k in j + 1..n {
                c.push(self.0[j] * other.0[k] - self.0[k] * other.0[j]);
            }
        }
        TwoForm(c)
    }

    pub fn to_exterior(&self) -> ExteriorForm {
        let mut out = ExteriorForm::default();
        for (i, &c) in self.0.iter().enumerate() {
            out.add_term(1 << i, c);
        }
        out
    }
}

/// A 2-form at a point, with coefficients on `dx̄_j ∧ dx̄_k` for `j < k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm(pub CVec);

impl TwoForm {
    pub fn zero(n: usize) -> Self {
        TwoForm(vec![Complex64::new(0.0, 0.0); n * n.saturating_sub(1) / 2])
    }

    pub fn add(&self, other: &TwoForm) -> TwoForm {
        TwoForm(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: Complex64) -> TwoForm {
        TwoForm(self.0.iter().map(|z| z * c).collect())
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }
}

/// An element of the exterior algebra, keyed by the bitmask of its basis indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExteriorForm(pub BTreeMap<u64, Complex64>);

impl ExteriorForm {
    fn add_term(&mut self, mask: u64, c: Complex64) {
        *self.0.entry(mask).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn add(&self, other: &ExteriorForm) -> ExteriorForm {
        let mut out = self.clone();
        for (&m, &c) in &other.0 {
            out.add_term(m, c);
        }
        out
    }

    pub fn wedge(&self, other: &ExteriorForm) -> ExteriorForm {
        let mut out = ExteriorForm::default();
        for (&a, &x) in &self.0 {
            for (&b, &y) in &other.0 {
                if a & b != 0 {
                    continue;
                }
                // sign of merging the sorted index lists of a and b
                let mut swaps = 0;
                let mut rest = b;
                while rest != 0 {
                    let i = rest.trailing_zeros();
                    swaps += (a >> i).count_ones();
                    rest &= rest - 1;
                }
                let sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
                out.add_term(a | b, x * y * sign);
            }
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.0.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn check_singular(x: &[Complex64], alpha: &[Complex64]) -> Result<Complex64> {
    let d = inner(x, alpha);
    if d.norm() < SINGULAR_GUARD * norm(x) * norm(alpha) {
        return Err(Error::SingularPoint { value: d.norm() });
    }
    Ok(d)
}

/// `ξ_α(x) = α / ⟨x, α⟩`.
pub fn xi_eval(alpha: &[Complex64], x: &[Complex64]) -> Result<Covector> {
    if alpha.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            found: x.len(),
        });
    }
    let d = check_singular(x, alpha)?;
    Ok(Covector(alpha.iter().map(|a| a / d).collect()))
}

/// `Σ_k ξ_{w_k} ∧ ξ_{w_{k+1}}` around a cyclic list of lines, with the
/// relative residual `‖Σ‖ / max_k ‖ξ_{w_k} ∧ ξ_{w_{k+1}}‖`.
pub fn cyclic_sum(lines: &[CVec], x: &[Complex64]) -> Result<(TwoForm, f64)> {
    let weights = vec![Complex64::new(1.0, 0.0); lines.len()];
    weighted_cyclic_sum(lines, &weights, x)
}

/// Like [`cyclic_sum`] with term k weighted by `w_k w_{k+1}`.
pub fn weighted_cyclic_sum(
    lines: &[CVec],
    weights: &[Complex64],
    x: &[Complex64],
) -> Result<(TwoForm, f64)> {
    let m = lines.len();
    let xis: Vec<Covector> = lines.iter().map(|a| xi_eval(a, x)).collect::<Result<_>>()?;
    let mut total = TwoForm::zero(x.len());
    let mut scale = 0.0f64;
    for k in 0..m {
        let t = xis[k]
            .wedge(&xis[(k + 1) % m])
            .scale(weights[k] * weights[(k + 1) % m]);
        scale = scale.max(t.norm());
        total = total.add(&t);
    }
    let r = if scale == 0.0 {
        0.0
    } else {
        total.norm() / scale
    };
    Ok((total, r))
}

/// Applies a matrix to a row vector, `x ↦ x m`.
fn row_times(x: &[Complex64], m: &[CVec]) -> CVec {
    (0..m[0].len())
        .map(|j| x.iter().zip(m).map(|(xi, row)| xi * row[j]).sum())
        .collect()
}

/// `ḡ v` for a column vector v.
fn conj_times_col(m: &[CVec], v: &[Complex64]) -> CVec {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a.conj() * b).sum())
        .collect()
}

/// A complex reflection group with the data for the displacement form
/// `λ = Σ_s ν(s) ξ_{μ(s)}`.
#[derive(Clone, Debug)]
pub struct DisplacementConfig {
    table: GroupTable,
    s: SubsetS,
    n: usize,
    reps: Vec<Vec<CVec>>,
    inverses: Vec<Vec<CVec>>,
    mu: Vec<CVec>,
    nu: Vec<Complex64>,
    lines: Vec<Vec<usize>>,
}

impl DisplacementConfig {
    /// `nu` is indexed like `s.members()`. `mu_override` replaces the
    /// eigenline of selected members (by index) with a given vector.
    pub fn new(
        table: GroupTable,
        s: SubsetS,
        nu: Vec<Complex64>,
        mu_override: &[(usize, CVec)],
    ) -> Result<Self> {
        let n = table.rep_dim()?;
        if nu.len() != s.len() {
            return Err(Error::DimensionMismatch {
                expected: s.len(),
                found: nu.len(),
            });
        }
        let reps: Vec<Vec<CVec>> = table
            .elements()
            .map(|g| Ok(table.rep(g)?.to_c64_rows()))
            .collect::<Result<_>>()?;
        let inverses = table
            .elements()
            .map(|g| reps[table.inv(g).0].clone())
            .collect();
        let mut mu: Vec<CVec> = s
            .iter()
            .map(|el| eigenline(table.rep(el)?, table.label(el)))
            .collect::<Result<_>>()?;
        for (i, v) in mu_override {
            if *i >= mu.len() || v.len() != n {
                return Err(Error::Config(format!(
                    "eigenline override {i} has the wrong shape"
                )));
            }
            mu[*i] = normalize_line(v.clone());
        }
        let calc = Calculus::new(&table, &s);
        let lines = enumerate_orbits(&calc)
            .iter()
            .map(|o| o.line().iter().map(|&g| s.position(g).unwrap()).collect())
            .collect();
        Ok(DisplacementConfig {
            table,
            s,
            n,
            reps,
            inverses,
            mu,
            nu,
            lines,
        })
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn s(&self) -> &SubsetS {
        &self.s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> &[CVec] {
        &self.mu
    }

    pub fn nu(&self) -> &[Complex64] {
        &self.nu
    }

    /// Orbit lines, as indices into `s.members()`.
    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    fn label(&self, i: usize) -> &str {
        self.table.label(self.s.members()[i])
    }

    fn line_label(&self, line: &[usize]) -> String {
        let parts: Vec<&str> = line.iter().map(|&i| self.label(i)).collect();
        format!("({})", parts.join(", "))
    }

    /// `λ₀(x) = Σ_s ν(s) ξ_{μ(s)}(x)`.
    pub fn lambda0(&self, x: &[Complex64]) -> Result<Covector> {
        let mut out = Covector(vec![Complex64::new(0.0, 0.0); self.n]);
        for (mu, nu) in self.mu.iter().zip(&self.nu) {
            out = out.add(&xi_eval(mu, x)?.scale(*nu));
        }
        Ok(out)
    }

    /// Pullback `(g·a)(x) = ḡ a(x g)` of a form given pointwise.
    fn pullback(
        &self,
        g: GroupElement,
        x: &[Complex64],
        a: impl Fn(&[Complex64]) -> Result<Covector>,
    ) -> Result<Covector> {
        let m = &self.reps[g.0];
        Ok(Covector(conj_times_col(m, &a(&row_times(x, m))?.0)))
    }

    /// A random point off every reflecting hyperplane with trivial stabilizer,
    /// drawn from stream `index` of the seeded generator.
    pub fn sample_point(&self, seed: u64, index: u64) -> Result<CVec> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        for _ in 0..MAX_REJECTIONS {
            let x: CVec = (0..self.n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                })
                .collect();
            let nx = norm(&x);
            let off_walls = self
                .mu
                .iter()
                .all(|a| inner(&x, a).norm() >= SINGULAR_GUARD * nx * norm(a));
            let free = self.table.elements().skip(1).all(|g| {
                let y = row_times(&x, &self.reps[g.0]);
                norm(&y.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>())
                    > SINGULAR_GUARD * nx
            });
            if off_walls && free {
                return Ok(x);
            }
        }
        Err(Error::SamplingExhausted {
            attempts: MAX_REJECTIONS,
        })
    }
}

fn lines_equal(a: &[Complex64], b: &[Complex64]) -> f64 {
    // 1 − |⟨a, b⟩| / (‖a‖‖b‖), zero exactly when the spans agree
    let (na, nb) = (norm(a), norm(b));
    (1.0 - inner(a, b).norm() / (na * nb)).abs()
}

/// Distance from `v` to span{a, b}, relative to ‖v‖.
fn span_residual(v: &[Complex64], a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut basis: Vec<CVec> = Vec::new();
    for w in [a, b] {
        let mut w = w.to_vec();
        for e in &basis {
            let c = inner(e, &w);
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi -= c * ei;
            }
        }
        let n = norm(&w);
        if n > 1e-12 {
            basis.push(w.iter().map(|z| z / n).collect());
        }
    }
    let mut r = v.to_vec();
    for e in &basis {
        let c = inner(e, &r);
        for (ri, ei) in r.iter_mut().zip(e) {
            *ri -= c * ei;
        }
    }
    norm(&r) / norm(v)
}

/// Coxeter-type conditions: (i) `u v u⁻¹ ∈ S`; (ii) `μ(u v u⁻¹) = u[μ(v)]`
/// with `u[W] = W·u⁻¹`; (iii) `u[μ(v)] ⊂ μ(u) + μ(v)`.
pub fn coxeter_type_check(cfg: &DisplacementConfig, tol: f64) -> Vec<Check> {
    let t = &cfg.table;
    let members = cfg.s.members();
    let mut closure = None;
    let mut cov = (0.0f64, None);
    let mut span = (0.0f64, None);
    for (iu, &u) in members.iter().enumerate() {
        for (iv, &v) in members.iter().enumerate() {
            let c = t.conjugate(u, v);
            let Some(ic) = cfg.s.position(c) else {
                closure.get_or_insert_with(|| {
                    format!(
                        "{0} {1} {0}^-1 = {2} is not in S",
                        t.label(u),
                        t.label(v),
                        t.label(c)
                    )
                });
                continue;
            };
            let moved = row_times(&cfg.mu[iv], &cfg.inverses[u.0]);
            let r = lines_equal(&cfg.mu[ic], &moved);
            if r > cov.0 {
                cov.0 = r;
            }
            if r > tol && cov.1.is_none() {
                cov.1 = Some(format!(
                    "u = {}, v = {}: μ(u v u⁻¹) differs from μ(v)·u⁻¹ by {r:e}",
                    t.label(u),
                    t.label(v)
                ));
            }
            let r = span_residual(&moved, &cfg.mu[iu], &cfg.mu[iv]);
            if r > span.0 {
                span.0 = r;
            }
            if r > tol && span.1.is_none() {
                span.1 = Some(format!(
                    "u = {}, v = {}: μ(v)·u⁻¹ leaves μ(u) + μ(v) by {r:e}",
                    t.label(u),
                    t.label(v)
                ));
            }
        }
    }
    vec![
        Check::exact("S closed under conjugation by S", closure),
        Check::numeric("eigenline covariance", cov.0, tol, cov.1),
        Check::numeric("eigenline span condition", span.0, tol, span.1),
    ]
}

/// The container line of an orbit: the span of its eigenlines.
#[derive(Clone, Debug, PartialEq)]
pub struct Container {
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

/// Numeric rank of the span of the eigenlines on a line.
pub fn container(cfg: &DisplacementConfig, line: &[usize]) -> Container {
    let rows: Vec<&CVec> = line.iter().map(|&i| &cfg.mu[i]).collect();
    let m = DMatrix::from_fn(rows.len(), cfg.n, |i, j| rows[i][j]);
    let sv: Vec<f64> = m
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&x| x > 1e-9 * top.max(1e-300)).count();
    Container {
        rank,
        singular_values: sv,
    }
}

/// Exact rank of the span of the eigenlines of the given reflections.
pub fn exact_container_rank(table: &GroupTable, line: &[GroupElement]) -> Result<usize> {
    let mut rows = Vec::new();
    for &g in line {
        let m = table.rep(g)?;
        let d = m.sub(&Matrix::identity(m.rows()))?;
        let space = d.row_space();
        if space.len() != 1 {
            return Err(Error::NotAReflection {
                element: table.label(g).to_string(),
                rank: space.len(),
            });
        }
        rows.extend(space);
    }
    Ok(Matrix::from_rows(rows)?.rank())
}

struct Worst {
    value: f64,
    witness: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            witness: None,
        }
    }

    fn record(&mut self, r: f64, tol: f64, what: impl FnOnce() -> String) {
        if r > self.value || r.is_nan() {
            self.value = if r.is_nan() { f64::INFINITY } else { r };
        }
        if (r.is_nan() || r > tol) && self.witness.is_none() {
            self.witness = Some(what());
        }
    }

    fn merge(mut self, other: Worst) -> Worst {
        self.value = self.value.max(other.value);
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self
    }
}

fn rel_diff(a: &Covector, b: &Covector) -> f64 {
    let d: CVec = a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        norm(&d) / s
    }
}

/// Residuals of the four displacement-form checks at one sample point.
fn checks_at(
    cfg: &DisplacementConfig,
    k: u64,
    x: &[Complex64],
    tol: f64,
    closed_tol: f64,
) -> Result<[Worst; 4]> {
    let t = &cfg.table;
    let members = cfg.s.members();
    let mut wedge = Worst::new();
    for line in &cfg.lines {
        let mus: Vec<CVec> = line.iter().map(|&i| cfg.mu[i].clone()).collect();
        let ws: Vec<Complex64> = line.iter().map(|&i| cfg.nu[i]).collect();
        let (_, r) = weighted_cyclic_sum(&mus, &ws, x)?;
        wedge.record(r, tol, || {
            format!(
                "sample {k}, line {}: relative residual {r:e}",
                cfg.line_label(line)
            )
        });
    }

    let mut cov = Worst::new();
    let mut inv = Worst::new();
    let l0 = cfg.lambda0(x)?;
    for g in t.elements() {
        for (i, &s) in members.iter().enumerate() {
            let j = cfg
                .s
                .position(t.conjugate(g, s))
                .expect("S is conjugation-stable");
            let lhs = cfg.pullback(g, x, |y| Ok(xi_eval(&cfg.mu[i], y)?.scale(cfg.nu[i])))?;
            let rhs = xi_eval(&cfg.mu[j], x)?.scale(cfg.nu[j]);
            let r = rel_diff(&lhs, &rhs);
            cov.record(r, tol, || {
                format!(
                    "sample {k}, g = {}, s = {}: relative residual {r:e}",
                    t.label(g),
                    t.label(s)
                )
            });
        }
        let moved = cfg.pullback(g, x, |y| cfg.lambda0(y))?;
        let r = rel_diff(&moved, &l0);
        inv.record(r, tol, || {
            format!("sample {k}, g = {}: relative residual {r:e}", t.label(g))
        });
    }

    // central differences in the conjugate coordinates: a real step in x_k is
    // a real step in x̄_k, and the forms do not depend on x
    let mut closed = Worst::new();
    let n = cfg.n;
    for (i, mu) in cfg.mu.iter().enumerate() {
        let mut jac = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for kk in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[kk] += FD_STEP;
            xm[kk] -= FD_STEP;
            let (ap, am) = (xi_eval(mu, &xp)?, xi_eval(mu, &xm)?);
            for j in 0..n {
                jac[j][kk] = (ap.0[j] - am.0[j]) / (2.0 * FD_STEP) * cfg.nu[i];
            }
        }
        let scale = jac
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        for j in 0..n {
            for kk in j + 1..n {
                let r = (jac[j][kk] - jac[kk][j]).norm() / scale;
                closed.record(r, closed_tol, || {
                    format!(
                        "sample {k}, s = {}, components ({}, {}): residual {r:e}",
                        cfg.label(i),
                        j + 1,
                        kk + 1
                    )
                });
            }
        }
    }
    Ok([wedge, cov, inv, closed])
}

/// Runs the cyclic wedge identity, covariance, λ₀ invariance and closedness
/// checks at `samples` seeded points.
pub fn displacement_checks(
    cfg: &DisplacementConfig,
    samples: usize,
    seed: u64,
    tol: f64,
    closed_tol: f64,
) -> Result<Vec<Check>> {
    let per_sample: Vec<[Worst; 4]> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let x = cfg.sample_point(seed, k)?;
            checks_at(cfg, k, &x, tol, closed_tol)
        })
        .collect::<Result<_>>()?;
    let mut acc = [Worst::new(), Worst::new(), Worst::new(), Worst::new()];
    for s in per_sample {
        for (a, w) in acc.iter_mut().zip(s) {
            *a = std::mem::replace(a, Worst::new()).merge(w);
        }
    }
    let [wedge, cov, inv, closed] = acc;
    Ok(vec![
        Check::numeric("cyclic wedge identity", wedge.value, tol, wedge.witness),
        Check::numeric("displacement covariance", cov.value, tol, cov.witness),
        Check::numeric("invariance of lambda_0", inv.value, tol, inv.witness),
        Check::numeric("closedness", closed.value, closed_tol, closed.witness),
    ])
}

/// Container ranks of every orbit line, numeric and exact.
pub fn container_check(cfg: &DisplacementConfig) -> Result<Check> {
    let mut max_rank = 0;
    let mut witness = None;
    for line in &cfg.lines {
        let numeric = container(cfg, line).rank;
        let elems: Vec<GroupElement> = line.iter().map(|&i| cfg.s.members()[i]).collect();
        let exact = if cfg.table.rep(elems[0])?.is_exact() {
            Some(exact_container_rank(&cfg.table, &elems)?)
        } else {
            None
        };
        let rank = exact.unwrap_or(numeric);
        max_rank = max_rank.max(rank);
        if (rank > 2 || exact.is_some_and(|e| e != numeric)) && witness.is_none() {
            witness = Some(format!(
                "line {}: exact rank {exact:?}, numeric rank {numeric}",
                cfg.line_label(line)
            ));
        }
    }
    let mut c = Check::exact("container rank at most 2", witness);
    c.max_residual = Some(max_rank as f64);
    c.tolerance = Some(2.0);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn plane_witness_sums_to_zero() {
        let lines = vec![
            vec![c(1.0), c(0.0)],
            vec![c(0.0), c(1.0)],
            vec![c(1.0), c(1.0)],
        ];
        let x = vec![c(1.0), c(2.0)];
        let xis: Vec<Covector> = lines.iter().map(|a| xi_eval(a, &x).unwrap()).collect();
        let terms: Vec<f64> = (0..3)
            .map(|k| xis[k].wedge(&xis[(k + 1) % 3]).0[0].re)
            .collect();
        let expect = [0.5, -1.0 / 6.0, -1.0 / 3.0];
        for (t, e) in terms.iter().zip(expect) {
            assert!((t - e).abs() < 1e-15, "{terms:?}");
        }
        let (_, r) = cyclic_sum(&lines, &x).unwrap();
        assert!(r < 1e-15);
    }

    #[test]
    fn three_generic_lines_in_three_space_do_not_cancel() {
        let e = |i: usize| {
            (0..3)
                .map(|j| c(if i == j { 1.0 } else { 0.0 }))
                .collect::<CVec>()
        };
        let x = vec![
            Complex64::new(0.3, -1.1),
            Complex64::new(1.7, 0.4),
            Complex64::new(-0.8, 0.9),
        ];
        let (_, r) = cyclic_sum(&[e(0), e(1), e(2)], &x).unwrap();
        assert!(r > 1e-6);
    }

    #[test]
    fn xi_is_scale_invariant() {
        let a = vec![Complex64::new(0.5, 1.0), c(-2.0)];
        let x = vec![Complex64::new(1.0, 0.3), Complex64::new(-0.4, 2.0)];
        let k = Complex64::new(-3.0, 0.7);
        let ka: CVec = a.iter().map(|z| z * k).collect();
        let d: f64 = xi_eval(&a, &x)
            .unwrap()
            .0
            .iter()
            .zip(&xi_eval(&ka, &x).unwrap().0)
            .map(|(p, q)| (p - q).norm())
            .sum();
        assert!(d < 1e-14);
    }

    #[test]
    fn singular_points_are_rejected() {
        let a = vec![c(1.0), c(-1.0)];
        assert!(matches!(
            xi_eval(&a, &[c(2.0), c(2.0)]),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn exterior_wedge_signs() {
        let e = |i: usize| {
            let mut v = vec![c(0.0); 3];
            v[i] = c(1.0);
            Covector(v).to_exterior()
        };
        let a = e(0).wedge(&e(1));
        let b = e(1).wedge(&e(0));
        assert!(a.add(&b).norm() < 1e-15);
        assert_eq!(e(2).wedge(&e(0)).wedge(&e(1)).0.get(&0b111), Some(&c(1.0)));
        assert!(e(1).wedge(&e(1)).norm() == 0.0);
    }

    #[test]
    fn eigenline_of_exact_and_float_matrices() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::one(), Scalar::zero()],
        ])
        .unwrap();
        let v = eigenline(&m, "swap").unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((v[0] - c(h)).norm() < 1e-15 && (v[1] + c(h)).norm() < 1e-15);
        let f = m.map(|s| Scalar::Float(s.to_c64()));
        let w = eigenline(&f, "swap").unwrap();
        assert!(lines_equal(&v, &w) < 1e-12);
        assert!(matches!(
            eigenline(&Matrix::identity(2), "e"),
            Err(Error::NotAReflection { rank: 0, .. })
        ));
    }
}
