//! Cyclic geometry: σ-orbits on S × S, cyclic spaces and their axioms, and
//! reconstruction of a group from a cyclic space.
//!
//! An orbit is listed by iterating σ⁻¹, so consecutive pairs are
//! `(q_k, q_{k+1})` with `q_{k+2} = q_{k+1}⁻¹ q_k q_{k+1}`, and the line of
//! the orbit is the cyclic sequence of first components.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::group_core::{build_group, Generators, GroupElement, GroupTable, Permutation};

/// Largest number of tuples an exhaustive braid or axiom check may visit.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// Number of random triples drawn when an axiom check is too large to be exhaustive.
pub const AXIOM_SAMPLES: usize = 1_000_000;

/// The flip-over operator on S × S; identical to `Calculus::braid_sigma`.
pub fn flip(
    calc: &Calculus,
    g: GroupElement,
    h: GroupElement,
) -> Result<(GroupElement, GroupElement)> {
    calc.braid_sigma(g, h)
}

pub fn flip_inv(
    calc: &Calculus,
    g: GroupElement,
    h: GroupElement,
) -> Result<(GroupElement, GroupElement)> {
    calc.braid_sigma_inv(g, h)
}

/// A σ-orbit listed so that `pairs[k] = (q_k, q_{k+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub pairs: Vec<(GroupElement, GroupElement)>,
}

impl Orbit {
    /// The cyclic line `(q_1, …, q_n)`.
    pub fn line(&self) -> Vec<GroupElement> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks that consecutive pairs chain, `pairs[k].1 == pairs[k+1].0`.
    pub fn is_chained(&self) -> bool {
        let n = self.pairs.len();
        (0..n).all(|k| self.pairs[k].1 == self.pairs[(k + 1) % n].0)
    }
}

fn least_rotation<T: Ord + Clone>(v: &[T]) -> usize {
    (0..v.len())
        .min_by(|&a, &b| {
            let ra = v[a..].iter().chain(&v[..a]);
            let rb = v[b..].iter().chain(&v[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0)
}

/// All σ-orbits on S × S, each rotated to its lexicographically least line,
/// sorted by line.
pub fn enumerate_orbits(calc: &Calculus) -> Vec<Orbit> {
    let n = calc.s.len();
    let perm = calc.sigma_permutation();
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    let m = calc.s.members();
    let mut seen = vec![false; perm.len()];
    let mut orbits = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut pairs = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            pairs.push((m[i / n], m[i % n]));
            i = inv[i];
        }
        let firsts: Vec<_> = pairs.iter().map(|p| p.0).collect();
        pairs.rotate_left(least_rotation(&firsts));
        orbits.push(Orbit { pairs });
    }
    orbits.sort_by_key(Orbit::line);
    orbits
}

/// The common value of `q_k q_{k+1}` along an orbit (`q_1²` for a singleton).
pub fn orbit_invariant(table: &GroupTable, orbit: &Orbit) -> Result<GroupElement> {
    let (a, b) = *orbit
        .pairs
        .first()
        .ok_or_else(|| Error::InconsistentOrbit("empty orbit".into()))?;
    let inv = table.mul(a, b);
    for &(x, y) in &orbit.pairs[1..] {
        let v = table.mul(x, y);
        if v != inv {
            return Err(Error::InconsistentOrbit(format!(
                "{}·{} = {} but {}·{} = {}",
                table.label(a),
                table.label(b),
                table.label(inv),
                table.label(x),
                table.label(y),
                table.label(v)
            )));
        }
    }
    Ok(inv)
}

/// Outcome of the braid-group checks on Sⁿ.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BraidReport {
    pub n: usize,
    pub braid_tuples: u64,
    pub far_tuples: u64,
    pub braid_witness: Option<String>,
    pub far_commutation_witness: Option<String>,
}

impl BraidReport {
    pub fn passed(&self) -> bool {
        self.braid_witness.is_none() && self.far_commutation_witness.is_none()
    }
}

fn apply_tau(perm: &[usize], s: usize, t: &mut [usize], j: usize) {
    let p = perm[t[j] * s + t[j + 1]];
    t[j] = p / s;
    t[j + 1] = p % s;
}

fn tuple_of(mut code: u64, s: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for k in (0..n).rev() {
        t[k] = (code % s as u64) as usize;
        code /= s as u64;
    }
    t
}

/// Checks `τ₁τ₂τ₁ = τ₂τ₁τ₂` on S³ and, for `n ≥ 4`, `τ_j τ_k = τ_k τ_j`
/// (`|j − k| ≥ 2`) on Sⁿ, exhaustively. `τ_j` applies σ at positions `j, j+1`.
pub fn braid_check(calc: &Calculus, n: usize) -> Result<BraidReport> {
    let s = calc.s.len();
    let needed = (s as u128)
        .checked_pow(n.max(3) as u32)
        .unwrap_or(u128::MAX);
    if needed > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: ENUMERATION_BUDGET,
        });
    }
    let perm = calc.sigma_permutation();
    let label = |t: &[usize]| -> String {
        let parts: Vec<&str> = t
            .iter()
            .map(|&i| calc.table.label(calc.s.members()[i]))
            .collect();
        format!("({})", parts.join(", "))
    };
    let total3 = (s as u64).pow(3);
    let braid_witness = (0..total3)
        .into_par_iter()
        .find_first(|&code| {
            let t = tuple_of(code, s, 3);
            let mut a = t.clone();
            apply_tau(&perm, s, &mut a, 0);
            apply_tau(&perm, s, &mut a, 1);
            apply_tau(&perm, s, &mut a, 0);
            let mut b = t;
            apply_tau(&perm, s, &mut b, 1);
            apply_tau(&perm, s, &mut b, 0);
            apply_tau(&perm, s, &mut b, 1);
            a != b
        })
        .map(|code| label(&tuple_of(code, s, 3)));
    let mut far_tuples = 0;
    let mut far_commutation_witness = None;
    if n >= 4 {
        let total = (s as u64).pow(n as u32);
        far_tuples = total;
        let pairs: Vec<(usize, usize)> = (0..n - 1)
            .flat_map(|j| (j + 2..n - 1).map(move |k| (j, k)))
            .collect();
        far_commutation_witness = (0..total)
            .into_par_iter()
            .find_first(|&code| {
                let t = tuple_of(code, s, n);
                pairs.iter().any(|&(j, k)| {
                    let mut a = t.clone();
                    apply_tau(&perm, s, &mut a, k);
                    apply_tau(&perm, s, &mut a, j);
                    let mut b = t.clone();
                    apply_tau(&perm, s, &mut b, j);
                    apply_tau(&perm, s, &mut b, k);
                    a != b
                })
            })
            .map(|code| label(&tuple_of(code, s, n)));
    }
    Ok(BraidReport {
        n,
        braid_tuples: total3,
        far_tuples,
        braid_witness,
        far_commutation_witness,
    })
}

/// A cyclically oriented line, stored in its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicLine(pub Vec<usize>);

impl CyclicLine {
    pub fn new(mut points: Vec<usize>) -> Self {
        let r = least_rotation(&points);
        points.rotate_left(r);
        CyclicLine(points)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A finite set with a family of cyclically oriented lines. Construction via
/// [`CyclicSpace::new`] enforces the oriented-line axioms; use
/// [`CyclicSpace::new_unchecked`] to inspect defective data.
#[derive(Clone, Debug)]
pub struct CyclicSpace {
    labels: Vec<String>,
    lines: Vec<CyclicLine>,
    /// `act[x * n + y] = x ◀ y`.
    act: Vec<usize>,
    elements: Option<Vec<GroupElement>>,
}

impl CyclicSpace {
    pub fn new(labels: Vec<String>, lines: Vec<Vec<usize>>) -> Result<Self> {
        let space = Self::new_unchecked(labels, lines)?;
        if let Some(w) = space.oriented_line_witness() {
            return Err(Error::Config(format!("not a cyclic space: {w}")));
        }
        Ok(space)
    }

    /// Builds the space and its action without checking the line axioms.
    /// Where a pair lies on several lines the first one wins; where it lies on
    /// none, `x ◀ y = x`.
    pub fn new_unchecked(labels: Vec<String>, lines: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        let mut set = BTreeSet::new();
        for l in lines {
            if let Some(&p) = l.iter().find(|&&p| p >= n) {
                return Err(Error::Config(format!(
                    "line refers to point {p}, but there are {n} points"
                )));
            }
            if l.is_empty() {
                return Err(Error::Config("empty line".into()));
            }
            set.insert(CyclicLine::new(l));
        }
        let lines: Vec<CyclicLine> = set.into_iter().collect();
        let mut act: Vec<usize> = (0..n * n).map(|i| i / n).collect();
        let mut assigned = vec![false; n * n];
        for line in &lines {
            let w = &line.0;
            let m = w.len();
            if m < 2 {
                continue;
            }
            for k in 0..m {
                let (x, y) = (w[k], w[(k + 1) % m]);
                if x != y && !std::mem::replace(&mut assigned[x * n + y], true) {
                    act[x * n + y] = w[(k + 2) % m];
                }
            }
        }
        Ok(CyclicSpace {
            labels,
            lines,
            act,
            elements: None,
        })
    }

    /// The space on S whose lines are the σ-orbit lines.
    pub fn from_group(calc: &Calculus) -> Result<Self> {
        let labels = calc
            .s
            .iter()
            .map(|g| calc.table.label(g).to_string())
            .collect();
        let lines = enumerate_orbits(calc)
            .iter()
            .map(|o| {
                o.line()
                    .into_iter()
                    .map(|g| calc.s.position(g).unwrap())
                    .collect()
            })
            .collect();
        let mut space = Self::new(labels, lines)?;
        space.elements = Some(calc.s.members().to_vec());
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lines(&self) -> &[CyclicLine] {
        &self.lines
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Group elements of the points, for spaces built from a group.
    pub fn elements(&self) -> Option<&[GroupElement]> {
        self.elements.as_deref()
    }

    /// `x ◀ y`.
    pub fn triangle_action(&self, x: usize, y: usize) -> usize {
        self.act[x * self.labels.len() + y]
    }

    fn line_label(&self, l: &CyclicLine) -> String {
        let parts: Vec<&str> = l.0.iter().map(|&p| self.labels[p].as_str()).collect();
        format!("({})", parts.join(", "))
    }

    /// Violations of the oriented-line axioms: each ordered pair of distinct
    /// points starts exactly one line, every point has its one-point line, and
    /// lines consist of distinct points.
    pub fn oriented_line_witness(&self) -> Option<String> {
        let n = self.labels.len();
        let mut count = vec![0u32; n * n];
        for line in &self.lines {
            let w = &line.0;
            let distinct: BTreeSet<_> = w.iter().collect();
            if distinct.len() != w.len() {
                return Some(format!("line {} repeats a point", self.line_label(line)));
            }
            if w.len() == 1 {
                count[w[0] * n + w[0]] += 1;
                continue;
            }
            for k in 0..w.len() {
                count[w[k] * n + w[(k + 1) % w.len()]] += 1;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let c = count[x * n + y];
                if c != 1 {
                    let what = if x == y { "one-point line" } else { "line" };
                    return Some(format!(
                        "ordered pair ({}, {}) lies on {c} {what}s instead of one",
                        self.labels[x], self.labels[y]
                    ));
                }
            }
        }
        None
    }
}

/// The Fano plane on the seven imaginary octonion units: every line of the
/// plane with both orientations, plus the seven one-point lines.
pub fn fano_space() -> CyclicSpace {
    // e_a e_b = e_c for each oriented triple
    const TRIPLES: [[usize; 3]; 7] = [
        [1, 2, 3],
        [1, 4, 5],
        [1, 7, 6],
        [2, 4, 6],
        [2, 5, 7],
        [3, 4, 7],
        [3, 6, 5],
    ];
    let labels = (1..=7).map(|i| format!("e{i}")).collect();
    let mut lines: Vec<Vec<usize>> = (0..7).map(|i| vec![i]).collect();
    for [a, b, c] in TRIPLES {
        lines.push(vec![a - 1, b - 1, c - 1]);
        lines.push(vec![a - 1, c - 1, b - 1]);
    }
    CyclicSpace::new(labels, lines).expect("the Fano plane is a cyclic space")
}

/// One axiom check with its verdict.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub exhaustive: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AxiomReport {
    pub points: usize,
    pub lines: usize,
    pub checks: Vec<AxiomCheck>,
}

pub const ORIENTED_LINES: &str = "oriented lines";
pub const RIGHT_CANCELLATION: &str = "right cancellation";
pub const LEFT_CANCELLATION: &str = "left cancellation";
pub const NON_TRIVIALITY: &str = "non-triviality";
pub const RIGHT_DISTRIBUTIVITY: &str = "right distributivity";
pub const COLLINEAR_DISTRIBUTIVITY: &str = "right distributivity on collinear triples";
pub const CONSECUTIVE_COMPOSITION: &str = "consecutive composition along lines";

impl AxiomReport {
    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(|c| c.passed)
    }
}

/// Triples `(z, x, y)` to test: all of them, or a seeded sample.
fn triples(n: usize, seed: u64) -> (bool, Vec<(usize, usize, usize)>) {
    let total = (n as u128).pow(3);
    if total <= ENUMERATION_BUDGET {
        let all = (0..n)
            .flat_map(|z| (0..n).flat_map(move |x| (0..n).map(move |y| (z, x, y))))
            .collect();
        (true, all)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sample = (0..AXIOM_SAMPLES)
            .map(|_| {
                (
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                )
            })
            .collect();
        (false, sample)
    }
}

/// Runs every axiom check; large spaces fall back to `seed`-determined samples.
pub fn verify_cyclic_axioms(space: &CyclicSpace, seed: u64) -> AxiomReport {
    let n = space.len();
    let a = |x: usize, y: usize| space.triangle_action(x, y);
    let l = |x: usize| space.labels[x].as_str();
    let mut checks = Vec::new();

    let w = space.oriented_line_witness();
    checks.push(AxiomCheck {
        name: ORIENTED_LINES,
        passed: w.is_none(),
        exhaustive: true,
        witness: w,
    });

    let cancellation = |right: bool| {
        (0..n).find_map(|fixed| {
            let mut seen: HashMap<usize, usize> = HashMap::new();
            (0..n).find_map(|v| {
                let img = if right { a(v, fixed) } else { a(fixed, v) };
                seen.insert(img, v).map(|u| {
                    if right {
                        format!("{} ◀ {f} = {} ◀ {f} = {}", l(u), l(v), l(img), f = l(fixed))
                    } else {
                        format!("{f} ◀ {} = {f} ◀ {} = {}", l(u), l(v), l(img), f = l(fixed))
                    }
                })
            })
        })
    };
    let w = cancellation(true);
    checks.push(AxiomCheck {
        name: RIGHT_CANCELLATION,
        passed: w.is_none(),
        exhaustive: true,
        witness: w,
    });
    let w = cancellation(false);
    checks.push(AxiomCheck {
        name: LEFT_CANCELLATION,
        passed: w.is_none(),
        exhaustive: true,
        witness: w,
    });

    let w = (0..n)
        .find(|&x| (0..n).all(|p| a(p, x) == p))
        .map(|x| format!("(·) ◀ {} is the identity permutation", l(x)));
    checks.push(AxiomCheck {
        name: NON_TRIVIALITY,
        passed: w.is_none(),
        exhaustive: true,
        witness: w,
    });

    let (exhaustive, sample) = triples(n, seed);
    let distributes = |&(z, x, y): &(usize, usize, usize)| a(a(z, x), y) == a(a(z, y), a(x, y));
    let describe = |(z, x, y): (usize, usize, usize)| {
        format!(
            "z = {}, x = {}, y = {}: (z ◀ x) ◀ y = {} but (z ◀ y) ◀ (x ◀ y) = {}",
            l(z),
            l(x),
            l(y),
            l(a(a(z, x), y)),
            l(a(a(z, y), a(x, y)))
        )
    };
    let w = sample
        .par_iter()
        .find_first(|t| !distributes(t))
        .map(|&t| describe(t));
    checks.push(AxiomCheck {
        name: RIGHT_DISTRIBUTIVITY,
        passed: w.is_none(),
        exhaustive,
        witness: w,
    });

    let line_sets: Vec<BTreeSet<usize>> = space
        .lines
        .iter()
        .map(|l| l.0.iter().copied().collect())
        .collect();
    let collinear = |&(z, x, y): &(usize, usize, usize)| {
        line_sets
            .iter()
            .any(|s| s.contains(&z) && s.contains(&x) && s.contains(&y))
    };
    let w = sample
        .par_iter()
        .find_first(|t| collinear(t) && !distributes(t))
        .map(|&t| describe(t));
    checks.push(AxiomCheck {
        name: COLLINEAR_DISTRIBUTIVITY,
        passed: w.is_none(),
        exhaustive,
        witness: w,
    });

    let w = space.lines.iter().find_map(|line| {
        let w = &line.0;
        let m = w.len();
        if m < 2 {
            return None;
        }
        (1..m).find_map(|k| {
            (0..n)
                .find(|&x| a(a(x, w[k]), w[(k + 1) % m]) != a(a(x, w[0]), w[1]))
                .map(|x| {
                    format!(
                        "line {}, x = {}: ({} ◀ {}) ◀ {} = {} but ({} ◀ {}) ◀ {} = {}",
                        space.line_label(line),
                        l(x),
                        l(x),
                        l(w[k]),
                        l(w[(k + 1) % m]),
                        l(a(a(x, w[k]), w[(k + 1) % m])),
                        l(x),
                        l(w[0]),
                        l(w[1]),
                        l(a(a(x, w[0]), w[1]))
                    )
                })
        })
    });
    checks.push(AxiomCheck {
        name: CONSECUTIVE_COMPOSITION,
        passed: w.is_none(),
        exhaustive: true,
        witness: w,
    });

    AxiomReport {
        points: n,
        lines: space.lines.len(),
        checks,
    }
}

/// The permutation group generated by the maps `(·) ◀ x`, with Ω embedded in it.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub group: GroupTable,
    pub embedding: Vec<GroupElement>,
    /// Whether distinct points give distinct permutations.
    pub injective: bool,
    /// A pair with `x ◀ y ≠ y⁻¹ x y` in the reconstructed group.
    pub conjugation_witness: Option<String>,
}

/// Rebuilds the group from a cyclic space. Refuses unless the line axioms,
/// right cancellation, non-triviality and right distributivity hold.
pub fn reconstruct_group(space: &CyclicSpace, seed: u64) -> Result<Reconstruction> {
    let report = verify_cyclic_axioms(space, seed);
    for name in [
        ORIENTED_LINES,
        RIGHT_CANCELLATION,
        NON_TRIVIALITY,
        RIGHT_DISTRIBUTIVITY,
    ] {
        let c = report.check(name).expect("all checks are reported");
        if !c.passed {
            return Err(Error::AxiomsNotVerified(format!(
                "{name}: {}",
                c.witness.clone().unwrap_or_default()
            )));
        }
    }
    let n = space.len();
    let perms: Vec<Permutation> = (0..n)
        .map(|x| Permutation::from_images((0..n).map(|p| space.triangle_action(p, x)).collect()))
        .collect::<Result<_>>()?;
    let group = build_group(
        &Generators::Permutations(perms.clone()),
        crate::group_core::DEFAULT_ORDER_BOUND,
    )?;
    let embedding: Vec<GroupElement> = perms
        .iter()
        .map(|p| group.find_permutation(p).expect("generator"))
        .collect();
    let injective = embedding.iter().collect::<BTreeSet<_>>().len() == n;
    let mut conjugation_witness = None;
    'outer: for x in 0..n {
        for y in 0..n {
            let (gx, gy) = (embedding[x], embedding[y]);
            let conj = group.mul(group.mul(group.inv(gy), gx), gy);
            if embedding[space.triangle_action(x, y)] != conj {
                conjugation_witness = Some(format!("{} ◀ {}", space.labels[x], space.labels[y]));
                break 'outer;
            }
        }
    }
    Ok(Reconstruction {
        group,
        embedding,
        injective,
        conjugation_witness,
    })
}

/// For a space built from a group: first pair with `x ◀ y ≠ y⁻¹ x y` in the
/// original group.
pub fn group_conjugation_witness(space: &CyclicSpace, table: &GroupTable) -> Option<String> {
    let elems = space.elements()?;
    let n = space.len();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find_map(|(x, y)| {
            let expect = table.conjugate(table.inv(elems[y]), elems[x]);
            (elems[space.triangle_action(x, y)] != expect)
                .then(|| format!("{} ◀ {}", space.labels[x], space.labels[y]))
        })
}

/// Outcome of the cyclic-sum check for a candidate Dunkl representation.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RepresentationReport {
    pub passed: bool,
    pub max_residual: f64,
    pub witness: Option<String>,
}

/// Checks `Σ_k ξ(w_k) ξ(w_{k+1}) = 0` around every line, with the residual
/// measured by `norm` relative to the largest single product on the line.
pub fn check_dunkl_representation<T: Clone>(
    space: &CyclicSpace,
    xi: &[T],
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
    norm: impl Fn(&T) -> f64,
    tol: f64,
) -> Result<RepresentationReport> {
    if xi.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            found: xi.len(),
        });
    }
    let mut max_residual = 0.0f64;
    let mut witness = None;
    for line in &space.lines {
        let w = &line.0;
        let m = w.len();
        let terms: Vec<T> = (0..m)
            .map(|k| mul(&xi[w[k]], &xi[w[(k + 1) % m]]))
            .collect();
        let scale = terms.iter().map(&norm).fold(0.0, f64::max);
        let total = terms[1..]
            .iter()
            .fold(terms[0].clone(), |acc, t| add(&acc, t));
        let r = if scale == 0.0 {
            0.0
        } else {
            norm(&total) / scale
        };
        max_residual = max_residual.max(r);
        if r > tol && witness.is_none() {
            witness = Some(format!(
                "line {}: relative residual {r:e}",
                space.line_label(line)
            ));
        }
    }
    Ok(RepresentationReport {
        passed: witness.is_none(),
        max_residual,
        witness,
    })
}
