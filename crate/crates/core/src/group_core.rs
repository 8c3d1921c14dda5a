//! Finite groups as explicit multiplication tables.
//!
//! Permutations act on the right, `x·(gh) = (x·g)·h`, so the product `gh`
//! means "apply g, then h". Matrices act on row vectors, `x ↦ x g`, which
//! makes the matrix product match the permutation convention and turns the
//! permutation-matrix embedding into a homomorphism.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact_poly::Matrix;

/// Default bound on the order of a generated group.
pub const DEFAULT_ORDER_BOUND: usize = 10_000;

/// An element of a [`GroupTable`], by index. Index 0 is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub usize);

impl GroupElement {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A permutation of `0..n`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    /// Parses 1-based cycle notation such as `(1,2)(3,4)` or `(1 2 3)`.
    pub fn from_cycles(degree: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        let mut images: Vec<usize> = (0..degree).collect();
        if s == "e" || s == "()" {
            return Ok(Permutation(images));
        }
        let bad = || Error::Parse(format!("bad cycle notation {s:?}"));
        let mut rest = s;
        let mut seen = vec![false; degree];
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let end = body.find(')').ok_or_else(bad)?;
            let pts: Vec<usize> = body[..end]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .ok()
                        .filter(|&p| p >= 1 && p <= degree)
                        .map(|p| p - 1)
                        .ok_or_else(bad)
                })
                .collect::<Result<_>>()?;
            for &p in &pts {
                if std::mem::replace(&mut seen[p], true) {
                    return Err(bad());
                }
            }
            for (k, &p) in pts.iter().enumerate() {
                images[p] = pts[(k + 1) % pts.len()];
            }
            rest = body[end + 1..].trim_start();
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::permutation(&self.0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut i = self.0[start];
            while i != start {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.0[i];
            }
            let parts: Vec<String> = cycle.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(","))?;
            any = true;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// How a group is presented.
#[derive(Clone, Debug)]
pub enum Generators {
    Permutations(Vec<Permutation>),
    Matrices(Vec<Matrix>),
}

/// A finite group with its full multiplication table and, when available, a
/// faithful matrix representation.
#[derive(Clone, Debug)]
pub struct GroupTable {
    order: usize,
    product: Vec<u32>,
    inverse: Vec<usize>,
    labels: Vec<String>,
    rep: Option<Vec<Matrix>>,
    perms: Option<Vec<Permutation>>,
    generators: Vec<GroupElement>,
}

struct Closure<T> {
    elements: Vec<T>,
    /// BFS tree: element `y` was first reached as `parent.0 · gens[parent.1]`.
    parent: Vec<(usize, usize)>,
    words: Vec<Vec<usize>>,
    /// `rmul[x * ngens + g]` is the index of `x · gens[g]`.
    rmul: Vec<usize>,
}

/// Breadth-first closure under right multiplication by generators.
fn closure<T: Clone, K: Hash + Eq>(
    identity: T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
    key: impl Fn(&T) -> K,
    bound: usize,
) -> Result<Closure<T>> {
    let mut index: HashMap<K, usize> = HashMap::new();
    index.insert(key(&identity), 0);
    let mut out = Closure {
        elements: vec![identity],
        parent: vec![(0, 0)],
        words: vec![vec![]],
        rmul: Vec::new(),
    };
    let mut head = 0;
    while head < out.elements.len() {
        for (gi, g) in gens.iter().enumerate() {
            let y = mul(&out.elements[head], g);
            let k = key(&y);
            if let Some(&j) = index.get(&k) {
                out.rmul.push(j);
                continue;
            }
            if out.elements.len() == bound {
                return Err(Error::OrderBoundExceeded { bound });
            }
            let j = out.elements.len();
            index.insert(k, j);
            let mut w = out.words[head].clone();
            w.push(gi);
            out.words.push(w);
            out.parent.push((head, gi));
            out.elements.push(y);
            out.rmul.push(j);
        }
        head += 1;
    }
    Ok(out)
}

fn float_key(m: &Matrix) -> Vec<i64> {
    m.entries()
        .iter()
        .flat_map(|s| {
            let z = s.to_c64();
            [(z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64]
        })
        .collect()
}

/// Enumerates the group generated by `gens`, failing once more than `bound`
/// elements appear.
pub fn build_group(gens: &Generators, bound: usize) -> Result<GroupTable> {
    match gens {
        Generators::Permutations(ps) => {
            let n = ps.first().ok_or(Error::NoGenerators)?.degree();
            if let Some(p) = ps.iter().find(|p| p.degree() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.degree(),
                });
            }
            let c = closure(
                Permutation::identity(n),
                ps,
                |a, b| a.then(b),
                Clone::clone,
                bound,
            )?;
            let labels = c.elements.iter().map(ToString::to_string).collect();
            let rep = c.elements.iter().map(Permutation::matrix).collect();
            Ok(finish(
                &c.parent,
                &c.rmul,
                ps.len(),
                labels,
                Some(rep),
                Some(c.elements.clone()),
            ))
        }
        Generators::Matrices(ms) => {
            let first = ms.first().ok_or(Error::NoGenerators)?;
            let n = first.rows();
            for (i, m) in ms.iter().enumerate() {
                if !m.is_square() || m.rows() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: m.rows(),
                    });
                }
                if m.det()?.is_zero() {
                    return Err(Error::NonInvertible { index: i });
                }
            }
            let mul = |a: &Matrix, b: &Matrix| a.mul(b).expect("square matrices of equal size");
            let c = if ms.iter().all(Matrix::is_exact) {
                let l = ms.iter().fold(1u32, |l, m| l.lcm(&m.conductor()));
                closure(Matrix::identity(n), ms, mul, |m| m.key(l), bound)?
            } else {
                closure(Matrix::identity(n), ms, mul, float_key, bound)?
            };
            let labels = c
                .words
                .iter()
                .map(|w| {
                    if w.is_empty() {
                        "e".to_string()
                    } else {
                        w.iter()
                            .map(|g| format!("g{}", g + 1))
                            .collect::<Vec<_>>()
                            .join("*")
                    }
                })
                .collect();
            Ok(finish(
                &c.parent,
                &c.rmul,
                ms.len(),
                labels,
                Some(c.elements),
                None,
            ))
        }
    }
}

fn finish(
    parent: &[(usize, usize)],
    rmul: &[usize],
    ngens: usize,
    labels: Vec<String>,
    rep: Option<Vec<Matrix>>,
    perms: Option<Vec<Permutation>>,
) -> GroupTable {
    let order = parent.len();
    let mut product = vec![0u32; order * order];
    for x in 0..order {
        product[x * order] = x as u32;
    }
    // y = p·g in the BFS tree, so x·y = (x·p)·g; parents precede children
    for y in 1..order {
        let (p, g) = parent[y];
        for x in 0..order {
            let xp = product[x * order + p] as usize;
            product[x * order + y] = rmul[xp * ngens + g] as u32;
        }
    }
    let mut inverse = vec![0; order];
    for x in 0..order {
        inverse[x] = (0..order)
            .find(|&y| product[x * order + y] == 0)
            .expect("finite group has inverses");
    }
    let generators = (0..ngens).map(|g| GroupElement(rmul[g])).collect();
    GroupTable {
        order,
        product,
        inverse,
        labels,
        rep,
        perms,
        generators,
    }
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + Clone {
        (0..self.order).map(GroupElement)
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement(self.product[a.0 * self.order + b.0] as usize)
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        GroupElement(self.inverse[a.0])
    }

    /// `g s g⁻¹`.
    pub fn conjugate(&self, g: GroupElement, s: GroupElement) -> GroupElement {
        self.mul(self.mul(g, s), self.inv(g))
    }

    pub fn commute(&self, a: GroupElement, b: GroupElement) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_central(&self, a: GroupElement) -> bool {
        self.elements().all(|g| self.commute(a, g))
    }

    pub fn element_order(&self, a: GroupElement) -> usize {
        let mut k = 1;
        let mut p = a;
        while p != self.identity() {
            p = self.mul(p, a);
            k += 1;
        }
        k
    }

    pub fn label(&self, a: GroupElement) -> &str {
        &self.labels[a.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Finds an element by label, accepting any cycle-notation spelling for
    /// permutation groups and `g1*g2`-style words for matrix groups.
    pub fn find(&self, label: &str) -> Option<GroupElement> {
        let label = label.trim();
        if let Some(i) = self.labels.iter().position(|l| l == label) {
            return Some(GroupElement(i));
        }
        if let Some(perms) = &self.perms {
            let p = Permutation::from_cycles(perms[0].degree(), label).ok()?;
            return self.find_permutation(&p);
        }
        let mut acc = self.identity();
        for part in label.split('*') {
            let part = part.trim();
            let k: usize = part.strip_prefix('g')?.parse().ok()?;
            acc = self.mul(acc, *self.generators.get(k.checked_sub(1)?)?);
        }
        Some(acc)
    }

    pub fn find_permutation(&self, p: &Permutation) -> Option<GroupElement> {
        self.perms
            .as_ref()?
            .iter()
            .position(|q| q == p)
            .map(GroupElement)
    }

    pub fn find_matrix(&self, m: &Matrix) -> Option<GroupElement> {
        self.rep
            .as_ref()?
            .iter()
            .position(|q| q == m)
            .map(GroupElement)
    }

    pub fn permutation(&self, a: GroupElement) -> Option<&Permutation> {
        self.perms.as_ref().map(|p| &p[a.0])
    }

    pub fn has_rep(&self) -> bool {
        self.rep.is_some()
    }

    pub fn rep(&self, a: GroupElement) -> Result<&Matrix> {
        self.rep
            .as_ref()
            .map(|r| &r[a.0])
            .ok_or(Error::NoRepresentation)
    }

    /// Dimension of the representation space.
    pub fn rep_dim(&self) -> Result<usize> {
        Ok(self.rep(self.identity())?.rows())
    }

    /// A triple violating associativity of the stored table, if any.
    pub fn associativity_witness(&self) -> Option<(GroupElement, GroupElement, GroupElement)> {
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// A pair violating `rep(a)·rep(b) = rep(ab)`, if any.
    pub fn homomorphism_witness(&self) -> Result<Option<(GroupElement, GroupElement)>> {
        for a in self.elements() {
            for b in self.elements() {
                if self.rep(a)?.mul(self.rep(b)?)? != *self.rep(self.mul(a, b))? {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    /// An element whose representing matrix is not unitary, if any.
    pub fn unitarity_witness(&self) -> Result<Option<GroupElement>> {
        for a in self.elements() {
            let m = self.rep(a)?;
            if !m.mul(&m.conj_transpose())?.is_identity() {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    /// Elements `s ≠ e` with `rank(rep(s) − I) = 1`.
    pub fn complex_reflections(&self) -> Result<Vec<GroupElement>> {
        let n = self.rep_dim()?;
        let id = Matrix::identity(n);
        let mut out = Vec::new();
        for a in self.elements().skip(1) {
            if self.rep(a)?.sub(&id)?.rank() == 1 {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// The complex reflections of order two.
    pub fn involutive_reflections(&self) -> Result<Vec<GroupElement>> {
        Ok(self
            .complex_reflections()?
            .into_iter()
            .filter(|&s| self.mul(s, s) == self.identity())
            .collect())
    }
}

/// The distinguished generating set S of a calculus: conjugation-stable,
/// inverse-closed, nonempty, and without the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetS {
    members: Vec<GroupElement>,
}

impl SubsetS {
    /// Checks the four defining conditions and returns the first failure.
    pub fn new(
        table: &GroupTable,
        members: impl IntoIterator<Item = GroupElement>,
    ) -> Result<Self> {
        let members: BTreeSet<GroupElement> = members.into_iter().collect();
        let report = validate_subset(table, &members);
        if let Some(c) = report.conditions.iter().find(|c| !c.passed) {
            return Err(Error::Validation {
                condition: c.number,
                detail: c.witness.clone().unwrap_or_default(),
            });
        }
        Ok(SubsetS {
            members: members.into_iter().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Position of `g` in the sorted member list.
    pub fn position(&self, g: GroupElement) -> Option<usize> {
        self.members.binary_search(&g).ok()
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.members.iter().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ConditionResult {
    pub number: u8,
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SubsetValidation {
    pub conditions: Vec<ConditionResult>,
}

impl SubsetValidation {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }
}

/// Checks inverse closure, conjugation stability, absence of the identity and
/// non-emptiness, reporting a witness for each failure.
pub fn validate_subset(table: &GroupTable, members: &BTreeSet<GroupElement>) -> SubsetValidation {
    let inverse = members
        .iter()
        .find(|&&s| !members.contains(&table.inv(s)))
        .map(|&s| {
            format!(
                "{}^-1 = {} is not in S",
                table.label(s),
                table.label(table.inv(s))
            )
        });
    let conj = table.elements().find_map(|g| {
        members.iter().find_map(|&s| {
            let t = table.conjugate(table.inv(g), s);
            (!members.contains(&t)).then(|| {
                format!(
                    "{g}^-1 {s} {g} = {t} is not in S",
                    g = table.label(g),
                    s = table.label(s),
                    t = table.label(t)
                )
            })
        })
    });
    let identity = members
        .contains(&table.identity())
        .then(|| "the identity lies in S".to_string());
    let empty = members.is_empty().then(|| "S is empty".to_string());
    let cond = |number, name, witness: Option<String>| ConditionResult {
        number,
        name,
        passed: witness.is_none(),
        witness,
    };
    SubsetValidation {
        conditions: vec![
            cond(1, "inverse-closed", inverse),
            cond(2, "conjugation-stable", conj),
            cond(3, "identity excluded", identity),
            cond(4, "nonempty", empty),
        ],
    }
}

/// The smallest conjugation-stable set containing `seeds` (and their inverses
/// when `add_inverses` is set).
pub fn conjugacy_closure(
    table: &GroupTable,
    seeds: &[GroupElement],
    add_inverses: bool,
) -> Result<SubsetS> {
    if seeds.is_empty() {
        return Err(Error::EmptySeed);
    }
    let mut set = BTreeSet::new();
    for &s in seeds {
        if s == table.identity() {
            return Err(Error::IdentityInSeed {
                seed: table.label(s).to_string(),
            });
        }
        for g in table.elements() {
            set.insert(table.conjugate(g, s));
            if add_inverses {
                set.insert(table.conjugate(g, table.inv(s)));
            }
        }
    }
    SubsetS::new(table, set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::Scalar;

    fn s3() -> GroupTable {
        let gens = vec![
            Permutation::from_cycles(3, "(1,2)").unwrap(),
            Permutation::from_cycles(3, "(1,3)").unwrap(),
        ];
        build_group(&Generators::Permutations(gens), DEFAULT_ORDER_BOUND).unwrap()
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::from_cycles(5, "(1 3 2)(4,5)").unwrap();
        assert_eq!(p.to_string(), "(1,3,2)(4,5)");
        assert_eq!(Permutation::from_cycles(5, &p.to_string()).unwrap(), p);
        assert!(Permutation::from_cycles(3, "(1,1)").is_err());
        assert!(Permutation::from_cycles(3, "(1,4)").is_err());
    }

    #[test]
    fn right_action_composition() {
        // (1,2) then (2,3): 1 -> 2 -> 3, 3 -> 2, 2 -> 1
        let a = Permutation::from_cycles(3, "(1,2)").unwrap();
        let b = Permutation::from_cycles(3, "(2,3)").unwrap();
        assert_eq!(a.then(&b).to_string(), "(1,3,2)");
    }

    #[test]
    fn symmetric_group_table() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert!(g.associativity_witness().is_none());
        assert!(g.homomorphism_witness().unwrap().is_none());
        assert!(g.unitarity_witness().unwrap().is_none());
        let a = g.find("(1,2)").unwrap();
        let b = g.find("(2 3)").unwrap();
        let ab = g.mul(a, b);
        assert_eq!(
            g.permutation(ab).unwrap(),
            &g.permutation(a).unwrap().then(g.permutation(b).unwrap())
        );
        assert_eq!(g.element_order(ab), 3);
        assert_eq!(g.complex_reflections().unwrap().len(), 3);
    }

    #[test]
    fn order_bound_is_enforced() {
        let gens = vec![
            Permutation::from_cycles(5, "(1,2)").unwrap(),
            Permutation::from_cycles(5, "(1,2,3,4,5)").unwrap(),
        ];
        assert_eq!(
            build_group(&Generators::Permutations(gens), 100).unwrap_err(),
            Error::OrderBoundExceeded { bound: 100 }
        );
    }

    #[test]
    fn singular_generator_rejected() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::one(), Scalar::one()],
            vec![Scalar::one(), Scalar::one()],
        ])
        .unwrap();
        assert_eq!(
            build_group(&Generators::Matrices(vec![m]), 10).unwrap_err(),
            Error::NonInvertible { index: 0 }
        );
    }

    #[test]
    fn subset_validation_witnesses() {
        let g = s3();
        let t = g.find("(1,2)").unwrap();
        let r = validate_subset(&g, &[t].into_iter().collect());
        assert!(r.conditions[0].passed);
        assert!(!r.conditions[1].passed);
        let w = r.conditions[1].witness.as_ref().unwrap();
        assert!(w.starts_with("(1,3)^-1 (1,2) (1,3)"), "{w}");
        assert!(matches!(
            SubsetS::new(&g, [t]),
            Err(Error::Validation { condition: 2, .. })
        ));
    }

    #[test]
    fn closure_of_a_transposition() {
        let g = s3();
        let s = conjugacy_closure(&g, &[g.find("(1,2)").unwrap()], false).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(
            conjugacy_closure(&g, &[g.identity()], false).unwrap_err(),
            Error::IdentityInSeed { seed: "()".into() }
        );
    }

    #[test]
    fn gaussian_matrix_group() {
        let i: Scalar = "i".parse().unwrap();
        let m = Matrix::from_rows(vec![vec![i]]).unwrap();
        let g = build_group(&Generators::Matrices(vec![m]), 100).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.label(GroupElement(2)), "g1*g1");
        assert_eq!(g.find("g1*g1"), Some(GroupElement(2)));
        assert_eq!(g.complex_reflections().unwrap().len(), 3);
        assert_eq!(g.involutive_reflections().unwrap().len(), 1);
    }
}
