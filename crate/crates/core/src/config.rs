//! JSON inputs: group specifications, configurations and cyclic spaces.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Deserialize;
use serde_json::Value;

use crate::cyclic_geom::CyclicSpace;
use crate::dunkl::{default_root, DunklConfig, Mode};
use crate::error::{Error, Result};
use crate::exact_poly::{LinearForm, Matrix, Scalar, ScalarKind};
use crate::forms_numeric::DisplacementConfig;
use crate::group_core::{
    build_group, conjugacy_closure, Generators, GroupElement, GroupTable, Permutation, SubsetS,
    DEFAULT_ORDER_BOUND,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Permutation,
    Matrix,
}

/// `{ "kind", "degree", "generators", "scalar" }`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub degree: usize,
    pub generators: Vec<Value>,
    #[serde(default)]
    pub scalar: Option<String>,
    #[serde(default)]
    pub order_bound: Option<usize>,
}

/// How S is given: a keyword, an explicit element list, or seeds to close
/// under conjugation.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SSpec {
    Keyword(String),
    Elements(Vec<Value>),
    Seeds {
        seeds: Vec<Value>,
        #[serde(default)]
        add_inverses: bool,
    },
}

/// A single multiplicity for all of S, or values keyed by class representative.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum NuSpec {
    Uniform(Scalar),
    ByClass(BTreeMap<String, Scalar>),
}

/// A complete input for `analyze`, `dunkl` and `forms`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub group: GroupSpec,
    #[serde(rename = "S")]
    pub s: SSpec,
    #[serde(default)]
    pub roots: BTreeMap<String, Vec<Scalar>>,
    #[serde(default)]
    pub nu: Option<NuSpec>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub scalar: Option<String>,
    #[serde(default)]
    pub mu_override: BTreeMap<String, Vec<Scalar>>,
    #[serde(default)]
    pub allow_nonconstant_nu: bool,
}

/// `{ "points": [...], "lines": [[...], ...] }` with points given by label.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub points: Vec<String>,
    pub lines: Vec<Vec<String>>,
}

/// Either kind of input file.
#[derive(Clone, Debug)]
pub enum Input {
    Config(Box<ConfigFile>),
    Space(SpaceFile),
}

/// Parses JSON text, reporting malformed input with its byte offset.
pub fn parse_json<T: serde::de::DeserializeOwned>(src: &str) -> Result<T> {
    serde_json::from_str(src).map_err(|e| Error::from_json(e, src))
}

pub fn parse_input(src: &str) -> Result<Input> {
    let v: Value = parse_json(src)?;
    if v.get("points").is_some() {
        Ok(Input::Space(
            serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))?,
        ))
    } else {
        Ok(Input::Config(Box::new(
            serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))?,
        )))
    }
}

fn scalar_from_value(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => n.to_string().parse(),
        _ => Err(Error::Config(format!("expected a scalar, found {v}"))),
    }
}

fn check_field(s: &Scalar, kind: ScalarKind) -> Result<()> {
    let m = match kind {
        ScalarKind::Rational => 1,
        ScalarKind::Cyclotomic(m) => m,
        ScalarKind::Float => return Ok(()),
    };
    // Q(z_m) = Q(z_2m) for odd m.
    if m.lcm(&2) % s.conductor() != 0 {
        return Err(Error::Config(format!(
            "entry {s} does not lie in the declared field"
        )));
    }
    Ok(())
}

fn matrix_from_value(v: &Value, n: usize, kind: ScalarKind) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Config(format!("expected a matrix, found {v}")))?;
    let rows: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Config(format!("expected a matrix row, found {r}")))?
                .iter()
                .map(|x| {
                    let s = scalar_from_value(x)?;
                    check_field(&s, kind)?;
                    Ok(s.into_kind(kind))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let m = Matrix::from_rows(rows)?;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows().max(m.cols()),
        });
    }
    Ok(m)
}

fn permutation_from_value(v: &Value, n: usize) -> Result<Permutation> {
    match v {
        Value::String(s) => Permutation::from_cycles(n, s),
        Value::Array(a) => {
            let images = a
                .iter()
                .map(|x| x.as_u64().filter(|&i| i >= 1).map(|i| i as usize - 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Config(format!("expected 1-based images, found {v}")))?;
            if images.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: images.len(),
                });
            }
            Permutation::from_images(images)
        }
        _ => Err(Error::Config(format!("expected a permutation, found {v}"))),
    }
}

impl GroupSpec {
    pub fn scalar_kind(&self, fallback: Option<&str>) -> Result<ScalarKind> {
        self.scalar
            .as_deref()
            .or(fallback)
            .unwrap_or("rational")
            .parse()
    }

    pub fn build(&self, fallback_scalar: Option<&str>) -> Result<GroupTable> {
        let kind = self.scalar_kind(fallback_scalar)?;
        let gens = match self.kind {
            GroupKind::Permutation => Generators::Permutations(
                self.generators
                    .iter()
                    .map(|g| permutation_from_value(g, self.degree))
                    .collect::<Result<_>>()?,
            ),
            GroupKind::Matrix => Generators::Matrices(
                self.generators
                    .iter()
                    .map(|g| matrix_from_value(g, self.degree, kind))
                    .collect::<Result<_>>()?,
            ),
        };
        build_group(&gens, self.order_bound.unwrap_or(DEFAULT_ORDER_BOUND))
    }
}

fn element_from_value(table: &GroupTable, v: &Value, kind: ScalarKind) -> Result<GroupElement> {
    let found = match v {
        Value::String(s) => table.find(s),
        Value::Array(a) if a.first().is_some_and(Value::is_array) => {
            let n = table.rep_dim()?;
            table.find_matrix(&matrix_from_value(v, n, kind)?)
        }
        Value::Array(_) => {
            let n = table
                .permutation(table.identity())
                .map(|p| p.degree())
                .ok_or(Error::NoRepresentation)?;
            table.find_permutation(&permutation_from_value(v, n)?)
        }
        _ => None,
    };
    found.ok_or_else(|| Error::Config(format!("{v} is not an element of the group")))
}

/// A resolved configuration: the group, S and the per-member data.
#[derive(Clone, Debug)]
pub struct Setup {
    pub name: String,
    pub table: GroupTable,
    pub s: SubsetS,
    pub mode: Mode,
    pub kind: ScalarKind,
    /// Indexed like `s.members()`.
    pub nu: Option<Vec<Scalar>>,
    pub roots: BTreeMap<usize, LinearForm>,
    pub mu_override: Vec<(usize, Vec<Complex64>)>,
    pub allow_nonconstant_nu: bool,
}

impl ConfigFile {
    pub fn resolve(&self, default_name: &str) -> Result<Setup> {
        let fallback = self.scalar.as_deref();
        let kind = self.group.scalar_kind(fallback)?;
        let table = self.group.build(fallback)?;
        let elem = |v: &Value| element_from_value(&table, v, kind);
        let s = match &self.s {
            SSpec::Keyword(k) => {
                let members = match k.as_str() {
                    "reflections" => table.complex_reflections()?,
                    "involutive_reflections" => table.involutive_reflections()?,
                    "all_nonidentity" => table.elements().skip(1).collect(),
                    other => return Err(Error::Config(format!("unknown S keyword {other:?}"))),
                };
                SubsetS::new(&table, members)?
            }
            SSpec::Elements(list) => {
                SubsetS::new(&table, list.iter().map(elem).collect::<Result<Vec<_>>>()?)?
            }
            SSpec::Seeds {
                seeds,
                add_inverses,
            } => conjugacy_closure(
                &table,
                &seeds.iter().map(elem).collect::<Result<Vec<_>>>()?,
                *add_inverses,
            )?,
        };
        let member = |label: &str| -> Result<usize> {
            let g = table.find(label).ok_or_else(|| {
                Error::Config(format!("{label:?} is not an element of the group"))
            })?;
            s.position(g)
                .ok_or_else(|| Error::NotInS(label.to_string()))
        };
        let nu = match &self.nu {
            None => None,
            Some(NuSpec::Uniform(v)) => Some(vec![v.clone(); s.len()]),
            Some(NuSpec::ByClass(map)) => {
                let keyed: Vec<(usize, &Scalar)> = map
                    .iter()
                    .map(|(k, v)| Ok((member(k)?, v)))
                    .collect::<Result<_>>()?;
                let values = s
                    .iter()
                    .enumerate()
                    .map(|(i, el)| {
                        if let Some((_, v)) = keyed.iter().find(|(k, _)| *k == i) {
                            return Ok((*v).clone());
                        }
                        keyed
                            .iter()
                            .find(|(k, _)| {
                                table
                                    .elements()
                                    .any(|g| table.conjugate(g, s.members()[*k]) == el)
                            })
                            .map(|(_, v)| (*v).clone())
                            .ok_or_else(|| {
                                Error::Config(format!(
                                    "no multiplicity given for the class of {}",
                                    table.label(el)
                                ))
                            })
                    })
                    .collect::<Result<_>>()?;
                Some(values)
            }
        };
        let roots = self
            .roots
            .iter()
            .map(|(k, v)| {
                Ok((
                    member(k)?,
                    LinearForm::new(v.iter().map(|c| c.clone().into_kind(kind)).collect()),
                ))
            })
            .collect::<Result<_>>()?;
        let mu_override = self
            .mu_override
            .iter()
            .map(|(k, v)| Ok((member(k)?, v.iter().map(Scalar::to_c64).collect())))
            .collect::<Result<_>>()?;
        Ok(Setup {
            name: self
                .name
                .clone()
                .unwrap_or_else(|| default_name.to_string()),
            table,
            s,
            mode: self.mode.unwrap_or(Mode::Real),
            kind,
            nu,
            roots,
            mu_override,
            allow_nonconstant_nu: self.allow_nonconstant_nu,
        })
    }
}

impl Setup {
    fn nu_or_err(&self) -> Result<&[Scalar]> {
        self.nu
            .as_deref()
            .ok_or_else(|| Error::Config("the configuration has no multiplicities (\"nu\")".into()))
    }

    pub fn dunkl_config(&self) -> Result<DunklConfig> {
        self.dunkl_config_with(self.nu_or_err()?.to_vec())
    }

    /// The Dunkl configuration with the given multiplicities instead.
    pub fn dunkl_config_with(&self, nu: Vec<Scalar>) -> Result<DunklConfig> {
        let roots = if self.roots.is_empty() {
            None
        } else {
            Some(
                self.s
                    .iter()
                    .enumerate()
                    .map(|(i, el)| match self.roots.get(&i) {
                        Some(r) => Ok(r.clone()),
                        None => default_root(&self.table, el, self.mode),
                    })
                    .collect::<Result<_>>()?,
            )
        };
        let nu = nu.into_iter().map(|v| v.into_kind(self.kind)).collect();
        DunklConfig::new(
            self.table.clone(),
            self.s.clone(),
            roots,
            nu,
            self.mode,
            self.allow_nonconstant_nu,
        )
    }

    pub fn displacement_config(&self) -> Result<DisplacementConfig> {
        let nu = self.nu_or_err()?.iter().map(Scalar::to_c64).collect();
        DisplacementConfig::new(self.table.clone(), self.s.clone(), nu, &self.mu_override)
    }
}

impl SpaceFile {
    pub fn build(&self) -> Result<CyclicSpace> {
        let index = |l: &String| {
            self.points
                .iter()
                .position(|p| p == l)
                .ok_or_else(|| Error::Config(format!("unknown point {l:?}")))
        };
        let lines = self
            .lines
            .iter()
            .map(|line| line.iter().map(index).collect())
            .collect::<Result<_>>()?;
        CyclicSpace::new_unchecked(self.points.clone(), lines)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_json_reports_offset() {
        let src = "{\n  \"group\": [1, 2,,]\n}";
        match parse_input(src) {
            Err(Error::Json { offset, line, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(&src[offset..offset + 1], ",");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn resolves_class_multiplicities() {
        let src = r#"{
            "group": {"kind": "matrix", "degree": 2, "scalar": "rational",
                      "generators": [[[-1, 0], [0, 1]], [[0, 1], [1, 0]]]},
            "S": "reflections",
            "nu": {"g1": "1/2", "g2": "1/3"}
        }"#;
        let Input::Config(c) = parse_input(src).unwrap() else {
            panic!()
        };
        let setup = c.resolve("b2").unwrap();
        assert_eq!(setup.table.order(), 8);
        assert_eq!(setup.s.len(), 4);
        let nu = setup.nu.as_ref().unwrap();
        assert_eq!(nu.iter().filter(|v| **v == Scalar::ratio(1, 2)).count(), 2);
        assert!(setup.dunkl_config().is_ok());
    }

    #[test]
    fn missing_class_is_an_error() {
        let src = r#"{
            "group": {"kind": "matrix", "degree": 2, "generators": [[[-1, 0], [0, 1]], [[0, 1], [1, 0]]]},
            "S": "reflections",
            "nu": {"g1": "1/2"}
        }"#;
        let Input::Config(c) = parse_input(src).unwrap() else {
            panic!()
        };
        assert!(matches!(c.resolve("x"), Err(Error::Config(_))));
    }

    #[test]
    fn entries_must_lie_in_the_declared_field() {
        let src = r#"{"group": {"kind": "matrix", "degree": 1, "scalar": "rational", "generators": [[["i"]]]}, "S": "reflections"}"#;
        let Input::Config(c) = parse_input(src).unwrap() else {
            panic!()
        };
        assert!(matches!(c.resolve("x"), Err(Error::Config(_))));
    }

    #[test]
    fn space_files_are_recognised() {
        let src = r#"{"points": ["a", "b"], "lines": [["a"], ["b"], ["a", "b"]]}"#;
        let Input::Space(s) = parse_input(src).unwrap() else {
            panic!()
        };
        let space = s.build().unwrap();
        assert_eq!(space.lines().len(), 3);
        assert!(space.oriented_line_witness().is_none());
    }
}
