//! Bundled example inputs, addressable on the command line as `corpus:<name>`.

use crate::config::{parse_input, Input};
use crate::error::{Error, Result};

macro_rules! entry {
    ($name:literal) => {
        ($name, include_str!(concat!("../corpus/", $name, ".json")))
    };
}

/// Inputs on which every check is expected to pass.
pub const POSITIVE: &[(&str, &str)] = &[
    entry!("a1"),
    entry!("a2"),
    entry!("b2"),
    entry!("i2_4"),
    entry!("a1xa1"),
    entry!("q8"),
    entry!("z4"),
    entry!("g312"),
];

/// Constructed failures: each makes at least one check fail with a witness.
pub const NEGATIVE: &[(&str, &str)] = &[
    entry!("b2_nonconstant_nu"),
    entry!("b2_perturbed_eigenline"),
    entry!("a2_generic_lines"),
];

/// Cyclic spaces given directly by points and lines.
pub const SPACES: &[(&str, &str)] = &[entry!("fano")];

pub fn source(name: &str) -> Option<&'static str> {
    POSITIVE
        .iter()
        .chain(NEGATIVE)
        .chain(SPACES)
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<Input> {
    parse_input(
        source(name).ok_or_else(|| Error::Config(format!("no corpus entry named {name:?}")))?,
    )
}

pub fn names() -> impl Iterator<Item = &'static str> {
    POSITIVE
        .iter()
        .chain(NEGATIVE)
        .chain(SPACES)
        .map(|(n, _)| *n)
}
