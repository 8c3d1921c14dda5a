//! Check results and the reports the CLI prints and writes as JSON.

use std::fmt;

use serde::{Serialize, Serializer};

/// Key/value lists keep their order in text but serialize as JSON objects.
fn as_map<S: Serializer>(pairs: &[(String, String)], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_map(pairs.iter().map(|(k, v)| (k, v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

/// One verdict. Exact checks leave `max_residual` and `tolerance` empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub max_residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes exactly when there is no witness.
    pub fn exact(name: impl Into<String>, witness: Option<String>) -> Self {
        let status = if witness.is_some() {
            Status::Fail
        } else {
            Status::Pass
        };
        Check {
            name: name.into(),
            status,
            max_residual: None,
            tolerance: None,
            witness,
            detail: None,
        }
    }

    /// Passes when the residual is within tolerance and there is no witness.
    pub fn numeric(
        name: impl Into<String>,
        residual: f64,
        tol: f64,
        witness: Option<String>,
    ) -> Self {
        let ok = residual <= tol && witness.is_none();
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            max_residual: Some(residual),
            tolerance: Some(tol),
            witness,
            detail: None,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Skipped,
            max_residual: None,
            tolerance: None,
            witness: None,
            detail: Some(reason.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.status, self.name)?;
        if let (Some(r), Some(t)) = (self.max_residual, self.tolerance) {
            write!(f, " (max residual {r:.3e}, tolerance {t:.0e})")?;
        }
        if let Some(d) = &self.detail {
            write!(f, ": {d}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, "\n       witness: {w}")?;
        }
        Ok(())
    }
}

/// A titled group of checks plus free-form facts, one per input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub input: String,
    #[serde(serialize_with = "as_map")]
    pub facts: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn new(input: impl Into<String>) -> Self {
        Section {
            input: input.into(),
            facts: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl ToString) {
        self.facts.push((key.into(), value.to_string()));
    }
}

/// The whole output of one CLI run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(serialize_with = "as_map")]
    pub parameters: Vec<(String, String)>,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.sections
            .iter()
            .flat_map(|s| &s.checks)
            .all(Check::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dunkl-forge {}", self.command)?;
        for (k, v) in &self.parameters {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        for s in &self.sections {
            writeln!(f, "\n== {}", s.input)?;
            for (k, v) in &s.facts {
                writeln!(f, "  {k}: {v}")?;
            }
            for c in &s.checks {
                writeln!(f, "  {c}")?;
            }
        }
        let failed = self
            .sections
            .iter()
            .flat_map(|s| &s.checks)
            .filter(|c| !c.passed())
            .count();
        write!(
            f,
            "\n{}",
            if failed == 0 {
                "all checks passed".to_string()
            } else {
                format!("{failed} check(s) failed")
            }
        )
    }
}
