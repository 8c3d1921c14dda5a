//! The `dunkl-forge` command line: loads inputs, runs the checks and prints
//! a text report, optionally writing the same report as JSON.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Calculus, GermVector};
use crate::config::{parse_input, Input, Setup};
use crate::corpus;
use crate::cyclic_geom::{self as cg, CyclicSpace};
use crate::dunkl::{commutator_check, MAX_COMMUTATOR_DEGREE};
use crate::error::{Error, Result};
use crate::exact_poly::{random_sparse, Scalar};
use crate::forms_numeric::{self as forms, CLOSEDNESS_TOL, DEFAULT_TOL};
use crate::group_core::{validate_subset, GroupTable};
use crate::report::{Check, Report, Section};

/// Largest |S| for which the braid checks are run.
pub const MAX_BRAID_S: usize = 30;

#[derive(Parser, Debug)]
#[command(
    name = "dunkl-forge",
    version,
    about = "Checks quantum differential calculi, cyclic spaces, Dunkl operators and displacement forms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orbits, cyclic lines, braid relations and germ identities of (G, S).
    Analyze(RunArgs),
    /// Cyclic-space axioms and group reconstruction.
    Verify(RunArgs),
    /// Commutativity of the Dunkl operators.
    Dunkl(RunArgs),
    /// Coxeter-type conditions and displacement-form checks.
    Forms(RunArgs),
}

#[derive(clap::Args, Debug, Clone)]
pub struct RunArgs {
    /// Input files, or `corpus:<name>` for a bundled example.
    #[arg(required = true)]
    pub paths: Vec<String>,
    /// Total degree bound for the commutator check.
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
    /// Number of random samples (points or polynomials).
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance for numeric checks.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Tolerance for the finite-difference closedness check.
    #[arg(long, default_value_t = CLOSEDNESS_TOL)]
    pub closed_tol: f64,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Verify(_) => "verify",
            Command::Dunkl(_) => "dunkl",
            Command::Forms(_) => "forms",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Analyze(a) | Command::Verify(a) | Command::Dunkl(a) | Command::Forms(a) => a,
        }
    }
}

/// Reads a path or a `corpus:` reference.
pub fn load(path: &str) -> Result<Input> {
    match path.strip_prefix("corpus:") {
        Some(name) => corpus::load(name),
        None => {
            let src =
                std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            parse_input(&src)
        }
    }
}

fn default_name(path: &str) -> String {
    let p = path.strip_prefix("corpus:").unwrap_or(path);
    std::path::Path::new(p)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| p.to_string())
}

fn config_of(path: &str, command: &str) -> Result<Setup> {
    match load(path)? {
        Input::Config(c) => c.resolve(&default_name(path)),
        Input::Space(_) => Err(Error::Config(format!(
            "{path}: `{command}` needs a group configuration, not a cyclic space"
        ))),
    }
}

fn germ_label(table: &GroupTable, v: &GermVector) -> String {
    let mut out = String::new();
    for (g, c) in &v.0 {
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let a = c.abs();
        if !a.is_one() {
            out.push_str(&format!("{a}*"));
        }
        out.push_str(&format!("e_{}", table.label(*g)));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn describe_group(section: &mut Section, setup: &Setup) {
    let t = &setup.table;
    section.fact("group order", t.order());
    section.fact("|S|", setup.s.len());
    let members: Vec<&str> = setup.s.iter().map(|g| t.label(g)).collect();
    section.fact("S", members.join(" "));
}

/// `analyze` on one configuration.
pub fn analyze(setup: &Setup) -> Result<Section> {
    let t = &setup.table;
    let mut sec = Section::new(&setup.name);
    describe_group(&mut sec, setup);
    let members: BTreeSet<_> = setup.s.iter().collect();
    for c in validate_subset(t, &members).conditions {
        sec.checks.push(Check::exact(
            format!("S condition {}: {}", c.number, c.name),
            c.witness,
        ));
    }

    let calc = Calculus::new(t, &setup.s);
    sec.fact("germ of e", germ_label(t, &calc.germ(t.identity())));
    sec.checks
        .push(Check::exact("germ identity", calc.germ_identity_witness()));
    sec.checks.push(Check::exact(
        "d agrees with the inner derivation",
        calc.inner_derivation_witness()
            .map(|g| format!("g = {}", t.label(g))),
    ));
    sec.checks.push(Check::exact(
        "bimodule compatibility of d",
        calc.module_compatibility_witness()
            .map(|g| format!("g = {}", t.label(g))),
    ));
    sec.checks.push(Check::exact(
        "ad coaction is coassociative",
        t.elements()
            .find(|&g| !calc.ad_coaction_is_coassociative(g))
            .map(|g| format!("g = {}", t.label(g))),
    ));

    let orbits = cg::enumerate_orbits(&calc);
    sec.fact("orbits", orbits.len());
    let mut distinct = None;
    let mut invariant = None;
    for (k, o) in orbits.iter().enumerate() {
        let line = o.line();
        let labels: Vec<&str> = line.iter().map(|&g| t.label(g)).collect();
        let inv = match cg::orbit_invariant(t, o) {
            Ok(g) => t.label(g).to_string(),
            Err(e) => {
                invariant.get_or_insert_with(|| e.to_string());
                "?".into()
            }
        };
        sec.fact(
            format!("orbit {}", k + 1),
            format!("line ({}), Inv = {inv}", labels.join(", ")),
        );
        if (!o.is_chained() || line.iter().collect::<BTreeSet<_>>().len() != line.len())
            && distinct.is_none()
        {
            distinct = Some(format!("orbit ({})", labels.join(", ")));
        }
    }
    sec.checks
        .push(Check::exact("orbit first components distinct", distinct));
    sec.checks
        .push(Check::exact("orbit product constant", invariant));

    let kernel = calc.kernel_dim_exact();
    sec.fact("dim ker(id - sigma)", kernel);
    sec.fact(
        "dim of degree-2 quadratic part",
        calc.quadratic_degree2_dim(),
    );
    sec.checks.push(Check::exact(
        "orbit count equals dim ker(id - sigma)",
        (kernel != orbits.len())
            .then(|| format!("{} orbits, kernel dimension {kernel}", orbits.len())),
    ));

    if setup.s.len() <= MAX_BRAID_S {
        let b = cg::braid_check(&calc, 4)?;
        sec.checks.push(
            Check::exact("braid relation on S^3", b.braid_witness)
                .with_detail(format!("{} tuples", b.braid_tuples)),
        );
        sec.checks.push(
            Check::exact("far commutation on S^4", b.far_commutation_witness)
                .with_detail(format!("{} tuples", b.far_tuples)),
        );
    } else {
        let why = format!("|S| = {} exceeds {MAX_BRAID_S}", setup.s.len());
        sec.checks
            .push(Check::skipped("braid relation on S^3", why.clone()));
        sec.checks
            .push(Check::skipped("far commutation on S^4", why));
    }
    Ok(sec)
}

fn axiom_checks(sec: &mut Section, space: &CyclicSpace, seed: u64) {
    let report = cg::verify_cyclic_axioms(space, seed);
    sec.fact("points", report.points);
    sec.fact("lines", report.lines);
    for c in &report.checks {
        // properties of the space rather than identities it must satisfy
        if c.name == cg::LEFT_CANCELLATION || c.name == cg::NON_TRIVIALITY {
            let v = match &c.witness {
                None => "holds".to_string(),
                Some(w) => format!("fails ({w})"),
            };
            sec.fact(c.name, v);
            continue;
        }
        let mut check = Check::exact(c.name, c.witness.clone());
        if !c.exhaustive {
            check = check.with_detail("sampled");
        }
        sec.checks.push(check);
    }
}

fn reconstruction_checks(sec: &mut Section, space: &CyclicSpace, seed: u64) -> Result<()> {
    match cg::reconstruct_group(space, seed) {
        Ok(r) => {
            sec.fact("reconstructed group order", r.group.order());
            sec.fact("embedding injective", r.injective);
            sec.checks.push(Check::exact(
                "reconstructed action is conjugation",
                r.conjugation_witness,
            ));
        }
        Err(Error::AxiomsNotVerified(why)) => {
            sec.fact("reconstruction", format!("refused ({why})"))
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

/// `verify` on a configuration (its group-derived space) or a cyclic space.
pub fn verify(input: &Input, name: &str, seed: u64) -> Result<Section> {
    match input {
        Input::Config(c) => {
            let setup = c.resolve(name)?;
            let mut sec = Section::new(&setup.name);
            describe_group(&mut sec, &setup);
            let calc = Calculus::new(&setup.table, &setup.s);
            let space = CyclicSpace::from_group(&calc)?;
            axiom_checks(&mut sec, &space, seed);
            sec.checks.push(Check::exact(
                "x ◀ y = y^-1 x y",
                cg::group_conjugation_witness(&space, &setup.table),
            ));
            reconstruction_checks(&mut sec, &space, seed)?;
            Ok(sec)
        }
        Input::Space(s) => {
            let space = s.build()?;
            let mut sec = Section::new(s.name.clone().unwrap_or_else(|| name.to_string()));
            axiom_checks(&mut sec, &space, seed);
            reconstruction_checks(&mut sec, &space, seed)?;
            Ok(sec)
        }
    }
}

/// `dunkl` on one configuration.
pub fn dunkl(setup: &Setup, degree: usize, samples: usize, seed: u64) -> Result<Section> {
    if degree > MAX_COMMUTATOR_DEGREE {
        return Err(Error::DegreeBound {
            degree,
            bound: MAX_COMMUTATOR_DEGREE,
        });
    }
    let cfg = setup.dunkl_config()?;
    let t = &setup.table;
    let mut sec = Section::new(&setup.name);
    describe_group(&mut sec, setup);
    sec.fact("mode", cfg.mode());
    for d in cfg.data() {
        sec.fact(
            format!("root of {}", t.label(d.element)),
            format!("{} (nu = {})", d.root, d.multiplicity),
        );
    }

    let r = commutator_check(&cfg, degree)?;
    let witness = r
        .failures
        .first()
        .map(|f| format!("[D_{}, D_{}] {} = {}", f.j, f.k, f.monomial, f.residual));
    let mut c =
        Check::exact(format!("commutativity up to degree {degree}"), witness).with_detail(format!(
            "{} monomials, {} pairs, {} nonzero commutators",
            r.monomials, r.pairs, r.failure_count
        ));
    c.max_residual = Some(r.max_residual);
    c.tolerance = Some(0.0);
    sec.checks.push(c);

    let zero = cfg.with_multiplicities(vec![Scalar::zero(); setup.s.len()])?;
    let n = cfg.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reduction = None;
    let mut equivariance = None;
    for k in 0..samples {
        let p = random_sparse(n, degree.min(6), 5, &mut rng);
        for j in 0..n {
            if zero.apply(j, &p)? != p.partial_derivative(j)? && reduction.is_none() {
                reduction = Some(format!("sample {k}, j = {}: p = {p}", j + 1));
            }
        }
        // equivariance is costlier; a handful of samples suffices
        if k < 5 && equivariance.is_none() {
            equivariance = cfg
                .equivariance_witness(&p)?
                .map(|(g, j)| format!("g = {}, j = {}, p = {p}", t.label(g), j + 1));
        }
    }
    sec.checks.push(
        Check::exact("zero multiplicity gives partial derivatives", reduction)
            .with_detail(format!("{samples} random polynomials")),
    );
    sec.checks.push(
        Check::exact("equivariance", equivariance)
            .with_detail(format!("{} random polynomials", samples.min(5))),
    );
    Ok(sec)
}

/// `forms` on one configuration.
pub fn forms(
    setup: &Setup,
    samples: usize,
    seed: u64,
    tol: f64,
    closed_tol: f64,
) -> Result<Section> {
    let cfg = setup.displacement_config()?;
    let t = &setup.table;
    let mut sec = Section::new(&setup.name);
    describe_group(&mut sec, setup);
    for (i, mu) in cfg.mu().iter().enumerate() {
        let parts: Vec<String> = mu
            .iter()
            .map(|z| format!("{:.6}{:+.6}i", z.re, z.im))
            .collect();
        sec.fact(
            format!("eigenline of {}", t.label(setup.s.members()[i])),
            format!("[{}]", parts.join(", ")),
        );
    }
    sec.fact("cyclic lines", cfg.lines().len());
    sec.checks.extend(forms::coxeter_type_check(&cfg, tol));
    sec.checks.extend(forms::displacement_checks(
        &cfg, samples, seed, tol, closed_tol,
    )?);
    sec.checks.push(forms::container_check(&cfg)?);
    Ok(sec)
}

/// Runs one command over all its inputs.
pub fn execute(command: &Command) -> Result<Report> {
    let a = command.args();
    let name = command.name();
    let mut parameters = vec![("seed".to_string(), a.seed.to_string())];
    match command {
        Command::Dunkl(_) => {
            parameters.push(("degree".into(), a.degree.to_string()));
            parameters.push(("samples".into(), a.samples.to_string()));
        }
        Command::Forms(_) => {
            parameters.push(("samples".into(), a.samples.to_string()));
            parameters.push(("tol".into(), format!("{:e}", a.tol)));
            parameters.push(("closed_tol".into(), format!("{:e}", a.closed_tol)));
        }
        _ => {}
    }
    let mut sections = Vec::new();
    for path in &a.paths {
        let sec = match command {
            Command::Analyze(_) => analyze(&config_of(path, name)?)?,
            Command::Verify(_) => verify(&load(path)?, &default_name(path), a.seed)?,
            Command::Dunkl(_) => dunkl(&config_of(path, name)?, a.degree, a.samples, a.seed)?,
            Command::Forms(_) => forms(
                &config_of(path, name)?,
                a.samples,
                a.seed,
                a.tol,
                a.closed_tol,
            )?,
        };
        sections.push(sec);
    }
    Ok(Report {
        command: name.to_string(),
        parameters,
        sections,
    })
}

/// Parses arguments, runs, prints, and returns the exit code: 0 when every
/// check passes, 1 when one fails, 2 on bad input or usage.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let _ = writeln!(out, "{report}");
    if let Some(path) = &cli.command.args().json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 2;
        }
    }
    if report.passed() {
        0
    } else {
        1
    }
}
