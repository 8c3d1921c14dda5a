//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dunkl_forge::calculus::Calculus;
use dunkl_forge::config::{Input, Setup};
use dunkl_forge::corpus;
use dunkl_forge::cyclic_geom::{self as cg, CyclicSpace};
use dunkl_forge::dunkl::commutator_check;
use dunkl_forge::exact_poly::{random_sparse, Scalar};
use dunkl_forge::forms_numeric::{self as forms, cyclic_sum, CLOSEDNESS_TOL, DEFAULT_TOL};
use dunkl_forge::group_core::{GroupElement, GroupTable};
use dunkl_forge::report::Status;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Every (group, S) configuration in the corpus.
fn configs() -> Vec<Setup> {
    corpus::POSITIVE
        .iter()
        .chain(corpus::NEGATIVE)
        .map(
            |(name, src)| match dunkl_forge::config::parse_input(src).unwrap() {
                Input::Config(c) => c.resolve(name).unwrap(),
                Input::Space(_) => unreachable!(),
            },
        )
        .collect()
}

/// The complex reflection groups of the corpus with their multiplicities.
fn reflection_configs() -> Vec<Setup> {
    let names = ["a1", "a2", "b2", "i2_4", "a1xa1", "z4", "g312"];
    configs()
        .into_iter()
        .filter(|s| names.contains(&s.name.as_str()))
        .collect()
}

fn setup(name: &str) -> Setup {
    configs().into_iter().find(|s| s.name == name).unwrap()
}

fn within(start: Instant, limit: Duration, detail: String) -> Outcome {
    let t = start.elapsed();
    if t <= limit {
        Ok(format!("{detail}; {:.2} s", t.as_secs_f64()))
    } else {
        Err(format!(
            "{detail}; took {:.2} s, limit {} s",
            t.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn germ_identity() -> Outcome {
    let all = configs();
    let start = Instant::now();
    for s in &all {
        let calc = Calculus::new(&s.table, &s.s);
        // e_e plus the sum of the e_s, coefficient by coefficient
        let mut total = calc.germ(s.table.identity());
        for g in s.s.iter() {
            total = total.add(&calc.germ(g));
        }
        if !total.is_zero() {
            return Err(format!("{}: germ sum is nonzero", s.name));
        }
    }
    within(
        start,
        Duration::from_secs(1),
        format!("{} configurations, exact", all.len()),
    )
}

fn differential_consistency() -> Outcome {
    let all = configs();
    let start = Instant::now();
    let mut elements = 0;
    for s in all.iter().filter(|s| s.table.order() <= 200) {
        let calc = Calculus::new(&s.table, &s.s);
        for g in s.table.elements() {
            if calc.differential_delta(g) != calc.inner_derivation(g) {
                return Err(format!(
                    "{}: d(delta_{}) differs from the inner derivation",
                    s.name,
                    s.table.label(g)
                ));
            }
            elements += 1;
        }
    }
    within(
        start,
        Duration::from_secs(5),
        format!("{elements} group elements, exact"),
    )
}

/// Orbits of (g, h) ↦ (g h g⁻¹, g) by direct iteration, as sets of pairs.
fn brute_force_orbits(
    t: &GroupTable,
    s: &[GroupElement],
) -> BTreeSet<BTreeSet<(GroupElement, GroupElement)>> {
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for &a in s {
        for &b in s {
            if seen.contains(&(a, b)) {
                continue;
            }
            let mut orbit = BTreeSet::new();
            let mut p = (a, b);
            while orbit.insert(p) {
                seen.insert(p);
                p = (t.mul(t.mul(p.0, p.1), t.inv(p.0)), p.0);
            }
            out.insert(orbit);
        }
    }
    out
}

fn orbit_structure() -> Outcome {
    let mut count = 0;
    for s in configs() {
        let calc = Calculus::new(&s.table, &s.s);
        for o in cg::enumerate_orbits(&calc) {
            let line = o.line();
            if line.iter().collect::<BTreeSet<_>>().len() != line.len() || !o.is_chained() {
                return Err(format!("{}: repeated first component in an orbit", s.name));
            }
            cg::orbit_invariant(&s.table, &o).map_err(|e| format!("{}: {e}", s.name))?;
            count += 1;
        }
    }
    let s3 = setup("a2");
    let calc = Calculus::new(&s3.table, &s3.s);
    let ours: BTreeSet<BTreeSet<_>> = cg::enumerate_orbits(&calc)
        .iter()
        .map(|o| o.pairs.iter().copied().collect())
        .collect();
    let oracle = brute_force_orbits(&s3.table, s3.s.members());
    let mut sizes: Vec<usize> = ours.iter().map(BTreeSet::len).collect();
    sizes.sort();
    if ours != oracle || sizes != [1, 1, 1, 3, 3] {
        return Err(format!(
            "S3 transpositions: orbit sizes {sizes:?}, oracle agrees: {}",
            ours == oracle
        ));
    }
    Ok(format!(
        "{count} orbits checked; S3 gives sizes 1, 1, 1, 3, 3 as the brute-force oracle"
    ))
}

fn braid_relation() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for s in configs().iter().filter(|s| s.s.len() <= 30) {
        let r = cg::braid_check(&Calculus::new(&s.table, &s.s), 4).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(format!("{}: {r:?}", s.name));
        }
        n += 1;
    }
    // independent oracle on S3: σ on triples written out by hand
    let s3 = setup("a2");
    let t = &s3.table;
    let sigma = |g: GroupElement, h: GroupElement| (t.mul(t.mul(g, h), t.inv(g)), g);
    for &a in s3.s.members() {
        for &b in s3.s.members() {
            for &c in s3.s.members() {
                let s1 = |(x, y, z)| {
                    let (p, q) = sigma(x, y);
                    (p, q, z)
                };
                let s2 = |(x, y, z)| {
                    let (p, q) = sigma(y, z);
                    (x, p, q)
                };
                if s1(s2(s1((a, b, c)))) != s2(s1(s2((a, b, c)))) {
                    return Err("S3 oracle: braid relation fails".into());
                }
            }
        }
    }
    within(
        start,
        Duration::from_secs(10),
        format!("{n} configurations on S^3 and S^4, exact"),
    )
}

fn kernel_dimension() -> Outcome {
    let mut n = 0;
    for s in configs() {
        let calc = Calculus::new(&s.table, &s.s);
        let orbits = cg::enumerate_orbits(&calc).len();
        let kernel = calc.kernel_dim_exact();
        if orbits != kernel {
            return Err(format!(
                "{}: {orbits} orbits but rational kernel dimension {kernel}",
                s.name
            ));
        }
        n += 1;
    }
    Ok(format!("{n} configurations, rank over Q"))
}

fn group_spaces() -> Outcome {
    let start = Instant::now();
    let required = [
        cg::ORIENTED_LINES,
        cg::RIGHT_CANCELLATION,
        cg::RIGHT_DISTRIBUTIVITY,
        cg::CONSECUTIVE_COMPOSITION,
    ];
    let mut reconstructed = 0;
    let mut refused = 0;
    for s in configs() {
        let space =
            CyclicSpace::from_group(&Calculus::new(&s.table, &s.s)).map_err(|e| e.to_string())?;
        let report = cg::verify_cyclic_axioms(&space, 0);
        for name in required {
            if !report.passed(name) {
                return Err(format!(
                    "{}: {name} fails: {:?}",
                    s.name,
                    report.check(name).unwrap().witness
                ));
            }
        }
        if let Some(w) = cg::group_conjugation_witness(&space, &s.table) {
            return Err(format!("{}: x ◀ y is not conjugation at {w}", s.name));
        }
        match cg::reconstruct_group(&space, 0) {
            Ok(r) if r.conjugation_witness.is_none() => reconstructed += 1,
            Ok(r) => {
                return Err(format!(
                    "{}: reconstruction is not conjugation at {:?}",
                    s.name, r.conjugation_witness
                ))
            }
            Err(_) if !report.passed(cg::NON_TRIVIALITY) => refused += 1,
            Err(e) => return Err(format!("{}: {e}", s.name)),
        }
    }
    within(
        start,
        Duration::from_secs(10),
        format!(
            "{reconstructed} reconstructed as conjugation, {refused} refused for non-triviality"
        ),
    )
}

fn fano_axioms() -> Outcome {
    let start = Instant::now();
    let space = match corpus::load("fano").unwrap() {
        Input::Space(s) => s.build().map_err(|e| e.to_string())?,
        Input::Config(_) => unreachable!(),
    };
    if space.lines().len() != 21 {
        return Err(format!("{} lines", space.lines().len()));
    }
    let report = cg::verify_cyclic_axioms(&space, 0);
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
        .collect();
    if !failed.is_empty() {
        return Err(format!("21 lines; {}", failed.join("; ")));
    }
    cg::reconstruct_group(&space, 0).map_err(|e| e.to_string())?;
    within(
        start,
        Duration::from_secs(10),
        "21 lines, every axiom holds".into(),
    )
}

/// A second multiplicity function: one fresh rational per conjugacy class.
fn second_nu(s: &Setup) -> Vec<Scalar> {
    let values = [
        Scalar::ratio(-2, 7),
        Scalar::ratio(5, 3),
        Scalar::ratio(1, 11),
    ];
    let t = &s.table;
    let mut reps: Vec<GroupElement> = Vec::new();
    s.s.iter()
        .map(|el| {
            let k = reps
                .iter()
                .position(|&r| t.elements().any(|g| t.conjugate(g, r) == el))
                .unwrap_or_else(|| {
                    reps.push(el);
                    reps.len() - 1
                });
            values[k % values.len()].clone()
        })
        .collect()
}

fn dunkl_commutativity() -> Outcome {
    let start = Instant::now();
    let mut runs = Vec::new();
    for (name, degree) in [("a2", 6), ("b2", 6), ("i2_4", 6), ("z4", 5), ("g312", 5)] {
        let s = setup(name);
        let first = s.nu.clone().unwrap();
        let second = second_nu(&s);
        if first == second {
            return Err(format!("{name}: the two multiplicity functions coincide"));
        }
        for nu in [first, second] {
            let cfg = s.dunkl_config_with(nu).map_err(|e| e.to_string())?;
            let r = commutator_check(&cfg, degree).map_err(|e| e.to_string())?;
            if !r.passed() || r.max_residual != 0.0 {
                return Err(format!("{name}: {:?}", r.failures.first()));
            }
            runs.push(format!("{name}≤{degree}"));
        }
    }
    within(
        start,
        Duration::from_secs(60),
        format!(
            "{} exact runs ({}), zero residual",
            runs.len(),
            runs.join(" ")
        ),
    )
}

fn zero_multiplicity() -> Outcome {
    let mut total = 0;
    for s in reflection_configs() {
        let cfg = s.dunkl_config().map_err(|e| e.to_string())?;
        let zero = cfg
            .with_multiplicities(vec![Scalar::zero(); s.s.len()])
            .map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for k in 0..500 {
            let p = random_sparse(cfg.nvars(), 6, 5, &mut rng);
            for j in 0..cfg.nvars() {
                if zero.apply(j, &p).unwrap() != p.partial_derivative(j).unwrap() {
                    return Err(format!("{}: sample {k}, j = {j}", s.name));
                }
            }
            total += 1;
        }
    }
    Ok(format!("{total} random polynomials, exact"))
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn wedge_identity() -> Outcome {
    // plane witness: lines (1,0), (0,1), (1,1) at x = (1,2)
    let lines = vec![
        vec![c(1.0), c(0.0)],
        vec![c(0.0), c(1.0)],
        vec![c(1.0), c(1.0)],
    ];
    let x = vec![c(1.0), c(2.0)];
    let xi: Vec<[f64; 2]> = lines
        .iter()
        .map(|a| {
            let d = x[0].conj() * a[0] + x[1].conj() * a[1];
            [(a[0] / d).re, (a[1] / d).re]
        })
        .collect();
    let terms: Vec<f64> = (0..3)
        .map(|k| xi[k][0] * xi[(k + 1) % 3][1] - xi[k][1] * xi[(k + 1) % 3][0])
        .collect();
    let expected = [0.5, -1.0 / 6.0, -1.0 / 3.0];
    if terms
        .iter()
        .zip(expected)
        .any(|(a, b)| (a - b).abs() > 1e-15)
    {
        return Err(format!("plane witness terms {terms:?}"));
    }
    let (_, r) = cyclic_sum(&lines, &x).map_err(|e| e.to_string())?;
    if r > DEFAULT_TOL {
        return Err(format!("plane witness residual {r:e}"));
    }

    let mut worst = 0.0f64;
    let mut n = 0;
    for s in reflection_configs() {
        let cfg = s.displacement_config().map_err(|e| e.to_string())?;
        for k in 0..100 {
            let x = cfg.sample_point(0, k).map_err(|e| e.to_string())?;
            for line in cfg.lines() {
                let mus: Vec<Vec<Complex64>> = line.iter().map(|&i| cfg.mu()[i].clone()).collect();
                let (_, r) = cyclic_sum(&mus, &x).map_err(|e| e.to_string())?;
                worst = worst.max(r);
            }
        }
        n += 1;
    }
    if worst > DEFAULT_TOL {
        return Err(format!("max relative residual {worst:e}"));
    }
    let negative = setup("a2_generic_lines")
        .displacement_config()
        .map_err(|e| e.to_string())?;
    let checks = forms::displacement_checks(&negative, 100, 0, DEFAULT_TOL, CLOSEDNESS_TOL)
        .map_err(|e| e.to_string())?;
    let neg = checks
        .iter()
        .find(|c| c.name == "cyclic wedge identity")
        .unwrap()
        .max_residual
        .unwrap();
    if neg <= 1e-6 {
        return Err(format!("C3 negative control residual only {neg:e}"));
    }
    Ok(format!(
        "plane witness 1/2 - 1/6 - 1/3 = 0; {n} configurations x 100 samples, max {worst:.1e}; C3 control {neg:.2e}"
    ))
}

fn displacement_suite() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for s in reflection_configs() {
        let cfg = s.displacement_config().map_err(|e| e.to_string())?;
        let mut checks = forms::coxeter_type_check(&cfg, DEFAULT_TOL);
        checks.extend(
            forms::displacement_checks(&cfg, 100, 0, DEFAULT_TOL, CLOSEDNESS_TOL)
                .map_err(|e| e.to_string())?,
        );
        if let Some(c) = checks.iter().find(|c| c.status != Status::Pass) {
            return Err(format!("{}: {c}", s.name));
        }
        n += 1;
    }
    let bad = setup("b2_perturbed_eigenline")
        .displacement_config()
        .map_err(|e| e.to_string())?;
    let checks = forms::coxeter_type_check(&bad, DEFAULT_TOL);
    if !checks
        .iter()
        .any(|c| c.status == Status::Fail && c.witness.is_some())
    {
        return Err("perturbed eigenline passed".into());
    }
    within(
        start,
        Duration::from_secs(30),
        format!("{n} configurations pass; perturbed eigenline fails with a witness"),
    )
}

fn container_rank() -> Outcome {
    let mut lines = 0;
    for s in reflection_configs() {
        let cfg = s.displacement_config().map_err(|e| e.to_string())?;
        for line in cfg.lines() {
            let elems: Vec<GroupElement> = line.iter().map(|&i| s.s.members()[i]).collect();
            let rank = forms::exact_container_rank(&s.table, &elems).map_err(|e| e.to_string())?;
            if rank > 2 {
                return Err(format!("{}: rank {rank}", s.name));
            }
            lines += 1;
        }
    }
    Ok(format!("{lines} lines, exact rank at most 2"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = 0;
    for cmd in ["analyze", "verify", "dunkl", "forms"] {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("{cmd}-{k}.json"));
            let p = path.to_str().unwrap().to_string();
            let mut args = vec!["dunkl-forge", cmd, "corpus:a2", "corpus:b2", "corpus:g312"];
            if cmd == "verify" {
                args.push("corpus:fano");
            }
            args.extend([
                "--degree",
                "4",
                "--samples",
                "50",
                "--seed",
                "11",
                "--json",
                &p,
            ]);
            dunkl_forge::cli::run(args, &mut std::io::sink(), &mut std::io::sink());
            outputs.push(std::fs::read(&path).map_err(|e| format!("{cmd}: {e}"))?);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{cmd}: reports differ"));
        }
        runs += 1;
    }
    Ok(format!("{runs} commands, byte-identical JSON"))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("1 germ identity", germ_identity),
        ("2 differential consistency", differential_consistency),
        ("3 orbit structure", orbit_structure),
        ("4 braid relation", braid_relation),
        ("5 kernel dimension", kernel_dimension),
        ("6a group-derived cyclic spaces", group_spaces),
        ("6b Fano space axioms", fano_axioms),
        ("7 Dunkl commutativity", dunkl_commutativity),
        ("8 zero multiplicity reduction", zero_multiplicity),
        ("9 cyclic wedge identity", wedge_identity),
        ("10 Coxeter-type and displacement suite", displacement_suite),
        ("11 container rank", container_rank),
        ("12 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
