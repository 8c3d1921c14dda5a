use std::collections::BTreeSet;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dunkl_forge::calculus::Calculus;
use dunkl_forge::config::{parse_input, Input, Setup};
use dunkl_forge::corpus;
use dunkl_forge::cyclic_geom::{enumerate_orbits, flip, flip_inv, orbit_invariant};
use dunkl_forge::dunkl::commutator_check;
use dunkl_forge::exact_poly::{random_sparse, LinearForm, MultiPoly, Scalar};
use dunkl_forge::forms_numeric::xi_eval;
use dunkl_forge::group_core::{
    build_group, conjugacy_closure, Generators, GroupTable, Permutation, SubsetS,
};

/// A permutation group on up to 5 points from two seeded random generators,
/// with S the conjugacy class of a random non-identity element.
fn random_group(seed: u64) -> Option<(GroupTable, SubsetS)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 3 + (seed % 3) as usize;
    let gens = (0..2)
        .map(|_| {
            let mut images: Vec<usize> = (0..n).collect();
            images.shuffle(&mut rng);
            Permutation::from_images(images).unwrap()
        })
        .collect();
    let t = build_group(&Generators::Permutations(gens), 200).unwrap();
    if t.order() == 1 {
        return None;
    }
    let g = t
        .elements()
        .nth(1 + (seed as usize / 3) % (t.order() - 1))
        .unwrap();
    let s = conjugacy_closure(&t, &[g], true).unwrap();
    Some((t, s))
}

fn setup(name: &str) -> Setup {
    match corpus::load(name).unwrap() {
        Input::Config(c) => c.resolve(name).unwrap(),
        Input::Space(_) => unreachable!(),
    }
}

fn scalar() -> impl Strategy<Value = Scalar> {
    let m = prop::sample::select(vec![1u32, 3, 4, 5, 8]);
    (m, prop::collection::vec((-6i64..=6, 1i64..=4), 1..4)).prop_map(|(m, parts)| {
        parts
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| Scalar::ratio(a, b) * Scalar::root_of_unity(m, k as i64))
            .sum()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn orbits_partition_s_squared(seed in 1u64..10_000) {
        let r = random_group(seed);
        prop_assume!(r.is_some());
        let (t, s) = r.unwrap();
        let calc = Calculus::new(&t, &s);
        let orbits = enumerate_orbits(&calc);
        let mut seen = BTreeSet::new();
        for o in &orbits {
            prop_assert!(o.is_chained());
            let line = o.line();
            prop_assert_eq!(line.iter().collect::<BTreeSet<_>>().len(), line.len());
            prop_assert!(orbit_invariant(&t, o).is_ok());
            for p in &o.pairs {
                prop_assert!(seen.insert(*p));
            }
        }
        prop_assert_eq!(seen.len(), s.len() * s.len());
        prop_assert_eq!(calc.kernel_dim_exact(), orbits.len());
    }

    #[test]
    fn flip_is_the_braid_operator(seed in 1u64..10_000) {
        let r = random_group(seed);
        prop_assume!(r.is_some());
        let (t, s) = r.unwrap();
        let calc = Calculus::new(&t, &s);
        for g in s.iter() {
            for h in s.iter() {
                let f = flip(&calc, g, h).unwrap();
                prop_assert_eq!(f, calc.braid_sigma(g, h).unwrap());
                prop_assert_eq!(flip_inv(&calc, f.0, f.1).unwrap(), (g, h));
                prop_assert_eq!(calc.braid_sigma_inv(f.0, f.1).unwrap(), (g, h));
            }
        }
    }

    #[test]
    fn calculus_identities_hold(seed in 1u64..10_000) {
        let r = random_group(seed);
        prop_assume!(r.is_some());
        let (t, s) = r.unwrap();
        let calc = Calculus::new(&t, &s);
        prop_assert!(calc.germ_identity_witness().is_none());
        prop_assert!(calc.inner_derivation_witness().is_none());
        prop_assert!(calc.module_compatibility_witness().is_none());
    }

    #[test]
    fn scalars_form_a_field(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        let prod = (a.to_c64() * b.to_c64() - (&a * &b).to_c64()).norm();
        prop_assert!(prod < 1e-9 * (1.0 + a.to_c64().norm() * b.to_c64().norm()));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_display_round_trips(a in scalar()) {
        let back: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn linear_division_round_trips(seed in 0u64..10_000, a in -4i64..=4, b in -4i64..=4, c in 1i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_sparse(3, 4, 5, &mut rng);
        let l = LinearForm::new(vec![Scalar::int(c), Scalar::int(a), Scalar::int(b)]);
        let q = p.checked_mul(&l.to_poly()).unwrap();
        prop_assert_eq!(q.divide_by_linear(&l).unwrap(), p.clone());
        // q + 1 is 1 on the zero set of l
        let shifted = q.checked_add(&MultiPoly::constant(3, Scalar::one())).unwrap();
        prop_assert!(shifted.divide_by_linear(&l).is_err());
    }

    #[test]
    fn zero_multiplicity_is_the_gradient(seed in 0u64..10_000, which in 0usize..4) {
        let name = ["a2", "b2", "i2_4", "g312"][which];
        let cfg = setup(name).dunkl_config().unwrap();
        let zero = cfg.with_multiplicities(vec![Scalar::zero(); cfg.data().len()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_sparse(cfg.nvars(), 5, 6, &mut rng);
        for j in 0..cfg.nvars() {
            prop_assert_eq!(zero.apply(j, &p).unwrap(), p.partial_derivative(j).unwrap());
        }
    }

    #[test]
    fn dunkl_operators_commute_for_any_class_multiplicities(a in -5i64..=5, b in -5i64..=5, d in 1i64..=4) {
        let s = setup("b2");
        let t = &s.table;
        let g1 = t.find("g1").unwrap();
        let nu = s
            .s
            .iter()
            .map(|el| if t.elements().any(|g| t.conjugate(g, g1) == el) { Scalar::ratio(a, d) } else { Scalar::ratio(b, d) })
            .collect();
        let cfg = s.dunkl_config_with(nu).unwrap();
        prop_assert!(commutator_check(&cfg, 3).unwrap().passed());
    }

    #[test]
    fn xi_is_scale_invariant(re in -3.0f64..3.0, im in -3.0f64..3.0, x0 in 0.1f64..2.0, x1 in -2.0f64..2.0) {
        let c = Complex64::new(re, im);
        prop_assume!(c.norm() > 1e-3);
        let alpha = vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.25)];
        let x = vec![Complex64::new(x0, 0.3), Complex64::new(x1, -0.7)];
        let a = xi_eval(&alpha, &x).unwrap();
        let scaled: Vec<Complex64> = alpha.iter().map(|v| v * c).collect();
        let b = xi_eval(&scaled, &x).unwrap();
        for (u, v) in a.0.iter().zip(&b.0) {
            prop_assert!((u - v).norm() < 1e-9 * (1.0 + u.norm()));
        }
    }
}

#[test]
fn config_parse_accepts_every_corpus_entry() {
    for name in corpus::names() {
        assert!(parse_input(corpus::source(name).unwrap()).is_ok(), "{name}");
    }
}
