use montrep_core::enumerate::{
    closure_sign, enumerate_abelian, enumerate_all, enumerate_binary_irreducible,
    enumerate_mu_nonzero, enumerate_mu_zero, enumerate_reducible_nonabelian,
    enumerate_tuples_mu_nonzero, enumerate_tuples_mu_zero, sign_tuples, Case, EnumError,
    EnumOptions, Warning,
};
use montrep_core::tangle::build_montesinos_diagram;
use montrep_core::verify::{count_components, find_residual_roots, scan_closure_residual};
use montrep_core::{Fraction, MontesinosSpec, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn spec(pairs: &[(i64, i64)]) -> MontesinosSpec {
    MontesinosSpec::from_pairs(pairs).unwrap()
}

fn suite() -> Vec<MontesinosSpec> {
    [
        vec![(1, 1), (1, 1), (1, 1)],
        vec![(2, 1), (3, 1)],
        vec![(2, 1), (3, 1), (7, 1)],
        vec![(3, 1), (3, 1), (3, -2)],
        vec![(2, 1), (2, 1), (2, -1)],
    ]
    .iter()
    .map(|p| spec(p))
    .collect()
}

fn opts() -> EnumOptions {
    EnumOptions {
        lambda_samples: vec![vec![C64::new(1.3, 0.4)], vec![C64::new(0.6, -0.9)]],
        ..EnumOptions::default()
    }
}

#[test]
fn suite_is_sound() {
    for sp in suite() {
        let e = enumerate_all(&sp, &opts()).unwrap();
        assert!(!e.classes.is_empty(), "{}", sp);
        for c in &e.classes {
            assert!(
                c.verified(),
                "{} {:?} {:?} {:e}",
                sp,
                c.case,
                c.params.key(),
                c.residual()
            );
            assert!(c.residual() < 1e-8);
        }
    }
}

#[test]
fn trefoil_case_v() {
    let sp = spec(&[(1, 1), (1, 1), (1, 1)]);
    let tuples = enumerate_tuples_mu_nonzero(&sp).unwrap();
    let got: Vec<(i64, Vec<i64>, Fraction)> = tuples
        .iter()
        .map(|t| (t.n, t.n_list.clone(), t.theta_over_pi))
        .collect();
    assert_eq!(
        got,
        vec![
            (1, vec![0, 0, 0], Fraction::new(2, 3).unwrap()),
            (2, vec![0, 0, 0], Fraction::new(4, 3).unwrap()),
        ]
    );
    let (classes, warnings) = enumerate_mu_nonzero(&sp, 1e-8).unwrap();
    assert_eq!(classes.len(), 2);
    assert!(warnings.is_empty());
    for c in &classes {
        assert!(c.closure_residual < 1e-9);
    }
    let scan = scan_closure_residual(&sp, &[0, 0, 0], 10_000).unwrap();
    let roots = find_residual_roots(&sp, &[0, 0, 0], &scan, 1e-6);
    assert_eq!(roots.len(), 2);
    assert!((roots[0] - 2.0 * PI / 3.0).abs() < 2.0 * PI / 10_000.0);
    assert!((roots[1] - 4.0 * PI / 3.0).abs() < 2.0 * PI / 10_000.0);
}

#[test]
fn case_v_scan_matches_tuples_235() {
    let sp = spec(&[(2, 1), (3, 1), (5, 1)]);
    let tuples = enumerate_tuples_mu_nonzero(&sp).unwrap();
    let grid = 4000;
    let step = 2.0 * PI / grid as f64;
    let mut lists: Vec<Vec<i64>> = tuples.iter().map(|t| t.n_list.clone()).collect();
    lists.sort();
    lists.dedup();
    for n_list in lists {
        let mut expected: Vec<f64> = tuples
            .iter()
            .filter(|t| t.n_list == n_list)
            .map(|t| t.theta_over_pi.to_f64() * PI)
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let scan = scan_closure_residual(&sp, &n_list, grid).unwrap();
        let roots = find_residual_roots(&sp, &n_list, &scan, 1e-6);
        assert_eq!(
            roots.len(),
            expected.len(),
            "{:?} {:?} {:?}",
            n_list,
            roots,
            expected
        );
        for (r, e) in roots.iter().zip(&expected) {
            assert!((r - e).abs() < step, "{:?}", n_list);
        }
    }
}

/// Brute force over the defining equation, independent of the enumerator.
fn mu_zero_brute_force(pairs: &[(i64, i64)]) -> usize {
    let r = pairs.len() as i64;
    let den: i64 = pairs.iter().map(|p| p.0).product();
    let mut count = 0;
    let mut idx = vec![0i64; pairs.len()];
    loop {
        // den * (sum (2 n q + 1) / p - r) must be den * (even integer)
        let num: i64 = pairs
            .iter()
            .zip(&idx)
            .map(|(&(p, q), &n)| (2 * n * q + 1) * (den / p))
            .sum::<i64>()
            - r * den;
        if num % (2 * den) == 0 {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return count;
            }
            idx[i] += 1;
            if idx[i] < pairs[i].0 {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn case_iv_count_and_free_a() {
    let pairs = [(3, 1), (3, 1), (3, -2)];
    assert_eq!(mu_zero_brute_force(&pairs), 9);
    let sp = spec(&pairs);
    let tuples = enumerate_tuples_mu_zero(&sp).unwrap();
    assert_eq!(tuples.len(), 9);
    let a_values = [
        C64::new(0.5, 0.0),
        C64::from_polar(1.0, 0.9),
        C64::from_polar(2.5, -2.0),
        C64::new(-1.7, 0.3),
        C64::from_polar(1.0, 2.9),
    ];
    let (classes, warnings) = enumerate_mu_zero(&sp, &a_values, 1e-8).unwrap();
    assert!(warnings.is_empty(), "{:?}", warnings);
    assert_eq!(classes.len(), 45);
    assert!(classes.iter().all(|c| c.verified()));
}

#[test]
fn wrong_case_errors() {
    assert!(matches!(
        enumerate_tuples_mu_zero(&spec(&[(2, 1), (3, 1)])),
        Err(EnumError::UsedWrongCase(_))
    ));
    assert!(matches!(
        enumerate_tuples_mu_nonzero(&spec(&[(3, 1), (3, 1), (3, -2)])),
        Err(EnumError::UsedWrongCase(_))
    ));
    assert!(
        enumerate_reducible_nonabelian(&spec(&[(2, 1), (3, 1)]), 1e-8)
            .unwrap()
            .is_empty()
    );
}

#[test]
fn reducible_needs_a_link() {
    // mu = 0 forces determinant 0, and a knot has odd determinant
    for sp in suite() {
        let comps = count_components(&build_montesinos_diagram(&sp)).unwrap();
        if comps == 1 {
            assert!(!sp.mu_is_zero());
            assert!(enumerate_reducible_nonabelian(&sp, 1e-8)
                .unwrap()
                .is_empty());
        }
    }
    let links = enumerate_reducible_nonabelian(&spec(&[(3, 1), (3, 1), (3, -2)]), 1e-8).unwrap();
    assert!(!links.is_empty());
    assert!(links.iter().all(|c| c.verified()));
}

#[test]
fn binary_classes_verify() {
    let sp = spec(&[(2, 1), (3, 1), (7, 1)]);
    let samples = vec![vec![C64::new(1.3, 0.4)], vec![C64::new(-0.5, 1.1)]];
    let mut total = 0;
    for a in [1, -1] {
        let (classes, _) = enumerate_binary_irreducible(&sp, a, &samples, 1e-8).unwrap();
        for c in &classes {
            assert!(c.verified());
            for w in c.s.iter() {
                assert!(w.im >= -1e-12);
            }
        }
        total += classes.len();
    }
    assert!(total > 0);
    // r > 2 without samples reports every tuple as skipped
    let (classes, warnings) = enumerate_binary_irreducible(&sp, 1, &[], 1e-8).unwrap();
    assert!(classes.is_empty());
    assert!(warnings
        .iter()
        .all(|w| matches!(w, Warning::Skipped { .. })));
}

#[test]
fn deterministic() {
    let sp = spec(&[(2, 1), (3, 1), (7, 1)]);
    let a = enumerate_all(&sp, &opts()).unwrap();
    let b = enumerate_all(&sp, &opts()).unwrap();
    assert_eq!(a, b);
    let keys: Vec<_> = a.classes.iter().map(|c| c.sort_key()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn dedupe_merges_trefoil_pair() {
    let sp = spec(&[(1, 1), (1, 1), (1, 1)]);
    let flagged = enumerate_all(&sp, &opts()).unwrap();
    assert!(flagged.warnings.iter().any(|w| matches!(
        w,
        Warning::SuspectedConjugate {
            case: Case::IrreducibleMuNonzero,
            ..
        }
    )));
    let merged = enumerate_all(
        &sp,
        &EnumOptions {
            dedupe_characters: true,
            ..opts()
        },
    )
    .unwrap();
    assert_eq!(merged.count(Case::IrreducibleMuNonzero), 1);
}

fn small_spec() -> impl Strategy<Value = MontesinosSpec> {
    prop::collection::vec((1i64..=6, -6i64..=6), 1..=4)
        .prop_filter_map("invalid", |pairs| MontesinosSpec::from_pairs(&pairs).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn abelian_count_is_power_of_two(sp in small_spec()) {
        let comps = count_components(&build_montesinos_diagram(&sp)).unwrap();
        let classes = enumerate_abelian(&sp, 1e-8).unwrap();
        prop_assert_eq!(classes.len(), 1usize << (comps - 1));
        for c in &classes {
            prop_assert!(c.verified());
        }
    }

    #[test]
    fn sign_tuples_satisfy_constraint(sp in small_spec()) {
        for (a, s) in sign_tuples(&sp).unwrap() {
            for (td, &sl) in sp.tangles().iter().zip(&s) {
                let sp_ = if td.p.rem_euclid(2) == 0 { 1 } else { sl };
                let t = if td.p_tilde.rem_euclid(2) == 0 { 1 } else { -1 };
                prop_assert_eq!(t * sp_, a);
            }
            let _ = closure_sign(&sp, &s);
        }
    }

    #[test]
    fn case_v_classes_verify(sp in small_spec()) {
        prop_assume!(!sp.mu_is_zero());
        prop_assume!(sp.fractions().iter().map(|f| f.numer()).product::<i64>() <= 60);
        let tuples = enumerate_tuples_mu_nonzero(&sp).unwrap();
        for t in &tuples {
            let th = t.theta_over_pi;
            prop_assert!(th >= Fraction::zero() && th < Fraction::integer(2) && !th.is_integer());
        }
        let (classes, _) = enumerate_mu_nonzero(&sp, 1e-8).unwrap();
        for c in &classes {
            prop_assert!(c.verified(), "{} {:?} {:e}", sp, c.params.key(), c.residual());
        }
    }
}
