use std::f64::consts::TAU;

use montrep_core::mat2::{bracket, mat_a, mat_e, Mat2, C64};
use montrep_core::rational::{
    cf_expand, signed_pair, tangle_fraction, tilde_of, ContinuedFraction, Fraction, TangleData,
};
use montrep_core::tangle::{
    build_rational_diagram, ends_closed_form, linear_transfer, mat_b, mat_c, pair_transfer,
    propagate,
};
use montrep_core::verify::verify_representation;
use proptest::prelude::*;

fn a(x: C64) -> Mat2 {
    mat_a(x).unwrap().mat()
}

fn nonzero_term() -> impl Strategy<Value = i64> {
    prop_oneof![-4i64..=-1, 1i64..=4]
}

fn expansion() -> impl Strategy<Value = ContinuedFraction> {
    prop::collection::vec(nonzero_term(), 1..=5).prop_filter_map("invalid expansion", |ks| {
        let cf = ContinuedFraction::new(ks).ok()?;
        TangleData::new(cf.clone()).ok().map(|_| cf)
    })
}

fn unit() -> impl Strategy<Value = C64> {
    (0.0f64..std::f64::consts::TAU).prop_map(|t| C64::from_polar(1.0, t))
}

fn conjugator() -> impl Strategy<Value = Mat2> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_map(|(a, b, c, d)| Mat2::from_real(1.0 + 0.5 * a, 0.5 * b, 0.5 * c, 1.0 + 0.5 * d))
        .prop_filter_map("singular", |m| {
            let det = m.det();
            if det.norm() < 0.2 {
                return None;
            }
            Some(m * det.sqrt().inv())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_propagation(cf in expansion(), s in unit(), b in unit(), p in conjugator()) {
        let td = TangleData::new(cf.clone()).unwrap();
        prop_assume!(bracket(td.p, s).norm() > 1e-6);
        let pi = p.inverse().unwrap();
        let x = p * a(b) * pi;
        let y = p * a(b * s) * pi;
        let d = build_rational_diagram(&cf);
        let asg = propagate(&d, x, y).unwrap();
        let e = ends_closed_form(&td, &x, &y, s, 1e-9).unwrap();
        for (m, end) in [(e.nw, d.ends.nw), (e.ne, d.ends.ne), (e.sw, d.ends.sw), (e.se, d.ends.se)] {
            let got = asg.get(end).unwrap();
            prop_assert!(m.max_abs_diff(&got) < 1e-9 * got.max_abs().max(1.0));
        }
    }

    #[test]
    fn transfer_maps_top_to_bottom(cf in expansion(), s in unit()) {
        let td = TangleData::new(cf).unwrap();
        prop_assume!(bracket(td.p, s).norm() > 1e-3);
        let (x, y) = (a(C64::new(1.0, 0.0)), a(s));
        let e = ends_closed_form(&td, &x, &y, s, 1e-9).unwrap();
        let (sw, se) = pair_transfer(&e.nw, &e.ne, &linear_transfer(&td, s).unwrap());
        prop_assert!(sw.max_abs_diff(&e.sw) < 1e-8);
        prop_assert!(se.max_abs_diff(&e.se) < 1e-8);
    }

    #[test]
    fn companion_determinant(cf in expansion()) {
        let td = TangleData::new(cf).unwrap();
        prop_assert_eq!(td.determinant(), 1);
    }

    #[test]
    fn expansion_round_trip(p in -60i64..=60, q in -60i64..=60) {
        prop_assume!(p != 0 && q != 0 && gcd(p, q) == 1);
        let cf = cf_expand(&Fraction::pair(p, q).unwrap()).unwrap();
        prop_assert_eq!(signed_pair(&cf).unwrap(), (p, q));
    }

    #[test]
    fn b_multiplicative(w in -3.0f64..3.0, v in -3.0f64..3.0, wi in -3.0f64..3.0, vi in -3.0f64..3.0, sign in prop::bool::ANY) {
        let sg = C64::new(if sign { 1.0 } else { -1.0 }, 0.0);
        let (w, v) = (C64::new(w, wi), C64::new(v, vi));
        prop_assert!((mat_b(w, sg) * mat_b(v, sg)).max_abs_diff(&mat_b(w + v, sg)) < 1e-12 * (1.0 + (w + v).norm()).powi(2));
    }

    #[test]
    fn c_multiplicative(ta in unit(), ra in 0.5f64..2.0, w in unit(), v in unit(), rw in 0.5f64..2.0, rv in 0.5f64..2.0) {
        let aa = ta * ra;
        prop_assume!((aa - aa.inv()).norm() > 0.1);
        let (w, v) = (w * rw, v * rv);
        let lhs = mat_c(w, aa).unwrap() * mat_c(v, aa).unwrap();
        prop_assert!(lhs.max_abs_diff(&mat_c(w * v, aa).unwrap()) < 1e-10);
    }

    #[test]
    fn perturbation_detected(cf in expansion(), s in unit(), eps in 1e-6f64..1e-2, pick in 0usize..1000, entry in 0usize..4) {
        let d = build_rational_diagram(&cf);
        let mut asg = propagate(&d, a(C64::new(1.0, 0.0)), a(s)).unwrap();
        let arc = pick % d.arc_count;
        let mut m = asg.arc(arc).unwrap();
        m.0[entry] += C64::new(eps, 0.0);
        asg.0[arc] = Some(m);
        let rep = verify_representation(&d, &asg, 1e-10).unwrap();
        prop_assert!(!rep.pass);
        prop_assert!(rep.max_residual() >= eps / 10.0);
    }

    #[test]
    fn e_is_special(b in unit(), r in 0.3f64..3.0) {
        prop_assert!((mat_e(b * r).unwrap().det() - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn companion_determinant_exhaustive() {
    let ks: Vec<i64> = (-5..=5).filter(|&k| k != 0).collect();
    let mut checked = 0u64;
    let mut stack: Vec<Vec<i64>> = ks.iter().map(|&k| vec![k]).collect();
    while let Some(seq) = stack.pop() {
        let cf = ContinuedFraction::new(seq.clone()).unwrap();
        let c = tilde_of(&cf).unwrap();
        let (p, q) = signed_pair(&cf).unwrap();
        assert_eq!(
            c.p_tilde as i128 * q as i128 - p as i128 * c.q_tilde as i128,
            1,
            "{:?}",
            seq
        );
        checked += 1;
        if seq.len() < 6 {
            for &k in &ks {
                let mut next = seq.clone();
                next.push(k);
                stack.push(next);
            }
        }
    }
    assert_eq!(checked, (1..=6).map(|m| 10u64.pow(m)).sum::<u64>());
}

#[test]
fn round_trip_exhaustive() {
    for p in -50i64..=50 {
        for q in -50i64..=50 {
            if p == 0 || q == 0 || gcd(p, q) != 1 {
                continue;
            }
            let f = Fraction::pair(p, q).unwrap();
            let cf = cf_expand(&f).unwrap();
            assert_eq!(signed_pair(&cf).unwrap(), (p, q));
            assert_eq!(tangle_fraction(&cf).unwrap().normalized(), f.normalized());
        }
    }
}

#[test]
fn integer_tangle_ends() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for k in (-6i64..=6).filter(|&k| k != 0) {
        let d = build_rational_diagram(&ContinuedFraction::new(vec![k]).unwrap());
        for _ in 0..20 {
            let a1 = C64::from_polar(rng.gen_range(0.7..1.4), rng.gen_range(0.0..TAU));
            let a2 = C64::from_polar(rng.gen_range(0.7..1.4), rng.gen_range(0.0..TAU));
            let asg = propagate(&d, a(a1), a(a2)).unwrap();
            let ne = asg.get(d.ends.ne).unwrap();
            let se = asg.get(d.ends.se).unwrap();
            let ne_ref = a(-a1.powi(k as i32 + 1) / a2.powi(k as i32));
            let se_ref = a(-a1.powi(k as i32) / a2.powi(k as i32 - 1));
            let scale = ne_ref.max_abs().max(se_ref.max_abs()).max(1.0);
            assert!(ne.max_abs_diff(&ne_ref) < 1e-10 * scale, "k={}", k);
            assert!(se.max_abs_diff(&se_ref) < 1e-10 * scale, "k={}", k);
        }
    }
}
