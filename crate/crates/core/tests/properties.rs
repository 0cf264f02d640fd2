mod common;

use common::{distinct_root_count, eval, q, qq, sylvester_det, Terms};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use torus_tangency::arith::Rational;
use torus_tangency::bounds::{bezout_degree_bound, habegger_height_bound, lemma31_rhs, theorem_slope_bound_log, upI_bound, verify_lemma31, BoundInputs};
use torus_tangency::heights::{compare, proj_height_rational, Comparison, HeightValue};
use torus_tangency::poly::resultant::uni_resultant;
use torus_tangency::poly::{SparsePoly, UniPoly, Var};
use torus_tangency::solver::torsion::{cyclotomic, power_is_one};
use torus_tangency::solver::{is_root_of_unity, isolate_roots};
use torus_tangency::tangency::{sigma_c, tangency_locus, translate_witness, Slope};

fn le(a: &HeightValue, b: &HeightValue) -> bool {
    compare(a, b) == Comparison::LessOrEqual
}

fn log(n: u64) -> HeightValue {
    HeightValue::exact_log(&q(n as i64))
}

fn terms(max_deg: u32, max_coeff: i64) -> impl Strategy<Value = Terms> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg), -max_coeff..=max_coeff), 1..8).prop_map(move |v| {
        v.into_iter().filter(|((a, b), _)| a + b <= max_deg).collect()
    })
}

fn nonzero_rational(bound: i64) -> impl Strategy<Value = Rational> {
    ((-bound..=bound).prop_filter("nonzero", |n| *n != 0), 1..=bound).prop_map(|(n, d)| qq(n, d))
}

fn bound_inputs() -> impl Strategy<Value = (u32, u32, u32, u64)> {
    (1..=6u32, 1..=6u32, 1..=100_000u64).prop_flat_map(|(dx, dy, h)| (dx.max(dy)..=dx + dy, Just(dx), Just(dy), Just(h)))
}

fn inputs(d: u32, dx: u32, dy: u32, h: u64) -> BoundInputs {
    BoundInputs::new(d, dx, dy, log(h), 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_idempotent_and_scale_invariant(t in terms(4, 9), num in 1..50i64, den in 1..50i64, neg in any::<bool>()) {
        let f = SparsePoly::from_int_terms(&t);
        let c = f.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        let lambda = if neg { qq(-num, den) } else { qq(num, den) };
        prop_assert_eq!(f.scale(&lambda).canonical(), c);
    }

    #[test]
    fn slope_canonicalization(p in -30i64..=30, qv in -30i64..=30) {
        match Slope::new(p, qv) {
            Ok(s) => {
                prop_assert_eq!(p.gcd(&qv), 1);
                prop_assert!(s.q > 0 || (s.q == 0 && s.p == 1));
                prop_assert!((s.p, s.q) == (p, qv) || (s.p, s.q) == (-p, -qv));
                prop_assert_eq!(Slope::new(-p, -qv).unwrap(), s);
            }
            Err(_) => prop_assert!(p.gcd(&qv) != 1),
        }
    }

    #[test]
    fn bounds_are_monotone((d, dx, dy, h) in bound_inputs(), bump_d in 0..3u32, bump_h in 1..1000u64, hp in 1..1000u64, hp_bump in 1..100u64) {
        let b = inputs(d, dx, dy, h);
        let b2 = inputs(d + bump_d, dx + bump_d, dy, h * bump_h);
        prop_assert!(le(&habegger_height_bound(&b), &habegger_height_bound(&b2)));
        prop_assert!(le(&theorem_slope_bound_log(&b), &theorem_slope_bound_log(&b2)));
        prop_assert!(le(&upI_bound(&b, &log(hp)), &upI_bound(&b2, &log(hp))));
        prop_assert!(le(&upI_bound(&b, &log(hp)), &upI_bound(&b, &log(hp * hp_bump))));
        prop_assert!(bezout_degree_bound(&b) <= bezout_degree_bound(&b2));
        let n = d;
        prop_assert!(le(&lemma31_rhs(n, &log(hp), &log(h)), &lemma31_rhs(n + bump_d, &log(hp * hp_bump), &log(h * bump_h))));
    }

    /// The tangent-height bound sits below the lemma applied to `x f_x`, `y f_y`
    /// at `N = delta`, whose coefficient height is at most `h(f) + log delta`.
    #[test]
    fn tangent_height_bound_below_unsharpened((d, dx, dy, h) in bound_inputs(), hp in 1..1000u64) {
        let b = inputs(d, dx, dy, h);
        let family = log(h).add(&log(d as u64));
        prop_assert!(le(&upI_bound(&b, &log(hp)), &lemma31_rhs(d, &log(hp), &family)));
    }

    #[test]
    fn height_inequality_holds(t1 in terms(5, 10), t2 in terms(5, 10), x in nonzero_rational(1_000_000), y in nonzero_rational(1_000_000)) {
        let (f1, f2) = (SparsePoly::from_int_terms(&t1), SparsePoly::from_int_terms(&t2));
        prop_assume!(!(f1.is_zero() && f2.is_zero()));
        prop_assume!(!(eval(&t1, &x, &y) == q(0) && eval(&t2, &x, &y) == q(0)));
        prop_assert!(verify_lemma31(&f1, &f2, &x, &y).unwrap().holds);
    }

    #[test]
    fn projective_height_scaling(v in prop::collection::vec(-1000i64..=1000, 2..5), k in 1..500i64) {
        prop_assume!(v.iter().any(|c| *c != 0));
        let a: Vec<Rational> = v.iter().map(|&c| q(c)).collect();
        let b: Vec<Rational> = v.iter().map(|&c| qq(c, k)).collect();
        let (ha, hb) = (proj_height_rational(&a).unwrap(), proj_height_rational(&b).unwrap());
        prop_assert!(le(&ha, &hb) && le(&hb, &ha));
    }

    #[test]
    fn resultant_matches_sylvester(a in prop::collection::vec(-20i64..=20, 2..8), b in prop::collection::vec(-20i64..=20, 2..8)) {
        prop_assume!(*a.last().unwrap() != 0 && *b.last().unwrap() != 0);
        let u = |c: &[i64]| UniPoly::from_bigints(Var::X, &c.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        prop_assert_eq!(uni_resultant(&u(&a), &u(&b)), sylvester_det(&a, &b));
    }

    #[test]
    fn isolation_counts_distinct_roots(a in prop::collection::vec(-10i64..=10, 2..14)) {
        prop_assume!(*a.last().unwrap() != 0);
        let u = UniPoly::from_bigints(Var::X, &a.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        let boxes = isolate_roots(&u).unwrap();
        prop_assert_eq!(boxes.len(), distinct_root_count(&a));
        for (i, x) in boxes.iter().enumerate() {
            prop_assert!(boxes[i + 1..].iter().all(|y| !x.intersects(y)));
        }
    }

    #[test]
    fn torsion_order_is_exact(n in 1..40u64) {
        let c = cyclotomic(n);
        for bx in isolate_roots(&c).unwrap() {
            let cert = is_root_of_unity(&c, &bx).unwrap();
            prop_assert!(cert.is_torsion);
            prop_assert_eq!(cert.order, Some(n));
            prop_assert!(power_is_one(&c, n));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tangency_points_are_smooth_and_tangent(t in terms(3, 5), p in -3i64..=3, qv in 0i64..=3) {
        let f = SparsePoly::from_int_terms(&t);
        prop_assume!(!f.is_constant() && f.is_squarefree().unwrap_or(false) && translate_witness(&f).is_none());
        let Ok(s) = Slope::new(p, qv) else { return Ok(()) };
        let l = tangency_locus(&f, &s).unwrap();
        let listed: Vec<String> = l.points.iter().map(|p| p.describe()).collect();
        prop_assert!(l.excluded_singular.iter().all(|p| !listed.contains(&p.describe())));
        for pt in &l.points {
            let dir = sigma_c(&f, pt).unwrap();
            prop_assert!(dir.is_slope(&s));
        }
        let d = f.total_degree() as usize;
        prop_assert!(l.points.len() + l.excluded_singular.len() <= d * d);
    }
}
