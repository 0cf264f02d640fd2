//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any fail.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use torus_tangency::arith::Rational;
use torus_tangency::bounds::{
    audit_point, audit_values, bezout_degree_bound, habegger_height_bound, theorem_slope_bound_log, verify_lemma31, BoundInputs,
};
use torus_tangency::heights::HeightValue;
use torus_tangency::poly::resultant::uni_resultant;
use torus_tangency::poly::{SparsePoly, UniPoly, Var};
use torus_tangency::report::{analyze, dehn_exclusion_report, ingest_corpus, verify_report};
use torus_tangency::solver::{isolate_roots, AlgebraicPoint};
use torus_tangency::tangency::{
    branch_tangents, curve_singular_points, singular_intersections, slope_scan, tangency_poly_raw, Execution, Slope, Target,
};
use torus_tangency::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn poly(t: &Terms) -> SparsePoly {
    SparsePoly::from_int_terms(t)
}

fn rational_coords(p: &AlgebraicPoint) -> Option<(Rational, Rational)> {
    let root = |u: &UniPoly| (u.degree() == Some(1)).then(|| -u.coeff(0) / u.coeff(1));
    Some((root(&p.x_minpoly)?, root(&p.y_minpoly)?))
}

fn line_two() -> Terms {
    vec![((1, 0), 1), ((0, 1), 1), ((0, 0), -2)]
}

fn line_one() -> Terms {
    vec![((1, 0), 1), ((0, 1), 1), ((0, 0), -1)]
}

fn figure_eight() -> Terms {
    vec![((4, 2), 1), ((8, 1), -1), ((6, 1), 1), ((4, 1), 2), ((2, 1), 1), ((0, 1), -1), ((4, 0), 1)]
}

fn node() -> Terms {
    // (y - 1)^2 - (x - 1)^2 x
    vec![((0, 2), 1), ((0, 1), -2), ((0, 0), 1), ((3, 0), -1), ((2, 0), 2), ((1, 0), -1)]
}

fn criterion_1() -> Outcome {
    let f = line_two();
    let mut expected = BTreeSet::new();
    for (p, q) in slopes_up_to(5) {
        for (x, y) in rational_unit_tangencies(&f, p, q) {
            expected.insert((p, q, x, y));
        }
    }
    let scan = slope_scan(&poly(&f), 5, Target::Unit, Execution::Serial).map_err(|e| e.to_string())?;
    ensure(scan.results.len() == slopes_up_to(5).len(), "slope count differs from the oracle enumeration")?;
    let mut got = BTreeSet::new();
    for r in scan.hits() {
        for si in &r.intersections {
            let (x, y) = rational_coords(&si.point).ok_or("irrational point")?;
            ensure(si.value.rational() == Some(Rational::one()), "coset value is not exactly 1")?;
            got.insert((si.slope.p, si.slope.q, x, y));
        }
    }
    ensure(got == expected, format!("library {got:?} vs oracle {expected:?}"))?;
    let want: BTreeSet<_> = [(1, 1, q(1), q(1))].into_iter().collect();
    ensure(got == want, "expected exactly (1,1) on slope (1,1)")?;
    Ok(format!("{} slopes, oracle and scan agree on {{(1,1)}} at slope (1,1), value 1", scan.results.len()))
}

fn criterion_2() -> Outcome {
    let t: Terms = vec![((2, 3), 1), ((0, 0), -5)];
    let f = poly(&t);
    ensure(tangency_poly_raw(&f, 2, 3).is_zero(), "g_{2,3} is not identically zero")?;
    ensure(tangency_terms(&t, 2, 3).is_empty(), "oracle g_{2,3} is not zero")?;
    let is_translate = |e: &Error| matches!(e, Error::TranslateOfSubtorus { p: 2, q: 3, .. });
    let scan = slope_scan(&f, 3, Target::Unit, Execution::Serial);
    ensure(scan.as_ref().is_err_and(is_translate), format!("scan did not refuse: {:?}", scan.map(|s| s.results.len())))?;
    let a = analyze(&f);
    ensure(a.as_ref().is_err_and(is_translate), "bound computation was not refused")?;
    let r = dehn_exclusion_report(&f, 3, 12, Execution::Serial);
    ensure(r.is_err_and(|e| is_translate(&e) && e.exit_code() == 3), "report was not refused")?;
    Ok("TranslateOfSubtorus on (2,3); scan, analyze and report refuse".into())
}

fn criterion_3() -> Outcome {
    let t = line_one();
    let f = poly(&t);
    let s = Slope::new(1, 1).map_err(|e| e.to_string())?;
    // oracle: the tangency points on slope (1,1) and their coset values
    let g = tangency_terms(&t, 1, 1);
    let (xs, complete) = rational_roots(&resultant_y(&t, &g));
    ensure(complete && xs == vec![qq(1, 2)], "oracle tangency abscissae")?;
    let y0 = q(1) - qq(1, 2);
    let value = qq(1, 2) * &y0;
    ensure(value == qq(1, 4) && value.abs() != q(1), "oracle coset value")?;

    let unit = singular_intersections(&f, &s, Target::Unit).map_err(|e| e.to_string())?;
    let tors = singular_intersections(&f, &s, Target::TorsionUpTo(1000)).map_err(|e| e.to_string())?;
    ensure(unit.is_empty() && tors.is_empty(), "torsion targets should be empty")?;
    let any = singular_intersections(&f, &s, Target::AnyTranslate).map_err(|e| e.to_string())?;
    ensure(any.len() == 1, format!("AnyTranslate found {} points", any.len()))?;
    let si = &any[0];
    ensure(rational_coords(&si.point) == Some((qq(1, 2), qq(1, 2))), "point is not (1/2, 1/2)")?;
    ensure(si.value.rational() == Some(value), "coset value is not 1/4")?;
    ensure(!si.translate.is_torsion, "1/4 certified as torsion")?;
    Ok("(1/2,1/2) on slope (1,1), value 1/4 non-torsion; torsion targets empty, AnyTranslate reports it".into())
}

/// `max(|a|, |b|, ...)` of the coprime integer representative.
fn proj_height_int(v: &[BigRational]) -> BigInt {
    let den = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.iter().map(|c| (c / &g).abs()).max().unwrap()
}

fn random_terms(rng: &mut ChaCha8Rng) -> Terms {
    let k = rng.gen_range(1..=8);
    (0..k)
        .map(|_| {
            let a = rng.gen_range(0..=5u32);
            let b = rng.gen_range(0..=5 - a);
            ((a, b), rng.gen_range(-10..=10i64))
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut cases, mut held) = (0, 0);
    while cases < 1000 {
        let (t1, t2) = (random_terms(&mut rng), random_terms(&mut rng));
        let num = |rng: &mut ChaCha8Rng| qq(rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(1..=1_000_000));
        let (x, y) = (num(&mut rng), num(&mut rng));
        let (a, b) = (eval(&t1, &x, &y), eval(&t2, &x, &y));
        let coeffs: Vec<BigRational> = poly(&t1).coefficients().into_iter().chain(poly(&t2).coefficients()).collect();
        if (a.is_zero() && b.is_zero()) || coeffs.is_empty() {
            continue;
        }
        cases += 1;
        let deg = |p: &SparsePoly| p.total_degree();
        let n = deg(&poly(&t1)).max(deg(&poly(&t2))).max(1);
        let lhs = proj_height_int(&[a, b]);
        let hp = proj_height_int(&[x.clone(), y.clone(), q(1)]);
        let hf = proj_height_int(&coeffs);
        let c = BigInt::from((n + 2) * (n + 1) / 2);
        let oracle = lhs <= hp.pow(n) * hf * c;
        let lib = verify_lemma31(&poly(&t1), &poly(&t2), &x, &y).map_err(|e| e.to_string())?;
        ensure(lib.holds == oracle, format!("library and oracle disagree at case {cases}"))?;
        held += oracle as usize;
    }
    ensure(held == 1000, format!("inequality held in {held}/1000"))?;
    Ok("inequality holds in 1000/1000 seeded cases (exact integer comparison)".into())
}

fn exact_integer(h: &HeightValue) -> Option<Rational> {
    let l = h.as_linear()?;
    l.terms().is_empty().then(|| l.constant_part().clone())
}

fn criterion_5() -> Outcome {
    let b = BoundInputs::from_poly(&poly(&line_two())).map_err(|e| e.to_string())?;
    let hab = exact_integer(&habegger_height_bound(&b));
    let thm = exact_integer(&theorem_slope_bound_log(&b));
    // delta = 1 and h(f) = log 2 < 1 = delta_x delta_y
    ensure(hab == Some(q(300_000)), format!("habegger {hab:?}"))?;
    ensure(thm == Some(q(600_001)), format!("theorem {thm:?}"))?;
    ensure(bezout_degree_bound(&b) == 1, "bezout")?;
    let v = analyze(&poly(&line_two())).map_err(|e| e.to_string())?;
    ensure(v["bounds"]["bezout_degree"] == "1", "analyze bezout field")?;
    Ok("habegger 300000, log-slope 600001, Bezout 1".into())
}

/// The figure-eight report at radius 10, computed once.
struct Fig8 {
    elapsed: Duration,
    json: Value,
    parallel_json: Value,
    audits_passed: bool,
}

fn fig8() -> &'static Result<Fig8, String> {
    static CELL: OnceLock<Result<Fig8, String>> = OnceLock::new();
    CELL.get_or_init(|| {
        let corpus = ingest_corpus(&Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")).map_err(|e| e.to_string())?;
        let entry = corpus.entries.iter().find(|e| e.name.contains("figure-eight")).ok_or("figure-eight entry missing")?;
        let mine = poly(&figure_eight());
        ensure(entry.poly == mine || entry.poly == mine.neg(), "corpus polynomial differs from the reference")?;
        let start = Instant::now();
        let r = dehn_exclusion_report(&entry.poly, 10, 12, Execution::Serial).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let par = dehn_exclusion_report(&entry.poly, 10, 12, Execution::Parallel).map_err(|e| e.to_string())?;
        Ok(Fig8 { elapsed, json: r.to_json(), parallel_json: par.to_json(), audits_passed: r.audits_passed() })
    })
}

fn tangent_points(report: &Value) -> Vec<(i64, i64, Value)> {
    let mut out = vec![];
    for e in report["excluded_slopes"].as_array().into_iter().flatten() {
        let (p, q) = (e["p"].as_i64().unwrap(), e["q"].as_i64().unwrap());
        for r in e["reasons"].as_array().into_iter().flatten().filter(|r| r["kind"] == "tangent-subtorus") {
            for pt in r["points"].as_array().into_iter().flatten() {
                out.push((p, q, pt.clone()));
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut audited = 0;
    let mut check = |f: &Terms, radius: i64, target: Target| -> Result<(), String> {
        let f = poly(f);
        let b = BoundInputs::from_poly(&f).map_err(|e| e.to_string())?;
        let scan = slope_scan(&f, radius, target, Execution::Serial).map_err(|e| e.to_string())?;
        for r in scan.hits() {
            for si in &r.intersections {
                let a = audit_point(&si.point, &b, &si.slope).map_err(|e| e.to_string())?;
                ensure(a.passed(), format!("audit failed at {}", si.point.describe()))?;
                audited += 1;
            }
        }
        Ok(())
    };
    check(&line_two(), 5, Target::Unit)?;
    check(&line_one(), 5, Target::TorsionUpTo(12))?;
    check(&line_one(), 5, Target::AnyTranslate)?;
    let fig = fig8().as_ref().map_err(Clone::clone)?;
    ensure(fig.audits_passed, "figure-eight audit failure")?;
    let pts = tangent_points(&fig.json);
    ensure(pts.iter().all(|(_, _, p)| p["audit"]["passed"] == true), "serialized audit failure")?;
    audited += pts.len();
    // a corrupted height must trip the audit
    let b = BoundInputs::from_poly(&poly(&line_two())).map_err(|e| e.to_string())?;
    let huge = HeightValue::constant(&q(300_001));
    let bad = audit_values(&huge, &HeightValue::zero(), &HeightValue::zero(), 1, &Slope::new(1, 1).unwrap(), &b);
    ensure(!bad.passed(), "corrupted height passed the audit")?;
    Ok(format!("{audited} points audited, zero failures; corrupted fixture rejected"))
}

fn criterion_7() -> Outcome {
    let t = node();
    let (fx, fy) = (partial_x(&t), partial_y(&t));
    // oracle singular points: rational roots of Res_y(f, f_y), then f_x = 0
    let (xs, complete) = rational_roots(&resultant_y(&t, &fy));
    ensure(complete, "oracle resultant has irrational roots")?;
    let mut sing = vec![];
    for x0 in xs.iter().filter(|x| !x.is_zero()) {
        for y0 in rational_roots(&specialize_x(&t, x0)).0 {
            if !y0.is_zero() && eval(&fx, x0, &y0).is_zero() && eval(&fy, x0, &y0).is_zero() {
                sing.push((x0.clone(), y0));
            }
        }
    }
    ensure(sing == vec![(q(1), q(1))], format!("oracle singular set {sing:?}"))?;
    // tangent cone at (1,1) is v^2 - u^2, so directions (1, +-1); slope (p,q) has p u + q v = 0
    let oracle: BTreeSet<Slope> = [(1i64, 1i64), (1, -1)].iter().map(|&(u, v)| Slope::new(v, -u).unwrap()).collect();

    let f = poly(&t);
    let pts = curve_singular_points(&f).map_err(|e| e.to_string())?;
    ensure(pts.len() == 1 && rational_coords(&pts[0]) == Some((q(1), q(1))), "library singular set")?;
    let bt = branch_tangents(&f, &pts[0]).map_err(|e| e.to_string())?;
    let got: BTreeSet<Slope> = bt.slopes.iter().copied().collect();
    ensure(got == oracle, format!("branch slopes {got:?} vs {oracle:?}"))?;
    ensure(bt.multiplicity == 2 && bt.irrational_directions == 0, "multiplicity or direction count")?;
    let r = dehn_exclusion_report(&f, 2, 12, Execution::Serial).map_err(|e| e.to_string())?;
    ensure(r.warnings.iter().any(|w| w.contains("(1, 1)") && w.contains("torsion")), "missing torsion warning")?;
    for s in &oracle {
        ensure(r.excluded.contains_key(s), format!("slope {s} not excluded"))?;
    }
    Ok("single singular point (1,1), branch slopes {(1,1),(1,-1)} (canonical (-1,1)), torsion warning issued".into())
}

fn criterion_8() -> Outcome {
    let fig = fig8().as_ref().map_err(Clone::clone)?;
    ensure(fig.elapsed < Duration::from_secs(300), format!("took {:?}", fig.elapsed))?;
    ensure(fig.json == fig.parallel_json, "serial and parallel reports differ")?;
    let rechecked = verify_report(&fig.json).map_err(|e| e.to_string())?;
    let pts = tangent_points(&fig.json);
    ensure(rechecked >= pts.len(), "re-certification skipped points")?;
    // numeric cross-check at slopes up to 5
    let f = figure_eight();
    let mut oracle = vec![];
    for (p, q) in slopes_up_to(5) {
        for (x, y) in numeric_torsion_tangencies(&f, p, q, 12) {
            oracle.push((p, q, x, y));
        }
    }
    let reported: Vec<_> = pts
        .iter()
        .filter(|(p, q, _)| p.abs().max(*q) <= 5)
        .map(|(p, q, v)| (*p, *q, box_center(&v["point"]["x_box"]), box_center(&v["point"]["y_box"])))
        .collect();
    let close = |a: &(i64, i64, num_complex::Complex64, num_complex::Complex64), b: &(i64, i64, num_complex::Complex64, num_complex::Complex64)| {
        a.0 == b.0 && a.1 == b.1 && (a.2 - b.2).norm() + (a.3 - b.3).norm() < 1e-6
    };
    ensure(reported.len() == oracle.len(), format!("report has {} points at slopes <= 5, oracle {}", reported.len(), oracle.len()))?;
    ensure(reported.iter().all(|r| oracle.iter().any(|o| close(r, o))), "report point missing from the numeric oracle")?;
    ensure(oracle.iter().all(|o| reported.iter().any(|r| close(r, o))), "numeric tangency missing from the report")?;
    let excluded = fig.json["excluded_slopes"].as_array().map_or(0, Vec::len);
    Ok(format!(
        "radius 10 in {:.1}s, {excluded} excluded slopes, {} tangency points re-certified, numeric oracle agrees on {} points at slopes <= 5",
        fig.elapsed.as_secs_f64(),
        pts.len(),
        oracle.len()
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let random = |rng: &mut ChaCha8Rng, bound: i64| -> Vec<i64> {
        let d = rng.gen_range(1..=6);
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-bound..=bound)).collect();
        if c[d] == 0 {
            c[d] = 1;
        }
        c
    };
    let big = |c: &[i64]| UniPoly::from_bigints(Var::X, &c.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
    for i in 0..100 {
        let (a, b) = (random(&mut rng, 20), random(&mut rng, 20));
        ensure(uni_resultant(&big(&a), &big(&b)) == sylvester_det(&a, &b), format!("resultant mismatch at run {i}: {a:?}, {b:?}"))?;
    }
    for i in 0..100 {
        let u = random(&mut rng, 10);
        let boxes = isolate_roots(&big(&u)).map_err(|e| e.to_string())?;
        let disjoint = boxes.iter().enumerate().all(|(j, a)| boxes[j + 1..].iter().all(|b| !a.intersects(b)));
        ensure(disjoint, format!("overlapping boxes at run {i}"))?;
        ensure(boxes.len() == distinct_root_count(&u), format!("root count mismatch at run {i}: {u:?}"))?;
    }
    Ok("100 resultants match Sylvester determinants; 100 isolations disjoint with correct counts".into())
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_torus-tangency")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), format!("{args:?} exited with {:?}", out.status.code()))?;
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let node = "y^2 - 2*y + 1 - x^3 + 2*x^2 - x";
    let runs: Vec<Vec<&str>> = vec![
        vec!["scan", "--expr", "x + y - 2", "--max-slope", "5", "--json"],
        vec!["scan", "--expr", "x + y - 1", "--max-slope", "4", "--any-translate", "--json"],
        vec!["report", "--expr", node, "--max-slope", "4", "--torsion", "12", "--json"],
        vec!["singular", "--expr", node, "--json"],
        vec!["analyze", "--expr", node, "--json"],
        vec!["verify", "--seed", "7", "--samples", "20", "--json"],
    ];
    for args in &runs {
        let a = cli(args)?;
        ensure(a == cli(args)?, format!("{args:?} is not reproducible"))?;
        if matches!(args[0], "scan" | "report") {
            let mut s = args.clone();
            s.push("--serial");
            let mut p = args.clone();
            p.push("--parallel");
            ensure(cli(&s)? == a && cli(&p)? == a, format!("{args:?} differs between serial and parallel"))?;
        }
    }
    Ok(format!("{} commands byte-identical across reruns and execution modes", runs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("line-hyperbola tangency", criterion_1),
        ("translate detection", criterion_2),
        ("torsion-translate discrimination", criterion_3),
        ("height inequality suite", criterion_4),
        ("bound calculators", criterion_5),
        ("audit invariant", criterion_6),
        ("singular-branch fixture", criterion_7),
        ("corpus smoke test", criterion_8),
        ("kernel oracles", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
