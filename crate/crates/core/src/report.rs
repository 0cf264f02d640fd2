//! Slope exclusion reports, the bundled curve corpus and the self-verification suite.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::arith::{rat, Rational};
use crate::bounds::{audit_point, bezout_degree_bound, lemma31_rhs, theorem_slope_bound_log, upI_bound, verify_lemma31, AuditRecord, BoundInputs, BoundReport};
use crate::error::{Error, Result};
use crate::heights::{compare, poly_height, Comparison, HeightValue};
use crate::poly::resultant::uni_resultant;
use crate::poly::{SparsePoly, UniPoly, Var};
use crate::solver::{isolate_roots, torsion_point_test, AlgebraicPoint, TorsionCertificate};
use crate::tangency::{
    branch_tangents, curve_singular_points, sigma_c, slope_scan, tangency_locus, tangency_poly, tangency_poly_raw, translate_witness, BranchTangents, Execution, Slope, SingularIntersection, Target,
};

/// Printed with every report.
pub const CURVE_SIDE_WARNING: &str = "the torsion hypothesis on singular values is checked only at singular points of the plane curve; the character variety itself is not examined";

/// Degrees and height of an input curve.
#[derive(Clone, Debug)]
pub struct CurveSummary {
    pub poly: SparsePoly,
    pub inputs: BoundInputs,
}

impl CurveSummary {
    pub fn new(f: &SparsePoly) -> Result<Self> {
        let poly = f.canonical();
        Ok(CurveSummary { inputs: BoundInputs::from_poly(&poly)?, poly })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "poly": self.poly.to_text(),
            "delta": self.inputs.delta.to_string(),
            "delta_x": self.inputs.delta_x.to_string(),
            "delta_y": self.inputs.delta_y.to_string(),
            "height": self.inputs.hf.to_json(),
        })
    }
}

fn refuse_translates(f: &SparsePoly) -> Result<()> {
    if let Some((s, w)) = translate_witness(f) {
        return Err(Error::TranslateOfSubtorus { p: s.p, q: s.q, witness: w.to_text() });
    }
    Ok(())
}

/// Degrees, height and the bound block; refused for translates of subtori.
pub fn analyze(f: &SparsePoly) -> Result<Value> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    let squarefree = f.is_squarefree()?;
    refuse_translates(f)?;
    let c = CurveSummary::new(f)?;
    Ok(json!({
        "curve": c.to_json(),
        "squarefree": squarefree,
        "bounds": BoundReport::new(&c.inputs).to_json(),
    }))
}

/// Singular points with branch tangents and torsion status.
pub fn singular_report(f: &SparsePoly) -> Result<Value> {
    let f = f.canonical();
    let mut items = Vec::new();
    for p in curve_singular_points(&f)? {
        let mut v = branch_tangents(&f, &p)?.to_json();
        v["point"] = p.to_json();
        v["label"] = json!(p.describe());
        v["torsion"] = torsion_point_test(&p)?.to_json();
        items.push(v);
    }
    Ok(json!({ "curve": f.to_text(), "curve_singularities": items }))
}

#[derive(Clone, Debug)]
pub enum Reason {
    TangentSubtorus(Vec<SingularIntersection>),
    SingularBranchTangent(Box<AlgebraicPoint>),
}

impl Reason {
    fn to_json(&self, audits: &BTreeMap<String, AuditRecord>) -> Value {
        match self {
            Reason::TangentSubtorus(pts) => json!({
                "kind": "tangent-subtorus",
                "points": pts.iter().map(|si| {
                    let mut v = si.to_json();
                    v["audit"] = audits[&si.point.describe()].to_json();
                    v
                }).collect::<Vec<_>>(),
            }),
            Reason::SingularBranchTangent(p) => json!({ "kind": "singular-branch-tangent", "point": p.to_json() }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SingularPointInfo {
    pub point: AlgebraicPoint,
    pub tangents: BranchTangents,
    pub torsion: TorsionCertificate,
}

#[derive(Clone, Debug)]
pub struct ExclusionReport {
    pub curve: CurveSummary,
    pub radius: i64,
    pub max_order: u64,
    pub excluded: BTreeMap<Slope, Vec<Reason>>,
    pub singular_points: Vec<SingularPointInfo>,
    pub audits: BTreeMap<String, AuditRecord>,
    pub log_bound: HeightValue,
    pub warnings: Vec<String>,
}

impl ExclusionReport {
    pub fn excluded_slopes(&self) -> Vec<Slope> {
        self.excluded.keys().copied().collect()
    }

    pub fn audits_passed(&self) -> bool {
        self.audits.values().all(AuditRecord::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "curve": self.curve.to_json(),
            "radius": self.radius.to_string(),
            "max_torsion_order": self.max_order.to_string(),
            "excluded_slopes": self.excluded.iter().map(|(s, rs)| json!({
                "p": s.p,
                "q": s.q,
                "reasons": rs.iter().map(|r| r.to_json(&self.audits)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "curve_singularities": self.singular_points.iter().map(|sp| {
                let mut v = sp.tangents.to_json();
                v["point"] = sp.point.to_json();
                v["torsion"] = sp.torsion.to_json();
                v
            }).collect::<Vec<_>>(),
            "audits_passed": self.audits_passed(),
            "bezout_ceiling": bezout_degree_bound(&self.curve.inputs).to_string(),
            "theoretical_log_bound": self.log_bound.to_json(),
            "warnings": self.warnings,
        })
    }
}

/// Slopes whose transversality cannot be certified: tangencies with torsion
/// translates of order at most `max_order` up to `radius`, and rational branch
/// tangents at singular points.
pub fn dehn_exclusion_report(f: &SparsePoly, radius: i64, max_order: u64, exec: Execution) -> Result<ExclusionReport> {
    if max_order < 1 {
        return Err(Error::Input("torsion order cap must be at least 1".into()));
    }
    refuse_translates(f)?;
    let curve = CurveSummary::new(f)?;
    let f = &curve.poly;
    let scan = slope_scan(f, radius, Target::TorsionUpTo(max_order), exec)?;
    let mut excluded: BTreeMap<Slope, Vec<Reason>> = BTreeMap::new();
    let mut audits = BTreeMap::new();
    for r in scan.hits() {
        for si in &r.intersections {
            audits.insert(si.point.describe(), audit_point(&si.point, &curve.inputs, &si.slope)?);
        }
        excluded.entry(r.locus.slope).or_default().push(Reason::TangentSubtorus(r.intersections.clone()));
    }
    let mut warnings = vec![CURVE_SIDE_WARNING.to_string()];
    let mut singular_points = Vec::new();
    for p in curve_singular_points(f)? {
        let tangents = branch_tangents(f, &p)?;
        for s in &tangents.slopes {
            excluded.entry(*s).or_default().push(Reason::SingularBranchTangent(Box::new(p.clone())));
        }
        let torsion = torsion_point_test(&p)?;
        if torsion.is_torsion {
            warnings.push(format!(
                "singular point {} is torsion of order {}: the hypothesis that singular values are not torsion fails",
                p.describe(),
                torsion.order.map_or("?".into(), |o| o.to_string())
            ));
        }
        singular_points.push(SingularPointInfo { point: p, tangents, torsion });
    }
    let log_bound = theorem_slope_bound_log(&curve.inputs);
    Ok(ExclusionReport { curve, radius, max_order, excluded, singular_points, audits, log_bound, warnings })
}

/// Re-check a serialized report from its own data: every point lies on the
/// curve, is tangent with the stated slope, and sits on a torsion translate.
pub fn verify_report(v: &Value) -> Result<usize> {
    let bad = |m: &str| Error::Input(format!("report check failed: {m}"));
    let f: SparsePoly = v["curve"]["poly"].as_str().ok_or_else(|| bad("missing curve"))?.parse()?;
    let mut checked = 0;
    for e in v["excluded_slopes"].as_array().ok_or_else(|| bad("missing slopes"))? {
        let s = Slope::new(e["p"].as_i64().unwrap_or(0), e["q"].as_i64().unwrap_or(0))?;
        if s.p != e["p"].as_i64().unwrap_or(0) || s.q != e["q"].as_i64().unwrap_or(0) {
            return Err(bad("slope not canonical"));
        }
        let g = tangency_poly(&f, &s);
        for r in e["reasons"].as_array().ok_or_else(|| bad("missing reasons"))? {
            match r["kind"].as_str() {
                Some("tangent-subtorus") => {
                    for pv in r["points"].as_array().ok_or_else(|| bad("missing points"))? {
                        let p = AlgebraicPoint::from_json(&pv["point"])?;
                        p.recertify(&[("f", &f), ("g", &g)])?;
                        if !sigma_c(&f, &p)?.is_slope(&s) {
                            return Err(bad("tangent direction differs from slope"));
                        }
                        let m = crate::solver::monomial_value(&p, s.p, s.q)?;
                        if !crate::solver::is_root_of_unity(&m.minpoly, &m.bx)?.is_torsion {
                            return Err(bad("coset value is not torsion"));
                        }
                        checked += 1;
                    }
                }
                Some("singular-branch-tangent") => {
                    let p = AlgebraicPoint::from_json(&r["point"])?;
                    p.recertify(&[("f", &f)])?;
                    if !branch_tangents(&f, &p)?.slopes.contains(&s) {
                        return Err(bad("branch tangent not reproduced"));
                    }
                    checked += 1;
                }
                _ => return Err(bad("unknown reason")),
            }
        }
    }
    Ok(checked)
}

#[derive(Clone, Debug, Deserialize)]
struct EntryFile {
    name: String,
    source: String,
    poly: String,
    #[serde(default)]
    degree: Option<u32>,
    #[serde(default)]
    height: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub source: String,
    pub text: String,
    pub poly: SparsePoly,
    pub degree: u32,
    pub height: HeightValue,
}

impl CorpusEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "source": self.source,
            "poly": self.poly.to_text(),
            "degree": self.degree.to_string(),
            "height": self.height.to_json(),
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    /// File name and reason for each rejected entry.
    pub rejected: Vec<(String, String)>,
}

fn load_entry(text: &str) -> Result<CorpusEntry> {
    let e: EntryFile = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    let poly: SparsePoly = e.poly.parse()?;
    if poly.is_constant() {
        return Err(Error::ConstantInput);
    }
    if !poly.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    refuse_translates(&poly)?;
    let degree = poly.total_degree();
    let height = poly_height(&poly)?;
    if e.degree.is_some_and(|d| d != degree) {
        return Err(Error::Input(format!("recorded degree {} differs from {}", e.degree.unwrap(), degree)));
    }
    if let Some(h) = &e.height {
        let expect = HeightValue::from_json(&json!({ "kind": "exact-log", "arg": h }))?;
        if compare(&expect, &height) != Comparison::LessOrEqual || compare(&height, &expect) != Comparison::LessOrEqual {
            return Err(Error::Input(format!("recorded height log {h} differs from {}", height.to_text())));
        }
    }
    Ok(CorpusEntry { name: e.name, source: e.source, text: e.poly, poly, degree, height })
}

/// Load every `*.json` entry of a directory, in file-name order.
pub fn ingest_corpus(dir: &Path) -> Result<Corpus> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut out = Corpus::default();
    for path in files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        match std::fs::read_to_string(&path).map_err(Error::from).and_then(|t| load_entry(&t)) {
            Ok(e) => out.entries.push(e),
            Err(err) => out.rejected.push((name, err.to_string())),
        }
    }
    Ok(out)
}

/// Result of one property over its samples.
#[derive(Clone, Debug)]
pub struct PropertyOutcome {
    pub name: String,
    pub cases: usize,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub seed: u64,
    pub outcomes: Vec<PropertyOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.counterexample.is_none())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed.to_string(),
            "passed": self.passed(),
            "properties": self.outcomes.iter().map(|o| json!({
                "name": o.name,
                "cases": o.cases.to_string(),
                "passed": o.counterexample.is_none(),
                "counterexample": o.counterexample,
            })).collect::<Vec<_>>(),
        })
    }
}

/// A property checked on `n` random cases; returns the first counterexample.
pub type Property = fn(&mut ChaCha8Rng, usize) -> (usize, Option<String>);

pub fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32, max_coeff: i64, terms: usize) -> SparsePoly {
    let mut t = Vec::new();
    for _ in 0..terms {
        let a = rng.gen_range(0..=max_deg);
        let b = rng.gen_range(0..=max_deg - a);
        t.push(((a, b), rng.gen_range(-max_coeff..=max_coeff)));
    }
    SparsePoly::from_int_terms(&t)
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

fn prop_height_inequality(rng: &mut ChaCha8Rng, n: usize) -> (usize, Option<String>) {
    let mut cases = 0;
    while cases < n {
        let (k1, k2) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let f1 = random_poly(rng, 5, 10, k1);
        let f2 = random_poly(rng, 5, 10, k2);
        let (x, y) = (random_rational(rng, 1_000_000), random_rational(rng, 1_000_000));
        let Ok(c) = verify_lemma31(&f1, &f2, &x, &y) else { continue };
        cases += 1;
        if !c.holds {
            return (cases, Some(format!("f1 = {}, f2 = {}, P = ({x}, {y})", f1.to_text(), f2.to_text())));
        }
    }
    (cases, None)
}

/// Dense Sylvester determinant by fraction-free elimination.
pub fn sylvester_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        let Some(piv) = (k..size).find(|&r| !mat[r][k].is_zero()) else { return BigInt::zero() };
        if piv != k {
            mat.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                mat[i][j] = (&mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j]) / &prev;
            }
            mat[i][k] = BigInt::zero();
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

fn random_uni(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = (0..=deg).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    if c[deg].is_zero() {
        c[deg] = BigInt::one();
    }
    c
}

fn prop_resultant(rng: &mut ChaCha8Rng, n: usize) -> (usize, Option<String>) {
    for i in 0..n {
        let k = rng.gen_range(1..=6);
        let a = random_uni(rng, k, 20);
        let k = rng.gen_range(1..=6);
        let b = random_uni(rng, k, 20);
        let fast = uni_resultant(&UniPoly::from_bigints(Var::X, &a), &UniPoly::from_bigints(Var::X, &b));
        if fast != Rational::from_integer(sylvester_resultant(&a, &b)) {
            return (i + 1, Some(format!("a = {a:?}, b = {b:?}")));
        }
    }
    (n, None)
}

fn prop_roots(rng: &mut ChaCha8Rng, n: usize) -> (usize, Option<String>) {
    for i in 0..n {
        let k = rng.gen_range(1..=6);
        let u = UniPoly::from_bigints(Var::X, &random_uni(rng, k, 10));
        let fail = || Some(format!("u = {}", u.to_text()));
        let Ok(boxes) = isolate_roots(&u) else { return (i + 1, fail()) };
        let disjoint = boxes.iter().enumerate().all(|(j, a)| boxes[j + 1..].iter().all(|b| !a.intersects(b)));
        if !disjoint || boxes.len() != u.squarefree_part().deg0() {
            return (i + 1, fail());
        }
    }
    (n, None)
}

fn random_curve(rng: &mut ChaCha8Rng) -> Option<SparsePoly> {
    let k = rng.gen_range(2..=5);
    let f = random_poly(rng, 2, 5, k);
    let ok = !f.is_constant() && f.is_squarefree().ok()? && translate_witness(&f).is_none();
    ok.then_some(f)
}

fn random_slope(rng: &mut ChaCha8Rng) -> Slope {
    loop {
        if let Ok(s) = Slope::new(rng.gen_range(-4..=4), rng.gen_range(-4..=4)) {
            return s;
        }
    }
}

fn prop_tangency(rng: &mut ChaCha8Rng, n: usize) -> (usize, Option<String>) {
    let mut cases = 0;
    while cases < n {
        let Some(f) = random_curve(rng) else { continue };
        let s = random_slope(rng);
        cases += 1;
        let fail = |what: &str| Some(format!("{what}: f = {}, slope {s}", f.to_text()));
        let Ok(l) = tangency_locus(&f, &s) else { return (cases, fail("locus failed")) };
        let d = f.total_degree() as usize;
        if l.points.len() + l.excluded_singular.len() > d * d {
            return (cases, fail("Bezout ceiling exceeded"));
        }
        if !l.points.iter().all(|p| sigma_c(&f, p).is_ok_and(|t| t.is_slope(&s))) {
            return (cases, fail("tangent direction mismatch"));
        }
        let flipped = tangency_poly_raw(&f, -s.p, -s.q);
        let other = crate::solver::solve_system(&crate::tangency::strip_monomial(&f), &crate::tangency::strip_monomial(&flipped));
        let all: Vec<String> = l.points.iter().chain(&l.excluded_singular).map(AlgebraicPoint::describe).collect();
        let mut all = all;
        all.sort();
        let mut back: Vec<String> = other.map(|v| v.iter().map(AlgebraicPoint::describe).collect()).unwrap_or_default();
        back.sort();
        if !flipped.is_constant() && all != back {
            return (cases, fail("opposite orientation disagrees"));
        }
    }
    (cases, None)
}

/// The unsharpened route to the tangent-height bound: the lemma at `N = delta`
/// applied to `x f_x`, `y f_y`, whose coefficient height is at most `h(f) + log delta`.
fn upi_unsharpened(b: &BoundInputs, hp: &HeightValue) -> HeightValue {
    let hfam = b.hf.add(&HeightValue::exact_log(&Rational::from_integer(b.delta.into())));
    lemma31_rhs(b.delta, hp, &hfam)
}

fn prop_bounds(rng: &mut ChaCha8Rng, n: usize) -> (usize, Option<String>) {
    let le = |a: &HeightValue, b: &HeightValue| compare(a, b) == Comparison::LessOrEqual;
    for i in 0..n {
        let dx = rng.gen_range(1..=6u32);
        let dy = rng.gen_range(1..=6u32);
        let d = rng.gen_range(dx.max(dy)..=dx + dy);
        let h = HeightValue::exact_log(&Rational::from_integer(rng.gen_range(1..=100_000u32).into()));
        let hp = HeightValue::exact_log(&Rational::from_integer(rng.gen_range(1..=1000u32).into()));
        let b = BoundInputs::new(d, dx, dy, h.clone(), 1).unwrap();
        let b2 = BoundInputs::new(d + 1, dx + 1, dy, h.add(&HeightValue::exact_log(&rat(3, 1))), 1).unwrap();
        let ok = le(&theorem_slope_bound_log(&b), &theorem_slope_bound_log(&b2))
            && le(&crate::bounds::habegger_height_bound(&b), &crate::bounds::habegger_height_bound(&b2))
            && le(&upI_bound(&b, &hp), &upI_bound(&b2, &hp))
            && le(&upI_bound(&b, &hp), &upi_unsharpened(&b, &hp))
            && bezout_degree_bound(&b) <= bezout_degree_bound(&b2);
        if !ok {
            return (i + 1, Some(format!("delta = {d}, delta_x = {dx}, delta_y = {dy}, h(f) = {}", h.to_text())));
        }
    }
    (n, None)
}

/// The built-in properties, with the share of `samples` each receives.
pub const PROPERTIES: &[(&str, Property, usize)] = &[
    ("height-inequality", prop_height_inequality, 1),
    ("resultant-vs-sylvester", prop_resultant, 1),
    ("root-isolation", prop_roots, 1),
    ("tangency-consistency", prop_tangency, 4),
    ("bound-monotonicity", prop_bounds, 1),
];

/// Run `props`, each with its own generator derived from `seed`.
pub fn run_properties(seed: u64, samples: usize, props: &[(&str, Property, usize)]) -> SuiteReport {
    let outcomes = props
        .iter()
        .enumerate()
        .map(|(i, (name, prop, share))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let (cases, counterexample) = prop(&mut rng, samples.div_ceil(*share));
            PropertyOutcome { name: name.to_string(), cases, counterexample }
        })
        .collect();
    SuiteReport { seed, outcomes }
}

pub fn run_verification_suite(seed: u64, samples: usize) -> SuiteReport {
    run_properties(seed, samples, PROPERTIES)
}
