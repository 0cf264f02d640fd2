//! Tangency of a plane curve `f = 0` with the subtori `x^p y^q = 1` and their translates.
//!
//! At a smooth point the logarithmic tangent direction of the curve is
//! `(x f_x : y f_y)`, and a translate of `x^p y^q = 1` has direction `(p : q)`
//! everywhere, so tangency with some translate is the vanishing of
//! `g = q x f_x - p y f_y`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{int, Rational};
use crate::bounds::{theorem_slope_bound_log, BoundInputs};
use crate::error::{Error, Result};
use crate::heights::HeightValue;
use crate::poly::{irreducible_factors, PlaneVar, SparsePoly, UniPoly, Var};
use crate::solver::system::{k_derivative, k_gcd, trim, KPoly};
use crate::solver::{is_root_of_unity, monomial_value, solve_system, AlgebraicPoint, AlgebraicValue, PointField, TorsionCertificate};

/// A primitive direction `(p, q)` naming the subtorus `x^p y^q = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    /// Coprime `(p, q)`, oriented so that `q > 0`, or `q = 0` and `p = 1`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidSlope(p, q));
        }
        Ok(if q < 0 || (q == 0 && p < 0) { Slope { p: -p, q: -q } } else { Slope { p, q } })
    }

    /// `max(|p|, |q|)`.
    pub fn size(&self) -> i64 {
        self.p.abs().max(self.q.abs())
    }

    pub fn to_json(&self) -> Value {
        json!([self.p, self.q])
    }
}

impl Ord for Slope {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.size(), self.p, self.q).cmp(&(o.size(), o.p, o.q))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// All slopes with `max(|p|, |q|) <= n`, in scan order.
pub fn canonical_slopes(n: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for p in -n..=n {
        for q in 0..=n {
            if let Ok(s) = Slope::new(p, q) {
                if s.p == p && s.q == q {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out
}

/// `q x f_x - p y f_y` for any integer pair.
pub fn tangency_poly_raw(f: &SparsePoly, p: i64, q: i64) -> SparsePoly {
    let a = f.partial(PlaneVar::X).mul_monomial(1, 0).scale(&int(q));
    let b = f.partial(PlaneVar::Y).mul_monomial(0, 1).scale(&int(p));
    a.sub(&b)
}

pub fn tangency_poly(f: &SparsePoly, s: &Slope) -> SparsePoly {
    tangency_poly_raw(f, s.p, s.q)
}

/// Divide out the largest monomial factor.
pub fn strip_monomial(f: &SparsePoly) -> SparsePoly {
    let Some(a) = f.terms().keys().map(|e| e.0).min() else { return f.clone() };
    let b = f.terms().keys().map(|e| e.1).min().unwrap();
    SparsePoly::from_terms(f.terms().iter().map(|(&(i, j), c)| ((i - a, j - b), c.clone())))
}

/// The non-monomial part of `gcd(f, g)`, if nonconstant.
fn common_factor(f: &SparsePoly, g: &SparsePoly) -> Option<SparsePoly> {
    if g.is_zero() {
        return Some(f.canonical());
    }
    let h = strip_monomial(&f.gcd(g));
    (!h.is_constant()).then(|| h.canonical())
}

fn translate_error(s: &Slope, witness: &SparsePoly) -> Error {
    Error::TranslateOfSubtorus { p: s.p, q: s.q, witness: witness.to_text() }
}

/// A slope and factor of `f` witnessing that the curve contains a translate of a subtorus.
///
/// A component `x^p y^q = c` forces `(p, q)` to be an edge direction of the
/// Newton polygon of `f`, so only differences of exponents are tried.
pub fn translate_witness(f: &SparsePoly) -> Option<(Slope, SparsePoly)> {
    let exps: Vec<(i64, i64)> = f.terms().keys().map(|&(a, b)| (a as i64, b as i64)).collect();
    let mut cands = Vec::new();
    for (i, e) in exps.iter().enumerate() {
        for d in &exps[i + 1..] {
            let (dp, dq) = (d.0 - e.0, d.1 - e.1);
            let g = dp.gcd(&dq);
            if g != 0 {
                cands.push(Slope::new(dp / g, dq / g).unwrap());
            }
        }
    }
    cands.sort();
    cands.dedup();
    cands.into_iter().find_map(|s| common_factor(f, &tangency_poly(f, &s)).map(|w| (s, w)))
}

/// `(x f_x : y f_y)` at a point, as elements of the point's field.
#[derive(Clone, Debug)]
pub struct TangentDirection {
    pub a: UniPoly,
    pub b: UniPoly,
    orbit: Arc<PointField>,
}

impl TangentDirection {
    pub fn is_slope(&self, s: &Slope) -> bool {
        let k = &self.orbit.field;
        k.reduce(&self.a.scale(&int(s.q)).sub(&self.b.scale(&int(s.p)))).is_zero()
    }

    /// Coprime integers `(a, b)` when the direction is rational.
    pub fn rational(&self) -> Option<(BigInt, BigInt)> {
        let k = &self.orbit.field;
        let (a, b) = if self.b.is_zero() {
            (Rational::one(), Rational::zero())
        } else {
            (k.as_rational(&k.mul(&self.a, &k.inv(&self.b)?))?, Rational::one())
        };
        let v = crate::arith::to_coprime_integers(&[a, b]);
        Some((v[0].clone(), v[1].clone()))
    }

    pub fn as_slope(&self) -> Option<Slope> {
        let (a, b) = self.rational()?;
        Slope::new(a.to_i64()?, b.to_i64()?).ok()
    }
}

pub fn sigma_c(f: &SparsePoly, pt: &AlgebraicPoint) -> Result<TangentDirection> {
    let orbit = &pt.orbit;
    if !orbit.vanishes(f) {
        return Err(Error::UncertifiedPoint);
    }
    let a = orbit.field.mul(&orbit.eval(&f.partial(PlaneVar::X)), &orbit.x);
    let b = orbit.field.mul(&orbit.eval(&f.partial(PlaneVar::Y)), &orbit.y);
    if a.is_zero() && b.is_zero() {
        return Err(Error::SingularPointOfCurve);
    }
    Ok(TangentDirection { a, b, orbit: Arc::clone(orbit) })
}

fn is_singular(orbit: &PointField, f: &SparsePoly) -> bool {
    orbit.vanishes(&f.partial(PlaneVar::X)) && orbit.vanishes(&f.partial(PlaneVar::Y))
}

fn require_squarefree(f: &SparsePoly) -> Result<()> {
    if !f.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct TangencyLocus {
    pub slope: Slope,
    pub g: SparsePoly,
    /// Smooth points of the curve where the tangent direction is the slope.
    pub points: Vec<AlgebraicPoint>,
    /// Common zeros of `f` and `g` that are singular on the curve.
    pub excluded_singular: Vec<AlgebraicPoint>,
}

fn locus_unchecked(f: &SparsePoly, s: &Slope) -> Result<TangencyLocus> {
    let g = tangency_poly(f, s);
    if let Some(w) = common_factor(f, &g) {
        return Err(translate_error(s, &w));
    }
    let (fs, gs) = (strip_monomial(f), strip_monomial(&g));
    let all = if gs.is_constant() { Vec::new() } else { solve_system(&fs, &gs)? };
    let (excluded_singular, points) = all.into_iter().partition(|p| is_singular(&p.orbit, f));
    Ok(TangencyLocus { slope: *s, g, points, excluded_singular })
}

/// All points of the torus on `f = 0` where `g_{p,q}` vanishes, split by smoothness.
pub fn tangency_locus(f: &SparsePoly, s: &Slope) -> Result<TangencyLocus> {
    require_squarefree(f)?;
    locus_unchecked(f, s)
}

/// Which translates of the subtorus to intersect with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Unit,
    TorsionUpTo(u64),
    AnyTranslate,
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::Unit => "unit",
            Target::TorsionUpTo(_) => "torsion",
            Target::AnyTranslate => "any-translate",
        }
    }

    /// Whether the slope bound applies to results for this target.
    pub fn has_bound(&self) -> bool {
        !matches!(self, Target::AnyTranslate)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Target::TorsionUpTo(m) => json!({ "kind": self.name(), "max_order": m.to_string() }),
            _ => json!({ "kind": self.name() }),
        }
    }

    fn accepts(&self, c: &TorsionCertificate) -> bool {
        match self {
            Target::Unit => c.order == Some(1),
            Target::TorsionUpTo(m) => c.is_torsion && c.order.is_some_and(|o| o <= *m),
            Target::AnyTranslate => true,
        }
    }
}

/// A point where the curve touches the translate `x^p y^q = value`.
#[derive(Clone, Debug)]
pub struct SingularIntersection {
    pub slope: Slope,
    pub point: AlgebraicPoint,
    pub value: AlgebraicValue,
    pub translate: TorsionCertificate,
}

impl SingularIntersection {
    pub fn to_json(&self) -> Value {
        json!({
            "point": self.point.to_json(),
            "coset_value": { "value": self.value.to_json(), "torsion": self.translate.to_json() },
        })
    }
}

pub fn intersections_from_locus(locus: &TangencyLocus, target: Target) -> Result<Vec<SingularIntersection>> {
    let s = locus.slope;
    let mut out = Vec::new();
    for pt in &locus.points {
        let value = monomial_value(pt, s.p, s.q)?;
        let translate = is_root_of_unity(&value.minpoly, &value.bx)?;
        if target.accepts(&translate) {
            out.push(SingularIntersection { slope: s, point: pt.clone(), value, translate });
        }
    }
    Ok(out)
}

pub fn singular_intersections(f: &SparsePoly, s: &Slope, target: Target) -> Result<Vec<SingularIntersection>> {
    intersections_from_locus(&tangency_locus(f, s)?, target)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Serial,
}

#[derive(Clone, Debug)]
pub struct SlopeResult {
    pub locus: TangencyLocus,
    pub intersections: Vec<SingularIntersection>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub radius: i64,
    pub target: Target,
    pub results: Vec<SlopeResult>,
    /// Natural log of the slope bound; absent for arbitrary translates.
    pub log_bound: Option<HeightValue>,
}

impl ScanReport {
    /// Slopes with at least one singular intersection, in scan order.
    pub fn hits(&self) -> impl Iterator<Item = &SlopeResult> {
        self.results.iter().filter(|r| !r.intersections.is_empty())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "radius": self.radius.to_string(),
            "target": self.target.to_json(),
            "slopes_scanned": self.results.len().to_string(),
            "slopes": self.hits().map(|r| json!({
                "p": r.locus.slope.p,
                "q": r.locus.slope.q,
                "target": self.target.name(),
                "points": r.intersections.iter().map(SingularIntersection::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "theoretical_log_bound": self.log_bound.as_ref().map(HeightValue::to_json),
        })
    }
}

/// Singular intersections for every slope with `max(|p|, |q|) <= radius`.
pub fn slope_scan(f: &SparsePoly, radius: i64, target: Target, exec: Execution) -> Result<ScanReport> {
    if radius < 1 {
        return Err(Error::Input("scan radius must be at least 1".into()));
    }
    require_squarefree(f)?;
    let slopes = canonical_slopes(radius);
    let run = |s: &Slope| -> Result<SlopeResult> {
        let locus = locus_unchecked(f, s)?;
        let intersections = intersections_from_locus(&locus, target)?;
        Ok(SlopeResult { locus, intersections })
    };
    let outcomes: Vec<Result<SlopeResult>> = match exec {
        Execution::Parallel => slopes.par_iter().map(run).collect(),
        Execution::Serial => slopes.iter().map(run).collect(),
    };
    let results = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let log_bound = target.has_bound().then(|| BoundInputs::from_poly(f).map(|b| theorem_slope_bound_log(&b))).transpose()?;
    Ok(ScanReport { radius, target, results, log_bound })
}

/// Singular points of the curve inside the torus.
pub fn curve_singular_points(f: &SparsePoly) -> Result<Vec<AlgebraicPoint>> {
    require_squarefree(f)?;
    let fs = strip_monomial(f);
    let (fx, fy) = (fs.partial(PlaneVar::X), fs.partial(PlaneVar::Y));
    // some combination f_x + c f_y shares no component with f
    for c in 0i64.. {
        let h = if c == 0 { fx.clone() } else { fx.add(&fy.scale(&int(c - 1))) };
        let h = strip_monomial(&h);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(Vec::new());
        }
        let pts = match solve_system(&fs, &h) {
            Err(Error::InfiniteIntersection(_)) => continue,
            other => other?,
        };
        let mut out = Vec::new();
        for mut p in pts {
            if is_singular(&p.orbit, &fs) {
                p.certificate = ["f", "f_x", "f_y", "torus"].map(String::from).to_vec();
                out.push(p);
            }
        }
        return Ok(out);
    }
    unreachable!()
}

/// Tangent directions of the branches through a singular point.
#[derive(Clone, Debug)]
pub struct BranchTangents {
    /// Order of the lowest nonvanishing form at the point.
    pub multiplicity: usize,
    /// Rational directions, each naming a subtorus.
    pub slopes: Vec<Slope>,
    /// Distinct directions that are not rational.
    pub irrational_directions: usize,
}

impl BranchTangents {
    pub fn to_json(&self) -> Value {
        json!({
            "multiplicity": self.multiplicity,
            "tangent_slopes": self.slopes.iter().map(Slope::to_json).collect::<Vec<_>>(),
            "irrational_directions": self.irrational_directions,
        })
    }
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(r)
}

/// Branch directions at a singular point, in the logarithmic frame.
///
/// The direction `a du + b dv = 0` at `(x0, y0)` is the slope `(p : q)` with
/// `p / x0 : q / y0 = a : b`; equivalently the tangent cone `H` vanishes at
/// `(q x0, -p y0)`.
pub fn branch_tangents(f: &SparsePoly, pt: &AlgebraicPoint) -> Result<BranchTangents> {
    let orbit = &pt.orbit;
    let k = &orbit.field;
    if !orbit.vanishes(f) || !is_singular(orbit, f) {
        return Err(Error::NotSingularPoint);
    }
    let delta = f.total_degree();
    let powers = |z: &UniPoly| {
        let mut v = vec![UniPoly::one(Var::T)];
        for _ in 0..delta {
            v.push(k.mul(v.last().unwrap(), z));
        }
        v
    };
    let (xp, yp) = (powers(&orbit.x), powers(&orbit.y));
    // coefficient of u^i v^j in f(x0 + u, y0 + v)
    let coeff = |i: u32, j: u32| {
        let mut acc = UniPoly::zero(Var::T);
        for (&(a, b), c) in f.terms() {
            if a >= i && b >= j {
                let w = c * binomial(a, i) * binomial(b, j);
                acc = acc.add(&k.mul(&xp[(a - i) as usize], &yp[(b - j) as usize]).scale(&w));
            }
        }
        k.reduce(&acc)
    };
    let (m, cone) = (2..=delta)
        .map(|m| (m, (0..=m).map(|i| coeff(i, m - i)).collect::<Vec<_>>()))
        .find(|(_, h)| h.iter().any(|c| !c.is_zero()))
        .ok_or(Error::NotSingularPoint)?;
    // phi(p) = H(x0, -p y0): coefficient of p^j is h_{m-j, j} x0^{m-j} (-y0)^j
    let phi: KPoly = trim(
        (0..=m as usize)
            .map(|j| {
                let s = if j % 2 == 1 { -Rational::one() } else { Rational::one() };
                k.mul(&k.mul(&cone[m as usize - j], &xp[m as usize - j]), &yp[j]).scale(&s)
            })
            .collect(),
    );
    let at_infinity = phi.len() <= m as usize;
    let mut slopes = Vec::new();
    if at_infinity {
        slopes.push(Slope { p: 1, q: 0 });
    }
    // rational roots of phi are common roots of its coordinate polynomials
    let mut g: Option<UniPoly> = None;
    for t in 0..k.degree() {
        let c: Vec<Rational> = phi.iter().map(|c| c.coeff(t)).collect();
        let u = UniPoly::new(Var::X, c);
        if !u.is_zero() {
            g = Some(match g {
                None => u,
                Some(g) => g.gcd(&u),
            });
        }
    }
    if let Some(g) = g.filter(|g| !g.is_constant()) {
        for fac in irreducible_factors(&g) {
            if fac.deg0() == 1 {
                let r = -fac.coeff(0) / fac.coeff(1);
                let (p, q) = (r.numer().to_i64(), r.denom().to_i64());
                if let (Some(p), Some(q)) = (p, q) {
                    slopes.push(Slope::new(p, q)?);
                }
            }
        }
    }
    slopes.sort();
    slopes.dedup();
    let distinct = if phi.len() > 1 {
        let d = k_gcd(k, &phi, &k_derivative(&phi));
        (phi.len() - 1) - (d.len() - 1)
    } else {
        0
    } + usize::from(at_infinity);
    Ok(BranchTangents { multiplicity: m as usize, irrational_directions: distinct - slopes.len(), slopes })
}
