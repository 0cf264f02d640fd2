//! Logarithmic Weil heights with exact or certified values.
//!
//! Exact values are kept symbolically as `c + sum a_i log b_i` with rational
//! `c`, `a_i`, `b_i`; comparisons between them are decided exactly. Heights of
//! irrational algebraic numbers are refinable enclosures computed from the
//! Mahler measure of the minimal polynomial.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{ln_interval, ln_rational, parse_rational, rational_string, to_coprime_integers, CBox, Dyadic, Interval, Rational};
use crate::error::{Error, Result};
use crate::poly::{is_irreducible, SparsePoly, UniPoly, Var};
use crate::solver::roots::{locate_box, RootIsolation, MAX_PRECISION};
use crate::solver::torsion::cyclotomic_index;
use crate::solver::AlgebraicPoint;

/// Products of integer powers are folded into one logarithm while they stay below this many bits.
const FOLD_BITS: u64 = 4096;

/// Default precision budget (bits) for deciding comparisons involving enclosures.
pub const COMPARE_BUDGET: u32 = 4096;

/// The exact real number `c + sum a_i * ln(b_i)` with every `b_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogLinear {
    c: Rational,
    terms: Vec<(Rational, Rational)>,
}

impl LogLinear {
    pub fn zero() -> Self {
        LogLinear { c: Rational::zero(), terms: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        LogLinear { c, terms: Vec::new() }
    }

    /// `ln r` for rational `r > 0`.
    pub fn log(r: &Rational) -> Self {
        assert!(r.is_positive(), "logarithm of a nonpositive number");
        LogLinear { c: Rational::zero(), terms: vec![(Rational::one(), r.clone())] }.normalized()
    }

    pub fn constant_part(&self) -> &Rational {
        &self.c
    }

    /// `(coefficient, argument)` pairs of the logarithmic part.
    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    fn normalized(mut self) -> Self {
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (a, b) in self.terms.drain(..) {
            if a.is_zero() || b.is_one() {
                continue;
            }
            let (a, b) = if b < Rational::one() { (-a, b.recip()) } else { (a, b) };
            match merged.iter_mut().find(|(_, bb)| *bb == b) {
                Some(slot) => slot.0 += a,
                None => merged.push((a, b)),
            }
        }
        merged.retain(|(a, _)| !a.is_zero());
        // fold integer powers into one argument while it stays small
        let mut folded = Rational::one();
        let mut rest = Vec::new();
        for (a, b) in merged {
            let e = a.is_integer().then(|| a.to_integer()).and_then(|e| i32::try_from(e).ok());
            let fits = e.is_some_and(|e| {
                let bits = (b.numer().bits() + b.denom().bits()) * e.unsigned_abs() as u64;
                bits + folded.numer().bits() + folded.denom().bits() <= FOLD_BITS
            });
            match e {
                Some(e) if fits => folded *= num_traits::pow::Pow::pow(&b, e),
                _ => rest.push((a, b)),
            }
        }
        if !folded.is_one() {
            if folded < Rational::one() {
                rest.push((-Rational::one(), folded.recip()));
            } else {
                rest.push((Rational::one(), folded));
            }
        }
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        for (a, b) in rest {
            match out.iter_mut().find(|(_, bb)| *bb == b) {
                Some(slot) => slot.0 += a,
                None => out.push((a, b)),
            }
        }
        let mut rest: Vec<_> = out.into_iter().filter(|(a, _)| !a.is_zero()).collect();
        rest.sort_by(|x, y| (&x.1, &x.0).cmp(&(&y.1, &y.0)));
        self.terms = rest;
        self
    }

    pub fn add(&self, o: &LogLinear) -> LogLinear {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        LogLinear { c: &self.c + &o.c, terms }.normalized()
    }

    pub fn neg(&self) -> LogLinear {
        LogLinear { c: -&self.c, terms: self.terms.iter().map(|(a, b)| (-a, b.clone())).collect() }.normalized()
    }

    pub fn sub(&self, o: &LogLinear) -> LogLinear {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rational) -> LogLinear {
        LogLinear { c: &self.c * k, terms: self.terms.iter().map(|(a, b)| (a * k, b.clone())).collect() }.normalized()
    }

    /// `Some(r)` when the value is exactly `ln r`.
    pub fn as_exact_log(&self) -> Option<Rational> {
        if !self.c.is_zero() {
            return None;
        }
        match self.terms.as_slice() {
            [] => Some(Rational::one()),
            [(a, b)] if a.is_one() => Some(b.clone()),
            _ => None,
        }
    }

    /// Enclosure with about `prec` correct bits.
    pub fn interval(&self, prec: u32) -> Interval {
        let mut acc = Interval::from_rational(&self.c, prec + 16);
        for (a, b) in &self.terms {
            let extra = (a.numer().bits() + 16) as u32;
            let l = ln_rational(b, prec + extra);
            acc = acc.add(&l.scale(a, prec + extra), prec + extra);
        }
        acc
    }

    /// Is the logarithmic part exactly zero? Decided by unique factorization over a coprime base.
    fn log_part_is_zero(&self) -> bool {
        let mut nums: Vec<BigInt> = Vec::new();
        for (_, b) in &self.terms {
            nums.push(b.numer().clone());
            nums.push(b.denom().clone());
        }
        let base = coprime_base(&nums);
        let lcm = self.terms.iter().fold(BigInt::one(), |acc, (a, _)| acc.lcm(a.denom()));
        for p in &base {
            let mut e = BigInt::zero();
            for (a, b) in &self.terms {
                let ai = (a * BigRational::from_integer(lcm.clone())).to_integer();
                let v = valuation(b.numer(), p) - valuation(b.denom(), p);
                e += ai * BigInt::from(v);
            }
            if !e.is_zero() {
                return false;
            }
        }
        true
    }

    /// Exact sign.
    ///
    /// A nonzero rational combination of logarithms of rationals is never a
    /// nonzero rational, so with `c != 0` or a nonzero log part, interval
    /// refinement terminates.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return self.c.cmp(&Rational::zero());
        }
        if self.c.is_zero() && self.log_part_is_zero() {
            return Ordering::Equal;
        }
        let mut prec = 64;
        loop {
            let iv = self.interval(prec);
            if iv.lo.signum() > 0 {
                return Ordering::Greater;
            }
            if iv.hi.signum() < 0 {
                return Ordering::Less;
            }
            prec *= 2;
        }
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        if !self.c.is_zero() || self.terms.is_empty() {
            parts.push(rational_string(&self.c));
        }
        for (a, b) in &self.terms {
            let arg = rational_string(b);
            parts.push(if a.is_one() { format!("log {arg}") } else { format!("{}*log {arg}", rational_string(a)) });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Pairwise coprime integers `> 1` whose products generate every input.
fn coprime_base(nums: &[BigInt]) -> Vec<BigInt> {
    let mut s: Vec<BigInt> = nums.iter().map(|n| n.abs()).filter(|n| *n > BigInt::one()).collect();
    s.sort();
    s.dedup();
    loop {
        let mut changed = false;
        'outer: for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let g = s[i].gcd(&s[j]);
                if g > BigInt::one() {
                    let a = &s[i] / &g;
                    let b = &s[j] / &g;
                    s.remove(j);
                    s.remove(i);
                    for v in [g, a, b] {
                        if v > BigInt::one() {
                            s.push(v);
                        }
                    }
                    s.sort();
                    s.dedup();
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            return s;
        }
    }
}

fn valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

type Evaluator = Arc<dyn Fn(u32) -> Result<Interval> + Send + Sync>;

/// A certified interval for a real number, optionally refinable.
#[derive(Clone)]
pub struct Enclosure {
    iv: Interval,
    eval: Option<Evaluator>,
}

impl Enclosure {
    pub fn bounds(&self) -> &Interval {
        &self.iv
    }

    pub fn is_refinable(&self) -> bool {
        self.eval.is_some()
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Enclosure[{}, {}]", self.iv.lo, self.iv.hi)
    }
}

/// A nonnegative height value.
#[derive(Clone, Debug)]
pub enum HeightValue {
    Exact(LogLinear),
    Enclosure(Enclosure),
}

/// Outcome of comparing two heights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    LessOrEqual,
    Greater,
    /// Enclosures still overlap at the precision budget; carries the overlap width.
    Undecided(Dyadic),
}

impl HeightValue {
    pub fn zero() -> Self {
        HeightValue::Exact(LogLinear::zero())
    }

    /// `ln r`, `r >= 1`.
    pub fn exact_log(r: &Rational) -> Self {
        assert!(*r >= Rational::one(), "height argument below one");
        HeightValue::Exact(LogLinear::log(r))
    }

    pub fn constant(c: &Rational) -> Self {
        HeightValue::Exact(LogLinear::constant(c.clone()))
    }

    pub fn linear(l: LogLinear) -> Self {
        HeightValue::Exact(l)
    }

    /// Fixed enclosure without a refinement procedure.
    pub fn fixed_enclosure(iv: Interval) -> Self {
        HeightValue::Enclosure(Enclosure { iv, eval: None })
    }

    /// Enclosure produced by `eval(prec)`; evaluated once at 64 bits.
    pub fn refinable(eval: Evaluator) -> Result<Self> {
        let iv = eval(64)?;
        Ok(HeightValue::Enclosure(Enclosure { iv, eval: Some(eval) }))
    }

    pub fn as_linear(&self) -> Option<&LogLinear> {
        match self {
            HeightValue::Exact(l) => Some(l),
            HeightValue::Enclosure(_) => None,
        }
    }

    pub fn as_exact_log(&self) -> Option<Rational> {
        self.as_linear().and_then(LogLinear::as_exact_log)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, HeightValue::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.as_exact_log(), Some(r) if r.is_one())
    }

    /// Enclosure at about `prec` bits.
    pub fn interval(&self, prec: u32) -> Result<Interval> {
        match self {
            HeightValue::Exact(l) => Ok(l.interval(prec)),
            HeightValue::Enclosure(e) => match &e.eval {
                None => Ok(e.iv.clone()),
                Some(f) => {
                    let iv = f(prec)?;
                    Ok(Interval::new(iv.lo.max(e.iv.lo.clone()), iv.hi.min(e.iv.hi.clone())))
                }
            },
        }
    }

    fn evaluator(&self) -> Evaluator {
        let me = self.clone();
        Arc::new(move |prec| me.interval(prec))
    }

    pub fn add(&self, o: &HeightValue) -> HeightValue {
        match (self, o) {
            (HeightValue::Exact(a), HeightValue::Exact(b)) => HeightValue::Exact(a.add(b)),
            _ => {
                let (a, b) = (self.evaluator(), o.evaluator());
                let iv = self.current().add(&o.current(), 128);
                let both_refinable = self.refinable_flag() && o.refinable_flag();
                let eval: Evaluator = Arc::new(move |p| Ok(a(p)?.add(&b(p)?, p + 8)));
                HeightValue::Enclosure(Enclosure { iv, eval: both_refinable.then_some(eval) })
            }
        }
    }

    /// Multiply by a nonnegative rational.
    pub fn scale(&self, k: &Rational) -> HeightValue {
        assert!(!k.is_negative(), "heights scale by nonnegative factors");
        match self {
            HeightValue::Exact(a) => HeightValue::Exact(a.scale(k)),
            HeightValue::Enclosure(e) => {
                let a = self.evaluator();
                let k2 = k.clone();
                let iv = e.iv.scale(k, 128);
                let eval: Evaluator = Arc::new(move |p| Ok(a(p)?.scale(&k2, p + 8)));
                HeightValue::Enclosure(Enclosure { iv, eval: e.eval.is_some().then_some(eval) })
            }
        }
    }

    /// The larger of two heights; exact when the comparison is decidable.
    pub fn max(&self, o: &HeightValue) -> HeightValue {
        match compare(self, o) {
            Comparison::LessOrEqual => o.clone(),
            Comparison::Greater => self.clone(),
            Comparison::Undecided(_) => {
                let (a, b) = (self.evaluator(), o.evaluator());
                let (x, y) = (self.current(), o.current());
                let iv = Interval::new(x.lo.clone().max(y.lo.clone()), x.hi.clone().max(y.hi.clone()));
                let eval: Evaluator = Arc::new(move |p| {
                    let (x, y) = (a(p)?, b(p)?);
                    Ok(Interval::new(x.lo.max(y.lo), x.hi.max(y.hi)))
                });
                HeightValue::Enclosure(Enclosure { iv, eval: Some(eval) })
            }
        }
    }

    fn refinable_flag(&self) -> bool {
        match self {
            HeightValue::Exact(_) => true,
            HeightValue::Enclosure(e) => e.eval.is_some(),
        }
    }

    fn current(&self) -> Interval {
        match self {
            HeightValue::Exact(l) => l.interval(64),
            HeightValue::Enclosure(e) => e.iv.clone(),
        }
    }

    /// A copy whose stored enclosure is narrower than `width`, if refinable.
    pub fn refined(&self, width: &Dyadic) -> Result<HeightValue> {
        match self {
            HeightValue::Exact(_) => Ok(self.clone()),
            HeightValue::Enclosure(e) => {
                let Some(f) = &e.eval else { return Ok(self.clone()) };
                let mut prec = 64;
                loop {
                    let iv = self.interval(prec)?;
                    if &iv.width() <= width {
                        return Ok(HeightValue::Enclosure(Enclosure { iv, eval: Some(Arc::clone(f)) }));
                    }
                    if prec >= MAX_PRECISION {
                        return Err(Error::PrecisionExhausted("refining a height enclosure".into()));
                    }
                    prec *= 2;
                }
            }
        }
    }

    /// Lower and upper bounds at 64 bits, for display and reports.
    pub fn bounds(&self) -> Interval {
        self.current()
    }

    pub fn to_json(&self) -> Value {
        match self {
            HeightValue::Exact(l) => match l.as_exact_log() {
                Some(r) => json!({ "kind": "exact-log", "arg": rational_string(&r) }),
                None => {
                    let iv = l.interval(64);
                    json!({
                        "kind": "log-linear",
                        "const": rational_string(&l.c),
                        "terms": l.terms.iter().map(|(a, b)| json!({ "coeff": rational_string(a), "arg": rational_string(b) })).collect::<Vec<_>>(),
                        "lo": iv.lo.to_string(),
                        "hi": iv.hi.to_string(),
                    })
                }
            },
            HeightValue::Enclosure(e) => json!({ "kind": "enclosure", "lo": e.iv.lo.to_string(), "hi": e.iv.hi.to_string() }),
        }
    }

    pub fn from_json(v: &Value) -> Result<HeightValue> {
        let s = |k: &str| -> Result<&str> { v.get(k).and_then(Value::as_str).ok_or_else(|| Error::Input(format!("height field '{k}' missing"))) };
        let r = |t: &str| parse_rational(t).ok_or_else(|| Error::Input(format!("bad rational '{t}'")));
        let d = |t: &str| t.parse::<Dyadic>().map_err(|_| Error::Input(format!("bad dyadic '{t}'")));
        match s("kind")? {
            "exact-log" => {
                let a = r(s("arg")?)?;
                if a < Rational::one() {
                    return Err(Error::Input("exact-log argument below one".into()));
                }
                Ok(HeightValue::exact_log(&a))
            }
            "log-linear" => {
                let c = r(s("const")?)?;
                let mut terms = Vec::new();
                for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| Error::Input("log-linear terms missing".into()))? {
                    let coeff = t.get("coeff").and_then(Value::as_str).ok_or_else(|| Error::Input("term coeff missing".into()))?;
                    let arg = t.get("arg").and_then(Value::as_str).ok_or_else(|| Error::Input("term arg missing".into()))?;
                    let b = r(arg)?;
                    if !b.is_positive() {
                        return Err(Error::Input("log argument must be positive".into()));
                    }
                    terms.push((r(coeff)?, b));
                }
                Ok(HeightValue::Exact(LogLinear { c, terms }.normalized()))
            }
            "enclosure" => {
                let lo = d(s("lo")?)?;
                let hi = d(s("hi")?)?;
                if lo > hi {
                    return Err(Error::Input("enclosure bounds out of order".into()));
                }
                Ok(HeightValue::fixed_enclosure(Interval::new(lo, hi)))
            }
            other => Err(Error::Input(format!("unknown height kind '{other}'"))),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            HeightValue::Exact(l) => l.to_text(),
            HeightValue::Enclosure(e) => format!("[{:.6}, {:.6}]", e.iv.lo.to_f64(), e.iv.hi.to_f64()),
        }
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Compare with the default precision budget.
pub fn compare(a: &HeightValue, b: &HeightValue) -> Comparison {
    compare_with_budget(a, b, COMPARE_BUDGET)
}

/// Exact when both sides are exact; otherwise refine both enclosures up to `budget` bits.
pub fn compare_with_budget(a: &HeightValue, b: &HeightValue, budget: u32) -> Comparison {
    if let (HeightValue::Exact(x), HeightValue::Exact(y)) = (a, b) {
        return match x.sub(y).signum() {
            Ordering::Greater => Comparison::Greater,
            _ => Comparison::LessOrEqual,
        };
    }
    let mut prec = 64;
    let mut last = Dyadic::zero();
    loop {
        let (ia, ib) = match (a.interval(prec), b.interval(prec)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => return Comparison::Undecided(last),
        };
        if ia.hi <= ib.lo {
            return Comparison::LessOrEqual;
        }
        if ia.lo > ib.hi {
            return Comparison::Greater;
        }
        last = ia.width().max(ib.width());
        if prec >= budget {
            return Comparison::Undecided(last);
        }
        prec *= 2;
    }
}

/// Coefficient vector of one or more polynomials, with a note of where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientFamily {
    values: Vec<Rational>,
    provenance: Vec<String>,
}

impl CoefficientFamily {
    pub fn new(values: Vec<Rational>, provenance: Vec<String>) -> Result<Self> {
        if values.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateFamily);
        }
        Ok(CoefficientFamily { values, provenance })
    }

    /// All coefficients of the given polynomials, each named in the provenance.
    pub fn of_polys(polys: &[(&str, &SparsePoly)]) -> Result<Self> {
        let mut values = Vec::new();
        let mut provenance = Vec::new();
        for (name, p) in polys {
            values.extend(p.sorted_terms().into_iter().map(|(_, c)| c));
            provenance.push(name.to_string());
        }
        CoefficientFamily::new(values, provenance)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }
}

/// `h(a_0 : ... : a_n)` for rational coordinates: log of the largest coprime integer.
pub fn proj_height_rational(coords: &[Rational]) -> Result<HeightValue> {
    if coords.iter().all(Zero::is_zero) {
        return Err(Error::AllZeroCoordinates);
    }
    let ints = to_coprime_integers(coords);
    let m = ints.iter().map(|n| n.abs()).max().unwrap();
    Ok(HeightValue::exact_log(&BigRational::from_integer(m)))
}

/// Projective height of the coefficient vector.
pub fn poly_height(f: &SparsePoly) -> Result<HeightValue> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    proj_height_rational(&f.coefficients())
}

pub fn family_height(fam: &CoefficientFamily) -> Result<HeightValue> {
    proj_height_rational(&fam.values).map_err(|_| Error::DegenerateFamily)
}

/// `(1/d) (ln|a_d| + sum ln+ |alpha_i|)` for a primitive integer polynomial.
fn mahler_evaluator(u: &UniPoly) -> Result<Evaluator> {
    let coeffs = u.integer_coeffs();
    let d = coeffs.len() - 1;
    let lc = BigRational::from_integer(coeffs[d].abs());
    let iso = Arc::new(Mutex::new(RootIsolation::new(u)?));
    Ok(Arc::new(move |prec: u32| {
        let mut iso = iso.lock().expect("root isolation lock");
        iso.refine_bits(prec as i64 + 8)?;
        let wp = prec + 32;
        let mut acc = ln_rational(&lc, wp);
        for b in iso.boxes() {
            acc = acc.add(&log_plus_abs(b, wp), wp);
        }
        let acc = acc.scale(&BigRational::new(BigInt::one(), BigInt::from(d)), wp);
        Ok(Interval::new(acc.lo.max(Dyadic::zero()), acc.hi))
    }))
}

/// Enclosure of `max(0, ln|z|)`.
fn log_plus_abs(z: &CBox, prec: u32) -> Interval {
    let s = z.abs_sqr(prec);
    let one = Dyadic::one();
    if s.hi <= one {
        return Interval::zero();
    }
    let clipped = Interval::new(s.lo.clone().max(one), s.hi.clone());
    let l = ln_interval(&clipped, prec);
    Interval::new(l.lo.mul_pow2(-1), l.hi.mul_pow2(-1))
}

/// `ln max(1, |z|, |w|)`.
fn log_max_abs(z: &CBox, w: &CBox, prec: u32) -> Interval {
    let a = log_plus_abs(z, prec);
    let b = log_plus_abs(w, prec);
    Interval::new(a.lo.max(b.lo), a.hi.max(b.hi))
}

/// Height of the algebraic number isolated by `bx` among the roots of `minpoly`.
pub fn mahler_height(minpoly: &UniPoly, bx: &CBox) -> Result<HeightValue> {
    if minpoly.is_constant() {
        return Err(Error::ConstantInput);
    }
    let u = minpoly.primitive_rational().with_var(Var::T);
    let mut iso = RootIsolation::new(&u)?;
    if iso.degree() != u.deg0() || !is_irreducible(&u) {
        return Err(Error::ReducibleMinimalPolynomial);
    }
    locate_box(&mut iso, bx)?;
    mahler_height_of(&u)
}

/// Height of any root of the irreducible polynomial `u` (all conjugates share it).
pub fn mahler_height_of(u: &UniPoly) -> Result<HeightValue> {
    let u = u.primitive_rational().with_var(Var::T);
    if u.deg0() == 1 {
        let c = u.integer_coeffs();
        return Ok(HeightValue::exact_log(&BigRational::from_integer(c[0].abs().max(c[1].abs()))));
    }
    if cyclotomic_index(&u).is_some() {
        return Ok(HeightValue::zero());
    }
    HeightValue::refinable(mahler_evaluator(&u)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightMode {
    /// `h(x : y : 1)`.
    Affine,
    /// `(h(x), h(y))`.
    Multiplicative,
}

#[derive(Clone, Debug)]
pub enum PointHeight {
    Affine(HeightValue),
    Multiplicative(HeightValue, HeightValue),
}

/// Height of a certified point.
///
/// The affine height is computed from the archimedean places (conjugate boxes)
/// and the denominators of the coordinates. When the leading coefficients of
/// the two minimal polynomials share a prime, the finite part is only bracketed
/// by `[max, sum]` of the coordinate contributions and the enclosure is not
/// refinable past that gap.
pub fn point_height(pt: &AlgebraicPoint, mode: HeightMode) -> Result<PointHeight> {
    if !pt.is_certified_for("torus") {
        return Err(Error::UncertifiedPoint);
    }
    if let Some((x, y)) = pt.as_rational() {
        return Ok(match mode {
            HeightMode::Affine => PointHeight::Affine(proj_height_rational(&[x, y, Rational::one()])?),
            HeightMode::Multiplicative => PointHeight::Multiplicative(
                proj_height_rational(&[x, Rational::one()])?,
                proj_height_rational(&[y, Rational::one()])?,
            ),
        });
    }
    let hx = mahler_height_of(&pt.x_minpoly)?;
    let hy = mahler_height_of(&pt.y_minpoly)?;
    if mode == HeightMode::Multiplicative {
        return Ok(PointHeight::Multiplicative(hx, hy));
    }
    let lx = pt.x_minpoly.integer_coeffs().last().unwrap().abs();
    let ly = pt.y_minpoly.integer_coeffs().last().unwrap().abs();
    let fx = LogLinear::log(&BigRational::from_integer(lx.clone())).scale(&BigRational::new(BigInt::one(), BigInt::from(pt.x_minpoly.deg0())));
    let fy = LogLinear::log(&BigRational::from_integer(ly.clone())).scale(&BigRational::new(BigInt::one(), BigInt::from(pt.y_minpoly.deg0())));
    let coprime = lx.gcd(&ly).is_one();
    let orbit = Arc::clone(&pt.orbit);
    let d = orbit.degree();
    let iso = Arc::new(Mutex::new(RootIsolation::new(&orbit.field.integer_modulus())?));
    let (ex, ey) = (hx.evaluator(), hy.evaluator());
    let eval: Evaluator = Arc::new(move |prec: u32| {
        let wp = prec + 32;
        let finite = if coprime {
            fx.add(&fy).interval(wp)
        } else {
            let (a, b) = (fx.interval(wp), fy.interval(wp));
            Interval::new(a.lo.clone().max(b.lo.clone()), a.add(&b, wp).hi)
        };
        let mut iso = iso.lock().expect("root isolation lock");
        iso.refine_bits(prec as i64 + 8)?;
        let mut arch = Interval::zero();
        for tb in iso.boxes() {
            let xb = CBox::eval_poly(orbit.x.coeffs(), tb, wp);
            let yb = CBox::eval_poly(orbit.y.coeffs(), tb, wp);
            arch = arch.add(&log_max_abs(&xb, &yb, wp), wp);
        }
        let arch = arch.scale(&BigRational::new(BigInt::one(), BigInt::from(d)), wp);
        let v = arch.add(&finite, wp);
        // h(x:y:1) lies between max(h(x), h(y)) and h(x) + h(y)
        let (a, b) = (ex(prec)?, ey(prec)?);
        let lo = v.lo.max(a.lo.clone()).max(b.lo.clone()).max(Dyadic::zero());
        let hi = v.hi.min(&a.hi + &b.hi);
        Ok(Interval::new(lo.clone().min(hi.clone()), hi))
    });
    Ok(PointHeight::Affine(HeightValue::refinable(eval)?))
}
