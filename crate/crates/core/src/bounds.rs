//! Explicit height, slope and degree bounds, evaluated exactly in natural-log scale.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::{int, Rational};
use crate::error::{Error, Result};
use crate::heights::{compare, family_height, point_height, poly_height, proj_height_rational, CoefficientFamily, Comparison, HeightMode, HeightValue, PointHeight};
use crate::poly::SparsePoly;
use crate::solver::{point_degree, AlgebraicPoint};
use crate::tangency::Slope;

pub const HABEGGER_CONSTANT: i64 = 300_000;
pub const THEOREM_CONSTANT: i64 = 600_001;

#[derive(Clone, Debug)]
pub struct BoundInputs {
    pub delta: u32,
    pub delta_x: u32,
    pub delta_y: u32,
    pub hf: HeightValue,
    pub field_degree: u32,
}

impl BoundInputs {
    pub fn new(delta: u32, delta_x: u32, delta_y: u32, hf: HeightValue, field_degree: u32) -> Result<Self> {
        let b = BoundInputs { delta, delta_x, delta_y, hf, field_degree };
        b.validate()?;
        Ok(b)
    }

    /// Degrees and coefficient height of `f`, over `Q`.
    pub fn from_poly(f: &SparsePoly) -> Result<Self> {
        if f.is_constant() {
            return Err(Error::ConstantInput);
        }
        BoundInputs::new(f.total_degree(), f.degree_x(), f.degree_y(), poly_height(f)?, 1)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidBoundInputs(m.into()));
        if self.delta_x.max(self.delta_y) < 1 {
            return bad("partial degrees must not both be zero");
        }
        if self.delta < self.delta_x.max(self.delta_y) || self.delta > self.delta_x + self.delta_y {
            return bad("total degree must lie between max and sum of the partial degrees");
        }
        if self.field_degree < 1 {
            return bad("field degree must be positive");
        }
        if self.hf.bounds().hi.signum() < 0 {
            return bad("coefficient height must be nonnegative");
        }
        Ok(())
    }

    /// `max(delta_x * delta_y, h(f))`, comparing the real numbers.
    pub fn max_term(&self) -> HeightValue {
        HeightValue::constant(&int(self.delta_x as i64 * self.delta_y as i64)).max(&self.hf)
    }
}

fn log_int(n: &BigInt) -> HeightValue {
    HeightValue::exact_log(&Rational::from_integer(n.clone()))
}

fn binom2(n: u64) -> BigInt {
    BigInt::from(n) * BigInt::from(n - 1) / 2
}

/// `N h_P + h_F + log binom(N+2, 2)`.
pub fn lemma31_rhs(n: u32, hp: &HeightValue, hf: &HeightValue) -> HeightValue {
    hp.scale(&int(n as i64)).add(hf).add(&log_int(&binom2(n as u64 + 2)))
}

#[derive(Clone, Debug)]
pub struct Lemma31Check {
    pub holds: bool,
    pub degree: u32,
    pub lhs: HeightValue,
    pub rhs: HeightValue,
    pub slack: HeightValue,
}

impl Lemma31Check {
    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "degree": self.degree,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "slack": self.slack.to_json(),
        })
    }
}

/// Both sides of the inequality `h(f1(P) : f2(P)) <= N h(x:y:1) + h(F) + log binom(N+2, 2)`
/// for a rational point, where `N` bounds both total degrees and `F` is the
/// family of all coefficients of `f1` and `f2`.
pub fn verify_lemma31(f1: &SparsePoly, f2: &SparsePoly, x: &Rational, y: &Rational) -> Result<Lemma31Check> {
    let (a, b) = (f1.eval(x, y), f2.eval(x, y));
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothVanish);
    }
    let n = f1.total_degree().max(f2.total_degree()).max(1);
    let lhs = proj_height_rational(&[a, b])?;
    let hp = proj_height_rational(&[x.clone(), y.clone(), Rational::one()])?;
    let hf = family_height(&CoefficientFamily::of_polys(&[("f1", f1), ("f2", f2)])?)?;
    let rhs = lemma31_rhs(n, &hp, &hf);
    let (Some(l), Some(r)) = (lhs.as_linear(), rhs.as_linear()) else {
        unreachable!("rational data gives exact heights")
    };
    let slack = HeightValue::linear(r.sub(l));
    let holds = compare(&lhs, &rhs) == Comparison::LessOrEqual;
    Ok(Lemma31Check { holds, degree: n, lhs, rhs, slack })
}

/// `3e5 * delta^3 * max(delta_x delta_y, h(f))`.
pub fn habegger_height_bound(b: &BoundInputs) -> HeightValue {
    let k = int(HABEGGER_CONSTANT) * int(b.delta as i64).pow(3);
    b.max_term().scale(&k)
}

/// Natural log of the slope bound: `3 log delta + 600001 * delta^4 * max(delta_x delta_y, h(f))`.
pub fn theorem_slope_bound_log(b: &BoundInputs) -> HeightValue {
    let k = int(THEOREM_CONSTANT) * int(b.delta as i64).pow(4);
    log_int(&BigInt::from(b.delta).pow(3)).add(&b.max_term().scale(&k))
}

/// `delta h_P + h(f) + log(delta^2 (delta + 1) / 2)`.
#[allow(non_snake_case)]
pub fn upI_bound(b: &BoundInputs, hp: &HeightValue) -> HeightValue {
    let d = BigInt::from(b.delta);
    let arg = &d * &d * (&d + 1u32) / 2u32;
    hp.scale(&int(b.delta as i64)).add(&b.hf).add(&log_int(&arg))
}

pub fn bezout_degree_bound(b: &BoundInputs) -> u64 {
    (b.delta as u64).pow(2) * b.field_degree as u64
}

/// All bounds for a curve; `lemma31_rhs` is instantiated at `N = delta` and `h_P = 0`.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub lemma31_rhs: HeightValue,
    pub upi: HeightValue,
    pub habegger: HeightValue,
    pub theorem_log: HeightValue,
    pub bezout_degree: u64,
}

impl BoundReport {
    pub fn new(b: &BoundInputs) -> Self {
        BoundReport {
            lemma31_rhs: lemma31_rhs(b.delta, &HeightValue::zero(), &b.hf),
            upi: upI_bound(b, &HeightValue::zero()),
            habegger: habegger_height_bound(b),
            theorem_log: theorem_slope_bound_log(b),
            bezout_degree: bezout_degree_bound(b),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lemma31_rhs": self.lemma31_rhs.to_json(),
            "upI": self.upi.to_json(),
            "habegger": self.habegger.to_json(),
            "theorem_log": self.theorem_log.to_json(),
            "bezout_degree": self.bezout_degree.to_string(),
            "formulas": {
                "lemma31_rhs": "N*hP + h(F) + log binom(N+2,2) at N = delta, hP = 0",
                "upI": "delta*hP + h(f) + log(delta^2*(delta+1)/2) at hP = 0",
                "habegger": "300000 * delta^3 * max(delta_x*delta_y, h(f))",
                "theorem_log": "3*log(delta) + 600001 * delta^4 * max(delta_x*delta_y, h(f))",
                "bezout_degree": "delta^2 * field_degree",
            },
            "constants": { "habegger_c": HABEGGER_CONSTANT.to_string(), "theorem_c": THEOREM_CONSTANT.to_string() },
        })
    }
}

/// One named check of an audit.
#[derive(Clone, Debug)]
pub struct AuditCheck {
    pub name: &'static str,
    pub passed: bool,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug)]
pub struct AuditRecord {
    pub checks: Vec<AuditCheck>,
}

impl AuditRecord {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AuditCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "lhs": c.lhs, "rhs": c.rhs })).collect::<Vec<_>>(),
        })
    }
}

fn le_check(name: &'static str, lhs: &HeightValue, rhs: &HeightValue) -> AuditCheck {
    AuditCheck { name, passed: compare(lhs, rhs) == Comparison::LessOrEqual, lhs: lhs.to_text(), rhs: rhs.to_text() }
}

/// Audit precomputed quantities: multiplicative heights, affine height and degree of a point on `slope`.
pub fn audit_values(hmx: &HeightValue, hmy: &HeightValue, h_affine: &HeightValue, degree: u64, slope: &Slope, b: &BoundInputs) -> AuditRecord {
    let slope_height = log_int(&BigInt::from(slope.p.abs().max(slope.q.abs())));
    let hm = hmx.max(hmy);
    let bez = bezout_degree_bound(b);
    AuditRecord {
        checks: vec![
            le_check("habegger", &hm, &habegger_height_bound(b)),
            le_check("upI", &slope_height, &upI_bound(b, h_affine)),
            le_check("slope", &slope_height, &theorem_slope_bound_log(b)),
            AuditCheck { name: "degree", passed: degree <= bez, lhs: degree.to_string(), rhs: bez.to_string() },
        ],
    }
}

/// Check a singular-intersection point against every bound.
pub fn audit_point(p: &AlgebraicPoint, b: &BoundInputs, slope: &Slope) -> Result<AuditRecord> {
    let PointHeight::Multiplicative(hx, hy) = point_height(p, HeightMode::Multiplicative)? else { unreachable!() };
    let PointHeight::Affine(ha) = point_height(p, HeightMode::Affine)? else { unreachable!() };
    Ok(audit_values(&hx, &hy, &ha, point_degree(p) as u64, slope, b))
}
