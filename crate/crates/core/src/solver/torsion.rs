//! Monomial values at points, roots of unity and torsion points.

use num_integer::Integer;
use num_traits::One;
use serde_json::{json, Value};

use super::field::NumberField;
use super::point::AlgebraicPoint;
use super::roots::{identify_root, locate_box, RootIsolation, MAX_PRECISION};
use crate::arith::{CBox, Rational};
use crate::error::{Error, Result};
use crate::poly::{irreducible_factors, UniPoly, Var};

/// An algebraic number: an integer annihilating polynomial and a box isolating the value among its roots.
#[derive(Clone, Debug)]
pub struct AlgebraicValue {
    pub minpoly: UniPoly,
    pub bx: CBox,
}

impl AlgebraicValue {
    pub fn rational(&self) -> Option<Rational> {
        if self.minpoly.deg0() == 1 {
            Some(-self.minpoly.coeff(0) / self.minpoly.coeff(1))
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.rational().is_some_and(|r| r.is_one())
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "minpoly": self.minpoly.to_text(), "box": self.bx.to_strings() });
        if let Some(r) = self.rational() {
            v["value"] = json!(crate::arith::rational_string(&r));
        }
        v
    }
}

/// The value `x^p y^q` at `pt`, with its minimal polynomial.
pub fn monomial_value(pt: &AlgebraicPoint, p: i64, q: i64) -> Result<AlgebraicValue> {
    if !pt.is_certified_for("torus") {
        return Err(Error::UncertifiedPoint);
    }
    let orbit = &pt.orbit;
    let m = orbit.monomial(p, q).ok_or(Error::UncertifiedPoint)?;
    let minpoly = orbit.field.minpoly(&m);
    let mut iso = RootIsolation::new(&minpoly)?;
    let j = identify_root(&mut iso, |prec| pt.enclose(&m, prec))?;
    Ok(AlgebraicValue { minpoly, bx: iso.boxes()[j].clone() })
}

/// Evidence for or against being a root of unity.
#[derive(Clone, Debug, PartialEq)]
pub enum TorsionWitness {
    /// `gcd(T, t^order - 1)` has the value as a root.
    Cyclotomic { order: u64, divisor: UniPoly },
    /// A conjugate of the value avoids the unit circle.
    OffUnitCircle { minpoly: UniPoly, conjugate: CBox, outside: bool },
    /// The minimal polynomial is not monic over the integers.
    NonIntegral { minpoly: UniPoly },
}

impl TorsionWitness {
    pub fn to_json(&self) -> Value {
        match self {
            TorsionWitness::Cyclotomic { order, divisor } => {
                json!({ "kind": "cyclotomic", "order": order, "divisor": divisor.to_text() })
            }
            TorsionWitness::OffUnitCircle { minpoly, conjugate, outside } => json!({
                "kind": "off-unit-circle",
                "minpoly": minpoly.to_text(),
                "conjugate": conjugate.to_strings(),
                "side": if *outside { "outside" } else { "inside" },
            }),
            TorsionWitness::NonIntegral { minpoly } => json!({ "kind": "non-integral", "minpoly": minpoly.to_text() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionCertificate {
    pub is_torsion: bool,
    pub order: Option<u64>,
    pub witnesses: Vec<TorsionWitness>,
}

impl TorsionCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "is_torsion": self.is_torsion,
            "order": self.order,
            "witness": self.witnesses.iter().map(TorsionWitness::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> UniPoly {
    assert!(n >= 1);
    let mut acc = UniPoly::monomial(Var::T, Rational::one(), n as usize).sub(&UniPoly::one(Var::T));
    for d in 1..n {
        if n.is_multiple_of(d) {
            acc = acc.exact_div(&cyclotomic(d));
        }
    }
    acc
}

/// Is `u` (up to sign) a cyclotomic polynomial? Returns its index.
pub fn cyclotomic_index(u: &UniPoly) -> Option<u64> {
    let u = u.primitive_rational();
    let d = u.degree()? as u64;
    if d == 0 || !u.lc().is_one() {
        return None;
    }
    (1..=2 * d * d + 2).find(|&n| euler_phi(n) == d && cyclotomic(n) == u)
}

/// Which of the coprime factors `a`, `b` vanishes at the root isolated by `iso[i]`?
/// Exactly one does; returns `true` for `a`.
fn vanishing_side(iso: &mut RootIsolation, i: usize, a: &UniPoly, b: &UniPoly) -> Result<bool> {
    let mut bits = 16;
    loop {
        iso.refine_bits(bits)?;
        let z = &iso.boxes()[i];
        let prec = bits as u32 + 64;
        if !CBox::eval_poly(b.coeffs(), z, prec).contains_zero() {
            return Ok(true);
        }
        if !CBox::eval_poly(a.coeffs(), z, prec).contains_zero() {
            return Ok(false);
        }
        if bits as u32 >= MAX_PRECISION {
            return Err(Error::PrecisionExhausted("separating factors at a root".into()));
        }
        bits *= 2;
    }
}

/// Decide whether the root of `t_poly` inside `bx` is a root of unity. A root
/// certified off the unit circle is not; otherwise the irreducible factor
/// vanishing there is compared against the cyclotomic polynomials of degree `D`.
pub fn is_root_of_unity(t_poly: &UniPoly, bx: &CBox) -> Result<TorsionCertificate> {
    if t_poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sq = t_poly.squarefree_part().with_var(Var::T).primitive_rational();
    let mut iso = RootIsolation::new(&sq)?;
    let i = locate_box(&mut iso, bx)?;
    for bits in [16, 32, 64] {
        iso.refine_bits(bits)?;
        let b = iso.boxes()[i].clone();
        if let Some(outside) = b.unit_circle_side(bits as u32 + 64) {
            return Ok(non_torsion(TorsionWitness::OffUnitCircle { minpoly: sq, conjugate: b, outside }));
        }
    }
    let minpoly = vanishing_factor(&sq, &mut iso, i)?;
    if let Some(n) = cyclotomic_index(&minpoly) {
        return Ok(TorsionCertificate {
            is_torsion: true,
            order: Some(n),
            witnesses: vec![TorsionWitness::Cyclotomic { order: n, divisor: minpoly }],
        });
    }
    Ok(non_torsion(non_torsion_witness(minpoly)?))
}

fn non_torsion(w: TorsionWitness) -> TorsionCertificate {
    TorsionCertificate { is_torsion: false, order: None, witnesses: vec![w] }
}

/// The irreducible factor of `sq` with the root `iso[i]`.
fn vanishing_factor(sq: &UniPoly, iso: &mut RootIsolation, i: usize) -> Result<UniPoly> {
    let factors = irreducible_factors(sq);
    if factors.len() > 1 {
        for (j, f) in factors.iter().enumerate() {
            let rest = factors.iter().enumerate().filter(|(k, _)| *k != j).fold(UniPoly::one(Var::T), |acc, (_, g)| acc.mul(g));
            if vanishing_side(iso, i, f, &rest)? {
                return Ok(f.primitive_rational());
            }
        }
    }
    Ok(factors[0].primitive_rational())
}

/// Witness for an irreducible non-cyclotomic `minpoly`.
fn non_torsion_witness(minpoly: UniPoly) -> Result<TorsionWitness> {
    if !minpoly.lc().is_one() {
        return Ok(TorsionWitness::NonIntegral { minpoly });
    }
    // monic and not cyclotomic: by Kronecker some conjugate leaves the unit circle
    let mut conj = RootIsolation::new(&minpoly)?;
    let mut bits = 16;
    loop {
        conj.refine_bits(bits)?;
        for b in conj.boxes() {
            if let Some(outside) = b.unit_circle_side(bits as u32 + 64) {
                return Ok(TorsionWitness::OffUnitCircle { minpoly: minpoly.clone(), conjugate: b.clone(), outside });
            }
        }
        if bits as u32 >= MAX_PRECISION {
            return Err(Error::PrecisionExhausted("locating a conjugate off the unit circle".into()));
        }
        bits *= 2;
    }
}

/// Torsion test for both coordinates; the order is the lcm of the coordinate orders.
pub fn torsion_point_test(pt: &AlgebraicPoint) -> Result<TorsionCertificate> {
    let cx = is_root_of_unity(&pt.x_minpoly, &pt.x_box)?;
    let cy = is_root_of_unity(&pt.y_minpoly, &pt.y_box)?;
    let is_torsion = cx.is_torsion && cy.is_torsion;
    let order = match (cx.order, cy.order) {
        (Some(a), Some(b)) if is_torsion => Some(a.lcm(&b)),
        _ => None,
    };
    let mut witnesses = cx.witnesses;
    witnesses.extend(cy.witnesses);
    Ok(TorsionCertificate { is_torsion, order, witnesses })
}

/// Exact check that `alpha^n = 1` for the value generating `Q[t]/(minpoly)`.
pub fn power_is_one(minpoly: &UniPoly, n: u64) -> bool {
    let k = NumberField::new(minpoly);
    k.pow(&k.gen(), n) == UniPoly::one(Var::T)
}

/// Integer minimal polynomial of a rational `r`.
pub fn rational_minpoly(r: &Rational) -> UniPoly {
    UniPoly::from_bigints(Var::T, &[-r.numer().clone(), r.denom().clone()]).primitive_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::solver::isolate_roots;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(Var::T, c)
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_index(&p(&[1, 1, 1])), Some(3));
        assert_eq!(cyclotomic_index(&p(&[-1, -1, 1])), None);
        assert_eq!(euler_phi(36), 12);
    }

    #[test]
    fn roots_of_unity() {
        let t = p(&[1, 1, 1]);
        for b in isolate_roots(&t).unwrap() {
            let c = is_root_of_unity(&t, &b).unwrap();
            assert!(c.is_torsion);
            assert_eq!(c.order, Some(3));
        }
        let quarter = p(&[-1, 4]);
        let b = isolate_roots(&quarter).unwrap()[0].clone();
        let c = is_root_of_unity(&quarter, &b).unwrap();
        assert!(!c.is_torsion);
        assert!(matches!(c.witnesses[0], TorsionWitness::OffUnitCircle { outside: false, .. }));
        let minus_one = p(&[1, 1]);
        let b = isolate_roots(&minus_one).unwrap()[0].clone();
        assert_eq!(is_root_of_unity(&minus_one, &b).unwrap().order, Some(2));
    }

    #[test]
    fn mixed_polynomial_uses_the_boxed_root() {
        // (t + 1)(t - 2): -1 is torsion, 2 is not
        let t = p(&[1, 1]).mul(&p(&[-2, 1]));
        let boxes = isolate_roots(&t).unwrap();
        let a = is_root_of_unity(&t, &boxes[0]).unwrap();
        let b = is_root_of_unity(&t, &boxes[1]).unwrap();
        assert_eq!(a.order, Some(2));
        assert!(!b.is_torsion);
        assert!(matches!(&b.witnesses[0], TorsionWitness::OffUnitCircle { outside: true, .. }));
    }

    #[test]
    fn non_integral_on_circle() {
        // (3 + 4i)/5 has modulus one but is not a root of unity
        let t = p(&[5, -6, 5]);
        let b = isolate_roots(&t).unwrap()[0].clone();
        let c = is_root_of_unity(&t, &b).unwrap();
        assert!(!c.is_torsion);
        assert!(matches!(c.witnesses[0], TorsionWitness::NonIntegral { .. }));
    }

    #[test]
    fn point_torsion() {
        let pt = AlgebraicPoint::rational(&int(1), &int(-1), &["torus"]).unwrap();
        assert_eq!(torsion_point_test(&pt).unwrap().order, Some(2));
        let half = AlgebraicPoint::rational(&rat(1, 2), &rat(1, 2), &["torus"]).unwrap();
        assert!(!torsion_point_test(&half).unwrap().is_torsion);
    }

    #[test]
    fn monomial_values() {
        let half = AlgebraicPoint::rational(&rat(1, 2), &rat(1, 2), &["torus"]).unwrap();
        assert_eq!(monomial_value(&half, 1, 1).unwrap().rational(), Some(rat(1, 4)));
        assert_eq!(monomial_value(&half, 1, -1).unwrap().rational(), Some(int(1)));
        let m = AlgebraicPoint::rational(&int(-1), &int(-1), &["torus"]).unwrap();
        assert!(monomial_value(&m, 1, 1).unwrap().is_one());
    }

    #[test]
    fn exact_power_check() {
        assert!(power_is_one(&cyclotomic(12), 12));
        assert!(!power_is_one(&cyclotomic(12), 6));
    }
}
