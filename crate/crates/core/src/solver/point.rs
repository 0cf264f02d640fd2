//! Algebraic points of the torus with exact field models and isolating boxes.

use std::sync::Arc;

use serde_json::{json, Value};

use super::field::NumberField;
use super::roots::{identify_root, locate_box, RootIsolation};
use crate::arith::{CBox, Dyadic, Interval, Rational};
use crate::error::{Error, Result};
use crate::poly::{parse_univariate, SparsePoly, UniPoly, Var};

/// One Galois orbit of points: the field `Q[t]/(mu)` and the coordinates as elements of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointField {
    pub field: NumberField,
    pub x: UniPoly,
    pub y: UniPoly,
}

impl PointField {
    pub fn new(field: NumberField, x: &UniPoly, y: &UniPoly) -> Self {
        let x = field.reduce(x);
        let y = field.reduce(y);
        PointField { field, x, y }
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// `f` evaluated at the orbit, as a field element.
    pub fn eval(&self, f: &SparsePoly) -> UniPoly {
        self.field.eval_sparse(f, &self.x, &self.y)
    }

    pub fn vanishes(&self, f: &SparsePoly) -> bool {
        self.eval(f).is_zero()
    }

    /// Both coordinates nonzero.
    pub fn in_torus(&self) -> bool {
        !self.x.is_zero() && !self.y.is_zero()
    }

    /// `x^p y^q` as a field element.
    pub fn monomial(&self, p: i64, q: i64) -> Option<UniPoly> {
        let a = self.field.powi(&self.x, p)?;
        let b = self.field.powi(&self.y, q)?;
        Some(self.field.mul(&a, &b))
    }

    /// Rational coordinates, when the orbit is a single rational point.
    pub fn rational(&self) -> Option<(Rational, Rational)> {
        Some((self.field.as_rational(&self.x)?, self.field.as_rational(&self.y)?))
    }

    /// Split into individual points, one per root of the field polynomial.
    pub fn points(self: &Arc<Self>, certificate: &[&str]) -> Result<Vec<AlgebraicPoint>> {
        let mu = self.field.integer_modulus();
        let x_min = self.field.minpoly(&self.x);
        let y_min = self.field.minpoly(&self.y);
        let mut iso_t = RootIsolation::new(&mu)?;
        let mut iso_x = RootIsolation::new(&x_min)?;
        let mut iso_y = RootIsolation::new(&y_min)?;
        let n = iso_t.boxes().len();
        let mut idx = Vec::with_capacity(n);
        for i in 0..n {
            let xi = identify_root(&mut iso_x, |prec| enclose(&mut iso_t, i, &self.x, prec))?;
            let yi = identify_root(&mut iso_y, |prec| enclose(&mut iso_t, i, &self.y, prec))?;
            idx.push((xi, yi));
        }
        refine_away_from_zero(&mut iso_x)?;
        refine_away_from_zero(&mut iso_y)?;
        let cert: Vec<String> = certificate.iter().map(|s| s.to_string()).collect();
        let mut out: Vec<AlgebraicPoint> = idx
            .into_iter()
            .enumerate()
            .map(|(i, (xi, yi))| AlgebraicPoint {
                x_minpoly: x_min.clone(),
                y_minpoly: y_min.clone(),
                x_box: iso_x.boxes()[xi].clone(),
                y_box: iso_y.boxes()[yi].clone(),
                t_box: iso_t.boxes()[i].clone(),
                orbit: Arc::clone(self),
                certificate: cert.clone(),
            })
            .collect();
        out.sort_by(AlgebraicPoint::canonical_cmp);
        Ok(out)
    }
}

/// Interval image of a field element at the `i`-th root of the field polynomial.
fn enclose(iso_t: &mut RootIsolation, i: usize, a: &UniPoly, prec: u32) -> Result<CBox> {
    iso_t.refine_bits(prec as i64)?;
    Ok(CBox::eval_poly(a.coeffs(), &iso_t.boxes()[i], prec + 32))
}

fn refine_away_from_zero(iso: &mut RootIsolation) -> Result<()> {
    let mut bits = 8;
    while iso.boxes().iter().any(|b| b.contains_zero()) {
        bits *= 2;
        iso.refine_bits(bits)?;
    }
    Ok(())
}

/// A point of `G_m^2` with algebraic coordinates.
#[derive(Clone, Debug)]
pub struct AlgebraicPoint {
    pub x_minpoly: UniPoly,
    pub y_minpoly: UniPoly,
    pub x_box: CBox,
    pub y_box: CBox,
    /// Which root of the orbit's field polynomial this point corresponds to.
    pub t_box: CBox,
    pub orbit: Arc<PointField>,
    /// Names of the equations certified to vanish, plus `"torus"`.
    pub certificate: Vec<String>,
}

impl PartialEq for AlgebraicPoint {
    fn eq(&self, o: &Self) -> bool {
        self.orbit == o.orbit && self.t_box == o.t_box
    }
}

impl AlgebraicPoint {
    /// A rational point with exact field model `Q`.
    pub fn rational(x: &Rational, y: &Rational, certificate: &[&str]) -> Result<Self> {
        if num_traits::Zero::is_zero(x) || num_traits::Zero::is_zero(y) {
            return Err(Error::UncertifiedPoint);
        }
        let field = NumberField::new(&UniPoly::ident(Var::T));
        let pf = Arc::new(PointField::new(field, &UniPoly::constant(Var::T, x.clone()), &UniPoly::constant(Var::T, y.clone())));
        Ok(pf.points(certificate)?.remove(0))
    }

    pub fn degree(&self) -> usize {
        self.orbit.degree()
    }

    pub fn as_rational(&self) -> Option<(Rational, Rational)> {
        self.orbit.rational()
    }

    pub fn is_certified_for(&self, name: &str) -> bool {
        self.certificate.iter().any(|c| c == name)
    }

    /// Order by x-box then y-box on dyadic endpoints.
    pub fn canonical_cmp(a: &AlgebraicPoint, b: &AlgebraicPoint) -> std::cmp::Ordering {
        (a.x_box.sort_key(), a.y_box.sort_key()).cmp(&(b.x_box.sort_key(), b.y_box.sort_key()))
    }

    /// Enclosure of a field element at this point, at roughly `prec` bits.
    pub fn enclose(&self, a: &UniPoly, prec: u32) -> Result<CBox> {
        let mut iso = RootIsolation::new(&self.orbit.field.integer_modulus())?;
        let i = self.t_index(&mut iso)?;
        enclose(&mut iso, i, a, prec)
    }

    /// Index of this point's root among a fresh isolation of the field polynomial.
    fn t_index(&self, iso: &mut RootIsolation) -> Result<usize> {
        locate_box(iso, &self.t_box)
    }

    /// Re-check the certificate from the exact model: the named equations vanish
    /// identically in the field, the coordinates are nonzero, and the boxes are
    /// consistent with the field embedding.
    pub fn recertify(&self, equations: &[(&str, &SparsePoly)]) -> Result<()> {
        for (name, eq) in equations {
            if self.is_certified_for(name) && !self.orbit.vanishes(eq) {
                return Err(Error::UncertifiedPoint);
            }
        }
        if !self.orbit.in_torus() || self.x_box.contains_zero() || self.y_box.contains_zero() {
            return Err(Error::UncertifiedPoint);
        }
        if self.orbit.field.minpoly(&self.orbit.x) != self.x_minpoly || self.orbit.field.minpoly(&self.orbit.y) != self.y_minpoly {
            return Err(Error::UncertifiedPoint);
        }
        let mut iso_t = RootIsolation::new(&self.orbit.field.integer_modulus())?;
        let i = self.t_index(&mut iso_t)?;
        let mut iso_x = RootIsolation::new(&self.x_minpoly)?;
        let mut iso_y = RootIsolation::new(&self.y_minpoly)?;
        let xb = self.x_box.clone();
        let yb = self.y_box.clone();
        // the box must hold exactly one root of the minimal polynomial, the image of t
        let xi = locate_box(&mut iso_x, &xb)?;
        let xj = identify_root(&mut iso_x, |p| enclose(&mut iso_t, i, &self.orbit.x, p))?;
        let yi = locate_box(&mut iso_y, &yb)?;
        let yj = identify_root(&mut iso_y, |p| enclose(&mut iso_t, i, &self.orbit.y, p))?;
        if xi != xj || yi != yj {
            return Err(Error::UncertifiedPoint);
        }
        Ok(())
    }

    /// Same point with all boxes narrower than `2^-bits`.
    pub fn refined(&self, bits: i64) -> Result<AlgebraicPoint> {
        let mut iso_t = RootIsolation::new(&self.orbit.field.integer_modulus())?;
        let i = self.t_index(&mut iso_t)?;
        let mut iso_x = RootIsolation::new(&self.x_minpoly)?;
        let mut iso_y = RootIsolation::new(&self.y_minpoly)?;
        let xb = self.x_box.clone();
        let yb = self.y_box.clone();
        let xi = locate_box(&mut iso_x, &xb)?;
        let yi = locate_box(&mut iso_y, &yb)?;
        iso_t.refine_bits(bits)?;
        iso_x.refine_bits(bits)?;
        iso_y.refine_bits(bits)?;
        let mut out = self.clone();
        out.t_box = iso_t.boxes()[i].clone();
        out.x_box = iso_x.boxes()[xi].clone();
        out.y_box = iso_y.boxes()[yi].clone();
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x_minpoly": self.x_minpoly.to_text(),
            "y_minpoly": self.y_minpoly.to_text(),
            "x_box": self.x_box.to_strings(),
            "y_box": self.y_box.to_strings(),
            "degree": self.degree(),
            "certified": self.certificate,
            "field": {
                "modulus": self.orbit.field.integer_modulus().to_text(),
                "x": self.orbit.x.to_text(),
                "y": self.orbit.y.to_text(),
                "t_box": self.t_box.to_strings(),
            },
        })
    }

    /// Rebuild from [`AlgebraicPoint::to_json`] output. The result is not trusted
    /// until [`AlgebraicPoint::recertify`] succeeds.
    pub fn from_json(v: &Value) -> Result<Self> {
        let s = |v: &Value, k: &str| -> Result<String> {
            v.get(k).and_then(Value::as_str).map(str::to_string).ok_or_else(|| Error::Input(format!("missing string field '{k}'")))
        };
        let field = v.get("field").ok_or_else(|| Error::Input("missing 'field'".into()))?;
        let mu = parse_univariate(&s(field, "modulus")?, Var::T)?;
        if mu.degree().unwrap_or(0) == 0 {
            return Err(Error::Input("field modulus must be nonconstant".into()));
        }
        let nf = NumberField::new(&mu);
        let x = parse_univariate(&s(field, "x")?, Var::T)?;
        let y = parse_univariate(&s(field, "y")?, Var::T)?;
        let certificate = v
            .get("certified")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(|c| c.as_str().map(str::to_string)).collect())
            .unwrap_or_default();
        Ok(AlgebraicPoint {
            x_minpoly: parse_univariate(&s(v, "x_minpoly")?, Var::T)?,
            y_minpoly: parse_univariate(&s(v, "y_minpoly")?, Var::T)?,
            x_box: box_from_json(v.get("x_box"))?,
            y_box: box_from_json(v.get("y_box"))?,
            t_box: box_from_json(field.get("t_box"))?,
            orbit: Arc::new(PointField::new(nf, &x, &y)),
            certificate,
        })
    }

    /// Short human-readable form.
    pub fn describe(&self) -> String {
        if let Some((x, y)) = self.as_rational() {
            return format!("({}, {})", crate::arith::rational_string(&x), crate::arith::rational_string(&y));
        }
        format!("({} ~ {}, {} ~ {})", self.x_minpoly.to_text(), approx(&self.x_box), self.y_minpoly.to_text(), approx(&self.y_box))
    }
}

fn approx(b: &CBox) -> String {
    let re = b.re.mid().to_f64();
    let im = b.im.mid().to_f64();
    if b.is_real() {
        format!("{re:.6}")
    } else {
        format!("{re:.6}{im:+.6}i")
    }
}

pub fn box_from_json(v: Option<&Value>) -> Result<CBox> {
    let arr = v.and_then(Value::as_array).ok_or_else(|| Error::Input("missing box".into()))?;
    if arr.len() != 4 {
        return Err(Error::Input("a box has four corners".into()));
    }
    let mut d = Vec::with_capacity(4);
    for c in arr {
        let s = c.as_str().ok_or_else(|| Error::Input("box corners are strings".into()))?;
        d.push(s.parse::<Dyadic>().map_err(|_| Error::Input(format!("bad dyadic '{s}'")))?);
    }
    if d[0] > d[1] || d[2] > d[3] {
        return Err(Error::Input("box corners out of order".into()));
    }
    Ok(CBox::new(Interval::new(d[0].clone(), d[1].clone()), Interval::new(d[2].clone(), d[3].clone())))
}
