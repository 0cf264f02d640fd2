use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::resultant::{bivariate_resultant, pseudo_rem};
use super::uni::{UniPoly, Var};
use crate::arith::{rational_string, to_coprime_integers, Rational};
use crate::error::{Error, Result};

/// Exponent pair `(a, b)` of the monomial `x^a y^b`.
pub type Exponent = (u32, u32);

/// Which of the two plane variables an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaneVar {
    X,
    Y,
}

/// Sparse bivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Exponent, Rational>,
}

/// Graded-lex: higher total degree first, then higher power of `x`.
pub fn grlex_cmp(a: &Exponent, b: &Exponent) -> Ordering {
    (b.0 + b.1).cmp(&(a.0 + a.1)).then(b.0.cmp(&a.0))
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        SparsePoly::from_terms([((0, 0), c)])
    }

    pub fn one() -> Self {
        SparsePoly::constant(Rational::one())
    }

    pub fn x() -> Self {
        SparsePoly::monomial(1, 0, Rational::one())
    }

    pub fn y() -> Self {
        SparsePoly::monomial(0, 1, Rational::one())
    }

    pub fn monomial(a: u32, b: u32, c: Rational) -> Self {
        SparsePoly::from_terms([((a, b), c)])
    }

    /// Sum of terms; repeated exponents are added and zero results dropped.
    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(it: I) -> Self {
        let mut terms: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e, c) in it {
            *terms.entry(e).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        SparsePoly { terms }
    }

    pub fn from_int_terms(t: &[((u32, u32), i64)]) -> Self {
        SparsePoly::from_terms(t.iter().map(|&(e, c)| (e, BigRational::from_integer(c.into()))))
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    /// Terms in canonical (graded-lex) order.
    pub fn sorted_terms(&self) -> Vec<(Exponent, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|a, b| grlex_cmp(&a.0, &b.0));
        v
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(a, b)| a == 0 && b == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: PlaneVar) -> u32 {
        match v {
            PlaneVar::X => self.degree_x(),
            PlaneVar::Y => self.degree_y(),
        }
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.sorted_terms().into_iter().map(|(_, c)| c).collect()
    }

    pub fn add(&self, o: &SparsePoly) -> SparsePoly {
        SparsePoly::from_terms(self.terms.iter().chain(o.terms.iter()).map(|(e, c)| (*e, c.clone())))
    }

    pub fn sub(&self, o: &SparsePoly) -> SparsePoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        SparsePoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn scale(&self, k: &Rational) -> SparsePoly {
        if k.is_zero() {
            return SparsePoly::zero();
        }
        SparsePoly { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect() }
    }

    pub fn mul(&self, o: &SparsePoly) -> SparsePoly {
        let mut out: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &o.terms {
                *out.entry((a1 + a2, b1 + b2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        SparsePoly { terms: out }
    }

    /// Multiply by `x^a y^b`.
    pub fn mul_monomial(&self, a: u32, b: u32) -> SparsePoly {
        SparsePoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i + a, j + b), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        (0..e).fold(SparsePoly::one(), |acc, _| acc.mul(self))
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: PlaneVar) -> SparsePoly {
        SparsePoly::from_terms(self.terms.iter().filter_map(|(&(a, b), c)| match v {
            PlaneVar::X if a > 0 => Some(((a - 1, b), c * BigRational::from_integer(a.into()))),
            PlaneVar::Y if b > 0 => Some(((a, b - 1), c * BigRational::from_integer(b.into()))),
            _ => None,
        }))
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(a, b), c) in &self.terms {
            acc += c * pow_rat(x, a) * pow_rat(y, b);
        }
        acc
    }

    /// Substitute `x -> x + x0`, `y -> y + y0`.
    pub fn translate(&self, x0: &Rational, y0: &Rational) -> SparsePoly {
        let sx = SparsePoly::from_terms([((1, 0), Rational::one()), ((0, 0), x0.clone())]);
        let sy = SparsePoly::from_terms([((0, 1), Rational::one()), ((0, 0), y0.clone())]);
        let mut acc = SparsePoly::zero();
        for (&(a, b), c) in &self.terms {
            acc = acc.add(&sx.pow(a).mul(&sy.pow(b)).scale(c));
        }
        acc
    }

    pub fn swap_xy(&self) -> SparsePoly {
        SparsePoly { terms: self.terms.iter().map(|(&(a, b), c)| ((b, a), c.clone())).collect() }
    }

    /// Coefficients as a polynomial in `y` over `Q[x]`, lowest power first.
    pub fn as_poly_in_y(&self) -> Vec<UniPoly> {
        let dy = self.degree_y() as usize;
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); dy + 1];
        for (&(a, b), c) in &self.terms {
            let row = &mut rows[b as usize];
            if row.len() <= a as usize {
                row.resize(a as usize + 1, Rational::zero());
            }
            row[a as usize] = c.clone();
        }
        if self.is_zero() {
            return Vec::new();
        }
        rows.into_iter().map(|r| UniPoly::new(Var::X, r)).collect()
    }

    /// Coefficients as a polynomial in `x` over `Q[y]`.
    pub fn as_poly_in_x(&self) -> Vec<UniPoly> {
        self.swap_xy().as_poly_in_y().into_iter().map(|p| p.with_var(Var::Y)).collect()
    }

    pub fn from_poly_in_y(rows: &[UniPoly]) -> SparsePoly {
        SparsePoly::from_terms(rows.iter().enumerate().flat_map(|(b, row)| {
            row.coeffs().iter().enumerate().map(move |(a, c)| ((a as u32, b as u32), c.clone()))
        }))
    }

    pub fn from_univariate(p: &UniPoly, v: PlaneVar) -> SparsePoly {
        SparsePoly::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let e = match v {
                PlaneVar::X => (k as u32, 0),
                PlaneVar::Y => (0, k as u32),
            };
            (e, c.clone())
        }))
    }

    /// Integer coprime form with positive leading (graded-lex) coefficient.
    pub fn canonical(&self) -> SparsePoly {
        if self.is_zero() {
            return SparsePoly::zero();
        }
        let sorted = self.sorted_terms();
        let coeffs: Vec<Rational> = sorted.iter().map(|(_, c)| c.clone()).collect();
        let mut ints = to_coprime_integers(&coeffs);
        if ints[0].is_negative() {
            ints.iter_mut().for_each(|c| *c = -c.clone());
        }
        SparsePoly::from_terms(sorted.iter().zip(ints).map(|((e, _), c)| (*e, BigRational::from_integer(c))))
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// Resultant with respect to `eliminate`, as a polynomial in the other variable.
    pub fn resultant(&self, other: &SparsePoly, eliminate: PlaneVar) -> Result<UniPoly> {
        if self.degree_in(eliminate) == 0 || other.degree_in(eliminate) == 0 {
            return Err(Error::DegreeZeroInEliminated);
        }
        Ok(match eliminate {
            PlaneVar::Y => bivariate_resultant(&self.as_poly_in_y(), &other.as_poly_in_y(), Var::X),
            PlaneVar::X => bivariate_resultant(&self.as_poly_in_x(), &other.as_poly_in_x(), Var::Y),
        })
    }

    /// Canonical gcd; `gcd(f, 0) = canonical(f)`.
    pub fn gcd(&self, other: &SparsePoly) -> SparsePoly {
        if self.is_zero() {
            return other.canonical();
        }
        if other.is_zero() {
            return self.canonical();
        }
        let a = self.as_poly_in_y();
        let b = other.as_poly_in_y();
        let ca = content_x(&a);
        let cb = content_x(&b);
        let c = ca.gcd(&cb);
        let pa = divide_rows(&a, &ca);
        let pb = divide_rows(&b, &cb);
        let g = primitive_gcd_rows(pa, pb);
        let rows: Vec<UniPoly> = g.iter().map(|r| r.mul(&c)).collect();
        SparsePoly::from_poly_in_y(&rows).canonical()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &SparsePoly) -> Option<SparsePoly> {
        if d.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero();
        let (lead_e, lead_c) = d.sorted_terms()[0].clone();
        while !rem.is_zero() {
            let (e, c) = rem.sorted_terms()[0].clone();
            if e.0 < lead_e.0 || e.1 < lead_e.1 {
                return None;
            }
            let t = SparsePoly::monomial(e.0 - lead_e.0, e.1 - lead_e.1, c / &lead_c);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// True iff no nonconstant factor appears squared.
    ///
    /// Checks that `gcd(f, f_x)` has no `x` and `gcd(f, f_y)` has no `y`.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_constant() {
            return Err(Error::ConstantInput);
        }
        let gx = self.gcd(&self.partial(PlaneVar::X));
        let gy = self.gcd(&self.partial(PlaneVar::Y));
        Ok(gx.degree_x() == 0 && gy.degree_y() == 0)
    }

    /// Canonical text: integer coefficients, graded-lex order, explicit `^`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for ((a, b), c) in self.sorted_terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (v, e) in [("x", a), ("y", b)] {
                match e {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            let coeff = if mag.is_integer() { rational_string(&mag) } else { format!("({})", rational_string(&mag)) };
            if factors.is_empty() {
                out.push_str(&coeff);
            } else {
                if !mag.is_one() {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

fn pow_rat(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn content_x(rows: &[UniPoly]) -> UniPoly {
    rows.iter().fold(UniPoly::zero(Var::X), |acc, r| acc.gcd(r))
}

fn divide_rows(rows: &[UniPoly], c: &UniPoly) -> Vec<UniPoly> {
    rows.iter().map(|r| r.exact_div(c)).collect()
}

fn trim_rows(v: &mut Vec<UniPoly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Gcd of two primitive polynomials in `y` over `Q[x]` by the primitive remainder sequence.
fn primitive_gcd_rows(mut a: Vec<UniPoly>, mut b: Vec<UniPoly>) -> Vec<UniPoly> {
    trim_rows(&mut a);
    trim_rows(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        if b.len() == 1 {
            // b is a nonzero element of Q[x] and primitive, so a unit up to x-content (which is 1)
            return vec![UniPoly::one(Var::X)];
        }
        let mut r = pseudo_rem(&a, &b);
        trim_rows(&mut r);
        a = b;
        if r.is_empty() {
            b = Vec::new();
        } else {
            let c = content_x(&r);
            b = divide_rows(&r, &c);
        }
    }
    a
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({})", self.to_text())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for SparsePoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_poly(s)
    }
}

/// Integer vector of canonical coefficients (graded-lex order).
pub fn integer_coefficients(f: &SparsePoly) -> Vec<BigInt> {
    f.canonical().coefficients().into_iter().map(|c| c.to_integer()).collect()
}
