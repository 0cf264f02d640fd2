//! Zero-dimensional bivariate systems `f = g = 0` inside the torus.
//!
//! The x-coordinates are the roots of the squarefree part of `Res_y(f, g)`,
//! split into irreducible factors `m`. Over each residue field `K = Q[x]/(m)`
//! the common y-roots are the roots of `h = gcd(f, g)` in `K[y]`. The algebra
//! `K[y]/(h)` is a product of fields; a primitive element `x + k*y` turns it
//! into `Q[t]/(chi)`, and each irreducible factor of `chi` is one Galois orbit.

use std::sync::Arc;

use num_traits::Zero;

use super::field::{Krylov, NumberField};
use super::point::{AlgebraicPoint, PointField};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::poly::{irreducible_factors, SparsePoly, UniPoly, Var};

/// Polynomial in `y` over a number field, lowest degree first, trimmed.
pub(crate) type KPoly = Vec<UniPoly>;

pub(crate) fn trim(mut a: KPoly) -> KPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn k_rem(k: &NumberField, a: &KPoly, b: &KPoly) -> KPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv = k.inv(&b[db]).expect("nonzero leading coefficient");
    while r.len() > db && !r.is_empty() {
        let c = k.mul(r.last().unwrap(), &inv);
        let shift = r.len() - 1 - db;
        for (i, bc) in b.iter().enumerate() {
            let t = k.mul(&c, bc);
            r[shift + i] = r[shift + i].sub(&t);
        }
        r = trim(r);
    }
    r
}

pub(crate) fn k_monic(k: &NumberField, a: &KPoly) -> KPoly {
    let inv = k.inv(a.last().unwrap()).expect("nonzero leading coefficient");
    a.iter().map(|c| k.mul(c, &inv)).collect()
}

pub(crate) fn k_gcd(k: &NumberField, a: &KPoly, b: &KPoly) -> KPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = k_rem(k, &a, &b);
        a = b;
        b = if r.is_empty() { r } else { k_monic(k, &r) };
    }
    if a.is_empty() {
        a
    } else {
        k_monic(k, &a)
    }
}

pub(crate) fn k_div(k: &NumberField, a: &KPoly, b: &KPoly) -> KPoly {
    let db = b.len() - 1;
    let inv = k.inv(&b[db]).unwrap();
    let mut r = a.clone();
    let mut q = vec![UniPoly::zero(Var::T); a.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let c = k.mul(r.last().unwrap(), &inv);
        let shift = r.len() - 1 - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&k.mul(&c, bc));
        }
        q[shift] = c;
        r = trim(r);
    }
    trim(q)
}

pub(crate) fn k_derivative(a: &KPoly) -> KPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into()))).collect())
}

/// Rows of `f` in `y` reduced into `K`.
pub(crate) fn to_kpoly(k: &NumberField, f: &SparsePoly) -> KPoly {
    trim(f.as_poly_in_y().iter().map(|c| k.reduce(c)).collect())
}

/// The algebra `K[y]/(h)` with `h` monic, as a `Q`-vector space with basis `x^a y^b`.
struct Algebra<'a> {
    k: &'a NumberField,
    h: KPoly,
}

impl Algebra<'_> {
    fn e(&self) -> usize {
        self.h.len() - 1
    }

    fn dim(&self) -> usize {
        self.e() * self.k.degree()
    }

    fn flatten(&self, a: &KPoly) -> Vec<Rational> {
        let dm = self.k.degree();
        let mut v = vec![Rational::zero(); self.dim()];
        for (b, c) in a.iter().enumerate() {
            for i in 0..dm {
                v[b * dm + i] = c.coeff(i);
            }
        }
        v
    }

    fn mul_x(&self, a: &KPoly) -> KPoly {
        let t = self.k.gen();
        a.iter().map(|c| self.k.mul(c, &t)).collect()
    }

    fn mul_y(&self, a: &KPoly) -> KPoly {
        let e = self.e();
        let mut out = vec![UniPoly::zero(Var::T); e];
        for b in 0..a.len().min(e) {
            if b + 1 < e {
                out[b + 1] = a[b].clone();
            } else {
                for (j, hj) in self.h.iter().take(e).enumerate() {
                    out[j] = out[j].sub(&self.k.mul(&a[b], hj));
                }
            }
        }
        out
    }

    fn mul_gamma(&self, a: &KPoly, shear: i64) -> KPoly {
        let xa = self.mul_x(a);
        let ya = self.mul_y(a);
        let s = Rational::from_integer(shear.into());
        (0..self.e())
            .map(|b| {
                let xv = xa.get(b).cloned().unwrap_or_else(|| UniPoly::zero(Var::T));
                let yv = ya.get(b).cloned().unwrap_or_else(|| UniPoly::zero(Var::T));
                xv.add(&yv.scale(&s))
            })
            .collect()
    }

    /// Split into Galois orbits through a primitive element `x + k*y`.
    fn orbits(&self) -> Vec<PointField> {
        let d = self.dim();
        let e = self.e();
        let mut one = vec![UniPoly::zero(Var::T); e];
        one[0] = UniPoly::one(Var::T);
        let mut x_el = vec![UniPoly::zero(Var::T); e];
        x_el[0] = self.k.gen();
        let y_el = self.mul_y(&one);
        for shear in 0.. {
            let mut kr = Krylov::new(d);
            let mut p = one.clone();
            let mut chi = None;
            loop {
                if let Some(rel) = kr.insert(self.flatten(&p)) {
                    if kr.rank() == d {
                        chi = Some(UniPoly::new(Var::T, rel));
                    }
                    break;
                }
                p = self.mul_gamma(&p, shear);
            }
            let Some(chi) = chi else { continue };
            let x_t = UniPoly::new(Var::T, kr.express(self.flatten(&x_el)).expect("x lies in the algebra"));
            let y_t = UniPoly::new(Var::T, kr.express(self.flatten(&y_el)).expect("y lies in the algebra"));
            return irreducible_factors(&chi)
                .into_iter()
                .map(|mu| PointField::new(NumberField::new(&mu), &x_t, &y_t))
                .collect();
        }
        unreachable!()
    }
}

/// Galois orbits of the common zeros of `f` and `g` in `G_m^2`.
pub fn solve_orbits(f: &SparsePoly, g: &SparsePoly) -> Result<Vec<PointField>> {
    if f.is_constant() || g.is_constant() {
        if f.is_zero() || g.is_zero() {
            let other = if f.is_zero() { g } else { f };
            if !other.is_constant() || other.is_zero() {
                return Err(Error::InfiniteIntersection(other.canonical().to_text()));
            }
        }
        return Err(Error::ConstantInput);
    }
    let common = f.gcd(g);
    if !common.is_constant() {
        return Err(Error::InfiniteIntersection(common.to_text()));
    }
    let r = if f.degree_y() == 0 {
        f.as_poly_in_y()[0].clone()
    } else if g.degree_y() == 0 {
        g.as_poly_in_y()[0].clone()
    } else {
        f.resultant(g, crate::poly::PlaneVar::Y)?
    };
    if r.is_zero() {
        return Err(Error::InfiniteIntersection(common.to_text()));
    }
    let r = r.strip_zero_roots();
    if r.is_constant() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for m in irreducible_factors(&r.squarefree_part().with_var(Var::T)) {
        let k = NumberField::new(&m);
        let fk = to_kpoly(&k, f);
        let gk = to_kpoly(&k, g);
        let mut h = k_gcd(&k, &fk, &gk);
        if h.is_empty() {
            // both vanish identically on the fiber; excluded by the gcd test
            return Err(Error::InfiniteIntersection(m.to_text()));
        }
        while h.len() > 1 && h[0].is_zero() {
            h.remove(0);
        }
        if h.len() <= 1 {
            continue;
        }
        let dh = k_derivative(&h);
        let sq = k_gcd(&k, &h, &dh);
        if sq.len() > 1 {
            h = k_monic(&k, &k_div(&k, &h, &sq));
        }
        if h.len() == 2 {
            let y = h[0].neg();
            out.push(PointField::new(k.clone(), &k.gen(), &y));
        } else {
            let alg = Algebra { k: &k, h };
            out.extend(alg.orbits());
        }
    }
    for pf in &out {
        if !pf.vanishes(f) || !pf.vanishes(g) || !pf.in_torus() {
            return Err(Error::UncertifiedPoint);
        }
    }
    Ok(out)
}

/// All common zeros of `f` and `g` with both coordinates nonzero, certified and sorted.
pub fn solve_system(f: &SparsePoly, g: &SparsePoly) -> Result<Vec<AlgebraicPoint>> {
    let mut pts = Vec::new();
    for pf in solve_orbits(f, g)? {
        pts.extend(Arc::new(pf).points(&["f", "g", "torus"])?);
    }
    pts.sort_by(AlgebraicPoint::canonical_cmp);
    Ok(pts)
}

/// Degree of the field generated by the coordinates of `p`.
pub fn point_degree(p: &AlgebraicPoint) -> usize {
    p.degree()
}

/// `Q(x, y) = Q(x + k*y)` for the first `k = 0, 1, ...` that works; returns `(k, minimal polynomial)`.
pub fn primitive_element(pf: &PointField) -> (i64, UniPoly) {
    let n = pf.degree();
    for k in 0.. {
        let s = Rational::from_integer(k.into());
        let gamma = pf.x.add(&pf.y.scale(&s));
        let mp = pf.field.minpoly(&gamma);
        if mp.deg0() == n {
            return (k, mp);
        }
    }
    unreachable!()
}
