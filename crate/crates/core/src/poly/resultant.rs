//! Subresultant remainder sequences over an integral domain.
//!
//! Polynomials are dense coefficient vectors (lowest degree first) over a
//! [`Domain`]; the two instances used here are the rationals and `Q[x]`,
//! the latter giving resultants of bivariate polynomials.

use num_traits::{One, Zero};

use super::uni::{UniPoly, Var};
use crate::arith::Rational;

pub trait Domain: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division known to be exact.
    fn exact_div(&self, o: &Self) -> Self;

    fn pow(&self, e: usize) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Domain for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Domain for UniPoly {
    fn zero_like(&self) -> Self {
        UniPoly::zero(self.var())
    }
    fn one_like(&self) -> Self {
        UniPoly::one(self.var())
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        UniPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        UniPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        UniPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        UniPoly::neg(self)
    }
    fn exact_div(&self, o: &Self) -> Self {
        UniPoly::exact_div(self, o)
    }
    fn pow(&self, e: usize) -> Self {
        UniPoly::pow(self, e as u32)
    }
}

fn trim<D: Domain>(v: &mut Vec<D>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn degree<D: Domain>(v: &[D]) -> Option<usize> {
    v.len().checked_sub(1)
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
pub fn pseudo_rem<D: Domain>(a: &[D], b: &[D]) -> Vec<D> {
    let db = degree(b).expect("pseudo-remainder by zero");
    let mut r: Vec<D> = a.to_vec();
    trim(&mut r);
    let Some(da) = degree(&r) else { return r };
    if da < db {
        return r;
    }
    let lb = b[db].clone();
    let mut steps = 0usize;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let k = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (j, bc) in b.iter().enumerate() {
            r[k + j] = r[k + j].sub(&lr.mul(bc));
        }
        trim(&mut r);
        steps += 1;
    }
    let missing = da - db + 1 - steps;
    if missing > 0 {
        let f = lb.pow(missing);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

/// Resultant of `a` and `b` by the subresultant algorithm.
///
/// Both inputs must have positive degree or be constants; the usual
/// conventions `res(c, b) = c^deg b` apply.
pub fn resultant<D: Domain>(a: &[D], b: &[D], zero: &D) -> D {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    let (Some(mut da), Some(mut db)) = (degree(&a), degree(&b)) else {
        return zero.zero_like();
    };
    if da == 0 {
        return a[0].pow(db);
    }
    if db == 0 {
        return b[0].pow(da);
    }
    let mut sign_neg = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        if da % 2 == 1 && db % 2 == 1 {
            sign_neg = !sign_neg;
        }
    }
    let one = a[0].one_like();
    let mut g = one.clone();
    let mut h = one;
    loop {
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        da = db;
        if r.is_empty() {
            return zero.zero_like();
        }
        let denom = g.mul(&h.pow(delta));
        b = r.iter().map(|c| c.exact_div(&denom)).collect();
        db = degree(&b).unwrap();
        g = a[da].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).exact_div(&h.pow(delta - 1)),
        };
        if db == 0 {
            let lb = b[0].clone();
            let res = if da == 1 { lb } else { lb.pow(da).exact_div(&h.pow(da - 1)) };
            return if sign_neg { res.neg() } else { res };
        }
    }
}

/// Resultant of two univariate rational polynomials.
pub fn uni_resultant(a: &UniPoly, b: &UniPoly) -> Rational {
    resultant(a.coeffs(), b.coeffs(), &Rational::zero())
}

/// Resultant of two polynomials in `y` with coefficients in `Q[x]`.
pub fn bivariate_resultant(a: &[UniPoly], b: &[UniPoly], var: Var) -> UniPoly {
    resultant(a, b, &UniPoly::zero(var)).with_var(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(Var::T, c)
    }

    #[test]
    fn small_resultants() {
        // res(t - 2, t^2 - 2) = 2^2 - 2 = 2
        assert_eq!(uni_resultant(&p(&[-2, 1]), &p(&[-2, 0, 1])), int(2));
        // shared root
        assert_eq!(uni_resultant(&p(&[-1, 0, 1]), &p(&[1, 1])), int(0));
        // res(t^2 + 1, t^2 - 1) = prod over roots of t^2+1 of (r^2 - 1) = (-2)(-2) = 4
        assert_eq!(uni_resultant(&p(&[1, 0, 1]), &p(&[-1, 0, 1])), int(4));
    }

    #[test]
    fn pseudo_remainder_identity() {
        let a = p(&[1, 2, 3, 4]);
        let b = p(&[5, 0, 2]);
        let r = pseudo_rem(a.coeffs(), b.coeffs());
        let r = UniPoly::new(Var::T, r);
        // lc(b)^2 * a = q b + r
        let lhs = a.scale(&int(4));
        let (_, rem) = lhs.div_rem(&b);
        assert_eq!(rem, r);
    }
}
