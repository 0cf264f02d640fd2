//! Arithmetic in number fields `Q[t]/(mu)` and incremental linear algebra over `Q`.

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::poly::{SparsePoly, UniPoly, Var};

/// Incremental row echelon form that remembers how each row was built from the inserted vectors.
#[derive(Clone, Debug)]
pub struct Krylov {
    dim: usize,
    inserted: usize,
    rows: Vec<(usize, Vec<Rational>, Vec<Rational>)>,
}

impl Krylov {
    pub fn new(dim: usize) -> Self {
        Krylov { dim, inserted: 0, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<Rational>, mut combo: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
        for (piv, row, rc) in &self.rows {
            if v[*piv].is_zero() {
                continue;
            }
            let c = v[*piv].clone();
            for (a, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a -= &c * b;
                }
            }
            if combo.len() < rc.len() {
                combo.resize(rc.len(), Rational::zero());
            }
            for (a, b) in combo.iter_mut().zip(rc) {
                if !b.is_zero() {
                    *a -= &c * b;
                }
            }
        }
        (v, combo)
    }

    /// Insert the next vector. Returns the coefficients of a linear relation
    /// `sum c_i v_i = 0` (with `c_last = 1`) if it is dependent on earlier ones.
    pub fn insert(&mut self, v: Vec<Rational>) -> Option<Vec<Rational>> {
        debug_assert_eq!(v.len(), self.dim);
        let k = self.inserted;
        self.inserted += 1;
        let mut combo = vec![Rational::zero(); k + 1];
        combo[k] = Rational::one();
        let (v, combo) = self.reduce(v, combo);
        match v.iter().position(|c| !c.is_zero()) {
            None => Some(combo),
            Some(piv) => {
                let inv = v[piv].recip();
                let v: Vec<Rational> = v.into_iter().map(|c| c * &inv).collect();
                let combo: Vec<Rational> = combo.into_iter().map(|c| c * &inv).collect();
                self.rows.push((piv, v, combo));
                None
            }
        }
    }

    /// Coefficients expressing `v` in the inserted vectors, if it lies in their span.
    pub fn express(&self, v: Vec<Rational>) -> Option<Vec<Rational>> {
        let (r, combo) = self.reduce(v, vec![Rational::zero(); self.inserted]);
        if r.iter().all(|c| c.is_zero()) {
            Some(combo.into_iter().map(|c| -c).collect())
        } else {
            None
        }
    }
}

/// The field `Q[t]/(mu)` for an irreducible `mu`; elements are reduced polynomials in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: UniPoly,
}

impl NumberField {
    /// `mu` must be irreducible over `Q`; it is stored monic.
    pub fn new(mu: &UniPoly) -> Self {
        assert!(mu.degree().unwrap_or(0) >= 1, "field modulus must be nonconstant");
        NumberField { modulus: mu.monic().with_var(Var::T) }
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    /// The defining polynomial with coprime integer coefficients.
    pub fn integer_modulus(&self) -> UniPoly {
        self.modulus.primitive_rational()
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg0()
    }

    pub fn gen(&self) -> UniPoly {
        self.reduce(&UniPoly::ident(Var::T))
    }

    pub fn reduce(&self, a: &UniPoly) -> UniPoly {
        a.clone().with_var(Var::T).rem(&self.modulus)
    }

    pub fn from_rational(&self, c: Rational) -> UniPoly {
        UniPoly::constant(Var::T, c)
    }

    pub fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.mul(b).rem(&self.modulus)
    }

    pub fn inv(&self, a: &UniPoly) -> Option<UniPoly> {
        if a.is_zero() {
            return None;
        }
        a.inverse_mod(&self.modulus)
    }

    pub fn pow(&self, a: &UniPoly, mut e: u64) -> UniPoly {
        let mut base = self.reduce(a);
        let mut acc = UniPoly::one(Var::T);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a^e` for any integer `e`; `None` when `a = 0` and `e < 0`.
    pub fn powi(&self, a: &UniPoly, e: i64) -> Option<UniPoly> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            Some(self.pow(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn to_vec(&self, a: &UniPoly) -> Vec<Rational> {
        (0..self.degree()).map(|i| a.coeff(i)).collect()
    }

    /// `f(x, y)` with `x`, `y` field elements.
    pub fn eval_sparse(&self, f: &SparsePoly, x: &UniPoly, y: &UniPoly) -> UniPoly {
        let rows = f.as_poly_in_y();
        let mut acc = UniPoly::zero(Var::T);
        for row in rows.iter().rev() {
            acc = self.mul(&acc, y);
            let mut inner = UniPoly::zero(Var::T);
            for c in row.coeffs().iter().rev() {
                inner = self.mul(&inner, x).add(&UniPoly::constant(Var::T, c.clone()));
            }
            acc = acc.add(&inner);
        }
        self.reduce(&acc)
    }

    /// Minimal polynomial of `a` over `Q`, primitive with positive leading coefficient.
    pub fn minpoly(&self, a: &UniPoly) -> UniPoly {
        let a = self.reduce(a);
        let mut kr = Krylov::new(self.degree());
        let mut p = UniPoly::one(Var::T);
        loop {
            if let Some(rel) = kr.insert(self.to_vec(&p)) {
                return UniPoly::new(Var::T, rel).primitive_rational();
            }
            p = self.mul(&p, &a);
        }
    }

    /// Is `a` a rational number?
    pub fn as_rational(&self, a: &UniPoly) -> Option<Rational> {
        let a = self.reduce(a);
        if a.is_constant() {
            Some(a.coeff(0))
        } else {
            None
        }
    }
}
