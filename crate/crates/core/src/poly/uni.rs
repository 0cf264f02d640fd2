use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{rational_string, to_coprime_integers, Rational};

/// Which indeterminate a univariate polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::T => "t",
        }
    }
}

/// Dense univariate polynomial with rational coefficients, lowest degree first.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and `degree` is `len - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    var: Var,
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(var: Var, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { var, coeffs }
    }

    pub fn from_ints(var: Var, coeffs: &[i64]) -> Self {
        UniPoly::new(var, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(var: Var, coeffs: &[BigInt]) -> Self {
        UniPoly::new(var, coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn zero(var: Var) -> Self {
        UniPoly { var, coeffs: Vec::new() }
    }

    pub fn one(var: Var) -> Self {
        UniPoly::constant(var, Rational::one())
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        UniPoly::new(var, vec![c])
    }

    /// `c * var^k`.
    pub fn monomial(var: Var, c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        UniPoly::new(var, v)
    }

    /// The identity polynomial `var`.
    pub fn ident(var: Var) -> Self {
        UniPoly::monomial(var, Rational::one(), 1)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        UniPoly::new(self.var, v)
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        UniPoly::new(self.var, v)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { var: self.var, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.var);
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(self.var, v)
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `var^k`.
    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UniPoly::new(self.var, v)
    }

    pub fn pow(&self, mut e: u32) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::one(self.var);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> UniPoly {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        UniPoly::new(self.var, v)
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg0();
        if self.coeffs.len() < d.coeffs.len() {
            return (UniPoly::zero(self.var), self.clone());
        }
        let mut r = self.coeffs.clone();
        let inv = d.lc().recip();
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::new(self.var, q), UniPoly::new(self.var, r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Quotient, panicking if the division leaves a remainder.
    pub fn exact_div(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            // keep coefficient sizes in check
            b = r.primitive_rational();
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g` and `g` monic.
    pub fn ext_gcd(&self, o: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let var = self.var;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UniPoly::one(var), UniPoly::zero(var));
        let (mut t0, mut t1) = (UniPoly::zero(var), UniPoly::one(var));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &UniPoly) -> Option<UniPoly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if g.degree() == Some(0) {
            Some(s.rem(m))
        } else {
            None
        }
    }

    /// Squarefree part, made primitive with integer coefficients.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return self.primitive_rational();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).primitive_rational()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Compose `self(g)`.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(g.var);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&UniPoly::constant(g.var, c.clone()));
        }
        acc
    }

    /// Scale to coprime integer coefficients with positive leading coefficient.
    pub fn primitive_rational(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut ints = to_coprime_integers(&self.coeffs);
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in ints.iter_mut() {
                *c = -c.clone();
            }
        }
        UniPoly::from_bigints(self.var, &ints)
    }

    /// Integer coefficients of the primitive form.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.primitive_rational().coeffs.iter().map(|c| c.to_integer()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Remove the factor `var^k` of highest possible `k`.
    pub fn strip_zero_roots(&self) -> UniPoly {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        UniPoly::new(self.var, self.coeffs[k..].to_vec())
    }

    /// `var^d * self(1/var)` with `d = deg self`.
    pub fn reversed(&self) -> UniPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        UniPoly::new(self.var, v)
    }

    /// Horner text in canonical descending order, e.g. `t^2 - t - 1`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let v = self.var.name();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&rational_string(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else if a.is_integer() {
                out.push_str(&format!("{}*{mono}", rational_string(&a)));
            } else {
                out.push_str(&format!("({})*{mono}", rational_string(&a)));
            }
        }
        out
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self.to_text())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(Var::T, c)
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // t^2 - 1
        let b = p(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[1, 1]).mul(&p(&[2, 1]))), p(&[1, 1]));
        assert_eq!(a.gcd(&UniPoly::one(Var::T)), UniPoly::one(Var::T));
    }

    #[test]
    fn inverse_mod_works() {
        let m = p(&[-2, 0, 1]);
        let a = p(&[1, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!(a.mul(&inv).rem(&m), UniPoly::one(Var::T));
        assert!(p(&[0, 0, 1]).inverse_mod(&p(&[0, 1])).is_none());
    }

    #[test]
    fn squarefree() {
        let sq = p(&[-1, 1]).pow(2).mul(&p(&[1, 1]));
        assert!(!sq.is_squarefree());
        assert_eq!(sq.squarefree_part(), p(&[-1, 0, 1]));
    }

    #[test]
    fn printing() {
        assert_eq!(p(&[-1, -1, 1]).to_text(), "t^2 - t - 1");
        assert_eq!(UniPoly::new(Var::X, vec![int(0), crate::arith::rat(1, 2)]).to_text(), "(1/2)*x");
    }
}
