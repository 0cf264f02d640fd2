//! Outward-rounded real intervals and complex rectangles over dyadics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Rounding};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(r, prec, Rounding::Down),
            hi: Dyadic::from_rational(r, prec, Rounding::Up),
        }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Interval::from_rational(&BigRational::from_integer(n.clone()), prec)
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `self` lies in the interior of `other`.
    pub fn strictly_inside(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        Interval { lo: lo.round(prec, Rounding::Down), hi: hi.round(prec, Rounding::Up) }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval::rounded(&self.lo + &o.lo, &self.hi + &o.hi, prec)
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        Interval::rounded(&self.lo - &o.hi, &self.hi - &o.lo, prec)
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::rounded(lo, hi, prec)
    }

    pub fn scale(&self, r: &BigRational, prec: u32) -> Interval {
        self.mul(&Interval::from_rational(r, prec), prec)
    }

    pub fn sqr(&self, prec: u32) -> Interval {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            Interval::rounded(Dyadic::zero(), a.max(b), prec)
        } else {
            Interval::rounded(a.clone().min(b.clone()), a.max(b), prec)
        }
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self, prec: u32) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let one = BigRational::one();
        let lo = Dyadic::from_rational(&(&one / self.hi.to_rational()), prec, Rounding::Down);
        let hi = Dyadic::from_rational(&(&one / self.lo.to_rational()), prec, Rounding::Up);
        Some(Interval { lo, hi })
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()) }
    }

    pub fn max_abs(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Upper bound for `sqrt` of a nonnegative interval's upper end.
    pub fn sqrt_hi(&self, prec: u32) -> Dyadic {
        sqrt_up(&self.hi.to_rational(), prec)
    }
}

/// Dyadic upper bound on `sqrt(r)` for `r >= 0`, with about `prec` bits.
pub fn sqrt_up(r: &BigRational, prec: u32) -> Dyadic {
    if !r.is_positive() {
        return Dyadic::zero();
    }
    // sqrt(n/d) = sqrt(n*d)/d; scale by 4^k to get enough bits
    let nd = r.numer() * r.denom();
    let k = (prec as i64 * 2 - nd.bits() as i64).max(0) / 2 + 2;
    let scaled = nd << (2 * k) as usize;
    let mut s = scaled.sqrt();
    if &s * &s < scaled {
        s += 1;
    }
    let val = BigRational::new(s, r.denom() << k as usize);
    Dyadic::from_rational(&val, prec, Rounding::Up)
}

/// Dyadic lower bound on `sqrt(r)` for `r >= 0`.
pub fn sqrt_down(r: &BigRational, prec: u32) -> Dyadic {
    if !r.is_positive() {
        return Dyadic::zero();
    }
    let nd = r.numer() * r.denom();
    let k = (prec as i64 * 2 - nd.bits() as i64).max(0) / 2 + 2;
    let scaled = nd << (2 * k) as usize;
    let s = scaled.sqrt();
    let val = BigRational::new(s, r.denom() << k as usize);
    Dyadic::from_rational(&val, prec, Rounding::Down)
}

/// Complex rectangle `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBox {
    pub re: Interval,
    pub im: Interval,
}

impl CBox {
    pub fn new(re: Interval, im: Interval) -> Self {
        CBox { re, im }
    }

    pub fn real(re: Interval) -> Self {
        CBox { re, im: Interval::zero() }
    }

    pub fn point(re: Dyadic, im: Dyadic) -> Self {
        CBox { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        CBox::real(Interval::from_rational(r, prec))
    }

    pub fn one() -> Self {
        CBox::point(Dyadic::one(), Dyadic::zero())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_point() && self.im.lo.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn intersects(&self, o: &CBox) -> bool {
        self.re.intersects(&o.re) && self.im.intersects(&o.im)
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.re.contains_rational(r) && self.im.contains_zero()
    }

    /// Larger side length.
    pub fn width(&self) -> Dyadic {
        self.re.width().max(self.im.width())
    }

    pub fn add(&self, o: &CBox, prec: u32) -> CBox {
        CBox { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &CBox, prec: u32) -> CBox {
        CBox { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn mul(&self, o: &CBox, prec: u32) -> CBox {
        if self.is_real() && o.is_real() {
            return CBox::real(self.re.mul(&o.re, prec));
        }
        let re = self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec);
        let im = self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec);
        CBox { re, im }
    }

    pub fn scale(&self, r: &BigRational, prec: u32) -> CBox {
        let s = Interval::from_rational(r, prec);
        if self.is_real() {
            return CBox::real(self.re.mul(&s, prec));
        }
        CBox { re: self.re.mul(&s, prec), im: self.im.mul(&s, prec) }
    }

    /// Enclosure of `|z|^2`.
    pub fn abs_sqr(&self, prec: u32) -> Interval {
        self.re.sqr(prec).add(&self.im.sqr(prec), prec)
    }

    pub fn recip(&self, prec: u32) -> Option<CBox> {
        if self.is_real() {
            return self.re.recip(prec).map(CBox::real);
        }
        let n = self.abs_sqr(prec);
        let inv = n.recip(prec)?;
        Some(CBox { re: self.re.mul(&inv, prec), im: self.im.neg().mul(&inv, prec) })
    }

    pub fn pow(&self, mut e: u64, prec: u32) -> CBox {
        let mut base = self.clone();
        let mut acc = CBox::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    /// Integer power allowing negative exponents.
    pub fn powi(&self, e: i64, prec: u32) -> Option<CBox> {
        let p = self.pow(e.unsigned_abs(), prec);
        if e < 0 {
            p.recip(prec)
        } else {
            Some(p)
        }
    }

    /// Evaluate a polynomial with rational coefficients (ascending order).
    pub fn eval_poly(coeffs: &[BigRational], z: &CBox, prec: u32) -> CBox {
        let mut acc = CBox::real(Interval::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(z, prec).add(&CBox::from_rational(c, prec), prec);
        }
        acc
    }

    /// Four dyadic corners `[lo_re, hi_re, lo_im, hi_im]` as strings.
    pub fn to_strings(&self) -> [String; 4] {
        [
            self.re.lo.to_string(),
            self.re.hi.to_string(),
            self.im.lo.to_string(),
            self.im.hi.to_string(),
        ]
    }

    pub fn sort_key(&self) -> (Dyadic, Dyadic, Dyadic, Dyadic) {
        (self.re.lo.clone(), self.re.hi.clone(), self.im.lo.clone(), self.im.hi.clone())
    }

    /// Does the box avoid the unit circle, and if so, is it outside?
    pub fn unit_circle_side(&self, prec: u32) -> Option<bool> {
        let a = self.abs_sqr(prec);
        let one = Dyadic::one();
        if a.hi < one {
            Some(false)
        } else if a.lo > one {
            Some(true)
        } else {
            None
        }
    }
}

/// Fixed-point `2 * atanh(s)` bounds for rational `0 <= s < 1/2`, scaled by `2^w`.
fn atanh2_fixed(s_num: &BigInt, s_den: &BigInt, w: u64) -> (BigInt, BigInt) {
    // s in fixed point, floor and ceil
    let s_lo = (s_num << w as usize) / s_den;
    let s_hi = if (&s_lo * s_den) == (s_num << w as usize) { s_lo.clone() } else { &s_lo + 1 };
    let s2_lo = (&s_lo * &s_lo) >> w as usize;
    let s2_hi = ((&s_hi * &s_hi) >> w as usize) + 1;
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut p_lo = s_lo.clone();
    let mut p_hi = s_hi.clone();
    let mut k: u64 = 0;
    loop {
        let d = BigInt::from(2 * k + 1);
        sum_lo += &p_lo / &d;
        sum_hi += (&p_hi / &d) + 1;
        p_lo = (&p_lo * &s2_lo) >> w as usize;
        p_hi = ((&p_hi * &s2_hi) >> w as usize) + 1;
        k += 1;
        if p_hi <= BigInt::from(2) {
            break;
        }
        if k > 4 * w + 16 {
            break;
        }
    }
    // tail: sum_{j>=k} s^{2j+1}/(2j+1) <= p_hi / (1 - s^2) <= 2 * p_hi  (s < 1/2)
    sum_hi += &p_hi * 2 + 1;
    (sum_lo * 2, sum_hi * 2)
}

/// Bounds `(lo, hi)` on `ln(r)` for rational `r > 0`, with about `prec` bits.
pub fn ln_rational(r: &BigRational, prec: u32) -> Interval {
    assert!(r.is_positive(), "logarithm of a nonpositive number");
    if r.is_one() {
        return Interval::zero();
    }
    let w = prec as u64 + 24;
    // r = m * 2^k with m in [1, 2)
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let mut k = nb - db;
    let two = BigRational::from_integer(BigInt::from(2));
    let mut m = if k >= 0 {
        r / BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        r * BigRational::from_integer(BigInt::one() << (-k) as usize)
    };
    while m >= two {
        m /= &two;
        k += 1;
    }
    while m < BigRational::one() {
        m *= &two;
        k -= 1;
    }
    // ln m = 2 atanh((m-1)/(m+1)), with (m-1)/(m+1) in [0, 1/3)
    let s = (&m - BigRational::one()) / (&m + BigRational::one());
    let (lm_lo, lm_hi) = if s.is_zero() {
        (BigInt::zero(), BigInt::zero())
    } else {
        atanh2_fixed(s.numer(), s.denom(), w)
    };
    let (l2_lo, l2_hi) = atanh2_fixed(&BigInt::one(), &BigInt::from(3), w);
    let kk = BigInt::from(k);
    let (a, b) = if k >= 0 { (&kk * &l2_lo, &kk * &l2_hi) } else { (&kk * &l2_hi, &kk * &l2_lo) };
    let lo = Dyadic::new(a + lm_lo, -(w as i64)).round(prec, Rounding::Down);
    let hi = Dyadic::new(b + lm_hi, -(w as i64)).round(prec, Rounding::Up);
    Interval { lo, hi }
}

/// Enclosure of `ln` over a positive interval.
pub fn ln_interval(x: &Interval, prec: u32) -> Interval {
    assert!(x.lo.signum() > 0, "logarithm of an interval reaching zero");
    let lo = ln_rational(&x.lo.to_rational(), prec).lo;
    let hi = ln_rational(&x.hi.to_rational(), prec).hi;
    Interval { lo, hi }
}
