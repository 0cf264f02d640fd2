//! Certified isolation of the complex roots of a squarefree integer polynomial.
//!
//! Approximations come from Aberth iteration in multiprecision arithmetic.
//! They are certified with Weierstrass inclusion disks: for approximations
//! `z_1..z_n` of the roots of a degree-`n` polynomial `p`, the disks
//! `|z - z_i| <= n |W_i|` with `W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j))`
//! contain all roots, and each connected component made of `k` disks holds
//! exactly `k` roots. Pairwise disjoint disks therefore isolate one root each.
//! A disk centred on the real axis that meets no other disk holds a real root,
//! since its root and the conjugate of that root both lie in it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::interval::{sqrt_up, Interval};
use crate::arith::{CBox, Dyadic, Rounding};
use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// Largest working precision before giving up.
pub const MAX_PRECISION: u32 = 1 << 14;

#[derive(Clone, Debug)]
struct Cf {
    re: Dyadic,
    im: Dyadic,
}

impl Cf {
    fn zero() -> Self {
        Cf { re: Dyadic::zero(), im: Dyadic::zero() }
    }
    fn real(re: Dyadic) -> Self {
        Cf { re, im: Dyadic::zero() }
    }
    fn add(&self, o: &Cf, prec: u32) -> Cf {
        Cf { re: (&self.re + &o.re).round(prec, Rounding::Nearest), im: (&self.im + &o.im).round(prec, Rounding::Nearest) }
    }
    fn sub(&self, o: &Cf, prec: u32) -> Cf {
        Cf { re: (&self.re - &o.re).round(prec, Rounding::Nearest), im: (&self.im - &o.im).round(prec, Rounding::Nearest) }
    }
    fn mul(&self, o: &Cf, prec: u32) -> Cf {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        Cf { re: re.round(prec, Rounding::Nearest), im: im.round(prec, Rounding::Nearest) }
    }
    fn norm(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
    fn div(&self, o: &Cf, prec: u32) -> Option<Cf> {
        let n = o.norm();
        if n.is_zero() {
            return None;
        }
        let re = &(&self.re * &o.re) + &(&self.im * &o.im);
        let im = &(&self.im * &o.re) - &(&self.re * &o.im);
        Some(Cf { re: re.div_approx(&n, prec), im: im.div_approx(&n, prec) })
    }
}

/// Evaluate `p` and `p'` at `z` approximately.
fn horner2(coeffs: &[Dyadic], z: &Cf, prec: u32) -> (Cf, Cf) {
    let mut p = Cf::zero();
    let mut dp = Cf::zero();
    for c in coeffs.iter().rev() {
        dp = dp.mul(z, prec).add(&p, prec);
        p = p.mul(z, prec).add(&Cf::real(c.clone()), prec);
    }
    (p, dp)
}

/// Starting points on circles read off the Newton polygon of `|a_k|`.
fn initial_guesses(a: &[BigInt]) -> Vec<Cf> {
    let n = a.len() - 1;
    let logs: Vec<Option<f64>> = a
        .iter()
        .map(|c| if c.is_zero() { None } else { Some(log2_big(c)) })
        .collect();
    // upper convex hull of (k, log|a_k|)
    let pts: Vec<(usize, f64)> = logs.iter().enumerate().filter_map(|(k, l)| l.map(|v| (k, v))).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (k1, l1) = hull[hull.len() - 2];
            let (k2, l2) = hull[hull.len() - 1];
            // remove k2 if it lies below the segment k1 -> p
            let cross = (k2 as f64 - k1 as f64) * (p.1 - l1) - (l2 - l1) * (p.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    let mut idx = 0usize;
    for w in hull.windows(2) {
        let (k1, l1) = w[0];
        let (k2, l2) = w[1];
        let m = k2 - k1;
        let log_r = (l1 - l2) / m as f64;
        for j in 0..m {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (m as f64) + 0.4 + 0.7 * idx as f64 / n as f64;
            let e = log_r.floor();
            let frac = 2f64.powf(log_r - e);
            let re = Dyadic::from_f64(frac * theta.cos()).mul_pow2(e as i64);
            let im = Dyadic::from_f64(frac * theta.sin()).mul_pow2(e as i64);
            out.push(Cf { re, im });
            idx += 1;
        }
    }
    // zero roots cannot occur for a squarefree input with a_0 != 0; pad defensively
    while out.len() < n {
        out.push(Cf::real(Dyadic::from_f64(0.5 + out.len() as f64)));
    }
    out
}

fn log2_big(c: &BigInt) -> f64 {
    let bits = c.bits() as i64;
    let shift = (bits - 53).max(0);
    let top = (c.abs() >> shift as usize).to_string().parse::<f64>().unwrap_or(1.0);
    top.log2() + shift as f64
}

/// Result of one isolation: one box per root, real roots with zero-width imaginary part.
#[derive(Clone, Debug)]
pub struct RootIsolation {
    coeffs: Vec<BigInt>,
    approx: Vec<Cf>,
    boxes: Vec<CBox>,
    prec: u32,
}

impl RootIsolation {
    /// Isolate the roots of the squarefree part of `u`.
    pub fn new(u: &UniPoly) -> Result<Self> {
        assert!(!u.is_zero(), "root isolation of the zero polynomial");
        let coeffs = u.squarefree_part().integer_coeffs();
        let n = coeffs.len() - 1;
        if n == 0 {
            return Ok(RootIsolation { coeffs, approx: Vec::new(), boxes: Vec::new(), prec: 64 });
        }
        let mut iso = RootIsolation { approx: initial_guesses(&coeffs), coeffs, boxes: Vec::new(), prec: 64 };
        if n == 1 {
            iso.linear_box();
            return Ok(iso);
        }
        iso.run(None)?;
        Ok(iso)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn boxes(&self) -> &[CBox] {
        &self.boxes
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn linear_box(&mut self) {
        let r = BigRational::new(-self.coeffs[0].clone(), self.coeffs[1].clone());
        self.boxes = vec![CBox::real(Interval::from_rational(&r, self.prec))];
    }

    /// Shrink every box below `width`.
    pub fn refine(&mut self, width: &Dyadic) -> Result<()> {
        while self.boxes.iter().any(|b| &b.width() > width) {
            if self.prec >= MAX_PRECISION {
                return Err(Error::PrecisionExhausted("refining root boxes".into()));
            }
            self.prec *= 2;
            if self.degree() == 1 {
                self.linear_box();
                continue;
            }
            let old = self.boxes.clone();
            self.run(Some(&old))?;
        }
        Ok(())
    }

    /// Refine until every box is narrower than `2^-bits`.
    pub fn refine_bits(&mut self, bits: i64) -> Result<()> {
        self.refine(&Dyadic::one().mul_pow2(-bits))
    }

    fn run(&mut self, previous: Option<&[CBox]>) -> Result<()> {
        loop {
            self.aberth();
            if let Some(boxes) = self.certify() {
                match previous {
                    None => {
                        self.boxes = boxes;
                        return Ok(());
                    }
                    Some(old) => {
                        if let Some(m) = match_boxes(old, &boxes) {
                            self.boxes = m;
                            return Ok(());
                        }
                    }
                }
            }
            if self.prec >= MAX_PRECISION {
                return Err(Error::PrecisionExhausted("isolating complex roots".into()));
            }
            self.prec *= 2;
        }
    }

    fn aberth(&mut self) {
        let prec = self.prec;
        let n = self.degree();
        let dc: Vec<Dyadic> = self.coeffs.iter().map(|c| Dyadic::from_int(c.clone()).round(prec + 8, Rounding::Nearest)).collect();
        let tol_bits = prec as i64 - 12;
        let max_iter = 60 + 8 * n;
        for _ in 0..max_iter {
            let mut converged = true;
            for i in 0..n {
                let zi = self.approx[i].clone();
                let (p, dp) = horner2(&dc, &zi, prec);
                if p.re.is_zero() && p.im.is_zero() {
                    continue;
                }
                let Some(ratio) = p.div(&dp, prec) else {
                    self.approx[i] = zi.add(&Cf::real(Dyadic::one().mul_pow2(-(prec as i64) / 4)), prec);
                    converged = false;
                    continue;
                };
                let mut s = Cf::zero();
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let d = zi.sub(&self.approx[j], prec);
                    if let Some(inv) = Cf::real(Dyadic::one()).div(&d, prec) {
                        s = s.add(&inv, prec);
                    }
                }
                let denom = Cf::real(Dyadic::one()).sub(&ratio.mul(&s, prec), prec);
                let w = ratio.div(&denom, prec).unwrap_or(ratio);
                let zn = zi.sub(&w, prec);
                // relative size of the step
                let wn = w.norm();
                let zn2 = zn.norm();
                let small = match (wn.ilog2(), zn2.ilog2()) {
                    (None, _) => true,
                    (Some(a), Some(b)) => a < b - 2 * tol_bits,
                    (Some(a), None) => a < -2 * tol_bits,
                };
                if !small {
                    converged = false;
                }
                self.approx[i] = zn;
            }
            if converged {
                break;
            }
        }
    }

    /// Rigorous inclusion radii `n |W_i|` (upper bounds).
    fn radii(&self, centers: &[Cf]) -> Option<Vec<Dyadic>> {
        let n = self.degree();
        let wp = self.prec * 2 + 64;
        let lc = Interval::from_int(&self.coeffs[n], wp);
        let lc2 = lc.sqr(wp);
        let nn = BigRational::from_integer(BigInt::from((n * n) as u64));
        let boxes: Vec<CBox> = centers.iter().map(|c| CBox::point(c.re.clone(), c.im.clone())).collect();
        let coeffs: Vec<BigRational> = self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let pv = CBox::eval_poly(&coeffs, &boxes[i], wp).abs_sqr(wp);
            let mut prod = lc2.clone();
            for j in 0..n {
                if j != i {
                    let d = boxes[i].sub(&boxes[j], wp).abs_sqr(wp);
                    prod = prod.mul(&d, wp);
                }
            }
            if !prod.lo.signum().is_positive() {
                return None;
            }
            let r2 = nn.clone() * pv.hi.to_rational() / prod.lo.to_rational();
            out.push(sqrt_up(&r2, self.prec + 16));
        }
        Some(out)
    }

    fn certify(&mut self) -> Option<Vec<CBox>> {
        let n = self.degree();
        let radii = self.radii(&self.approx)?;
        // snap approximations whose disk meets the real axis
        let mut centers = self.approx.clone();
        let mut snapped = vec![false; n];
        for i in 0..n {
            if centers[i].im.abs() <= radii[i] {
                centers[i].im = Dyadic::zero();
                snapped[i] = true;
            }
        }
        let radii = if snapped.iter().any(|&s| s) { self.radii(&centers)? } else { radii };
        // disks pairwise disjoint
        for i in 0..n {
            for j in (i + 1)..n {
                let d = Cf { re: &centers[i].re - &centers[j].re, im: &centers[i].im - &centers[j].im }.norm();
                let s = &radii[i] + &radii[j];
                if d <= &s * &s {
                    return None;
                }
            }
        }
        let boxes: Vec<CBox> = (0..n)
            .map(|i| {
                let r = &radii[i];
                let re = Interval::new(&centers[i].re - r, &centers[i].re + r);
                if snapped[i] {
                    CBox::real(re)
                } else {
                    CBox::new(re, Interval::new(&centers[i].im - r, &centers[i].im + r))
                }
            })
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if boxes[i].intersects(&boxes[j]) {
                    return None;
                }
            }
        }
        for (i, c) in centers.into_iter().enumerate() {
            self.approx[i] = c;
        }
        Some(boxes)
    }
}

/// Pair each old box with the unique new box meeting it; the intersection holds the same root.
fn match_boxes(old: &[CBox], new: &[CBox]) -> Option<Vec<CBox>> {
    let mut out = Vec::with_capacity(old.len());
    let mut used = vec![false; new.len()];
    for o in old {
        let hits: Vec<usize> = (0..new.len()).filter(|&j| new[j].intersects(o)).collect();
        if hits.len() != 1 || used[hits[0]] {
            return None;
        }
        used[hits[0]] = true;
        let nb = &new[hits[0]];
        let re = Interval::new(o.re.lo.clone().max(nb.re.lo.clone()), o.re.hi.clone().min(nb.re.hi.clone()));
        let im = Interval::new(o.im.lo.clone().max(nb.im.lo.clone()), o.im.hi.clone().min(nb.im.hi.clone()));
        out.push(CBox::new(re, im));
    }
    Some(out)
}

/// Isolating boxes for the distinct complex roots of `u`, sorted by real then imaginary part.
pub fn isolate_roots(u: &UniPoly) -> Result<Vec<CBox>> {
    let iso = RootIsolation::new(u)?;
    let mut boxes = iso.boxes().to_vec();
    boxes.sort_by_key(|b| b.sort_key());
    Ok(boxes)
}

/// Index of the unique root box meeting `enclosure`, refining `iso` and
/// re-evaluating `enclosure` (via `reenclose`) until exactly one box meets it.
///
/// `enclosure` must contain a root of the isolated polynomial.
pub fn identify_root<F>(iso: &mut RootIsolation, mut reenclose: F) -> Result<usize>
where
    F: FnMut(u32) -> Result<CBox>,
{
    let mut prec = 64u32;
    loop {
        let enc = reenclose(prec)?;
        let hits: Vec<usize> = (0..iso.boxes().len()).filter(|&j| iso.boxes()[j].intersects(&enc)).collect();
        if hits.len() == 1 {
            return Ok(hits[0]);
        }
        if hits.is_empty() {
            return Err(Error::UncertifiedPoint);
        }
        if prec >= MAX_PRECISION {
            return Err(Error::PrecisionExhausted("identifying an algebraic value".into()));
        }
        prec *= 2;
        let target = iso.boxes().iter().map(|b| b.width()).max().unwrap().mul_pow2(-4);
        let floor = Dyadic::one().mul_pow2(-(prec as i64) / 2);
        iso.refine(&target.max(floor))?;
    }
}

fn contains_box(outer: &CBox, inner: &CBox) -> bool {
    outer.re.lo <= inner.re.lo && inner.re.hi <= outer.re.hi && outer.im.lo <= inner.im.lo && inner.im.hi <= outer.im.hi
}

/// Index of the single root of the isolated polynomial lying in the fixed box `bx`.
///
/// Fails with `NonIsolatingBox` when `bx` holds no root or more than one.
pub fn locate_box(iso: &mut RootIsolation, bx: &CBox) -> Result<usize> {
    loop {
        let hits: Vec<usize> = (0..iso.boxes().len()).filter(|&j| iso.boxes()[j].intersects(bx)).collect();
        if hits.len() == 1 {
            return Ok(hits[0]);
        }
        let inside = hits.iter().filter(|&&j| contains_box(bx, &iso.boxes()[j])).count();
        if hits.is_empty() || inside >= 2 {
            return Err(Error::NonIsolatingBox);
        }
        let target = iso.boxes().iter().map(|b| b.width()).max().unwrap().mul_pow2(-4);
        match iso.refine(&target) {
            Ok(()) => {}
            Err(Error::PrecisionExhausted(_)) => return Err(Error::NonIsolatingBox),
            Err(e) => return Err(e),
        }
    }
}
