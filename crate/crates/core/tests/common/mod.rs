//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's algebra: polynomials are plain term lists, resultants
//! are Sylvester determinants, and numerics use `num-complex`.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Terms = Vec<((u32, u32), i64)>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn qq(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Univariate polynomial, coefficients low to high.
pub type Upoly = Vec<BigRational>;

fn trim(mut a: Upoly) -> Upoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn padd(a: &Upoly, b: &Upoly) -> Upoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()).collect())
}

fn pneg(a: &Upoly) -> Upoly {
    a.iter().map(|c| -c.clone()).collect()
}

fn pmul(a: &Upoly, b: &Upoly) -> Upoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(r)
}

pub fn peval(a: &Upoly, x: &BigRational) -> BigRational {
    a.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Dense determinant of a square matrix with polynomial entries, by cofactor expansion.
fn poly_det(m: &[Vec<Upoly>]) -> Upoly {
    let n = m.len();
    if n == 0 {
        return vec![q(1)];
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Upoly = vec![];
    for j in 0..n {
        if m[0][j].is_empty() {
            continue;
        }
        let minor: Vec<Vec<Upoly>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect()).collect();
        let t = pmul(&m[0][j], &poly_det(&minor));
        acc = if j % 2 == 0 { padd(&acc, &t) } else { padd(&acc, &pneg(&t)) };
    }
    acc
}

/// Coefficients in y (low to high) of a term list, each a polynomial in x.
fn in_y(t: &Terms) -> Vec<Upoly> {
    let dy = t.iter().map(|((_, b), _)| *b as usize).max().unwrap_or(0);
    let mut out = vec![vec![]; dy + 1];
    for &((a, b), c) in t {
        let e = &mut out[b as usize];
        if e.len() <= a as usize {
            e.resize(a as usize + 1, BigRational::zero());
        }
        e[a as usize] += q(c);
    }
    let mut out: Vec<Upoly> = out.into_iter().map(trim).collect();
    while out.last().is_some_and(Vec::is_empty) {
        out.pop();
    }
    out
}

/// `Res_y(f, g)` as a polynomial in x, from the dense Sylvester matrix.
pub fn resultant_y(f: &Terms, g: &Terms) -> Upoly {
    let (a, b) = (in_y(f), in_y(g));
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut mat = vec![vec![vec![]; size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    poly_det(&mat)
}

/// Sylvester determinant of two integer polynomials (low to high) by rational
/// Gaussian elimination.
pub fn sylvester_det(a: &[i64], b: &[i64]) -> BigRational {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return q(1);
    }
    let mut mat = vec![vec![BigRational::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[i][i + j] = q(*c);
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = q(*c);
        }
    }
    let mut det = q(1);
    for k in 0..size {
        let Some(piv) = (k..size).find(|&r| !mat[r][k].is_zero()) else { return BigRational::zero() };
        if piv != k {
            mat.swap(piv, k);
            det = -det;
        }
        det *= &mat[k][k];
        for i in k + 1..size {
            let r = &mat[i][k] / &mat[k][k];
            let pivot_row = mat[k].clone();
            for (e, p) in mat[i].iter_mut().zip(&pivot_row).skip(k) {
                *e -= &r * p;
            }
        }
    }
    det
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = vec![];
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out
}

/// Distinct rational roots, with a flag telling whether they account for the full degree
/// (counting multiplicity), so callers can tell the search was exhaustive.
pub fn rational_roots(p: &Upoly) -> (Vec<BigRational>, bool) {
    let mut p = trim(p.clone());
    if p.is_empty() {
        return (vec![], false);
    }
    let mut roots = vec![];
    let mut accounted = 0;
    let deg = p.len() - 1;
    if p[0].is_zero() {
        roots.push(BigRational::zero());
        while p[0].is_zero() {
            p.remove(0);
            accounted += 1;
        }
    }
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    for a in divisors(&ints[0]) {
        for b in divisors(ints.last().unwrap()) {
            for s in [1, -1] {
                let r = BigRational::new(&a * s, b.clone());
                if roots.contains(&r) || !peval(&p, &r).is_zero() {
                    continue;
                }
                roots.push(r.clone());
                // multiplicity by repeated synthetic division
                let mut cur = p.clone();
                while cur.len() > 1 && peval(&cur, &r).is_zero() {
                    let mut quo = vec![BigRational::zero(); cur.len() - 1];
                    let mut carry = BigRational::zero();
                    for i in (1..cur.len()).rev() {
                        carry = &cur[i] + carry * &r;
                        quo[i - 1] = carry.clone();
                    }
                    cur = quo;
                    accounted += 1;
                }
            }
        }
    }
    roots.sort();
    (roots, accounted == deg)
}

/// Roots of `f(x0, y)` in y, for rational `x0`.
pub fn specialize_x(f: &Terms, x0: &BigRational) -> Upoly {
    let mut out: Upoly = vec![];
    for &((a, b), c) in f {
        let b = b as usize;
        if out.len() <= b {
            out.resize(b + 1, BigRational::zero());
        }
        out[b] += q(c) * pow(x0, a);
    }
    trim(out)
}

pub fn pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(q(1), |acc, _| acc * x)
}

pub fn eval(f: &Terms, x: &BigRational, y: &BigRational) -> BigRational {
    f.iter().map(|&((a, b), c)| q(c) * pow(x, a) * pow(y, b)).sum()
}

/// `q x f_x - p y f_y`, term by term.
pub fn tangency_terms(f: &Terms, p: i64, qq: i64) -> Terms {
    f.iter().map(|&((a, b), c)| ((a, b), c * (qq * a as i64 - p * b as i64))).filter(|t| t.1 != 0).collect()
}

pub fn partial_x(f: &Terms) -> Terms {
    f.iter().filter(|((a, _), _)| *a > 0).map(|&((a, b), c)| ((a - 1, b), c * a as i64)).collect()
}

pub fn partial_y(f: &Terms) -> Terms {
    f.iter().filter(|((_, b), _)| *b > 0).map(|&((a, b), c)| ((a, b - 1), c * b as i64)).collect()
}

/// `x^p y^q - 1` with negative exponents cleared.
pub fn coset_terms(p: i64, qq: i64) -> Terms {
    assert!(qq >= 0);
    if p >= 0 {
        vec![((p as u32, qq as u32), 1), ((0, 0), -1)]
    } else {
        vec![((0, qq as u32), 1), ((-p as u32, 0), -1)]
    }
}

/// Canonical slopes `(p, q)` with `max(|p|, |q|) <= n`: coprime, `q > 0` or `(1, 0)`.
pub fn slopes_up_to(n: i64) -> Vec<(i64, i64)> {
    let mut out = vec![];
    for p in -n..=n {
        for qq in 0..=n {
            if p.gcd(&qq) == 1 && (qq > 0 || p == 1) {
                out.push((p, qq));
            }
        }
    }
    out
}

/// Rational tangency points of `f` with translates of `H_{p,q}` for which
/// `x^p y^q = 1`, from the triple system `(f, g, x^p y^q - 1)`. Panics if the
/// resultant has irrational roots, since the search would not be exhaustive.
pub fn rational_unit_tangencies(f: &Terms, p: i64, qq: i64) -> Vec<(BigRational, BigRational)> {
    let g = tangency_terms(f, p, qq);
    let h = coset_terms(p, qq);
    let r1 = resultant_y(f, &g);
    let r2 = resultant_y(f, &h);
    assert!(!r1.is_empty(), "f and g share a factor at slope ({p},{qq})");
    let (xs, complete) = rational_roots(&r1);
    assert!(complete, "irrational roots at slope ({p},{qq})");
    let (fx, fy) = (partial_x(f), partial_y(f));
    let mut out = vec![];
    for x0 in xs {
        if x0.is_zero() || !peval(&r2, &x0).is_zero() {
            continue;
        }
        let (ys, _) = rational_roots(&specialize_x(f, &x0));
        for y0 in ys {
            let on_all = !y0.is_zero() && eval(&g, &x0, &y0).is_zero() && eval(&h, &x0, &y0).is_zero();
            let smooth = !(eval(&fx, &x0, &y0).is_zero() && eval(&fy, &x0, &y0).is_zero());
            if on_all && smooth {
                out.push((x0.clone(), y0));
            }
        }
    }
    out
}

/// All complex roots by Aberth iteration.
pub fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = c[n];
    let radius = 1.0 + c[..n].iter().map(|z| (z / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(radius * 0.7, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|k| c[k] * k as f64).collect();
    let horner = |p: &[Complex64], x: Complex64| p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a);
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let ratio = horner(&c, z[i]) / horner(&deriv, z[i]);
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Numeric tangency points of `f` with torsion translates `x^p y^q = zeta`,
/// `zeta` of order at most `max_order`, at points where `f` is smooth.
/// Each coset is parametrized by `t -> (a t^q, b t^-p)` and tangencies are
/// multiple roots of the restriction.
pub fn numeric_torsion_tangencies(f: &Terms, p: i64, qq: i64, max_order: u64) -> Vec<(Complex64, Complex64)> {
    let (g, u, v) = ext_gcd(p, qq);
    assert_eq!(g, 1);
    let mut out: Vec<(Complex64, Complex64)> = vec![];
    for n in 1..=max_order as i64 {
        for k in 0..n {
            if k.gcd(&n) != 1 {
                continue;
            }
            let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
            let (a, b) = (zeta.powi(u as i32), zeta.powi(v as i32));
            let exps: Vec<i64> = f.iter().map(|&((i, j), _)| qq * i as i64 - p * j as i64).collect();
            let lo = *exps.iter().min().unwrap();
            let hi = *exps.iter().max().unwrap();
            let mut poly = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
            for (&((i, j), c), e) in f.iter().zip(&exps) {
                poly[(e - lo) as usize] += a.powi(i as i32) * b.powi(j as i32) * c as f64;
            }
            let deriv: Vec<Complex64> = (1..poly.len()).map(|k| poly[k] * k as f64).collect();
            for r in aberth(&deriv) {
                if r.norm() < 1e-9 {
                    continue;
                }
                let scale: f64 = poly.iter().enumerate().map(|(k, c)| c.norm() * r.norm().powi(k as i32)).sum();
                let val = poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * r + c);
                if val.norm() > 1e-9 * scale {
                    continue;
                }
                let x = a * r.powi(qq as i32);
                let y = b * r.powi(-p as i32);
                if is_singular_numeric(f, x, y) {
                    continue;
                }
                if !out.iter().any(|(x1, y1)| (x1 - x).norm() + (y1 - y).norm() < 1e-6) {
                    out.push((x, y));
                }
            }
        }
    }
    out
}

fn is_singular_numeric(f: &Terms, x: Complex64, y: Complex64) -> bool {
    let ev = |t: &Terms| {
        let val: Complex64 = t.iter().map(|&((i, j), c)| x.powi(i as i32) * y.powi(j as i32) * c as f64).sum();
        let scale: f64 = t.iter().map(|&((i, j), c)| x.norm().powi(i as i32) * y.norm().powi(j as i32) * c.abs() as f64).sum();
        val.norm() / scale.max(1.0)
    };
    ev(&partial_x(f)) < 1e-8 && ev(&partial_y(f)) < 1e-8
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// Midpoint of a serialized box `[re_lo, re_hi, im_lo, im_hi]` of dyadics `m*2^e`.
pub fn box_center(v: &serde_json::Value) -> Complex64 {
    let d = |s: &serde_json::Value| {
        let s = s.as_str().expect("dyadic string");
        let (m, e) = s.split_once("*2^").expect("dyadic format");
        m.parse::<f64>().unwrap() * 2f64.powi(e.parse::<i32>().unwrap())
    };
    let a = v.as_array().expect("box array");
    Complex64::new((d(&a[0]) + d(&a[1])) / 2.0, (d(&a[2]) + d(&a[3])) / 2.0)
}

/// Count of distinct complex roots of an integer polynomial: `deg u - deg gcd(u, u')`.
pub fn distinct_root_count(u: &[i64]) -> usize {
    let a: Upoly = trim(u.iter().map(|&c| q(c)).collect());
    let da: Upoly = trim((1..a.len()).map(|k| &a[k] * q(k as i64)).collect());
    let g = pgcd(a.clone(), da);
    a.len() - g.len()
}

fn pgcd(mut a: Upoly, mut b: Upoly) -> Upoly {
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn prem(a: &Upoly, b: &Upoly) -> Upoly {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let c = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &c * bc;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}
