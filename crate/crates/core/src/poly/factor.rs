//! Factorization of squarefree integer polynomials (Zassenhaus).
//!
//! Modular factorization by distinct- and equal-degree splitting over a
//! small prime, linear Hensel lifting to a modulus above the Mignotte bound,
//! and exhaustive recombination of the lifted factors.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::uni::UniPoly;

type ModPoly = Vec<u64>;

fn trim(v: &mut ModPoly) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn mp_sub(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    let mut v: ModPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut v);
    v
}

fn mp_mul(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut v);
    v
}

fn mp_divrem(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = mulmod(r[k + db], inv, p);
        if c == 0 {
            continue;
        }
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mulmod(c, bj, p)) % p;
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn mp_monic(a: &ModPoly, p: u64) -> ModPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&c| mulmod(c, inv, p)).collect()
        }
    }
}

fn mp_gcd(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = mp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    mp_monic(&a, p)
}

/// `(g, s, t)` with `s a + t b = g`, `g` monic.
fn mp_ext_gcd(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = mp_divrem(&r0, &r1, p);
        let s2 = mp_sub(&s0, &mp_mul(&q, &s1, p), p);
        let t2 = mp_sub(&t0, &mp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &ModPoly| v.iter().map(|&c| mulmod(c, inv, p)).collect::<ModPoly>();
    (sc(&r0), sc(&s0), sc(&t0))
}

fn mp_powmod(base: &ModPoly, e: &BigUint, m: &ModPoly, p: u64) -> ModPoly {
    let mut result: ModPoly = vec![1];
    let b = mp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        result = mp_divrem(&mp_mul(&result, &result, p), m, p).1;
        if e.bit(i) {
            result = mp_divrem(&mp_mul(&result, &b, p), m, p).1;
        }
    }
    result
}

fn mp_derivative(a: &ModPoly, p: u64) -> ModPoly {
    let mut v: ModPoly = a.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect();
    trim(&mut v);
    v
}

fn reduce(a: &[BigInt], p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    let mut v: ModPoly = a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    trim(&mut v);
    v
}

/// Distinct-degree then equal-degree splitting of a monic squarefree polynomial.
fn factor_mod_p(f: &ModPoly, p: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: ModPoly = vec![0, 1];
    let mut h = x.clone();
    let pu = BigUint::from(p);
    let mut d = 1usize;
    while rest.len() > 1 && 2 * d < rest.len() {
        h = mp_powmod(&h, &pu, &rest, p);
        let g = mp_gcd(&mp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            equal_degree(&g, d, p, rng, &mut out);
            rest = mp_divrem(&rest, &g, p).0;
            h = mp_divrem(&h, &rest, p).1;
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push(mp_monic(&rest, p));
    }
    out
}

fn equal_degree(f: &ModPoly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<ModPoly>) {
    let n = f.len() - 1;
    if n == d {
        out.push(mp_monic(f, p));
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: ModPoly = {
            let mut v: ModPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
            trim(&mut v);
            v
        };
        if a.len() < 2 {
            continue;
        }
        let b = mp_sub(&mp_powmod(&a, &e, f, p), &vec![1], p);
        let g = mp_gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let q = mp_divrem(f, &g, p).0;
            equal_degree(&g, d, p, rng, out);
            equal_degree(&q, d, p, rng, out);
            return;
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

// ---- integer polynomials modulo p^k, symmetric representation helpers ----

fn zmod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    zmod(&v, m)
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    zmod(&v, m)
}

fn lift(m: &ModPoly) -> Vec<BigInt> {
    m.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift `f = g h (mod p)` with `g`, `h` monic to `f = G H (mod p^k)`; `f` monic mod p^k.
fn hensel_pair(f: &[BigInt], g: &ModPoly, h: &ModPoly, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (one, s, t) = mp_ext_gcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut gg = lift(g);
    let mut hh = lift(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let pj1 = &pj * &pb;
        let diff = zsub(f, &zmul(&gg, &hh, &pj1), &pj1);
        // e = diff / p^j mod p
        let e: ModPoly = {
            let mut v: ModPoly = diff.iter().map(|c| (c / &pj).mod_floor(&pb).to_u64().unwrap()).collect();
            trim(&mut v);
            v
        };
        if !e.is_empty() {
            let es = mp_mul(&e, &s, p);
            let (q, sigma) = mp_divrem(&es, h, p);
            let et = mp_mul(&e, &t, p);
            let qg = mp_mul(&q, g, p);
            let tau = {
                let n = et.len().max(qg.len());
                let mut v: ModPoly = (0..n)
                    .map(|i| (et.get(i).copied().unwrap_or(0) + qg.get(i).copied().unwrap_or(0)) % p)
                    .collect();
                trim(&mut v);
                v
            };
            let add = |base: &mut Vec<BigInt>, corr: &ModPoly| {
                if base.len() < corr.len() {
                    base.resize(corr.len(), BigInt::zero());
                }
                for (i, &c) in corr.iter().enumerate() {
                    base[i] += &pj * BigInt::from(c);
                }
            };
            add(&mut gg, &tau);
            add(&mut hh, &sigma);
        }
        pj = pj1;
    }
    (zmod(&gg, &pj), zmod(&hh, &pj))
}

/// Lift all modular factors of monic `f` (mod p^k).
fn hensel_multi(f: &[BigInt], factors: &[ModPoly], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        return vec![f.to_vec()];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[ModPoly]| fs.iter().fold(vec![1u64], |acc, g| mp_mul(&acc, g, p));
    let g = prod(&factors[..mid]);
    let h = prod(&factors[mid..]);
    let (gl, hl) = hensel_pair(f, &g, &h, p, k);
    let mut out = hensel_multi(&gl, &factors[..mid], p, k);
    out.extend(hensel_multi(&hl, &factors[mid..], p, k));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m >> 1usize;
    a.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let c = content(a);
    let mut v: Vec<BigInt> = a.iter().map(|x| x / &c).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if v.last().is_some_and(|c| c.is_negative()) {
        v.iter_mut().for_each(|c| *c = -c.clone());
    }
    v
}

/// Exact quotient over the integers, if it exists.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    let lb = &b[db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(q)
    } else {
        None
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn factor_primitive_squarefree(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    // choose among a few good primes the one with fewest modular factors
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    let mut cand = 1_000_003u64;
    while tried < 5 {
        cand += 2;
        if !is_prime(cand) {
            continue;
        }
        let p = cand;
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce(f, p);
        if fp.len() != f.len() {
            continue;
        }
        let g = mp_gcd(&fp, &mp_derivative(&fp, p), p);
        if g.len() > 1 {
            continue;
        }
        tried += 1;
        let facs = factor_mod_p(&mp_monic(&fp, p), p, &mut rng);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        if best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    let (p, modfacs) = best.expect("no suitable prime");
    if modfacs.len() == 1 {
        return vec![f.to_vec()];
    }
    // bound on coefficients of lc * (any factor scaled to leading coefficient lc)
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    let bound = (BigInt::one() << n) * &norm * lc.abs() * 2 + 1;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= bound {
        m *= &pb;
        k += 1;
    }
    // monic version of f modulo p^k
    let lc_inv = lc.modinv(&m).expect("lc invertible mod p^k");
    let fmonic: Vec<BigInt> = zmod(&f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), &m);
    let lifted = hensel_multi(&fmonic, &modfacs, p, k);

    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut fcur = f.to_vec();
    let mut result = Vec::new();
    let mut s = 1usize;
    while 2 * s <= remaining.len() {
        let mut found = false;
        let lcur = fcur.last().unwrap().clone();
        for subset in subsets(remaining.len(), s) {
            let mut cand = vec![lcur.clone()];
            for &i in &subset {
                cand = zmul(&cand, &remaining[i], &m);
            }
            let cand = primitive(&symmetric(&cand, &m));
            if let Some(q) = zdiv_exact(&fcur, &cand) {
                result.push(cand);
                fcur = q;
                let keep: Vec<Vec<BigInt>> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                remaining = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    result.push(primitive(&fcur));
    result
}

/// Distinct irreducible factors of a nonzero polynomial, primitive with positive leading coefficient.
///
/// Multiplicities are discarded. Results are sorted by degree, then coefficients.
pub fn irreducible_factors(u: &UniPoly) -> Vec<UniPoly> {
    assert!(!u.is_zero(), "factoring the zero polynomial");
    if u.is_constant() {
        return Vec::new();
    }
    let sf = u.squarefree_part();
    let var = u.var();
    let mut out: Vec<UniPoly> = Vec::new();
    let mut ints = sf.integer_coeffs();
    // peel off the factor t
    if ints[0].is_zero() {
        out.push(UniPoly::from_ints(var, &[0, 1]));
        ints.remove(0);
    }
    if ints.len() > 1 {
        for f in factor_primitive_squarefree(&primitive(&ints)) {
            out.push(UniPoly::from_bigints(var, &f));
        }
    }
    out.sort_by(|a, b| a.deg0().cmp(&b.deg0()).then_with(|| a.integer_coeffs().cmp(&b.integer_coeffs())));
    out
}

/// True iff `u` is irreducible over the rationals (nonconstant).
pub fn is_irreducible(u: &UniPoly) -> bool {
    !u.is_constant() && u.is_squarefree() && irreducible_factors(u).len() == 1
}
