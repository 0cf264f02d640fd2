//! Exact and certified numeric substrate.

pub mod dyadic;
pub mod interval;

pub use dyadic::{Dyadic, Rounding};
pub use interval::{ln_interval, ln_rational, CBox, Interval};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators.
pub fn denom_lcm<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Gcd of the numerators (nonnegative).
pub fn numer_gcd<'a, I: IntoIterator<Item = &'a BigInt>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, n| acc.gcd(n))
}

/// Scale a rational vector to coprime integers; the sign is left unchanged.
pub fn to_coprime_integers(v: &[Rational]) -> Vec<BigInt> {
    let l = denom_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|r| (r * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = numer_gcd(ints.iter());
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|n| n / &g).collect()
}

/// Canonical decimal/fraction text of a rational, `"p/q"` or `"p"`.
pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn abs_max(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}
