//! Dyadic rationals `m * 2^e` with explicit rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

/// Exact value `mant * 2^exp`, kept with an odd mantissa (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// Nearest dyadic with a 53-bit mantissa; only used for initial guesses.
    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || !v.is_finite() {
            return Dyadic::zero();
        }
        let (m, e) = frexp(v);
        let scaled = (m * (1u64 << 53) as f64) as i64;
        Dyadic::new(BigInt::from(scaled), e as i64 - 53)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `floor(log2 |self|)`, or `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round to at most `prec` mantissa bits.
    pub fn round(&self, prec: u32, mode: Rounding) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = shift_round(&self.mant, shift, mode);
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Round so that the value is a multiple of `2^min_exp`.
    pub fn round_to_exp(&self, min_exp: i64, mode: Rounding) -> Self {
        if self.exp >= min_exp || self.is_zero() {
            return self.clone();
        }
        let shift = (min_exp - self.exp) as u64;
        Dyadic::new(shift_round(&self.mant, shift, mode), min_exp)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Round a rational to `prec` significant bits.
    pub fn from_rational(r: &BigRational, prec: u32, mode: Rounding) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let num = r.numer();
        let den = r.denom();
        // choose k with |num * 2^k / den| having about prec bits
        let k = prec as i64 + den.bits() as i64 - num.bits() as i64 + 1;
        let (n, d) = if k >= 0 {
            (num << k as usize, den.clone())
        } else {
            (num.clone(), den << (-k) as usize)
        };
        let (q, rem) = n.div_mod_floor(&d);
        let q = if rem.is_zero() {
            q
        } else {
            match mode {
                Rounding::Down => q,
                Rounding::Up => q + 1,
                Rounding::Nearest => {
                    if (&rem << 1usize) >= d {
                        q + 1
                    } else {
                        q
                    }
                }
            }
        };
        Dyadic::new(q, -k).round(prec, mode)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mant >> shift as usize).to_f64().unwrap_or(0.0);
        m * 2f64.powi((self.exp + shift).clamp(-1100, 1100) as i32)
    }

    /// Approximate quotient with `prec` bits.
    pub fn div_approx(&self, other: &Dyadic, prec: u32) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2;
        let shift = shift.max(0);
        let n = &self.mant << shift as usize;
        let q = n / &other.mant;
        Dyadic::new(q, self.exp - other.exp - shift).round(prec, Rounding::Nearest)
    }

    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).mul_pow2(-1)
    }
}

fn shift_round(m: &BigInt, shift: u64, mode: Rounding) -> BigInt {
    // floor division by 2^shift
    let floor = m >> shift as usize;
    let exact = (&floor << shift as usize) == *m;
    if exact {
        return floor;
    }
    match mode {
        Rounding::Down => floor,
        Rounding::Up => floor + 1,
        Rounding::Nearest => {
            let half = BigInt::one() << (shift as usize - 1);
            let rem = m - (&floor << shift as usize);
            if rem >= half {
                floor + 1
            } else {
                floor
            }
        }
    }
}

fn frexp(v: f64) -> (f64, i32) {
    let bits = v.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    if exp == 0 {
        let (m, e) = frexp(v * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = exp - 1022;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, e)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s1 = self.signum();
        let s2 = other.signum();
        if s1 != s2 {
            return s1.cmp(&s2);
        }
        if s1 == 0 {
            return Ordering::Equal;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &rhs.mant << (rhs.exp - e) as usize;
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl std::str::FromStr for Dyadic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (m, e) = s.split_once("*2^").ok_or_else(|| format!("not a dyadic: {s}"))?;
        let mant: BigInt = m.trim().parse().map_err(|_| format!("bad mantissa in {s}"))?;
        let exp: i64 = e.trim().parse().map_err(|_| format!("bad exponent in {s}"))?;
        Ok(Dyadic::new(mant, exp))
    }
}
