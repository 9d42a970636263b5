//! p-adic primitives: valuations, base-p digit sums, the residue bracket
//! `<k>` modulo `p-1`, the parity flag `eps_k`, and rational congruences
//! modulo prime powers.

use std::fmt;
use std::ops::Add;

use num::{BigInt, BigRational, Signed, Zero};

use crate::{Error, Result};

/// A prime modulus, validated once at construction.
///
/// All valuation functions take a `Prime` instead of a raw integer so the
/// primality check happens exactly once at the API boundary. The test is
/// deterministic Miller-Rabin, exact for every input below 2^64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::parameter(format!("{p} is not a prime (p >= 2 required)")));
        }
        if !is_prime_u64(p) {
            return Err(Error::parameter(format!("{p} is not prime")));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Deterministic Miller-Rabin for u64. The base set is exact for all
/// inputs below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// A p-adic valuation: a (possibly negative) integer, or `Infinite` for the
/// valuation of zero.
///
/// One signed-or-infinite type serves both the nonnegative integer case and
/// the rational case, so that quantities like `v_p(H(n,k))` (which go
/// negative) and `v_p(0)` compare totally against theorem bounds.
/// `Infinite` absorbs under addition and dominates the ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// The finite value, or `None` for `Infinite`.
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn expect_finite(self, what: &str) -> i64 {
        self.finite()
            .unwrap_or_else(|| panic!("expected finite valuation for {what}"))
    }
}

impl From<i64> for Valuation {
    fn from(v: i64) -> Self {
        Valuation::Finite(v)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Add<i64> for Valuation {
    type Output = Valuation;
    fn add(self, rhs: i64) -> Valuation {
        self + Valuation::Finite(rhs)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => v.fmt(f),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// v_p(x) for an arbitrary-precision integer: the largest r with p^r | x.
/// The sign of x is ignored; `vp_int(0, p)` is `Infinite`.
pub fn vp_int(x: &BigInt, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p_big = BigInt::from(p.get());
    let mut rest = x.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = num::Integer::div_rem(&rest, &p_big);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        rest = q;
        v += 1;
    }
}

/// v_p of a machine-word integer.
pub fn vp_u64(x: u64, p: Prime) -> Valuation {
    if x == 0 {
        return Valuation::Infinite;
    }
    let p = p.get();
    let mut rest = x;
    let mut v = 0i64;
    while rest.is_multiple_of(p) {
        rest /= p;
        v += 1;
    }
    Valuation::Finite(v)
}

/// v_p extended to rationals: v_p(numerator) - v_p(denominator). May be
/// negative; `Infinite` exactly for q = 0.
pub fn vp_rat(q: &BigRational, p: Prime) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let vn = vp_int(q.numer(), p).expect_finite("nonzero numerator");
    let vd = vp_int(q.denom(), p).expect_finite("nonzero denominator");
    Valuation::Finite(vn - vd)
}

/// Sum of the base-p digits of n.
pub fn digit_sum(n: u64, p: Prime) -> u64 {
    let p = p.get();
    let mut n = n;
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// v_p(n!) by Legendre's formula (n - d_p(n)) / (p - 1).
pub fn vp_factorial(n: u64, p: Prime) -> u64 {
    (n - digit_sum(n, p)) / (p.get() - 1)
}

/// The unique `<k>` with 0 <= `<k>` <= p-2 and k = `<k>` (mod p-1).
/// Rejected for p = 2, where the bracket is degenerate.
pub fn bracket(k: u64, p: Prime) -> Result<u64> {
    if p.get() == 2 {
        return Err(Error::parameter("bracket is undefined for p = 2"));
    }
    Ok(k % (p.get() - 1))
}

/// Parity flag: 1 for odd k, 0 for even k.
pub fn epsilon(k: u64) -> u64 {
    k % 2
}

/// True iff x = y (mod p^e) in the rational sense, i.e. v_p(x - y) >= e.
pub fn congruent_mod_ppow(x: &BigRational, y: &BigRational, p: Prime, e: u32) -> bool {
    vp_rat(&(x - y), p) >= Valuation::Finite(e as i64)
}
