//! Generalized harmonic numbers H_n^(r) and the elementary symmetric
//! functions H(n,k) of 1, 1/2, ..., 1/n.
//!
//! H(n,k) is computed by two genuinely independent algorithms: coefficient
//! extraction from the product (x+1)(x+1/2)...(x+1/n) and recovery from
//! the power sums via the Newton-Girard recurrence. The coefficient DP is
//! the production path (no divisions by k); each algorithm serves as the
//! other's oracle in the test suites.

use num::{BigInt, BigRational, One, Zero};

use crate::stirling;
use crate::Result;

/// Exact H_n^(r) = sum_{i=1}^{n} 1/i^r. With r = 0 this is n; with r = 1
/// the ordinary harmonic number H_n.
///
/// Summed over the common denominator lcm(1..n)^r, one reduction at the
/// end: folding reduced fractions spends almost all its time in per-step
/// gcds once r is large.
pub fn harmonic_power(n: u64, r: u32) -> BigRational {
    if n == 0 {
        return BigRational::zero();
    }
    if r == 0 {
        return BigRational::from_integer(BigInt::from(n));
    }
    let lcm = (1..=n).map(BigInt::from).fold(BigInt::one(), |acc, i| {
        num::integer::lcm(acc, i)
    });
    let mut numerator = BigInt::zero();
    for i in 1..=n {
        numerator += (&lcm / BigInt::from(i)).pow(r);
    }
    BigRational::new(numerator, lcm.pow(r))
}

/// Prefix harmonic numbers H_0 = 0, H_1, ..., H_n in one pass.
pub fn harmonic_numbers_upto(n: u64) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = BigRational::zero();
    out.push(acc.clone());
    for i in 1..=n {
        acc += BigRational::new(BigInt::one(), BigInt::from(i));
        out.push(acc.clone());
    }
    out
}

/// H(n,k) for all k = 0..=kmax by dynamic programming over the product
/// prod_{i=1}^{n} (x + 1/i): after step i, `coeffs[k]` is the k-th
/// elementary symmetric function of 1, 1/2, ..., 1/i.
pub fn elementary_symmetric_prefix(n: u64, kmax: u64) -> Vec<BigRational> {
    let kmax = kmax as usize;
    let mut coeffs = vec![BigRational::zero(); kmax + 1];
    coeffs[0] = BigRational::one();
    for i in 1..=n {
        let inv = BigRational::new(BigInt::one(), BigInt::from(i));
        let top = usize::min(i as usize, kmax);
        for k in (1..=top).rev() {
            let add = &coeffs[k - 1] * &inv;
            coeffs[k] += add;
        }
    }
    coeffs
}

/// H(n,k): the k-th elementary symmetric function of 1, 1/2, ..., 1/n.
/// H(n,0) = 1 and H(n,k) = 0 for k > n.
pub fn elementary_symmetric(n: u64, k: u64) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    elementary_symmetric_prefix(n, k)[k as usize].clone()
}

/// H(n,k) recovered from the power sums S_i = H_n^(i) by the
/// Newton-Girard recurrence k*sigma_k = sum_{i=1}^{k} (-1)^(i-1) S_i sigma_(k-i).
/// The recurrence runs cleared by the common denominator L^j with
/// L = lcm(1..n): the cleared power sums s_i = S_i L^i and symmetric
/// functions c_j = sigma_j L^j are integers, the division by j stays
/// exact, and only the returned value reduces. For k > n the companion
/// Newton identity (the alternating sum over sigma_0..sigma_n vanishing)
/// is evaluated as a consistency check and the result is 0.
pub fn elementary_symmetric_newton(n: u64, k: u64) -> BigRational {
    let top = u64::min(k, n);
    let lcm = (1..=n)
        .map(BigInt::from)
        .fold(BigInt::one(), num::integer::lcm);
    let terms: Vec<BigInt> = (1..=n).map(|i| &lcm / BigInt::from(i)).collect();
    // cleared power sums s_r = sum_i (L/i)^r for r = 1..=max(k,1)
    let mut powers = vec![BigInt::one(); terms.len()];
    let mut power_sums = Vec::with_capacity(k.max(1) as usize);
    for _ in 0..k.max(1) {
        let mut acc = BigInt::zero();
        for (pw, t) in powers.iter_mut().zip(&terms) {
            *pw *= t;
            acc += &*pw;
        }
        power_sums.push(acc);
    }
    let mut cleared = vec![BigInt::one()];
    for j in 1..=top {
        let mut acc = BigInt::zero();
        for i in 1..=j {
            let term = &power_sums[(i - 1) as usize] * &cleared[(j - i) as usize];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = num::Integer::div_rem(&acc, &BigInt::from(j));
        debug_assert!(rem.is_zero(), "Newton-Girard division by {j} must be exact");
        cleared.push(quot);
    }
    if k <= n {
        return BigRational::new(cleared[k as usize].clone(), lcm.pow(k as u32));
    }
    // k > n: sum_{i=0}^{n} (-1)^i S_(k-i) sigma_i = 0 must hold exactly;
    // over the common denominator L^k the numerators alone must cancel
    let mut acc = BigInt::zero();
    for i in 0..=n {
        let term = &power_sums[(k - i - 1) as usize] * &cleared[i as usize];
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    assert!(
        acc.is_zero(),
        "Newton identity tail must vanish for k = {k} > n = {n}"
    );
    BigRational::zero()
}

/// True iff s(n+1, k+1) = n! * H(n,k) holds exactly (the bridge between
/// Stirling numbers and elementary symmetric harmonic values).
pub fn check_stirling_harmonic(n: u64, k: u64) -> Result<bool> {
    let lhs = stirling::stirling1(n + 1, k as i64 + 1)?;
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    let rhs = elementary_symmetric(n, k) * factorial;
    Ok(rhs.is_integer() && rhs.to_integer() == lhs)
}
