//! Unsigned Stirling numbers of the first kind and their m-shifted
//! variants, in exact big-integer arithmetic.
//!
//! `s(n,k)` is the coefficient of x^k in the rising factorial
//! x(x+1)...(x+n-1); `s_m(n,k)` is the coefficient of x^k in
//! (x+m)(x+m+1)...(x+m+n-1). Two independent computation routes are kept
//! deliberately separate: the triangular recurrence
//! s(n+1,k) = n*s(n,k) + s(n,k-1), and direct expansion of the linear
//! factors ([`rising_factorial_coeffs`]). The expansion is the oracle the
//! test suites check every other route against.

use num::{BigInt, One, Zero};

use crate::{Error, Result};

/// Largest row computed in exact big-integer mode. Rows beyond this hold
/// thousands of multi-thousand-digit entries; callers wanting only
/// valuations should use [`crate::engine`] instead.
pub const EXACT_ROW_LIMIT: u64 = 2000;

/// One full row of unsigned Stirling numbers of the first kind:
/// coefficients `s(n,k)` for k = 0..=n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingRow {
    n: u64,
    coeffs: Vec<BigInt>,
}

impl StirlingRow {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// All coefficients, index k = 0..=n.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `s(n,k)`, zero outside 0..=n.
    pub fn coefficient(&self, k: i64) -> BigInt {
        if k < 0 || k as u64 > self.n {
            BigInt::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }
}

fn check_exact_limit(n: u64) -> Result<()> {
    if n > EXACT_ROW_LIMIT {
        Err(Error::resource(format!(
            "exact Stirling row {n} exceeds the limit {EXACT_ROW_LIMIT}; \
             use the modular valuation path for v_p queries"
        )))
    } else {
        Ok(())
    }
}

/// Row n by the triangular recurrence, updated in place (row 0 is the
/// empty product [1]).
pub(crate) fn raw_row(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 0..n {
        row.push(BigInt::zero());
        // descending k so row[k] and row[k-1] still hold row i values
        for k in (1..row.len()).rev() {
            let carry = row[k - 1].clone();
            row[k] = &row[k] * i + carry;
        }
        row[0] = BigInt::zero();
    }
    row
}

/// Full row of `s(n,k)` values via the triangular recurrence.
pub fn stirling1_row(n: u64) -> Result<StirlingRow> {
    check_exact_limit(n)?;
    Ok(StirlingRow {
        n,
        coeffs: raw_row(n),
    })
}

/// Exact `s(n,k)`; zero when k <= 0 or k > n (with `s(0,0) = 1`).
pub fn stirling1(n: u64, k: i64) -> Result<BigInt> {
    check_exact_limit(n)?;
    Ok(StirlingRow {
        n,
        coeffs: raw_row(n),
    }
    .coefficient(k))
}

/// Coefficients of (x+m)(x+m+1)...(x+m+n-1), index k = 0..=n, by direct
/// polynomial multiplication of the linear factors. Independent of the
/// triangular recurrence; serves as the oracle for both [`stirling1`]
/// (m = 0) and [`m_stirling`].
pub fn rising_factorial_coeffs(n: u64, m: u64) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    for i in 0..n {
        let t = BigInt::from(m + i);
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c * &t;
            next[k + 1] += c;
        }
        coeffs = next;
    }
    coeffs
}

/// `s_m(n,k)` by the binomial expansion
/// s_m(n,k) = sum_{i=k}^{n} s(n,i) * C(i, i-k) * m^(i-k).
/// Zero for k outside 0..=n, consistent with polynomial coefficients.
pub fn m_stirling(m: u64, n: u64, k: i64) -> Result<BigInt> {
    check_exact_limit(n)?;
    if k < 0 || k as u64 > n {
        return Ok(BigInt::zero());
    }
    let k = k as u64;
    let row = raw_row(n);
    let m_big = BigInt::from(m);
    let mut m_pow = BigInt::one();
    let mut sum = BigInt::zero();
    for i in k..=n {
        let binom = num::integer::binomial(BigInt::from(i), BigInt::from(i - k));
        sum += &row[i as usize] * binom * &m_pow;
        m_pow *= &m_big;
    }
    Ok(sum)
}

/// True iff s(m+n,k) = sum_{i=0}^{k} s(m,i) * s_m(n,k-i) holds exactly.
/// The identity is a theorem; a `false` return signals a defect.
pub fn check_convolution(m: u64, n: u64, k: u64) -> Result<bool> {
    check_exact_limit(m + n)?;
    let lhs = StirlingRow {
        n: m + n,
        coeffs: raw_row(m + n),
    }
    .coefficient(k as i64);
    let left_row = raw_row(m);
    let shifted = rising_factorial_coeffs(n, m);
    let mut rhs = BigInt::zero();
    for i in 0..=k {
        if i > m || (k - i) > n {
            continue;
        }
        rhs += &left_row[i as usize] * &shifted[(k - i) as usize];
    }
    Ok(lhs == rhs)
}

/// For n + k odd, checks the alternating identity
/// s(n,k) = (1/2) * sum_{i=k+1}^{n} (-1)^(n-i) n^(i-k) C(i-1, i-k) s(n,i)
/// in exact arithmetic. Rejects n + k even: nothing is asserted there.
pub fn check_parity_identity(n: u64, k: u64) -> Result<bool> {
    if (n + k).is_multiple_of(2) {
        return Err(Error::parameter(format!(
            "parity identity requires n + k odd; got n = {n}, k = {k}"
        )));
    }
    check_exact_limit(n)?;
    let row = raw_row(n);
    let n_big = BigInt::from(n);
    let mut sum = BigInt::zero();
    for i in (k + 1)..=n {
        let term = n_big.pow((i - k) as u32)
            * num::integer::binomial(BigInt::from(i - 1), BigInt::from(i - k))
            * &row[i as usize];
        if (n - i).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let target = if k > n {
        BigInt::zero()
    } else {
        row[k as usize].clone()
    };
    Ok(sum == &target * 2)
}
