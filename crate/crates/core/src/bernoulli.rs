//! Bernoulli numbers as exact rationals, von Staudt-Clausen validation,
//! and regular/irregular prime classification.
//!
//! The generating-function convention x/(e^x - 1) fixes B_1 = -1/2 and
//! B_n = 0 for odd n >= 3. Values are produced by the recurrence
//! sum_{j=0}^{n} C(n+1, j) B_j = 0 with B_0 = 1: exact, O(n^2) rational
//! operations, adequate for the desk-scale index cap.

use std::sync::RwLock;

use num::{BigInt, BigRational, One, Zero};

use crate::padic::{is_prime_u64, vp_rat, Prime, Valuation};
use crate::{Error, Result};

/// Largest Bernoulli index the recurrence will compute.
pub const BERNOULLI_INDEX_CAP: u64 = 2000;

/// Append-only table of B_0, B_1, ..., extended on demand behind a
/// read-write lock: readers run concurrently, extension is single-writer.
#[derive(Debug)]
pub struct BernoulliCache {
    table: RwLock<Vec<BigRational>>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            table: RwLock::new(vec![BigRational::one()]),
        }
    }

    /// Rebuild a cache from stored (index, value) records for even indices
    /// 0, 2, 4, ... in ascending order. Every entry is re-validated against
    /// the von Staudt-Clausen integrality criterion; odd-index values are
    /// filled back in (B_1 = -1/2, zero above).
    pub fn from_even_entries(entries: &[(u64, BigRational)]) -> Result<Self> {
        let mut table: Vec<BigRational> = Vec::new();
        for (pos, (n, value)) in entries.iter().enumerate() {
            let bad = |reason: String| Error::Cache { entry: pos, reason };
            if n % 2 != 0 {
                return Err(bad(format!("index {n} is odd")));
            }
            if *n != 2 * pos as u64 {
                return Err(bad(format!(
                    "index {n} out of order (expected {})",
                    2 * pos
                )));
            }
            if *n > BERNOULLI_INDEX_CAP {
                return Err(bad(format!("index {n} above cap {BERNOULLI_INDEX_CAP}")));
            }
            if *n == 0 {
                if !value.is_one() {
                    return Err(bad("B_0 must be 1".into()));
                }
            } else if !von_staudt_clausen_holds(*n, value) {
                return Err(bad(format!(
                    "B_{n} = {value} fails the von Staudt-Clausen check"
                )));
            }
            table.push(value.clone());
            if *n == 0 {
                table.push(BigRational::new(BigInt::from(-1), BigInt::from(2)));
            } else {
                table.push(BigRational::zero());
            }
        }
        if table.is_empty() {
            return Ok(Self::new());
        }
        table.pop(); // trailing odd slot past the last stored even index
        Ok(BernoulliCache {
            table: RwLock::new(table),
        })
    }

    /// Largest index currently in the table.
    pub fn max_index(&self) -> u64 {
        self.table.read().unwrap().len() as u64 - 1
    }

    /// Extend the table so all B_j with j <= n are present.
    pub fn ensure(&self, n: u64) -> Result<()> {
        if n > BERNOULLI_INDEX_CAP {
            return Err(Error::resource(format!(
                "Bernoulli index {n} above cap {BERNOULLI_INDEX_CAP}"
            )));
        }
        {
            let table = self.table.read().unwrap();
            if (table.len() as u64) > n {
                return Ok(());
            }
        }
        let mut table = self.table.write().unwrap();
        while (table.len() as u64) <= n {
            let m = table.len() as u64;
            // sum_{j=0}^{m-1} C(m+1, j) B_j, then B_m = -sum / (m+1)
            let mut sum = BigRational::zero();
            let mut binom = BigInt::one(); // C(m+1, 0)
            for (j, b) in table.iter().enumerate() {
                if !b.is_zero() {
                    sum += b * &binom;
                }
                // C(m+1, j+1) = C(m+1, j) * (m+1-j) / (j+1)
                binom = binom * (m + 1 - j as u64) / (j as u64 + 1);
            }
            let value = -sum / BigInt::from(m + 1);
            table.push(value);
        }
        Ok(())
    }

    /// B_n, extending the table as needed.
    pub fn get(&self, n: u64) -> Result<BigRational> {
        self.ensure(n)?;
        Ok(self.table.read().unwrap()[n as usize].clone())
    }

    /// The even-index entries (0, B_0), (2, B_2), ... currently stored,
    /// the shape persisted by the CLI cache file.
    pub fn even_entries(&self) -> Vec<(u64, BigRational)> {
        let table = self.table.read().unwrap();
        table
            .iter()
            .enumerate()
            .filter(|(n, _)| n % 2 == 0)
            .map(|(n, b)| (n as u64, b.clone()))
            .collect()
    }
}

/// Uncached one-shot B_n.
pub fn bernoulli(n: u64) -> Result<BigRational> {
    BernoulliCache::new().get(n)
}

/// All primes p with (p-1) | n. The divisors of n are bounded by n, so
/// trial over divisors suffices at desk scale.
fn von_staudt_clausen_primes(n: u64) -> Vec<u64> {
    let mut primes: Vec<u64> = (1..=n)
        .filter(|d| n.is_multiple_of(*d) && is_prime_u64(d + 1))
        .map(|d| d + 1)
        .collect();
    primes.sort_unstable();
    primes
}

fn von_staudt_clausen_holds(n: u64, value: &BigRational) -> bool {
    let mut sum = value.clone();
    for p in von_staudt_clausen_primes(n) {
        sum += BigRational::new(BigInt::one(), BigInt::from(p));
    }
    sum.is_integer()
}

/// True iff B_n + sum_{(p-1) | n} 1/p is an integer (von Staudt-Clausen).
/// Rejects odd n: the theorem concerns even indices.
pub fn check_von_staudt_clausen(cache: &BernoulliCache, n: u64) -> Result<bool> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::parameter(format!(
            "von Staudt-Clausen check requires even n >= 2; got {n}"
        )));
    }
    Ok(von_staudt_clausen_holds(n, &cache.get(n)?))
}

/// v_p(B_l); negative when p divides the denominator, `Infinite` for the
/// zero values at odd l >= 3.
pub fn bernoulli_valuation(cache: &BernoulliCache, p: Prime, l: u64) -> Result<Valuation> {
    Ok(vp_rat(&cache.get(l)?, p))
}

/// True iff v_p(B_l) = 0 for every even l in [2, p-3]; vacuously true for
/// p = 3. Such primes are regular.
pub fn is_regular(cache: &BernoulliCache, p: Prime) -> Result<bool> {
    if !p.is_odd() {
        return Err(Error::parameter("regularity is defined for odd primes"));
    }
    Ok(irregular_indices(cache, p)?.is_empty())
}

/// The even indices l in [2, p-3] with v_p(B_l) >= 1, ascending. Empty
/// exactly for regular primes.
pub fn irregular_indices(cache: &BernoulliCache, p: Prime) -> Result<Vec<u64>> {
    if !p.is_odd() {
        return Err(Error::parameter("regularity is defined for odd primes"));
    }
    let mut out = Vec::new();
    let pv = p.get();
    if pv < 5 {
        return Ok(out); // empty index range; 3 is regular
    }
    for l in (2..=(pv - 3)).step_by(2) {
        if bernoulli_valuation(cache, p, l)? >= Valuation::Finite(1) {
            out.push(l);
        }
    }
    Ok(out)
}
