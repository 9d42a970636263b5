//! Parsing of grid flags: inclusive ranges "lo..hi", single values, and
//! the "max" keyword for a = p - 1 per prime.

use stirling_padic::conjectures::AScope;
use stirling_padic::padic::is_prime_u64;

use crate::CliError;

/// Inclusive integer range; a single value parses as a one-point range.
pub fn parse_range(flag: &str, s: &str) -> Result<(u64, u64), CliError> {
    let parse_one = |part: &str| {
        part.trim()
            .parse::<u64>()
            .map_err(|_| CliError::usage(format!("--{flag}: cannot parse {part:?} as an integer")))
    };
    if let Some((lo, hi)) = s.split_once("..") {
        let lo = parse_one(lo)?;
        let hi = parse_one(hi)?;
        if lo > hi {
            return Err(CliError::usage(format!(
                "--{flag}: empty range {lo}..{hi}"
            )));
        }
        Ok((lo, hi))
    } else {
        let v = parse_one(s)?;
        Ok((v, v))
    }
}

pub fn parse_range_u32(flag: &str, s: &str) -> Result<(u32, u32), CliError> {
    let (lo, hi) = parse_range(flag, s)?;
    let conv = |v: u64| {
        u32::try_from(v).map_err(|_| CliError::usage(format!("--{flag}: {v} is too large")))
    };
    Ok((conv(lo)?, conv(hi)?))
}

/// Primes from the --p flag. A single value must itself be prime; a
/// proper range selects the primes it contains and must be nonempty.
pub fn parse_primes(s: &str) -> Result<Vec<u64>, CliError> {
    let (lo, hi) = parse_range("p", s)?;
    if lo == hi {
        if !is_prime_u64(lo) {
            return Err(CliError::usage(format!("--p: {lo} is not prime")));
        }
        return Ok(vec![lo]);
    }
    let primes: Vec<u64> = (lo..=hi).filter(|&q| is_prime_u64(q)).collect();
    if primes.is_empty() {
        return Err(CliError::usage(format!("--p: no primes in {lo}..{hi}")));
    }
    Ok(primes)
}

/// The --a flag: absent = all of [1, p-1], "max" = p - 1 per prime,
/// otherwise a value or range.
pub fn parse_a_scope(s: Option<&str>) -> Result<AScope, CliError> {
    match s {
        None => Ok(AScope::All),
        Some("max") => Ok(AScope::MaxPerPrime),
        Some(other) => {
            let (lo, hi) = parse_range("a", other)?;
            if lo == 0 {
                return Err(CliError::usage("--a: a must be positive"));
            }
            Ok(AScope::List((lo..=hi).collect()))
        }
    }
}

/// Resolve an AScope against a concrete prime.
pub fn a_values_for(scope: &AScope, p: u64, clamp_below_p: bool) -> Vec<u64> {
    match scope {
        AScope::All => (1..p).collect(),
        AScope::MaxPerPrime => vec![p - 1],
        AScope::List(list) => list
            .iter()
            .copied()
            .filter(|&a| !clamp_below_p || a < p)
            .collect(),
    }
}
