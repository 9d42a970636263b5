//! Verification of the congruence lemmas: harmonic scaling and shifting,
//! Washington's power-sum congruences, their elementary-symmetric
//! counterparts, the prime-row bounds, and the shifted-Stirling
//! congruences modulo p^{2n}.

use num::{BigInt, BigRational, Integer, One, Zero};

use crate::bernoulli::BernoulliCache;
use crate::harmonic::{elementary_symmetric_prefix, harmonic_numbers_upto, harmonic_power};
use crate::padic::{epsilon, vp_int, vp_rat, Prime, Valuation};
use crate::stirling::{rising_factorial_coeffs, stirling1_row};
use crate::verification::{congruence_record, CheckRecord, ParamSet, Prediction};
use crate::{Error, Result};

fn require_p5(p: Prime) -> Result<()> {
    if p.get() >= 5 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("p = {p} must be at least 5")))
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Scaling and shifting congruences for harmonic numbers:
/// H_{np} = (1/p) H_n (mod p^2) and H_{np+k} = H_{np} + H_k (mod p)
/// for 1 <= n <= n_max, 1 <= k <= p-1.
pub fn verify_boyd(p: Prime, n_max: u64) -> Result<Vec<CheckRecord>> {
    require_p5(p)?;
    if n_max == 0 {
        return Err(Error::parameter("n_max must be positive"));
    }
    let pv = p.get();
    let harmonic = harmonic_numbers_upto(n_max * pv + pv - 1);
    let p_rat = BigRational::from_integer(BigInt::from(pv));
    let mut records = Vec::new();
    for n in 1..=n_max {
        let scaled = &harmonic[(n * pv) as usize];
        records.push(congruence_record(
            "boyd_scaling",
            ParamSet::p(p).with_n(n),
            scaled,
            &(&harmonic[n as usize] / &p_rat),
            p,
            2,
        ));
        for k in 1..pv {
            let lhs = &harmonic[(n * pv + k) as usize];
            let rhs = scaled + &harmonic[k as usize];
            records.push(congruence_record(
                "boyd_shift",
                ParamSet::p(p).with_n(n).with_k(k as i64),
                lhs,
                &rhs,
                p,
                1,
            ));
        }
    }
    Ok(records)
}

/// Washington's congruences for the power sums H_{p-1}^(r): against
/// -r(r+1)/(2(r+2)) B_{p-r-2} p^2 (mod p^3) for odd r, and
/// r/(r+1) B_{p-r-1} p (mod p^2) for even r, plus the valuation bound
/// v_p(H_{p-1}^(r)) >= 1 + eps_r with its Bernoulli equality condition.
/// The order r is carried in the k parameter slot.
pub fn verify_washington(cache: &BernoulliCache, p: Prime) -> Result<Vec<CheckRecord>> {
    require_p5(p)?;
    let pv = p.get();
    let p_sq = rat((pv * pv) as i64, 1);
    let p_rat = rat(pv as i64, 1);
    let mut records = Vec::new();
    for r in 1..=(pv - 3) {
        let power_sum = harmonic_power(pv - 1, r as u32);
        let params = ParamSet::p(p).with_k(r as i64);
        if r % 2 == 1 && pv >= r + 4 {
            let factor = -rat((r * (r + 1)) as i64, (2 * (r + 2)) as i64);
            let rhs = factor * cache.get(pv - r - 2)? * &p_sq;
            records.push(congruence_record(
                "washington_odd",
                params,
                &power_sum,
                &rhs,
                p,
                3,
            ));
        } else if r % 2 == 0 && pv >= r + 3 {
            let factor = rat(r as i64, (r + 1) as i64);
            let rhs = factor * cache.get(pv - r - 1)? * &p_rat;
            records.push(congruence_record(
                "washington_even",
                params,
                &power_sum,
                &rhs,
                p,
                2,
            ));
        }
        // v_p(H_{p-1}^(r)) >= 1 + eps_r, equality iff the companion
        // Bernoulli number is a p-adic unit
        let prediction = Prediction::AtLeastWithEquality {
            base: 1 + epsilon(r) as i64,
            p: pv,
            bernoulli_index: pv - 1 - 2 * r.div_ceil(2),
        };
        let actual = vp_rat(&power_sum, p);
        let pass = prediction.check(actual, cache)?;
        records.push(CheckRecord::new(
            "harmonic_power_bound",
            params,
            &prediction,
            actual,
            pass,
        ));
    }
    Ok(records)
}

/// The elementary-symmetric counterparts: H(p-1,r) against
/// +-(1/r) H_{p-1}^(r) and against the Bernoulli closed forms, both
/// parities, over their stated r ranges. The order r is carried in the
/// k parameter slot.
pub fn verify_hp_symmetric(cache: &BernoulliCache, p: Prime) -> Result<Vec<CheckRecord>> {
    require_p5(p)?;
    let pv = p.get();
    let sigma = elementary_symmetric_prefix(pv - 1, pv - 1);
    let p_sq = rat((pv * pv) as i64, 1);
    let p_rat = rat(pv as i64, 1);
    let mut records = Vec::new();
    for r in 1..=(pv - 3) {
        let value = &sigma[r as usize];
        let power_sum = harmonic_power(pv - 1, r as u32);
        let params = ParamSet::p(p).with_k(r as i64);
        if r % 2 == 1 && pv >= r + 4 {
            records.push(congruence_record(
                "symmetric_power_odd",
                params,
                value,
                &(&power_sum / BigInt::from(r)),
                p,
                3,
            ));
            let rhs = -rat((r + 1) as i64, (2 * (r + 2)) as i64) * cache.get(pv - r - 2)? * &p_sq;
            records.push(congruence_record(
                "symmetric_bernoulli_odd",
                params,
                value,
                &rhs,
                p,
                3,
            ));
        } else if r % 2 == 0 && pv >= r + 3 {
            records.push(congruence_record(
                "symmetric_power_even",
                params,
                value,
                &-(&power_sum / BigInt::from(r)),
                p,
                2,
            ));
            let rhs = -rat(1, (r + 1) as i64) * cache.get(pv - r - 1)? * &p_rat;
            records.push(congruence_record(
                "symmetric_bernoulli_even",
                params,
                value,
                &rhs,
                p,
                2,
            ));
        }
    }
    Ok(records)
}

/// Row p of the Stirling triangle: boundary valuations (0 at k = 1 and
/// k = p, 1 at k = p-1), the bound v_p(s(p,k)) >= 1 + eps_{k-1} with its
/// Bernoulli equality condition on the interior, divisibility of s(p,k)
/// by p for 2 <= k <= p-1, and Wilson's congruence (p-1)! = -1 (mod p).
pub fn verify_stirling_p_row(cache: &BernoulliCache, p: Prime) -> Result<Vec<CheckRecord>> {
    require_p5(p)?;
    let pv = p.get();
    let row = stirling1_row(pv)?;
    let coeffs = row.coefficients();
    let mut records = Vec::new();

    for (k, expected) in [(1, 0), (pv - 1, 1), (pv, 0)] {
        let actual = vp_int(&coeffs[k as usize], p);
        records.push(CheckRecord::new(
            "prow_boundary",
            ParamSet::p(p).with_k(k as i64),
            Prediction::Exact(Valuation::Finite(expected)),
            actual,
            actual == Valuation::Finite(expected),
        ));
    }
    for k in 2..=(pv - 2) {
        let prediction = Prediction::AtLeastWithEquality {
            base: 1 + epsilon(k - 1) as i64,
            p: pv,
            bernoulli_index: pv - 1 - 2 * (k / 2),
        };
        let actual = vp_int(&coeffs[k as usize], p);
        let pass = prediction.check(actual, cache)?;
        records.push(CheckRecord::new(
            "prow_bound",
            ParamSet::p(p).with_k(k as i64),
            &prediction,
            actual,
            pass,
        ));
    }
    let p_big = BigInt::from(pv);
    for k in 2..=(pv - 1) {
        let pass = (&coeffs[k as usize] % &p_big).is_zero();
        records.push(CheckRecord::new(
            "prow_vanish",
            ParamSet::p(p).with_k(k as i64),
            "congruent to 0 mod p",
            pass,
            pass,
        ));
    }
    // s(p,1) = (p-1)! = -1 (mod p)
    let wilson = ((&coeffs[1] + BigInt::one()) % &p_big).is_zero();
    records.push(CheckRecord::new(
        "wilson",
        ParamSet::p(p),
        "(p-1)! congruent to -1 mod p",
        wilson,
        wilson,
    ));
    Ok(records)
}

/// Exact-mode feasibility bound for the shifted-congruence suite: rows
/// hold ap^n entries of roughly ap^n * log(ap^n) bits.
pub const SHIFTED_EXACT_LIMIT: u64 = 400;

/// Shifted Stirling numbers with shift m = p^n against the plain ones on
/// row ap^n: v_p(s_{p^n}(ap^n, ap^n - k)) >= n for odd k, and
/// s_{p^n}(ap^n, ap^n-k) = s(ap^n, ap^n-k) (mod p^{2n}) for even k.
pub fn verify_shifted_congruence(p: Prime, a: u64, n: u32) -> Result<Vec<CheckRecord>> {
    require_p5(p)?;
    if a == 0 || a.gcd(&p.get()) != 1 {
        return Err(Error::Parameter(format!(
            "a = {a} must be positive and coprime to p = {p}"
        )));
    }
    let shift = p.get().pow(n);
    let row_n = a * shift;
    if row_n > SHIFTED_EXACT_LIMIT {
        return Err(Error::resource(format!(
            "ap^n = {row_n} exceeds the exact-mode limit {SHIFTED_EXACT_LIMIT}"
        )));
    }
    let plain = stirling1_row(row_n)?;
    let shifted = rising_factorial_coeffs(row_n, shift);
    let modulus = BigInt::from(p.get()).pow(2 * n);
    let mut records = Vec::new();
    for k in 0..=row_n {
        let col = (row_n - k) as usize;
        let params = ParamSet::p(p).with_a(a).with_n(n as u64).with_k(k as i64);
        if k % 2 == 1 {
            let actual = vp_int(&shifted[col], p);
            let bound = Valuation::Finite(n as i64);
            records.push(CheckRecord::new(
                "shifted_odd_valuation",
                params,
                Prediction::AtLeast(bound),
                actual,
                actual >= bound,
            ));
        } else {
            let diff = &shifted[col] - &plain.coefficients()[col];
            let pass = (diff % &modulus).is_zero();
            records.push(CheckRecord::new(
                "shifted_even_congruence",
                params,
                format!("congruent mod {p}^{}", 2 * n),
                pass,
                pass,
            ));
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn boyd_small() {
        let records = verify_boyd(prime(5), 3).unwrap();
        assert_eq!(records.len(), 3 * 5); // 1 scaling + 4 shifts per n
        assert!(records.iter().all(CheckRecord::passed));
        assert!(verify_boyd(prime(3), 3).is_err());
    }

    #[test]
    fn washington_golden_cells() {
        let cache = BernoulliCache::new();
        let records = verify_washington(&cache, prime(7)).unwrap();
        assert!(records.iter().all(CheckRecord::passed));
        // odd r=1 and r=3, even r=2 and r=4, bound for r in 1..=4
        assert_eq!(
            records
                .iter()
                .filter(|r| r.check_id == "washington_odd")
                .count(),
            2
        );
        assert_eq!(
            records
                .iter()
                .filter(|r| r.check_id == "washington_even")
                .count(),
            2
        );
        assert_eq!(
            records
                .iter()
                .filter(|r| r.check_id == "harmonic_power_bound")
                .count(),
            4
        );
    }

    #[test]
    fn symmetric_small() {
        let cache = BernoulliCache::new();
        for p in [5u64, 7, 11] {
            let records = verify_hp_symmetric(&cache, prime(p)).unwrap();
            assert!(records.iter().all(CheckRecord::passed), "p = {p}");
        }
    }

    #[test]
    fn prime_row_small() {
        let cache = BernoulliCache::new();
        for p in [5u64, 7, 13] {
            let records = verify_stirling_p_row(&cache, prime(p)).unwrap();
            assert!(records.iter().all(CheckRecord::passed), "p = {p}");
        }
    }

    #[test]
    fn shifted_small() {
        let records = verify_shifted_congruence(prime(5), 1, 1).unwrap();
        assert_eq!(records.len(), 6);
        assert!(records.iter().all(CheckRecord::passed));
        assert!(verify_shifted_congruence(prime(5), 5, 1).is_err());
        assert!(matches!(
            verify_shifted_congruence(prime(5), 1, 4),
            Err(Error::Resource(_))
        ));
    }
}
