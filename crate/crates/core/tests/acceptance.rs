//! Acceptance suite: every release criterion as one test, each printing a
//! pass line with its grid size and elapsed time. All grids run at full
//! stated scale; the valuation results are theorems, so any failing
//! record is an implementation defect.

use std::time::Instant;

use num::rational::Ratio;
use num::BigInt;
use stirling_padic::bernoulli::{
    check_von_staudt_clausen, irregular_indices, BernoulliCache,
};
use stirling_padic::conjectures::{
    conjecture1_predict, sweep, AScope, ConjecturePrediction, SweepGrid,
};
use stirling_padic::engine::{stirling1_row_valuations, stirling1_valuation};
use stirling_padic::harmonic::{elementary_symmetric, harmonic_power};
use stirling_padic::padic::{congruent_mod_ppow, vp_int, vp_rat};
use stirling_padic::stirling::{
    check_convolution, check_parity_identity, m_stirling, rising_factorial_coeffs, stirling1_row,
};
use stirling_padic::verification::{
    theorem1_predict, verify_boyd, verify_even_step, verify_hp_symmetric, verify_odd_step,
    verify_shifted_congruence, verify_stirling_p_row, verify_theorem1, verify_theorem2,
    verify_washington, CheckRecord, Prediction, Status,
};
use stirling_padic::{Prime, Valuation};

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn rat(n: i64, d: i64) -> Ratio<BigInt> {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

fn assert_all_pass(records: &[CheckRecord], label: &str) {
    for r in records {
        assert_eq!(
            r.status,
            Status::Pass,
            "{label}: {} {:?} predicted {} actual {}",
            r.check_id,
            r.params,
            r.predicted,
            r.actual
        );
    }
}

#[test]
fn criterion_1_theorem1_exhaustive() {
    let started = Instant::now();
    let cache = BernoulliCache::new();
    let mut cells = 0usize;
    for p in [5u64, 7, 11, 13] {
        for a in 1..p {
            let records = verify_theorem1(&cache, prime(p), a).unwrap();
            cells += records.len();
            assert_all_pass(&records, "theorem1");
        }
    }
    // spot vector: v_5 of s(10, j) for j = 1..10
    let row10 = stirling1_row_valuations(10, prime(5));
    let spot: Vec<i64> = (1..=10).map(|j| row10[j].finite().unwrap()).collect();
    assert_eq!(spot, vec![1, 0, 2, 1, 2, 0, 2, 1, 1, 0]);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "budget exceeded: {elapsed:?}");
    println!("acceptance criterion 1 (theorem1 exhaustive, {cells} cells): pass in {elapsed:?}");
}

#[test]
fn criterion_2_theorem2_dichotomy() {
    let started = Instant::now();
    let mut cells = 0usize;
    for p in [5u64, 7] {
        for a in [1u64, 2, 3] {
            for n in [1u32, 2] {
                let records = verify_theorem2(prime(p), a, n).unwrap();
                cells += records.len();
                assert_all_pass(&records, "theorem2");
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "budget exceeded: {elapsed:?}");
    println!("acceptance criterion 2 (theorem2 dichotomy, {cells} cells): pass in {elapsed:?}");
}

#[test]
fn criterion_3_step_theorems() {
    let started = Instant::now();
    let p5 = prime(5);

    // odd step at k = 5: hypothesis located at n_1 = 3 (k-1 = 4 is 0 mod
    // p-1, giving a sub-n valuation), then v steps by exactly 2
    let records = verify_odd_step(p5, 1, 5, 3, 4).unwrap();
    assert_all_pass(&records, "odd-step");
    assert!(records
        .iter()
        .all(|r| r.detail.as_deref().unwrap_or("").contains("n_1 = 3")));
    let v3 = stirling1_valuation(125, 120, p5);
    let v4 = stirling1_valuation(625, 620, p5);
    assert_eq!(v3, Valuation::Finite(6));
    assert_eq!(v4, Valuation::Finite(8));

    // even step at k = 4 over n in {3,4,5}: +1 per step
    let records = verify_even_step(p5, 1, 4, 3, 5).unwrap();
    assert_eq!(
        records
            .iter()
            .filter(|r| r.check_id == "even_step" && r.status == Status::Pass)
            .count(),
        2
    );
    assert_all_pass(&records, "even-step");
    for n in 3u32..=5 {
        let row = 5u64.pow(n);
        assert_eq!(
            stirling1_valuation(row, row as i64 - 4, p5),
            Valuation::Finite(n as i64 - 1),
            "v_5(s(5^{n}, 5^{n}-4))"
        );
    }
    let elapsed = started.elapsed();
    println!("acceptance criterion 3 (step theorems): pass in {elapsed:?}");
}

#[test]
fn criterion_4_congruence_suites() {
    let started = Instant::now();
    let cache = BernoulliCache::new();
    let mut cells = 0usize;
    for p in [5u64, 7, 11, 13] {
        let records = verify_boyd(prime(p), 30).unwrap();
        cells += records.len();
        assert_all_pass(&records, "boyd");
    }
    for p in (5u64..=97).filter(|&q| stirling_padic::padic::is_prime_u64(q)) {
        let records = verify_washington(&cache, prime(p)).unwrap();
        cells += records.len();
        assert_all_pass(&records, "washington");
    }
    for p in (5u64..=53).filter(|&q| stirling_padic::padic::is_prime_u64(q)) {
        let records = verify_hp_symmetric(&cache, prime(p)).unwrap();
        cells += records.len();
        assert_all_pass(&records, "symmetric");
        let records = verify_stirling_p_row(&cache, prime(p)).unwrap();
        cells += records.len();
        assert_all_pass(&records, "prow");
    }

    // golden values at p = 7
    let p7 = prime(7);
    let h6 = harmonic_power(6, 1);
    let diff = &h6 - rat(49, 90);
    assert_eq!(diff, rat(343, 180));
    assert_eq!(vp_rat(&diff, p7), Valuation::Finite(3));

    let h6_2 = harmonic_power(6, 2);
    let diff = &h6_2 + rat(7, 45);
    assert_eq!(diff, rat(5929, 3600));
    assert_eq!(vp_rat(&diff, p7), Valuation::Finite(2));

    let sym = elementary_symmetric(6, 2) + rat(1, 2) * &h6_2;
    assert_eq!(sym, rat(21609, 7200));
    assert_eq!(vp_rat(&sym, p7), Valuation::Finite(4));

    let elapsed = started.elapsed();
    println!("acceptance criterion 4 (congruence suites, {cells} cells): pass in {elapsed:?}");
}

#[test]
fn criterion_5_shifted_congruences() {
    let started = Instant::now();
    let mut cells = 0usize;
    for a in [1u64, 2, 3] {
        let records = verify_shifted_congruence(prime(5), a, 1).unwrap();
        cells += records.len();
        assert_all_pass(&records, "shifted n=1");
    }
    let records = verify_shifted_congruence(prime(5), 1, 2).unwrap();
    cells += records.len();
    assert_all_pass(&records, "shifted n=2");
    let elapsed = started.elapsed();
    println!("acceptance criterion 5 (shifted congruences, {cells} cells): pass in {elapsed:?}");
}

#[test]
fn criterion_6_bernoulli_regularity() {
    let started = Instant::now();
    let cache = BernoulliCache::new();
    assert_eq!(cache.get(12).unwrap(), rat(-691, 2730));
    for n in (2..=200u64).step_by(2) {
        assert!(
            check_von_staudt_clausen(&cache, n).unwrap(),
            "von Staudt-Clausen at n = {n}"
        );
    }
    let irregular: Vec<u64> = (3..100u64)
        .filter(|&q| stirling_padic::padic::is_prime_u64(q))
        .filter(|&q| !irregular_indices(&cache, prime(q)).unwrap().is_empty())
        .collect();
    assert_eq!(irregular, vec![37, 59, 67]);
    assert_eq!(irregular_indices(&cache, prime(37)).unwrap(), vec![32]);
    assert_eq!(irregular_indices(&cache, prime(59)).unwrap(), vec![44]);
    let elapsed = started.elapsed();
    println!("acceptance criterion 6 (bernoulli and regularity): pass in {elapsed:?}");
}

#[test]
fn criterion_7_oracle_equivalences() {
    let started = Instant::now();

    // triangular recurrence vs direct expansion
    for n in 0..=60u64 {
        let row = stirling1_row(n.max(1)).unwrap();
        if n >= 1 {
            assert_eq!(row.coefficients(), &rising_factorial_coeffs(n, 0)[..]);
        }
    }

    // binomial-sum shifted values vs shifted expansion
    for m in 0..=25u64 {
        for n in 0..=25u64 {
            let coeffs = rising_factorial_coeffs(n, m);
            for k in 0..=n {
                assert_eq!(
                    m_stirling(m, n, k as i64).unwrap(),
                    coeffs[k as usize],
                    "s_{m}({n},{k})"
                );
            }
        }
    }

    // convolution identity, all k
    for m in 0..=15u64 {
        for n in 0..=15u64 {
            for k in 0..=(m + n) {
                assert!(check_convolution(m, n, k).unwrap(), "conv({m},{n},{k})");
            }
        }
    }

    // alternating parity identity
    for n in 1..=40u64 {
        for k in 1..=n {
            if (n + k) % 2 == 1 {
                assert!(check_parity_identity(n, k).unwrap(), "parity({n},{k})");
            }
        }
    }

    // modular-engine valuations vs exact factorizations
    for p in [3u64, 5, 7] {
        let p = prime(p);
        for n in 1..=60u64 {
            let expected: Vec<Valuation> = stirling1_row(n)
                .unwrap()
                .coefficients()
                .iter()
                .map(|c| vp_int(c, p))
                .collect();
            assert_eq!(stirling1_row_valuations(n, p), expected, "row {n} mod {p}");
        }
    }

    let elapsed = started.elapsed();
    println!("acceptance criterion 7 (oracle equivalences): pass in {elapsed:?}");
}

#[test]
fn criterion_8_conjecture_sweeps() {
    let started = Instant::now();
    let cache = BernoulliCache::new();

    // p = 3 is settled: the m = n form must agree on every in-guard cell
    let report = sweep(
        &cache,
        &SweepGrid {
            primes: vec![3],
            a_scope: AScope::List(vec![1, 2]),
            n_range: (1, 3),
            m_range: None,
            k_range: None,
            conjectures: vec![2],
        },
    )
    .unwrap();
    let in_guard: Vec<_> = report
        .outcomes
        .iter()
        .filter(|o| o.guard_satisfied)
        .collect();
    assert!(!in_guard.is_empty());
    assert!(in_guard.iter().all(|o| o.agrees), "p = 3 sweep must agree");
    assert!(!report.truncated);

    // n = 1 overlap with the proven classification: every in-guard cell
    // agrees with the computed valuation, and wherever the classification
    // is exact the general-form prediction coincides with it
    let report = sweep(
        &cache,
        &SweepGrid {
            primes: vec![5, 7],
            a_scope: AScope::All,
            n_range: (1, 1),
            m_range: Some((1, 1)),
            k_range: None,
            conjectures: vec![1, 2],
        },
    )
    .unwrap();
    let mut overlap = 0usize;
    for o in report.outcomes.iter().filter(|o| o.guard_satisfied) {
        assert!(o.agrees, "cell {o:?}");
        overlap += 1;
    }
    assert!(overlap > 0);
    for p in [5u64, 7] {
        for a in 1..p {
            for k in 2..=(a * p - 2) {
                let Some(cell) = conjecture1_predict(&cache, prime(p), a, 1, 1, k).unwrap()
                else {
                    continue;
                };
                if let Prediction::Exact(v) = theorem1_predict(prime(p), a, k).unwrap() {
                    assert_eq!(
                        cell.prediction,
                        ConjecturePrediction::Exact(v.finite().unwrap()),
                        "theorem/conjecture overlap at p={p} a={a} k={k}"
                    );
                }
            }
        }
    }

    // the deeper-row report completes and flags the closed-form question
    let report = sweep(
        &cache,
        &SweepGrid {
            primes: vec![5],
            a_scope: AScope::List(vec![1]),
            n_range: (2, 2),
            m_range: Some((1, 1)),
            k_range: None,
            conjectures: vec![3],
        },
    )
    .unwrap();
    assert_eq!(report.ky.len(), 1);
    assert!(!report.ky[0].printed_agrees(), "verbatim reading must flag");
    assert!(report.ky[0].corrected_agrees());

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 300, "budget exceeded: {elapsed:?}");
    println!("acceptance criterion 8 (conjecture sweeps): pass in {elapsed:?}");
}

#[test]
fn spot_congruence_golden_values() {
    // H_5 = 137/60 vs H_1/5 mod 5^2, the worked scaling example
    let h5 = harmonic_power(5, 1);
    assert_eq!(h5, rat(137, 60));
    assert!(congruent_mod_ppow(&h5, &rat(1, 5), prime(5), 2));
}
