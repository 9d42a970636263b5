//! Evidence sweeps for the open conjectures on v_p(s(ap^n, ap^m - k)).
//!
//! These statements are conjectural: a disagreement between the predicted
//! and computed valuation is a reportable finding (a potential
//! counterexample or a typo in the stated form), never a process failure.
//! Guards are evaluated strictly and literally; out-of-guard cells carry
//! `guard_satisfied = false`, predict nothing, and agree vacuously.
//!
//! The quoted closed form for v_p(s(ap^n, ap^m)) is evaluated in both
//! readings - verbatim with the trailing factor p^n, and with p^m - and
//! both comparisons are reported, because the verbatim exponent makes the
//! value negative whenever n > m.

use std::fmt;

use crate::bernoulli::{bernoulli_valuation, BernoulliCache};
use crate::engine::{stirling1_row_valuations, ENGINE_ROW_LIMIT};
use crate::padic::{bracket, epsilon, vp_u64, Prime, Valuation};
use crate::{Error, Result};

/// The correction term T_k: -1 - v_p(floor(k/2)) when k matches its parity
/// class modulo p-1, else the valuation of the companion Bernoulli number.
pub fn t_term(cache: &BernoulliCache, p: Prime, k: u64) -> Result<i64> {
    if !p.is_odd() {
        return Err(Error::parameter("t_term requires an odd prime"));
    }
    if k < 2 {
        return Err(Error::parameter(format!("t_term requires k >= 2, got {k}")));
    }
    let kb = bracket(k, p)?;
    if kb == epsilon(k) {
        Ok(-1 - vp_u64(k / 2, p).expect_finite("k/2 >= 1"))
    } else {
        // k not congruent to eps_k forces <k> >= 2, so the index is a
        // valid even value in [2, p-3] and the valuation is finite
        let index = 2 * (kb / 2);
        Ok(bernoulli_valuation(cache, p, index)?.expect_finite("B index in [2, p-3]"))
    }
}

/// An asserted value or lower bound for one conjecture cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjecturePrediction {
    Exact(i64),
    AtLeast(i64),
}

impl ConjecturePrediction {
    pub fn agrees_with(self, actual: Valuation) -> bool {
        match self {
            ConjecturePrediction::Exact(v) => actual == Valuation::Finite(v),
            ConjecturePrediction::AtLeast(v) => actual >= Valuation::Finite(v),
        }
    }
}

impl fmt::Display for ConjecturePrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjecturePrediction::Exact(v) => write!(f, "= {v}"),
            ConjecturePrediction::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// p^e when it fits; cells whose formulas leave the representable range
/// are treated as out of guard rather than wrapping or panicking.
fn pow_u128(p: u64, e: u32) -> Option<u128> {
    (p as u128).checked_pow(e)
}

fn mul_u128(a: u64, b: u128) -> Option<u128> {
    (a as u128).checked_mul(b)
}

/// Guard for the exact-form cells: 2 <= k <= a(p-1)p^(m-1)+1 < ap^m
/// (the strict right inequality excludes a p^(m-1) = 1) plus the overall
/// premise k <= ap^n - 2.
fn exact_guard(p: u64, a: u64, n: u32, m: u32, k: u64, cap_by_row: bool) -> bool {
    if a == 0 || a >= p || m == 0 || m > n || k < 2 {
        return false;
    }
    let Some(bound) = pow_u128(p, m - 1)
        .and_then(|pw| mul_u128(a * (p - 1), pw))
        .zip(pow_u128(p, m).and_then(|pw| mul_u128(a, pw)))
    else {
        return false;
    };
    let (upper, right) = (bound.0 + 1, bound.1);
    if upper >= right || (k as u128) > upper {
        return false;
    }
    if cap_by_row {
        match pow_u128(p, n).and_then(|pw| mul_u128(a, pw)) {
            Some(row) => (k as u128) + 2 <= row,
            None => false,
        }
    } else {
        true
    }
}

/// Predicted v_p(s(ap^n, ap^n - k)) for the m = n form:
/// n + (n + v_p(k)) eps_k + T_k. `None` when the guard fails.
pub fn conjecture2_predict(
    cache: &BernoulliCache,
    p: Prime,
    a: u64,
    n: u32,
    k: u64,
) -> Result<Option<i64>> {
    if !exact_guard(p.get(), a, n, n, k, true) {
        return Ok(None);
    }
    let eps = epsilon(k) as i64;
    let vk = vp_u64(k, p).expect_finite("k >= 2");
    Ok(Some(
        n as i64 + (n as i64 + vk) * eps + t_term(cache, p, k)?,
    ))
}

/// One resolved cell of the general-form conjecture: the predicted value
/// or bound, and the column of row ap^n it refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conjecture1Cell {
    pub prediction: ConjecturePrediction,
    pub column: u64,
}

/// Predicted v_p(s(ap^n, ap^m - k)): the prefactor
/// a(p^n - p^m)/(p-1) - (n-m)(ap^m - k) plus the m-level exact form, or
/// (for m = 1, a >= 4, a(p-1)+2 <= k <= ap-2) the lower bound
/// a(p^n - p)/(p-1) - (n-1)(ap - k) + a + k - ap on column ap - k.
/// `None` when neither guard admits the cell.
pub fn conjecture1_predict(
    cache: &BernoulliCache,
    p: Prime,
    a: u64,
    n: u32,
    m: u32,
    k: u64,
) -> Result<Option<Conjecture1Cell>> {
    let pv = p.get();
    if exact_guard(pv, a, n, m, k, true) {
        let cell = (|| {
            // a (p^n - p^m) / (p-1) - (n-m)(ap^m - k), checked end to end
            let pn = i128::try_from(pow_u128(pv, n)?).ok()?;
            let pm = i128::try_from(pow_u128(pv, m)?).ok()?;
            let column_wide = (a as i128).checked_mul(pm)?.checked_sub(k as i128)?;
            let prefactor = (a as i128)
                .checked_mul(pn - pm)?
                .checked_div(pv as i128 - 1)?
                .checked_sub((n as i128 - m as i128).checked_mul(column_wide)?)?;
            let eps = epsilon(k) as i128;
            let vk = vp_u64(k, p).expect_finite("k >= 2") as i128;
            let inner = m as i128 + (m as i128 + vk) * eps;
            Some((prefactor.checked_add(inner)?, u64::try_from(column_wide).ok()?))
        })();
        let Some((value, column)) = cell else {
            return Ok(None);
        };
        let total = value.checked_add(t_term(cache, p, k)? as i128);
        let Some(Ok(value)) = total.map(i64::try_from) else {
            return Ok(None);
        };
        return Ok(Some(Conjecture1Cell {
            prediction: ConjecturePrediction::Exact(value),
            column,
        }));
    }
    // lower-bound branch, printed with the column relative to ap (m = 1)
    if m == 1 && a >= 4 && (1..pv).contains(&a) && m <= n {
        let ap = a * pv;
        if a * (pv - 1) + 2 <= k && k + 2 <= ap {
            let bound = (|| {
                let pn = i128::try_from(pow_u128(pv, n)?).ok()?;
                let scaled = (a as i128).checked_mul((pn - pv as i128) / (pv as i128 - 1))?;
                let tail = (n as i128 - 1).checked_mul(ap as i128 - k as i128)?;
                i64::try_from(scaled - tail + a as i128 + k as i128 - ap as i128).ok()
            })();
            let Some(bound) = bound else {
                return Ok(None);
            };
            return Ok(Some(Conjecture1Cell {
                prediction: ConjecturePrediction::AtLeast(bound),
                column: ap - k,
            }));
        }
    }
    Ok(None)
}

/// Right-hand side of the splitting form: v_p(s(ap^n, ap^m)) +
/// v_p(s(ap^n, ap^n - k)) + (2 floor(k/2) - 1)(n - m), assembled from two
/// computed valuations of the same row. `None` when the guard fails.
pub fn conjecture3_rhs(
    row_valuations: &[Valuation],
    p: Prime,
    a: u64,
    n: u32,
    m: u32,
    k: u64,
) -> Option<i64> {
    let pv = p.get();
    if !exact_guard(pv, a, n, m, k, false) {
        return None;
    }
    let anchor = row_valuations[(a * pv.pow(m)) as usize].expect_finite("s(ap^n, ap^m) != 0");
    let tail = row_valuations[(a * pv.pow(n) - k) as usize].expect_finite("s(ap^n, ap^n-k) != 0");
    Some(anchor + tail + (2 * (k / 2) as i64 - 1) * (n as i64 - m as i64))
}

/// One evaluated conjecture cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureOutcome {
    pub conjecture: u8,
    pub p: u64,
    pub a: u64,
    pub n: u32,
    /// Absent for the m = n form (conjecture 2) rows.
    pub m: Option<u32>,
    /// Absent for guard-skipped marker rows covering an empty k range.
    pub k: Option<u64>,
    pub predicted: Option<ConjecturePrediction>,
    pub actual: Option<Valuation>,
    pub agrees: bool,
    pub guard_satisfied: bool,
}

impl ConjectureOutcome {
    fn skipped(conjecture: u8, p: u64, a: u64, n: u32, m: Option<u32>, k: Option<u64>) -> Self {
        ConjectureOutcome {
            conjecture,
            p,
            a,
            n,
            m,
            k,
            predicted: None,
            actual: None,
            agrees: true, // vacuously
            guard_satisfied: false,
        }
    }
}

/// Both readings of the quoted closed form for v_p(s(ap^n, ap^m)) against
/// the computed value: verbatim (trailing p^n) and corrected (p^m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KyComparison {
    pub p: u64,
    pub a: u64,
    pub n: u32,
    pub m: u32,
    pub actual: i64,
    pub printed_value: i64,
    pub corrected_value: i64,
}

impl KyComparison {
    pub fn printed_agrees(&self) -> bool {
        self.printed_value == self.actual
    }

    pub fn corrected_agrees(&self) -> bool {
        self.corrected_value == self.actual
    }
}

/// Which multipliers a to visit for each prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AScope {
    /// Every a in [1, p-1].
    All,
    /// Only a = p - 1.
    MaxPerPrime,
    /// An explicit list; values >= p are dropped for that prime.
    List(Vec<u64>),
}

/// Parameter grid for a sweep. `m_range = None` restricts to the m = n
/// form; `k_range = None` enumerates exactly the in-guard k per cell.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub primes: Vec<u64>,
    pub a_scope: AScope,
    pub n_range: (u32, u32),
    pub m_range: Option<(u32, u32)>,
    pub k_range: Option<(u64, u64)>,
    pub conjectures: Vec<u8>,
}

/// One (p, a, n) slice of a sweep: all its cells read from a single
/// engine row, so the slice is the unit of parallel distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepCellGroup {
    pub p: u64,
    pub a: u64,
    pub n: u32,
}

/// Expand a grid into cell groups, validating the primes once.
pub fn enumerate_groups(grid: &SweepGrid) -> Result<Vec<SweepCellGroup>> {
    for c in &grid.conjectures {
        if !(1..=3).contains(c) {
            return Err(Error::parameter(format!("unknown conjecture {c}")));
        }
    }
    if grid.n_range.0 == 0 {
        return Err(Error::parameter("n must be positive"));
    }
    let mut groups = Vec::new();
    for &p in &grid.primes {
        let p = Prime::new(p)?;
        if !p.is_odd() {
            return Err(Error::parameter("sweeps require odd primes"));
        }
        let a_list: Vec<u64> = match &grid.a_scope {
            AScope::All => (1..p.get()).collect(),
            AScope::MaxPerPrime => vec![p.get() - 1],
            AScope::List(list) => list.iter().copied().filter(|&a| a < p.get()).collect(),
        };
        for a in a_list {
            if a == 0 {
                continue;
            }
            for n in grid.n_range.0..=grid.n_range.1 {
                groups.push(SweepCellGroup { p: p.get(), a, n });
            }
        }
    }
    Ok(groups)
}

pub struct GroupResult {
    pub outcomes: Vec<ConjectureOutcome>,
    pub ky: Vec<KyComparison>,
}

/// All cells of one (p, a, n) group. `None` marks a group skipped because
/// the row exceeds the engine limit (resource truncation).
pub fn sweep_group(
    cache: &BernoulliCache,
    grid: &SweepGrid,
    group: SweepCellGroup,
) -> Result<Option<GroupResult>> {
    let SweepCellGroup { p, a, n } = group;
    let prime = Prime::new(p)?;
    let Some(row_u128) = pow_u128(p, n).and_then(|pw| mul_u128(a, pw)) else {
        return Ok(None);
    };
    if row_u128 > ENGINE_ROW_LIMIT as u128 {
        return Ok(None);
    }
    let row = row_u128 as u64;
    let row_vals = stirling1_row_valuations(row, prime);
    let ms: Vec<u32> = match grid.m_range {
        None => vec![n],
        Some((lo, hi)) => (lo.max(1)..=hi.min(n)).collect(),
    };
    let mut outcomes = Vec::new();

    let k_iter = |guard_lo: u64, guard_hi: u64| -> Vec<u64> {
        match grid.k_range {
            None => {
                if guard_lo > guard_hi {
                    Vec::new()
                } else {
                    (guard_lo..=guard_hi).collect()
                }
            }
            Some((lo, hi)) => (lo..=hi).collect(),
        }
    };

    if grid.conjectures.contains(&2) {
        let guard_hi_wide = a * (p - 1) * p.pow(n - 1) + 1;
        let guard_hi = guard_hi_wide.min(row.saturating_sub(2));
        let ks = k_iter(2, guard_hi);
        if ks.is_empty() {
            outcomes.push(ConjectureOutcome::skipped(2, p, a, n, None, None));
        }
        for k in ks {
            match conjecture2_predict(cache, prime, a, n, k)? {
                None => outcomes.push(ConjectureOutcome::skipped(2, p, a, n, None, Some(k))),
                Some(v) => {
                    let actual = row_vals[(row - k) as usize];
                    let prediction = ConjecturePrediction::Exact(v);
                    outcomes.push(ConjectureOutcome {
                        conjecture: 2,
                        p,
                        a,
                        n,
                        m: None,
                        k: Some(k),
                        predicted: Some(prediction),
                        actual: Some(actual),
                        agrees: prediction.agrees_with(actual),
                        guard_satisfied: true,
                    });
                }
            }
        }
    }

    // in-guard upper limit for k at level m; rows here are already within
    // the engine limit, so the u64 arithmetic below cannot overflow
    let exact_upper = |m: u32| -> u64 {
        let upper = a * (p - 1) * p.pow(m - 1) + 1;
        if upper >= a * p.pow(m) {
            0 // strict inequality fails; empty exact range
        } else {
            upper
        }
    };

    for &m in &ms {
        let guard_hi_exact = exact_upper(m).min(row.saturating_sub(2));

        if grid.conjectures.contains(&1) {
            let mut ks = k_iter(2, guard_hi_exact);
            if grid.k_range.is_none() && m == 1 && a >= 4 {
                ks.extend((a * (p - 1) + 2)..=(a * p - 2)); // lower-bound branch
            }
            if ks.is_empty() {
                outcomes.push(ConjectureOutcome::skipped(1, p, a, n, Some(m), None));
            }
            for k in ks {
                match conjecture1_predict(cache, prime, a, n, m, k)? {
                    None => {
                        outcomes.push(ConjectureOutcome::skipped(1, p, a, n, Some(m), Some(k)))
                    }
                    Some(cell) => {
                        let actual = row_vals[cell.column as usize];
                        outcomes.push(ConjectureOutcome {
                            conjecture: 1,
                            p,
                            a,
                            n,
                            m: Some(m),
                            k: Some(k),
                            predicted: Some(cell.prediction),
                            actual: Some(actual),
                            agrees: cell.prediction.agrees_with(actual),
                            guard_satisfied: true,
                        });
                    }
                }
            }
        }

        if grid.conjectures.contains(&3) {
            // conjecture 3 carries no k <= ap^n - 2 premise; its guard is
            // exactly the displayed inequality chain
            let ks = k_iter(2, exact_upper(m));
            if ks.is_empty() {
                outcomes.push(ConjectureOutcome::skipped(3, p, a, n, Some(m), None));
            }
            for k in ks {
                match conjecture3_rhs(&row_vals, prime, a, n, m, k) {
                    None => {
                        outcomes.push(ConjectureOutcome::skipped(3, p, a, n, Some(m), Some(k)))
                    }
                    Some(rhs) => {
                        let actual = row_vals[(a * p.pow(m) - k) as usize];
                        let prediction = ConjecturePrediction::Exact(rhs);
                        outcomes.push(ConjectureOutcome {
                            conjecture: 3,
                            p,
                            a,
                            n,
                            m: Some(m),
                            k: Some(k),
                            predicted: Some(prediction),
                            actual: Some(actual),
                            agrees: prediction.agrees_with(actual),
                            guard_satisfied: true,
                        });
                    }
                }
            }
        }
    }

    let mut ky = Vec::new();
    for &m in &ms {
        if m >= n {
            continue;
        }
        let column = a * p.pow(m);
        let actual = row_vals[column as usize].expect_finite("s(ap^n, ap^m) != 0");
        let (pn, pm) = (row as i64 / a as i64, column as i64 / a as i64);
        let base = a as i64 * (pn - pm) / (p as i64 - 1);
        ky.push(KyComparison {
            p,
            a,
            n,
            m,
            actual,
            printed_value: base - a as i64 * (n as i64 - m as i64) * pn,
            corrected_value: base - a as i64 * (n as i64 - m as i64) * pm,
        });
    }

    Ok(Some(GroupResult { outcomes, ky }))
}

/// A whole sweep, sequentially. The CLI distributes the same groups over
/// a worker pool; results are identical because cells are independent.
pub fn sweep(cache: &BernoulliCache, grid: &SweepGrid) -> Result<SweepReport> {
    let mut report = SweepReport {
        outcomes: Vec::new(),
        ky: Vec::new(),
        truncated: false,
    };
    for group in enumerate_groups(grid)? {
        match sweep_group(cache, grid, group)? {
            None => report.truncated = true,
            Some(result) => {
                report.outcomes.extend(result.outcomes);
                report.ky.extend(result.ky);
            }
        }
    }
    Ok(report)
}

pub struct SweepReport {
    pub outcomes: Vec<ConjectureOutcome>,
    pub ky: Vec<KyComparison>,
    /// Set when at least one group was skipped over the resource limit.
    pub truncated: bool,
}
