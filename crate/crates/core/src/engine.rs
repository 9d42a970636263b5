//! Prime-power modular kernel for `v_p(s(n,k))`.
//!
//! Running the triangular recurrence over Z/p^E instead of Z keeps row
//! entries machine-word sized (or a few limbs) and still determines the
//! valuation whenever the residue is nonzero: if s = r (mod p^E) with
//! r != 0 and v_p(r) < E, then v_p(s) = v_p(r). Columns whose residue
//! vanishes get the precision doubled, capped at v_p(n!) + 1. The cap is
//! heuristic, not a proven bound on v_p(s(n,k)) (v_5(s(5,2)) = 2 already
//! exceeds v_5(5!) = 1), so a column still unresolved at the cap is
//! certified by exact big-integer computation of that single entry via a
//! column recurrence.

use num::{BigInt, BigUint, One, Zero};

use crate::padic::{vp_factorial, vp_int, Prime, Valuation};

/// Largest row the valuation drivers accept. Row cost grows quadratically;
/// everything in scope sits far below this.
pub const ENGINE_ROW_LIMIT: u64 = 10_000;

/// Residue rows of the Stirling triangle modulo p^E.
///
/// `current_row[k] = s(row_index, k) (mod p^E)` for all tracked columns.
/// Columns above `max_col` are dropped; they never feed back into lower
/// ones. Instances are single-owner mutable state; distinct instances may
/// run in parallel.
pub struct ModularStirlingEngine {
    p: Prime,
    precision: u32,
    max_col: usize,
    row_index: u64,
    rows: Rows,
}

enum Rows {
    /// Modulus fits in u64; products go through u128.
    Small { modulus: u64, row: Vec<u64> },
    /// Arbitrary modulus.
    Big { modulus: BigUint, row: Vec<BigUint> },
}

impl ModularStirlingEngine {
    /// Engine positioned at row 1 (= [0, 1]) with modulus p^precision.
    pub fn new(p: Prime, precision: u32, max_col: u64) -> Self {
        assert!(precision >= 1, "precision must be at least 1");
        let max_col = max_col as usize;
        let modulus = BigUint::from(p.get()).pow(precision);
        let rows = match u64::try_from(&modulus) {
            Ok(m) => {
                let mut row = vec![0u64];
                if max_col >= 1 {
                    row.push(1 % m);
                }
                Rows::Small { modulus: m, row }
            }
            Err(_) => {
                let mut row = vec![BigUint::zero()];
                if max_col >= 1 {
                    row.push(BigUint::one());
                }
                Rows::Big { modulus, row }
            }
        };
        ModularStirlingEngine {
            p,
            precision,
            max_col,
            row_index: 1,
            rows,
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn row_index(&self) -> u64 {
        self.row_index
    }

    /// Advance from the current row to row n (n >= current row index).
    pub fn advance_to(&mut self, n: u64) {
        assert!(n >= self.row_index, "engine cannot step backwards");
        while self.row_index < n {
            self.step();
        }
    }

    fn step(&mut self) {
        let i = self.row_index;
        let width = usize::min(self.row_index as usize + 1, self.max_col) + 1;
        match &mut self.rows {
            Rows::Small { modulus, row } => {
                let m = *modulus;
                if row.len() < width {
                    row.push(0);
                }
                let i_red = (i % m) as u128;
                for k in (1..row.len()).rev() {
                    row[k] = ((i_red * row[k] as u128 + row[k - 1] as u128) % m as u128) as u64;
                }
                row[0] = 0;
            }
            Rows::Big { modulus, row } => {
                if row.len() < width {
                    row.push(BigUint::zero());
                }
                let i_big = BigUint::from(i) % &*modulus;
                for k in (1..row.len()).rev() {
                    row[k] = (&i_big * &row[k] + &row[k - 1]) % &*modulus;
                }
                row[0] = BigUint::zero();
            }
        }
        self.row_index += 1;
    }

    /// v_p of the residue at column k, or `None` when the residue is zero
    /// (meaning only v_p(s(row_index, k)) >= precision is known).
    pub fn residue_valuation(&self, k: u64) -> Option<u32> {
        let k = k as usize;
        assert!(k <= self.max_col, "column {k} beyond engine width");
        let p = self.p.get();
        match &self.rows {
            Rows::Small { row, .. } => {
                let mut r = *row.get(k)?;
                if r == 0 {
                    return None;
                }
                let mut v = 0;
                while r % p == 0 {
                    r /= p;
                    v += 1;
                }
                Some(v)
            }
            Rows::Big { row, .. } => {
                let r = row.get(k)?;
                if r.is_zero() {
                    return None;
                }
                let p_big = BigUint::from(p);
                let mut rest = r.clone();
                let mut v = 0;
                loop {
                    let (q, rem) = num::Integer::div_rem(&rest, &p_big);
                    if !rem.is_zero() {
                        return Some(v);
                    }
                    rest = q;
                    v += 1;
                }
            }
        }
    }
}

/// Starting precision: max(8, ceil(3 * log_p n)), clamped to the cap.
fn initial_precision(n: u64, p: Prime) -> u32 {
    let cube = (n as u128).saturating_pow(3);
    let mut e = 0u32;
    let mut acc = 1u128;
    while acc < cube {
        acc = acc.saturating_mul(p.get() as u128);
        e += 1;
    }
    e.max(8)
}

fn precision_cap(n: u64, p: Prime) -> u32 {
    vp_factorial(n, p) as u32 + 1
}

/// Exact v_p(s(n,k)) for one entry, by a column-by-column big-integer
/// recurrence: O(n) integers held at a time instead of a full row.
/// This is the certification fallback for residues that stay zero at the
/// escalation cap.
fn exact_column_valuation(n: u64, k: u64, p: Prime) -> Valuation {
    debug_assert!(k >= 1 && k <= n);
    // column 1: s(i, 1) = (i-1)! for i = 1..=n
    let mut col: Vec<BigInt> = Vec::with_capacity(n as usize);
    let mut fact = BigInt::one();
    for i in 1..=n {
        col.push(fact.clone());
        fact *= i;
    }
    // col holds s(i, j) at index i - j; build column j+1 from column j
    for j in 1..k {
        let mut next = vec![BigInt::one()]; // s(j+1, j+1) = 1
        for i in (j + 1)..n {
            let prev = &next[(i - j - 1) as usize]; // s(i, j+1)
            let left = &col[(i - j) as usize]; // s(i, j)
            next.push(prev * i + left);
        }
        col = next;
    }
    vp_int(&col[(n - k) as usize], p)
}

/// Exact v_p(s(n,k)), +Infinite when s(n,k) = 0. Runs the modular engine
/// with doubling precision until the residue at (n,k) is nonzero; a column
/// still zero at the cap v_p(n!)+1 falls back to exact computation.
pub fn stirling1_valuation(n: u64, k: i64, p: Prime) -> Valuation {
    if n == 0 {
        return if k == 0 {
            Valuation::Finite(0)
        } else {
            Valuation::Infinite
        };
    }
    if k <= 0 || k as u64 > n {
        return Valuation::Infinite;
    }
    let k = k as u64;
    if k == n {
        return Valuation::Finite(0);
    }
    let cap = precision_cap(n, p);
    let mut e = initial_precision(n, p).min(cap);
    loop {
        let mut engine = ModularStirlingEngine::new(p, e, k);
        engine.advance_to(n);
        if let Some(v) = engine.residue_valuation(k) {
            return Valuation::Finite(v as i64);
        }
        if e >= cap {
            return exact_column_valuation(n, k, p);
        }
        e = (e * 2).min(cap);
    }
}

/// v_p(s(n,k)) for every k = 0..=n of one row, sharing engine passes.
/// Columns unresolved at one precision are re-run together at the doubled
/// precision, truncated at the highest still-open column.
pub fn stirling1_row_valuations(n: u64, p: Prime) -> Vec<Valuation> {
    if n == 0 {
        return vec![Valuation::Finite(0)];
    }
    let mut vals: Vec<Option<Valuation>> = vec![None; n as usize + 1];
    vals[0] = Some(Valuation::Infinite); // s(n,0) = 0 for n >= 1
    let cap = precision_cap(n, p);
    let mut e = initial_precision(n, p).min(cap);
    let mut open_max = n;
    loop {
        let mut engine = ModularStirlingEngine::new(p, e, open_max);
        engine.advance_to(n);
        for k in 1..=open_max {
            if vals[k as usize].is_none() {
                if let Some(v) = engine.residue_valuation(k) {
                    vals[k as usize] = Some(Valuation::Finite(v as i64));
                }
            }
        }
        let open: Vec<u64> = (1..=n).filter(|&k| vals[k as usize].is_none()).collect();
        if open.is_empty() {
            break;
        }
        if e >= cap {
            for k in open {
                vals[k as usize] = Some(exact_column_valuation(n, k, p));
            }
            break;
        }
        e = (e * 2).min(cap);
        open_max = *open.last().unwrap();
    }
    vals.into_iter().map(Option::unwrap).collect()
}
