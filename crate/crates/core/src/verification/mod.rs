//! Mechanical verification: every theorem, lemma and congruence about the
//! valuations is re-checked cell by cell over parameter grids, producing
//! structured pass/fail records.
//!
//! All of the statements verified here are proven, so a `Fail` record
//! always signals an implementation defect, never new mathematics. The
//! step theorems carry a searched hypothesis; cells where no qualifying
//! starting exponent exists report `HypothesisNotMet`, which is not a
//! failure (nothing is asserted there).

mod congruences;
mod theorems;

pub use congruences::{
    verify_boyd, verify_hp_symmetric, verify_shifted_congruence, verify_stirling_p_row,
    verify_washington, SHIFTED_EXACT_LIMIT,
};
pub use theorems::{
    theorem1_predict, verify_corollary_1_3, verify_even_step, verify_odd_step, verify_theorem1,
    verify_theorem2,
};

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::bernoulli::{bernoulli_valuation, BernoulliCache};
use crate::padic::{Prime, Valuation};
use crate::Result;

/// What a statement asserts about one valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    /// actual = v
    Exact(Valuation),
    /// actual >= v
    AtLeast(Valuation),
    /// actual >= base, with equality if and only if v_p(B_index) = 0.
    AtLeastWithEquality {
        base: i64,
        p: u64,
        bernoulli_index: u64,
    },
}

impl Prediction {
    /// Resolve the prediction against a computed valuation, looking up the
    /// Bernoulli condition where one is attached.
    pub fn check(&self, actual: Valuation, cache: &BernoulliCache) -> Result<bool> {
        Ok(match self {
            Prediction::Exact(v) => actual == *v,
            Prediction::AtLeast(v) => actual >= *v,
            Prediction::AtLeastWithEquality {
                base,
                p,
                bernoulli_index,
            } => {
                let vb = bernoulli_valuation(cache, Prime::new(*p)?, *bernoulli_index)?;
                if vb == Valuation::Finite(0) {
                    actual == Valuation::Finite(*base)
                } else {
                    actual >= Valuation::Finite(*base + 1)
                }
            }
        })
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Exact(v) => write!(f, "= {v}"),
            Prediction::AtLeast(v) => write!(f, ">= {v}"),
            Prediction::AtLeastWithEquality {
                base,
                p,
                bernoulli_index,
            } => write!(f, ">= {base}; eq iff v_{p}(B_{bernoulli_index}) = 0"),
        }
    }
}

/// Outcome of one checked cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisNotMet,
    GuardSkipped,
}

/// The grid coordinates of a record. Every field is optional; suites fill
/// the ones they use. The derived ordering (p, a, n, m, k) is the sort key
/// for deterministic reports.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct ParamSet {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<i64>,
}

impl ParamSet {
    pub fn p(p: Prime) -> Self {
        ParamSet {
            p: Some(p.get() as i64),
            ..Default::default()
        }
    }

    pub fn with_a(mut self, a: u64) -> Self {
        self.a = Some(a as i64);
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n as i64);
        self
    }

    pub fn with_m(mut self, m: u64) -> Self {
        self.m = Some(m as i64);
        self
    }

    pub fn with_k(mut self, k: i64) -> Self {
        self.k = Some(k);
        self
    }
}

/// A computed right-hand side: a valuation or a boolean congruence result.
/// Valuations serialize as integers (infinity as the string "inf"),
/// booleans as booleans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActualValue {
    Valuation(Valuation),
    Bool(bool),
    /// No value computed (guard-skipped / hypothesis-not-met cells).
    None,
}

impl From<Valuation> for ActualValue {
    fn from(v: Valuation) -> Self {
        ActualValue::Valuation(v)
    }
}

impl From<bool> for ActualValue {
    fn from(b: bool) -> Self {
        ActualValue::Bool(b)
    }
}

impl Serialize for ActualValue {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ActualValue::Valuation(Valuation::Finite(v)) => ser.serialize_i64(*v),
            ActualValue::Valuation(Valuation::Infinite) => ser.serialize_str("inf"),
            ActualValue::Bool(b) => ser.serialize_bool(*b),
            ActualValue::None => ser.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for ActualValue {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Option::<serde_json_value::Scalar>::deserialize(de)?;
        match raw {
            None => Ok(ActualValue::None),
            Some(serde_json_value::Scalar::Int(v)) => {
                Ok(ActualValue::Valuation(Valuation::Finite(v)))
            }
            Some(serde_json_value::Scalar::Bool(b)) => Ok(ActualValue::Bool(b)),
            Some(serde_json_value::Scalar::Str(s)) if s == "inf" => {
                Ok(ActualValue::Valuation(Valuation::Infinite))
            }
            Some(serde_json_value::Scalar::Str(s)) => {
                Err(D::Error::custom(format!("invalid actual value {s:?}")))
            }
        }
    }
}

/// Minimal self-describing scalar for ActualValue deserialization.
mod serde_json_value {
    use serde::Deserialize;

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub enum Scalar {
        Bool(bool),
        Int(i64),
        Str(String),
    }
}

impl fmt::Display for ActualValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActualValue::Valuation(v) => v.fmt(f),
            ActualValue::Bool(b) => b.fmt(f),
            ActualValue::None => write!(f, ""),
        }
    }
}

/// One verified cell: which check, at which parameters, what was
/// predicted, what was computed, and whether they agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub params: ParamSet,
    pub predicted: String,
    pub actual: ActualValue,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(
        check_id: &str,
        params: ParamSet,
        predicted: impl fmt::Display,
        actual: impl Into<ActualValue>,
        pass: bool,
    ) -> Self {
        CheckRecord {
            check_id: check_id.to_string(),
            params,
            predicted: predicted.to_string(),
            actual: actual.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Sort records by (check_id, p, a, n, m, k) for deterministic reports.
pub fn sort_records(records: &mut [CheckRecord]) {
    records.sort_by(|x, y| {
        x.check_id
            .cmp(&y.check_id)
            .then(x.params.cmp(&y.params))
            .then(x.predicted.cmp(&y.predicted))
    });
}

/// Congruence-style record: pass iff v_p(lhs - rhs) >= e.
pub(crate) fn congruence_record(
    check_id: &str,
    params: ParamSet,
    lhs: &crate::Rational,
    rhs: &crate::Rational,
    p: Prime,
    e: u32,
) -> CheckRecord {
    let pass = crate::padic::congruent_mod_ppow(lhs, rhs, p, e);
    CheckRecord::new(
        check_id,
        params,
        format!("congruent mod {p}^{e}"),
        pass,
        pass,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Valuation;

    #[test]
    fn prediction_semantics() {
        let cache = BernoulliCache::new();
        let fin = Valuation::Finite;

        let exact = Prediction::Exact(fin(2));
        assert!(exact.check(fin(2), &cache).unwrap());
        assert!(!exact.check(fin(3), &cache).unwrap());
        assert!(!exact.check(Valuation::Infinite, &cache).unwrap());
        assert!(Prediction::Exact(Valuation::Infinite)
            .check(Valuation::Infinite, &cache)
            .unwrap());

        let at_least = Prediction::AtLeast(fin(2));
        assert!(at_least.check(fin(2), &cache).unwrap());
        assert!(at_least.check(Valuation::Infinite, &cache).unwrap());
        assert!(!at_least.check(fin(1), &cache).unwrap());

        // v_5(B_2) = 0: equality required
        let eq = Prediction::AtLeastWithEquality {
            base: 2,
            p: 5,
            bernoulli_index: 2,
        };
        assert!(eq.check(fin(2), &cache).unwrap());
        assert!(!eq.check(fin(3), &cache).unwrap());
        assert!(!eq.check(fin(1), &cache).unwrap());

        // v_37(B_32) = 1: strict excess required
        let excess = Prediction::AtLeastWithEquality {
            base: 1,
            p: 37,
            bernoulli_index: 32,
        };
        assert!(!excess.check(fin(1), &cache).unwrap());
        assert!(excess.check(fin(2), &cache).unwrap());
        assert!(excess.check(Valuation::Infinite, &cache).unwrap());
    }

    #[test]
    fn record_sorting_is_total() {
        let rec = |id: &str, p: i64, k: i64| CheckRecord {
            check_id: id.into(),
            params: ParamSet {
                p: Some(p),
                k: Some(k),
                ..Default::default()
            },
            predicted: String::new(),
            actual: ActualValue::Bool(true),
            status: Status::Pass,
            detail: None,
        };
        let mut records = vec![rec("b", 5, 1), rec("a", 7, 9), rec("a", 5, 3), rec("a", 5, 1)];
        sort_records(&mut records);
        let keys: Vec<(&str, Option<i64>, Option<i64>)> = records
            .iter()
            .map(|r| (r.check_id.as_str(), r.params.p, r.params.k))
            .collect();
        assert_eq!(
            keys,
            vec![
                ("a", Some(5), Some(1)),
                ("a", Some(5), Some(3)),
                ("a", Some(7), Some(9)),
                ("b", Some(5), Some(1)),
            ]
        );
    }
}
