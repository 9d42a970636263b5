//! Report assembly and serialization: the JSON report document and the
//! flat CSV projection.

use std::io::Write;

use serde::{Deserialize, Serialize};
use stirling_padic::conjectures::{ConjectureOutcome, KyComparison};
use stirling_padic::verification::{
    sort_records, ActualValue, CheckRecord, ParamSet, Status,
};
use stirling_padic::Valuation;

use crate::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: u64,
    pub fail: u64,
    pub hypothesis_not_met: u64,
    pub guard_skipped: u64,
}

impl Summary {
    pub fn tally(records: &[CheckRecord]) -> Self {
        let mut s = Summary::default();
        for r in records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::HypothesisNotMet => s.hypothesis_not_met += 1,
                Status::GuardSkipped => s.guard_skipped += 1,
            }
        }
        s
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub invocation: Vec<String>,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub wall_time_ms: u64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub truncated: bool,
}

impl ReportDocument {
    /// Assemble a report: records are sorted by (check_id, p, a, n, m, k)
    /// and the summary recomputed, so output is deterministic for any
    /// worker count. The --jobs flag is stripped from the echoed
    /// invocation for the same reason.
    pub fn assemble(mut records: Vec<CheckRecord>, wall_time_ms: u64, truncated: bool) -> Self {
        sort_records(&mut records);
        let summary = Summary::tally(&records);
        ReportDocument {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            invocation: invocation_without_jobs(),
            records,
            summary,
            wall_time_ms,
            truncated,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record([
            "check_id",
            "p",
            "a",
            "n",
            "m",
            "k",
            "predicted",
            "actual",
            "status",
        ])?;
        for r in &self.records {
            let cell = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::HypothesisNotMet => "hypothesis_not_met",
                Status::GuardSkipped => "guard_skipped",
            };
            w.write_record([
                r.check_id.as_str(),
                &cell(r.params.p),
                &cell(r.params.a),
                &cell(r.params.n),
                &cell(r.params.m),
                &cell(r.params.k),
                &r.predicted,
                &r.actual.to_string(),
                status,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn invocation_without_jobs() -> Vec<String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut out = Vec::with_capacity(args.len());
    let mut skip_next = false;
    for arg in args {
        if skip_next {
            skip_next = false;
            continue;
        }
        if arg == "--jobs" {
            skip_next = true;
            continue;
        }
        if arg.starts_with("--jobs=") {
            continue;
        }
        out.push(arg);
    }
    out
}

/// Flatten a conjecture outcome into the unified record shape. Agreement
/// maps to pass, disagreement to fail (the summary counts them there; the
/// exit code treats sweep records as evidence unless --strict-conjectures).
pub fn outcome_record(o: &ConjectureOutcome) -> CheckRecord {
    let mut params = ParamSet {
        p: Some(o.p as i64),
        a: Some(o.a as i64),
        n: Some(o.n as i64),
        m: o.m.map(|m| m as i64),
        k: o.k.map(|k| k as i64),
    };
    if o.m.is_none() {
        params.m = None;
    }
    let status = if !o.guard_satisfied {
        Status::GuardSkipped
    } else if o.agrees {
        Status::Pass
    } else {
        Status::Fail
    };
    CheckRecord {
        check_id: format!("conjecture{}", o.conjecture),
        params,
        predicted: o
            .predicted
            .map(|p| p.to_string())
            .unwrap_or_else(|| "out of guard".to_string()),
        actual: match o.actual {
            Some(v) => ActualValue::Valuation(v),
            None => ActualValue::None,
        },
        status,
        detail: (status == Status::Fail)
            .then(|| "conjecture evidence: disagreement, not a process failure".to_string()),
    }
}

/// Two records per closed-form comparison: the verbatim reading (trailing
/// p^n) and the corrected reading (p^m).
pub fn ky_records(ky: &KyComparison) -> [CheckRecord; 2] {
    let params = ParamSet {
        p: Some(ky.p as i64),
        a: Some(ky.a as i64),
        n: Some(ky.n as i64),
        m: Some(ky.m as i64),
        k: None,
    };
    let make = |check_id: &str, value: i64, agrees: bool, note: &str| CheckRecord {
        check_id: check_id.to_string(),
        params,
        predicted: format!("= {value}"),
        actual: ActualValue::Valuation(Valuation::Finite(ky.actual)),
        status: if agrees { Status::Pass } else { Status::Fail },
        detail: Some(note.to_string()),
    };
    [
        make(
            "ky_closed_form_printed",
            ky.printed_value,
            ky.printed_agrees(),
            "closed form read verbatim with trailing exponent n",
        ),
        make(
            "ky_closed_form_corrected",
            ky.corrected_value,
            ky.corrected_agrees(),
            "closed form with trailing exponent m",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, k: i64, status: Status) -> CheckRecord {
        CheckRecord {
            check_id: id.into(),
            params: ParamSet {
                p: Some(5),
                a: Some(1),
                n: None,
                m: None,
                k: Some(k),
            },
            predicted: "= 1".into(),
            actual: ActualValue::Valuation(Valuation::Finite(1)),
            status,
            detail: None,
        }
    }

    #[test]
    fn json_round_trip() {
        let doc = ReportDocument::assemble(
            vec![
                record("b", 2, Status::Pass),
                record("a", 9, Status::Fail),
                record("a", 3, Status::HypothesisNotMet),
            ],
            12,
            true,
        );
        let text = doc.to_json();
        let parsed: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, doc);
        // sorted by (check_id, params)
        assert_eq!(parsed.records[0].check_id, "a");
        assert_eq!(parsed.records[0].params.k, Some(3));
        assert_eq!(parsed.summary.pass, 1);
        assert_eq!(parsed.summary.fail, 1);
        assert_eq!(parsed.summary.hypothesis_not_met, 1);
    }

    #[test]
    fn infinity_serializes_as_string() {
        let mut rec = record("x", 1, Status::Pass);
        rec.actual = ActualValue::Valuation(Valuation::Infinite);
        let doc = ReportDocument::assemble(vec![rec], 0, false);
        let text = doc.to_json();
        assert!(text.contains("\"actual\": \"inf\""));
        let parsed: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(
            parsed.records[0].actual,
            ActualValue::Valuation(Valuation::Infinite)
        );
    }

    #[test]
    fn csv_has_fixed_columns() {
        let doc = ReportDocument::assemble(vec![record("t", 4, Status::Pass)], 0, false);
        let mut buf = Vec::new();
        doc.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "check_id,p,a,n,m,k,predicted,actual,status"
        );
        assert_eq!(lines.next().unwrap(), "t,5,1,,,4,= 1,1,pass");
    }
}
