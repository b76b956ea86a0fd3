//! Self-contained analysis reports with canonical JSON serialization.
//!
//! The JSON form has a fixed key order and LF line endings, so two runs
//! over the same input produce identical bytes. Traces carry rendered
//! action texts next to the state indices, making them replayable against
//! the spec without the transition system at hand.

use serde::{Deserialize, Serialize};

use crate::ctl::{Lasso, Path};
use crate::detect::{AnalysisReport, CheckKind, Evidence, Verdict};
use crate::lts::Lts;
use crate::model::{SourceView, SystemSpec};
use crate::parse::render;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub spec_digest: String,
    pub lts: LtsSummary,
    pub terminals: TerminalSummary,
    pub verdicts: Vec<VerdictRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtsSummary {
    pub states: usize,
    pub transitions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalSummary {
    pub clean: Vec<u32>,
    pub stuck: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub holds: bool,
    pub formula: String,
    pub reading: String,
    pub diagnosis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<TraceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lasso: Option<LassoRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub from: u32,
    pub action: String,
    pub to: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoRecord {
    pub stem: TraceRecord,
    /// Empty steps denote the implicit self-loop of a terminal state.
    pub cycle: TraceRecord,
}

fn check_slug(kind: CheckKind) -> &'static str {
    match kind {
        CheckKind::ResourceDeadlock => "resource-deadlock",
        CheckKind::CommunicationDeadlock => "communication-deadlock",
        CheckKind::Termination => "termination",
        CheckKind::TotalDeadlock => "total-deadlock",
    }
}

fn trace_record(spec: &SystemSpec, path: &Path) -> TraceRecord {
    TraceRecord {
        steps: path
            .actions
            .iter()
            .zip(path.states.windows(2))
            .map(|(&a, w)| StepRecord {
                from: w[0],
                action: spec.action_text(a),
                to: w[1],
            })
            .collect(),
    }
}

fn lasso_record(spec: &SystemSpec, lasso: &Lasso) -> LassoRecord {
    LassoRecord {
        stem: trace_record(spec, &lasso.stem),
        cycle: trace_record(spec, &lasso.cycle),
    }
}

fn verdict_record(spec: &SystemSpec, v: &Verdict) -> VerdictRecord {
    VerdictRecord {
        check: check_slug(v.kind).to_string(),
        subject: v.subject_name(spec),
        holds: v.holds,
        formula: v.formula.clone(),
        reading: v.reading.to_string(),
        diagnosis: v.diagnosis.clone(),
        witness: match &v.evidence {
            Evidence::Witness(p) => Some(trace_record(spec, p)),
            _ => None,
        },
        lasso: match &v.evidence {
            Evidence::Lasso(l) => Some(lasso_record(spec, l)),
            _ => None,
        },
    }
}

/// FNV-1a over the canonical server-view rendering.
pub fn spec_digest(spec: &SystemSpec) -> String {
    let text = render(spec, SourceView::Server);
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in text.bytes() {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a64:{hash:016x}")
}

pub fn build_report(spec: &SystemSpec, lts: &Lts, analysis: &AnalysisReport) -> Report {
    Report {
        tool: format!("imds {}", env!("CARGO_PKG_VERSION")),
        spec_digest: spec_digest(spec),
        lts: LtsSummary {
            states: lts.stats().state_count,
            transitions: lts.stats().transition_count,
        },
        terminals: TerminalSummary {
            clean: analysis.terminals.clean.clone(),
            stuck: analysis.terminals.stuck.clone(),
        },
        verdicts: analysis
            .all_verdicts()
            .map(|v| verdict_record(spec, v))
            .collect(),
    }
}

/// Canonical bytes: pretty JSON with a trailing newline.
pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn report_from_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::check_all;
    use crate::lts::LtsLimits;
    use crate::model::SpecBuilder;

    fn sample() -> Report {
        let mut b = SpecBuilder::new();
        b.add_server("s", &["q", "never"], &["go"], "q").unwrap();
        b.add_agent("A", "s", "go").unwrap();
        b.rule("A", "s", "go", "never", "q", None).unwrap();
        let spec = b.finish().unwrap();
        let lts = Lts::build(&spec, &LtsLimits::default()).unwrap();
        build_report(&spec, &lts, &check_all(&lts, &spec))
    }

    #[test]
    fn json_roundtrips_to_equal_report() {
        let report = sample();
        let json = report_json(&report);
        let back = report_from_json(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn serialization_is_stable() {
        let report = sample();
        assert_eq!(report_json(&report), report_json(&report));
        assert!(report_json(&report).ends_with("}\n"));
        assert!(!report_json(&report).contains('\r'));
    }

    #[test]
    fn digest_tracks_content() {
        let mut b = SpecBuilder::new();
        b.add_server("s", &["q"], &["go"], "q").unwrap();
        b.add_agent("A", "s", "go").unwrap();
        b.rule("A", "s", "go", "q", "q", Some(("s", "go"))).unwrap();
        let spec_a = b.finish().unwrap();

        let mut b = SpecBuilder::new();
        b.add_server("s", &["q"], &["go"], "q").unwrap();
        b.add_agent("B", "s", "go").unwrap();
        b.rule("B", "s", "go", "q", "q", Some(("s", "go"))).unwrap();
        let spec_b = b.finish().unwrap();

        assert_ne!(spec_digest(&spec_a), spec_digest(&spec_b));
        assert_eq!(spec_digest(&spec_a), spec_digest(&spec_a));
    }
}
