//! Serialization of transition systems, analysis reports and the Promela
//! bridge.

mod dot;
mod promela;
mod report;
mod text;

pub use dot::{to_dot, DotError, DotOptions, LabelMode};
pub use promela::{to_promela, PromelaError};
pub use report::{
    build_report, report_from_json, report_json, spec_digest, LassoRecord, LtsSummary, Report,
    StepRecord, TerminalSummary, TraceRecord, VerdictRecord,
};
pub use text::text_report;
