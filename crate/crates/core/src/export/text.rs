//! Human-readable analysis report, one verdict block per check.

use crate::detect::{AnalysisReport, Evidence};
use crate::lts::Lts;
use crate::model::SystemSpec;

pub fn text_report(spec: &SystemSpec, lts: &Lts, analysis: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "model: {} agents, {} servers, {} actions\n",
        spec.agent_count(),
        spec.server_count(),
        spec.action_count()
    ));
    out.push_str(&format!(
        "state space: {} states, {} transitions\n",
        lts.stats().state_count,
        lts.stats().transition_count
    ));
    out.push_str(&format!(
        "terminal states: {} clean, {} stuck\n\n",
        analysis.terminals.clean.len(),
        analysis.terminals.stuck.len()
    ));
    for v in analysis.all_verdicts() {
        out.push_str(&v.headline(spec));
        out.push('\n');
        out.push_str(&format!("  formula: {}\n", v.formula));
        out.push_str(&format!("  reading: {}\n", v.reading));
        out.push_str(&format!("  {}\n", v.diagnosis));
        match &v.evidence {
            Evidence::Witness(path) => {
                out.push_str("  witness:\n");
                if path.is_empty() {
                    out.push_str("    (the initial configuration itself)\n");
                }
                for line in path.render(spec) {
                    out.push_str(&format!("    {line}\n"));
                }
            }
            Evidence::Lasso(lasso) => {
                out.push_str("  run that never serves it:\n");
                for line in lasso.stem.render(spec) {
                    out.push_str(&format!("    {line}\n"));
                }
                if lasso.cycle.is_empty() {
                    out.push_str(&format!(
                        "    then stays in terminal #{} forever\n",
                        lasso.cycle.states[0]
                    ));
                } else {
                    out.push_str("    then repeats forever:\n");
                    for line in lasso.cycle.render(spec) {
                        out.push_str(&format!("    {line}\n"));
                    }
                }
            }
            Evidence::None => {}
        }
        out.push('\n');
    }
    out
}
