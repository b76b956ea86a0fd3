//! Graph description output for visualizing the state space.

use thiserror::Error;

use crate::lts::Lts;
use crate::model::SystemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    /// Nodes carry their state index.
    Index,
    /// Nodes carry the full configuration text.
    Configuration,
}

#[derive(Debug, Clone, Copy)]
pub struct DotOptions {
    pub max_states: usize,
    pub label_mode: LabelMode,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            max_states: 2000,
            label_mode: LabelMode::Index,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DotError {
    #[error("too large to render: {states} states exceed the limit of {max}")]
    TooLarge { states: usize, max: usize },
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One node per state, one edge per transition labeled with the fired
/// action. The initial state is drawn bold, stuck terminals filled red,
/// clean terminals filled green.
pub fn to_dot(lts: &Lts, spec: &SystemSpec, options: &DotOptions) -> Result<String, DotError> {
    if lts.state_count() > options.max_states {
        return Err(DotError::TooLarge {
            states: lts.state_count(),
            max: options.max_states,
        });
    }
    let mut out = String::from("digraph lts {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle, fontsize=10];\n");
    for i in 0..lts.state_count() as u32 {
        let label = match options.label_mode {
            LabelMode::Index => i.to_string(),
            LabelMode::Configuration => format!("{}\\n{}", i, escape(&lts.state(i).text(spec))),
        };
        let mut attrs = format!("label=\"{label}\"");
        if i == 0 {
            attrs.push_str(", penwidth=2");
        }
        if lts.is_terminal(i) {
            if lts.any_pending(i) {
                attrs.push_str(", style=filled, fillcolor=\"#f1b6bb\"");
            } else {
                attrs.push_str(", style=filled, fillcolor=\"#bfe5c8\"");
            }
        }
        out.push_str(&format!("  {i} [{attrs}];\n"));
    }
    for t in lts.transitions() {
        out.push_str(&format!(
            "  {} -> {} [label=\"{}\"];\n",
            t.src,
            t.dst,
            escape(&spec.action_text(t.action))
        ));
    }
    out.push_str("}\n");
    Ok(out)
}
