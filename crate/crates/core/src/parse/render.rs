//! Renders a flat spec back to source text in either canonical view.
//!
//! The output is non-templated: one block per server (grouping actions by
//! the server they execute on) or per agent (grouping by the agent whose
//! message they consume). Re-parsing a rendering yields the same flat
//! action set and initial configuration, and rendering is idempotent from
//! then on.

use crate::model::{SourceView, SystemSpec};

pub fn render(spec: &SystemSpec, view: SourceView) -> String {
    match view {
        SourceView::Server => render_server_view(spec),
        SourceView::Agent => render_agent_view(spec),
    }
}

fn render_server_view(spec: &SystemSpec) -> String {
    let mut out = String::new();
    for s in spec.server_ids() {
        let decl = spec.server_decl(s);
        out.push_str(&format!("server: {},\n", spec.server_name(s)));
        let services: Vec<&str> = decl
            .services
            .iter()
            .map(|&v| spec.service_name(v))
            .collect();
        if !services.is_empty() {
            out.push_str(&format!("services {{{}}},\n", services.join(", ")));
        }
        let states: Vec<&str> = decl.states.iter().map(|&v| spec.state_name(v)).collect();
        if !states.is_empty() {
            out.push_str(&format!("states {{{}}},\n", states.join(", ")));
        }
        let actions: Vec<_> = spec
            .actions()
            .iter()
            .filter(|a| a.in_state.server == s)
            .collect();
        if !actions.is_empty() {
            out.push_str("actions\n");
            for a in actions {
                out.push_str(&format!("    {},\n", spec.action_text(a.id)));
            }
        }
        out.push_str("end;\n\n");
    }
    push_population_and_init(
        spec,
        &mut out,
        // Servers have verbatim per-instance blocks above; agents are bare.
        &compress_names(&agent_names(spec)),
        &server_names(spec),
    );
    out
}

fn render_agent_view(spec: &SystemSpec) -> String {
    let mut out = String::new();
    for a in spec.agent_ids() {
        out.push_str(&format!("agent: {},\n", spec.agent_name(a)));
        let actions: Vec<_> = spec
            .actions()
            .iter()
            .filter(|act| act.in_message.agent == a)
            .collect();

        // Service and state sets of a traveler block are the names its own
        // actions touch, in first-use order.
        let mut services: Vec<&str> = Vec::new();
        for act in &actions {
            for m in [Some(act.in_message), act.out_message]
                .into_iter()
                .flatten()
            {
                let name = spec.service_name(m.service);
                if !services.contains(&name) {
                    services.push(name);
                }
            }
        }
        let init_service = spec.service_name(spec.agent_decl(a).initial.service);
        if !services.contains(&init_service) {
            services.push(init_service);
        }
        let mut states: Vec<&str> = Vec::new();
        for act in &actions {
            for st in [act.in_state, act.out_state] {
                let name = spec.state_name(st.state);
                if !states.contains(&name) {
                    states.push(name);
                }
            }
        }

        if !services.is_empty() {
            out.push_str(&format!("services {{{}}},\n", services.join(", ")));
        }
        if !states.is_empty() {
            out.push_str(&format!("states {{{}}},\n", states.join(", ")));
        }
        if !actions.is_empty() {
            out.push_str("actions\n");
            for act in &actions {
                out.push_str(&format!("    {},\n", spec.action_text(act.id)));
            }
        }
        out.push_str("end;\n\n");
    }
    push_population_and_init(
        spec,
        &mut out,
        &agent_names(spec),
        &compress_names(&server_names(spec)),
    );
    out
}

fn agent_names(spec: &SystemSpec) -> Vec<String> {
    spec.agent_ids()
        .map(|a| spec.agent_name(a).to_string())
        .collect()
}

fn server_names(spec: &SystemSpec) -> Vec<String> {
    spec.server_ids()
        .map(|s| spec.server_name(s).to_string())
        .collect()
}

fn compress_names(names: &[String]) -> Vec<String> {
    compress(names)
}

fn push_population_and_init(
    spec: &SystemSpec,
    out: &mut String,
    agents: &[String],
    servers: &[String],
) {
    if !agents.is_empty() {
        out.push_str(&format!("agents: {};\n", agents.join(", ")));
    }
    if !servers.is_empty() {
        out.push_str(&format!("servers: {};\n", servers.join(", ")));
    }
    out.push_str("\ninit -> {\n");
    for a in spec.agent_ids() {
        let m = spec.agent_decl(a).initial;
        out.push_str(&format!("    {},\n", spec.message_text(m)));
    }
    for s in spec.server_ids() {
        let decl = spec.server_decl(s);
        out.push_str(&format!(
            "    {}.{},\n",
            spec.server_name(s),
            spec.state_name(decl.initial)
        ));
    }
    out.push_str("}.\n");
}

/// Splits `base[int]` names; everything else is left whole.
fn split_indexed(name: &str) -> Option<(&str, i64)> {
    let open = name.find('[')?;
    if !name.ends_with(']') {
        return None;
    }
    let idx: i64 = name[open + 1..name.len() - 1].parse().ok()?;
    Some((&name[..open], idx))
}

/// Re-compresses dense `base[1]..base[k]` runs back into array declarations
/// (`base[k]`), leaving all other names verbatim. This is the inverse of
/// array expansion for the bare population kind of a rendering.
fn compress(names: &[String]) -> Vec<String> {
    use std::collections::HashMap;
    let mut groups: HashMap<&str, Vec<i64>> = HashMap::new();
    for n in names {
        if let Some((base, idx)) = split_indexed(n) {
            groups.entry(base).or_default().push(idx);
        }
    }
    let dense = |base: &str| {
        let mut idxs = groups[base].clone();
        idxs.sort_unstable();
        idxs.first() == Some(&1) && idxs.iter().enumerate().all(|(i, &v)| v == i as i64 + 1)
    };
    let mut out = Vec::new();
    let mut emitted: Vec<&str> = Vec::new();
    for n in names {
        match split_indexed(n) {
            Some((base, _)) if dense(base) => {
                if !emitted.contains(&base) {
                    emitted.push(base);
                    out.push(format!("{}[{}]", base, groups[base].len()));
                }
            }
            _ => out.push(n.clone()),
        }
    }
    out
}
