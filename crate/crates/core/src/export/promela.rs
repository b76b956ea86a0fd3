//! Promela rendering of a spec, bridging to the Spin model checker.
//!
//! Scheme: one proctype per server instance; one capacity-1 channel per
//! communicating (agent, server) pair carrying the service as an `mtype`;
//! numeric `#define`s for state names; per-branch poll-then-consume (the
//! channel is polled for the exact service and guarded on the server
//! state, then the message is consumed, the state updated and the
//! continuation message sent); pending-message and action-activity
//! tracking variables with `#define` propositions for use in LTL
//! properties; an `init` process that spawns every server and issues the
//! agents' initial messages.
//!
//! The tracking variables are maintained by the sender, so the pending
//! proposition leads the actual send by one internal statement; see the
//! repository notes on the translation for details.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ident::{AgentId, ServerId, StateId};
use crate::model::SystemSpec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PromelaError {
    #[error("`{0}` collides with another generated identifier; rename it in the model")]
    NameClash(String),
    #[error(
        "a service named `none` collides with the generated empty-channel constant; rename it"
    )]
    ReservedServiceName,
}

const RESERVED: &[&str] = &[
    "active", "assert", "atomic", "bit", "bool", "break", "byte", "chan", "d_step", "do", "else",
    "empty", "enabled", "eval", "false", "fi", "for", "full", "goto", "hidden", "if", "init",
    "inline", "int", "len", "local", "ltl", "mtype", "nempty", "never", "nfull", "notrace", "np_",
    "od", "of", "pc_value", "pid", "printf", "priority", "proctype", "provided", "run", "select",
    "short", "skip", "timeout", "trace", "true", "typedef", "unless", "unsigned", "xr", "xs",
];

fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
        .collect();
    if s.is_empty() || s.chars().next().unwrap().is_ascii_digit() {
        s.insert(0, '_');
    }
    if RESERVED.contains(&s.as_str()) {
        s.push('_');
    }
    s
}

struct Names {
    agents: Vec<String>,
    servers: Vec<String>,
    /// Channel / tracker base name per (agent, server) pair.
    state_defs: Vec<String>,
    mes_var: &'static str,
    state_var: &'static str,
}

impl Names {
    fn chan(&self, a: AgentId, s: ServerId) -> String {
        format!("{}_{}", self.agents[a.index()], self.servers[s.index()])
    }

    fn pend(&self, a: AgentId, s: ServerId) -> String {
        format!("{}_pend", self.chan(a, s))
    }

    fn act(&self, s: ServerId) -> String {
        format!("{}_act", self.servers[s.index()])
    }

    fn state_def(&self, st: StateId) -> &str {
        &self.state_defs[st.index()]
    }
}

fn build_names(spec: &SystemSpec) -> Result<Names, PromelaError> {
    let mut taken: BTreeSet<String> = RESERVED.iter().map(|s| s.to_string()).collect();
    taken.insert("none".into());

    for sv in spec.service_ids() {
        let name = spec.service_name(sv);
        if name == "none" {
            return Err(PromelaError::ReservedServiceName);
        }
        if !taken.insert(name.to_string()) {
            return Err(PromelaError::NameClash(name.to_string()));
        }
    }

    fn claim(taken: &mut BTreeSet<String>, name: String) -> Result<String, PromelaError> {
        if taken.insert(name.clone()) {
            Ok(name)
        } else {
            Err(PromelaError::NameClash(name))
        }
    }

    let mut agents = Vec::new();
    for a in spec.agent_ids() {
        agents.push(claim(&mut taken, sanitize(spec.agent_name(a)))?);
    }
    let mut servers = Vec::new();
    for s in spec.server_ids() {
        servers.push(claim(&mut taken, sanitize(spec.server_name(s)))?);
    }

    // Local variable names inside proctypes; step aside if the model uses
    // the plain words.
    let mes_var = if taken.contains("mes") { "mes_" } else { "mes" };
    let state_var = if taken.contains("state") {
        "state_"
    } else {
        "state"
    };

    // State names become numeric defines; a define would textually rewrite
    // any same-named identifier, so suffix the colliding ones.
    let mut state_defs = Vec::new();
    for st in spec.state_ids() {
        let name = spec.state_name(st);
        let candidate = if taken.contains(name) || name == mes_var || name == state_var {
            format!("{name}_st")
        } else {
            name.to_string()
        };
        state_defs.push(claim(&mut taken, candidate)?);
    }

    Ok(Names {
        agents,
        servers,
        state_defs,
        mes_var,
        state_var,
    })
}

/// All (agent, server) pairs exchanging messages, by ordinal.
fn comm_pairs(spec: &SystemSpec) -> BTreeSet<(AgentId, ServerId)> {
    let mut pairs = BTreeSet::new();
    for a in spec.agent_ids() {
        let m = spec.agent_decl(a).initial;
        pairs.insert((m.agent, m.server));
    }
    for act in spec.actions() {
        pairs.insert((act.in_message.agent, act.in_message.server));
        if let Some(m) = act.out_message {
            pairs.insert((m.agent, m.server));
        }
    }
    pairs
}

pub fn to_promela(spec: &SystemSpec) -> Result<String, PromelaError> {
    let names = build_names(spec)?;
    let pairs = comm_pairs(spec);
    let mut out = String::new();

    // Service alphabet.
    let services: Vec<&str> = spec.service_ids().map(|sv| spec.service_name(sv)).collect();
    out.push_str(&format!("mtype = {{ none, {} }};\n\n", services.join(", ")));

    // Numeric state values.
    for st in spec.state_ids() {
        out.push_str(&format!(
            "#define {} {}\n",
            names.state_def(st),
            st.index() + 1
        ));
    }
    out.push('\n');

    // Channels and pending-message trackers, one per communicating pair.
    for &(a, s) in &pairs {
        out.push_str(&format!(
            "chan {} = [1] of {{ mtype }};\n",
            names.chan(a, s)
        ));
    }
    out.push('\n');
    for &(a, s) in &pairs {
        out.push_str(&format!("mtype {} = none;\n", names.pend(a, s)));
    }
    for s in spec.server_ids() {
        out.push_str(&format!("int {} = 0;\n", names.act(s)));
    }
    out.push('\n');

    // Propositions for LTL properties.
    for &(a, s) in &pairs {
        out.push_str(&format!(
            "#define {}c{} ({} != none)\n",
            names.servers[s.index()],
            names.agents[a.index()],
            names.pend(a, s)
        ));
    }
    for s in spec.server_ids() {
        out.push_str(&format!(
            "#define {}act ({} != 0)\n",
            names.servers[s.index()],
            names.act(s)
        ));
    }
    out.push('\n');

    // One proctype per server: poll the exact service, guard on the state,
    // consume, update, send the continuation.
    for s in spec.server_ids() {
        let sname = &names.servers[s.index()];
        out.push_str(&format!("proctype {sname}()\n{{\n"));
        let actions: Vec<_> = spec
            .actions()
            .iter()
            .filter(|a| a.in_state.server == s)
            .collect();
        if actions.is_empty() {
            out.push_str("    skip\n}\n\n");
            continue;
        }
        out.push_str(&format!("    mtype {};\n", names.mes_var));
        out.push_str(&format!(
            "    int {} = {};\n",
            names.state_var,
            names.state_def(spec.server_decl(s).initial)
        ));
        out.push_str("    do\n");
        for act in actions {
            let chan = names.chan(act.in_message.agent, s);
            let svc = spec.service_name(act.in_message.service);
            out.push_str(&format!(
                "    :: {chan}?[{svc}] && ({} == {}) ->\n",
                names.state_var,
                names.state_def(act.in_state.state)
            ));
            out.push_str(&format!("        {chan}?{};\n", names.mes_var));
            out.push_str(&format!(
                "        {} = none;\n",
                names.pend(act.in_message.agent, s)
            ));
            out.push_str(&format!("        {} = 1;\n", names.act(s)));
            out.push_str(&format!(
                "        {} = {};\n",
                names.state_var,
                names.state_def(act.out_state.state)
            ));
            match act.out_message {
                Some(m) => {
                    out.push_str(&format!("        {} = 0;\n", names.act(s)));
                    let out_svc = spec.service_name(m.service);
                    out.push_str(&format!(
                        "        {} = {out_svc};\n",
                        names.pend(m.agent, m.server)
                    ));
                    out.push_str(&format!(
                        "        {}!{out_svc}\n",
                        names.chan(m.agent, m.server)
                    ));
                }
                None => {
                    out.push_str(&format!("        {} = 0\n", names.act(s)));
                }
            }
        }
        out.push_str("    od\n}\n\n");
    }

    out.push_str("init {\n");
    for s in spec.server_ids() {
        out.push_str(&format!("    run {}();\n", names.servers[s.index()]));
    }
    for a in spec.agent_ids() {
        let m = spec.agent_decl(a).initial;
        let svc = spec.service_name(m.service);
        out.push_str(&format!("    {} = {svc};\n", names.pend(a, m.server)));
        out.push_str(&format!("    {}!{svc};\n", names.chan(a, m.server)));
    }
    out.push_str("}\n");
    Ok(out)
}
