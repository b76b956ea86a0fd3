//! The two canonical process decompositions of a system.
//!
//! A traveler is the process of one agent: its messages plus the states of
//! the servers those messages visit. A resident is the process of one
//! server: its states plus the messages directed to it. Either family
//! partitions the action set, which is what the per-agent and per-server
//! detectors quantify over.

use crate::bitset::BitSet;
use crate::ident::{ActionId, AgentId, ServerId};
use crate::model::{servers_of, Message, ServerState, SystemSpec};

/// The items making up one traveler or resident process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessItems {
    /// Message literals of the process, in ordinal order, deduplicated.
    pub messages: Vec<Message>,
    /// Server-state literals of the process, in ordinal order.
    pub states: Vec<ServerState>,
    /// Actions owned by the process (input message for travelers, input
    /// state for residents).
    pub actions: Vec<ActionId>,
}

/// Message literals of agent `a` occurring anywhere in the spec, plus the
/// state literals of the servers those messages target, plus the actions
/// consuming a message of `a`.
pub fn traveler_of(spec: &SystemSpec, a: AgentId) -> ProcessItems {
    let mut messages: Vec<Message> = spec
        .actions()
        .iter()
        .flat_map(|act| [Some(act.in_message), act.out_message])
        .flatten()
        .filter(|m| m.agent == a)
        .collect();
    messages.push(spec.agent_decl(a).initial);
    messages.sort_unstable();
    messages.dedup();

    let mut states = Vec::new();
    for server in servers_of(messages.iter().copied()) {
        for &st in &spec.server_decl(server).states {
            states.push(ServerState { server, state: st });
        }
    }

    let actions = spec
        .actions()
        .iter()
        .filter(|act| act.in_message.agent == a)
        .map(|act| act.id)
        .collect();

    ProcessItems {
        messages,
        states,
        actions,
    }
}

/// State literals of server `s` plus all messages directed to it occurring
/// anywhere in the spec, plus the actions executing on `s`.
pub fn resident_of(spec: &SystemSpec, s: ServerId) -> ProcessItems {
    let mut messages: Vec<Message> = spec
        .actions()
        .iter()
        .flat_map(|act| [Some(act.in_message), act.out_message])
        .flatten()
        .filter(|m| m.server == s)
        .collect();
    for a in spec.agent_ids() {
        let init = spec.agent_decl(a).initial;
        if init.server == s {
            messages.push(init);
        }
    }
    messages.sort_unstable();
    messages.dedup();

    let states = spec
        .server_decl(s)
        .states
        .iter()
        .map(|&st| ServerState {
            server: s,
            state: st,
        })
        .collect();

    let actions = spec
        .actions()
        .iter()
        .filter(|act| act.in_state.server == s)
        .map(|act| act.id)
        .collect();

    ProcessItems {
        messages,
        states,
        actions,
    }
}

/// Per-agent action masks: entry `a` holds the actions of traveler `a`.
pub fn agent_action_masks(spec: &SystemSpec) -> Vec<BitSet> {
    let mut masks = vec![BitSet::new(spec.action_count()); spec.agent_count()];
    for act in spec.actions() {
        masks[act.in_message.agent.index()].insert(act.id.index());
    }
    masks
}

/// Per-server action masks: entry `s` holds the actions of resident `s`.
pub fn server_action_masks(spec: &SystemSpec) -> Vec<BitSet> {
    let mut masks = vec![BitSet::new(spec.action_count()); spec.server_count()];
    for act in spec.actions() {
        masks[act.in_state.server.index()].insert(act.id.index());
    }
    masks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SpecBuilder;

    fn looping_pair() -> SystemSpec {
        let mut b = SpecBuilder::new();
        b.add_server("r", &["res"], &["left", "right"], "res")
            .unwrap();
        b.add_server("s", &["q"], &["go"], "q").unwrap();
        b.add_agent("A3", "r", "left").unwrap();
        b.add_agent("B", "s", "go").unwrap();
        b.rule("A3", "r", "left", "res", "res", Some(("r", "right")))
            .unwrap();
        b.rule("A3", "r", "right", "res", "res", Some(("r", "left")))
            .unwrap();
        b.rule("B", "s", "go", "q", "q", Some(("s", "go"))).unwrap();
        b.finish().unwrap()
    }

    #[test]
    fn traveler_and_resident_items() {
        let spec = looping_pair();
        let a3 = spec.agent_by_name("A3").unwrap();
        let r = spec.server_by_name("r").unwrap();

        let t = traveler_of(&spec, a3);
        let msg_texts: Vec<String> = t.messages.iter().map(|&m| spec.message_text(m)).collect();
        assert_eq!(msg_texts, vec!["A3.r.left", "A3.r.right"]);
        assert_eq!(t.states.len(), 1);
        assert_eq!(spec.state_text(t.states[0]), "r.res");
        assert_eq!(t.actions.len(), 2);

        let res = resident_of(&spec, r);
        assert_eq!(res.messages, t.messages);
        assert_eq!(res.states, t.states);
        assert_eq!(res.actions, t.actions);
    }

    #[test]
    fn decompositions_partition_the_action_set() {
        let spec = looping_pair();
        let mut by_agent: Vec<ActionId> = spec
            .agent_ids()
            .flat_map(|a| traveler_of(&spec, a).actions)
            .collect();
        let mut by_server: Vec<ActionId> = spec
            .server_ids()
            .flat_map(|s| resident_of(&spec, s).actions)
            .collect();
        by_agent.sort_unstable();
        by_server.sort_unstable();
        let all: Vec<ActionId> = spec.actions().iter().map(|a| a.id).collect();
        assert_eq!(by_agent, all);
        assert_eq!(by_server, all);
    }

    #[test]
    fn action_masks_match_decompositions() {
        let spec = looping_pair();
        let masks = agent_action_masks(&spec);
        for a in spec.agent_ids() {
            let expected: Vec<usize> = traveler_of(&spec, a)
                .actions
                .iter()
                .map(|id| id.index())
                .collect();
            assert_eq!(masks[a.index()].iter().collect::<Vec<_>>(), expected);
        }
        let masks = server_action_masks(&spec);
        for s in spec.server_ids() {
            let expected: Vec<usize> = resident_of(&spec, s)
                .actions
                .iter()
                .map(|id| id.index())
                .collect();
            assert_eq!(masks[s.index()].iter().collect::<Vec<_>>(), expected);
        }
    }
}
