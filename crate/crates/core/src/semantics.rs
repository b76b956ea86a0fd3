//! Enabledness and firing.
//!
//! An action is enabled in a configuration when its input message is the
//! pending message of its agent and its input state is the current state of
//! its server. Firing consumes both, installs the continuation state and
//! replaces the agent's pending message by the continuation message (or
//! removes the agent for a terminating action). Everything else is left
//! untouched, which is what makes actions on distinct servers with distinct
//! agents commute.

use thiserror::Error;

use crate::ident::ActionId;
use crate::model::{ActionDef, Configuration, SystemSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FireError {
    #[error("action {action} is not enabled in this configuration")]
    NotEnabled { action: usize },
}

pub fn is_enabled(c: &Configuration, action: &ActionDef) -> bool {
    c.pending_of(action.in_message.agent) == Some(action.in_message)
        && c.state_of(action.in_state.server) == action.in_state.state
}

/// All actions enabled in `c`, in action ordinal order.
pub fn enabled_actions(spec: &SystemSpec, c: &Configuration) -> Vec<ActionId> {
    spec.actions()
        .iter()
        .filter(|a| is_enabled(c, a))
        .map(|a| a.id)
        .collect()
}

/// Fires `action` in `c`, returning the successor configuration. `c` itself
/// is never mutated.
pub fn fire(
    spec: &SystemSpec,
    c: &Configuration,
    action: ActionId,
) -> Result<Configuration, FireError> {
    let def = spec.action(action);
    if !is_enabled(c, def) {
        return Err(FireError::NotEnabled {
            action: action.index(),
        });
    }
    let mut next = c.clone();
    next.set_state(def.out_state.server, def.out_state.state);
    next.set_pending(
        def.in_message.agent,
        def.out_message.map(|m| (m.server, m.service)),
    );
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SpecBuilder;

    /// One server, one agent, a single terminating action.
    fn one_shot() -> SystemSpec {
        let mut b = SpecBuilder::new();
        b.add_server("s", &["q", "done"], &["go"], "q").unwrap();
        b.add_agent("A", "s", "go").unwrap();
        b.rule("A", "s", "go", "q", "done", None).unwrap();
        b.finish().unwrap()
    }

    #[test]
    fn initial_enabled_and_fire() {
        let spec = one_shot();
        let c0 = spec.initial_configuration();
        let enabled = enabled_actions(&spec, &c0);
        assert_eq!(enabled.len(), 1);
        let c1 = fire(&spec, &c0, enabled[0]).unwrap();
        let a = spec.agent_by_name("A").unwrap();
        let s = spec.server_by_name("s").unwrap();
        assert_eq!(c1.pending_of(a), None);
        assert_eq!(spec.state_name(c1.state_of(s)), "done");
        // The source configuration is untouched.
        assert!(c0.pending_of(a).is_some());
        assert!(enabled_actions(&spec, &c1).is_empty());
    }

    #[test]
    fn firing_disabled_action_is_an_error() {
        let spec = one_shot();
        let c0 = spec.initial_configuration();
        let act = enabled_actions(&spec, &c0)[0];
        let c1 = fire(&spec, &c0, act).unwrap();
        assert_eq!(
            fire(&spec, &c1, act),
            Err(FireError::NotEnabled { action: 0 })
        );
    }

    #[test]
    fn regular_action_replaces_pending_message() {
        let mut b = SpecBuilder::new();
        b.add_server("sem", &["up", "down"], &["wait"], "up")
            .unwrap();
        b.add_server("proc", &["ini", "first"], &["ok_wait"], "ini")
            .unwrap();
        b.add_agent("A", "sem", "wait").unwrap();
        b.rule("A", "sem", "wait", "up", "down", Some(("proc", "ok_wait")))
            .unwrap();
        let spec = b.finish().unwrap();
        let c0 = spec.initial_configuration();
        let c1 = fire(&spec, &c0, enabled_actions(&spec, &c0)[0]).unwrap();
        let a = spec.agent_by_name("A").unwrap();
        let m = c1.pending_of(a).unwrap();
        assert_eq!(spec.message_text(m), "A.proc.ok_wait");
        assert_eq!(
            spec.state_name(c1.state_of(spec.server_by_name("sem").unwrap())),
            "down"
        );
        // Untouched server keeps its state.
        assert_eq!(
            spec.state_name(c1.state_of(spec.server_by_name("proc").unwrap())),
            "ini"
        );
    }
}
