//! The named checks: resource deadlock per agent, communication deadlock
//! per server, traveler termination per agent, and total deadlock.
//!
//! Deadlock checks are existential (TRUE means the bad situation is
//! reachable) and carry a shortest witness path. The termination check is
//! universal (TRUE means the agent retires on every run) and a failure
//! carries a lasso describing an infinite run that keeps the agent's
//! message pending.
//!
//! Every check re-derives its greatest-fixpoint label set through the dual
//! least-fixpoint route and asserts agreement, as a standing self-test of
//! the labeling engine.

use crate::bitset::BitSet;
use crate::ctl::{witness_ef, Evaluator, Formula, Lasso, Path};
use crate::ident::{AgentId, ServerId};
use crate::lts::{Lts, TerminalClasses};
use crate::model::SystemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    ResourceDeadlock,
    CommunicationDeadlock,
    Termination,
    TotalDeadlock,
}

impl CheckKind {
    pub fn label(self) -> &'static str {
        match self {
            CheckKind::ResourceDeadlock => "resource deadlock",
            CheckKind::CommunicationDeadlock => "communication deadlock",
            CheckKind::Termination => "termination",
            CheckKind::TotalDeadlock => "total deadlock",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    Agent(AgentId),
    Server(ServerId),
    System,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    None,
    Witness(Path),
    Lasso(Lasso),
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub kind: CheckKind,
    pub subject: Subject,
    pub holds: bool,
    /// The checked formula in the textual syntax.
    pub formula: String,
    /// Quantifier reading of a TRUE result, to preempt misreading.
    pub reading: &'static str,
    pub evidence: Evidence,
    pub diagnosis: String,
}

impl Verdict {
    pub fn subject_name(&self, spec: &SystemSpec) -> Option<String> {
        match self.subject {
            Subject::Agent(a) => Some(spec.agent_name(a).to_string()),
            Subject::Server(s) => Some(spec.server_name(s).to_string()),
            Subject::System => None,
        }
    }

    /// `resource deadlock in A[1]: TRUE`
    pub fn headline(&self, spec: &SystemSpec) -> String {
        let holds = if self.holds { "TRUE" } else { "FALSE" };
        match self.subject_name(spec) {
            Some(name) => format!("{} in {}: {}", self.kind.label(), name, holds),
            None => format!("{}: {}", self.kind.label(), holds),
        }
    }
}

/// Aggregated verdicts, ordered by identifier ordinal.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub resource: Vec<Verdict>,
    pub communication: Vec<Verdict>,
    pub termination: Vec<Verdict>,
    pub total: Verdict,
    pub terminals: TerminalClasses,
}

impl AnalysisReport {
    pub fn all_verdicts(&self) -> impl Iterator<Item = &Verdict> {
        self.resource
            .iter()
            .chain(&self.communication)
            .chain(&self.termination)
            .chain(std::iter::once(&self.total))
    }

    pub fn any_deadlock(&self) -> bool {
        self.resource
            .iter()
            .chain(&self.communication)
            .chain(std::iter::once(&self.total))
            .any(|v| v.holds)
    }
}

const EXISTS_READING: &str = "existential: TRUE means the deadlock can occur on some run";
const TERMINATION_READING: &str =
    "universal: TRUE means every run eventually retires the agent for good";
const TOTAL_READING: &str =
    "existential: TRUE means some run reaches a configuration with pending messages and no enabled action";

/// `AG` of a set, cross-checked against the dual `!EF!` route.
fn ag_checked(ev: &Evaluator, inv: &BitSet) -> BitSet {
    let direct = ev.ag(inv);
    let dual = ev.ef(&inv.complement()).complement();
    assert_eq!(
        direct, dual,
        "labeling engine self-test failed: AG disagrees with !EF!"
    );
    direct
}

/// Can the agent reach a point where its message pends and none of its
/// actions can ever be enabled again?
pub fn check_resource_deadlock(lts: &Lts, spec: &SystemSpec, agent: AgentId) -> Verdict {
    let ev = Evaluator::new(lts, spec);
    resource_deadlock(&ev, spec, agent)
}

fn resource_deadlock(ev: &Evaluator, spec: &SystemSpec, agent: AgentId) -> Verdict {
    let lts = ev.lts();
    let pending = ev.eval(&Formula::PendingAgent(agent));
    let enabled = ev.eval(&Formula::EnabledAgentAction(agent));
    let never_enabled_again = ag_checked(ev, &enabled.complement());
    let mut target = pending;
    target.intersect_with(&never_enabled_again);
    let holds = ev.ef(&target).contains(0);

    let name = spec.agent_name(agent);
    let (evidence, diagnosis) = if holds {
        let path = witness_ef(lts, &target).expect("reachable target has a witness");
        let end = path.end();
        let msg = lts
            .state(end)
            .pending_of(agent)
            .map(|m| spec.message_text(m))
            .unwrap_or_else(|| "?".into());
        (
            Evidence::Witness(path),
            format!(
                "agent {name} can reach configuration #{end} where its message {msg} \
                 is pending and no action of the agent can ever become enabled again"
            ),
        )
    } else {
        (
            Evidence::None,
            format!(
                "whenever a message of agent {name} is pending, some action of the agent \
                 can still become enabled"
            ),
        )
    };
    Verdict {
        kind: CheckKind::ResourceDeadlock,
        subject: Subject::Agent(agent),
        holds,
        formula: Formula::PendingAgent(agent)
            .and(Formula::EnabledAgentAction(agent).not().ag())
            .ef()
            .to_text(spec),
        reading: EXISTS_READING,
        evidence,
        diagnosis,
    }
}

/// Can the server reach a point where messages directed to it pend and no
/// action on it can ever fire again?
pub fn check_comm_deadlock(lts: &Lts, spec: &SystemSpec, server: ServerId) -> Verdict {
    let ev = Evaluator::new(lts, spec);
    comm_deadlock(&ev, spec, server)
}

fn comm_deadlock(ev: &Evaluator, spec: &SystemSpec, server: ServerId) -> Verdict {
    let lts = ev.lts();
    let pending = ev.eval(&Formula::PendingAtServer(server));
    let enabled = ev.eval(&Formula::EnabledServerAction(server));
    let never_enabled_again = ag_checked(ev, &enabled.complement());
    let mut target = pending;
    target.intersect_with(&never_enabled_again);
    let holds = ev.ef(&target).contains(0);

    let name = spec.server_name(server);
    let (evidence, diagnosis) = if holds {
        let path = witness_ef(lts, &target).expect("reachable target has a witness");
        let end = path.end();
        let msgs: Vec<String> = lts
            .state(end)
            .pending_messages()
            .filter(|m| m.server == server)
            .map(|m| spec.message_text(m))
            .collect();
        (
            Evidence::Witness(path),
            format!(
                "server {name} can reach configuration #{end} where {} pending and \
                 no action on the server can ever fire again",
                if msgs.len() == 1 {
                    format!("{} is", msgs[0])
                } else {
                    format!("{} are", msgs.join(", "))
                }
            ),
        )
    } else {
        (
            Evidence::None,
            format!(
                "whenever messages are pending at server {name}, an action on the server \
                 can still become enabled"
            ),
        )
    };
    Verdict {
        kind: CheckKind::CommunicationDeadlock,
        subject: Subject::Server(server),
        holds,
        formula: Formula::PendingAtServer(server)
            .and(Formula::EnabledServerAction(server).not().ag())
            .ef()
            .to_text(spec),
        reading: EXISTS_READING,
        evidence,
        diagnosis,
    }
}

/// Does the agent terminate on every run: once its message is pending,
/// does it eventually disappear forever?
pub fn check_termination(lts: &Lts, spec: &SystemSpec, agent: AgentId) -> Verdict {
    let ev = Evaluator::new(lts, spec);
    termination(&ev, spec, agent)
}

fn termination(ev: &Evaluator, spec: &SystemSpec, agent: AgentId) -> Verdict {
    let pending = ev.eval(&Formula::PendingAgent(agent));
    let gone = pending.complement();
    let gone_forever = ag_checked(ev, &gone);
    let eventually_gone_forever = ev.af(&gone_forever);
    // With a static population an agent never reappears, so "eventually
    // always gone" and "eventually gone" coincide; both are computed and
    // must agree.
    assert_eq!(
        eventually_gone_forever,
        ev.af(&gone),
        "absorbing-termination lemma violated"
    );
    let mut implication = pending.complement();
    implication.union_with(&eventually_gone_forever);
    let holds = ag_checked(ev, &implication).contains(0);

    let name = spec.agent_name(agent);
    let (evidence, diagnosis) = if holds {
        (
            Evidence::None,
            format!(
                "on every run, once a message of agent {name} is pending it eventually \
                 disappears for good"
            ),
        )
    } else {
        let lasso = ev
            .lasso_counterexample(&pending)
            .expect("failed termination yields a pending-forever lasso");
        let looping = if lasso.cycle.actions.is_empty() {
            format!(
                "configuration #{} is terminal, pinning the message forever",
                lasso.cycle.states[0]
            )
        } else {
            format!(
                "the run then cycles through {} configurations without ever serving it",
                lasso.cycle.actions.len()
            )
        };
        (
            Evidence::Lasso(lasso),
            format!(
                "agent {name} admits an infinite run on which its message stays pending: {looping}"
            ),
        )
    };
    Verdict {
        kind: CheckKind::Termination,
        subject: Subject::Agent(agent),
        holds,
        formula: {
            let p = Formula::PendingAgent(agent);
            p.clone().implies(p.not().ag().af()).ag().to_text(spec)
        },
        reading: TERMINATION_READING,
        evidence,
        diagnosis,
    }
}

/// Is a terminal configuration with pending messages reachable?
pub fn check_total_deadlock(lts: &Lts, spec: &SystemSpec) -> Verdict {
    let terminals = lts.terminal_states();
    let holds = !terminals.stuck.is_empty();
    let (evidence, diagnosis) = if holds {
        let mut target = BitSet::new(lts.state_count());
        for &s in &terminals.stuck {
            target.insert(s as usize);
        }
        let path = witness_ef(lts, &target).expect("stuck terminals are reachable");
        let end = path.end();
        let msgs: Vec<String> = lts
            .state(end)
            .pending_messages()
            .map(|m| spec.message_text(m))
            .collect();
        (
            Evidence::Witness(path),
            format!(
                "configuration #{end} is reachable, enables no action, and leaves pending: {}",
                msgs.join(", ")
            ),
        )
    } else if terminals.clean.is_empty() {
        (
            Evidence::None,
            "no terminal configuration is reachable (some component can always act)".to_string(),
        )
    } else {
        (
            Evidence::None,
            "every reachable terminal configuration is clean (all agents terminated)".to_string(),
        )
    };
    Verdict {
        kind: CheckKind::TotalDeadlock,
        subject: Subject::System,
        holds,
        formula: "EF (terminal & some-message-pending)".to_string(),
        reading: TOTAL_READING,
        evidence,
        diagnosis,
    }
}

/// Runs every per-agent and per-server check plus total deadlock, ordered
/// by identifier ordinal.
pub fn check_all(lts: &Lts, spec: &SystemSpec) -> AnalysisReport {
    let ev = Evaluator::new(lts, spec);
    let resource = spec
        .agent_ids()
        .map(|a| resource_deadlock(&ev, spec, a))
        .collect();
    let communication = spec
        .server_ids()
        .map(|s| comm_deadlock(&ev, spec, s))
        .collect();
    let termination_verdicts = spec
        .agent_ids()
        .map(|a| termination(&ev, spec, a))
        .collect();
    AnalysisReport {
        resource,
        communication,
        termination: termination_verdicts,
        total: check_total_deadlock(lts, spec),
        terminals: lts.terminal_states(),
    }
}
