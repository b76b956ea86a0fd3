//! Reachable labeled transition system of a spec.
//!
//! States are configurations, transitions are action firings. Exploration
//! is breadth-first with deterministic successor order (action ordinal), so
//! state numbering, transition order and all downstream reports are
//! reproducible bit for bit. The graph is materialized completely or not at
//! all: the detectors need the full reachable space.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bitset::{BitMatrix, BitSet};
use crate::ident::ActionId;
use crate::model::{Configuration, SystemSpec};
use crate::semantics::{enabled_actions, fire};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LtsLimits {
    pub max_states: usize,
    pub max_transitions: usize,
}

impl Default for LtsLimits {
    fn default() -> Self {
        LtsLimits {
            max_states: 1_000_000,
            max_transitions: 10_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LtsStats {
    pub state_count: usize,
    pub transition_count: usize,
    pub build_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub src: u32,
    pub action: ActionId,
    pub dst: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error(
        "state limit exceeded ({limit}); {states} states and {transitions} transitions explored"
    )]
    StateLimitExceeded {
        limit: usize,
        states: usize,
        transitions: usize,
    },
    #[error("transition limit exceeded ({limit}); {states} states and {transitions} transitions explored")]
    TransitionLimitExceeded {
        limit: usize,
        states: usize,
        transitions: usize,
    },
}

/// Terminal states split by whether agents are still waiting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalClasses {
    /// No outgoing transitions and no pending messages: every agent ran a
    /// terminating action.
    pub clean: Vec<u32>,
    /// No outgoing transitions but messages still pending: total deadlock.
    pub stuck: Vec<u32>,
}

#[derive(Debug)]
pub struct Lts {
    states: Vec<Configuration>,
    transitions: Vec<Transition>,
    /// CSR offsets into `transitions`, one slice per source state.
    out_offsets: Vec<u32>,
    pending_agents: BitMatrix,
    enabled: BitMatrix,
    stats: LtsStats,
}

impl Lts {
    /// Explores the full reachable graph breadth-first.
    pub fn build(spec: &SystemSpec, limits: &LtsLimits) -> Result<Lts, BuildError> {
        let start = Instant::now();
        let mut states: Vec<Configuration> = Vec::new();
        let mut index: HashMap<Configuration, u32> = HashMap::new();
        let mut transitions: Vec<Transition> = Vec::new();
        let mut queue: VecDeque<u32> = VecDeque::new();

        let c0 = spec.initial_configuration();
        if limits.max_states == 0 {
            return Err(BuildError::StateLimitExceeded {
                limit: 0,
                states: 0,
                transitions: 0,
            });
        }
        index.insert(c0.clone(), 0);
        states.push(c0);
        queue.push_back(0);

        while let Some(src) = queue.pop_front() {
            for action in enabled_actions(spec, &states[src as usize]) {
                let next = fire(spec, &states[src as usize], action).expect("enabled action fires");
                let dst = match index.get(&next) {
                    Some(&dst) => dst,
                    None => {
                        if states.len() >= limits.max_states {
                            return Err(BuildError::StateLimitExceeded {
                                limit: limits.max_states,
                                states: states.len(),
                                transitions: transitions.len(),
                            });
                        }
                        let dst = states.len() as u32;
                        index.insert(next.clone(), dst);
                        states.push(next);
                        queue.push_back(dst);
                        dst
                    }
                };
                if transitions.len() >= limits.max_transitions {
                    return Err(BuildError::TransitionLimitExceeded {
                        limit: limits.max_transitions,
                        states: states.len(),
                        transitions: transitions.len(),
                    });
                }
                transitions.push(Transition { src, action, dst });
            }
        }

        // BFS emits transitions grouped by source, so the offset table is a
        // single counting pass.
        let mut out_offsets = vec![0u32; states.len() + 1];
        for t in &transitions {
            out_offsets[t.src as usize + 1] += 1;
        }
        for i in 0..states.len() {
            out_offsets[i + 1] += out_offsets[i];
        }

        let mut pending_agents = BitMatrix::new(states.len(), spec.agent_count());
        for (i, c) in states.iter().enumerate() {
            for m in c.pending_messages() {
                pending_agents.set(i, m.agent.index());
            }
        }
        let mut enabled = BitMatrix::new(states.len(), spec.action_count());
        for t in &transitions {
            enabled.set(t.src as usize, t.action.index());
        }

        let stats = LtsStats {
            state_count: states.len(),
            transition_count: transitions.len(),
            build_time: start.elapsed(),
        };
        Ok(Lts {
            states,
            transitions,
            out_offsets,
            pending_agents,
            enabled,
            stats,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Configuration] {
        &self.states
    }

    pub fn state(&self, i: u32) -> &Configuration {
        &self.states[i as usize]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn successors(&self, i: u32) -> &[Transition] {
        let lo = self.out_offsets[i as usize] as usize;
        let hi = self.out_offsets[i as usize + 1] as usize;
        &self.transitions[lo..hi]
    }

    pub fn out_degree(&self, i: u32) -> usize {
        self.successors(i).len()
    }

    pub fn is_terminal(&self, i: u32) -> bool {
        self.out_degree(i) == 0
    }

    pub fn stats(&self) -> &LtsStats {
        &self.stats
    }

    /// True when agent `a` has a message pending in state `i`.
    pub fn agent_pending(&self, i: u32, agent: usize) -> bool {
        self.pending_agents.get(i as usize, agent)
    }

    pub fn any_pending(&self, i: u32) -> bool {
        self.pending_agents.row_any(i as usize)
    }

    /// True when state `i` enables at least one action from `mask`.
    pub fn enables_any(&self, i: u32, mask: &BitSet) -> bool {
        self.enabled.row_intersects(i as usize, mask)
    }

    pub fn enabled_in(&self, i: u32) -> impl Iterator<Item = ActionId> + '_ {
        self.enabled.row_iter(i as usize).map(ActionId::new)
    }

    pub fn terminal_states(&self) -> TerminalClasses {
        let mut clean = Vec::new();
        let mut stuck = Vec::new();
        for i in 0..self.states.len() as u32 {
            if self.is_terminal(i) {
                if self.any_pending(i) {
                    stuck.push(i);
                } else {
                    clean.push(i);
                }
            }
        }
        TerminalClasses { clean, stuck }
    }
}
