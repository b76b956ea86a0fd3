//! Witness paths and lasso counterexamples.

use std::collections::VecDeque;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::ident::ActionId;
use crate::lts::Lts;
use crate::model::SystemSpec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("no witness: the target set is not reachable from the initial state")]
    NoWitness,
    #[error("no counterexample exists")]
    NoCounterexample,
}

/// A finite firing sequence from the initial state. `states` always starts
/// at state 0 and has one more entry than `actions`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub states: Vec<u32>,
    pub actions: Vec<ActionId>,
}

impl Path {
    pub fn end(&self) -> u32 {
        *self.states.last().expect("paths are never empty")
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// One rendered line per step.
    pub fn render(&self, spec: &SystemSpec) -> Vec<String> {
        self.actions
            .iter()
            .zip(self.states.windows(2))
            .map(|(&a, w)| format!("#{} -> #{}: {}", w[0], w[1], spec.action_text(a)))
            .collect()
    }
}

/// An infinite run: a stem from the initial state, then a cycle repeated
/// forever. An empty cycle denotes the implicit self-loop of a terminal
/// state (the run stays there).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Path,
    pub cycle: Path,
}

/// Shortest path (breadth-first layers) from state 0 to any state in
/// `target`; the empty path when state 0 itself qualifies.
pub fn witness_ef(lts: &Lts, target: &BitSet) -> Result<Path, WitnessError> {
    if target.contains(0) {
        return Ok(Path {
            states: vec![0],
            actions: vec![],
        });
    }
    let n = lts.state_count();
    let mut parent: Vec<Option<(u32, ActionId)>> = vec![None; n];
    let mut seen = BitSet::new(n);
    seen.insert(0);
    let mut queue = VecDeque::new();
    queue.push_back(0u32);
    while let Some(s) = queue.pop_front() {
        for t in lts.successors(s) {
            if !seen.contains(t.dst as usize) {
                seen.insert(t.dst as usize);
                parent[t.dst as usize] = Some((s, t.action));
                if target.contains(t.dst as usize) {
                    // Rebuild the path backwards.
                    let mut states = vec![t.dst];
                    let mut actions = Vec::new();
                    let mut cur = t.dst;
                    while let Some((prev, act)) = parent[cur as usize] {
                        actions.push(act);
                        states.push(prev);
                        cur = prev;
                    }
                    states.reverse();
                    actions.reverse();
                    return Ok(Path { states, actions });
                }
                queue.push_back(t.dst);
            }
        }
    }
    Err(WitnessError::NoWitness)
}
