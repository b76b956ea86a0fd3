//! Branching-time logic over a finite transition system.
//!
//! Label sets are computed by fixpoint labeling: least fixpoints by
//! backward worklist insertion, greatest fixpoints by counter-based
//! removal, each linear in states plus transitions. For logic evaluation
//! the graph is totalized with an implicit self-loop on every terminal
//! state, so a total-deadlock state satisfies `AG !enabled(...)` and a
//! terminated agent's absence is absorbing.

mod syntax;
mod witness;

pub use syntax::{parse_formula, FormulaParseError};
pub use witness::{witness_ef, Lasso, Path, WitnessError};

use crate::bitset::BitSet;
use crate::ident::{AgentId, ServerId};
use crate::lts::Lts;
use crate::model::SystemSpec;
use crate::process::{agent_action_masks, server_action_masks};

/// Formula syntax tree. Atoms speak about pending messages and enabled
/// action subsets of one agent (traveler) or one server (resident).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    /// Some message of the agent is pending.
    PendingAgent(AgentId),
    /// Some message directed to the server is pending.
    PendingAtServer(ServerId),
    /// Some action consuming a message of the agent is enabled.
    EnabledAgentAction(AgentId),
    /// Some action executing on the server is enabled.
    EnabledServerAction(ServerId),
    /// No action is enabled at all.
    Terminal,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Ex(Box<Formula>),
    Ax(Box<Formula>),
    Ef(Box<Formula>),
    Af(Box<Formula>),
    Eg(Box<Formula>),
    Ag(Box<Formula>),
    Eu(Box<Formula>, Box<Formula>),
    Au(Box<Formula>, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn ex(self) -> Self {
        Formula::Ex(Box::new(self))
    }

    pub fn ax(self) -> Self {
        Formula::Ax(Box::new(self))
    }

    pub fn ef(self) -> Self {
        Formula::Ef(Box::new(self))
    }

    pub fn af(self) -> Self {
        Formula::Af(Box::new(self))
    }

    pub fn eg(self) -> Self {
        Formula::Eg(Box::new(self))
    }

    pub fn ag(self) -> Self {
        Formula::Ag(Box::new(self))
    }

    pub fn eu(self, other: Self) -> Self {
        Formula::Eu(Box::new(self), Box::new(other))
    }

    pub fn au(self, other: Self) -> Self {
        Formula::Au(Box::new(self), Box::new(other))
    }

    /// Textual form accepted back by [`parse_formula`].
    pub fn to_text(&self, spec: &SystemSpec) -> String {
        match self {
            Formula::True => "true".into(),
            Formula::False => "false".into(),
            Formula::Terminal => "terminal".into(),
            Formula::PendingAgent(a) => format!("pending(agent:{})", spec.agent_name(*a)),
            Formula::PendingAtServer(s) => format!("pending(server:{})", spec.server_name(*s)),
            Formula::EnabledAgentAction(a) => format!("enabled(agent:{})", spec.agent_name(*a)),
            Formula::EnabledServerAction(s) => {
                format!("enabled(server:{})", spec.server_name(*s))
            }
            Formula::Not(p) => format!("!{}", p.to_text(spec)),
            Formula::And(p, q) => format!("({} & {})", p.to_text(spec), q.to_text(spec)),
            Formula::Or(p, q) => format!("({} | {})", p.to_text(spec), q.to_text(spec)),
            Formula::Implies(p, q) => format!("({} -> {})", p.to_text(spec), q.to_text(spec)),
            Formula::Ex(p) => format!("EX {}", p.to_text(spec)),
            Formula::Ax(p) => format!("AX {}", p.to_text(spec)),
            Formula::Ef(p) => format!("EF {}", p.to_text(spec)),
            Formula::Af(p) => format!("AF {}", p.to_text(spec)),
            Formula::Eg(p) => format!("EG {}", p.to_text(spec)),
            Formula::Ag(p) => format!("AG {}", p.to_text(spec)),
            Formula::Eu(p, q) => format!("E[{} U {}]", p.to_text(spec), q.to_text(spec)),
            Formula::Au(p, q) => format!("A[{} U {}]", p.to_text(spec), q.to_text(spec)),
        }
    }
}

/// Labeling engine over one transition system. Precomputes the totalized
/// predecessor graph and the per-identifier action masks once, so a batch
/// of checks shares the setup.
pub struct Evaluator<'a> {
    lts: &'a Lts,
    pred_offsets: Vec<u32>,
    pred_edges: Vec<u32>,
    /// Totalized out-degree (terminal states count their self-loop).
    out_degree: Vec<u32>,
    agent_masks: Vec<BitSet>,
    server_masks: Vec<BitSet>,
}

impl<'a> Evaluator<'a> {
    pub fn new(lts: &'a Lts, spec: &SystemSpec) -> Self {
        let n = lts.state_count();
        let mut pred_counts = vec![0u32; n + 1];
        let mut out_degree = vec![0u32; n];
        for t in lts.transitions() {
            pred_counts[t.dst as usize + 1] += 1;
            out_degree[t.src as usize] += 1;
        }
        for s in 0..n as u32 {
            if lts.is_terminal(s) {
                pred_counts[s as usize + 1] += 1;
                out_degree[s as usize] = 1;
            }
        }
        let mut pred_offsets = pred_counts;
        for i in 0..n {
            pred_offsets[i + 1] += pred_offsets[i];
        }
        let mut cursor = pred_offsets.clone();
        let mut pred_edges = vec![0u32; pred_offsets[n] as usize];
        for t in lts.transitions() {
            pred_edges[cursor[t.dst as usize] as usize] = t.src;
            cursor[t.dst as usize] += 1;
        }
        for s in 0..n as u32 {
            if lts.is_terminal(s) {
                pred_edges[cursor[s as usize] as usize] = s;
                cursor[s as usize] += 1;
            }
        }
        Evaluator {
            lts,
            pred_offsets,
            pred_edges,
            out_degree,
            agent_masks: agent_action_masks(spec),
            server_masks: server_action_masks(spec),
        }
    }

    pub fn lts(&self) -> &Lts {
        self.lts
    }

    fn preds(&self, s: u32) -> &[u32] {
        let lo = self.pred_offsets[s as usize] as usize;
        let hi = self.pred_offsets[s as usize + 1] as usize;
        &self.pred_edges[lo..hi]
    }

    /// Totalized successors: `f(state)` for each successor, terminal states
    /// visiting themselves.
    fn for_successors(&self, s: u32, mut f: impl FnMut(u32)) {
        if self.lts.is_terminal(s) {
            f(s);
        } else {
            for t in self.lts.successors(s) {
                f(t.dst);
            }
        }
    }

    pub fn eval(&self, formula: &Formula) -> BitSet {
        let n = self.lts.state_count();
        match formula {
            Formula::True => BitSet::full(n),
            Formula::False => BitSet::new(n),
            Formula::PendingAgent(a) => {
                let mut out = BitSet::new(n);
                for s in 0..n as u32 {
                    if self.lts.agent_pending(s, a.index()) {
                        out.insert(s as usize);
                    }
                }
                out
            }
            Formula::PendingAtServer(srv) => {
                let mut out = BitSet::new(n);
                for s in 0..n as u32 {
                    if self.lts.state(s).any_pending_at(*srv) {
                        out.insert(s as usize);
                    }
                }
                out
            }
            Formula::EnabledAgentAction(a) => self.enabled_mask_set(&self.agent_masks[a.index()]),
            Formula::EnabledServerAction(srv) => {
                self.enabled_mask_set(&self.server_masks[srv.index()])
            }
            Formula::Terminal => {
                let mut out = BitSet::new(n);
                for s in 0..n as u32 {
                    if self.lts.is_terminal(s) {
                        out.insert(s as usize);
                    }
                }
                out
            }
            Formula::Not(p) => self.eval(p).complement(),
            Formula::And(p, q) => {
                let mut a = self.eval(p);
                a.intersect_with(&self.eval(q));
                a
            }
            Formula::Or(p, q) => {
                let mut a = self.eval(p);
                a.union_with(&self.eval(q));
                a
            }
            Formula::Implies(p, q) => {
                let mut a = self.eval(p).complement();
                a.union_with(&self.eval(q));
                a
            }
            Formula::Ex(p) => self.ex(&self.eval(p)),
            Formula::Ax(p) => self.ax(&self.eval(p)),
            Formula::Ef(p) => self.ef(&self.eval(p)),
            Formula::Af(p) => self.af(&self.eval(p)),
            Formula::Eg(p) => self.eg(&self.eval(p)),
            Formula::Ag(p) => self.ag(&self.eval(p)),
            Formula::Eu(p, q) => self.eu(&self.eval(p), &self.eval(q)),
            Formula::Au(p, q) => self.au(&self.eval(p), &self.eval(q)),
        }
    }

    pub fn holds_initially(&self, formula: &Formula) -> bool {
        self.eval(formula).contains(0)
    }

    fn enabled_mask_set(&self, mask: &BitSet) -> BitSet {
        let n = self.lts.state_count();
        let mut out = BitSet::new(n);
        for s in 0..n as u32 {
            if self.lts.enables_any(s, mask) {
                out.insert(s as usize);
            }
        }
        out
    }

    /// States with at least one successor in `sat`.
    pub fn ex(&self, sat: &BitSet) -> BitSet {
        let mut out = BitSet::new(sat.len());
        for s in 0..sat.len() as u32 {
            let mut hit = false;
            self.for_successors(s, |v| hit |= sat.contains(v as usize));
            if hit {
                out.insert(s as usize);
            }
        }
        out
    }

    /// States whose successors all lie in `sat`.
    pub fn ax(&self, sat: &BitSet) -> BitSet {
        let mut out = BitSet::new(sat.len());
        for s in 0..sat.len() as u32 {
            let mut all = true;
            self.for_successors(s, |v| all &= sat.contains(v as usize));
            if all {
                out.insert(s as usize);
            }
        }
        out
    }

    /// Least fixpoint: backward reachability of `target`.
    pub fn ef(&self, target: &BitSet) -> BitSet {
        let mut sat = target.clone();
        let mut work: Vec<u32> = target.iter().map(|i| i as u32).collect();
        while let Some(t) = work.pop() {
            for &p in self.preds(t) {
                if !sat.contains(p as usize) {
                    sat.insert(p as usize);
                    work.push(p);
                }
            }
        }
        sat
    }

    /// Least fixpoint of `E[through U target]`.
    pub fn eu(&self, through: &BitSet, target: &BitSet) -> BitSet {
        let mut sat = target.clone();
        let mut work: Vec<u32> = target.iter().map(|i| i as u32).collect();
        while let Some(t) = work.pop() {
            for &p in self.preds(t) {
                if !sat.contains(p as usize) && through.contains(p as usize) {
                    sat.insert(p as usize);
                    work.push(p);
                }
            }
        }
        sat
    }

    /// Least fixpoint with universal successors: grows from `target` by
    /// adding states once every outgoing edge leads into the set.
    pub fn af(&self, target: &BitSet) -> BitSet {
        let mut sat = target.clone();
        let mut remaining = self.out_degree.clone();
        let mut work: Vec<u32> = target.iter().map(|i| i as u32).collect();
        while let Some(t) = work.pop() {
            for &p in self.preds(t) {
                remaining[p as usize] -= 1;
                if remaining[p as usize] == 0 && !sat.contains(p as usize) {
                    sat.insert(p as usize);
                    work.push(p);
                }
            }
        }
        sat
    }

    /// `A[through U target]`: like [`Self::af`] but newcomers must satisfy
    /// `through`.
    pub fn au(&self, through: &BitSet, target: &BitSet) -> BitSet {
        let mut sat = target.clone();
        let mut remaining = self.out_degree.clone();
        let mut work: Vec<u32> = target.iter().map(|i| i as u32).collect();
        while let Some(t) = work.pop() {
            for &p in self.preds(t) {
                remaining[p as usize] -= 1;
                if remaining[p as usize] == 0
                    && !sat.contains(p as usize)
                    && through.contains(p as usize)
                {
                    sat.insert(p as usize);
                    work.push(p);
                }
            }
        }
        sat
    }

    /// Greatest fixpoint: strips states of `inv` until every survivor has
    /// a successor among the survivors.
    pub fn eg(&self, inv: &BitSet) -> BitSet {
        let n = inv.len();
        let mut sat = inv.clone();
        // Count, per state in the candidate set, its successors inside it.
        let mut inside = vec![0u32; n];
        for s in sat.iter() {
            let mut count = 0;
            self.for_successors(s as u32, |v| {
                if sat.contains(v as usize) {
                    count += 1;
                }
            });
            inside[s] = count;
        }
        let mut work: Vec<u32> = sat
            .iter()
            .filter(|&s| inside[s] == 0)
            .map(|s| s as u32)
            .collect();
        for &s in &work {
            sat.remove(s as usize);
        }
        while let Some(t) = work.pop() {
            for &p in self.preds(t) {
                if sat.contains(p as usize) {
                    inside[p as usize] -= 1;
                    if inside[p as usize] == 0 {
                        sat.remove(p as usize);
                        work.push(p);
                    }
                }
            }
        }
        sat
    }

    /// Greatest fixpoint with universal successors: strips states that can
    /// leave `inv` at all, propagating removals backward.
    pub fn ag(&self, inv: &BitSet) -> BitSet {
        let mut sat = inv.clone();
        let mut work: Vec<u32> = inv.complement().iter().map(|s| s as u32).collect();
        while let Some(t) = work.pop() {
            for &p in self.preds(t) {
                if sat.contains(p as usize) {
                    sat.remove(p as usize);
                    work.push(p);
                }
            }
        }
        sat
    }

    /// Shortest lasso witnessing an infinite run that stays in `bad`:
    /// a stem to the cyclic core of `bad`, then a cycle inside it. A
    /// terminal state's implicit self-loop is reported as an empty cycle.
    pub fn lasso_counterexample(&self, bad: &BitSet) -> Result<Lasso, WitnessError> {
        let core = self.eg(bad);
        let stem =
            witness::witness_ef(self.lts, &core).map_err(|_| WitnessError::NoCounterexample)?;
        let start = stem.end();
        if self.lts.is_terminal(start) {
            return Ok(Lasso {
                stem,
                cycle: Path {
                    states: vec![start],
                    actions: vec![],
                },
            });
        }
        // Walk inside the core picking the first surviving edge until a
        // state repeats.
        let mut states = vec![start];
        let mut actions = Vec::new();
        let mut seen_at = std::collections::HashMap::new();
        seen_at.insert(start, 0usize);
        let mut cur = start;
        loop {
            if self.lts.is_terminal(cur) {
                // Terminal inside the core: its self-loop closes the lasso.
                let from = states.len() - 1;
                return Ok(Lasso {
                    stem: extend_stem(stem, &states[..=from], &actions[..from]),
                    cycle: Path {
                        states: vec![cur],
                        actions: vec![],
                    },
                });
            }
            let step = self
                .lts
                .successors(cur)
                .iter()
                .find(|t| core.contains(t.dst as usize))
                .expect("a non-terminal core state keeps a successor in the core");
            let next = step.dst;
            actions.push(step.action);
            if let Some(&at) = seen_at.get(&next) {
                states.push(next);
                let cycle = Path {
                    states: states[at..].to_vec(),
                    actions: actions[at..].to_vec(),
                };
                return Ok(Lasso {
                    stem: extend_stem(stem, &states[..=at], &actions[..at]),
                    cycle,
                });
            }
            seen_at.insert(next, states.len());
            states.push(next);
            cur = next;
        }
    }
}

/// Appends a walked prefix to the BFS stem.
fn extend_stem(mut stem: Path, states: &[u32], actions: &[crate::ident::ActionId]) -> Path {
    for (i, &a) in actions.iter().enumerate() {
        stem.actions.push(a);
        stem.states.push(states[i + 1]);
    }
    stem
}

/// One-off evaluation; batches should construct an [`Evaluator`].
pub fn eval(lts: &Lts, spec: &SystemSpec, formula: &Formula) -> BitSet {
    Evaluator::new(lts, spec).eval(formula)
}
