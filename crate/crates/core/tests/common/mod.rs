//! Shared test machinery: a deterministic RNG, an independent brute-force
//! explorer, a brute-force temporal-logic oracle and random spec
//! generators. Everything here deliberately avoids the algorithms of the
//! crate under test: exploration uses its own text-keyed visited set and
//! the logic oracle works by explicit path search instead of fixpoint
//! labeling.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use imds::bitset::BitSet;
use imds::ctl::Formula;
use imds::ident::ActionId;
use imds::lts::Lts;
use imds::model::{Configuration, SpecBuilder, SystemSpec};
use imds::semantics::{enabled_actions, fire};

/// SplitMix64: tiny, seedable, good enough for test-case generation.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.next_u64() % 100 < percent
    }
}

/// Counts from the independent explorer.
pub struct OracleCounts {
    pub states: usize,
    pub transitions: usize,
    pub clean_terminals: usize,
    pub stuck_terminals: usize,
}

/// Breadth-first exploration with a text-keyed visited set; shares only
/// the firing semantics with the implementation under test.
pub fn oracle_explore(spec: &SystemSpec, max_states: usize) -> OracleCounts {
    let mut visited: HashMap<String, usize> = HashMap::new();
    let mut configs: Vec<Configuration> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut transitions = 0usize;
    let mut clean = 0usize;
    let mut stuck = 0usize;

    let c0 = spec.initial_configuration();
    visited.insert(c0.text(spec), 0);
    configs.push(c0);
    queue.push_back(0);

    while let Some(i) = queue.pop_front() {
        let enabled = enabled_actions(spec, &configs[i]);
        if enabled.is_empty() {
            if configs[i].pending_count() == 0 {
                clean += 1;
            } else {
                stuck += 1;
            }
        }
        for a in enabled {
            transitions += 1;
            let next = fire(spec, &configs[i], a).unwrap();
            let key = next.text(spec);
            if let std::collections::hash_map::Entry::Vacant(slot) = visited.entry(key) {
                assert!(configs.len() < max_states, "oracle exploration too large");
                slot.insert(configs.len());
                queue.push_back(configs.len());
                configs.push(next);
            }
        }
    }

    OracleCounts {
        states: configs.len(),
        transitions,
        clean_terminals: clean,
        stuck_terminals: stuck,
    }
}

/// Totalized successor list: terminal states get an implicit self-loop.
fn successors(lts: &Lts, s: u32) -> Vec<u32> {
    if lts.is_terminal(s) {
        vec![s]
    } else {
        lts.successors(s).iter().map(|t| t.dst).collect()
    }
}

/// Is there a path from `s` to a `target` state moving only through
/// `through` states before reaching it?
fn can_reach_via(lts: &Lts, s: u32, target: &BitSet, through: &BitSet) -> bool {
    if target.contains(s as usize) {
        return true;
    }
    if !through.contains(s as usize) {
        return false;
    }
    let mut seen = HashSet::new();
    let mut stack = vec![s];
    seen.insert(s);
    while let Some(u) = stack.pop() {
        for v in successors(lts, u) {
            if target.contains(v as usize) {
                return true;
            }
            if through.contains(v as usize) && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    false
}

/// Is there an infinite path from `s` staying inside `allowed` forever?
/// Finite graph, so: the reachable sub-graph restricted to `allowed` must
/// contain a cycle (implicit terminal self-loops included).
fn has_infinite_path_within(lts: &Lts, s: u32, allowed: &BitSet) -> bool {
    if !allowed.contains(s as usize) {
        return false;
    }
    // Reachable region inside `allowed`.
    let mut region = HashSet::new();
    let mut stack = vec![s];
    region.insert(s);
    while let Some(u) = stack.pop() {
        for v in successors(lts, u) {
            if allowed.contains(v as usize) && region.insert(v) {
                stack.push(v);
            }
        }
    }
    // Strip states with no successor inside the region; a nonempty
    // remainder contains a cycle.
    let mut remaining: HashSet<u32> = region.clone();
    loop {
        let dead: Vec<u32> = remaining
            .iter()
            .copied()
            .filter(|&u| !successors(lts, u).iter().any(|v| remaining.contains(v)))
            .collect();
        if dead.is_empty() {
            break;
        }
        for d in dead {
            remaining.remove(&d);
        }
    }
    // An infinite path from s exists iff s can reach the cyclic core
    // inside the region.
    if remaining.is_empty() {
        return false;
    }
    let mut seen = HashSet::new();
    let mut stack = vec![s];
    seen.insert(s);
    while let Some(u) = stack.pop() {
        if remaining.contains(&u) {
            return true;
        }
        for v in successors(lts, u) {
            if region.contains(&v) && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    false
}

/// Atomic propositions recomputed from first principles (configurations
/// and the raw action table), bypassing the cached bitsets.
fn oracle_atom(lts: &Lts, spec: &SystemSpec, f: &Formula, s: u32) -> bool {
    let c = lts.state(s);
    match f {
        Formula::PendingAgent(a) => c.pending_of(*a).is_some(),
        Formula::PendingAtServer(srv) => c.any_pending_at(*srv),
        Formula::EnabledAgentAction(a) => spec
            .actions()
            .iter()
            .any(|act| act.in_message.agent == *a && imds::semantics::is_enabled(c, act)),
        Formula::EnabledServerAction(srv) => spec
            .actions()
            .iter()
            .any(|act| act.in_state.server == *srv && imds::semantics::is_enabled(c, act)),
        Formula::Terminal => enabled_actions(spec, c).is_empty(),
        _ => unreachable!("not an atom"),
    }
}

/// Brute-force semantics by explicit path search; returns the satisfying
/// state set.
pub fn oracle_eval(lts: &Lts, spec: &SystemSpec, f: &Formula) -> BitSet {
    let n = lts.state_count();
    let mut out = BitSet::new(n);
    match f {
        Formula::True => return BitSet::full(n),
        Formula::False => return out,
        Formula::PendingAgent(_)
        | Formula::PendingAtServer(_)
        | Formula::EnabledAgentAction(_)
        | Formula::EnabledServerAction(_)
        | Formula::Terminal => {
            for s in 0..n as u32 {
                if oracle_atom(lts, spec, f, s) {
                    out.insert(s as usize);
                }
            }
            return out;
        }
        _ => {}
    }
    match f {
        Formula::Not(p) => oracle_eval(lts, spec, p).complement(),
        Formula::And(p, q) => {
            let mut a = oracle_eval(lts, spec, p);
            a.intersect_with(&oracle_eval(lts, spec, q));
            a
        }
        Formula::Or(p, q) => {
            let mut a = oracle_eval(lts, spec, p);
            a.union_with(&oracle_eval(lts, spec, q));
            a
        }
        Formula::Implies(p, q) => {
            let mut a = oracle_eval(lts, spec, p).complement();
            a.union_with(&oracle_eval(lts, spec, q));
            a
        }
        Formula::Ex(p) => {
            let sat = oracle_eval(lts, spec, p);
            for s in 0..lts.state_count() as u32 {
                if successors(lts, s).iter().any(|&v| sat.contains(v as usize)) {
                    out.insert(s as usize);
                }
            }
            out
        }
        Formula::Ax(p) => {
            let sat = oracle_eval(lts, spec, p);
            for s in 0..lts.state_count() as u32 {
                if successors(lts, s).iter().all(|&v| sat.contains(v as usize)) {
                    out.insert(s as usize);
                }
            }
            out
        }
        Formula::Ef(p) => {
            let sat = oracle_eval(lts, spec, p);
            let all = BitSet::full(n);
            for s in 0..n as u32 {
                if can_reach_via(lts, s, &sat, &all) {
                    out.insert(s as usize);
                }
            }
            out
        }
        Formula::Af(p) => {
            // No infinite path avoiding p.
            let avoid = oracle_eval(lts, spec, p).complement();
            for s in 0..n as u32 {
                if !has_infinite_path_within(lts, s, &avoid) {
                    out.insert(s as usize);
                }
            }
            out
        }
        Formula::Eg(p) => {
            let sat = oracle_eval(lts, spec, p);
            for s in 0..n as u32 {
                if has_infinite_path_within(lts, s, &sat) {
                    out.insert(s as usize);
                }
            }
            out
        }
        Formula::Ag(p) => {
            // No reachable state violates p.
            let bad = oracle_eval(lts, spec, p).complement();
            let all = BitSet::full(n);
            for s in 0..n as u32 {
                if !can_reach_via(lts, s, &bad, &all) {
                    out.insert(s as usize);
                }
            }
            out
        }
        Formula::Eu(p, q) => {
            let through = oracle_eval(lts, spec, p);
            let target = oracle_eval(lts, spec, q);
            for s in 0..n as u32 {
                if can_reach_via(lts, s, &target, &through) {
                    out.insert(s as usize);
                }
            }
            out
        }
        Formula::Au(p, q) => {
            // Violated by an infinite q-free path, or by reaching a state
            // where both p and q fail along a q-free prefix.
            let not_q = oracle_eval(lts, spec, q).complement();
            let mut bad_state = oracle_eval(lts, spec, p).complement();
            bad_state.intersect_with(&not_q);
            for s in 0..n as u32 {
                let violated = can_reach_via(lts, s, &bad_state, &not_q)
                    || has_infinite_path_within(lts, s, &not_q);
                if !violated {
                    out.insert(s as usize);
                }
            }
            out
        }
        _ => unreachable!(),
    }
}

/// A random structurally well-formed spec. Each agent gets a chain of
/// messages with rules for most server states, the last message either
/// terminating or looping back, so reachable spaces have depth, cycles,
/// interleaving and the occasional genuine dead end.
pub fn random_spec(rng: &mut Rng) -> SystemSpec {
    let n_servers = 2 + rng.below(2);
    let n_agents = 2 + rng.below(2);
    let mut b = SpecBuilder::new();
    let mut server_names = Vec::new();
    let mut state_names: Vec<Vec<String>> = Vec::new();
    let mut service_names: Vec<Vec<String>> = Vec::new();
    for s in 0..n_servers {
        let name = format!("s{s}");
        let n_states = 2 + rng.below(2);
        let states: Vec<String> = (0..n_states).map(|i| format!("q{s}_{i}")).collect();
        let n_services = 1 + rng.below(2);
        let services: Vec<String> = (0..n_services).map(|i| format!("v{s}_{i}")).collect();
        let state_refs: Vec<&str> = states.iter().map(|s| s.as_str()).collect();
        let service_refs: Vec<&str> = services.iter().map(|s| s.as_str()).collect();
        b.add_server(&name, &state_refs, &service_refs, &states[0])
            .unwrap();
        server_names.push(name);
        state_names.push(states);
        service_names.push(services);
    }
    for a in 0..n_agents {
        let agent = format!("a{a}");
        // The agent's program: a chain of service calls.
        let len = 2 + rng.below(4);
        let chain: Vec<(usize, usize)> = (0..len)
            .map(|_| {
                let srv = rng.below(n_servers);
                (srv, rng.below(service_names[srv].len()))
            })
            .collect();
        let (srv0, svc0) = chain[0];
        b.add_agent(&agent, &server_names[srv0], &service_names[srv0][svc0])
            .unwrap();
        for (i, &(srv, svc)) in chain.iter().enumerate() {
            for from in 0..state_names[srv].len() {
                // Leave some (message, state) pairs unserved: dead ends.
                if !rng.chance(75) {
                    continue;
                }
                let to = rng.below(state_names[srv].len());
                let emit = if i + 1 < len {
                    let (nsrv, nsvc) = chain[i + 1];
                    Some((nsrv, nsvc))
                } else if rng.chance(40) {
                    None // terminating action
                } else {
                    Some(chain[0]) // loop back
                };
                let _ = b.rule(
                    &agent,
                    &server_names[srv],
                    &service_names[srv][svc],
                    &state_names[srv][from],
                    &state_names[srv][to],
                    emit.map(|(s, v)| (server_names[s].as_str(), service_names[s][v].as_str())),
                );
            }
        }
    }
    b.finish().unwrap()
}

/// Samples reachable configurations by bounded random walks.
pub fn random_reachable_configs(
    spec: &SystemSpec,
    rng: &mut Rng,
    walks: usize,
    depth: usize,
) -> Vec<Configuration> {
    let mut out = Vec::new();
    for _ in 0..walks {
        let mut c = spec.initial_configuration();
        for _ in 0..rng.below(depth + 1) {
            let enabled = enabled_actions(spec, &c);
            if enabled.is_empty() {
                break;
            }
            let pick: ActionId = enabled[rng.below(enabled.len())];
            c = fire(spec, &c, pick).unwrap();
        }
        out.push(c);
    }
    out
}

/// Ring of `n >= 2` dining philosophers: agent `Ph[i]` takes fork `f[i]`,
/// then `f[i mod n + 1]`, releases both, and loops forever. All-left-first
/// acquisition makes the all-holding-one configuration a total deadlock.
pub fn philosophers(n: usize) -> SystemSpec {
    assert!(n >= 2);
    let mut b = SpecBuilder::new();
    for i in 1..=n {
        b.add_server(&format!("f[{i}]"), &["up", "down"], &["take", "put"], "up")
            .unwrap();
    }
    for i in 1..=n {
        let left = format!("f[{i}]");
        let right = format!("f[{}]", i % n + 1);
        let name = format!("Ph[{i}]");
        b.add_agent(&name, &left, "take").unwrap();
        b.rule(&name, &left, "take", "up", "down", Some((&right, "take")))
            .unwrap();
        b.rule(&name, &right, "take", "up", "down", Some((&left, "put")))
            .unwrap();
        b.rule(&name, &left, "put", "down", "up", Some((&right, "put")))
            .unwrap();
        b.rule(&name, &right, "put", "down", "up", Some((&left, "take")))
            .unwrap();
    }
    b.finish().unwrap()
}

/// Frame rule: the successor differs from `c` only at the acting server's
/// state entry and the acting agent's pending entry, which take exactly
/// the action's outputs.
pub fn assert_frame(spec: &SystemSpec, c: &Configuration, action: ActionId, next: &Configuration) {
    let def = spec.action(action);
    for s in spec.server_ids() {
        if s == def.out_state.server {
            assert_eq!(next.state_of(s), def.out_state.state);
        } else {
            assert_eq!(next.state_of(s), c.state_of(s), "untouched server changed");
        }
    }
    for a in spec.agent_ids() {
        if a == def.in_message.agent {
            assert_eq!(next.pending_of(a), def.out_message);
        } else {
            assert_eq!(
                next.pending_of(a),
                c.pending_of(a),
                "untouched agent changed"
            );
        }
    }
}

/// Well-formedness: one state per server from its declared set, at most
/// one message per agent, aimed at a declared service of its target.
pub fn assert_well_formed(spec: &SystemSpec, c: &Configuration) {
    for s in spec.server_ids() {
        let decl = spec.server_decl(s);
        assert!(
            decl.states.contains(&c.state_of(s)),
            "state outside declared set"
        );
    }
    for a in spec.agent_ids() {
        if let Some(m) = c.pending_of(a) {
            assert_eq!(m.agent, a);
            let decl = spec.server_decl(m.server);
            assert!(decl.services.contains(&m.service));
        }
    }
}
