//! Domain types of the server/agent action model.
//!
//! A system is a fixed population of servers (each holding one state out of
//! a declared set and offering declared services) and agents (each carrying
//! at most one pending message, a service call on a server). Actions consume
//! one pending message together with one matching server state and produce a
//! continuation state plus, for regular actions, a continuation message of
//! the same agent. Terminating actions produce no message and annihilate the
//! agent.

use std::collections::HashMap;

use thiserror::Error;

use crate::ident::{ActionId, AgentId, ServerId, ServiceId, StateId};

/// A (server, state) pair: one concrete value a server can hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ServerState {
    pub server: ServerId,
    pub state: StateId,
}

impl ServerState {
    pub fn server(self) -> ServerId {
        self.server
    }
}

/// A pending service call: agent `agent` calls `service` on `server`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Message {
    pub agent: AgentId,
    pub server: ServerId,
    pub service: ServiceId,
}

impl Message {
    pub fn agent(self) -> AgentId {
        self.agent
    }

    pub fn server(self) -> ServerId {
        self.server
    }
}

/// Agents occurring in a set of messages, deduplicated, in ordinal order.
pub fn agents_of<I: IntoIterator<Item = Message>>(messages: I) -> Vec<AgentId> {
    let mut out: Vec<AgentId> = messages.into_iter().map(|m| m.agent).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Servers occurring in a set of messages, deduplicated, in ordinal order.
pub fn servers_of<I: IntoIterator<Item = Message>>(messages: I) -> Vec<ServerId> {
    let mut out: Vec<ServerId> = messages.into_iter().map(|m| m.server).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Servers occurring in a set of server states, deduplicated, ordinal order.
pub fn servers_of_states<I: IntoIterator<Item = ServerState>>(states: I) -> Vec<ServerId> {
    let mut out: Vec<ServerId> = states.into_iter().map(|s| s.server).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// One action rule: input message plus input server state, output
/// continuation state and optional continuation message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActionDef {
    pub id: ActionId,
    pub in_message: Message,
    pub in_state: ServerState,
    pub out_state: ServerState,
    /// `None` makes this a terminating action: the agent disappears.
    pub out_message: Option<Message>,
}

impl ActionDef {
    pub fn is_terminating(&self) -> bool {
        self.out_message.is_none()
    }

    /// The server the action executes on.
    pub fn server(&self) -> ServerId {
        self.in_state.server
    }

    /// The agent whose message the action consumes.
    pub fn agent(&self) -> AgentId {
        self.in_message.agent
    }

    fn same_rule(&self, other: &ActionDef) -> bool {
        self.in_message == other.in_message
            && self.in_state == other.in_state
            && self.out_state == other.out_state
            && self.out_message == other.out_message
    }
}

/// Per-server declarations: state set, service set, initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerDecl {
    pub states: Vec<StateId>,
    pub services: Vec<ServiceId>,
    pub initial: StateId,
}

/// Per-agent declaration: the initial message it issues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentDecl {
    pub initial: Message,
}

/// Which grouping the source text used; provenance only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceView {
    Server,
    Agent,
}

/// A flat, fully instantiated system model.
///
/// All identifiers are interned with dense ordinals in declaration order;
/// array instances such as `sem[1]` are plain names here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    agent_names: Vec<String>,
    server_names: Vec<String>,
    service_names: Vec<String>,
    state_names: Vec<String>,
    servers: Vec<ServerDecl>,
    agents: Vec<AgentDecl>,
    actions: Vec<ActionDef>,
    source_view: SourceView,
}

impl SystemSpec {
    pub fn agent_count(&self) -> usize {
        self.agent_names.len()
    }

    pub fn server_count(&self) -> usize {
        self.server_names.len()
    }

    pub fn service_count(&self) -> usize {
        self.service_names.len()
    }

    pub fn state_name_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[ActionDef] {
        &self.actions
    }

    pub fn action(&self, id: ActionId) -> &ActionDef {
        &self.actions[id.index()]
    }

    pub fn server_decl(&self, s: ServerId) -> &ServerDecl {
        &self.servers[s.index()]
    }

    pub fn agent_decl(&self, a: AgentId) -> &AgentDecl {
        &self.agents[a.index()]
    }

    pub fn source_view(&self) -> SourceView {
        self.source_view
    }

    pub fn agent_ids(&self) -> impl Iterator<Item = AgentId> {
        (0..self.agent_names.len()).map(AgentId::new)
    }

    pub fn service_ids(&self) -> impl Iterator<Item = ServiceId> {
        (0..self.service_names.len()).map(ServiceId::new)
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_names.len()).map(StateId::new)
    }

    pub fn server_ids(&self) -> impl Iterator<Item = ServerId> {
        (0..self.server_names.len()).map(ServerId::new)
    }

    pub fn agent_name(&self, a: AgentId) -> &str {
        &self.agent_names[a.index()]
    }

    pub fn server_name(&self, s: ServerId) -> &str {
        &self.server_names[s.index()]
    }

    pub fn service_name(&self, s: ServiceId) -> &str {
        &self.service_names[s.index()]
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.index()]
    }

    pub fn agent_by_name(&self, name: &str) -> Option<AgentId> {
        self.agent_names
            .iter()
            .position(|n| n == name)
            .map(AgentId::new)
    }

    pub fn server_by_name(&self, name: &str) -> Option<ServerId> {
        self.server_names
            .iter()
            .position(|n| n == name)
            .map(ServerId::new)
    }

    pub fn service_by_name(&self, name: &str) -> Option<ServiceId> {
        self.service_names
            .iter()
            .position(|n| n == name)
            .map(ServiceId::new)
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names
            .iter()
            .position(|n| n == name)
            .map(StateId::new)
    }

    /// `A[1].sem[1].wait`
    pub fn message_text(&self, m: Message) -> String {
        format!(
            "{}.{}.{}",
            self.agent_name(m.agent),
            self.server_name(m.server),
            self.service_name(m.service)
        )
    }

    /// `sem[1].up`
    pub fn state_text(&self, s: ServerState) -> String {
        format!(
            "{}.{}",
            self.server_name(s.server),
            self.state_name(s.state)
        )
    }

    /// `{A[1].sem[1].wait, sem[1].up} -> {A[1].proc[1].ok_wait, sem[1].down}`
    pub fn action_text(&self, id: ActionId) -> String {
        let a = self.action(id);
        let mut out = format!(
            "{{{}, {}}} -> {{",
            self.message_text(a.in_message),
            self.state_text(a.in_state)
        );
        if let Some(m) = a.out_message {
            out.push_str(&self.message_text(m));
            out.push_str(", ");
        }
        out.push_str(&self.state_text(a.out_state));
        out.push('}');
        out
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration {
            states: self.servers.iter().map(|s| s.initial).collect(),
            pending: self
                .agents
                .iter()
                .map(|a| Some((a.initial.server, a.initial.service)))
                .collect(),
        }
    }

    /// Name-keyed form for comparing specs whose interning order differs
    /// (for example the same system written in the two canonical views).
    pub fn canonical_form(&self) -> CanonicalSpec {
        let mut servers: Vec<CanonicalServer> = self
            .server_ids()
            .map(|s| {
                let d = self.server_decl(s);
                let mut states: Vec<String> = d
                    .states
                    .iter()
                    .map(|&st| self.state_name(st).to_string())
                    .collect();
                states.sort();
                let mut services: Vec<String> = d
                    .services
                    .iter()
                    .map(|&sv| self.service_name(sv).to_string())
                    .collect();
                services.sort();
                CanonicalServer {
                    name: self.server_name(s).to_string(),
                    states,
                    services,
                    initial: self.state_name(d.initial).to_string(),
                }
            })
            .collect();
        servers.sort();
        let mut agents: Vec<(String, String)> = self
            .agent_ids()
            .map(|a| {
                (
                    self.agent_name(a).to_string(),
                    self.message_text(self.agent_decl(a).initial),
                )
            })
            .collect();
        agents.sort();
        let mut actions: Vec<String> = self
            .actions
            .iter()
            .map(|a| self.action_text(a.id))
            .collect();
        actions.sort();
        CanonicalSpec {
            servers,
            agents,
            actions,
        }
    }
}

/// Order-independent, name-keyed projection of a spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalSpec {
    pub servers: Vec<CanonicalServer>,
    pub agents: Vec<(String, String)>,
    pub actions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalServer {
    pub name: String,
    pub states: Vec<String>,
    pub services: Vec<String>,
    pub initial: String,
}

/// A global snapshot: one state per server, at most one pending message per
/// agent. Entries are indexed by ordinal, so equal configurations have
/// identical encodings and hash identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    states: Vec<StateId>,
    pending: Vec<Option<(ServerId, ServiceId)>>,
}

impl Configuration {
    pub fn state_of(&self, s: ServerId) -> StateId {
        self.states[s.index()]
    }

    pub fn pending_of(&self, a: AgentId) -> Option<Message> {
        self.pending[a.index()].map(|(server, service)| Message {
            agent: a,
            server,
            service,
        })
    }

    pub fn agent_live(&self, a: AgentId) -> bool {
        self.pending[a.index()].is_some()
    }

    /// All pending messages, in agent ordinal order.
    pub fn pending_messages(&self) -> impl Iterator<Item = Message> + '_ {
        self.pending.iter().enumerate().filter_map(|(i, p)| {
            p.map(|(server, service)| Message {
                agent: AgentId::new(i),
                server,
                service,
            })
        })
    }

    pub fn pending_count(&self) -> usize {
        self.pending.iter().filter(|p| p.is_some()).count()
    }

    pub fn any_pending_at(&self, s: ServerId) -> bool {
        self.pending
            .iter()
            .any(|p| p.map(|(server, _)| server == s).unwrap_or(false))
    }

    /// Functional update; configurations themselves stay immutable values.
    pub fn with_state(mut self, server: ServerId, state: StateId) -> Self {
        self.states[server.index()] = state;
        self
    }

    pub fn with_pending(mut self, agent: AgentId, message: Option<(ServerId, ServiceId)>) -> Self {
        self.pending[agent.index()] = message;
        self
    }

    pub(crate) fn set_state(&mut self, server: ServerId, state: StateId) {
        self.states[server.index()] = state;
    }

    pub(crate) fn set_pending(&mut self, agent: AgentId, message: Option<(ServerId, ServiceId)>) {
        self.pending[agent.index()] = message;
    }

    /// `sem[1]=up sem[2]=up | A[1]:proc[1].start A3:r.left`
    pub fn text(&self, spec: &SystemSpec) -> String {
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(i, &st)| {
                format!(
                    "{}={}",
                    spec.server_name(ServerId::new(i)),
                    spec.state_name(st)
                )
            })
            .collect::<Vec<_>>()
            .join(" ");
        let pending = self
            .pending_messages()
            .map(|m| {
                format!(
                    "{}:{}.{}",
                    spec.agent_name(m.agent),
                    spec.server_name(m.server),
                    spec.service_name(m.service)
                )
            })
            .collect::<Vec<_>>()
            .join(" ");
        if pending.is_empty() {
            format!("{states} | (all agents terminated)")
        } else {
            format!("{states} | {pending}")
        }
    }
}

/// Errors raised while assembling a spec from resolved parts.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate agent name `{0}`")]
    DuplicateAgent(String),
    #[error("duplicate server name `{0}`")]
    DuplicateServer(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown server `{0}`")]
    UnknownServer(String),
    #[error("server `{0}` has no initial state")]
    MissingInitialState(String),
    #[error("server `{0}` is given two initial states")]
    DuplicateInitialState(String),
    #[error("agent `{0}` has no initial message")]
    MissingInitialMessage(String),
    #[error("agent `{0}` is given two initial messages")]
    DuplicateInitialMessage(String),
}

/// Incremental constructor for [`SystemSpec`].
///
/// The builder fixes ordinals in call order and enforces only structural
/// soundness (names resolve, one initial state/message each). Semantic
/// invariants are the business of [`validate_spec`], so that invalid rule
/// sets can still be constructed and reported on.
pub struct SpecBuilder {
    agent_names: Vec<String>,
    server_names: Vec<String>,
    service_names: Vec<String>,
    state_names: Vec<String>,
    agent_index: HashMap<String, AgentId>,
    server_index: HashMap<String, ServerId>,
    service_index: HashMap<String, ServiceId>,
    state_index: HashMap<String, StateId>,
    servers: Vec<(Vec<StateId>, Vec<ServiceId>, Option<StateId>)>,
    agent_initial: Vec<Option<Message>>,
    actions: Vec<ActionDef>,
    view: SourceView,
}

impl SpecBuilder {
    pub fn new() -> Self {
        SpecBuilder {
            agent_names: Vec::new(),
            server_names: Vec::new(),
            service_names: Vec::new(),
            state_names: Vec::new(),
            agent_index: HashMap::new(),
            server_index: HashMap::new(),
            service_index: HashMap::new(),
            state_index: HashMap::new(),
            servers: Vec::new(),
            agent_initial: Vec::new(),
            actions: Vec::new(),
            view: SourceView::Server,
        }
    }

    pub fn source_view(&mut self, view: SourceView) -> &mut Self {
        self.view = view;
        self
    }

    pub fn add_agent_name(&mut self, name: &str) -> Result<AgentId, BuildError> {
        if self.agent_index.contains_key(name) {
            return Err(BuildError::DuplicateAgent(name.to_string()));
        }
        let id = AgentId::new(self.agent_names.len());
        self.agent_names.push(name.to_string());
        self.agent_index.insert(name.to_string(), id);
        self.agent_initial.push(None);
        Ok(id)
    }

    pub fn add_server_name(&mut self, name: &str) -> Result<ServerId, BuildError> {
        if self.server_index.contains_key(name) {
            return Err(BuildError::DuplicateServer(name.to_string()));
        }
        let id = ServerId::new(self.server_names.len());
        self.server_names.push(name.to_string());
        self.server_index.insert(name.to_string(), id);
        self.servers.push((Vec::new(), Vec::new(), None));
        Ok(id)
    }

    pub fn agent_id(&self, name: &str) -> Result<AgentId, BuildError> {
        self.agent_index
            .get(name)
            .copied()
            .ok_or_else(|| BuildError::UnknownAgent(name.to_string()))
    }

    pub fn server_id(&self, name: &str) -> Result<ServerId, BuildError> {
        self.server_index
            .get(name)
            .copied()
            .ok_or_else(|| BuildError::UnknownServer(name.to_string()))
    }

    /// Interns a state name globally without attaching it to any server.
    pub fn intern_state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.state_index.get(name) {
            return id;
        }
        let id = StateId::new(self.state_names.len());
        self.state_names.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        id
    }

    /// Interns a service name globally without attaching it to any server.
    pub fn intern_service(&mut self, name: &str) -> ServiceId {
        if let Some(&id) = self.service_index.get(name) {
            return id;
        }
        let id = ServiceId::new(self.service_names.len());
        self.service_names.push(name.to_string());
        self.service_index.insert(name.to_string(), id);
        id
    }

    /// Interns and adds a state to a server's declared set.
    pub fn declare_state(&mut self, server: ServerId, name: &str) -> StateId {
        let id = self.intern_state(name);
        let set = &mut self.servers[server.index()].0;
        if !set.contains(&id) {
            set.push(id);
        }
        id
    }

    /// Interns and adds a service to a server's declared set.
    pub fn declare_service(&mut self, server: ServerId, name: &str) -> ServiceId {
        let id = self.intern_service(name);
        let set = &mut self.servers[server.index()].1;
        if !set.contains(&id) {
            set.push(id);
        }
        id
    }

    pub fn set_initial_state(
        &mut self,
        server: ServerId,
        state: StateId,
    ) -> Result<(), BuildError> {
        let slot = &mut self.servers[server.index()].2;
        if slot.is_some() {
            return Err(BuildError::DuplicateInitialState(
                self.server_names[server.index()].clone(),
            ));
        }
        *slot = Some(state);
        Ok(())
    }

    pub fn set_initial_message(&mut self, message: Message) -> Result<(), BuildError> {
        let slot = &mut self.agent_initial[message.agent.index()];
        if slot.is_some() {
            return Err(BuildError::DuplicateInitialMessage(
                self.agent_names[message.agent.index()].clone(),
            ));
        }
        *slot = Some(message);
        Ok(())
    }

    /// Actions pushed so far, in ordinal order.
    pub fn actions(&self) -> &[ActionDef] {
        &self.actions
    }

    pub fn push_action(
        &mut self,
        in_message: Message,
        in_state: ServerState,
        out_state: ServerState,
        out_message: Option<Message>,
    ) -> ActionId {
        let id = ActionId::new(self.actions.len());
        self.actions.push(ActionDef {
            id,
            in_message,
            in_state,
            out_state,
            out_message,
        });
        id
    }

    /// String-keyed convenience: declares a server with its sets and
    /// initial state in one call.
    pub fn add_server(
        &mut self,
        name: &str,
        states: &[&str],
        services: &[&str],
        initial: &str,
    ) -> Result<ServerId, BuildError> {
        let id = self.add_server_name(name)?;
        for st in states {
            self.declare_state(id, st);
        }
        for sv in services {
            self.declare_service(id, sv);
        }
        let init = self.intern_state(initial);
        self.set_initial_state(id, init)?;
        Ok(id)
    }

    /// String-keyed convenience: declares an agent and its initial message.
    pub fn add_agent(
        &mut self,
        name: &str,
        to_server: &str,
        service: &str,
    ) -> Result<AgentId, BuildError> {
        let agent = self.add_agent_name(name)?;
        let server = self.server_id(to_server)?;
        let service = self.intern_service(service);
        self.set_initial_message(Message {
            agent,
            server,
            service,
        })?;
        Ok(agent)
    }

    /// String-keyed convenience for the common well-shaped rule: the input
    /// state lives on the input message's server and the continuation
    /// message keeps the agent.
    pub fn rule(
        &mut self,
        agent: &str,
        server: &str,
        service: &str,
        from_state: &str,
        to_state: &str,
        emit: Option<(&str, &str)>,
    ) -> Result<ActionId, BuildError> {
        let agent = self.agent_id(agent)?;
        let server = self.server_id(server)?;
        let service = self.intern_service(service);
        let from = self.intern_state(from_state);
        let to = self.intern_state(to_state);
        let out_message = match emit {
            Some((to_server, to_service)) => {
                let s = self.server_id(to_server)?;
                let sv = self.intern_service(to_service);
                Some(Message {
                    agent,
                    server: s,
                    service: sv,
                })
            }
            None => None,
        };
        Ok(self.push_action(
            Message {
                agent,
                server,
                service,
            },
            ServerState {
                server,
                state: from,
            },
            ServerState { server, state: to },
            out_message,
        ))
    }

    /// Fully general action constructor for exercising validation: parts
    /// may disagree on servers or agents.
    #[allow(clippy::too_many_arguments)]
    pub fn raw_action(
        &mut self,
        in_msg: (&str, &str, &str),
        in_state: (&str, &str),
        out_state: (&str, &str),
        out_msg: Option<(&str, &str, &str)>,
    ) -> Result<ActionId, BuildError> {
        let in_message = Message {
            agent: self.agent_id(in_msg.0)?,
            server: self.server_id(in_msg.1)?,
            service: self.intern_service(in_msg.2),
        };
        let in_state = ServerState {
            server: self.server_id(in_state.0)?,
            state: self.intern_state(in_state.1),
        };
        let out_state = ServerState {
            server: self.server_id(out_state.0)?,
            state: self.intern_state(out_state.1),
        };
        let out_message = match out_msg {
            Some((a, s, sv)) => Some(Message {
                agent: self.agent_id(a)?,
                server: self.server_id(s)?,
                service: self.intern_service(sv),
            }),
            None => None,
        };
        Ok(self.push_action(in_message, in_state, out_state, out_message))
    }

    pub fn finish(self) -> Result<SystemSpec, BuildError> {
        let mut servers = Vec::with_capacity(self.servers.len());
        for (i, (states, services, initial)) in self.servers.into_iter().enumerate() {
            let initial = initial
                .ok_or_else(|| BuildError::MissingInitialState(self.server_names[i].clone()))?;
            servers.push(ServerDecl {
                states,
                services,
                initial,
            });
        }
        let mut agents = Vec::with_capacity(self.agent_initial.len());
        for (i, initial) in self.agent_initial.into_iter().enumerate() {
            let initial = initial
                .ok_or_else(|| BuildError::MissingInitialMessage(self.agent_names[i].clone()))?;
            agents.push(AgentDecl { initial });
        }
        Ok(SystemSpec {
            agent_names: self.agent_names,
            server_names: self.server_names,
            service_names: self.service_names,
            state_names: self.state_names,
            servers,
            agents,
            actions: self.actions,
            source_view: self.view,
        })
    }
}

impl Default for SpecBuilder {
    fn default() -> Self {
        Self::new()
    }
}

/// A semantic defect that makes the spec unusable for exploration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("action {index}: input message targets server `{message_server}` but input state belongs to `{state_server}`")]
    InputServerMismatch {
        index: usize,
        message_server: String,
        state_server: String,
    },
    #[error("action {index}: continuation state belongs to `{out_server}`, expected the executing server `{in_server}`")]
    ContinuationServerMismatch {
        index: usize,
        out_server: String,
        in_server: String,
    },
    #[error("action {index}: continuation message belongs to agent `{out_agent}`, expected `{in_agent}`")]
    ContinuationAgentMismatch {
        index: usize,
        out_agent: String,
        in_agent: String,
    },
    #[error("action {index}: unknown service `{service}` on server `{server}`")]
    UnknownService {
        index: usize,
        service: String,
        server: String,
    },
    #[error("action {index}: unknown state `{state}` on server `{server}`")]
    UnknownState {
        index: usize,
        state: String,
        server: String,
    },
    #[error("initial message of `{agent}`: unknown service `{service}` on server `{server}`")]
    UnknownInitialService {
        agent: String,
        service: String,
        server: String,
    },
    #[error("server `{server}`: initial state `{state}` is not in its state set")]
    UnknownInitialState { server: String, state: String },
    #[error("actions {first} and {second} are identical duplicates")]
    DuplicateAction { first: usize, second: usize },
}

/// A suspicious but non-fatal finding.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationWarning {
    /// A producible message no action can ever consume; usually a
    /// programming error in the model.
    #[error("message `{message}` can be produced but no action consumes it")]
    UnhandledMessage { message: String },
    #[error("server `{server}`: declared state `{state}` is never used")]
    UnusedState { server: String, state: String },
    #[error("server `{server}`: declared service `{service}` is never used")]
    UnusedService { server: String, service: String },
}

#[derive(Debug, Default)]
pub struct ValidationReport {
    pub errors: Vec<ValidationError>,
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks every action against the declared universes and the structural
/// action invariants, and lints for producible-but-unserved messages and
/// unused declarations.
pub fn validate_spec(spec: &SystemSpec) -> ValidationReport {
    let mut report = ValidationReport::default();

    for (i, act) in spec.actions.iter().enumerate() {
        if act.in_message.server != act.in_state.server {
            report.errors.push(ValidationError::InputServerMismatch {
                index: i,
                message_server: spec.server_name(act.in_message.server).to_string(),
                state_server: spec.server_name(act.in_state.server).to_string(),
            });
        }
        if act.out_state.server != act.in_state.server {
            report
                .errors
                .push(ValidationError::ContinuationServerMismatch {
                    index: i,
                    out_server: spec.server_name(act.out_state.server).to_string(),
                    in_server: spec.server_name(act.in_state.server).to_string(),
                });
        }
        if let Some(out) = act.out_message {
            if out.agent != act.in_message.agent {
                report
                    .errors
                    .push(ValidationError::ContinuationAgentMismatch {
                        index: i,
                        out_agent: spec.agent_name(out.agent).to_string(),
                        in_agent: spec.agent_name(act.in_message.agent).to_string(),
                    });
            }
        }
        for m in [Some(act.in_message), act.out_message]
            .into_iter()
            .flatten()
        {
            let decl = spec.server_decl(m.server);
            if !decl.services.contains(&m.service) {
                report.errors.push(ValidationError::UnknownService {
                    index: i,
                    service: spec.service_name(m.service).to_string(),
                    server: spec.server_name(m.server).to_string(),
                });
            }
        }
        for st in [act.in_state, act.out_state] {
            let decl = spec.server_decl(st.server);
            if !decl.states.contains(&st.state) {
                report.errors.push(ValidationError::UnknownState {
                    index: i,
                    state: spec.state_name(st.state).to_string(),
                    server: spec.server_name(st.server).to_string(),
                });
            }
        }
        for earlier in 0..i {
            if spec.actions[earlier].same_rule(act) {
                report.errors.push(ValidationError::DuplicateAction {
                    first: earlier,
                    second: i,
                });
                break;
            }
        }
    }

    for a in spec.agent_ids() {
        let m = spec.agent_decl(a).initial;
        let decl = spec.server_decl(m.server);
        if !decl.services.contains(&m.service) {
            report.errors.push(ValidationError::UnknownInitialService {
                agent: spec.agent_name(a).to_string(),
                service: spec.service_name(m.service).to_string(),
                server: spec.server_name(m.server).to_string(),
            });
        }
    }
    for s in spec.server_ids() {
        let decl = spec.server_decl(s);
        if !decl.states.contains(&decl.initial) {
            report.errors.push(ValidationError::UnknownInitialState {
                server: spec.server_name(s).to_string(),
                state: spec.state_name(decl.initial).to_string(),
            });
        }
    }

    // Producible messages (initial or emitted) that match no rule's input.
    let mut producible: Vec<Message> = spec
        .agents
        .iter()
        .map(|a| a.initial)
        .chain(spec.actions.iter().filter_map(|a| a.out_message))
        .collect();
    producible.sort_unstable();
    producible.dedup();
    for m in producible {
        let served = spec.actions.iter().any(|a| a.in_message == m);
        if !served {
            report.warnings.push(ValidationWarning::UnhandledMessage {
                message: spec.message_text(m),
            });
        }
    }

    for s in spec.server_ids() {
        let decl = spec.server_decl(s);
        for &st in &decl.states {
            let used = decl.initial == st
                || spec.actions.iter().any(|a| {
                    (a.in_state.server == s && a.in_state.state == st)
                        || (a.out_state.server == s && a.out_state.state == st)
                });
            if !used {
                report.warnings.push(ValidationWarning::UnusedState {
                    server: spec.server_name(s).to_string(),
                    state: spec.state_name(st).to_string(),
                });
            }
        }
        for &sv in &decl.services {
            let used = spec
                .agents
                .iter()
                .any(|a| a.initial.server == s && a.initial.service == sv)
                || spec.actions.iter().any(|a| {
                    (a.in_message.server == s && a.in_message.service == sv)
                        || a.out_message
                            .map(|m| m.server == s && m.service == sv)
                            .unwrap_or(false)
                });
            if !used {
                report.warnings.push(ValidationWarning::UnusedService {
                    server: spec.server_name(s).to_string(),
                    service: spec.service_name(sv).to_string(),
                });
            }
        }
    }

    report
}
