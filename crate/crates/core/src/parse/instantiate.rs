//! Expands templates, replicators and parameter bindings into a flat
//! [`SystemSpec`] over concrete instance identifiers.
//!
//! Instance declarations expand arrays (`A[2]` becomes `A[1]`, `A[2]`);
//! a declaration entry that exactly names an existing template (flat
//! sources use indexed template names like `sem[1]`) is taken verbatim,
//! otherwise the entry's base name selects the template, and an entry with
//! no template at all declares a bare instance whose state and service sets
//! are inferred from use.
//!
//! Name resolution inside template rules is: bound formal first, then the
//! template's own name (standing for the current instance), then the global
//! instance namespace.

use std::collections::HashMap;

use thiserror::Error;

use super::ast::*;
use crate::ident::ServerId;
use crate::model::{BuildError, Message, ServerState, SourceView, SpecBuilder, SystemSpec};

#[derive(Debug, Error)]
pub enum InstantiateError {
    #[error("{line}:{col}: unknown name `{name}`")]
    UnknownName { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: `{name}` is not an agent")]
    NotAnAgent { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: `{name}` is not a server")]
    NotAServer { name: String, line: u32, col: u32 },
    #[error(
        "{line}:{col}: instance `{name}` declared under the wrong population kind for its template"
    )]
    KindMismatch { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: duplicate instance `{name}`")]
    DuplicateInstance { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: array size must be positive")]
    BadArity { line: u32, col: u32 },
    #[error("{line}:{col}: unbound index variable `{var}`")]
    UnboundIndexVariable { var: String, line: u32, col: u32 },
    #[error("{line}:{col}: empty replicator range")]
    EmptyReplicatorRange { line: u32, col: u32 },
    #[error("{line}:{col}: instance `{instance}` takes {expected} actual parameters, {got} given")]
    ArityMismatch {
        instance: String,
        expected: usize,
        got: usize,
        line: u32,
        col: u32,
    },
    #[error("instance `{instance}` needs a parameter binding in the init clause")]
    MissingBinding { instance: String },
    #[error("{line}:{col}: instance `{instance}` is bound twice")]
    DuplicateBinding {
        instance: String,
        line: u32,
        col: u32,
    },
    #[error("{line}:{col}: action input must pair one message with one server state")]
    MalformedInput { line: u32, col: u32 },
    #[error("{line}:{col}: action output lacks a continuation state")]
    MissingContinuationState { line: u32, col: u32 },
    #[error("{line}:{col}: action output names more than one continuation state")]
    MultipleContinuationStates { line: u32, col: u32 },
    #[error("{line}:{col}: dynamic agent creation is not supported: an action may emit at most one message")]
    MultipleOutputMessages { line: u32, col: u32 },
    #[error("{line}:{col}: service and state names cannot be indexed")]
    IndexedLeafName { line: u32, col: u32 },
    #[error("agent `{agent}`: no action uses service `{service}`, cannot determine the server of its initial message")]
    NoServerForInitialService { agent: String, service: String },
    #[error("agent `{agent}`: service `{service}` is used on several servers ({servers}); initial message is ambiguous")]
    AmbiguousInitialService {
        agent: String,
        service: String,
        servers: String,
    },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// A parsed and instantiated system plus non-fatal findings.
#[derive(Debug)]
pub struct Loaded {
    pub spec: SystemSpec,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum InstKind {
    Agent,
    Server,
}

struct Instance {
    name: String,
    kind: InstKind,
    template: Option<usize>,
    /// True for server instances without a template: their state and
    /// service sets are inferred from use.
    bare: bool,
    /// Formal slot names in positional order (arrays expanded).
    slots: Vec<(String, PopulationKind)>,
    /// slot name -> actual instance name.
    binding: HashMap<String, String>,
    bound_at: Option<(u32, u32)>,
}

enum InitItem {
    Binding {
        instance: usize,
        item: Name,
    },
    State {
        server: String,
        state: Name,
    },
    Message {
        agent: String,
        server: String,
        service: Name,
    },
}

pub fn instantiate(ast: &SourceAst) -> Result<Loaded, InstantiateError> {
    Instantiator::new(ast)?.run()
}

struct Instantiator<'a> {
    ast: &'a SourceAst,
    instances: Vec<Instance>,
    by_name: HashMap<String, usize>,
    builder: SpecBuilder,
    warnings: Vec<String>,
}

impl<'a> Instantiator<'a> {
    fn new(ast: &'a SourceAst) -> Result<Self, InstantiateError> {
        Ok(Instantiator {
            ast,
            instances: Vec::new(),
            by_name: HashMap::new(),
            builder: SpecBuilder::new(),
            warnings: Vec::new(),
        })
    }

    fn run(mut self) -> Result<Loaded, InstantiateError> {
        self.register_instances()?;
        self.intern_declared_sets();
        let init_items = self.collect_init()?;
        self.check_bindings()?;
        self.expand_rules()?;
        self.apply_init(&init_items)?;
        self.template_warnings();

        let view = if self
            .ast
            .templates
            .iter()
            .any(|t| t.kind == TemplateKind::Agent)
        {
            SourceView::Agent
        } else {
            SourceView::Server
        };
        self.builder.source_view(view);
        let spec = self.builder.finish()?;
        Ok(Loaded {
            spec,
            warnings: self.warnings,
        })
    }

    fn template_index(&self, full: &str, base: &str) -> Option<(usize, bool)> {
        if let Some(i) = self.ast.templates.iter().position(|t| t.name == full) {
            return Some((i, true));
        }
        self.ast
            .templates
            .iter()
            .position(|t| t.name == base)
            .map(|i| (i, false))
    }

    fn register_instances(&mut self) -> Result<(), InstantiateError> {
        for decl in &self.ast.instances {
            let kind = match decl.kind {
                PopulationKind::Agents => InstKind::Agent,
                PopulationKind::Servers => InstKind::Server,
            };
            for entry in &decl.entries {
                let mut names = Vec::new();
                let mut template = None;
                match entry.arity {
                    Some(n) if n <= 0 => {
                        return Err(InstantiateError::BadArity {
                            line: entry.line,
                            col: entry.col,
                        })
                    }
                    Some(n) => {
                        let full = format!("{}[{}]", entry.base, n);
                        match self.template_index(&full, &entry.base) {
                            Some((t, true)) => {
                                // Verbatim indexed template name (flat source).
                                names.push(full);
                                template = Some(t);
                            }
                            Some((t, false)) => {
                                for i in 1..=n {
                                    names.push(format!("{}[{}]", entry.base, i));
                                }
                                template = Some(t);
                            }
                            None => {
                                for i in 1..=n {
                                    names.push(format!("{}[{}]", entry.base, i));
                                }
                            }
                        }
                    }
                    None => {
                        names.push(entry.base.clone());
                        template = self
                            .template_index(&entry.base, &entry.base)
                            .map(|(t, _)| t);
                    }
                }
                if let Some(t) = template {
                    let tk = self.ast.templates[t].kind;
                    let matches = matches!(
                        (tk, kind),
                        (TemplateKind::Agent, InstKind::Agent)
                            | (TemplateKind::Server, InstKind::Server)
                    );
                    if !matches {
                        return Err(InstantiateError::KindMismatch {
                            name: entry.base.clone(),
                            line: entry.line,
                            col: entry.col,
                        });
                    }
                }
                for name in names {
                    if self.by_name.contains_key(&name) {
                        return Err(InstantiateError::DuplicateInstance {
                            name,
                            line: entry.line,
                            col: entry.col,
                        });
                    }
                    match kind {
                        InstKind::Agent => {
                            self.builder.add_agent_name(&name)?;
                        }
                        InstKind::Server => {
                            self.builder.add_server_name(&name)?;
                        }
                    }
                    let slots = template
                        .map(|t| formal_slots(&self.ast.templates[t]))
                        .unwrap_or_default();
                    self.by_name.insert(name.clone(), self.instances.len());
                    self.instances.push(Instance {
                        name,
                        kind,
                        template,
                        bare: kind == InstKind::Server && template.is_none(),
                        slots,
                        binding: HashMap::new(),
                        bound_at: None,
                    });
                }
            }
        }
        Ok(())
    }

    /// Fixes service and state ordinals from the declared sets, in template
    /// source order, before any use-driven interning.
    fn intern_declared_sets(&mut self) {
        for t in &self.ast.templates {
            for sv in &t.services {
                self.builder.intern_service(sv);
            }
            for st in &t.states {
                self.builder.intern_state(st);
            }
        }
        // Attach declared sets to templated server instances.
        for inst in &self.instances {
            if inst.kind != InstKind::Server {
                continue;
            }
            if let Some(t) = inst.template {
                let t = &self.ast.templates[t];
                let sid = self.builder.server_id(&inst.name).expect("registered");
                for sv in &t.services {
                    self.builder.declare_service(sid, sv);
                }
                for st in &t.states {
                    self.builder.declare_state(sid, st);
                }
            }
        }
    }

    fn eval_index(
        &self,
        expr: &IndexExpr,
        env: Option<(&str, i64)>,
        line: u32,
        col: u32,
    ) -> Result<i64, InstantiateError> {
        let var_value = |v: &str| match env {
            Some((name, val)) if name == v => Ok(val),
            _ => Err(InstantiateError::UnboundIndexVariable {
                var: v.to_string(),
                line,
                col,
            }),
        };
        Ok(match expr {
            IndexExpr::Lit(n) => *n,
            IndexExpr::Var(v) => var_value(v)?,
            IndexExpr::LitPlusVar(n, v) => n + var_value(v)?,
            IndexExpr::LitMinusVar(n, v) => n - var_value(v)?,
        })
    }

    /// Evaluates a name occurrence to a concrete key like `sem[1]`.
    fn name_key(&self, name: &Name, env: Option<(&str, i64)>) -> Result<String, InstantiateError> {
        Ok(match &name.index {
            None => name.base.clone(),
            Some(expr) => format!(
                "{}[{}]",
                name.base,
                self.eval_index(expr, env, name.line, name.col)?
            ),
        })
    }

    fn lookup_instance(&self, key: &str, name: &Name) -> Result<usize, InstantiateError> {
        self.by_name
            .get(key)
            .copied()
            .ok_or_else(|| InstantiateError::UnknownName {
                name: key.to_string(),
                line: name.line,
                col: name.col,
            })
    }

    fn collect_init(&mut self) -> Result<Vec<InitItem>, InstantiateError> {
        let mut items = Vec::new();
        for entry in &self.ast.init {
            for env in replicator_envs(entry.replicator.as_ref())? {
                let env = env.as_ref().map(|(v, i)| (v.as_str(), *i));
                self.collect_init_entry(entry, env, &mut items)?;
            }
        }
        Ok(items)
    }

    fn collect_init_entry(
        &mut self,
        entry: &InitEntry,
        env: Option<(&str, i64)>,
        items: &mut Vec<InitItem>,
    ) -> Result<(), InstantiateError> {
        let head = &entry.parts[0];
        let head_key = self.name_key(head, env)?;
        if let Some(actuals) = &entry.actuals {
            let idx = self.lookup_instance(&head_key, head)?;
            let expected = self.instances[idx].slots.len();
            if actuals.len() != expected {
                return Err(InstantiateError::ArityMismatch {
                    instance: head_key,
                    expected,
                    got: actuals.len(),
                    line: entry.line,
                    col: entry.col,
                });
            }
            if self.instances[idx].bound_at.is_some() {
                return Err(InstantiateError::DuplicateBinding {
                    instance: head_key,
                    line: entry.line,
                    col: entry.col,
                });
            }
            let mut binding = HashMap::new();
            for (slot, actual) in self.instances[idx].slots.clone().iter().zip(actuals) {
                let actual_key = self.name_key(actual, env)?;
                let actual_idx = self.lookup_instance(&actual_key, actual)?;
                let ok = match slot.1 {
                    PopulationKind::Agents => self.instances[actual_idx].kind == InstKind::Agent,
                    PopulationKind::Servers => self.instances[actual_idx].kind == InstKind::Server,
                };
                if !ok {
                    return Err(match slot.1 {
                        PopulationKind::Agents => InstantiateError::NotAnAgent {
                            name: actual_key,
                            line: actual.line,
                            col: actual.col,
                        },
                        PopulationKind::Servers => InstantiateError::NotAServer {
                            name: actual_key,
                            line: actual.line,
                            col: actual.col,
                        },
                    });
                }
                binding.insert(slot.0.clone(), actual_key);
            }
            let item = entry.parts[1].clone();
            if item.index.is_some() {
                return Err(InstantiateError::IndexedLeafName {
                    line: item.line,
                    col: item.col,
                });
            }
            self.instances[idx].binding = binding;
            self.instances[idx].bound_at = Some((entry.line, entry.col));
            items.push(InitItem::Binding {
                instance: idx,
                item,
            });
        } else if entry.parts.len() == 2 {
            let idx = self.lookup_instance(&head_key, head)?;
            if self.instances[idx].kind != InstKind::Server {
                return Err(InstantiateError::NotAServer {
                    name: head_key,
                    line: head.line,
                    col: head.col,
                });
            }
            let state = entry.parts[1].clone();
            if state.index.is_some() {
                return Err(InstantiateError::IndexedLeafName {
                    line: state.line,
                    col: state.col,
                });
            }
            items.push(InitItem::State {
                server: head_key,
                state,
            });
        } else {
            let idx = self.lookup_instance(&head_key, head)?;
            if self.instances[idx].kind != InstKind::Agent {
                return Err(InstantiateError::NotAnAgent {
                    name: head_key,
                    line: head.line,
                    col: head.col,
                });
            }
            let server_key = self.name_key(&entry.parts[1], env)?;
            let sidx = self.lookup_instance(&server_key, &entry.parts[1])?;
            if self.instances[sidx].kind != InstKind::Server {
                return Err(InstantiateError::NotAServer {
                    name: server_key,
                    line: entry.parts[1].line,
                    col: entry.parts[1].col,
                });
            }
            let service = entry.parts[2].clone();
            if service.index.is_some() {
                return Err(InstantiateError::IndexedLeafName {
                    line: service.line,
                    col: service.col,
                });
            }
            items.push(InitItem::Message {
                agent: head_key,
                server: server_key,
                service,
            });
        }
        Ok(())
    }

    fn check_bindings(&self) -> Result<(), InstantiateError> {
        for inst in &self.instances {
            if !inst.slots.is_empty() && inst.bound_at.is_none() {
                return Err(InstantiateError::MissingBinding {
                    instance: inst.name.clone(),
                });
            }
        }
        Ok(())
    }

    /// Resolves a name inside a template body: formal, own name, then the
    /// global instance namespace.
    fn resolve_in_rule(
        &self,
        name: &Name,
        inst: &Instance,
        template_name: &str,
        env: Option<(&str, i64)>,
    ) -> Result<usize, InstantiateError> {
        let key = self.name_key(name, env)?;
        if let Some(actual) = inst.binding.get(&key) {
            return self.lookup_instance(actual, name);
        }
        if key == template_name {
            return Ok(self.by_name[&inst.name]);
        }
        self.lookup_instance(&key, name)
    }

    fn expand_rules(&mut self) -> Result<(), InstantiateError> {
        for (t_idx, template) in self.ast.templates.iter().enumerate() {
            let inst_indices: Vec<usize> = self
                .instances
                .iter()
                .enumerate()
                .filter(|(_, i)| i.template == Some(t_idx))
                .map(|(i, _)| i)
                .collect();
            for inst_idx in inst_indices {
                for rule in &template.rules {
                    for env in replicator_envs(rule.replicator.as_ref())? {
                        let env = env.as_ref().map(|(v, i)| (v.as_str(), *i));
                        self.expand_one_rule(template, inst_idx, rule, env)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn expand_one_rule(
        &mut self,
        template: &TemplateAst,
        inst_idx: usize,
        rule: &RuleAst,
        env: Option<(&str, i64)>,
    ) -> Result<(), InstantiateError> {
        let mut in_message = None;
        let mut in_state = None;
        if rule.inputs.len() != 2 {
            return Err(InstantiateError::MalformedInput {
                line: rule.line,
                col: rule.col,
            });
        }
        for lit in &rule.inputs {
            match self.resolve_literal(lit, inst_idx, template, env)? {
                ResolvedLit::Message(m) => {
                    if in_message.replace(m).is_some() {
                        return Err(InstantiateError::MalformedInput {
                            line: rule.line,
                            col: rule.col,
                        });
                    }
                }
                ResolvedLit::State(s) => {
                    if in_state.replace(s).is_some() {
                        return Err(InstantiateError::MalformedInput {
                            line: rule.line,
                            col: rule.col,
                        });
                    }
                }
            }
        }
        let (in_message, in_state) = (in_message.unwrap(), in_state.unwrap());

        let mut out_state = None;
        let mut out_message = None;
        for lit in &rule.outputs {
            match self.resolve_literal(lit, inst_idx, template, env)? {
                ResolvedLit::Message(m) => {
                    if out_message.replace(m).is_some() {
                        return Err(InstantiateError::MultipleOutputMessages {
                            line: rule.line,
                            col: rule.col,
                        });
                    }
                }
                ResolvedLit::State(s) => {
                    if out_state.replace(s).is_some() {
                        return Err(InstantiateError::MultipleContinuationStates {
                            line: rule.line,
                            col: rule.col,
                        });
                    }
                }
            }
        }
        let out_state = out_state.ok_or(InstantiateError::MissingContinuationState {
            line: rule.line,
            col: rule.col,
        })?;

        self.builder
            .push_action(in_message, in_state, out_state, out_message);
        Ok(())
    }

    /// Interns a state for a server, extending the inferred set of bare
    /// servers but leaving declared sets of templated servers untouched.
    fn state_for(&mut self, server: ServerId, bare: bool, name: &str) -> crate::ident::StateId {
        if bare {
            self.builder.declare_state(server, name)
        } else {
            self.builder.intern_state(name)
        }
    }

    fn service_for(&mut self, server: ServerId, bare: bool, name: &str) -> crate::ident::ServiceId {
        if bare {
            self.builder.declare_service(server, name)
        } else {
            self.builder.intern_service(name)
        }
    }

    fn resolve_literal(
        &mut self,
        lit: &Literal,
        inst_idx: usize,
        template: &TemplateAst,
        env: Option<(&str, i64)>,
    ) -> Result<ResolvedLit, InstantiateError> {
        let inst = &self.instances[inst_idx];
        if lit.parts.len() == 2 {
            let server_idx = self.resolve_in_rule(&lit.parts[0], inst, &template.name, env)?;
            let server_inst = &self.instances[server_idx];
            if server_inst.kind != InstKind::Server {
                return Err(InstantiateError::NotAServer {
                    name: server_inst.name.clone(),
                    line: lit.parts[0].line,
                    col: lit.parts[0].col,
                });
            }
            let leaf = &lit.parts[1];
            if leaf.index.is_some() {
                return Err(InstantiateError::IndexedLeafName {
                    line: leaf.line,
                    col: leaf.col,
                });
            }
            let bare = server_inst.bare;
            let name = server_inst.name.clone();
            let leaf_name = leaf.base.clone();
            let server = self.builder.server_id(&name)?;
            let state = self.state_for(server, bare, &leaf_name);
            Ok(ResolvedLit::State(ServerState { server, state }))
        } else {
            let agent_idx = self.resolve_in_rule(&lit.parts[0], inst, &template.name, env)?;
            let agent_inst = &self.instances[agent_idx];
            if agent_inst.kind != InstKind::Agent {
                return Err(InstantiateError::NotAnAgent {
                    name: agent_inst.name.clone(),
                    line: lit.parts[0].line,
                    col: lit.parts[0].col,
                });
            }
            let agent_name = agent_inst.name.clone();
            let server_idx = self.resolve_in_rule(&lit.parts[1], inst, &template.name, env)?;
            let server_inst = &self.instances[server_idx];
            if server_inst.kind != InstKind::Server {
                return Err(InstantiateError::NotAServer {
                    name: server_inst.name.clone(),
                    line: lit.parts[1].line,
                    col: lit.parts[1].col,
                });
            }
            let leaf = &lit.parts[2];
            if leaf.index.is_some() {
                return Err(InstantiateError::IndexedLeafName {
                    line: leaf.line,
                    col: leaf.col,
                });
            }
            let bare = server_inst.bare;
            let server_name = server_inst.name.clone();
            let leaf_name = leaf.base.clone();
            let agent = self.builder.agent_id(&agent_name)?;
            let server = self.builder.server_id(&server_name)?;
            let service = self.service_for(server, bare, &leaf_name);
            Ok(ResolvedLit::Message(Message {
                agent,
                server,
                service,
            }))
        }
    }

    fn apply_init(&mut self, items: &[InitItem]) -> Result<(), InstantiateError> {
        // Initial states first (including binding items on servers), then
        // initial messages, each in entry order.
        for item in items {
            match item {
                InitItem::Binding { instance, item } => {
                    let inst = &self.instances[*instance];
                    if inst.kind != InstKind::Server {
                        continue;
                    }
                    let bare = inst.bare;
                    let name = inst.name.clone();
                    let server = self.builder.server_id(&name)?;
                    let state = self.state_for(server, bare, &item.base);
                    self.builder.set_initial_state(server, state)?;
                }
                InitItem::State { server, state } => {
                    let idx = self.by_name[server];
                    let bare = self.instances[idx].bare;
                    let sid = self.builder.server_id(server)?;
                    let st = self.state_for(sid, bare, &state.base);
                    self.builder.set_initial_state(sid, st)?;
                }
                InitItem::Message { .. } => {}
            }
        }
        for item in items {
            match item {
                InitItem::Message {
                    agent,
                    server,
                    service,
                } => {
                    let sidx = self.by_name[server];
                    let bare = self.instances[sidx].bare;
                    let aid = self.builder.agent_id(agent)?;
                    let sid = self.builder.server_id(server)?;
                    let svc = self.service_for(sid, bare, &service.base);
                    self.builder.set_initial_message(Message {
                        agent: aid,
                        server: sid,
                        service: svc,
                    })?;
                }
                InitItem::Binding { instance, item } => {
                    let inst = &self.instances[*instance];
                    if inst.kind != InstKind::Agent {
                        continue;
                    }
                    let agent_name = inst.name.clone();
                    let aid = self.builder.agent_id(&agent_name)?;
                    let svc = self.builder.intern_service(&item.base);
                    // The binding names only the initial service; recover
                    // the unique server this agent calls it on.
                    let mut hosts: Vec<ServerId> = self
                        .builder
                        .actions()
                        .iter()
                        .flat_map(|a| [Some(a.in_message), a.out_message])
                        .flatten()
                        .filter(|m| m.agent == aid && m.service == svc)
                        .map(|m| m.server)
                        .collect();
                    hosts.sort_unstable();
                    hosts.dedup();
                    match hosts.as_slice() {
                        [server] => {
                            let server = *server;
                            let bare = {
                                let name = self.server_name_of(server);
                                self.instances[self.by_name[&name]].bare
                            };
                            let svc = self.service_for(server, bare, &item.base);
                            self.builder.set_initial_message(Message {
                                agent: aid,
                                server,
                                service: svc,
                            })?;
                        }
                        [] => {
                            return Err(InstantiateError::NoServerForInitialService {
                                agent: agent_name,
                                service: item.base.clone(),
                            })
                        }
                        many => {
                            return Err(InstantiateError::AmbiguousInitialService {
                                agent: agent_name,
                                service: item.base.clone(),
                                servers: many
                                    .iter()
                                    .map(|&s| self.server_name_of(s))
                                    .collect::<Vec<_>>()
                                    .join(", "),
                            })
                        }
                    }
                }
                InitItem::State { .. } => {}
            }
        }
        Ok(())
    }

    fn server_name_of(&self, id: ServerId) -> String {
        self.instances
            .iter()
            .filter(|i| i.kind == InstKind::Server)
            .nth(id.index())
            .map(|i| i.name.clone())
            .expect("server id in range")
    }

    fn template_warnings(&mut self) {
        for (t_idx, t) in self.ast.templates.iter().enumerate() {
            if t.rules.is_empty() {
                self.warnings
                    .push(format!("template `{}` defines no actions", t.name));
            }
            if !self.instances.iter().any(|i| i.template == Some(t_idx)) {
                self.warnings
                    .push(format!("template `{}` is never instantiated", t.name));
            }
            // Unused declarations of agent templates are reported here;
            // server-side sets live in the spec and are linted by
            // validate_spec.
            if t.kind == TemplateKind::Agent {
                for sv in &t.services {
                    let used = t.rules.iter().any(|r| {
                        r.inputs
                            .iter()
                            .chain(&r.outputs)
                            .any(|l| l.parts.len() == 3 && l.parts[2].base == *sv)
                    });
                    if !used {
                        self.warnings.push(format!(
                            "template `{}`: declared service `{sv}` is never used",
                            t.name
                        ));
                    }
                }
                for st in &t.states {
                    let used = t.rules.iter().any(|r| {
                        r.inputs
                            .iter()
                            .chain(&r.outputs)
                            .any(|l| l.parts.len() == 2 && l.parts[1].base == *st)
                    });
                    if !used {
                        self.warnings.push(format!(
                            "template `{}`: declared state `{st}` is never used",
                            t.name
                        ));
                    }
                }
            }
        }
    }
}

enum ResolvedLit {
    Message(Message),
    State(ServerState),
}

/// Expands a formal parameter list to positional slots.
fn formal_slots(template: &TemplateAst) -> Vec<(String, PopulationKind)> {
    let mut slots = Vec::new();
    for group in &template.formals {
        for decl in &group.entries {
            match decl.arity {
                None => slots.push((decl.base.clone(), group.kind)),
                Some(n) => {
                    for i in 1..=n {
                        slots.push((format!("{}[{}]", decl.base, i), group.kind));
                    }
                }
            }
        }
    }
    slots
}

/// Iterates the environments of an optional replicator: a single `None`
/// environment without one, otherwise one per index value.
fn replicator_envs(
    rep: Option<&Replicator>,
) -> Result<Vec<Option<(String, i64)>>, InstantiateError> {
    match rep {
        None => Ok(vec![None]),
        Some(r) => {
            if r.lo > r.hi {
                return Err(InstantiateError::EmptyReplicatorRange {
                    line: r.line,
                    col: r.col,
                });
            }
            Ok((r.lo..=r.hi).map(|i| Some((r.var.clone(), i))).collect())
        }
    }
}
