//! Explicit-state verification toolkit for distributed systems modeled as
//! servers, agents and messages.
//!
//! A system is described by action rules that atomically consume one
//! pending message and one matching server state. The library parses the
//! textual notation, builds the reachable labeled transition system, and
//! checks for resource deadlocks (per agent), communication deadlocks (per
//! server), agent termination and total deadlock, producing witness paths
//! and lasso counterexamples.

pub mod bitset;
pub mod ctl;
pub mod detect;
pub mod export;
pub mod ident;
pub mod lts;
pub mod model;
pub mod parse;
pub mod process;
pub mod semantics;

pub use ident::{ActionId, AgentId, ServerId, ServiceId, StateId};
pub use model::{
    validate_spec, Configuration, Message, ServerState, SourceView, SpecBuilder, SystemSpec,
    ValidationReport,
};
pub use parse::{load_source, render};
pub use semantics::{enabled_actions, fire};
