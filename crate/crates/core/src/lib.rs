//! Self-organizing agent groups exercised against a deterministic
//! crafting-world simulator.
//!
//! The crate is organized around the run pipeline:
//! [`org_graph`] defines who may command whom, [`world`] simulates the
//! environment, [`comms`] carries inter-agent messages, [`hourglass`]
//! is the per-agent decision architecture, [`planner_backends`] supplies
//! pluggable planners (a deterministic scripted oracle and a remote
//! chat-completion client), [`scheduler`] executes an organization under
//! a collaboration strategy, and [`harness`] defines benchmark tasks,
//! goal checks and the experiment runner.

pub mod comms;
pub mod harness;
pub mod hourglass;
pub mod org_graph;
pub mod planner_backends;
pub mod scheduler;
pub mod world;

pub use org_graph::{AgentGraph, AgentId, StructureLabel};
pub use world::{Position, World, WorldConfig};
