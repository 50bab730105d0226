//! Pluggable planner backends. The agent runtime builds a
//! [`BackendRequest`] carrying both a rendered natural-language prompt
//! (consumed by remote chat models) and the structured slots it was
//! rendered from (consumed by the deterministic scripted oracle), so the
//! rest of the system never branches on which backend is active.

mod cassette;
mod oracle;
mod remote;
pub mod templates;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cassette::{Cassette, CassetteBackend, CassetteMode};
pub use oracle::{largest_remainder, ScriptedOracle};
pub use remote::{RemoteBackend, RemoteConfig};
pub use templates::PromptTemplate;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    #[error("template error: {0}")]
    Template(String),
    #[error("cassette miss: no recorded response for request {0}")]
    CassetteMiss(String),
    #[error("io error: {0}")]
    Io(String),
}

/// Kinds of completions the agent runtime asks for.
pub mod template_ids {
    /// Staged plan for a group leader.
    pub const TASK_ROOT: &str = "task_root";
    /// Staged plan for an individual worker.
    pub const TASK_LEAF: &str = "task_leaf";
    /// Task-at-hand to JSON todo list.
    pub const ACTION: &str = "action";
    /// Progress judgment over the conversation.
    pub const MONITOR: &str = "monitor";
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackendRequest {
    pub template_id: String,
    /// Structured fields the prompt was rendered from. Values holding
    /// structured data (inventories, conversations) are JSON strings.
    pub slots: BTreeMap<String, String>,
    /// The fully rendered prompt text.
    pub prompt: String,
    /// Deterministic backends must return byte-identical responses for
    /// identical requests.
    pub deterministic: bool,
}

impl BackendRequest {
    pub fn slot(&self, key: &str) -> &str {
        self.slots.get(key).map(String::as_str).unwrap_or("")
    }

    /// Stable digest of the request used as cassette key.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(self.template_id.as_bytes());
        for (k, v) in &self.slots {
            hasher.update([0u8]);
            hasher.update(k.as_bytes());
            hasher.update([1u8]);
            hasher.update(v.as_bytes());
        }
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackendResponse {
    pub text: String,
}

/// A completion provider for planning, action translation and progress
/// monitoring requests.
pub trait Backend {
    fn name(&self) -> &str;
    fn complete(&mut self, request: &BackendRequest) -> Result<BackendResponse, BackendError>;
}
