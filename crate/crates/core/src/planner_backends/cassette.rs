//! Record/replay of backend completions. A cassette is a JSONL file of
//! request digests and response texts, letting remote runs be replayed
//! byte-for-byte without network access.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Backend, BackendError, BackendRequest, BackendResponse};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CassetteEntry {
    pub digest: String,
    pub template_id: String,
    pub response: String,
}

#[derive(Debug, Default, Clone)]
pub struct Cassette {
    entries: BTreeMap<String, CassetteEntry>,
}

impl Cassette {
    pub fn load(path: &Path) -> Result<Self, BackendError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| BackendError::Io(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: CassetteEntry = serde_json::from_str(line)
                .map_err(|e| BackendError::Io(format!("{}: line {}: {e}", path.display(), i + 1)))?;
            entries.insert(entry.digest.clone(), entry);
        }
        Ok(Self { entries })
    }

    pub fn get(&self, digest: &str) -> Option<&CassetteEntry> {
        self.entries.get(digest)
    }

    pub fn insert(&mut self, entry: CassetteEntry) {
        self.entries.insert(entry.digest.clone(), entry);
    }

    pub fn save(&self, path: &Path) -> Result<(), BackendError> {
        let mut file =
            std::fs::File::create(path).map_err(|e| BackendError::Io(e.to_string()))?;
        for entry in self.entries.values() {
            let line = serde_json::to_string(entry).expect("entry serializes");
            writeln!(file, "{line}").map_err(|e| BackendError::Io(e.to_string()))?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CassetteMode {
    /// Forward to the inner backend and record every response.
    Record,
    /// Serve only recorded responses; a miss is an error.
    Replay,
}

/// Wraps another backend with record/replay behaviour.
pub struct CassetteBackend {
    inner: Option<Box<dyn Backend>>,
    cassette: Cassette,
    mode: CassetteMode,
    path: PathBuf,
}

impl CassetteBackend {
    pub fn record(inner: Box<dyn Backend>, path: PathBuf) -> Result<Self, BackendError> {
        let cassette =
            if path.exists() { Cassette::load(&path)? } else { Cassette::default() };
        Ok(Self { inner: Some(inner), cassette, mode: CassetteMode::Record, path })
    }

    pub fn replay(path: PathBuf) -> Result<Self, BackendError> {
        Ok(Self {
            inner: None,
            cassette: Cassette::load(&path)?,
            mode: CassetteMode::Replay,
            path,
        })
    }
}

impl Backend for CassetteBackend {
    fn name(&self) -> &str {
        match self.mode {
            CassetteMode::Record => "cassette-record",
            CassetteMode::Replay => "cassette-replay",
        }
    }

    fn complete(&mut self, request: &BackendRequest) -> Result<BackendResponse, BackendError> {
        let digest = request.digest();
        if let Some(entry) = self.cassette.get(&digest) {
            return Ok(BackendResponse { text: entry.response.clone() });
        }
        match self.mode {
            CassetteMode::Replay => Err(BackendError::CassetteMiss(format!(
                "{} ({})",
                digest, request.template_id
            ))),
            CassetteMode::Record => {
                let inner = self.inner.as_mut().ok_or_else(|| {
                    BackendError::Unavailable("recording cassette has no inner backend".into())
                })?;
                let response = inner.complete(request)?;
                self.cassette.insert(CassetteEntry {
                    digest,
                    template_id: request.template_id.clone(),
                    response: response.text.clone(),
                });
                self.cassette.save(&self.path)?;
                Ok(response)
            }
        }
    }
}
