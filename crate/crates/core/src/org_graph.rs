//! Agent organizational structures as directed graphs.
//!
//! An organization is a directed graph over the agents plus a single
//! environment vertex. Agent-to-agent edges encode command authority;
//! every agent additionally carries an edge to the environment vertex
//! (all agents act on and perceive the environment). Three canonical
//! shapes are supported: graph-of-agents (fully connected), chain-of-agents
//! (a directed path) and tree-of-agents (a star from one root).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Maximum organization size for exhaustive elementary-cycle enumeration.
/// Larger graphs only get a cycle-existence check.
pub const CYCLE_ENUMERATION_CAP: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrgError {
    #[error("duplicate agent id: {0}")]
    DuplicateAgent(String),
    #[error("organization needs at least {0} agents")]
    EmptyOrganization(usize),
    #[error("unknown agent: {0}")]
    UnknownAgent(String),
}

/// Agent identifier. Comparison, ordering and hashing are case-insensitive:
/// transcripts freely mix spellings like "WorkerA" and "workera".
#[derive(Debug, Clone)]
pub struct AgentId {
    raw: String,
    key: String,
}

impl AgentId {
    pub fn new(name: impl Into<String>) -> Self {
        let raw = name.into();
        let key = raw.to_lowercase();
        Self { raw, key }
    }

    /// Original spelling as supplied at construction.
    pub fn display_name(&self) -> &str {
        &self.raw
    }

    /// Lowercased comparison key.
    pub fn key(&self) -> &str {
        &self.key
    }
}

impl PartialEq for AgentId {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for AgentId {}
impl PartialOrd for AgentId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for AgentId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}
impl std::hash::Hash for AgentId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}
impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}
impl From<&str> for AgentId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}
impl Serialize for AgentId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.raw)
    }
}
impl<'de> Deserialize<'de> for AgentId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self::new(String::deserialize(d)?))
    }
}

/// A vertex of the agent graph: either an agent or the environment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphVertex {
    Agent(AgentId),
    Environment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureLabel {
    Solo,
    Chain,
    Graph,
    Tree,
}

impl fmt::Display for StructureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructureLabel::Solo => "solo",
            StructureLabel::Chain => "chain",
            StructureLabel::Graph => "graph",
            StructureLabel::Tree => "tree",
        };
        f.write_str(s)
    }
}

/// Directed graph over agents plus one environment vertex.
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentGraph {
    agents: Vec<AgentId>,
    root: Option<AgentId>,
    /// Agent-to-agent command edges (commander, commanded).
    command_edges: BTreeSet<(AgentId, AgentId)>,
    structure: StructureLabel,
}

/// Outcome of structural validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub is_valid: bool,
    /// Elementary cycles in the agent-agent subgraph, each listed once
    /// starting from its smallest member.
    pub command_cycles: Vec<Vec<AgentId>>,
    pub max_agent_in_degree: usize,
    pub violations: Vec<String>,
}

fn check_distinct(ids: &[AgentId]) -> Result<(), OrgError> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id.clone()) {
            return Err(OrgError::DuplicateAgent(id.display_name().to_string()));
        }
    }
    Ok(())
}

/// Tree of agents: one root commanding every leaf.
pub fn build_toa(root: AgentId, leaves: &[AgentId]) -> Result<AgentGraph, OrgError> {
    if leaves.is_empty() {
        return Err(OrgError::EmptyOrganization(2));
    }
    let mut all = vec![root.clone()];
    all.extend(leaves.iter().cloned());
    check_distinct(&all)?;
    let command_edges = leaves
        .iter()
        .map(|l| (root.clone(), l.clone()))
        .collect();
    Ok(AgentGraph {
        agents: all,
        root: Some(root),
        command_edges,
        structure: StructureLabel::Tree,
    })
}

/// Graph of agents: every ordered pair of distinct agents is an edge.
pub fn build_goa(agents: &[AgentId]) -> Result<AgentGraph, OrgError> {
    if agents.len() < 2 {
        return Err(OrgError::EmptyOrganization(2));
    }
    check_distinct(agents)?;
    let mut command_edges = BTreeSet::new();
    for a in agents {
        for b in agents {
            if a != b {
                command_edges.insert((a.clone(), b.clone()));
            }
        }
    }
    Ok(AgentGraph {
        agents: agents.to_vec(),
        root: None,
        command_edges,
        structure: StructureLabel::Graph,
    })
}

/// Chain of agents: a single directed path in the given order.
pub fn build_coa(order: &[AgentId]) -> Result<AgentGraph, OrgError> {
    if order.len() < 2 {
        return Err(OrgError::EmptyOrganization(2));
    }
    check_distinct(order)?;
    let command_edges = order
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    Ok(AgentGraph {
        agents: order.to_vec(),
        root: Some(order[0].clone()),
        command_edges,
        structure: StructureLabel::Chain,
    })
}

/// Single agent acting on the environment alone.
pub fn build_solo(agent: AgentId) -> AgentGraph {
    AgentGraph {
        agents: vec![agent],
        root: None,
        command_edges: BTreeSet::new(),
        structure: StructureLabel::Solo,
    }
}

impl AgentGraph {
    pub fn structure(&self) -> StructureLabel {
        self.structure
    }

    /// Agents in construction order (root first for trees and chains).
    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn root(&self) -> Option<&AgentId> {
        self.root.as_ref()
    }

    pub fn contains(&self, agent: &AgentId) -> bool {
        self.agents.iter().any(|a| a == agent)
    }

    /// Agent-to-agent command edges.
    pub fn command_edges(&self) -> &BTreeSet<(AgentId, AgentId)> {
        &self.command_edges
    }

    /// All edges including the implicit agent-to-environment edges.
    pub fn edges(&self) -> Vec<(GraphVertex, GraphVertex)> {
        let mut edges: Vec<(GraphVertex, GraphVertex)> = self
            .command_edges
            .iter()
            .map(|(a, b)| (GraphVertex::Agent(a.clone()), GraphVertex::Agent(b.clone())))
            .collect();
        for a in &self.agents {
            edges.push((GraphVertex::Agent(a.clone()), GraphVertex::Environment));
        }
        edges
    }

    /// Agents reachable by a single outgoing command edge.
    pub fn command_targets(&self, agent: &AgentId) -> Result<BTreeSet<AgentId>, OrgError> {
        if !self.contains(agent) {
            return Err(OrgError::UnknownAgent(agent.display_name().to_string()));
        }
        Ok(self
            .command_edges
            .iter()
            .filter(|(from, _)| from == agent)
            .map(|(_, to)| to.clone())
            .collect())
    }

    /// Chain successor, if this is a chain and the agent has one.
    pub fn successor(&self, agent: &AgentId) -> Option<AgentId> {
        self.command_edges
            .iter()
            .find(|(from, _)| from == agent)
            .map(|(_, to)| to.clone())
    }

    /// Number of agents strictly downstream of `agent` along chain edges.
    pub fn downstream_count(&self, agent: &AgentId) -> usize {
        let mut n = 0;
        let mut cur = agent.clone();
        while let Some(next) = self.successor(&cur) {
            n += 1;
            cur = next;
            if n > self.agents.len() {
                break; // cycle guard
            }
        }
        n
    }

    /// Structural validation: cycle enumeration, in-degree bounds and
    /// label-specific shape checks. `max_in_degree` is the permitted
    /// command in-degree per agent (default 1).
    pub fn validate_with(&self, max_in_degree: usize) -> ValidationReport {
        let mut violations = Vec::new();

        let mut in_degree: BTreeMap<&AgentId, usize> =
            self.agents.iter().map(|a| (a, 0)).collect();
        for (_, to) in &self.command_edges {
            *in_degree.get_mut(to).expect("edge endpoint registered") += 1;
        }
        let max_agent_in_degree = in_degree.values().copied().max().unwrap_or(0);

        for (from, to) in &self.command_edges {
            if from == to {
                violations.push(format!("self edge on {from}"));
            }
        }

        let command_cycles = if self.agents.len() <= CYCLE_ENUMERATION_CAP {
            enumerate_elementary_cycles(&self.agents, &self.command_edges)
        } else if has_cycle(&self.agents, &self.command_edges) {
            vec![Vec::new()] // existence marker only
        } else {
            Vec::new()
        };

        match self.structure {
            StructureLabel::Tree => {
                if !command_cycles.is_empty() {
                    violations.push("tree contains command cycles".into());
                }
                if max_agent_in_degree > max_in_degree {
                    violations.push(format!(
                        "tree agent in-degree {max_agent_in_degree} exceeds {max_in_degree}"
                    ));
                }
                let roots: Vec<_> = self
                    .agents
                    .iter()
                    .filter(|a| in_degree[a] == 0)
                    .collect();
                if roots.len() != 1 {
                    violations.push(format!("tree must have exactly one root, found {}", roots.len()));
                } else if self.command_edges.len() != self.agents.len() - 1 {
                    violations.push("tree edges must form a star from the root".into());
                }
            }
            StructureLabel::Chain => {
                if !command_cycles.is_empty() {
                    violations.push("chain contains command cycles".into());
                }
                if max_agent_in_degree > max_in_degree {
                    violations.push(format!(
                        "chain agent in-degree {max_agent_in_degree} exceeds {max_in_degree}"
                    ));
                }
                if self.command_edges.len() != self.agents.len() - 1 {
                    violations.push("chain must be a single directed path".into());
                }
            }
            StructureLabel::Graph => {
                let n = self.agents.len();
                if self.command_edges.len() != n * (n - 1) {
                    violations.push("graph must contain all ordered pairs".into());
                }
            }
            StructureLabel::Solo => {
                if !self.command_edges.is_empty() {
                    violations.push("solo organization cannot have command edges".into());
                }
            }
        }

        ValidationReport {
            is_valid: violations.is_empty(),
            command_cycles,
            max_agent_in_degree,
            violations,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(1)
    }
}

/// Enumerate elementary cycles by DFS from each vertex, keeping only
/// cycles whose smallest member is the start vertex (each cycle once).
fn enumerate_elementary_cycles(
    agents: &[AgentId],
    edges: &BTreeSet<(AgentId, AgentId)>,
) -> Vec<Vec<AgentId>> {
    let mut sorted: Vec<&AgentId> = agents.iter().collect();
    sorted.sort();
    let adjacency: BTreeMap<&AgentId, Vec<&AgentId>> = sorted
        .iter()
        .map(|a| {
            let outs: Vec<&AgentId> = edges
                .iter()
                .filter(|(from, _)| from == *a)
                .map(|(_, to)| to)
                .collect();
            (*a, outs)
        })
        .collect();

    let mut cycles = Vec::new();
    for start in &sorted {
        let mut path = vec![(*start).clone()];
        dfs_cycles(start, start, &adjacency, &mut path, &mut cycles);
    }
    cycles
}

fn dfs_cycles(
    start: &AgentId,
    current: &AgentId,
    adjacency: &BTreeMap<&AgentId, Vec<&AgentId>>,
    path: &mut Vec<AgentId>,
    cycles: &mut Vec<Vec<AgentId>>,
) {
    for next in adjacency.get(current).map(|v| v.as_slice()).unwrap_or(&[]) {
        if *next == start {
            cycles.push(path.clone());
        } else if *next > start && !path.contains(next) {
            path.push((*next).clone());
            dfs_cycles(start, next, adjacency, path, cycles);
            path.pop();
        }
    }
}

fn has_cycle(agents: &[AgentId], edges: &BTreeSet<(AgentId, AgentId)>) -> bool {
    // Kahn's algorithm: a leftover vertex means a cycle.
    let mut in_degree: BTreeMap<&AgentId, usize> = agents.iter().map(|a| (a, 0)).collect();
    for (_, to) in edges {
        *in_degree.get_mut(to).unwrap() += 1;
    }
    let mut queue: Vec<&AgentId> = in_degree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(a, _)| *a)
        .collect();
    let mut removed = 0;
    while let Some(a) = queue.pop() {
        removed += 1;
        for (from, to) in edges {
            if from == a {
                let d = in_degree.get_mut(to).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push(to);
                }
            }
        }
    }
    removed < agents.len()
}

/// Serialized form:
/// `{"structure": "...", "root": "...", "agents": [...], "edges": [["a","b"],...]}`
/// Only command edges are listed; environment edges are implicit.
#[derive(Serialize, Deserialize)]
struct GraphDoc {
    structure: StructureLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    root: Option<AgentId>,
    agents: Vec<AgentId>,
    edges: Vec<(AgentId, AgentId)>,
}

impl Serialize for AgentGraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphDoc {
            structure: self.structure,
            root: self.root.clone(),
            agents: self.agents.clone(),
            edges: self.command_edges.iter().cloned().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AgentGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = GraphDoc::deserialize(d)?;
        check_distinct(&doc.agents).map_err(D::Error::custom)?;
        let agents: BTreeSet<_> = doc.agents.iter().cloned().collect();
        for (a, b) in &doc.edges {
            if !agents.contains(a) || !agents.contains(b) {
                return Err(D::Error::custom(format!("edge references unknown agent: {a} -> {b}")));
            }
        }
        Ok(AgentGraph {
            agents: doc.agents,
            root: doc.root,
            command_edges: doc.edges.into_iter().collect(),
            structure: doc.structure,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(names: &[&str]) -> Vec<AgentId> {
        names.iter().map(|n| AgentId::new(*n)).collect()
    }

    #[test]
    fn agent_id_is_case_insensitive() {
        assert_eq!(AgentId::new("WorkerA"), AgentId::new("workera"));
        assert_eq!(AgentId::new("WorkerA").display_name(), "WorkerA");
    }

    #[test]
    fn toa_edges() {
        let g = build_toa("r".into(), &ids(&["l1", "l2"])).unwrap();
        assert_eq!(g.command_edges().len(), 2);
        assert!(g.command_edges().contains(&("r".into(), "l1".into())));
        assert!(g.command_edges().contains(&("r".into(), "l2".into())));
        // 2 command edges + 3 environment edges
        assert_eq!(g.edges().len(), 5);
        assert_eq!(g.structure(), StructureLabel::Tree);
    }

    #[test]
    fn toa_single_leaf() {
        let g = build_toa("r".into(), &ids(&["l1"])).unwrap();
        assert_eq!(g.command_edges().len(), 1);
    }

    #[test]
    fn toa_duplicate_root() {
        let err = build_toa("r".into(), &ids(&["r"])).unwrap_err();
        assert!(matches!(err, OrgError::DuplicateAgent(_)));
    }

    #[test]
    fn goa_edge_counts() {
        let g = build_goa(&ids(&["a", "b", "c"])).unwrap();
        assert_eq!(g.command_edges().len(), 6);
        let g2 = build_goa(&ids(&["a", "b"])).unwrap();
        assert_eq!(g2.command_edges().len(), 2);
        assert!(matches!(
            build_goa(&ids(&["a"])),
            Err(OrgError::EmptyOrganization(_))
        ));
    }

    #[test]
    fn coa_path_edges() {
        let g = build_coa(&ids(&["a1", "a2", "a3"])).unwrap();
        assert_eq!(g.command_edges().len(), 2);
        assert!(g.command_edges().contains(&("a1".into(), "a2".into())));
        assert!(g.command_edges().contains(&("a2".into(), "a3".into())));
        assert!(matches!(
            build_coa(&ids(&["a1", "a1"])),
            Err(OrgError::DuplicateAgent(_))
        ));
    }

    #[test]
    fn goa_pair_has_cycle() {
        let report = build_goa(&ids(&["a", "b"])).unwrap().validate();
        assert_eq!(report.command_cycles.len(), 1);
        assert_eq!(report.command_cycles[0], ids(&["a", "b"]));
    }

    #[test]
    fn toa_validates_clean() {
        let report = build_toa("r".into(), &ids(&["l1", "l2"])).unwrap().validate();
        assert!(report.is_valid);
        assert!(report.command_cycles.is_empty());
        assert_eq!(report.max_agent_in_degree, 1);
    }

    #[test]
    fn coa_validates_clean() {
        let report = build_coa(&ids(&["a1", "a2", "a3"])).unwrap().validate();
        assert!(report.is_valid);
        assert!(report.command_cycles.is_empty());
        assert_eq!(report.max_agent_in_degree, 1);
    }

    #[test]
    fn command_targets_match_edges() {
        let g = build_toa("r".into(), &ids(&["l1", "l2"])).unwrap();
        let root_targets = g.command_targets(&"r".into()).unwrap();
        assert_eq!(root_targets, ids(&["l1", "l2"]).into_iter().collect());
        assert!(g.command_targets(&"l1".into()).unwrap().is_empty());
        assert!(matches!(
            g.command_targets(&"nobody".into()),
            Err(OrgError::UnknownAgent(_))
        ));

        let goa = build_goa(&ids(&["a", "b", "c"])).unwrap();
        let targets = goa.command_targets(&"a".into()).unwrap();
        assert_eq!(targets, ids(&["b", "c"]).into_iter().collect());
    }

    #[test]
    fn downstream_count_on_chain() {
        let g = build_coa(&ids(&["a1", "a2", "a3"])).unwrap();
        assert_eq!(g.downstream_count(&"a1".into()), 2);
        assert_eq!(g.downstream_count(&"a3".into()), 0);
    }

    #[test]
    fn json_round_trip() {
        let g = build_toa("leader".into(), &ids(&["workera", "workerb"])).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        let back: AgentGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
        assert!(json.contains("\"structure\":\"tree\""));
    }

    #[test]
    fn deserialization_rejects_unknown_edge_endpoint() {
        let doc = r#"{"structure":"tree","root":"r","agents":["r","a"],"edges":[["r","z"]]}"#;
        assert!(serde_json::from_str::<AgentGraph>(doc).is_err());
    }
}
