//! Network geometry: junction nodes, finite line segments between them, and
//! semi-infinite ports where waves are injected or collected.
//!
//! Impedances are dimensionless (the reference input wire has impedance 1)
//! and lengths are in units of the bridge length, so a wavenumber `k` is
//! measured in units of `1/ℓ`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub id: String,
    pub from: String,
    pub to: String,
    pub impedance: f64,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PortRole {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Port {
    pub id: String,
    pub node: String,
    pub impedance: f64,
    pub role: PortRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    nodes: Vec<String>,
    segments: Vec<Segment>,
    ports: Vec<Port>,
}

/// A validated network description. Construction checks that every
/// reference resolves, that ids are unique, and that all impedances and
/// lengths are strictly positive; the value is immutable afterwards.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "RawNetwork")]
pub struct NetworkGraph {
    nodes: Vec<String>,
    segments: Vec<Segment>,
    ports: Vec<Port>,
    node_index: HashMap<String, usize>,
}

impl From<NetworkGraph> for RawNetwork {
    fn from(n: NetworkGraph) -> Self {
        RawNetwork {
            nodes: n.nodes,
            segments: n.segments,
            ports: n.ports,
        }
    }
}

fn positive(what: &str, id: &str, v: f64) -> Result<(), ModelError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ModelError::MalformedNetwork(format!("{what} of `{id}` must be positive, got {v}")))
    }
}

impl NetworkGraph {
    pub fn new(nodes: Vec<String>, segments: Vec<Segment>, ports: Vec<Port>) -> Result<Self, ModelError> {
        let mut node_index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if node_index.insert(n.clone(), i).is_some() {
                return Err(ModelError::MalformedNetwork(format!("duplicate node `{n}`")));
            }
        }
        let known = |node: &str, owner: &str| {
            if node_index.contains_key(node) {
                Ok(())
            } else {
                Err(ModelError::MalformedNetwork(format!("`{owner}` references unknown node `{node}`")))
            }
        };

        let mut seen = HashSet::new();
        for s in &segments {
            if !seen.insert(s.id.as_str()) {
                return Err(ModelError::MalformedNetwork(format!("duplicate segment id `{}`", s.id)));
            }
            known(&s.from, &s.id)?;
            known(&s.to, &s.id)?;
            positive("impedance", &s.id, s.impedance)?;
            positive("length", &s.id, s.length)?;
        }
        let mut seen = HashSet::new();
        for p in &ports {
            if !seen.insert(p.id.as_str()) {
                return Err(ModelError::MalformedNetwork(format!("duplicate port id `{}`", p.id)));
            }
            known(&p.node, &p.id)?;
            positive("impedance", &p.id, p.impedance)?;
        }

        let graph = Self {
            nodes,
            segments,
            ports,
            node_index,
        };
        if let Some(n) = graph.nodes.iter().zip(graph.degrees()).find(|(_, d)| *d == 0) {
            return Err(ModelError::MalformedNetwork(format!("node `{}` has degree 0", n.0)));
        }
        Ok(graph)
    }

    /// Parses the JSON network description. Unknown keys are rejected.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let raw: RawNetwork = serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        Self::new(raw.nodes, raw.segments, raw.ports)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn ports(&self) -> &[Port] {
        &self.ports
    }

    pub fn node_index(&self, node: &str) -> Option<usize> {
        self.node_index.get(node).copied()
    }

    pub fn port_index(&self, id: &str) -> Option<usize> {
        self.ports.iter().position(|p| p.id == id)
    }

    pub fn port(&self, id: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.id == id)
    }

    /// Number of line ends (segment endpoints and ports) meeting at each node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for s in &self.segments {
            deg[self.node_index[&s.from]] += 1;
            deg[self.node_index[&s.to]] += 1;
        }
        for p in &self.ports {
            deg[self.node_index[&p.node]] += 1;
        }
        deg
    }

    /// Two matched ports joined by one segment.
    pub fn straight_line(length: f64, impedance: f64) -> Result<Self, ModelError> {
        Self::new(
            vec!["A".into(), "B".into()],
            vec![Segment {
                id: "line".into(),
                from: "A".into(),
                to: "B".into(),
                impedance,
                length,
            }],
            vec![
                Port {
                    id: "in".into(),
                    node: "A".into(),
                    impedance,
                    role: PortRole::Input,
                    label: Some("|0>_in".into()),
                },
                Port {
                    id: "out".into(),
                    node: "B".into(),
                    impedance,
                    role: PortRole::Output,
                    label: Some("|0>_out".into()),
                },
            ],
        )
    }

    /// Three semi-infinite legs meeting at a single junction node.
    pub fn y_junction(z1: f64, z2: f64, z3: f64) -> Result<Self, ModelError> {
        let leg = |id: &str, z: f64, role: PortRole| Port {
            id: id.into(),
            node: "J".into(),
            impedance: z,
            role,
            label: None,
        };
        Self::new(
            vec!["J".into()],
            Vec::new(),
            vec![
                leg("leg1", z1, PortRole::Input),
                leg("leg2", z2, PortRole::Output),
                leg("leg3", z3, PortRole::Output),
            ],
        )
    }
}
