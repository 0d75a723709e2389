//! OSM XML document model and the BSSD relation encoding on top of it.
//!
//! The document keeps every element verbatim, BSSD or not, so that a loaded
//! map can be written back without losing unknown content. Elements are keyed
//! by id; tags are stored sorted, member and node-ref order is preserved.

mod edit;
mod extract;
mod read;
pub mod schema;
mod write;

pub use edit::{add_longitudinal_boundary, split_lanelet, BoundaryEnd, EditError, SplitOutcome};
pub(crate) use extract::extract_map;
pub use read::read_document;
pub use write::write_document;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OsmError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed xml near byte {position}: {message}")]
    MalformedXml { position: u64, message: String },
    #[error("{kind} element near byte {position} is invalid: {message}")]
    InvalidElement {
        kind: ElementKind,
        position: u64,
        message: String,
    },
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: ElementKind, id: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Node,
    Way,
    Relation,
}

impl ElementKind {
    pub fn token(&self) -> &'static str {
        match self {
            ElementKind::Node => "node",
            ElementKind::Way => "way",
            ElementKind::Relation => "relation",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Reference to a document element, used in diagnostics and findings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementRef {
    pub kind: ElementKind,
    pub id: i64,
}

impl ElementRef {
    pub fn node(id: i64) -> ElementRef {
        ElementRef {
            kind: ElementKind::Node,
            id,
        }
    }

    pub fn way(id: i64) -> ElementRef {
        ElementRef {
            kind: ElementKind::Way,
            id,
        }
    }

    pub fn relation(id: i64) -> ElementRef {
        ElementRef {
            kind: ElementKind::Relation,
            id,
        }
    }
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.kind, self.id)
    }
}

pub type Tags = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq)]
pub struct OsmNode {
    pub id: i64,
    pub lat: f64,
    pub lon: f64,
    pub tags: Tags,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OsmWay {
    pub id: i64,
    pub node_refs: Vec<i64>,
    pub tags: Tags,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OsmMember {
    pub kind: ElementKind,
    pub ref_id: i64,
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OsmRelation {
    pub id: i64,
    pub members: Vec<OsmMember>,
    pub tags: Tags,
}

impl OsmRelation {
    pub fn tag(&self, key: &str) -> Option<&str> {
        self.tags.get(key).map(String::as_str)
    }

    pub fn members_with_role<'a>(
        &'a self,
        role: &'a str,
    ) -> impl Iterator<Item = &'a OsmMember> + 'a {
        self.members.iter().filter(move |m| m.role == role)
    }
}

/// A full OSM document. Structural equality over documents is the round-trip
/// identity the writer guarantees.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OsmDocument {
    pub nodes: BTreeMap<i64, OsmNode>,
    pub ways: BTreeMap<i64, OsmWay>,
    pub relations: BTreeMap<i64, OsmRelation>,
}

impl OsmDocument {
    pub fn new() -> OsmDocument {
        OsmDocument::default()
    }

    pub fn insert_node(&mut self, node: OsmNode) -> Result<(), OsmError> {
        if self.nodes.contains_key(&node.id) {
            return Err(OsmError::DuplicateId {
                kind: ElementKind::Node,
                id: node.id,
            });
        }
        self.nodes.insert(node.id, node);
        Ok(())
    }

    pub fn insert_way(&mut self, way: OsmWay) -> Result<(), OsmError> {
        if self.ways.contains_key(&way.id) {
            return Err(OsmError::DuplicateId {
                kind: ElementKind::Way,
                id: way.id,
            });
        }
        self.ways.insert(way.id, way);
        Ok(())
    }

    pub fn insert_relation(&mut self, relation: OsmRelation) -> Result<(), OsmError> {
        if self.relations.contains_key(&relation.id) {
            return Err(OsmError::DuplicateId {
                kind: ElementKind::Relation,
                id: relation.id,
            });
        }
        self.relations.insert(relation.id, relation);
        Ok(())
    }

    /// Merges another document into this one. Ids must be disjoint per
    /// element kind; the first clash aborts the merge midway.
    pub fn merge(&mut self, other: OsmDocument) -> Result<(), OsmError> {
        for (_, node) in other.nodes {
            self.insert_node(node)?;
        }
        for (_, way) in other.ways {
            self.insert_way(way)?;
        }
        for (_, relation) in other.relations {
            self.insert_relation(relation)?;
        }
        Ok(())
    }

    pub fn contains(&self, element: ElementRef) -> bool {
        match element.kind {
            ElementKind::Node => self.nodes.contains_key(&element.id),
            ElementKind::Way => self.ways.contains_key(&element.id),
            ElementKind::Relation => self.relations.contains_key(&element.id),
        }
    }

    /// Smallest unused id for a given element kind, starting at 1.
    pub fn next_id(&self, kind: ElementKind) -> i64 {
        let max = match kind {
            ElementKind::Node => self.nodes.keys().next_back().copied(),
            ElementKind::Way => self.ways.keys().next_back().copied(),
            ElementKind::Relation => self.relations.keys().next_back().copied(),
        };
        max.map_or(1, |id| id.max(0) + 1)
    }

    /// Every member reference that does not resolve within the document.
    pub fn dangling_members(&self) -> Vec<(ElementRef, ElementRef)> {
        let mut dangling = Vec::new();
        for relation in self.relations.values() {
            for member in &relation.members {
                let target = ElementRef {
                    kind: member.kind,
                    id: member.ref_id,
                };
                if !self.contains(target) {
                    dangling.push((ElementRef::relation(relation.id), target));
                }
            }
        }
        for way in self.ways.values() {
            for node_ref in &way.node_refs {
                if !self.nodes.contains_key(node_ref) {
                    dangling.push((ElementRef::way(way.id), ElementRef::node(*node_ref)));
                }
            }
        }
        dangling.sort();
        dangling
    }
}
