//! The navigable directed graph of atomic behavior spaces.
//!
//! Vertices are (space, direction) pairs, one per directional behavior
//! present in the map. Longitudinal successor edges connect a vertex's exit
//! corners to another vertex's entry corners; lateral edges connect spaces
//! sharing a bound linestring, with the neighbor's direction chosen so both
//! travel the same heading. Every edge carries the governing crossing
//! demands: the target's longitudinal (entry) boundary for successor edges,
//! the source's lateral (exit) boundary for lateral edges.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::attributes::CrossingDemand;
use crate::behavior::{Behavior, TravelDirection};
use crate::geometry::ResolvedLane;
use crate::ids::SpaceId;
use crate::map::SceneryMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("path steps {0} and {1} are not connected by an edge")]
    NonAdjacentSteps(usize, usize),
}

/// A directional behavior: one atomic behavior space travelled in one
/// direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId {
    pub space: SpaceId,
    pub direction: TravelDirection,
}

impl VertexId {
    pub fn along(space: SpaceId) -> VertexId {
        VertexId {
            space,
            direction: TravelDirection::Along,
        }
    }

    pub fn against(space: SpaceId) -> VertexId {
        VertexId {
            space,
            direction: TravelDirection::Against,
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.space, self.direction)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    LongitudinalSuccessor,
    LateralLeft,
    LateralRight,
}

impl EdgeKind {
    pub fn token(&self) -> &'static str {
        match self {
            EdgeKind::LongitudinalSuccessor => "longitudinal",
            EdgeKind::LateralLeft => "lateral_left",
            EdgeKind::LateralRight => "lateral_right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LateralNeighbors {
    pub left: Option<VertexId>,
    pub right: Option<VertexId>,
}

/// One step of a demand sequence along a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep<'a> {
    pub vertex: VertexId,
    pub behavior: &'a Behavior,
    /// The crossing demands governing entry into this step; `None` for the
    /// first step of a path.
    pub entry: Option<(EdgeKind, &'a [CrossingDemand])>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BehaviorGraph {
    vertices: BTreeMap<VertexId, Behavior>,
    longitudinal: BTreeMap<VertexId, Vec<VertexId>>,
    lateral: BTreeMap<VertexId, LateralNeighbors>,
}

impl BehaviorGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn contains(&self, vertex: VertexId) -> bool {
        self.vertices.contains_key(&vertex)
    }

    pub fn behavior(&self, vertex: VertexId) -> Option<&Behavior> {
        self.vertices.get(&vertex)
    }

    /// Longitudinal successors, sorted by vertex id.
    pub fn successors(&self, vertex: VertexId) -> Result<&[VertexId], GraphError> {
        if !self.contains(vertex) {
            return Err(GraphError::UnknownVertex(vertex));
        }
        Ok(self
            .longitudinal
            .get(&vertex)
            .map(Vec::as_slice)
            .unwrap_or(&[]))
    }

    pub fn lateral_neighbors(&self, vertex: VertexId) -> Result<LateralNeighbors, GraphError> {
        if !self.contains(vertex) {
            return Err(GraphError::UnknownVertex(vertex));
        }
        Ok(self.lateral.get(&vertex).copied().unwrap_or_default())
    }

    /// The edge from `from` to `to`, with its governing crossing demands.
    pub fn edge(&self, from: VertexId, to: VertexId) -> Option<(EdgeKind, &[CrossingDemand])> {
        if self
            .longitudinal
            .get(&from)
            .is_some_and(|succ| succ.contains(&to))
        {
            let demands = &self.vertices.get(&to)?.boundary_long.demands;
            return Some((EdgeKind::LongitudinalSuccessor, demands));
        }
        let lateral = self.lateral.get(&from)?;
        if lateral.left == Some(to) {
            return Some((
                EdgeKind::LateralLeft,
                self.vertices[&from].boundary_left.demands.as_slice(),
            ));
        }
        if lateral.right == Some(to) {
            return Some((
                EdgeKind::LateralRight,
                self.vertices[&from].boundary_right.demands.as_slice(),
            ));
        }
        None
    }

    /// All edges in deterministic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, EdgeKind)> {
        let mut edges = Vec::new();
        for (from, successors) in &self.longitudinal {
            for to in successors {
                edges.push((*from, *to, EdgeKind::LongitudinalSuccessor));
            }
        }
        for (from, neighbors) in &self.lateral {
            if let Some(to) = neighbors.left {
                edges.push((*from, to, EdgeKind::LateralLeft));
            }
            if let Some(to) = neighbors.right {
                edges.push((*from, to, EdgeKind::LateralRight));
            }
        }
        edges.sort();
        edges
    }

    /// Edge-list dump, one `src dst kind` line per edge.
    pub fn dump_edges(&self) -> String {
        let mut out = String::new();
        for (from, to, kind) in self.edges() {
            out.push_str(&format!("{from} {to} {}\n", kind.token()));
        }
        out
    }

    /// The explicit per-step demand bundle along a path, including each
    /// step's entry crossing demands.
    pub fn sequence_demands(&self, path: &[VertexId]) -> Result<Vec<PathStep<'_>>, GraphError> {
        for vertex in path {
            if !self.contains(*vertex) {
                return Err(GraphError::UnknownVertex(*vertex));
            }
        }
        let mut steps = Vec::with_capacity(path.len());
        for (index, vertex) in path.iter().enumerate() {
            let entry = if index == 0 {
                None
            } else {
                let from = path[index - 1];
                Some(
                    self.edge(from, *vertex)
                        .ok_or(GraphError::NonAdjacentSteps(index - 1, index))?,
                )
            };
            steps.push(PathStep {
                vertex: *vertex,
                behavior: &self.vertices[vertex],
                entry,
            });
        }
        Ok(steps)
    }

    // The mutators below exist for experiments and consistency testing; a
    // graph built by `build_graph` needs no fixing up.

    pub fn insert_vertex(&mut self, vertex: VertexId, behavior: Behavior) {
        self.vertices.insert(vertex, behavior);
    }

    pub fn remove_vertex(&mut self, vertex: VertexId) {
        self.vertices.remove(&vertex);
        self.longitudinal.remove(&vertex);
        self.lateral.remove(&vertex);
        for successors in self.longitudinal.values_mut() {
            successors.retain(|v| *v != vertex);
        }
        for neighbors in self.lateral.values_mut() {
            if neighbors.left == Some(vertex) {
                neighbors.left = None;
            }
            if neighbors.right == Some(vertex) {
                neighbors.right = None;
            }
        }
    }

    pub fn insert_longitudinal_edge(&mut self, from: VertexId, to: VertexId) {
        let successors = self.longitudinal.entry(from).or_default();
        if !successors.contains(&to) {
            successors.push(to);
            successors.sort();
        }
    }

    pub fn remove_longitudinal_edge(&mut self, from: VertexId, to: VertexId) {
        if let Some(successors) = self.longitudinal.get_mut(&from) {
            successors.retain(|v| *v != to);
        }
    }

    /// Longitudinal edge set, for consistency checks.
    pub fn longitudinal_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut edges = Vec::new();
        for (from, successors) in &self.longitudinal {
            for to in successors {
                edges.push((*from, *to));
            }
        }
        edges.sort();
        edges
    }
}

/// Travel-ordered (left, right) corner node pair.
type Corners = (i64, i64);

fn swap(corners: Corners) -> Corners {
    (corners.1, corners.0)
}

/// A space's corner pairs and resolved chain membership.
pub(crate) struct SpaceEnds {
    pub enter_along: Corners,
    /// `None` when the lanelet chain could not be walked to its tail.
    pub leave_along: Option<Corners>,
    /// Resolved chain members with their alignment: `true` when the member's
    /// reference direction matches the space's along direction.
    pub members: Vec<(ResolvedLane, bool)>,
    pub broken_chain: bool,
}

impl SpaceEnds {
    fn enter(&self, direction: TravelDirection) -> Option<Corners> {
        match direction {
            TravelDirection::Along => Some(self.enter_along),
            TravelDirection::Against => self.leave_along.map(swap),
        }
    }

    fn leave(&self, direction: TravelDirection) -> Option<Corners> {
        match direction {
            TravelDirection::Along => self.leave_along,
            TravelDirection::Against => Some(swap(self.enter_along)),
        }
    }
}

/// Resolves every typed space's chain geometry. Spaces with missing geometry
/// are absent from the result (their vertices stay isolated).
pub(crate) fn resolve_space_ends(map: &SceneryMap) -> BTreeMap<SpaceId, SpaceEnds> {
    let mut ends = BTreeMap::new();
    for space in map.spaces() {
        let lanes: Option<Vec<&crate::behavior::LaneElement>> =
            space.lanes.iter().map(|id| map.lane(*id)).collect();
        let Some(lanes) = lanes else { continue };
        let Some(walk) = crate::geometry::walk_chain(map.doc(), &lanes) else {
            continue;
        };
        ends.insert(
            space.id,
            SpaceEnds {
                enter_along: walk.enter,
                leave_along: walk.leave,
                broken_chain: walk.leave.is_none(),
                members: walk.members,
            },
        );
    }
    ends
}

pub(crate) type Topology = (
    BTreeMap<VertexId, Behavior>,
    BTreeMap<VertexId, Vec<VertexId>>,
    BTreeMap<VertexId, LateralNeighbors>,
);

/// Computes the deterministic vertex and edge structure for a map.
pub(crate) fn compute_topology(map: &SceneryMap) -> Topology {
    let ends = resolve_space_ends(map);

    let mut vertices = BTreeMap::new();
    for space in map.spaces() {
        for direction in space.directions() {
            let vertex = VertexId {
                space: space.id,
                direction,
            };
            vertices.insert(vertex, space.behavior(direction).unwrap().clone());
        }
    }

    // Longitudinal: leave corners of one vertex match enter corners of the
    // next.
    let mut enter_index: BTreeMap<Corners, Vec<VertexId>> = BTreeMap::new();
    for vertex in vertices.keys() {
        if let Some(space_ends) = ends.get(&vertex.space) {
            if let Some(corners) = space_ends.enter(vertex.direction) {
                enter_index.entry(corners).or_default().push(*vertex);
            }
        }
    }
    let mut longitudinal: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for vertex in vertices.keys() {
        let Some(space_ends) = ends.get(&vertex.space) else {
            continue;
        };
        let Some(leave) = space_ends.leave(vertex.direction) else {
            continue;
        };
        let successors: Vec<VertexId> = enter_index
            .get(&leave)
            .into_iter()
            .flatten()
            .copied()
            .filter(|succ| succ.space != vertex.space)
            .collect();
        if !successors.is_empty() {
            longitudinal.insert(*vertex, successors);
        }
    }

    // Lateral: shared bound linestrings. Index every bound use, then match
    // headings per vertex.
    struct BoundUse {
        space: SpaceId,
        /// Orientation of reference-direction travel relative to the stored
        /// way orientation (+1 aligned, -1 reversed).
        ref_orientation: i8,
        aligned: bool,
    }
    let mut bound_index: BTreeMap<i64, Vec<BoundUse>> = BTreeMap::new();
    for (space_id, space_ends) in &ends {
        for (resolved, aligned) in &space_ends.members {
            for (way, reversed) in [
                (resolved.left_way.0, resolved.left_reversed),
                (resolved.right_way.0, resolved.right_reversed),
            ] {
                bound_index.entry(way).or_default().push(BoundUse {
                    space: *space_id,
                    ref_orientation: if reversed { -1 } else { 1 },
                    aligned: *aligned,
                });
            }
        }
    }

    let mut lateral: BTreeMap<VertexId, LateralNeighbors> = BTreeMap::new();
    for vertex in vertices.keys() {
        let Some(space_ends) = ends.get(&vertex.space) else {
            continue;
        };
        let mut neighbors = LateralNeighbors::default();
        for (resolved, aligned) in &space_ends.members {
            // Does this member run with the vertex's travel direction?
            let travels_ref = (vertex.direction == TravelDirection::Along) == *aligned;
            for (way, own_reversed, is_travel_left) in [
                (resolved.left_way.0, resolved.left_reversed, travels_ref),
                (resolved.right_way.0, resolved.right_reversed, !travels_ref),
            ] {
                let slot = if is_travel_left {
                    &mut neighbors.left
                } else {
                    &mut neighbors.right
                };
                if slot.is_some() {
                    continue;
                }
                // Orientation of this vertex's travel over the shared way.
                let own_ref: i8 = if own_reversed { -1 } else { 1 };
                let travel_orientation = if travels_ref { own_ref } else { -own_ref };

                let mut candidates: Vec<VertexId> = Vec::new();
                for usage in bound_index.get(&way).into_iter().flatten() {
                    if usage.space == vertex.space {
                        continue;
                    }
                    // The neighbor must travel the way with the same heading.
                    let neighbor_travels_ref = usage.ref_orientation == travel_orientation;
                    let neighbor_direction = if neighbor_travels_ref == usage.aligned {
                        TravelDirection::Along
                    } else {
                        TravelDirection::Against
                    };
                    let candidate = VertexId {
                        space: usage.space,
                        direction: neighbor_direction,
                    };
                    if vertices.contains_key(&candidate) {
                        candidates.push(candidate);
                    }
                }
                candidates.sort();
                if let Some(first) = candidates.first() {
                    *slot = Some(*first);
                }
            }
        }
        if neighbors.left.is_some() || neighbors.right.is_some() {
            lateral.insert(*vertex, neighbors);
        }
    }

    (vertices, longitudinal, lateral)
}

/// Builds the behavior graph for a sealed map. Deterministic: identical maps
/// produce identical graphs.
pub fn build_graph(map: &SceneryMap) -> BehaviorGraph {
    let (vertices, longitudinal, lateral) = compute_topology(map);
    BehaviorGraph {
        vertices,
        longitudinal,
        lateral,
    }
}
