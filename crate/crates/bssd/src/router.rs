//! Capability-filtered routing over the behavior graph.
//!
//! A capability profile declares what a vehicle can do; an element is
//! admissible when every demand it imposes is within those capabilities.
//! Maximum-speed demands never block (driving slower is legal); minimum-speed
//! demands, reservations for road users the vehicle cannot yield to, and
//! crossings it cannot perform do. Routes minimize hop count with a
//! deterministic tie-break: the lexicographically smallest vertex id
//! sequence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::attributes::{CrossingDemand, CrossingPermission, ParticipantType, SpeedLimitKind};
use crate::behavior::Behavior;
use crate::builder::parse_kv_block;
use crate::condition::ConditionKind;
use crate::fingerprint::AttributeName;
use crate::graph::{BehaviorGraph, EdgeKind, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no edge between {0} and {1}")]
    UnknownEdge(VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("line is not `key: value`: {0}")]
    Malformed(String),
    #[error("unknown profile key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: {message}")]
    BadValue { key: String, message: String },
    #[error("max_speed_kmh must be positive")]
    NonPositiveSpeed,
}

/// A vehicle's declared skills, matched against behavioral demands.
#[derive(Debug, Clone, PartialEq)]
pub struct CapabilityProfile {
    pub max_speed_kmh: f64,
    pub yieldable: BTreeSet<ParticipantType>,
    pub supported_conditions: BTreeSet<ConditionKind>,
    pub may_enter_externally_reserved: bool,
    pub may_cross_conditional: bool,
}

impl CapabilityProfile {
    /// The top element of the capability lattice: everything but physically
    /// impossible crossings is admissible.
    pub fn full() -> CapabilityProfile {
        CapabilityProfile {
            max_speed_kmh: 400.0,
            yieldable: [
                ParticipantType::MotorVehicle,
                ParticipantType::Pedestrian,
                ParticipantType::Bicycle,
                ParticipantType::RailVehicle,
            ]
            .into_iter()
            .collect(),
            supported_conditions: ConditionKind::ALL.into_iter().collect(),
            may_enter_externally_reserved: true,
            may_cross_conditional: true,
        }
    }

    /// Parses the `key: value` profile block:
    ///
    /// ```text
    /// max_speed_kmh: 120
    /// yieldable: pedestrian; bicycle
    /// supported_conditions: no_stagnant_traffic; traffic_light
    /// may_enter_externally_reserved: false
    /// may_cross_conditional: true
    /// ```
    pub fn parse(text: &str) -> Result<CapabilityProfile, ProfileError> {
        let pairs = parse_kv_block(text).map_err(|e| ProfileError::Malformed(e.to_string()))?;
        let mut profile = CapabilityProfile {
            max_speed_kmh: 0.0,
            yieldable: BTreeSet::new(),
            supported_conditions: BTreeSet::new(),
            may_enter_externally_reserved: false,
            may_cross_conditional: false,
        };
        let bad = |key: &str, message: String| ProfileError::BadValue {
            key: key.to_string(),
            message,
        };
        let mut saw_speed = false;
        for (key, value) in pairs {
            match key.as_str() {
                "max_speed_kmh" => {
                    profile.max_speed_kmh = value
                        .parse()
                        .map_err(|_| bad(&key, format!("`{value}` is not a number")))?;
                    saw_speed = true;
                }
                "yieldable" => {
                    for token in value.split(';').map(str::trim).filter(|t| !t.is_empty()) {
                        profile
                            .yieldable
                            .insert(ParticipantType::parse_token(token).map_err(|_| {
                                bad(&key, format!("unknown participant `{token}`"))
                            })?);
                    }
                }
                "supported_conditions" => {
                    for token in value.split(';').map(str::trim).filter(|t| !t.is_empty()) {
                        profile.supported_conditions.insert(
                            ConditionKind::parse(token).ok_or_else(|| {
                                bad(&key, format!("unknown condition kind `{token}`"))
                            })?,
                        );
                    }
                }
                "may_enter_externally_reserved" => {
                    profile.may_enter_externally_reserved = parse_bool(&key, &value)?;
                }
                "may_cross_conditional" => {
                    profile.may_cross_conditional = parse_bool(&key, &value)?;
                }
                other => return Err(ProfileError::UnknownKey(other.to_string())),
            }
        }
        if !saw_speed || profile.max_speed_kmh <= 0.0 {
            return Err(ProfileError::NonPositiveSpeed);
        }
        Ok(profile)
    }

    /// True when this profile's capabilities include all of `other`'s.
    pub fn includes(&self, other: &CapabilityProfile) -> bool {
        self.max_speed_kmh >= other.max_speed_kmh
            && other.yieldable.is_subset(&self.yieldable)
            && other
                .supported_conditions
                .is_subset(&self.supported_conditions)
            && (self.may_enter_externally_reserved || !other.may_enter_externally_reserved)
            && (self.may_cross_conditional || !other.may_cross_conditional)
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ProfileError> {
    match value {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        other => Err(ProfileError::BadValue {
            key: key.to_string(),
            message: format!("expected true or false, got `{other}`"),
        }),
    }
}

/// Why an element is inadmissible: the violated attribute and the demand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InadmissibleReason {
    pub attribute: AttributeName,
    pub demand: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    Inadmissible(InadmissibleReason),
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

/// Whether a vehicle may drive a directional behavior at all: minimum speed
/// demands must be reachable and the reservation must be satisfiable.
pub fn behavior_admissible(behavior: &Behavior, profile: &CapabilityProfile) -> Admissibility {
    for demand in &behavior.speed.demands {
        if demand.limit == SpeedLimitKind::Minimum && demand.value.value() > profile.max_speed_kmh {
            return Admissibility::Inadmissible(InadmissibleReason {
                attribute: AttributeName::Speed,
                demand: format!("min {} km/h", demand.value),
            });
        }
    }
    for demand in &behavior.reservation.demands {
        if demand.kind.requires_entitled()
            && !demand.entitled.is_subset(&profile.yieldable)
            && !profile.may_enter_externally_reserved
        {
            let entitled: Vec<String> = demand.entitled.iter().map(|p| p.token()).collect();
            return Admissibility::Inadmissible(InadmissibleReason {
                attribute: AttributeName::Reservation,
                demand: format!("{} ({})", demand.kind.token(), entitled.join(", ")),
            });
        }
    }
    Admissibility::Admissible
}

/// Whether a crossing governed by a demand list is performable: at least one
/// demand must grant passage.
pub fn crossing_admissible(
    demands: &[CrossingDemand],
    attribute: AttributeName,
    profile: &CapabilityProfile,
) -> Admissibility {
    let passable = demands.iter().any(|demand| match demand.permission {
        CrossingPermission::Allowed => true,
        CrossingPermission::Conditional => {
            profile.may_cross_conditional
                && demand
                    .condition
                    .as_ref()
                    .is_some_and(|c| profile.supported_conditions.contains(&c.kind()))
        }
        CrossingPermission::Prohibited | CrossingPermission::NotPossible => false,
    });
    if passable {
        return Admissibility::Admissible;
    }
    let rendered: Vec<String> = demands
        .iter()
        .map(|d| match &d.condition {
            Some(condition) => format!("{} ({})", d.permission.token(), condition.token()),
            None => d.permission.token().to_string(),
        })
        .collect();
    Admissibility::Inadmissible(InadmissibleReason {
        attribute,
        demand: rendered.join("; "),
    })
}

/// Admissibility of a graph vertex under a profile.
pub fn admissible_vertex(
    graph: &BehaviorGraph,
    vertex: VertexId,
    profile: &CapabilityProfile,
) -> Result<Admissibility, RouteError> {
    let behavior = graph
        .behavior(vertex)
        .ok_or(RouteError::UnknownVertex(vertex))?;
    Ok(behavior_admissible(behavior, profile))
}

/// Admissibility of traversing an edge: the governing crossing demands must
/// grant passage.
pub fn admissible_edge(
    graph: &BehaviorGraph,
    from: VertexId,
    to: VertexId,
    profile: &CapabilityProfile,
) -> Result<Admissibility, RouteError> {
    for vertex in [from, to] {
        if !graph.contains(vertex) {
            return Err(RouteError::UnknownVertex(vertex));
        }
    }
    let (kind, demands) = graph
        .edge(from, to)
        .ok_or(RouteError::UnknownEdge(from, to))?;
    let attribute = match kind {
        EdgeKind::LongitudinalSuccessor => AttributeName::BoundaryLong,
        EdgeKind::LateralLeft => AttributeName::BoundaryLeft,
        EdgeKind::LateralRight => AttributeName::BoundaryRight,
    };
    Ok(crossing_admissible(demands, attribute, profile))
}

/// A frontier vertex rejected during route search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockedVertex {
    pub vertex: VertexId,
    pub attribute: AttributeName,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteResult {
    pub path: Vec<VertexId>,
    pub blocked_alternatives: Vec<BlockedVertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RouteOutcome {
    Route(RouteResult),
    NoRoute {
        blocked_alternatives: Vec<BlockedVertex>,
    },
}

impl RouteOutcome {
    pub fn route(&self) -> Option<&RouteResult> {
        match self {
            RouteOutcome::Route(result) => Some(result),
            RouteOutcome::NoRoute { .. } => None,
        }
    }

    pub fn blocked_alternatives(&self) -> &[BlockedVertex] {
        match self {
            RouteOutcome::Route(result) => &result.blocked_alternatives,
            RouteOutcome::NoRoute {
                blocked_alternatives,
            } => blocked_alternatives,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let blocked: Vec<serde_json::Value> = self
            .blocked_alternatives()
            .iter()
            .map(|b| {
                json!({
                    "space": b.vertex.space.0,
                    "direction": b.vertex.direction.token(),
                    "attribute": b.attribute.token(),
                    "reason": b.reason,
                })
            })
            .collect();
        let path = self.route().map(|result| {
            result
                .path
                .iter()
                .map(|v| {
                    json!({
                        "space": v.space.0,
                        "direction": v.direction.token(),
                    })
                })
                .collect::<Vec<_>>()
        });
        json!({
            "path": path,
            "blocked_alternatives": blocked,
        })
    }
}

/// All outgoing edges of a vertex (longitudinal successors and lateral
/// neighbors), sorted.
fn neighbors(graph: &BehaviorGraph, vertex: VertexId) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = graph
        .successors(vertex)
        .map(|s| s.to_vec())
        .unwrap_or_default();
    if let Ok(lateral) = graph.lateral_neighbors(vertex) {
        out.extend(lateral.left);
        out.extend(lateral.right);
    }
    out.sort();
    out.dedup();
    out
}

/// Plans the shortest admissible route by hop count. Among equally short
/// routes the lexicographically smallest vertex id sequence wins. Blocked
/// alternatives list the frontier vertices rejected by admissibility checks.
pub fn plan_route(
    graph: &BehaviorGraph,
    from: VertexId,
    to: VertexId,
    profile: &CapabilityProfile,
) -> Result<RouteOutcome, RouteError> {
    for vertex in [from, to] {
        if !graph.contains(vertex) {
            return Err(RouteError::UnknownVertex(vertex));
        }
    }

    let mut blocked: BTreeMap<VertexId, InadmissibleReason> = BTreeMap::new();

    if let Admissibility::Inadmissible(reason) = admissible_vertex(graph, from, profile)? {
        blocked.insert(from, reason);
        return Ok(RouteOutcome::NoRoute {
            blocked_alternatives: collect_blocked(blocked),
        });
    }
    if from == to {
        return Ok(RouteOutcome::Route(RouteResult {
            path: vec![from],
            blocked_alternatives: Vec::new(),
        }));
    }

    // Forward BFS over the admissible subgraph, collecting rejected frontier
    // vertices on the way.
    let mut dist_from: BTreeMap<VertexId, usize> = BTreeMap::new();
    dist_from.insert(from, 0);
    let mut queue = VecDeque::from([from]);
    while let Some(current) = queue.pop_front() {
        let current_dist = dist_from[&current];
        for next in neighbors(graph, current) {
            if dist_from.contains_key(&next) {
                continue;
            }
            match admissible_edge(graph, current, next, profile)? {
                Admissibility::Inadmissible(reason) => {
                    blocked.entry(next).or_insert(reason);
                    continue;
                }
                Admissibility::Admissible => {}
            }
            match admissible_vertex(graph, next, profile)? {
                Admissibility::Inadmissible(reason) => {
                    blocked.entry(next).or_insert(reason);
                    continue;
                }
                Admissibility::Admissible => {}
            }
            dist_from.insert(next, current_dist + 1);
            queue.push_back(next);
        }
    }

    let Some(&total) = dist_from.get(&to) else {
        return Ok(RouteOutcome::NoRoute {
            blocked_alternatives: collect_blocked(blocked),
        });
    };

    // Reverse BFS from the target over the admissible subgraph gives the
    // remaining distance per vertex; walking greedily by smallest vertex id
    // yields the lexicographically smallest shortest path.
    let mut reverse: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let admissible_vertices: Vec<VertexId> = graph
        .vertices()
        .filter(|v| {
            admissible_vertex(graph, *v, profile)
                .map(|a| a.is_admissible())
                .unwrap_or(false)
        })
        .collect();
    let admissible_set: BTreeSet<VertexId> = admissible_vertices.iter().copied().collect();
    for vertex in &admissible_vertices {
        for next in neighbors(graph, *vertex) {
            if !admissible_set.contains(&next) {
                continue;
            }
            if admissible_edge(graph, *vertex, next, profile)?.is_admissible() {
                reverse.entry(next).or_default().push(*vertex);
            }
        }
    }
    let mut dist_to: BTreeMap<VertexId, usize> = BTreeMap::new();
    dist_to.insert(to, 0);
    let mut queue = VecDeque::from([to]);
    while let Some(current) = queue.pop_front() {
        let current_dist = dist_to[&current];
        for previous in reverse.get(&current).cloned().unwrap_or_default() {
            if let std::collections::btree_map::Entry::Vacant(e) = dist_to.entry(previous) {
                e.insert(current_dist + 1);
                queue.push_back(previous);
            }
        }
    }

    let mut path = vec![from];
    let mut current = from;
    for remaining in (0..total).rev() {
        let next = neighbors(graph, current)
            .into_iter()
            .filter(|next| dist_to.get(next) == Some(&remaining))
            .find(|next| {
                admissible_set.contains(next)
                    && admissible_edge(graph, current, *next, profile)
                        .map(|a| a.is_admissible())
                        .unwrap_or(false)
            })
            .expect("shortest-path walk stays on the admissible subgraph");
        path.push(next);
        current = next;
    }

    Ok(RouteOutcome::Route(RouteResult {
        path,
        blocked_alternatives: collect_blocked(blocked),
    }))
}

fn collect_blocked(map: BTreeMap<VertexId, InadmissibleReason>) -> Vec<BlockedVertex> {
    map.into_iter()
        .map(|(vertex, reason)| BlockedVertex {
            vertex,
            attribute: reason.attribute,
            reason: reason.demand,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condition::ConditionKind;

    #[test]
    fn profile_file_parses() {
        let profile = CapabilityProfile::parse(
            "# comment\nmax_speed_kmh: 120\nyieldable: pedestrian; bicycle\nsupported_conditions: no_stagnant_traffic; traffic_light\nmay_enter_externally_reserved: false\nmay_cross_conditional: true\n",
        )
        .unwrap();
        assert_eq!(profile.max_speed_kmh, 120.0);
        assert_eq!(profile.yieldable.len(), 2);
        assert!(profile
            .supported_conditions
            .contains(&ConditionKind::TrafficLight));
        assert!(!profile.may_enter_externally_reserved);
        assert!(profile.may_cross_conditional);
    }

    #[test]
    fn profile_rejects_bad_input() {
        assert!(matches!(
            CapabilityProfile::parse("yieldable: pedestrian\n"),
            Err(ProfileError::NonPositiveSpeed)
        ));
        assert!(matches!(
            CapabilityProfile::parse("max_speed_kmh: -3\n"),
            Err(ProfileError::NonPositiveSpeed)
        ));
        assert!(matches!(
            CapabilityProfile::parse("max_speed_kmh: 50\ntop_speed: 10\n"),
            Err(ProfileError::UnknownKey(_))
        ));
        assert!(matches!(
            CapabilityProfile::parse("max_speed_kmh: 50\nmay_cross_conditional: maybe\n"),
            Err(ProfileError::BadValue { .. })
        ));
        assert!(matches!(
            CapabilityProfile::parse("max_speed_kmh: 50\nyieldable: dog\n"),
            Err(ProfileError::BadValue { .. })
        ));
    }

    #[test]
    fn full_profile_includes_every_sampled_profile() {
        let full = CapabilityProfile::full();
        for seed in 0..50 {
            assert!(full.includes(&crate::sample::sample_profile(seed)));
        }
    }
}
