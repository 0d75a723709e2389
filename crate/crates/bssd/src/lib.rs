//! Behavior-Semantic Scenery Description (BSSD) toolkit.
//!
//! Represents, validates, queries and routes over behavior-semantic scenery
//! descriptions of road networks, encoded as an extension of Lanelet2-style
//! OSM XML maps. A behavior space bundles the four behavioral attributes
//! (speed, boundary, reservation, overtake) a scenery section imposes per
//! driving direction; this crate models them, reads and writes the map
//! encoding, links the spaces into a navigable graph, checks structural
//! rules, and plans capability-aware routes.

pub mod attributes;
pub mod behavior;
pub mod builder;
pub mod condition;
pub mod diag;
pub mod export;
pub mod fingerprint;
pub mod geometry;
pub mod graph;
pub mod ids;
pub mod map;
pub mod osm;
pub mod router;
pub mod sample;
pub mod topology;
pub mod validator;

pub use attributes::{
    BoundaryAttribute, CrossingDemand, CrossingPermission, OvertakeAttribute, OvertakeDemand,
    ParticipantType, ReservationAttribute, ReservationDemand, ReservationKind, ReservationLink,
    SpeedAttribute, SpeedDemand, SpeedKmh, SpeedLimitKind,
};
pub use behavior::{
    AtomicBehaviorSpace, Behavior, BoundarySide, LaneElement, LaneKind, NonRegularMotionSpace,
    TravelDirection,
};
pub use condition::{Condition, ConditionKind};
pub use diag::{Diagnostic, Severity};
pub use fingerprint::{
    behavior_space_fingerprint, compare_demands, AttributeDiff, AttributeName, Fingerprint,
};
pub use ids::{AreaId, LaneId, LinestringId, LinkTarget, SpaceId};
pub use map::{load_map, load_map_file, save_map, SceneryMap};
pub use osm::{add_longitudinal_boundary, split_lanelet, BoundaryEnd, OsmDocument};
