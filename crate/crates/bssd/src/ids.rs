//! Identifier newtypes for scenery and behavior elements.
//!
//! All identifiers are signed 64-bit integers, matching the OSM id space the
//! map encoding uses. Lanelets, motion-space areas and behavior spaces live in
//! the relation id space; linestrings live in the way id space.

use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub i64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<i64> for $name {
            fn from(raw: i64) -> Self {
                Self(raw)
            }
        }
    };
}

id_type!(
    /// Identifier of an atomic behavior space.
    SpaceId
);
id_type!(
    /// Identifier of a lane element (a lanelet relation in the OSM encoding).
    LaneId
);
id_type!(
    /// Identifier of a non-regular motion space (an area relation).
    AreaId
);
id_type!(
    /// Identifier of a boundary linestring (an OSM way).
    LinestringId
);
id_type!(
    /// Identifier of a topological segment.
    SegmentId
);
id_type!(
    /// Identifier of a topological way (a connecting road, not an OSM way).
    RouteWayId
);
id_type!(
    /// Identifier of a topological network node.
    NetworkNodeId
);

/// Target of a reservation link: the element reservation-entitled road users
/// come from. Resolution to a lane or area happens against a sealed map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkTarget {
    Lane(LaneId),
    Area(AreaId),
}

impl LinkTarget {
    pub fn raw(&self) -> i64 {
        match self {
            LinkTarget::Lane(id) => id.0,
            LinkTarget::Area(id) => id.0,
        }
    }
}

impl fmt::Display for LinkTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkTarget::Lane(id) => write!(f, "lane {id}"),
            LinkTarget::Area(id) => write!(f, "area {id}"),
        }
    }
}
