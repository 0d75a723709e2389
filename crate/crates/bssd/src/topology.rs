//! Geometry-free topology annotations: nodes, ways and segments.
//!
//! These carry the route-network structure when no HD-map geometry is
//! available. Maps loaded from the OSM encoding derive their topology from
//! geometry instead and leave these empty.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{LaneId, NetworkNodeId, RouteWayId, SegmentId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("segment {0} lists lane {1} more than once")]
    DuplicateLane(SegmentId, LaneId),
    #[error("segment {0} has no lanes")]
    EmptySegment(SegmentId),
    #[error("way {0} has no segments")]
    EmptyWay(RouteWayId),
    #[error("node {0} connects only {1} ways and is not flagged degenerate")]
    UnderConnectedNode(NetworkNodeId, usize),
}

/// Section of a way in which the mapped behavior space is constant in
/// longitudinal direction. Lanes are ordered left to right, so each lane has
/// at most one left and one right neighbor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub id: SegmentId,
    pub lanes: Vec<LaneId>,
}

impl Segment {
    pub fn validate(&self) -> Result<(), TopologyError> {
        if self.lanes.is_empty() {
            return Err(TopologyError::EmptySegment(self.id));
        }
        let mut seen = BTreeSet::new();
        for lane in &self.lanes {
            if !seen.insert(*lane) {
                return Err(TopologyError::DuplicateLane(self.id, *lane));
            }
        }
        Ok(())
    }

    pub fn left_neighbor(&self, lane: LaneId) -> Option<LaneId> {
        let index = self.lanes.iter().position(|l| *l == lane)?;
        index.checked_sub(1).map(|i| self.lanes[i])
    }

    pub fn right_neighbor(&self, lane: LaneId) -> Option<LaneId> {
        let index = self.lanes.iter().position(|l| *l == lane)?;
        self.lanes.get(index + 1).copied()
    }
}

/// Connecting road between and within nodes, an ordered list of segments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteWay {
    pub id: RouteWayId,
    pub segments: Vec<SegmentId>,
}

impl RouteWay {
    pub fn validate(&self) -> Result<(), TopologyError> {
        if self.segments.is_empty() {
            return Err(TopologyError::EmptyWay(self.id));
        }
        Ok(())
    }
}

/// Area in which multiple ways interfere. A proper node connects more than
/// two ways; nodes with exactly two are segmentation artifacts and must be
/// flagged degenerate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkNode {
    pub id: NetworkNodeId,
    pub incoming_ways: Vec<RouteWayId>,
    pub outgoing_ways: Vec<RouteWayId>,
    pub internal_ways: Vec<RouteWayId>,
    pub degenerate: bool,
}

impl NetworkNode {
    pub fn connected_ways(&self) -> usize {
        self.incoming_ways.len() + self.outgoing_ways.len() + self.internal_ways.len()
    }

    pub fn validate(&self) -> Result<(), TopologyError> {
        let connected = self.connected_ways();
        if connected <= 2 && !self.degenerate {
            return Err(TopologyError::UnderConnectedNode(self.id, connected));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_neighbors_are_unique() {
        let segment = Segment {
            id: SegmentId(1),
            lanes: vec![LaneId(10), LaneId(11), LaneId(12)],
        };
        segment.validate().unwrap();
        assert_eq!(segment.left_neighbor(LaneId(10)), None);
        assert_eq!(segment.left_neighbor(LaneId(11)), Some(LaneId(10)));
        assert_eq!(segment.right_neighbor(LaneId(11)), Some(LaneId(12)));
        assert_eq!(segment.right_neighbor(LaneId(12)), None);

        let duplicated = Segment {
            id: SegmentId(2),
            lanes: vec![LaneId(10), LaneId(10)],
        };
        assert!(duplicated.validate().is_err());
    }

    #[test]
    fn node_connectivity_rule() {
        let junction = NetworkNode {
            id: NetworkNodeId(1),
            incoming_ways: vec![RouteWayId(1), RouteWayId(2)],
            outgoing_ways: vec![RouteWayId(3)],
            internal_ways: vec![],
            degenerate: false,
        };
        junction.validate().unwrap();

        let artifact = NetworkNode {
            id: NetworkNodeId(2),
            incoming_ways: vec![RouteWayId(1)],
            outgoing_ways: vec![RouteWayId(2)],
            internal_ways: vec![],
            degenerate: false,
        };
        assert!(artifact.validate().is_err());

        let flagged = NetworkNode {
            degenerate: true,
            ..artifact
        };
        flagged.validate().unwrap();
    }
}
