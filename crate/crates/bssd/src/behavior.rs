//! Scenery carriers and the directional behavior bundle.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attributes::{
    AttributeError, BoundaryAttribute, OvertakeAttribute, ReservationAttribute, SpeedAttribute,
};
use crate::ids::{AreaId, LaneId, LinestringId, SpaceId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BehaviorError {
    #[error(transparent)]
    Attribute(#[from] AttributeError),
    #[error("behavior declared for direction `{expected}` carries direction `{found}`")]
    DirectionMismatch {
        expected: TravelDirection,
        found: TravelDirection,
    },
    #[error("behavior space has no lane reference")]
    NoLanes,
    #[error("lane label must be non-empty")]
    EmptyKindLabel,
    #[error("lane bounds must differ, both are linestring {0}")]
    IdenticalBounds(LinestringId),
}

/// Direction of travel relative to the lane's reference direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TravelDirection {
    Along,
    Against,
}

impl TravelDirection {
    pub fn token(&self) -> &'static str {
        match self {
            TravelDirection::Along => "along",
            TravelDirection::Against => "against",
        }
    }

    pub fn parse_token(token: &str) -> Option<TravelDirection> {
        match token {
            "along" => Some(TravelDirection::Along),
            "against" => Some(TravelDirection::Against),
            _ => None,
        }
    }

    pub fn opposite(&self) -> TravelDirection {
        match self {
            TravelDirection::Along => TravelDirection::Against,
            TravelDirection::Against => TravelDirection::Along,
        }
    }
}

impl fmt::Display for TravelDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// The per-direction bundle of the four behavioral attributes. Boundary
/// left/right are interpreted relative to the direction of travel, so an
/// `against` behavior's left boundary lies on the lane's geometric right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Behavior {
    pub direction: TravelDirection,
    pub speed: SpeedAttribute,
    pub boundary_long: BoundaryAttribute,
    pub boundary_left: BoundaryAttribute,
    pub boundary_right: BoundaryAttribute,
    pub reservation: ReservationAttribute,
    pub overtake: OvertakeAttribute,
}

impl Behavior {
    pub fn validate(&self) -> Result<(), BehaviorError> {
        self.speed.validate()?;
        self.boundary_long.validate()?;
        self.boundary_left.validate()?;
        self.boundary_right.validate()?;
        self.reservation.validate()?;
        self.overtake.validate()?;
        Ok(())
    }

    pub fn boundary(&self, which: BoundarySide) -> &BoundaryAttribute {
        match which {
            BoundarySide::Longitudinal => &self.boundary_long,
            BoundarySide::Left => &self.boundary_left,
            BoundarySide::Right => &self.boundary_right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySide {
    Longitudinal,
    Left,
    Right,
}

/// One scenery section's full behavior space: directional behaviors bound to
/// an ordered chain of lane elements. A single lane is the common case; a
/// chain represents one behavior space spanning several consecutive lanelets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomicBehaviorSpace {
    pub id: SpaceId,
    /// Ordered lane chain, head first. Never empty.
    pub lanes: Vec<LaneId>,
    pub along: Behavior,
    /// Absent only for lanes marked one-directional.
    pub against: Option<Behavior>,
}

impl AtomicBehaviorSpace {
    pub fn new(
        id: SpaceId,
        lanes: Vec<LaneId>,
        along: Behavior,
        against: Option<Behavior>,
    ) -> Result<AtomicBehaviorSpace, BehaviorError> {
        let space = AtomicBehaviorSpace {
            id,
            lanes,
            along,
            against,
        };
        space.validate()?;
        Ok(space)
    }

    /// The head lane the behavior space is anchored to.
    pub fn lane(&self) -> LaneId {
        self.lanes[0]
    }

    pub fn behavior(&self, direction: TravelDirection) -> Option<&Behavior> {
        match direction {
            TravelDirection::Along => Some(&self.along),
            TravelDirection::Against => self.against.as_ref(),
        }
    }

    pub fn directions(&self) -> impl Iterator<Item = TravelDirection> + '_ {
        [TravelDirection::Along, TravelDirection::Against]
            .into_iter()
            .filter(|d| self.behavior(*d).is_some())
    }

    pub fn validate(&self) -> Result<(), BehaviorError> {
        if self.lanes.is_empty() {
            return Err(BehaviorError::NoLanes);
        }
        if self.along.direction != TravelDirection::Along {
            return Err(BehaviorError::DirectionMismatch {
                expected: TravelDirection::Along,
                found: self.along.direction,
            });
        }
        self.along.validate()?;
        if let Some(against) = &self.against {
            if against.direction != TravelDirection::Against {
                return Err(BehaviorError::DirectionMismatch {
                    expected: TravelDirection::Against,
                    found: against.direction,
                });
            }
            against.validate()?;
        }
        Ok(())
    }
}

/// Kind of lane element, mirroring Lanelet2 subtypes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaneKind {
    VehicleLane,
    BicycleLane,
    Crosswalk,
    Other(String),
}

impl LaneKind {
    /// Lanes that belong to the regular motion space for motor vehicles.
    pub fn is_regular_motion_space(&self) -> bool {
        matches!(
            self,
            LaneKind::VehicleLane | LaneKind::BicycleLane | LaneKind::Crosswalk
        )
    }
}

/// A lanelet: an atomic lane section bounded by two linestrings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaneElement {
    pub id: LaneId,
    pub left_bound: LinestringId,
    pub right_bound: LinestringId,
    pub kind: LaneKind,
    /// When set, the behavior against the reference direction may be omitted.
    pub one_directional: bool,
}

impl LaneElement {
    pub fn validate(&self) -> Result<(), BehaviorError> {
        if self.left_bound == self.right_bound {
            return Err(BehaviorError::IdenticalBounds(self.left_bound));
        }
        if let LaneKind::Other(label) = &self.kind {
            if label.is_empty() {
                return Err(BehaviorError::EmptyKindLabel);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionSpaceKind {
    Sidewalk,
    ParkingArea,
    Keepout,
    Other(String),
}

/// Area outside the regular motion space, e.g. a sidewalk pedestrians enter a
/// crossing from. Referenced by reservation links.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonRegularMotionSpace {
    pub id: AreaId,
    pub kind: MotionSpaceKind,
    pub geometry_ref: Option<AreaId>,
}

impl NonRegularMotionSpace {
    pub fn validate(&self) -> Result<(), BehaviorError> {
        if let MotionSpaceKind::Other(label) = &self.kind {
            if label.is_empty() {
                return Err(BehaviorError::EmptyKindLabel);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attributes::{CrossingPermission, ReservationAttribute, SpeedAttribute};

    pub(crate) fn plain_behavior(direction: TravelDirection, max_kmh: f64) -> Behavior {
        Behavior {
            direction,
            speed: SpeedAttribute::maximum(max_kmh).unwrap(),
            boundary_long: BoundaryAttribute::unconditional(CrossingPermission::Allowed),
            boundary_left: BoundaryAttribute::unconditional(CrossingPermission::Prohibited),
            boundary_right: BoundaryAttribute::unconditional(CrossingPermission::Prohibited),
            reservation: ReservationAttribute::own(),
            overtake: OvertakeAttribute::permitted(true),
        }
    }

    #[test]
    fn space_direction_slots_are_checked() {
        let ok = AtomicBehaviorSpace::new(
            SpaceId(1),
            vec![LaneId(10)],
            plain_behavior(TravelDirection::Along, 50.0),
            Some(plain_behavior(TravelDirection::Against, 50.0)),
        );
        assert!(ok.is_ok());

        let swapped = AtomicBehaviorSpace::new(
            SpaceId(1),
            vec![LaneId(10)],
            plain_behavior(TravelDirection::Against, 50.0),
            None,
        );
        assert!(matches!(
            swapped.unwrap_err(),
            BehaviorError::DirectionMismatch { .. }
        ));

        let empty = AtomicBehaviorSpace::new(
            SpaceId(1),
            vec![],
            plain_behavior(TravelDirection::Along, 50.0),
            None,
        );
        assert_eq!(empty.unwrap_err(), BehaviorError::NoLanes);
    }

    #[test]
    fn attribute_cardinality_is_one_of_each() {
        // One speed, three boundaries, one reservation, one overtake per
        // behavior is enforced by the type itself; this pins the shape.
        let behavior = plain_behavior(TravelDirection::Along, 30.0);
        assert!(behavior.validate().is_ok());
        let boundaries = [
            behavior.boundary(BoundarySide::Longitudinal),
            behavior.boundary(BoundarySide::Left),
            behavior.boundary(BoundarySide::Right),
        ];
        assert_eq!(boundaries.len(), 3);
    }

    #[test]
    fn lane_bounds_must_differ() {
        let lane = LaneElement {
            id: LaneId(1),
            left_bound: LinestringId(5),
            right_bound: LinestringId(5),
            kind: LaneKind::VehicleLane,
            one_directional: false,
        };
        assert!(lane.validate().is_err());
    }
}
