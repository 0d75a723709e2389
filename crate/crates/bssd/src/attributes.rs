//! The four behavioral attributes and their demand elements.
//!
//! Each attribute carries a non-empty ordered list of demand elements. The
//! `validate` methods assert the structural invariants; a sealed map only
//! admits elements that pass them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::condition::Condition;
use crate::ids::{LinestringId, LinkTarget};

/// Upper sanity bound for speed values, guarding against unit mistakes.
pub const DEFAULT_MAX_SPEED_KMH: f64 = 400.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttributeError {
    #[error("participant label must be non-empty")]
    EmptyParticipantLabel,
    #[error("speed value {0} is not a positive finite number of km/h")]
    InvalidSpeed(String),
    #[error("speed value {0} km/h exceeds the sanity bound of {1} km/h")]
    SpeedAboveBound(String, String),
    #[error("speed attribute has no demands")]
    EmptySpeedDemands,
    #[error("speed attribute lacks an unconditional maximum demand")]
    MissingUnconditionalMaximum,
    #[error("two speed demands share the same limit kind and condition")]
    DuplicateSpeedDemand,
    #[error("crossing permission `conditional` requires a condition")]
    ConditionalWithoutCondition,
    #[error("crossing permission `{0}` must not carry a condition")]
    ConditionOnUnconditionalPermission(String),
    #[error("boundary attribute has no crossing demands")]
    EmptyCrossingDemands,
    #[error("two conditional crossing demands share the same condition")]
    DuplicateConditionalCrossing,
    #[error("reservation kind `{0}` requires a non-empty entitled participant set")]
    EntitledRequired(String),
    #[error("reservation kind `{0}` must not carry entitled participants or links")]
    EntitledForbidden(String),
    #[error("reservation attribute has no demands")]
    EmptyReservationDemands,
    #[error("overtake attribute has no demands")]
    EmptyOvertakeDemands,
    #[error("overtake attribute must have exactly one unconditional demand, found {0}")]
    OvertakeDefaultCount(usize),
}

/// Type of traffic participant a demand refers to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParticipantType {
    MotorVehicle,
    Pedestrian,
    Bicycle,
    RailVehicle,
    Other(String),
}

impl ParticipantType {
    /// Builds an `Other` participant; the label is trimmed and lowercased.
    pub fn other(label: &str) -> Result<ParticipantType, AttributeError> {
        let normalized = label.trim().to_lowercase();
        if normalized.is_empty() {
            return Err(AttributeError::EmptyParticipantLabel);
        }
        Ok(ParticipantType::Other(normalized))
    }

    /// Canonical token, as used in `object=` tags.
    pub fn token(&self) -> String {
        match self {
            ParticipantType::MotorVehicle => "motor_vehicle".to_string(),
            ParticipantType::Pedestrian => "pedestrian".to_string(),
            ParticipantType::Bicycle => "bicycle".to_string(),
            ParticipantType::RailVehicle => "rail_vehicle".to_string(),
            ParticipantType::Other(label) => format!("other:{label}"),
        }
    }

    pub fn parse_token(token: &str) -> Result<ParticipantType, AttributeError> {
        match token {
            "motor_vehicle" => Ok(ParticipantType::MotorVehicle),
            "pedestrian" => Ok(ParticipantType::Pedestrian),
            "bicycle" => Ok(ParticipantType::Bicycle),
            "rail_vehicle" => Ok(ParticipantType::RailVehicle),
            other => match other.strip_prefix("other:") {
                Some(label) => ParticipantType::other(label),
                None => Err(AttributeError::EmptyParticipantLabel),
            },
        }
    }

    pub fn validate(&self) -> Result<(), AttributeError> {
        if let ParticipantType::Other(label) = self {
            if label.is_empty() || label != &label.to_lowercase() {
                return Err(AttributeError::EmptyParticipantLabel);
            }
        }
        Ok(())
    }
}

impl fmt::Display for ParticipantType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// A speed value in km/h. Always finite, positive and below the sanity bound,
/// so equality and hashing on the raw bits are well defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpeedKmh(f64);

impl SpeedKmh {
    pub fn new(value: f64) -> Result<SpeedKmh, AttributeError> {
        SpeedKmh::with_bound(value, DEFAULT_MAX_SPEED_KMH)
    }

    pub fn with_bound(value: f64, bound: f64) -> Result<SpeedKmh, AttributeError> {
        if !value.is_finite() || value <= 0.0 {
            return Err(AttributeError::InvalidSpeed(value.to_string()));
        }
        if value > bound {
            return Err(AttributeError::SpeedAboveBound(
                value.to_string(),
                bound.to_string(),
            ));
        }
        Ok(SpeedKmh(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn parse(text: &str) -> Result<SpeedKmh, AttributeError> {
        let value: f64 = text
            .trim()
            .parse()
            .map_err(|_| AttributeError::InvalidSpeed(text.to_string()))?;
        SpeedKmh::new(value)
    }
}

impl Eq for SpeedKmh {}

impl PartialOrd for SpeedKmh {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SpeedKmh {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Values are finite by construction.
        self.0.partial_cmp(&other.0).unwrap()
    }
}

impl std::hash::Hash for SpeedKmh {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Display for SpeedKmh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedLimitKind {
    Maximum,
    Minimum,
}

impl SpeedLimitKind {
    pub fn token(&self) -> &'static str {
        match self {
            SpeedLimitKind::Maximum => "max",
            SpeedLimitKind::Minimum => "min",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpeedDemand {
    pub limit: SpeedLimitKind,
    pub value: SpeedKmh,
    pub condition: Option<Condition>,
}

impl SpeedDemand {
    pub fn maximum(value: f64) -> Result<SpeedDemand, AttributeError> {
        Ok(SpeedDemand {
            limit: SpeedLimitKind::Maximum,
            value: SpeedKmh::new(value)?,
            condition: None,
        })
    }

    pub fn minimum(value: f64) -> Result<SpeedDemand, AttributeError> {
        Ok(SpeedDemand {
            limit: SpeedLimitKind::Minimum,
            value: SpeedKmh::new(value)?,
            condition: None,
        })
    }

    pub fn with_condition(mut self, condition: Condition) -> SpeedDemand {
        self.condition = Some(condition);
        self
    }
}

/// Speed attribute: a non-empty ordered demand list with an unconditional
/// maximum as the default.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpeedAttribute {
    pub demands: Vec<SpeedDemand>,
}

impl SpeedAttribute {
    pub fn new(demands: Vec<SpeedDemand>) -> Result<SpeedAttribute, AttributeError> {
        let attribute = SpeedAttribute { demands };
        attribute.validate()?;
        Ok(attribute)
    }

    pub fn maximum(value: f64) -> Result<SpeedAttribute, AttributeError> {
        SpeedAttribute::new(vec![SpeedDemand::maximum(value)?])
    }

    pub fn validate(&self) -> Result<(), AttributeError> {
        if self.demands.is_empty() {
            return Err(AttributeError::EmptySpeedDemands);
        }
        if !self
            .demands
            .iter()
            .any(|d| d.limit == SpeedLimitKind::Maximum && d.condition.is_none())
        {
            return Err(AttributeError::MissingUnconditionalMaximum);
        }
        let mut seen = BTreeSet::new();
        for demand in &self.demands {
            let key = (demand.limit, demand.condition.clone());
            if !seen.insert(key) {
                return Err(AttributeError::DuplicateSpeedDemand);
            }
        }
        Ok(())
    }

    /// The unconditional maximum, i.e. the default speed limit.
    pub fn default_maximum(&self) -> SpeedKmh {
        self.demands
            .iter()
            .find(|d| d.limit == SpeedLimitKind::Maximum && d.condition.is_none())
            .map(|d| d.value)
            .expect("validated speed attribute has an unconditional maximum")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingPermission {
    Allowed,
    Conditional,
    Prohibited,
    NotPossible,
}

impl CrossingPermission {
    pub fn token(&self) -> &'static str {
        match self {
            CrossingPermission::Allowed => "allowed",
            CrossingPermission::Conditional => "conditional",
            CrossingPermission::Prohibited => "prohibited",
            CrossingPermission::NotPossible => "not_possible",
        }
    }

    pub fn parse_token(token: &str) -> Option<CrossingPermission> {
        match token {
            "allowed" => Some(CrossingPermission::Allowed),
            "conditional" => Some(CrossingPermission::Conditional),
            "prohibited" => Some(CrossingPermission::Prohibited),
            "not_possible" => Some(CrossingPermission::NotPossible),
            _ => None,
        }
    }
}

impl fmt::Display for CrossingPermission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossingDemand {
    pub permission: CrossingPermission,
    pub condition: Option<Condition>,
}

impl CrossingDemand {
    pub fn allowed() -> CrossingDemand {
        CrossingDemand {
            permission: CrossingPermission::Allowed,
            condition: None,
        }
    }

    pub fn prohibited() -> CrossingDemand {
        CrossingDemand {
            permission: CrossingPermission::Prohibited,
            condition: None,
        }
    }

    pub fn not_possible() -> CrossingDemand {
        CrossingDemand {
            permission: CrossingPermission::NotPossible,
            condition: None,
        }
    }

    pub fn conditional(condition: Condition) -> CrossingDemand {
        CrossingDemand {
            permission: CrossingPermission::Conditional,
            condition: Some(condition),
        }
    }

    pub fn validate(&self) -> Result<(), AttributeError> {
        match (self.permission, &self.condition) {
            (CrossingPermission::Conditional, None) => {
                Err(AttributeError::ConditionalWithoutCondition)
            }
            (CrossingPermission::Conditional, Some(_)) => Ok(()),
            (permission, Some(_)) => Err(AttributeError::ConditionOnUnconditionalPermission(
                permission.token().to_string(),
            )),
            (_, None) => Ok(()),
        }
    }
}

/// Boundary attribute for one boundary (longitudinal entry or a lateral exit).
/// `geometry_refs` may be empty in geometry-free use.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryAttribute {
    pub demands: Vec<CrossingDemand>,
    pub geometry_refs: Vec<LinestringId>,
}

impl BoundaryAttribute {
    pub fn new(
        demands: Vec<CrossingDemand>,
        geometry_refs: Vec<LinestringId>,
    ) -> Result<BoundaryAttribute, AttributeError> {
        let attribute = BoundaryAttribute {
            demands,
            geometry_refs,
        };
        attribute.validate()?;
        Ok(attribute)
    }

    pub fn unconditional(permission: CrossingPermission) -> BoundaryAttribute {
        BoundaryAttribute {
            demands: vec![CrossingDemand {
                permission,
                condition: None,
            }],
            geometry_refs: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), AttributeError> {
        if self.demands.is_empty() {
            return Err(AttributeError::EmptyCrossingDemands);
        }
        for demand in &self.demands {
            demand.validate()?;
        }
        let mut conditions = BTreeSet::new();
        for demand in &self.demands {
            if demand.permission == CrossingPermission::Conditional
                && !conditions.insert(demand.condition.clone())
            {
                return Err(AttributeError::DuplicateConditionalCrossing);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReservationKind {
    Own,
    Externally,
    Equally,
    None,
}

impl ReservationKind {
    pub fn token(&self) -> &'static str {
        match self {
            ReservationKind::Own => "own",
            ReservationKind::Externally => "externally",
            ReservationKind::Equally => "equally",
            ReservationKind::None => "none",
        }
    }

    pub fn parse_token(token: &str) -> Option<ReservationKind> {
        match token {
            "own" => Some(ReservationKind::Own),
            "externally" => Some(ReservationKind::Externally),
            "equally" => Some(ReservationKind::Equally),
            "none" => Some(ReservationKind::None),
            _ => None,
        }
    }

    /// Whether this kind requires the entitled participant set.
    pub fn requires_entitled(&self) -> bool {
        matches!(self, ReservationKind::Externally | ReservationKind::Equally)
    }
}

impl fmt::Display for ReservationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReservationRole {
    Origin,
    Destination,
}

/// Link to the element reservation-entitled road users may come from (origin)
/// or head to (destination).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReservationLink {
    pub target: LinkTarget,
    pub role: ReservationRole,
}

impl ReservationLink {
    pub fn origin(target: LinkTarget) -> ReservationLink {
        ReservationLink {
            target,
            role: ReservationRole::Origin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReservationDemand {
    pub kind: ReservationKind,
    pub entitled: BTreeSet<ParticipantType>,
    pub links: Vec<ReservationLink>,
    pub condition: Option<Condition>,
}

impl ReservationDemand {
    pub fn own() -> ReservationDemand {
        ReservationDemand {
            kind: ReservationKind::Own,
            entitled: BTreeSet::new(),
            links: Vec::new(),
            condition: None,
        }
    }

    pub fn none() -> ReservationDemand {
        ReservationDemand {
            kind: ReservationKind::None,
            entitled: BTreeSet::new(),
            links: Vec::new(),
            condition: None,
        }
    }

    pub fn externally(
        entitled: impl IntoIterator<Item = ParticipantType>,
        links: Vec<ReservationLink>,
    ) -> Result<ReservationDemand, AttributeError> {
        let demand = ReservationDemand {
            kind: ReservationKind::Externally,
            entitled: entitled.into_iter().collect(),
            links,
            condition: None,
        };
        demand.validate()?;
        Ok(demand)
    }

    pub fn equally(
        entitled: impl IntoIterator<Item = ParticipantType>,
        links: Vec<ReservationLink>,
    ) -> Result<ReservationDemand, AttributeError> {
        let demand = ReservationDemand {
            kind: ReservationKind::Equally,
            entitled: entitled.into_iter().collect(),
            links,
            condition: None,
        };
        demand.validate()?;
        Ok(demand)
    }

    pub fn validate(&self) -> Result<(), AttributeError> {
        for participant in &self.entitled {
            participant.validate()?;
        }
        if self.kind.requires_entitled() {
            if self.entitled.is_empty() {
                return Err(AttributeError::EntitledRequired(
                    self.kind.token().to_string(),
                ));
            }
        } else if !self.entitled.is_empty() || !self.links.is_empty() {
            return Err(AttributeError::EntitledForbidden(
                self.kind.token().to_string(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReservationAttribute {
    pub demands: Vec<ReservationDemand>,
}

impl ReservationAttribute {
    pub fn new(demands: Vec<ReservationDemand>) -> Result<ReservationAttribute, AttributeError> {
        let attribute = ReservationAttribute { demands };
        attribute.validate()?;
        Ok(attribute)
    }

    pub fn own() -> ReservationAttribute {
        ReservationAttribute {
            demands: vec![ReservationDemand::own()],
        }
    }

    pub fn validate(&self) -> Result<(), AttributeError> {
        if self.demands.is_empty() {
            return Err(AttributeError::EmptyReservationDemands);
        }
        for demand in &self.demands {
            demand.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OvertakeDemand {
    pub permitted: bool,
    pub condition: Option<Condition>,
}

/// Overtake attribute: exactly one unconditional demand (the default), with
/// conditional prohibitions layered on top.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OvertakeAttribute {
    pub demands: Vec<OvertakeDemand>,
}

impl OvertakeAttribute {
    pub fn new(demands: Vec<OvertakeDemand>) -> Result<OvertakeAttribute, AttributeError> {
        let attribute = OvertakeAttribute { demands };
        attribute.validate()?;
        Ok(attribute)
    }

    pub fn permitted(permitted: bool) -> OvertakeAttribute {
        OvertakeAttribute {
            demands: vec![OvertakeDemand {
                permitted,
                condition: None,
            }],
        }
    }

    pub fn validate(&self) -> Result<(), AttributeError> {
        if self.demands.is_empty() {
            return Err(AttributeError::EmptyOvertakeDemands);
        }
        let unconditional = self
            .demands
            .iter()
            .filter(|d| d.condition.is_none())
            .count();
        if unconditional != 1 {
            return Err(AttributeError::OvertakeDefaultCount(unconditional));
        }
        Ok(())
    }

    /// The unconditional default permission.
    pub fn default_permitted(&self) -> bool {
        self.demands
            .iter()
            .find(|d| d.condition.is_none())
            .map(|d| d.permitted)
            .expect("validated overtake attribute has an unconditional demand")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condition::TrafficLightState;
    use crate::ids::LaneId;

    #[test]
    fn participant_other_normalizes() {
        let participant = ParticipantType::other(" Horse Rider ").unwrap();
        assert_eq!(
            participant,
            ParticipantType::Other("horse rider".to_string())
        );
        assert!(ParticipantType::other("").is_err());
        assert_eq!(
            ParticipantType::parse_token("other:tram").unwrap().token(),
            "other:tram"
        );
        assert!(ParticipantType::parse_token("horse").is_err());
    }

    #[test]
    fn speed_bounds_enforced() {
        assert!(SpeedKmh::new(30.0).is_ok());
        assert!(SpeedKmh::new(0.0).is_err());
        assert!(SpeedKmh::new(-5.0).is_err());
        assert!(SpeedKmh::new(f64::NAN).is_err());
        assert!(SpeedKmh::new(401.0).is_err());
        assert!(SpeedKmh::with_bound(401.0, 500.0).is_ok());
    }

    #[test]
    fn speed_attribute_requires_unconditional_maximum() {
        let only_min = SpeedAttribute::new(vec![SpeedDemand::minimum(10.0).unwrap()]);
        assert_eq!(
            only_min.unwrap_err(),
            AttributeError::MissingUnconditionalMaximum
        );

        let conditional_only = SpeedAttribute::new(vec![SpeedDemand::maximum(30.0)
            .unwrap()
            .with_condition(Condition::NoStagnantTraffic)]);
        assert!(conditional_only.is_err());

        let ok = SpeedAttribute::new(vec![
            SpeedDemand::maximum(50.0).unwrap(),
            SpeedDemand::maximum(30.0)
                .unwrap()
                .with_condition(Condition::time_window(22 * 60, 6 * 60).unwrap()),
            SpeedDemand::minimum(60.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(ok.default_maximum().value(), 50.0);
    }

    #[test]
    fn speed_attribute_rejects_duplicate_keys() {
        let dup = SpeedAttribute::new(vec![
            SpeedDemand::maximum(50.0).unwrap(),
            SpeedDemand::maximum(30.0).unwrap(),
        ]);
        assert_eq!(dup.unwrap_err(), AttributeError::DuplicateSpeedDemand);
    }

    #[test]
    fn crossing_demand_condition_pairing() {
        assert!(CrossingDemand::allowed().validate().is_ok());
        let broken = CrossingDemand {
            permission: CrossingPermission::Conditional,
            condition: None,
        };
        assert_eq!(
            broken.validate().unwrap_err(),
            AttributeError::ConditionalWithoutCondition
        );
        let extra = CrossingDemand {
            permission: CrossingPermission::Allowed,
            condition: Some(Condition::NoStagnantTraffic),
        };
        assert!(extra.validate().is_err());
    }

    #[test]
    fn boundary_attribute_rejects_duplicate_conditions() {
        let duplicated = BoundaryAttribute::new(
            vec![
                CrossingDemand::conditional(Condition::NoStagnantTraffic),
                CrossingDemand::conditional(Condition::NoStagnantTraffic),
            ],
            Vec::new(),
        );
        assert!(duplicated.is_err());

        let distinct = BoundaryAttribute::new(
            vec![
                CrossingDemand::conditional(Condition::TrafficLight(TrafficLightState::Active)),
                CrossingDemand::conditional(Condition::TrafficLight(TrafficLightState::Inactive)),
            ],
            Vec::new(),
        );
        assert!(distinct.is_ok());
        assert!(BoundaryAttribute::new(vec![], vec![]).is_err());
    }

    #[test]
    fn reservation_kind_constraints() {
        assert!(ReservationDemand::own().validate().is_ok());
        assert!(ReservationDemand::externally([], vec![]).is_err());
        let ok = ReservationDemand::externally(
            [ParticipantType::Pedestrian],
            vec![ReservationLink::origin(LinkTarget::Lane(LaneId(7)))],
        )
        .unwrap();
        assert!(ok.validate().is_ok());

        let own_with_links = ReservationDemand {
            kind: ReservationKind::Own,
            entitled: BTreeSet::new(),
            links: vec![ReservationLink::origin(LinkTarget::Lane(LaneId(7)))],
            condition: None,
        };
        assert!(own_with_links.validate().is_err());
    }

    #[test]
    fn overtake_requires_exactly_one_default() {
        assert!(OvertakeAttribute::permitted(true).validate().is_ok());
        let none = OvertakeAttribute::new(vec![OvertakeDemand {
            permitted: false,
            condition: Some(Condition::NoStagnantTraffic),
        }]);
        assert!(none.is_err());
        let two = OvertakeAttribute::new(vec![
            OvertakeDemand {
                permitted: true,
                condition: None,
            },
            OvertakeDemand {
                permitted: false,
                condition: None,
            },
        ]);
        assert_eq!(two.unwrap_err(), AttributeError::OvertakeDefaultCount(2));
    }
}
