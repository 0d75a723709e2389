//! Canonical demand-content digests and attribute-wise comparison.
//!
//! Two behavior spaces impose the same behavioral demands exactly when their
//! fingerprints match. The digest covers attribute values, conditions,
//! reservation kinds and entitled sets, and excludes identifiers, geometry
//! references and reservation link targets. Comparison and fingerprinting
//! share one canonical encoding, so `fingerprint(a) == fingerprint(b)` holds
//! iff `compare_demands` reports every attribute equal for every direction.

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::attributes::{
    BoundaryAttribute, OvertakeAttribute, ReservationAttribute, SpeedAttribute,
};
use crate::behavior::{AtomicBehaviorSpace, Behavior, TravelDirection};
use crate::condition::Condition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompareError {
    #[error("space {space} has no behavior for direction `{direction}`")]
    MissingDirection {
        space: i64,
        direction: TravelDirection,
    },
}

/// SHA-256 digest of a behavior space's demand content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint([u8; 32]);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for byte in self.0 {
            write!(f, "{byte:02x}")?;
        }
        Ok(())
    }
}

/// Canonical digest of the demand content of a behavior space.
pub fn behavior_space_fingerprint(space: &AtomicBehaviorSpace) -> Fingerprint {
    let mut hasher = Sha256::new();
    hasher.update(b"bssd-abs-v1");
    for direction in [TravelDirection::Along, TravelDirection::Against] {
        if let Some(behavior) = space.behavior(direction) {
            push_token(&mut hasher, direction.token());
            hasher.update(behavior_content_bytes(behavior));
        }
    }
    Fingerprint(hasher.finalize().into())
}

fn behavior_content_bytes(behavior: &Behavior) -> Vec<u8> {
    let mut bytes = Vec::new();
    for attribute in AttributeName::ALL {
        bytes.extend_from_slice(attribute.token().as_bytes());
        bytes.extend_from_slice(&attribute_content_bytes(behavior, attribute));
    }
    bytes
}

/// The six compared attributes, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeName {
    Speed,
    BoundaryLong,
    BoundaryLeft,
    BoundaryRight,
    Reservation,
    Overtake,
}

impl AttributeName {
    pub const ALL: [AttributeName; 6] = [
        AttributeName::Speed,
        AttributeName::BoundaryLong,
        AttributeName::BoundaryLeft,
        AttributeName::BoundaryRight,
        AttributeName::Reservation,
        AttributeName::Overtake,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            AttributeName::Speed => "speed",
            AttributeName::BoundaryLong => "boundary_long",
            AttributeName::BoundaryLeft => "boundary_left",
            AttributeName::BoundaryRight => "boundary_right",
            AttributeName::Reservation => "reservation",
            AttributeName::Overtake => "overtake",
        }
    }
}

impl fmt::Display for AttributeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Canonical byte encoding of one attribute's demand content. Identifiers,
/// geometry refs and link targets never enter the encoding.
fn attribute_content_bytes(behavior: &Behavior, attribute: AttributeName) -> Vec<u8> {
    let mut out = Vec::new();
    match attribute {
        AttributeName::Speed => encode_speed(&mut out, &behavior.speed),
        AttributeName::BoundaryLong => encode_boundary(&mut out, &behavior.boundary_long),
        AttributeName::BoundaryLeft => encode_boundary(&mut out, &behavior.boundary_left),
        AttributeName::BoundaryRight => encode_boundary(&mut out, &behavior.boundary_right),
        AttributeName::Reservation => encode_reservation(&mut out, &behavior.reservation),
        AttributeName::Overtake => encode_overtake(&mut out, &behavior.overtake),
    }
    out
}

fn push_bytes(out: &mut Vec<u8>, data: &[u8]) {
    out.extend_from_slice(&(data.len() as u32).to_le_bytes());
    out.extend_from_slice(data);
}

fn push_str(out: &mut Vec<u8>, token: &str) {
    push_bytes(out, token.as_bytes());
}

fn push_token(hasher: &mut Sha256, token: &str) {
    hasher.update((token.len() as u32).to_le_bytes());
    hasher.update(token.as_bytes());
}

fn push_condition(out: &mut Vec<u8>, condition: &Option<Condition>) {
    match condition {
        Some(condition) => push_str(out, &condition.token()),
        None => push_str(out, ""),
    }
}

fn encode_speed(out: &mut Vec<u8>, speed: &SpeedAttribute) {
    out.extend_from_slice(&(speed.demands.len() as u32).to_le_bytes());
    for demand in &speed.demands {
        push_str(out, demand.limit.token());
        push_str(out, &demand.value.to_string());
        push_condition(out, &demand.condition);
    }
}

fn encode_boundary(out: &mut Vec<u8>, boundary: &BoundaryAttribute) {
    out.extend_from_slice(&(boundary.demands.len() as u32).to_le_bytes());
    for demand in &boundary.demands {
        push_str(out, demand.permission.token());
        push_condition(out, &demand.condition);
    }
}

fn encode_reservation(out: &mut Vec<u8>, reservation: &ReservationAttribute) {
    out.extend_from_slice(&(reservation.demands.len() as u32).to_le_bytes());
    for demand in &reservation.demands {
        push_str(out, demand.kind.token());
        out.extend_from_slice(&(demand.entitled.len() as u32).to_le_bytes());
        for participant in &demand.entitled {
            push_str(out, &participant.token());
        }
        push_condition(out, &demand.condition);
    }
}

fn encode_overtake(out: &mut Vec<u8>, overtake: &OvertakeAttribute) {
    out.extend_from_slice(&(overtake.demands.len() as u32).to_le_bytes());
    for demand in &overtake.demands {
        push_str(out, if demand.permitted { "yes" } else { "no" });
        push_condition(out, &demand.condition);
    }
}

/// Human-readable summary of one attribute's demands, used by comparison
/// output and the inspect table.
pub fn attribute_summary(behavior: &Behavior, attribute: AttributeName) -> String {
    match attribute {
        AttributeName::Speed => speed_summary(&behavior.speed),
        AttributeName::BoundaryLong => boundary_summary(&behavior.boundary_long),
        AttributeName::BoundaryLeft => boundary_summary(&behavior.boundary_left),
        AttributeName::BoundaryRight => boundary_summary(&behavior.boundary_right),
        AttributeName::Reservation => reservation_summary(&behavior.reservation),
        AttributeName::Overtake => overtake_summary(&behavior.overtake),
    }
}

fn condition_suffix(condition: &Option<Condition>) -> String {
    match condition {
        Some(condition) => format!(" if {}", condition.token()),
        None => String::new(),
    }
}

fn speed_summary(speed: &SpeedAttribute) -> String {
    let parts: Vec<String> = speed
        .demands
        .iter()
        .map(|d| {
            format!(
                "{} {} km/h{}",
                d.limit.token(),
                d.value,
                condition_suffix(&d.condition)
            )
        })
        .collect();
    parts.join("; ")
}

fn boundary_summary(boundary: &BoundaryAttribute) -> String {
    let parts: Vec<String> = boundary
        .demands
        .iter()
        .map(|d| match &d.condition {
            Some(condition) => format!("{} ({})", d.permission.token(), condition.token()),
            None => d.permission.token().to_string(),
        })
        .collect();
    parts.join("; ")
}

fn reservation_summary(reservation: &ReservationAttribute) -> String {
    let parts: Vec<String> = reservation
        .demands
        .iter()
        .map(|d| {
            let mut text = d.kind.token().to_string();
            if !d.entitled.is_empty() {
                let entitled: Vec<String> = d.entitled.iter().map(|p| p.token()).collect();
                text.push_str(&format!(" ({})", entitled.join(", ")));
            }
            text.push_str(&condition_suffix(&d.condition));
            text
        })
        .collect();
    parts.join("; ")
}

fn overtake_summary(overtake: &OvertakeAttribute) -> String {
    let parts: Vec<String> = overtake
        .demands
        .iter()
        .map(|d| {
            format!(
                "{}{}",
                if d.permitted { "yes" } else { "no" },
                condition_suffix(&d.condition)
            )
        })
        .collect();
    parts.join("; ")
}

/// Comparison result for a single attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttributeComparison {
    pub attribute: AttributeName,
    pub equal: bool,
    pub a: String,
    pub b: String,
}

/// Per-attribute equality flags and value-level diffs for one direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttributeDiff {
    pub direction: TravelDirection,
    pub comparisons: Vec<AttributeComparison>,
}

impl AttributeDiff {
    pub fn all_equal(&self) -> bool {
        self.comparisons.iter().all(|c| c.equal)
    }

    pub fn equal_attributes(&self) -> Vec<AttributeName> {
        self.comparisons
            .iter()
            .filter(|c| c.equal)
            .map(|c| c.attribute)
            .collect()
    }

    pub fn different_attributes(&self) -> Vec<AttributeName> {
        self.comparisons
            .iter()
            .filter(|c| !c.equal)
            .map(|c| c.attribute)
            .collect()
    }
}

/// Compares the demand content of two behavior spaces for one direction.
pub fn compare_demands(
    a: &AtomicBehaviorSpace,
    b: &AtomicBehaviorSpace,
    direction: TravelDirection,
) -> Result<AttributeDiff, CompareError> {
    let behavior_a = a
        .behavior(direction)
        .ok_or(CompareError::MissingDirection {
            space: a.id.0,
            direction,
        })?;
    let behavior_b = b
        .behavior(direction)
        .ok_or(CompareError::MissingDirection {
            space: b.id.0,
            direction,
        })?;
    let comparisons = AttributeName::ALL
        .into_iter()
        .map(|attribute| AttributeComparison {
            attribute,
            equal: attribute_content_bytes(behavior_a, attribute)
                == attribute_content_bytes(behavior_b, attribute),
            a: attribute_summary(behavior_a, attribute),
            b: attribute_summary(behavior_b, attribute),
        })
        .collect();
    Ok(AttributeDiff {
        direction,
        comparisons,
    })
}

/// True when both spaces offer the same directions and every attribute
/// compares equal in each of them. Matches fingerprint equality.
pub fn demands_equal(a: &AtomicBehaviorSpace, b: &AtomicBehaviorSpace) -> bool {
    for direction in [TravelDirection::Along, TravelDirection::Against] {
        match (a.behavior(direction), b.behavior(direction)) {
            (None, None) => {}
            (Some(_), Some(_)) => match compare_demands(a, b, direction) {
                Ok(diff) => {
                    if !diff.all_equal() {
                        return false;
                    }
                }
                Err(_) => return false,
            },
            _ => return false,
        }
    }
    true
}
