//! Programmatic annotation of bare Lanelet2 maps.
//!
//! `annotate` attaches a full behavior space to uncovered lanelets, creating
//! the behavior/boundary/reservation relations and any missing longitudinal
//! boundary linestrings. `derive_defaults` pre-fills a behavior spec from
//! local tags; the result is always marked provisional and meant for human
//! review before annotating.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::attributes::{
    AttributeError, BoundaryAttribute, CrossingDemand, CrossingPermission, OvertakeAttribute,
    OvertakeDemand, ParticipantType, ReservationAttribute, ReservationDemand, ReservationKind,
    ReservationLink, ReservationRole, SpeedAttribute, SpeedDemand, SpeedKmh, SpeedLimitKind,
};
use crate::behavior::{Behavior, TravelDirection};
use crate::condition::{Condition, ConditionError};
use crate::geometry::walk_chain;
use crate::ids::{AreaId, LaneId, LinkTarget, SpaceId};
use crate::map::SceneryMap;
use crate::osm::{
    add_longitudinal_boundary, schema, BoundaryEnd, EditError, ElementKind, OsmMember, OsmRelation,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("unknown lanelet {0}")]
    UnknownLanelet(LaneId),
    #[error("lanelet {lanelet} is already covered by behavior space {space}")]
    AlreadyCovered { lanelet: LaneId, space: SpaceId },
    #[error("lanelet {0} is not one-directional, an `against` behavior spec is required")]
    AgainstRequired(LaneId),
    #[error("no lanelets given")]
    NoLanelets,
    #[error("reservation link target {0} is neither a lanelet nor an area")]
    UnknownLinkTarget(i64),
    #[error("lanelet chain is not connected head to tail")]
    BrokenChain,
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("behavior spec violates an invariant: {0}")]
    Attribute(#[from] AttributeError),
    #[error(transparent)]
    Edit(#[from] EditError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("line {0}: expected `key: value`")]
    MalformedLine(usize),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: {message}")]
    BadValue { key: String, message: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
}

/// Declarative description of one directional behavior, mirroring the tag
/// schema. Reservation link targets are raw relation ids, resolved against
/// the map by `annotate`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BehaviorSpec {
    pub speed: Vec<SpeedDemand>,
    pub overtake: Vec<OvertakeDemand>,
    pub boundary_long: Vec<CrossingDemand>,
    pub boundary_left: Vec<CrossingDemand>,
    pub boundary_right: Vec<CrossingDemand>,
    pub reservation: Vec<ReservationDemandSpec>,
    /// Heuristically derived specs are provisional and need review.
    pub provisional: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReservationDemandSpec {
    pub kind: Option<ReservationKind>,
    pub entitled: BTreeSet<ParticipantType>,
    pub links: Vec<(i64, bool)>,
    pub condition: Option<Condition>,
}

/// Splits a `key: value` text block into pairs. Lines starting with `#` and
/// blank lines are skipped; values may contain colons.
pub(crate) fn parse_kv_block(text: &str) -> Result<Vec<(String, String)>, SpecError> {
    let mut pairs = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .filter(|(key, _)| !key.trim().is_empty())
            .ok_or(SpecError::MalformedLine(number + 1))?;
        // Keys themselves contain colons (speed:max), so extend the key while
        // the next segment does not start with whitespace.
        let mut key = key.trim_end().to_string();
        let mut value = value;
        while !value.is_empty() && !value.starts_with(char::is_whitespace) {
            match value.split_once(':') {
                Some((more, rest)) => {
                    key.push(':');
                    key.push_str(more);
                    value = rest;
                }
                None => {
                    key.push(':');
                    key.push_str(value);
                    value = "";
                }
            }
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

fn bad_value(key: &str, message: impl ToString) -> SpecError {
    SpecError::BadValue {
        key: key.to_string(),
        message: message.to_string(),
    }
}

impl BehaviorSpec {
    /// Parses the declarative text block format. Keys mirror the tag schema:
    ///
    /// ```text
    /// speed:max: 50
    /// overtake: no
    /// boundary_long: conditional
    /// boundary_long:condition: no_stagnant_traffic
    /// boundary_left: prohibited
    /// boundary_right: prohibited
    /// reservation: externally
    /// reservation:object: pedestrian
    /// reservation:link: 601; 602
    /// ```
    ///
    /// Demand `i >= 2` of a key uses the `:i` suffix, e.g. `speed:max:2` with
    /// `condition:speed:max:2`.
    pub fn parse(text: &str) -> Result<BehaviorSpec, SpecError> {
        let pairs = parse_kv_block(text)?;
        let lookup = |key: String| -> Option<&str> {
            pairs
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| v.as_str())
        };
        for (key, _) in &pairs {
            if !known_spec_key(key) {
                return Err(SpecError::UnknownKey(key.clone()));
            }
        }

        let mut spec = BehaviorSpec::default();

        for (base, limit) in [
            (schema::TAG_SPEED_MAX, SpeedLimitKind::Maximum),
            (schema::TAG_SPEED_MIN, SpeedLimitKind::Minimum),
        ] {
            for index in 1.. {
                let key = schema::indexed_key(base, index);
                let Some(raw) = lookup(key.clone()) else {
                    break;
                };
                let value = SpeedKmh::parse(raw).map_err(|e| bad_value(&key, e))?;
                let condition = parse_condition_value(&lookup(schema::condition_key(base, index)))
                    .map_err(|e| bad_value(&key, e))?;
                spec.speed.push(SpeedDemand {
                    limit,
                    value,
                    condition,
                });
            }
        }
        if spec.speed.is_empty() {
            return Err(SpecError::MissingKey("speed:max"));
        }

        for index in 1.. {
            let key = schema::indexed_key(schema::TAG_OVERTAKE, index);
            let Some(raw) = lookup(key.clone()) else {
                break;
            };
            let permitted = match raw {
                "yes" => true,
                "no" => false,
                other => {
                    return Err(bad_value(
                        &key,
                        format!("expected yes or no, got `{other}`"),
                    ))
                }
            };
            let condition =
                parse_condition_value(&lookup(schema::condition_key(schema::TAG_OVERTAKE, index)))
                    .map_err(|e| bad_value(&key, e))?;
            spec.overtake.push(OvertakeDemand {
                permitted,
                condition,
            });
        }
        if spec.overtake.is_empty() {
            return Err(SpecError::MissingKey("overtake"));
        }

        for (base, slot) in [
            (schema::ROLE_BOUNDARY_LONG, 0usize),
            (schema::ROLE_BOUNDARY_LEFT, 1),
            (schema::ROLE_BOUNDARY_RIGHT, 2),
        ] {
            let demands = match slot {
                0 => &mut spec.boundary_long,
                1 => &mut spec.boundary_left,
                _ => &mut spec.boundary_right,
            };
            for index in 1.. {
                let key = schema::indexed_key(base, index);
                let Some(raw) = lookup(key.clone()) else {
                    break;
                };
                let permission = CrossingPermission::parse_token(raw)
                    .ok_or_else(|| bad_value(&key, format!("unknown permission `{raw}`")))?;
                let condition_key = if index <= 1 {
                    format!("{base}:{}", schema::TAG_CONDITION)
                } else {
                    format!("{base}:{}:{index}", schema::TAG_CONDITION)
                };
                let condition = parse_condition_value(&lookup(condition_key))
                    .map_err(|e| bad_value(&key, e))?;
                demands.push(CrossingDemand {
                    permission,
                    condition,
                });
            }
            if demands.is_empty() {
                return Err(SpecError::MissingKey(match slot {
                    0 => "boundary_long",
                    1 => "boundary_left",
                    _ => "boundary_right",
                }));
            }
        }

        for index in 1.. {
            let key = schema::indexed_key(schema::TAG_RESERVATION, index);
            let Some(raw) = lookup(key.clone()) else {
                break;
            };
            let kind = ReservationKind::parse_token(raw)
                .ok_or_else(|| bad_value(&key, format!("unknown reservation kind `{raw}`")))?;
            let mut demand = ReservationDemandSpec {
                kind: Some(kind),
                ..ReservationDemandSpec::default()
            };
            let object_key = indexed_subkey(schema::TAG_RESERVATION, schema::TAG_OBJECT, index);
            if let Some(raw_objects) = lookup(object_key.clone()) {
                for token in raw_objects.split(';') {
                    let token = token.trim();
                    if token.is_empty() {
                        continue;
                    }
                    demand
                        .entitled
                        .insert(ParticipantType::parse_token(token).map_err(|_| {
                            bad_value(&object_key, format!("unknown participant `{token}`"))
                        })?);
                }
            }
            for (subkey, destination) in [("link", false), ("link:dest", true)] {
                let link_key = indexed_subkey(schema::TAG_RESERVATION, subkey, index);
                if let Some(raw_links) = lookup(link_key.clone()) {
                    for token in raw_links.split(';') {
                        let token = token.trim();
                        if token.is_empty() {
                            continue;
                        }
                        let id: i64 = token.parse().map_err(|_| {
                            bad_value(&link_key, format!("`{token}` is not an element id"))
                        })?;
                        demand.links.push((id, destination));
                    }
                }
            }
            let condition_key =
                indexed_subkey(schema::TAG_RESERVATION, schema::TAG_CONDITION, index);
            demand.condition = parse_condition_value(&lookup(condition_key.clone()))
                .map_err(|e| bad_value(&condition_key, e))?;
            spec.reservation.push(demand);
        }
        if spec.reservation.is_empty() {
            return Err(SpecError::MissingKey("reservation"));
        }

        Ok(spec)
    }

    /// Resolves the spec into a validated behavior against a map's elements.
    fn resolve(
        &self,
        map: &SceneryMap,
        direction: TravelDirection,
    ) -> Result<Behavior, BuildError> {
        let mut demands = Vec::new();
        for spec in &self.reservation {
            let kind = spec.kind.unwrap_or(ReservationKind::Own);
            let mut links = Vec::new();
            for (raw, destination) in &spec.links {
                let target = if map.lane(LaneId(*raw)).is_some() {
                    LinkTarget::Lane(LaneId(*raw))
                } else if map.area(AreaId(*raw)).is_some() {
                    LinkTarget::Area(AreaId(*raw))
                } else {
                    return Err(BuildError::UnknownLinkTarget(*raw));
                };
                links.push(ReservationLink {
                    target,
                    role: if *destination {
                        ReservationRole::Destination
                    } else {
                        ReservationRole::Origin
                    },
                });
            }
            demands.push(ReservationDemand {
                kind,
                entitled: spec.entitled.clone(),
                links,
                condition: spec.condition.clone(),
            });
        }
        let behavior = Behavior {
            direction,
            speed: SpeedAttribute::new(self.speed.clone())?,
            boundary_long: BoundaryAttribute::new(self.boundary_long.clone(), Vec::new())?,
            boundary_left: BoundaryAttribute::new(self.boundary_left.clone(), Vec::new())?,
            boundary_right: BoundaryAttribute::new(self.boundary_right.clone(), Vec::new())?,
            reservation: ReservationAttribute::new(demands)?,
            overtake: OvertakeAttribute::new(self.overtake.clone())?,
        };
        Ok(behavior)
    }
}

fn known_spec_key(key: &str) -> bool {
    let bases = [
        "speed:max",
        "speed:min",
        "condition:speed:max",
        "condition:speed:min",
        "overtake",
        "condition:overtake",
        "boundary_long",
        "boundary_long:condition",
        "boundary_left",
        "boundary_left:condition",
        "boundary_right",
        "boundary_right:condition",
        "reservation",
        "reservation:object",
        "reservation:link",
        "reservation:link:dest",
        "reservation:condition",
    ];
    for base in bases {
        if key == base {
            return true;
        }
        if let Some(rest) = key.strip_prefix(&format!("{base}:")) {
            if rest.parse::<usize>().is_ok_and(|i| i >= 2) {
                return true;
            }
        }
    }
    false
}

fn indexed_subkey(base: &str, sub: &str, index: usize) -> String {
    if index <= 1 {
        format!("{base}:{sub}")
    } else {
        format!("{base}:{sub}:{index}")
    }
}

fn parse_condition_value(value: &Option<&str>) -> Result<Option<Condition>, ConditionError> {
    match value {
        None => Ok(None),
        Some(token) => Condition::parse_token(token).map(Some),
    }
}

/// Attaches a behavior space to a chain of uncovered lanelets, creating all
/// relations per the tag schema and missing longitudinal boundary
/// linestrings. Returns the new map and the new space's id.
pub fn annotate(
    map: &SceneryMap,
    lanelets: &[LaneId],
    along: &BehaviorSpec,
    against: Option<&BehaviorSpec>,
) -> Result<(SceneryMap, SpaceId), BuildError> {
    if lanelets.is_empty() {
        return Err(BuildError::NoLanelets);
    }
    for id in lanelets {
        let lane = map.lane(*id).ok_or(BuildError::UnknownLanelet(*id))?;
        if let Some(space) = map.covering_spaces(*id).first() {
            return Err(BuildError::AlreadyCovered {
                lanelet: *id,
                space: *space,
            });
        }
        if against.is_none() && !lane.one_directional {
            return Err(BuildError::AgainstRequired(*id));
        }
    }

    // Validate the demand content before touching the document.
    let along_behavior = along.resolve(map, TravelDirection::Along)?;
    let against_behavior = against
        .map(|spec| spec.resolve(map, TravelDirection::Against))
        .transpose()?;

    let lanes: Vec<_> = lanelets.iter().map(|id| map.lane(*id).unwrap()).collect();
    let walk = walk_chain(map.doc(), &lanes).ok_or(EditError::MissingGeometry(lanelets[0]))?;
    if walk.leave.is_none() {
        return Err(BuildError::BrokenChain);
    }

    // Longitudinal boundary linestrings at the chain's travel start and end.
    let head = lanelets[0];
    let (tail, tail_aligned) = {
        let (resolved, aligned) = walk.members.last().unwrap();
        (resolved.lane, *aligned)
    };
    let (map, start_way, _) = add_longitudinal_boundary(map, head, BoundaryEnd::Start)?;
    let (map, end_way, _) = add_longitudinal_boundary(
        &map,
        tail,
        if tail_aligned {
            BoundaryEnd::End
        } else {
            BoundaryEnd::Start
        },
    )?;
    // Re-walk on the (possibly re-extracted) map to collect bound ways.
    let lanes: Vec<_> = lanelets.iter().map(|id| map.lane(*id).unwrap()).collect();
    let walk = walk_chain(map.doc(), &lanes).ok_or(EditError::MissingGeometry(head))?;

    let mut doc = map.doc().clone();
    let mut next_relation = doc.next_id(ElementKind::Relation);
    let mut allocate = || {
        let id = next_relation;
        next_relation += 1;
        id
    };

    let mut space_members = Vec::new();
    for lanelet in lanelets {
        space_members.push(OsmMember {
            kind: ElementKind::Relation,
            ref_id: lanelet.0,
            role: schema::ROLE_LANELET.to_string(),
        });
    }

    for (direction, behavior) in [
        (TravelDirection::Along, Some(&along_behavior)),
        (TravelDirection::Against, against_behavior.as_ref()),
    ] {
        let Some(behavior) = behavior else { continue };

        // Travel-relative geometry: the along behavior enters over the start
        // way and exits left over each member's travel-left bound.
        let long_way = match direction {
            TravelDirection::Along => start_way,
            TravelDirection::Against => end_way,
        };
        let mut left_ways = Vec::new();
        let mut right_ways = Vec::new();
        for (resolved, aligned) in &walk.members {
            let travels_ref = (direction == TravelDirection::Along) == *aligned;
            if travels_ref {
                left_ways.push(resolved.left_way);
                right_ways.push(resolved.right_way);
            } else {
                left_ways.push(resolved.right_way);
                right_ways.push(resolved.left_way);
            }
        }

        let mut boundary_ids = Vec::new();
        for (demands, ways) in [
            (&behavior.boundary_long.demands, vec![long_way]),
            (&behavior.boundary_left.demands, left_ways),
            (&behavior.boundary_right.demands, right_ways),
        ] {
            let id = allocate();
            let mut tags = crate::osm::Tags::new();
            for (index, demand) in demands.iter().enumerate() {
                tags.insert(
                    schema::indexed_key(schema::TAG_CROSSING, index + 1),
                    demand.permission.token().to_string(),
                );
                if let Some(condition) = &demand.condition {
                    tags.insert(
                        schema::indexed_key(schema::TAG_CONDITION, index + 1),
                        condition.token(),
                    );
                }
            }
            tags.insert(
                schema::TAG_TYPE.to_string(),
                schema::REL_BOUNDARY.to_string(),
            );
            let members = ways
                .iter()
                .map(|way| OsmMember {
                    kind: ElementKind::Way,
                    ref_id: way.0,
                    role: schema::ROLE_BOUNDARY.to_string(),
                })
                .collect();
            doc.insert_relation(OsmRelation { id, members, tags })
                .expect("fresh relation id");
            boundary_ids.push(id);
        }

        let reservation_id = allocate();
        {
            let mut tags = crate::osm::Tags::new();
            let mut members = Vec::new();
            for (index, demand) in behavior.reservation.demands.iter().enumerate() {
                let index = index + 1;
                tags.insert(
                    schema::indexed_key(schema::TAG_RESERVATION, index),
                    demand.kind.token().to_string(),
                );
                if !demand.entitled.is_empty() {
                    let objects: Vec<String> = demand.entitled.iter().map(|p| p.token()).collect();
                    tags.insert(
                        schema::indexed_key(schema::TAG_OBJECT, index),
                        objects.join(";"),
                    );
                }
                if let Some(condition) = &demand.condition {
                    tags.insert(
                        schema::indexed_key(schema::TAG_CONDITION, index),
                        condition.token(),
                    );
                }
                for link in &demand.links {
                    members.push(OsmMember {
                        kind: ElementKind::Relation,
                        ref_id: link.target.raw(),
                        role: schema::link_role(index, link.role == ReservationRole::Destination),
                    });
                }
            }
            tags.insert(
                schema::TAG_TYPE.to_string(),
                schema::REL_RESERVATION.to_string(),
            );
            doc.insert_relation(OsmRelation {
                id: reservation_id,
                members,
                tags,
            })
            .expect("fresh relation id");
        }

        let behavior_id = allocate();
        {
            let mut tags = crate::osm::Tags::new();
            let mut max_index = 0;
            let mut min_index = 0;
            for demand in &behavior.speed.demands {
                let (base, index) = match demand.limit {
                    SpeedLimitKind::Maximum => {
                        max_index += 1;
                        (schema::TAG_SPEED_MAX, max_index)
                    }
                    SpeedLimitKind::Minimum => {
                        min_index += 1;
                        (schema::TAG_SPEED_MIN, min_index)
                    }
                };
                tags.insert(schema::indexed_key(base, index), demand.value.to_string());
                if let Some(condition) = &demand.condition {
                    tags.insert(schema::condition_key(base, index), condition.token());
                }
            }
            for (index, demand) in behavior.overtake.demands.iter().enumerate() {
                let index = index + 1;
                tags.insert(
                    schema::indexed_key(schema::TAG_OVERTAKE, index),
                    if demand.permitted { "yes" } else { "no" }.to_string(),
                );
                if let Some(condition) = &demand.condition {
                    tags.insert(
                        schema::condition_key(schema::TAG_OVERTAKE, index),
                        condition.token(),
                    );
                }
            }
            tags.insert(
                schema::TAG_TYPE.to_string(),
                schema::REL_BEHAVIOR.to_string(),
            );
            let members = vec![
                OsmMember {
                    kind: ElementKind::Relation,
                    ref_id: boundary_ids[0],
                    role: schema::ROLE_BOUNDARY_LONG.to_string(),
                },
                OsmMember {
                    kind: ElementKind::Relation,
                    ref_id: boundary_ids[1],
                    role: schema::ROLE_BOUNDARY_LEFT.to_string(),
                },
                OsmMember {
                    kind: ElementKind::Relation,
                    ref_id: boundary_ids[2],
                    role: schema::ROLE_BOUNDARY_RIGHT.to_string(),
                },
                OsmMember {
                    kind: ElementKind::Relation,
                    ref_id: reservation_id,
                    role: schema::ROLE_RESERVATION.to_string(),
                },
            ];
            doc.insert_relation(OsmRelation {
                id: behavior_id,
                members,
                tags,
            })
            .expect("fresh relation id");
        }

        space_members.push(OsmMember {
            kind: ElementKind::Relation,
            ref_id: behavior_id,
            role: match direction {
                TravelDirection::Along => schema::ROLE_ALONG.to_string(),
                TravelDirection::Against => schema::ROLE_AGAINST.to_string(),
            },
        });
    }

    let space_id = allocate();
    let mut tags = crate::osm::Tags::new();
    tags.insert(
        schema::TAG_TYPE.to_string(),
        schema::REL_BEHAVIOR_SPACE.to_string(),
    );
    doc.insert_relation(OsmRelation {
        id: space_id,
        members: space_members,
        tags,
    })
    .expect("fresh relation id");

    let (map, _) = SceneryMap::from_doc(doc);
    Ok((map, SpaceId(space_id)))
}

/// Context for default derivation.
#[derive(Debug, Clone, Copy)]
pub struct DeriveContext {
    pub zone_speed_kmh: f64,
}

/// Heuristic pre-fill for one lanelet: speed from the zone limit, lateral
/// crossing from the bound linestring type (solid -> prohibited, dashed ->
/// allowed, curb -> not possible), own reservation, overtaking permitted.
/// Deterministic, never emits a conditional demand, and always provisional.
pub fn derive_defaults(
    map: &SceneryMap,
    lanelet: LaneId,
    context: DeriveContext,
) -> Result<BehaviorSpec, BuildError> {
    let lane = map
        .lane(lanelet)
        .ok_or(BuildError::UnknownLanelet(lanelet))?;
    let crossing_for = |way: crate::ids::LinestringId| -> CrossingPermission {
        let Some(way) = map.doc().ways.get(&way.0) else {
            return CrossingPermission::Prohibited;
        };
        let type_tag = way.tags.get(schema::TAG_TYPE).map(String::as_str);
        let subtype_tag = way.tags.get(schema::TAG_SUBTYPE).map(String::as_str);
        if type_tag == Some("curbstone") || subtype_tag == Some("curb") {
            return CrossingPermission::NotPossible;
        }
        match subtype_tag.or(type_tag) {
            Some("dashed") => CrossingPermission::Allowed,
            Some("solid") | Some("solid_solid") => CrossingPermission::Prohibited,
            _ => CrossingPermission::Prohibited,
        }
    };

    Ok(BehaviorSpec {
        speed: vec![SpeedDemand {
            limit: SpeedLimitKind::Maximum,
            value: SpeedKmh::new(context.zone_speed_kmh)?,
            condition: None,
        }],
        overtake: vec![OvertakeDemand {
            permitted: true,
            condition: None,
        }],
        boundary_long: vec![CrossingDemand::allowed()],
        boundary_left: vec![CrossingDemand {
            permission: crossing_for(lane.left_bound),
            condition: None,
        }],
        boundary_right: vec![CrossingDemand {
            permission: crossing_for(lane.right_bound),
            condition: None,
        }],
        reservation: vec![ReservationDemandSpec {
            kind: Some(ReservationKind::Own),
            ..ReservationDemandSpec::default()
        }],
        provisional: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_block_handles_colon_keys_and_token_values() {
        let pairs = parse_kv_block(
            "# comment\nspeed:max: 30\nboundary_long:condition: traffic_light:active\n\novertake: yes\n",
        )
        .unwrap();
        assert_eq!(
            pairs,
            vec![
                ("speed:max".to_string(), "30".to_string()),
                (
                    "boundary_long:condition".to_string(),
                    "traffic_light:active".to_string()
                ),
                ("overtake".to_string(), "yes".to_string()),
            ]
        );
        assert!(parse_kv_block("no separator here").is_err());
    }

    #[test]
    fn spec_parses_the_table_style_block() {
        let spec = BehaviorSpec::parse(
            "speed:max: 50\novertake: no\nboundary_long: conditional\nboundary_long:condition: no_stagnant_traffic\nboundary_left: conditional\nboundary_left:condition: no_stagnant_traffic\nboundary_right: conditional\nboundary_right:condition: no_stagnant_traffic\nreservation: externally\nreservation:object: pedestrian\n",
        )
        .unwrap();
        assert_eq!(spec.speed.len(), 1);
        assert_eq!(spec.speed[0].value.value(), 50.0);
        assert!(!spec.overtake[0].permitted);
        assert_eq!(
            spec.boundary_left[0].condition,
            Some(Condition::NoStagnantTraffic)
        );
        assert_eq!(spec.reservation[0].kind, Some(ReservationKind::Externally));
        assert!(spec.reservation[0]
            .entitled
            .contains(&ParticipantType::Pedestrian));
    }

    #[test]
    fn spec_rejects_unknown_keys_and_missing_requirements() {
        assert!(matches!(
            BehaviorSpec::parse("speed:maximum: 50\n"),
            Err(SpecError::UnknownKey(_))
        ));
        assert!(matches!(
            BehaviorSpec::parse("overtake: yes\n"),
            Err(SpecError::MissingKey("speed:max"))
        ));
    }
}
