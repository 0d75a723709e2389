//! Extraction of the typed BSSD view from an OSM document.
//!
//! Extraction is lenient: a behavior space that violates a model invariant is
//! recorded as a defect (later reported by validator rule V-RQ2) and kept out
//! of the typed view, while its relations stay in the document. Lanelet
//! coverage is tracked from the raw relation members, so a defective space
//! still covers its lanelets.

use std::collections::BTreeMap;

use super::schema;
use super::{ElementKind, ElementRef, OsmDocument, OsmRelation};
use crate::attributes::{
    AttributeError, BoundaryAttribute, CrossingDemand, CrossingPermission, OvertakeAttribute,
    OvertakeDemand, ParticipantType, ReservationAttribute, ReservationDemand, ReservationKind,
    ReservationLink, ReservationRole, SpeedAttribute, SpeedDemand, SpeedKmh, SpeedLimitKind,
};
use crate::behavior::{
    AtomicBehaviorSpace, Behavior, LaneElement, LaneKind, MotionSpaceKind, NonRegularMotionSpace,
    TravelDirection,
};
use crate::condition::Condition;
use crate::diag::Diagnostic;
use crate::ids::{AreaId, LaneId, LinestringId, LinkTarget, SpaceId};

pub(crate) struct Extraction {
    pub lanes: BTreeMap<LaneId, LaneElement>,
    pub areas: BTreeMap<AreaId, NonRegularMotionSpace>,
    pub spaces: BTreeMap<SpaceId, AtomicBehaviorSpace>,
    pub coverage: BTreeMap<LaneId, Vec<SpaceId>>,
    pub defects: Vec<Diagnostic>,
    pub structural_diagnostics: Vec<Diagnostic>,
}

pub(crate) fn extract_map(doc: &OsmDocument) -> Extraction {
    let mut ex = Extractor {
        doc,
        lanes: BTreeMap::new(),
        areas: BTreeMap::new(),
        spaces: BTreeMap::new(),
        coverage: BTreeMap::new(),
        defects: Vec::new(),
        structural: Vec::new(),
    };
    ex.collect_lanes();
    ex.collect_areas();
    ex.scan_dangling();
    ex.collect_spaces();
    Extraction {
        lanes: ex.lanes,
        areas: ex.areas,
        spaces: ex.spaces,
        coverage: ex.coverage,
        defects: ex.defects,
        structural_diagnostics: ex.structural,
    }
}

fn is_bssd_relation(relation: &OsmRelation) -> bool {
    matches!(
        relation.tag(schema::TAG_TYPE),
        Some(schema::REL_BEHAVIOR_SPACE)
            | Some(schema::REL_BEHAVIOR)
            | Some(schema::REL_BOUNDARY)
            | Some(schema::REL_RESERVATION)
    )
}

struct Extractor<'a> {
    doc: &'a OsmDocument,
    lanes: BTreeMap<LaneId, LaneElement>,
    areas: BTreeMap<AreaId, NonRegularMotionSpace>,
    spaces: BTreeMap<SpaceId, AtomicBehaviorSpace>,
    coverage: BTreeMap<LaneId, Vec<SpaceId>>,
    defects: Vec<Diagnostic>,
    structural: Vec<Diagnostic>,
}

impl<'a> Extractor<'a> {
    fn defect(&mut self, code: &'static str, subjects: Vec<ElementRef>, message: String) {
        self.defects
            .push(Diagnostic::error(code, subjects, message));
    }

    fn collect_lanes(&mut self) {
        for relation in self.doc.relations.values() {
            if relation.tag(schema::TAG_TYPE) != Some(schema::REL_LANELET) {
                continue;
            }
            let subject = ElementRef::relation(relation.id);
            let left = self.sole_way_member(relation, schema::ROLE_LEFT);
            let right = self.sole_way_member(relation, schema::ROLE_RIGHT);
            let (Some(left), Some(right)) = (left, right) else {
                self.structural.push(Diagnostic::error(
                    "invalid_lanelet",
                    vec![subject],
                    format!(
                        "lanelet relation {} lacks resolvable left/right bound ways",
                        relation.id
                    ),
                ));
                continue;
            };
            let kind = match relation.tag(schema::TAG_SUBTYPE) {
                None | Some("road") | Some("") => LaneKind::VehicleLane,
                Some("bicycle_lane") => LaneKind::BicycleLane,
                Some("crosswalk") => LaneKind::Crosswalk,
                Some(other) => LaneKind::Other(other.to_lowercase()),
            };
            let lane = LaneElement {
                id: LaneId(relation.id),
                left_bound: LinestringId(left),
                right_bound: LinestringId(right),
                kind,
                one_directional: relation.tag(schema::TAG_ONE_WAY) == Some("yes"),
            };
            if let Err(err) = lane.validate() {
                self.structural.push(Diagnostic::error(
                    "invalid_lanelet",
                    vec![subject],
                    format!("lanelet relation {}: {err}", relation.id),
                ));
                continue;
            }
            self.lanes.insert(lane.id, lane);
        }
    }

    fn sole_way_member(&self, relation: &OsmRelation, role: &str) -> Option<i64> {
        let mut members = relation
            .members_with_role(role)
            .filter(|m| m.kind == ElementKind::Way && self.doc.ways.contains_key(&m.ref_id));
        let first = members.next()?;
        if members.next().is_some() {
            return None;
        }
        Some(first.ref_id)
    }

    fn collect_areas(&mut self) {
        for relation in self.doc.relations.values() {
            if relation.tag(schema::TAG_TYPE) != Some(schema::REL_MULTIPOLYGON) {
                continue;
            }
            let kind = match relation.tag(schema::TAG_SUBTYPE) {
                Some("walkway") | Some("sidewalk") => MotionSpaceKind::Sidewalk,
                Some("parking") => MotionSpaceKind::ParkingArea,
                Some("keepout") => MotionSpaceKind::Keepout,
                Some(other) if !other.is_empty() => MotionSpaceKind::Other(other.to_lowercase()),
                _ => MotionSpaceKind::Other("area".to_string()),
            };
            let area = NonRegularMotionSpace {
                id: AreaId(relation.id),
                kind,
                geometry_ref: Some(AreaId(relation.id)),
            };
            self.areas.insert(area.id, area);
        }
    }

    /// Dangling references outside BSSD relations. Dangling members of BSSD
    /// relations surface as precise extraction defects instead.
    fn scan_dangling(&mut self) {
        for relation in self.doc.relations.values() {
            if is_bssd_relation(relation) {
                continue;
            }
            for member in &relation.members {
                let target = ElementRef {
                    kind: member.kind,
                    id: member.ref_id,
                };
                if !self.doc.contains(target) {
                    self.structural.push(Diagnostic::error(
                        "dangling_ref",
                        vec![ElementRef::relation(relation.id), target],
                        format!(
                            "relation {} references missing {} {}",
                            relation.id, member.kind, member.ref_id
                        ),
                    ));
                }
            }
        }
        for way in self.doc.ways.values() {
            for node_ref in &way.node_refs {
                if !self.doc.nodes.contains_key(node_ref) {
                    self.structural.push(Diagnostic::error(
                        "dangling_ref",
                        vec![ElementRef::way(way.id), ElementRef::node(*node_ref)],
                        format!("way {} references missing node {node_ref}", way.id),
                    ));
                }
            }
        }
    }

    fn collect_spaces(&mut self) {
        let space_ids: Vec<i64> = self
            .doc
            .relations
            .values()
            .filter(|r| r.tag(schema::TAG_TYPE) == Some(schema::REL_BEHAVIOR_SPACE))
            .map(|r| r.id)
            .collect();
        for id in space_ids {
            self.collect_space(id);
        }
    }

    fn collect_space(&mut self, id: i64) {
        let relation = self.doc.relations[&id].clone();
        let subject = ElementRef::relation(id);
        let defects_before = self.defects.len();

        let mut lanes = Vec::new();
        let mut along_refs = Vec::new();
        let mut against_refs = Vec::new();
        for member in &relation.members {
            match member.role.as_str() {
                schema::ROLE_LANELET => {
                    let lane_id = LaneId(member.ref_id);
                    if member.kind == ElementKind::Relation && self.lanes.contains_key(&lane_id) {
                        lanes.push(lane_id);
                    } else {
                        self.defect(
                            "unresolved_lanelet",
                            vec![subject, ElementRef::relation(member.ref_id)],
                            format!(
                                "behavior_space {} references {} {} which is not a lanelet",
                                id, member.kind, member.ref_id
                            ),
                        );
                    }
                }
                schema::ROLE_ALONG => along_refs.push(member.ref_id),
                schema::ROLE_AGAINST => against_refs.push(member.ref_id),
                other => {
                    self.defect(
                        "unknown_role",
                        vec![subject],
                        format!("behavior_space {id} has member with unknown role `{other}`"),
                    );
                }
            }
        }

        // Raw coverage, recorded before any invariant can fail.
        for lane in &lanes {
            self.coverage.entry(*lane).or_default().push(SpaceId(id));
        }

        if lanes.is_empty() && defects_before == self.defects.len() {
            self.defect(
                "missing_lanelet",
                vec![subject],
                format!("behavior_space {id} has no lanelet member"),
            );
        }

        let along = match along_refs.as_slice() {
            [] => {
                self.defect(
                    "missing_along",
                    vec![subject],
                    format!("behavior_space {id} has no member with role `along`"),
                );
                None
            }
            [one] => self.parse_behavior_ref(subject, *one, TravelDirection::Along),
            _ => {
                self.defect(
                    "duplicate_role",
                    vec![subject],
                    format!("behavior_space {id} has multiple members with role `along`"),
                );
                None
            }
        };
        let against = match against_refs.as_slice() {
            [] => {
                // Allowed only when every lane in the chain is one-directional.
                let bidirectional: Vec<&LaneId> = lanes
                    .iter()
                    .filter(|l| self.lanes.get(l).is_some_and(|lane| !lane.one_directional))
                    .collect();
                if let Some(lane) = bidirectional.first() {
                    self.defect(
                        "missing_against",
                        vec![subject, ElementRef::relation(lane.0)],
                        format!(
                            "behavior_space {} lacks an `against` behavior but lanelet {} is not one-directional",
                            id, lane.0
                        ),
                    );
                }
                None
            }
            [one] => self.parse_behavior_ref(subject, *one, TravelDirection::Against),
            _ => {
                self.defect(
                    "duplicate_role",
                    vec![subject],
                    format!("behavior_space {id} has multiple members with role `against`"),
                );
                None
            }
        };

        if self.defects.len() != defects_before {
            return;
        }
        let Some(along) = along else { return };
        match AtomicBehaviorSpace::new(SpaceId(id), lanes, along, against) {
            Ok(space) => {
                self.spaces.insert(space.id, space);
            }
            Err(err) => {
                self.defect(
                    "invalid_space",
                    vec![subject],
                    format!("behavior_space {id}: {err}"),
                );
            }
        }
    }

    fn parse_behavior_ref(
        &mut self,
        space: ElementRef,
        ref_id: i64,
        direction: TravelDirection,
    ) -> Option<Behavior> {
        let relation = match self.doc.relations.get(&ref_id) {
            Some(relation) if relation.tag(schema::TAG_TYPE) == Some(schema::REL_BEHAVIOR) => {
                relation.clone()
            }
            _ => {
                self.defect(
                    "unresolved_behavior",
                    vec![space, ElementRef::relation(ref_id)],
                    format!(
                        "behavior_space {} references relation {} which is not a behavior",
                        space.id, ref_id
                    ),
                );
                return None;
            }
        };
        self.parse_behavior(&relation, direction)
    }

    fn parse_behavior(
        &mut self,
        relation: &OsmRelation,
        direction: TravelDirection,
    ) -> Option<Behavior> {
        let subject = ElementRef::relation(relation.id);
        let defects_before = self.defects.len();

        let speed = self.parse_speed(relation);
        let overtake = self.parse_overtake(relation);

        let mut boundaries: BTreeMap<&str, Option<BoundaryAttribute>> = BTreeMap::new();
        for role in [
            schema::ROLE_BOUNDARY_LONG,
            schema::ROLE_BOUNDARY_LEFT,
            schema::ROLE_BOUNDARY_RIGHT,
        ] {
            let refs: Vec<i64> = relation.members_with_role(role).map(|m| m.ref_id).collect();
            let parsed = match refs.as_slice() {
                [] => {
                    self.defect(
                        "missing_boundary",
                        vec![subject],
                        format!("behavior {} has no member with role `{role}`", relation.id),
                    );
                    None
                }
                [one] => self.parse_boundary_ref(subject, *one),
                _ => {
                    self.defect(
                        "duplicate_role",
                        vec![subject],
                        format!(
                            "behavior {} has multiple members with role `{role}`",
                            relation.id
                        ),
                    );
                    None
                }
            };
            boundaries.insert(role, parsed);
        }

        let reservation_refs: Vec<i64> = relation
            .members_with_role(schema::ROLE_RESERVATION)
            .map(|m| m.ref_id)
            .collect();
        let reservation = match reservation_refs.as_slice() {
            [] => {
                self.defect(
                    "missing_reservation",
                    vec![subject],
                    format!(
                        "behavior {} has no member with role `reservation`",
                        relation.id
                    ),
                );
                None
            }
            [one] => self.parse_reservation_ref(subject, *one),
            _ => {
                self.defect(
                    "duplicate_role",
                    vec![subject],
                    format!(
                        "behavior {} has multiple members with role `reservation`",
                        relation.id
                    ),
                );
                None
            }
        };

        for member in &relation.members {
            if !matches!(
                member.role.as_str(),
                schema::ROLE_BOUNDARY_LONG
                    | schema::ROLE_BOUNDARY_LEFT
                    | schema::ROLE_BOUNDARY_RIGHT
                    | schema::ROLE_RESERVATION
            ) {
                self.defect(
                    "unknown_role",
                    vec![subject],
                    format!(
                        "behavior {} has member with unknown role `{}`",
                        relation.id, member.role
                    ),
                );
            }
        }

        if self.defects.len() != defects_before {
            return None;
        }
        Some(Behavior {
            direction,
            speed: speed?,
            boundary_long: boundaries.remove(schema::ROLE_BOUNDARY_LONG)??,
            boundary_left: boundaries.remove(schema::ROLE_BOUNDARY_LEFT)??,
            boundary_right: boundaries.remove(schema::ROLE_BOUNDARY_RIGHT)??,
            reservation: reservation?,
            overtake: overtake?,
        })
    }

    fn parse_condition_tag(
        &mut self,
        subject: ElementRef,
        relation: &OsmRelation,
        key: &str,
    ) -> Option<Option<Condition>> {
        match relation.tag(key) {
            None => Some(None),
            Some(token) => match Condition::parse_token(token) {
                Ok(condition) => Some(Some(condition)),
                Err(err) => {
                    self.defect(
                        "invalid_condition",
                        vec![subject],
                        format!("relation {} tag `{key}`: {err}", subject.id),
                    );
                    None
                }
            },
        }
    }

    fn indexed_demand_keys(relation: &OsmRelation, base: &str) -> Vec<(usize, String)> {
        let mut keys = Vec::new();
        for index in 1.. {
            let key = schema::indexed_key(base, index);
            if relation.tags.contains_key(&key) {
                keys.push((index, key));
            } else {
                break;
            }
        }
        keys
    }

    /// Indexed tags beyond the last contiguous index are a schema violation.
    fn check_index_gaps(
        &mut self,
        subject: ElementRef,
        relation: &OsmRelation,
        base: &str,
        found: usize,
    ) {
        for key in relation.tags.keys() {
            if let Some(rest) = key.strip_prefix(&format!("{base}:")) {
                if let Ok(index) = rest.parse::<usize>() {
                    if index > found.max(1) {
                        self.defect(
                            "demand_index_gap",
                            vec![subject],
                            format!(
                                "relation {} has `{key}` but demand indexes up to {} are missing",
                                subject.id, index
                            ),
                        );
                    }
                }
            }
        }
    }

    fn parse_speed(&mut self, relation: &OsmRelation) -> Option<SpeedAttribute> {
        let subject = ElementRef::relation(relation.id);
        let defects_before = self.defects.len();
        let mut demands = Vec::new();
        for (base, limit) in [
            (schema::TAG_SPEED_MAX, SpeedLimitKind::Maximum),
            (schema::TAG_SPEED_MIN, SpeedLimitKind::Minimum),
        ] {
            let keys = Self::indexed_demand_keys(relation, base);
            self.check_index_gaps(subject, relation, base, keys.len());
            for (index, key) in keys {
                let raw = relation.tag(&key).unwrap();
                let value = match SpeedKmh::parse(raw) {
                    Ok(value) => value,
                    Err(err) => {
                        self.defect(
                            "invalid_speed",
                            vec![subject],
                            format!("behavior {} tag `{key}`: {err}", relation.id),
                        );
                        continue;
                    }
                };
                let condition = self.parse_condition_tag(
                    subject,
                    relation,
                    &schema::condition_key(base, index),
                );
                demands.push(SpeedDemand {
                    limit,
                    value,
                    condition: condition?,
                });
            }
        }
        if demands.is_empty() && defects_before == self.defects.len() {
            self.defect(
                "missing_speed_max",
                vec![subject],
                format!("behavior {} has no `speed:max` tag", relation.id),
            );
            return None;
        }
        match SpeedAttribute::new(demands) {
            Ok(speed) => (defects_before == self.defects.len()).then_some(speed),
            Err(err) => {
                self.attribute_defect(subject, relation.id, err);
                None
            }
        }
    }

    fn parse_overtake(&mut self, relation: &OsmRelation) -> Option<OvertakeAttribute> {
        let subject = ElementRef::relation(relation.id);
        let defects_before = self.defects.len();
        let keys = Self::indexed_demand_keys(relation, schema::TAG_OVERTAKE);
        self.check_index_gaps(subject, relation, schema::TAG_OVERTAKE, keys.len());
        if keys.is_empty() {
            self.defect(
                "missing_overtake",
                vec![subject],
                format!("behavior {} has no `overtake` tag", relation.id),
            );
            return None;
        }
        let mut demands = Vec::new();
        for (index, key) in keys {
            let permitted = match relation.tag(&key).unwrap() {
                "yes" => true,
                "no" => false,
                other => {
                    self.defect(
                        "invalid_overtake",
                        vec![subject],
                        format!(
                            "behavior {} tag `{key}` must be yes or no, found `{other}`",
                            relation.id
                        ),
                    );
                    continue;
                }
            };
            let condition = self.parse_condition_tag(
                subject,
                relation,
                &schema::condition_key(schema::TAG_OVERTAKE, index),
            );
            demands.push(OvertakeDemand {
                permitted,
                condition: condition?,
            });
        }
        match OvertakeAttribute::new(demands) {
            Ok(overtake) => (defects_before == self.defects.len()).then_some(overtake),
            Err(err) => {
                self.attribute_defect(subject, relation.id, err);
                None
            }
        }
    }

    fn parse_boundary_ref(&mut self, owner: ElementRef, ref_id: i64) -> Option<BoundaryAttribute> {
        let relation = match self.doc.relations.get(&ref_id) {
            Some(relation) if relation.tag(schema::TAG_TYPE) == Some(schema::REL_BOUNDARY) => {
                relation.clone()
            }
            _ => {
                self.defect(
                    "unresolved_boundary",
                    vec![owner, ElementRef::relation(ref_id)],
                    format!(
                        "behavior {} references relation {} which is not a boundary",
                        owner.id, ref_id
                    ),
                );
                return None;
            }
        };
        let subject = ElementRef::relation(relation.id);
        let defects_before = self.defects.len();

        let keys = Self::indexed_demand_keys(&relation, schema::TAG_CROSSING);
        self.check_index_gaps(subject, &relation, schema::TAG_CROSSING, keys.len());
        if keys.is_empty() {
            self.defect(
                "missing_crossing",
                vec![subject],
                format!("boundary {} has no `crossing` tag", relation.id),
            );
            return None;
        }
        let mut demands = Vec::new();
        for (index, key) in keys {
            let raw = relation.tag(&key).unwrap();
            let Some(permission) = CrossingPermission::parse_token(raw) else {
                self.defect(
                    "invalid_crossing",
                    vec![subject],
                    format!(
                        "boundary {} tag `{key}` has unknown value `{raw}`",
                        relation.id
                    ),
                );
                continue;
            };
            let condition = self.parse_condition_tag(
                subject,
                &relation,
                &schema::indexed_key(schema::TAG_CONDITION, index),
            );
            let demand = CrossingDemand {
                permission,
                condition: condition?,
            };
            if let Err(err) = demand.validate() {
                self.attribute_defect(subject, relation.id, err);
                continue;
            }
            demands.push(demand);
        }

        let mut geometry_refs = Vec::new();
        for member in &relation.members {
            if member.role != schema::ROLE_BOUNDARY {
                self.defect(
                    "unknown_role",
                    vec![subject],
                    format!(
                        "boundary {} has member with unknown role `{}`",
                        relation.id, member.role
                    ),
                );
                continue;
            }
            if member.kind == ElementKind::Way && self.doc.ways.contains_key(&member.ref_id) {
                geometry_refs.push(LinestringId(member.ref_id));
            } else {
                self.structural.push(Diagnostic::error(
                    "dangling_ref",
                    vec![subject, ElementRef::way(member.ref_id)],
                    format!(
                        "boundary {} references missing linestring {}",
                        relation.id, member.ref_id
                    ),
                ));
            }
        }

        match BoundaryAttribute::new(demands, geometry_refs) {
            Ok(boundary) => (defects_before == self.defects.len()).then_some(boundary),
            Err(err) => {
                self.attribute_defect(subject, relation.id, err);
                None
            }
        }
    }

    fn parse_reservation_ref(
        &mut self,
        owner: ElementRef,
        ref_id: i64,
    ) -> Option<ReservationAttribute> {
        let relation = match self.doc.relations.get(&ref_id) {
            Some(relation) if relation.tag(schema::TAG_TYPE) == Some(schema::REL_RESERVATION) => {
                relation.clone()
            }
            _ => {
                self.defect(
                    "unresolved_reservation",
                    vec![owner, ElementRef::relation(ref_id)],
                    format!(
                        "behavior {} references relation {} which is not a reservation",
                        owner.id, ref_id
                    ),
                );
                return None;
            }
        };
        let subject = ElementRef::relation(relation.id);
        let defects_before = self.defects.len();

        let keys = Self::indexed_demand_keys(&relation, schema::TAG_RESERVATION);
        self.check_index_gaps(subject, &relation, schema::TAG_RESERVATION, keys.len());
        if keys.is_empty() {
            self.defect(
                "missing_reservation_kind",
                vec![subject],
                format!("reservation {} has no `reservation` tag", relation.id),
            );
            return None;
        }

        // Links are grouped onto demands by role index.
        let mut links: BTreeMap<usize, Vec<ReservationLink>> = BTreeMap::new();
        for member in &relation.members {
            let Some((index, destination)) = schema::parse_link_role(&member.role) else {
                self.defect(
                    "unknown_role",
                    vec![subject],
                    format!(
                        "reservation {} has member with unknown role `{}`",
                        relation.id, member.role
                    ),
                );
                continue;
            };
            let target = if member.kind == ElementKind::Relation {
                let lane_id = LaneId(member.ref_id);
                let area_id = AreaId(member.ref_id);
                if self.lanes.contains_key(&lane_id) {
                    Some(LinkTarget::Lane(lane_id))
                } else if self.areas.contains_key(&area_id) {
                    Some(LinkTarget::Area(area_id))
                } else {
                    None
                }
            } else {
                None
            };
            let Some(target) = target else {
                self.defect(
                    "unresolved_link",
                    vec![subject, ElementRef::relation(member.ref_id)],
                    format!(
                        "reservation {} link references {} {} which is neither a lanelet nor an area",
                        relation.id, member.kind, member.ref_id
                    ),
                );
                continue;
            };
            links.entry(index).or_default().push(ReservationLink {
                target,
                role: if destination {
                    ReservationRole::Destination
                } else {
                    ReservationRole::Origin
                },
            });
        }

        let demand_count = keys.len();
        for index in links.keys() {
            if *index > demand_count {
                self.defect(
                    "demand_index_gap",
                    vec![subject],
                    format!(
                        "reservation {} has links for demand {index} but only {demand_count} demands",
                        relation.id
                    ),
                );
            }
        }

        let mut demands = Vec::new();
        for (index, key) in keys {
            let raw = relation.tag(&key).unwrap();
            let Some(kind) = ReservationKind::parse_token(raw) else {
                self.defect(
                    "invalid_reservation_kind",
                    vec![subject],
                    format!(
                        "reservation {} tag `{key}` has unknown value `{raw}`",
                        relation.id
                    ),
                );
                continue;
            };
            let mut entitled = std::collections::BTreeSet::new();
            if let Some(raw_objects) = relation.tag(&schema::indexed_key(schema::TAG_OBJECT, index))
            {
                for token in raw_objects.split(';') {
                    let token = token.trim();
                    if token.is_empty() {
                        continue;
                    }
                    match ParticipantType::parse_token(token) {
                        Ok(participant) => {
                            entitled.insert(participant);
                        }
                        Err(_) => {
                            self.defect(
                                "invalid_participant",
                                vec![subject],
                                format!(
                                    "reservation {} object token `{token}` is not a participant type",
                                    relation.id
                                ),
                            );
                        }
                    }
                }
            }
            let condition = self.parse_condition_tag(
                subject,
                &relation,
                &schema::indexed_key(schema::TAG_CONDITION, index),
            );
            let demand = ReservationDemand {
                kind,
                entitled,
                links: links.remove(&index).unwrap_or_default(),
                condition: condition?,
            };
            if let Err(err) = demand.validate() {
                self.attribute_defect(subject, relation.id, err);
                continue;
            }
            demands.push(demand);
        }

        match ReservationAttribute::new(demands) {
            Ok(reservation) => (defects_before == self.defects.len()).then_some(reservation),
            Err(err) => {
                self.attribute_defect(subject, relation.id, err);
                None
            }
        }
    }

    fn attribute_defect(&mut self, subject: ElementRef, id: i64, err: AttributeError) {
        let code = match err {
            AttributeError::EmptySpeedDemands | AttributeError::MissingUnconditionalMaximum => {
                "missing_speed_max"
            }
            AttributeError::DuplicateSpeedDemand => "duplicate_speed_demand",
            AttributeError::InvalidSpeed(_) | AttributeError::SpeedAboveBound(_, _) => {
                "invalid_speed"
            }
            AttributeError::ConditionalWithoutCondition
            | AttributeError::ConditionOnUnconditionalPermission(_) => "condition_mismatch",
            AttributeError::EmptyCrossingDemands => "missing_crossing",
            AttributeError::DuplicateConditionalCrossing => "duplicate_crossing_condition",
            AttributeError::EntitledRequired(_) => "entitled_missing",
            AttributeError::EntitledForbidden(_) => "entitled_forbidden",
            AttributeError::EmptyReservationDemands => "missing_reservation_kind",
            AttributeError::EmptyOvertakeDemands => "missing_overtake",
            AttributeError::OvertakeDefaultCount(_) => "overtake_default_count",
            AttributeError::EmptyParticipantLabel => "invalid_participant",
        };
        self.defect(code, vec![subject], format!("relation {id}: {err}"));
    }
}
