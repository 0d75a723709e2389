//! Deterministic sample data: random annotated maps, behavior spaces and
//! capability profiles. Used by the test suites and handy for fuzzing
//! downstream pipelines; all generation is seeded and reproducible.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::attributes::{
    CrossingDemand, OvertakeAttribute, OvertakeDemand, ParticipantType, ReservationAttribute,
    ReservationDemand, ReservationKind, ReservationLink, SpeedAttribute, SpeedDemand, SpeedKmh,
    SpeedLimitKind,
};
use crate::behavior::{AtomicBehaviorSpace, Behavior, TravelDirection};
use crate::builder::{annotate, BehaviorSpec, ReservationDemandSpec};
use crate::condition::{Condition, TrafficLightState};
use crate::graph::{build_graph, BehaviorGraph};
use crate::ids::{LaneId, LinkTarget, SpaceId};
use crate::map::SceneryMap;
use crate::osm::{schema, ElementKind, OsmDocument, OsmMember, OsmNode, OsmRelation, OsmWay, Tags};
use crate::router::CapabilityProfile;

/// A random fully annotated grid map: up to 3 lanes side by side, up to 4
/// sections long, mixed directions, every lanelet covered by one behavior
/// space.
pub fn sample_map(seed: u64) -> SceneryMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns = rng.gen_range(1..=3);
    let rows = rng.gen_range(1..=4);
    sample_map_sized(rng.gen(), columns, rows)
}

/// Like [`sample_map`] with fixed grid dimensions.
pub fn sample_map_sized(seed: u64, columns: usize, rows: usize) -> SceneryMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let doc = bare_grid(&mut rng, columns, rows);
    let (map, diagnostics) = SceneryMap::from_doc(doc);
    assert!(diagnostics.is_empty(), "generated grid must be clean");

    let lane_ids: Vec<LaneId> = map.lanes().map(|l| l.id).collect();
    let mut map = map;
    for lane in lane_ids.iter().copied() {
        let one_directional = map.lane(lane).unwrap().one_directional;
        let along = sample_spec(&mut rng, &lane_ids);
        let against = (!one_directional).then(|| sample_spec(&mut rng, &lane_ids));
        let (annotated, _) =
            annotate(&map, &[lane], &along, against.as_ref()).expect("sample spec is valid");
        map = annotated;
    }
    map
}

/// A random map together with its behavior graph.
pub fn sample_graph(seed: u64) -> (SceneryMap, BehaviorGraph) {
    let map = sample_map(seed);
    let graph = build_graph(&map);
    (map, graph)
}

/// A random bare grid map with lanelets but no behavior spaces.
pub fn sample_bare_map(seed: u64, columns: usize, rows: usize) -> SceneryMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let doc = bare_grid(&mut rng, columns, rows);
    let (map, diagnostics) = SceneryMap::from_doc(doc);
    assert!(diagnostics.is_empty(), "generated grid must be clean");
    map
}

fn bare_grid(rng: &mut ChaCha8Rng, columns: usize, rows: usize) -> OsmDocument {
    let mut doc = OsmDocument::new();
    let node_id = |c: usize, r: usize| (c * (rows + 1) + r + 1) as i64;
    for c in 0..=columns {
        for r in 0..=rows {
            doc.insert_node(OsmNode {
                id: node_id(c, r),
                lat: 50.0 + r as f64 * 0.001,
                lon: 8.0 + c as f64 * 0.001,
                tags: Tags::new(),
            })
            .unwrap();
        }
    }
    // Vertical bound lines, all stored northward; southbound lanes use them
    // reversed.
    let mut next_way = 1000;
    let mut line_way = vec![vec![0i64; rows]; columns + 1];
    for (c, column_ways) in line_way.iter_mut().enumerate() {
        for (r, way_slot) in column_ways.iter_mut().enumerate() {
            let id = next_way;
            next_way += 1;
            let mut tags = Tags::new();
            if c == 0 || c == columns {
                tags.insert(schema::TAG_TYPE.to_string(), "curbstone".to_string());
            } else if rng.gen_bool(0.5) {
                tags.insert(schema::TAG_TYPE.to_string(), "line_thin".to_string());
                tags.insert(
                    schema::TAG_SUBTYPE.to_string(),
                    if rng.gen_bool(0.5) { "dashed" } else { "solid" }.to_string(),
                );
            }
            doc.insert_way(OsmWay {
                id,
                node_refs: vec![node_id(c, r), node_id(c, r + 1)],
                tags,
            })
            .unwrap();
            *way_slot = id;
        }
    }

    let mut next_relation = 2000;
    for c in 0..columns {
        let northbound = rng.gen_bool(0.5);
        let one_way = rng.gen_bool(0.4);
        // Indexes two adjacent line columns at once.
        #[allow(clippy::needless_range_loop)]
        for r in 0..rows {
            let (left, right) = if northbound {
                (line_way[c][r], line_way[c + 1][r])
            } else {
                (line_way[c + 1][r], line_way[c][r])
            };
            let mut tags = Tags::new();
            tags.insert(
                schema::TAG_TYPE.to_string(),
                schema::REL_LANELET.to_string(),
            );
            tags.insert(
                schema::TAG_SUBTYPE.to_string(),
                if rng.gen_bool(0.15) {
                    "bicycle_lane"
                } else {
                    "road"
                }
                .to_string(),
            );
            tags.insert(
                schema::TAG_ONE_WAY.to_string(),
                if one_way { "yes" } else { "no" }.to_string(),
            );
            doc.insert_relation(OsmRelation {
                id: next_relation,
                members: vec![
                    OsmMember {
                        kind: ElementKind::Way,
                        ref_id: left,
                        role: schema::ROLE_LEFT.to_string(),
                    },
                    OsmMember {
                        kind: ElementKind::Way,
                        ref_id: right,
                        role: schema::ROLE_RIGHT.to_string(),
                    },
                ],
                tags,
            })
            .unwrap();
            next_relation += 1;
        }
    }
    doc
}

fn sample_condition(rng: &mut ChaCha8Rng) -> Condition {
    match rng.gen_range(0..5) {
        0 => Condition::NoStagnantTraffic,
        1 => Condition::TrafficLight(TrafficLightState::Active),
        2 => Condition::TrafficLight(TrafficLightState::Inactive),
        3 => Condition::time_window(22 * 60, 6 * 60).unwrap(),
        _ => Condition::Weather("rain".to_string()),
    }
}

fn sample_crossing_demands(rng: &mut ChaCha8Rng) -> Vec<CrossingDemand> {
    let mut demands = vec![match rng.gen_range(0..10) {
        0..=4 => CrossingDemand::allowed(),
        5..=6 => CrossingDemand::conditional(sample_condition(rng)),
        7..=8 => CrossingDemand::prohibited(),
        _ => CrossingDemand::not_possible(),
    }];
    if rng.gen_bool(0.15) {
        let extra = CrossingDemand::conditional(sample_condition(rng));
        if !demands.contains(&extra) {
            demands.push(extra);
        }
    }
    demands
}

/// A random valid behavior spec drawing from a small value pool, optionally
/// linking to the given elements.
pub fn sample_spec(rng: &mut ChaCha8Rng, linkable: &[LaneId]) -> BehaviorSpec {
    let mut speed = vec![SpeedDemand {
        limit: SpeedLimitKind::Maximum,
        value: SpeedKmh::new(*[30.0, 50.0, 70.0].choose(rng).unwrap()).unwrap(),
        condition: None,
    }];
    if rng.gen_bool(0.2) {
        speed.push(SpeedDemand {
            limit: SpeedLimitKind::Maximum,
            value: SpeedKmh::new(20.0).unwrap(),
            condition: Some(sample_condition(rng)),
        });
    }
    if rng.gen_bool(0.15) {
        speed.push(SpeedDemand {
            limit: SpeedLimitKind::Minimum,
            value: SpeedKmh::new(*[5.0, 90.0].choose(rng).unwrap()).unwrap(),
            condition: None,
        });
    }

    let mut overtake = vec![OvertakeDemand {
        permitted: rng.gen_bool(0.7),
        condition: None,
    }];
    if rng.gen_bool(0.15) {
        overtake.push(OvertakeDemand {
            permitted: false,
            condition: Some(sample_condition(rng)),
        });
    }

    let reservation = match rng.gen_range(0..10) {
        0..=5 => ReservationDemandSpec {
            kind: Some(ReservationKind::Own),
            ..ReservationDemandSpec::default()
        },
        6..=8 => {
            let mut entitled = BTreeSet::new();
            entitled.insert(if rng.gen_bool(0.6) {
                ParticipantType::Pedestrian
            } else {
                ParticipantType::Bicycle
            });
            let link_count = rng.gen_range(0..=linkable.len().min(2));
            let links = linkable
                .choose_multiple(rng, link_count)
                .map(|lane| (lane.0, false))
                .collect();
            ReservationDemandSpec {
                kind: Some(ReservationKind::Externally),
                entitled,
                links,
                condition: None,
            }
        }
        _ => ReservationDemandSpec {
            kind: Some(ReservationKind::None),
            ..ReservationDemandSpec::default()
        },
    };

    BehaviorSpec {
        speed,
        overtake,
        boundary_long: sample_crossing_demands(rng),
        boundary_left: sample_crossing_demands(rng),
        boundary_right: sample_crossing_demands(rng),
        reservation: vec![reservation],
        provisional: false,
    }
}

/// A random standalone behavior space drawing from a small pool, so
/// structurally equal duplicates occur frequently. Identifiers are random
/// and irrelevant to demand content.
pub fn sample_space(seed: u64) -> AtomicBehaviorSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let along = sample_behavior(&mut rng, TravelDirection::Along);
    let against = rng
        .gen_bool(0.5)
        .then(|| sample_behavior(&mut rng, TravelDirection::Against));
    AtomicBehaviorSpace::new(
        SpaceId(rng.gen_range(1..10_000)),
        vec![LaneId(rng.gen_range(1..10_000))],
        along,
        against,
    )
    .expect("sampled space is valid")
}

fn sample_behavior(rng: &mut ChaCha8Rng, direction: TravelDirection) -> Behavior {
    let spec = sample_spec(rng, &[]);
    let mut reservation_demands = Vec::new();
    for demand in &spec.reservation {
        reservation_demands.push(ReservationDemand {
            kind: demand.kind.unwrap(),
            entitled: demand.entitled.clone(),
            links: if demand.kind == Some(ReservationKind::Externally) && rng.gen_bool(0.5) {
                vec![ReservationLink::origin(LinkTarget::Lane(LaneId(
                    rng.gen_range(1..10_000),
                )))]
            } else {
                Vec::new()
            },
            condition: demand.condition.clone(),
        });
    }
    Behavior {
        direction,
        speed: SpeedAttribute::new(spec.speed).unwrap(),
        boundary_long: crate::attributes::BoundaryAttribute::new(spec.boundary_long, Vec::new())
            .unwrap(),
        boundary_left: crate::attributes::BoundaryAttribute::new(spec.boundary_left, Vec::new())
            .unwrap(),
        boundary_right: crate::attributes::BoundaryAttribute::new(spec.boundary_right, Vec::new())
            .unwrap(),
        reservation: ReservationAttribute::new(reservation_demands).unwrap(),
        overtake: OvertakeAttribute::new(spec.overtake).unwrap(),
    }
}

/// A random capability profile.
pub fn sample_profile(seed: u64) -> CapabilityProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut yieldable = BTreeSet::new();
    for participant in [
        ParticipantType::MotorVehicle,
        ParticipantType::Pedestrian,
        ParticipantType::Bicycle,
        ParticipantType::RailVehicle,
    ] {
        if rng.gen_bool(0.5) {
            yieldable.insert(participant);
        }
    }
    let mut supported_conditions = BTreeSet::new();
    for kind in crate::condition::ConditionKind::ALL {
        if rng.gen_bool(0.6) {
            supported_conditions.insert(kind);
        }
    }
    CapabilityProfile {
        max_speed_kmh: *[20.0, 60.0, 130.0, 400.0].choose(&mut rng).unwrap(),
        yieldable,
        supported_conditions,
        may_enter_externally_reserved: rng.gen_bool(0.3),
        may_cross_conditional: rng.gen_bool(0.7),
    }
}

/// A profile that includes everything `base` can do, plus random extras.
pub fn enlarge_profile(seed: u64, base: &CapabilityProfile) -> CapabilityProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut enlarged = base.clone();
    if rng.gen_bool(0.5) {
        enlarged.max_speed_kmh = (enlarged.max_speed_kmh + 50.0).min(400.0);
    }
    for participant in [
        ParticipantType::MotorVehicle,
        ParticipantType::Pedestrian,
        ParticipantType::Bicycle,
        ParticipantType::RailVehicle,
    ] {
        if rng.gen_bool(0.4) {
            enlarged.yieldable.insert(participant);
        }
    }
    for kind in crate::condition::ConditionKind::ALL {
        if rng.gen_bool(0.4) {
            enlarged.supported_conditions.insert(kind);
        }
    }
    enlarged.may_enter_externally_reserved |= rng.gen_bool(0.4);
    enlarged.may_cross_conditional |= rng.gen_bool(0.4);
    enlarged
}
