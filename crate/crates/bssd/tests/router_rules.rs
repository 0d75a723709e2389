//! Capability routing: admissibility truth table, fixture routes and the
//! exhaustive path-enumeration oracle.

use std::collections::BTreeSet;

use bssd::attributes::{CrossingDemand, CrossingPermission, ParticipantType};
use bssd::condition::{Condition, ConditionKind};
use bssd::graph::{build_graph, BehaviorGraph, VertexId};
use bssd::router::{
    admissible_edge, admissible_vertex, crossing_admissible, plan_route, Admissibility,
    CapabilityProfile, RouteError, RouteOutcome,
};
use bssd::sample::{enlarge_profile, sample_graph, sample_profile};
use bssd::{AttributeName, SpaceId};

mod common;
use common::{load_fixture, SPACE_A};

fn along(space: i64) -> VertexId {
    VertexId::along(SpaceId(space))
}

/// Exhaustive oracle: all simple paths, filtered by admissibility, minimal
/// in hops, lexicographically smallest. Written against the public
/// admissibility predicates only.
fn brute_force_route(
    graph: &BehaviorGraph,
    from: VertexId,
    to: VertexId,
    profile: &CapabilityProfile,
) -> Option<Vec<VertexId>> {
    fn neighbors(graph: &BehaviorGraph, vertex: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = graph.successors(vertex).unwrap().to_vec();
        let lateral = graph.lateral_neighbors(vertex).unwrap();
        out.extend(lateral.left);
        out.extend(lateral.right);
        out.sort();
        out.dedup();
        out
    }
    fn explore(
        graph: &BehaviorGraph,
        profile: &CapabilityProfile,
        path: &mut Vec<VertexId>,
        visited: &mut BTreeSet<VertexId>,
        to: VertexId,
        best: &mut Option<Vec<VertexId>>,
    ) {
        let current = *path.last().unwrap();
        if current == to {
            let better = match best {
                None => true,
                Some(best_path) => {
                    path.len() < best_path.len()
                        || (path.len() == best_path.len() && path.as_slice() < best_path.as_slice())
                }
            };
            if better {
                *best = Some(path.clone());
            }
            return;
        }
        for next in neighbors(graph, current) {
            if visited.contains(&next) {
                continue;
            }
            if !admissible_edge(graph, current, next, profile)
                .unwrap()
                .is_admissible()
            {
                continue;
            }
            if !admissible_vertex(graph, next, profile)
                .unwrap()
                .is_admissible()
            {
                continue;
            }
            visited.insert(next);
            path.push(next);
            explore(graph, profile, path, visited, to, best);
            path.pop();
            visited.remove(&next);
        }
    }

    if !admissible_vertex(graph, from, profile)
        .unwrap()
        .is_admissible()
    {
        return None;
    }
    let mut best = None;
    explore(
        graph,
        profile,
        &mut vec![from],
        &mut BTreeSet::from([from]),
        to,
        &mut best,
    );
    best
}

fn restricted_profile() -> CapabilityProfile {
    // Can handle conditional crossings and free-flow conditions, but cannot
    // yield to pedestrians.
    CapabilityProfile {
        max_speed_kmh: 130.0,
        yieldable: [ParticipantType::MotorVehicle, ParticipantType::Bicycle]
            .into_iter()
            .collect(),
        supported_conditions: ConditionKind::ALL.into_iter().collect(),
        may_enter_externally_reserved: false,
        may_cross_conditional: true,
    }
}

#[test]
fn crossing_truth_table_matches_the_brute_force_predicate() {
    // Independent truth table over the small (demand, profile) domain.
    let conditions = [
        None,
        Some(Condition::NoStagnantTraffic),
        Some(Condition::weather("rain").unwrap()),
    ];
    let permissions = [
        CrossingPermission::Allowed,
        CrossingPermission::Conditional,
        CrossingPermission::Prohibited,
        CrossingPermission::NotPossible,
    ];
    let mut checked = 0;
    for permission in permissions {
        for condition in &conditions {
            if (permission == CrossingPermission::Conditional) != condition.is_some() {
                continue;
            }
            let demand = CrossingDemand {
                permission,
                condition: condition.clone(),
            };
            for seed in 0..40u64 {
                let profile = sample_profile(seed);
                // Oracle: spelled out case by case.
                let expected = match permission {
                    CrossingPermission::Allowed => true,
                    CrossingPermission::Prohibited | CrossingPermission::NotPossible => false,
                    CrossingPermission::Conditional => {
                        let kind = condition.as_ref().unwrap().kind();
                        profile.may_cross_conditional
                            && profile.supported_conditions.contains(&kind)
                    }
                };
                let actual = crossing_admissible(
                    std::slice::from_ref(&demand),
                    AttributeName::BoundaryLong,
                    &profile,
                )
                .is_admissible();
                assert_eq!(actual, expected, "{demand:?} under {profile:?}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 200);
}

#[test]
fn full_profile_is_blocked_only_by_physical_impossibility() {
    let profile = CapabilityProfile::full();
    let map = load_fixture("exampleB.osm");
    let graph = build_graph(&map);
    for vertex in graph.vertices() {
        assert!(admissible_vertex(&graph, vertex, &profile)
            .unwrap()
            .is_admissible());
    }
    let not_possible = crossing_admissible(
        &[CrossingDemand::not_possible()],
        AttributeName::BoundaryRight,
        &profile,
    );
    assert!(!not_possible.is_admissible());
}

#[test]
fn pedestrian_reservation_blocks_the_restricted_profile() {
    let map = load_fixture("exampleA.osm");
    let graph = build_graph(&map);
    let verdict =
        admissible_vertex(&graph, VertexId::along(SPACE_A), &restricted_profile()).unwrap();
    match verdict {
        Admissibility::Inadmissible(reason) => {
            assert_eq!(reason.attribute, AttributeName::Reservation);
            assert!(reason.demand.contains("externally"));
            assert!(reason.demand.contains("pedestrian"));
        }
        Admissibility::Admissible => panic!("space A must demand pedestrian yield"),
    }
    assert!(matches!(
        admissible_vertex(&graph, along(9999), &restricted_profile()),
        Err(RouteError::UnknownVertex(_))
    ));
}

#[test]
fn right_turn_requires_the_pedestrian_yield_capability() {
    let map = load_fixture("exampleA.osm");
    let graph = build_graph(&map);
    let from = along(1001);
    let to = along(1008);

    let full = CapabilityProfile::full();
    let outcome = plan_route(&graph, from, to, &full).unwrap();
    let route = outcome.route().expect("full capability reaches the target");
    assert_eq!(
        route.path,
        vec![along(1001), along(1005), along(1007), along(1008)]
    );
    // Nothing on the right-turn path is rejected for the full profile.
    assert!(route
        .blocked_alternatives
        .iter()
        .all(|b| b.vertex != VertexId::along(SPACE_A)));

    let outcome = plan_route(&graph, from, to, &restricted_profile()).unwrap();
    match &outcome {
        RouteOutcome::NoRoute {
            blocked_alternatives,
        } => {
            assert!(blocked_alternatives
                .iter()
                .any(|b| b.vertex == VertexId::along(SPACE_A)
                    && b.attribute == AttributeName::Reservation));
        }
        RouteOutcome::Route(route) => {
            panic!("restricted profile must not traverse space A: {route:?}")
        }
    }
}

#[test]
fn identity_route_is_a_single_vertex() {
    let map = load_fixture("exampleA.osm");
    let graph = build_graph(&map);
    let outcome = plan_route(&graph, along(1001), along(1001), &restricted_profile()).unwrap();
    let route = outcome.route().unwrap();
    assert_eq!(route.path, vec![along(1001)]);
    assert!(route.blocked_alternatives.is_empty());
    assert!(matches!(
        plan_route(&graph, along(1001), along(9999), &CapabilityProfile::full()),
        Err(RouteError::UnknownVertex(_))
    ));
}

#[test]
fn planner_matches_exhaustive_enumeration() {
    let mut routes_found = 0;
    for seed in 0..60u64 {
        let map = bssd::sample::sample_map_sized(
            seed,
            1 + (seed as usize % 2),
            1 + (seed as usize / 2 % 3),
        );
        let graph = build_graph(&map);
        if graph.vertex_count() == 0 || graph.vertex_count() > 12 {
            continue;
        }
        let vertices: Vec<VertexId> = graph.vertices().collect();
        let profile = sample_profile(seed.wrapping_mul(31) + 7);
        for (i, from) in vertices.iter().enumerate() {
            let to = vertices[(i * 7 + 3) % vertices.len()];
            let expected = brute_force_route(&graph, *from, to, &profile);
            let actual = plan_route(&graph, *from, to, &profile).unwrap();
            match (expected, actual.route()) {
                (None, None) => {}
                (Some(path), Some(route)) => {
                    assert_eq!(route.path, path, "seed {seed} {from}->{to}");
                    routes_found += 1;
                }
                (expected, actual) => {
                    panic!("seed {seed} {from}->{to}: oracle {expected:?} vs {actual:?}")
                }
            }
        }
    }
    assert!(routes_found > 50, "only {routes_found} routes exercised");
}

#[test]
fn enlarging_a_profile_never_hurts() {
    let mut shrunk = 0;
    for seed in 0..80u64 {
        let (_, graph) = sample_graph(seed);
        if graph.vertex_count() == 0 {
            continue;
        }
        let base = sample_profile(seed + 1000);
        let bigger = enlarge_profile(seed + 2000, &base);
        assert!(bigger.includes(&base));

        // Element-wise monotonicity.
        for vertex in graph.vertices() {
            if admissible_vertex(&graph, vertex, &base)
                .unwrap()
                .is_admissible()
            {
                assert!(admissible_vertex(&graph, vertex, &bigger)
                    .unwrap()
                    .is_admissible());
            }
        }

        // Hop-count monotonicity.
        let vertices: Vec<VertexId> = graph.vertices().collect();
        for (i, from) in vertices.iter().enumerate() {
            let to = vertices[(i * 5 + 1) % vertices.len()];
            let hops = |profile: &CapabilityProfile| -> Option<usize> {
                plan_route(&graph, *from, to, profile)
                    .unwrap()
                    .route()
                    .map(|r| r.path.len() - 1)
            };
            match (hops(&base), hops(&bigger)) {
                (Some(base_hops), Some(big_hops)) => {
                    assert!(big_hops <= base_hops, "seed {seed} {from}->{to}");
                }
                (Some(_), None) => panic!("seed {seed} {from}->{to}: route lost"),
                (None, _) => shrunk += 1,
            }
        }
    }
    assert!(shrunk > 0, "sampling never produced a blocked base route");
}

#[test]
fn lane_changes_are_routable_steps() {
    // The crossing section of the second fixture allows a conditional lane
    // change into the bicycle protection lane; the route may use it.
    let map = load_fixture("exampleB.osm");
    let graph = build_graph(&map);
    let from = along(3007); // vehicle lane before the crosswalk
    let to = along(3012); // bicycle lane after the crosswalk
    let outcome = plan_route(&graph, from, to, &CapabilityProfile::full()).unwrap();
    let route = outcome.route().expect("lane change route exists");
    assert!(route.path.len() >= 3);
    // At least one step is lateral.
    let lateral_steps = route
        .path
        .windows(2)
        .filter(|pair| {
            !matches!(
                graph.edge(pair[0], pair[1]),
                Some((bssd::graph::EdgeKind::LongitudinalSuccessor, _))
            )
        })
        .count();
    assert!(lateral_steps >= 1, "{:?}", route.path);
    // Sequencing the route exposes each step's entry demands.
    let steps = graph.sequence_demands(&route.path).unwrap();
    assert_eq!(steps.len(), route.path.len());

    assert!(matches!(
        admissible_edge(&graph, from, to, &CapabilityProfile::full()),
        Err(RouteError::UnknownEdge(_, _))
    ));
}

#[test]
fn route_json_shape_is_stable() {
    let map = load_fixture("exampleA.osm");
    let graph = build_graph(&map);
    let outcome = plan_route(&graph, along(1001), along(1008), &CapabilityProfile::full()).unwrap();
    let json = outcome.to_json();
    assert_eq!(json["path"][0]["space"], 1001);
    assert_eq!(json["path"][0]["direction"], "along");
    assert_eq!(json["path"].as_array().unwrap().len(), 4);

    let outcome = plan_route(&graph, along(1001), along(1008), &restricted_profile()).unwrap();
    let json = outcome.to_json();
    assert!(json["path"].is_null());
    assert_eq!(json["blocked_alternatives"][0]["space"], 1007);
}
