//! GeoJSON export (RFC 7946) for viewers.

use serde_json::{json, Map, Value};

use crate::behavior::{Behavior, LaneKind, TravelDirection};
use crate::geometry::{node_point, resolve_lane};
use crate::graph::{resolve_space_ends, VertexId};
use crate::map::SceneryMap;
use crate::osm::schema;

impl LaneKind {
    pub fn token(&self) -> String {
        match self {
            LaneKind::VehicleLane => "vehicle_lane".to_string(),
            LaneKind::BicycleLane => "bicycle_lane".to_string(),
            LaneKind::Crosswalk => "crosswalk".to_string(),
            LaneKind::Other(label) => format!("other:{label}"),
        }
    }
}

/// One feature per lanelet: a polygon over its bounds, with the covering
/// behavior space's demands flattened into properties.
pub fn map_to_geojson(map: &SceneryMap) -> Value {
    let mut features = Vec::new();
    for lane in map.lanes() {
        let Some(resolved) = resolve_lane(map.doc(), lane) else {
            continue;
        };
        let mut ring: Vec<[f64; 2]> = Vec::new();
        for node in &resolved.left_nodes {
            if let Some(point) = node_point(map.doc(), *node) {
                ring.push([point.lon, point.lat]);
            }
        }
        for node in resolved.right_nodes.iter().rev() {
            if let Some(point) = node_point(map.doc(), *node) {
                ring.push([point.lon, point.lat]);
            }
        }
        if ring.len() < 3 {
            continue;
        }
        ring.push(ring[0]);

        let mut properties = Map::new();
        properties.insert("lanelet".to_string(), json!(lane.id.0));
        properties.insert("kind".to_string(), json!(lane.kind.token()));
        properties.insert("one_directional".to_string(), json!(lane.one_directional));
        if let Some(space_id) = map.covering_spaces(lane.id).first() {
            properties.insert("behavior_space".to_string(), json!(space_id.0));
            if let Some(space) = map.space(*space_id) {
                for direction in space.directions() {
                    let behavior = space.behavior(direction).unwrap();
                    for (key, value) in flatten_behavior_tags(behavior) {
                        properties.insert(format!("{}:{key}", direction.token()), json!(value));
                    }
                }
            }
        }

        features.push(json!({
            "type": "Feature",
            "geometry": {
                "type": "Polygon",
                "coordinates": [ring],
            },
            "properties": Value::Object(properties),
        }));
    }
    json!({
        "type": "FeatureCollection",
        "features": features,
    })
}

/// Demand tags of one behavior, flattened as the tag schema spells them.
fn flatten_behavior_tags(behavior: &Behavior) -> Vec<(String, String)> {
    let mut tags = Vec::new();
    let mut max_index = 0;
    let mut min_index = 0;
    for demand in &behavior.speed.demands {
        let (base, index) = match demand.limit {
            crate::attributes::SpeedLimitKind::Maximum => {
                max_index += 1;
                (schema::TAG_SPEED_MAX, max_index)
            }
            crate::attributes::SpeedLimitKind::Minimum => {
                min_index += 1;
                (schema::TAG_SPEED_MIN, min_index)
            }
        };
        tags.push((schema::indexed_key(base, index), demand.value.to_string()));
        if let Some(condition) = &demand.condition {
            tags.push((schema::condition_key(base, index), condition.token()));
        }
    }
    for (role, boundary) in [
        (schema::ROLE_BOUNDARY_LONG, &behavior.boundary_long),
        (schema::ROLE_BOUNDARY_LEFT, &behavior.boundary_left),
        (schema::ROLE_BOUNDARY_RIGHT, &behavior.boundary_right),
    ] {
        for (index, demand) in boundary.demands.iter().enumerate() {
            tags.push((
                schema::indexed_key(role, index + 1),
                demand.permission.token().to_string(),
            ));
            if let Some(condition) = &demand.condition {
                let key = if index == 0 {
                    format!("{role}:{}", schema::TAG_CONDITION)
                } else {
                    format!("{role}:{}:{}", schema::TAG_CONDITION, index + 1)
                };
                tags.push((key, condition.token()));
            }
        }
    }
    for (index, demand) in behavior.reservation.demands.iter().enumerate() {
        tags.push((
            schema::indexed_key(schema::TAG_RESERVATION, index + 1),
            demand.kind.token().to_string(),
        ));
        if !demand.entitled.is_empty() {
            let objects: Vec<String> = demand.entitled.iter().map(|p| p.token()).collect();
            tags.push((
                schema::indexed_key(schema::TAG_OBJECT, index + 1),
                objects.join(";"),
            ));
        }
    }
    for (index, demand) in behavior.overtake.demands.iter().enumerate() {
        tags.push((
            schema::indexed_key(schema::TAG_OVERTAKE, index + 1),
            if demand.permitted { "yes" } else { "no" }.to_string(),
        ));
        if let Some(condition) = &demand.condition {
            tags.push((
                schema::condition_key(schema::TAG_OVERTAKE, index + 1),
                condition.token(),
            ));
        }
    }
    tags
}

/// A route as a LineString overlay through the traversed spaces, when the
/// map carries geometry.
pub fn route_to_geojson(map: &SceneryMap, path: &[VertexId]) -> Option<Value> {
    let ends = resolve_space_ends(map);
    let mut coordinates: Vec<[f64; 2]> = Vec::new();
    for (index, vertex) in path.iter().enumerate() {
        let space_ends = ends.get(&vertex.space)?;
        let (enter, leave) = match vertex.direction {
            TravelDirection::Along => (space_ends.enter_along, space_ends.leave_along?),
            TravelDirection::Against => {
                let leave = space_ends.leave_along?;
                (
                    (leave.1, leave.0),
                    (space_ends.enter_along.1, space_ends.enter_along.0),
                )
            }
        };
        let midpoint = |corners: (i64, i64)| -> Option<[f64; 2]> {
            let left = node_point(map.doc(), corners.0)?;
            let right = node_point(map.doc(), corners.1)?;
            Some([(left.lon + right.lon) / 2.0, (left.lat + right.lat) / 2.0])
        };
        if index == 0 {
            coordinates.push(midpoint(enter)?);
        }
        coordinates.push(midpoint(leave)?);
    }
    if coordinates.len() < 2 {
        return None;
    }
    Some(json!({
        "type": "Feature",
        "geometry": {
            "type": "LineString",
            "coordinates": coordinates,
        },
        "properties": {
            "role": "route",
            "spaces": path.iter().map(|v| v.space.0).collect::<Vec<_>>(),
        },
    }))
}
