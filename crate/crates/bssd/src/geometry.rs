//! Lightweight planar geometry over document nodes.
//!
//! Coordinates are raw lat/lon degrees treated as a flat plane, which is fine
//! at desk scale; projection handling is out of scope. The one non-trivial
//! piece is per-lanelet bound orientation: shared linestrings may be stored
//! against a lanelet's reference direction, so both bounds are re-oriented by
//! matching entry/exit corners and checking handedness.

use crate::behavior::LaneElement;
use crate::ids::{LaneId, LinestringId};
use crate::osm::OsmDocument;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub lon: f64,
    pub lat: f64,
}

impl Point {
    pub fn distance(&self, other: &Point) -> f64 {
        let dx = self.lon - other.lon;
        let dy = self.lat - other.lat;
        (dx * dx + dy * dy).sqrt()
    }
}

pub fn node_point(doc: &OsmDocument, node_id: i64) -> Option<Point> {
    doc.nodes.get(&node_id).map(|n| Point {
        lon: n.lon,
        lat: n.lat,
    })
}

pub fn way_points(doc: &OsmDocument, way_id: i64) -> Option<Vec<Point>> {
    let way = doc.ways.get(&way_id)?;
    way.node_refs
        .iter()
        .map(|id| node_point(doc, *id))
        .collect()
}

pub fn polyline_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[0].distance(&w[1])).sum()
}

/// Point at `fraction` of arc length along a polyline, together with the
/// index of the segment it falls on (point lies between `index` and
/// `index + 1`).
pub fn interpolate_at(points: &[Point], fraction: f64) -> Option<(Point, usize)> {
    if points.len() < 2 || !(0.0..=1.0).contains(&fraction) {
        return None;
    }
    let total = polyline_length(points);
    if total == 0.0 {
        return None;
    }
    let mut remaining = fraction * total;
    for (index, pair) in points.windows(2).enumerate() {
        let segment = pair[0].distance(&pair[1]);
        if remaining <= segment || index == points.len() - 2 {
            let t = if segment == 0.0 {
                0.0
            } else {
                remaining / segment
            };
            return Some((
                Point {
                    lon: pair[0].lon + t * (pair[1].lon - pair[0].lon),
                    lat: pair[0].lat + t * (pair[1].lat - pair[0].lat),
                },
                index,
            ));
        }
        remaining -= segment;
    }
    None
}

/// A lanelet with both bounds re-oriented into its reference direction
/// (entry to exit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedLane {
    pub lane: LaneId,
    pub left_way: LinestringId,
    pub right_way: LinestringId,
    /// Node ids of the left bound, entry first.
    pub left_nodes: Vec<i64>,
    /// Node ids of the right bound, entry first.
    pub right_nodes: Vec<i64>,
    /// Whether each bound is used against its stored orientation.
    pub left_reversed: bool,
    pub right_reversed: bool,
}

impl ResolvedLane {
    /// Entry corner node ids as (left, right).
    pub fn entry_corners(&self) -> (i64, i64) {
        (self.left_nodes[0], self.right_nodes[0])
    }

    /// Exit corner node ids as (left, right).
    pub fn exit_corners(&self) -> (i64, i64) {
        (
            *self.left_nodes.last().unwrap(),
            *self.right_nodes.last().unwrap(),
        )
    }
}

/// Resolves a lanelet's bound orientations. Picks the orientation combination
/// with the closest entry/entry and exit/exit corner pairing; among ties the
/// one where the right bound actually lies right of the travel direction.
/// Returns `None` when geometry is missing or bounds are degenerate.
pub fn resolve_lane(doc: &OsmDocument, lane: &LaneElement) -> Option<ResolvedLane> {
    let left = doc.ways.get(&lane.left_bound.0)?;
    let right = doc.ways.get(&lane.right_bound.0)?;
    if left.node_refs.len() < 2 || right.node_refs.len() < 2 {
        return None;
    }
    let left_points: Vec<Point> = left
        .node_refs
        .iter()
        .map(|id| node_point(doc, *id))
        .collect::<Option<_>>()?;
    let right_points: Vec<Point> = right
        .node_refs
        .iter()
        .map(|id| node_point(doc, *id))
        .collect::<Option<_>>()?;

    let mut best: Option<(f64, bool, usize, bool, bool)> = None;
    for (combo, (left_reversed, right_reversed)) in
        [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .enumerate()
    {
        let (lf, ll) = endpoints(&left_points, left_reversed);
        let (rf, rl) = endpoints(&right_points, right_reversed);
        let score = lf.distance(&rf) + ll.distance(&rl);
        // Right bound should lie to the right of the travel heading.
        let heading = (ll.lon - lf.lon, ll.lat - lf.lat);
        let toward_right = (rf.lon - lf.lon, rf.lat - lf.lat);
        let cross = heading.0 * toward_right.1 - heading.1 * toward_right.0;
        let handed = cross < 0.0;
        let candidate = (score, handed, combo, left_reversed, right_reversed);
        best = Some(match best {
            None => candidate,
            Some(current) => {
                let (best_score, best_handed, best_combo, ..) = current;
                if score + 1e-12 < best_score
                    || ((score - best_score).abs() <= 1e-12
                        && ((handed && !best_handed)
                            || (handed == best_handed && combo < best_combo)))
                {
                    candidate
                } else {
                    current
                }
            }
        });
    }

    let (_, _, _, left_reversed, right_reversed) = best?;
    let mut left_nodes = left.node_refs.clone();
    if left_reversed {
        left_nodes.reverse();
    }
    let mut right_nodes = right.node_refs.clone();
    if right_reversed {
        right_nodes.reverse();
    }
    Some(ResolvedLane {
        lane: lane.id,
        left_way: lane.left_bound,
        right_way: lane.right_bound,
        left_nodes,
        right_nodes,
        left_reversed,
        right_reversed,
    })
}

fn endpoints(points: &[Point], reversed: bool) -> (Point, Point) {
    if reversed {
        (*points.last().unwrap(), points[0])
    } else {
        (points[0], *points.last().unwrap())
    }
}

/// A lanelet chain walked head to tail. `aligned` is true when a member's
/// reference direction matches the chain's travel direction (the head's
/// reference direction).
#[derive(Debug, Clone)]
pub(crate) struct ChainWalk {
    pub members: Vec<(ResolvedLane, bool)>,
    /// Travel-ordered (left, right) entry corner node ids.
    pub enter: (i64, i64),
    /// Travel-ordered (left, right) exit corner node ids; `None` when the
    /// chain breaks.
    pub leave: Option<(i64, i64)>,
}

/// Walks an ordered lanelet chain, resolving each member's travel sense by
/// matching corner node pairs. Returns `None` when any member's geometry is
/// unresolvable.
pub(crate) fn walk_chain(doc: &OsmDocument, lanes: &[&LaneElement]) -> Option<ChainWalk> {
    let resolved: Vec<ResolvedLane> = lanes
        .iter()
        .map(|lane| resolve_lane(doc, lane))
        .collect::<Option<_>>()?;
    let head = resolved.first()?;
    let enter = head.entry_corners();
    let mut leave = head.exit_corners();
    let mut members = vec![(head.clone(), true)];
    let mut broken = false;
    for lane in &resolved[1..] {
        let exit = lane.exit_corners();
        if leave == lane.entry_corners() {
            members.push((lane.clone(), true));
            leave = exit;
        } else if leave == (exit.1, exit.0) {
            members.push((lane.clone(), false));
            let entry = lane.entry_corners();
            leave = (entry.1, entry.0);
        } else {
            broken = true;
            break;
        }
    }
    Some(ChainWalk {
        members,
        enter,
        leave: (!broken).then_some(leave),
    })
}
