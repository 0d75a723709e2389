//! Document edits: lanelet splitting and longitudinal boundary linestrings.

use thiserror::Error;

use super::schema;
use super::{ElementKind, ElementRef, OsmMember, OsmNode, OsmRelation, OsmWay, Tags};
use crate::diag::Diagnostic;
use crate::geometry::{interpolate_at, node_point, resolve_lane, Point};
use crate::ids::{LaneId, LinestringId};
use crate::map::SceneryMap;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EditError {
    #[error("unknown lanelet {0}")]
    UnknownLanelet(LaneId),
    #[error("cut fraction {0} is outside (0, 1)")]
    CutOutOfRange(f64),
    #[error("lanelet {0} has missing or degenerate bound geometry")]
    MissingGeometry(LaneId),
    #[error("bound linestring {way} of lanelet {lanelet} is shared with lanelet {other}; split the neighbor first")]
    SharedBound {
        lanelet: LaneId,
        way: LinestringId,
        other: LaneId,
    },
}

/// Which end of a lanelet, in its reference direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryEnd {
    Start,
    End,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOutcome {
    pub new_lanelets: [LaneId; 2],
    pub cut_linestring: LinestringId,
    pub diagnostics: Vec<Diagnostic>,
}

/// Splits a lanelet at a fraction of its bounds' arc length. The two halves
/// replace the original; the new cut linestring joins the interpolated points
/// on both bounds and serves as the shared end/start. Relations referencing
/// the original lanelet or its bounds are rewritten to reference both halves;
/// a behavior space on the original keeps its demands (now as a two-lanelet
/// chain) and is flagged for reassignment.
pub fn split_lanelet(
    map: &SceneryMap,
    lanelet: LaneId,
    cut: f64,
) -> Result<(SceneryMap, SplitOutcome), EditError> {
    if !(cut > 0.0 && cut < 1.0) {
        return Err(EditError::CutOutOfRange(cut));
    }
    let lane = map
        .lane(lanelet)
        .ok_or(EditError::UnknownLanelet(lanelet))?;
    let mut doc = map.doc().clone();

    for other in map.lanes() {
        if other.id == lanelet {
            continue;
        }
        for way in [lane.left_bound, lane.right_bound] {
            if other.left_bound == way || other.right_bound == way {
                return Err(EditError::SharedBound {
                    lanelet,
                    way,
                    other: other.id,
                });
            }
        }
    }

    let resolved = resolve_lane(&doc, lane).ok_or(EditError::MissingGeometry(lanelet))?;

    let mut next_node = doc.next_id(ElementKind::Node);
    let mut next_way = doc.next_id(ElementKind::Way);
    let next_relation = doc.next_id(ElementKind::Relation);

    let mut split_bound = |doc: &mut super::OsmDocument,
                           way_id: LinestringId,
                           nodes: &[i64]|
     -> Result<(i64, i64, i64), EditError> {
        let points: Vec<Point> = nodes
            .iter()
            .map(|id| node_point(doc, *id))
            .collect::<Option<_>>()
            .ok_or(EditError::MissingGeometry(lanelet))?;
        let (cut_point, segment) =
            interpolate_at(&points, cut).ok_or(EditError::MissingGeometry(lanelet))?;
        let cut_node = next_node;
        next_node += 1;
        doc.insert_node(OsmNode {
            id: cut_node,
            lat: cut_point.lat,
            lon: cut_point.lon,
            tags: Tags::new(),
        })
        .expect("fresh node id");

        let tags = doc.ways[&way_id.0].tags.clone();
        let mut first: Vec<i64> = nodes[..=segment].to_vec();
        first.push(cut_node);
        let mut second: Vec<i64> = vec![cut_node];
        second.extend_from_slice(&nodes[segment + 1..]);

        doc.ways.remove(&way_id.0);
        let first_id = next_way;
        let second_id = next_way + 1;
        next_way += 2;
        doc.insert_way(OsmWay {
            id: first_id,
            node_refs: first,
            tags: tags.clone(),
        })
        .expect("fresh way id");
        doc.insert_way(OsmWay {
            id: second_id,
            node_refs: second,
            tags,
        })
        .expect("fresh way id");
        Ok((first_id, second_id, cut_node))
    };

    let (left_first, left_second, left_cut_node) =
        split_bound(&mut doc, resolved.left_way, &resolved.left_nodes)?;
    let (right_first, right_second, right_cut_node) =
        split_bound(&mut doc, resolved.right_way, &resolved.right_nodes)?;

    let cut_way = next_way;
    doc.insert_way(OsmWay {
        id: cut_way,
        node_refs: vec![left_cut_node, right_cut_node],
        tags: [(
            schema::TAG_TYPE.to_string(),
            schema::LINESTRING_VIRTUAL.to_string(),
        )]
        .into_iter()
        .collect(),
    })
    .expect("fresh way id");

    let lane_tags = doc.relations[&lanelet.0].tags.clone();
    doc.relations.remove(&lanelet.0);
    let first_lanelet = next_relation;
    let second_lanelet = next_relation + 1;
    for (id, left, right) in [
        (first_lanelet, left_first, right_first),
        (second_lanelet, left_second, right_second),
    ] {
        doc.insert_relation(OsmRelation {
            id,
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
            tags: lane_tags.clone(),
        })
        .expect("fresh relation id");
    }

    // Rewrite references: the old lanelet becomes the two halves in travel
    // order, each old bound way the two half ways.
    let mut diagnostics = Vec::new();
    let replacements: Vec<(ElementKind, i64, [i64; 2])> = vec![
        (
            ElementKind::Relation,
            lanelet.0,
            [first_lanelet, second_lanelet],
        ),
        (
            ElementKind::Way,
            resolved.left_way.0,
            [left_first, left_second],
        ),
        (
            ElementKind::Way,
            resolved.right_way.0,
            [right_first, right_second],
        ),
    ];
    for relation in doc.relations.values_mut() {
        let mut rewritten = Vec::with_capacity(relation.members.len());
        let mut touched_lanelet = false;
        for member in relation.members.drain(..) {
            match replacements
                .iter()
                .find(|(kind, id, _)| *kind == member.kind && *id == member.ref_id)
            {
                Some((kind, id, halves)) => {
                    if *kind == ElementKind::Relation && *id == lanelet.0 {
                        touched_lanelet = true;
                    }
                    for half in halves {
                        rewritten.push(OsmMember {
                            kind: member.kind,
                            ref_id: *half,
                            role: member.role.clone(),
                        });
                    }
                }
                None => rewritten.push(member),
            }
        }
        relation.members = rewritten;
        if touched_lanelet && relation.tag(schema::TAG_TYPE) == Some(schema::REL_BEHAVIOR_SPACE) {
            diagnostics.push(Diagnostic::warning(
                "behavior_space_needs_reassignment",
                vec![ElementRef::relation(relation.id)],
                format!(
                    "behavior_space {} covered lanelet {} which was split into {} and {}; review its demands",
                    relation.id, lanelet.0, first_lanelet, second_lanelet
                ),
            ));
        }
    }

    let (map, _) = SceneryMap::from_doc(doc);
    Ok((
        map,
        SplitOutcome {
            new_lanelets: [LaneId(first_lanelet), LaneId(second_lanelet)],
            cut_linestring: LinestringId(cut_way),
            diagnostics,
        },
    ))
}

/// Returns the linestring closing a lanelet's start or end, creating a
/// two-node `type=virtual` way between the bound corner nodes if no existing
/// linestring (e.g. a stop line) already connects them. Idempotent.
pub fn add_longitudinal_boundary(
    map: &SceneryMap,
    lanelet: LaneId,
    at: BoundaryEnd,
) -> Result<(SceneryMap, LinestringId, bool), EditError> {
    let lane = map
        .lane(lanelet)
        .ok_or(EditError::UnknownLanelet(lanelet))?;
    let resolved = resolve_lane(map.doc(), lane).ok_or(EditError::MissingGeometry(lanelet))?;
    let (left_corner, right_corner) = match at {
        BoundaryEnd::Start => resolved.entry_corners(),
        BoundaryEnd::End => resolved.exit_corners(),
    };

    for way in map.doc().ways.values() {
        if way.node_refs.len() < 2 {
            continue;
        }
        let first = way.node_refs[0];
        let last = *way.node_refs.last().unwrap();
        if (first == left_corner && last == right_corner)
            || (first == right_corner && last == left_corner)
        {
            return Ok((map.clone(), LinestringId(way.id), false));
        }
    }

    let mut doc = map.doc().clone();
    let way_id = doc.next_id(ElementKind::Way);
    doc.insert_way(OsmWay {
        id: way_id,
        node_refs: vec![left_corner, right_corner],
        tags: [(
            schema::TAG_TYPE.to_string(),
            schema::LINESTRING_VIRTUAL.to_string(),
        )]
        .into_iter()
        .collect(),
    })
    .expect("fresh way id");
    let (map, _) = SceneryMap::from_doc(doc);
    Ok((map, LinestringId(way_id), true))
}
