//! Structural validation rules over a sealed map and its behavior graph.
//!
//! Five numbered rules check coverage (V-RQ1), attribute structure (V-RQ2),
//! graph/topology consistency (V-RQ3), demand-content consistency (V-RQ4)
//! and annotation coverage (V-RQ5); auxiliary V-W rules carry cross-layer
//! warnings. Findings are data, deterministic and ordered; rules never abort
//! validation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::behavior::BoundarySide;
use crate::diag::Severity;
use crate::fingerprint::behavior_space_fingerprint;
use crate::graph::{self, BehaviorGraph, VertexId};
use crate::ids::SpaceId;
use crate::map::SceneryMap;
use crate::osm::ElementRef;

/// Registered rule identifiers.
pub const RULES: [&str; 8] = [
    "V-RQ1", "V-RQ2", "V-RQ3", "V-RQ4", "V-RQ5", "V-W01", "V-W02", "V-W03",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub rule: &'static str,
    pub severity: Severity,
    pub subjects: Vec<String>,
    pub message: String,
    #[serde(skip)]
    pub code: &'static str,
}

impl Finding {
    fn new(
        rule: &'static str,
        severity: Severity,
        code: &'static str,
        subjects: Vec<ElementRef>,
        message: String,
    ) -> Finding {
        Finding {
            rule,
            severity,
            subjects: subjects.iter().map(|s| s.to_string()).collect(),
            message,
            code,
        }
    }

    /// One-line rendering, as printed by the command line front end.
    pub fn render_line(&self) -> String {
        format!(
            "{} {} [{}] {}",
            self.severity,
            self.rule,
            self.subjects.join(", "),
            self.message
        )
    }
}

/// Number of error-severity findings.
pub fn error_count(findings: &[Finding]) -> usize {
    findings
        .iter()
        .filter(|f| f.severity == Severity::Error)
        .count()
}

/// Runs every rule. Deterministic: identical inputs produce an identical
/// findings list.
pub fn validate(map: &SceneryMap, graph: &BehaviorGraph) -> Vec<Finding> {
    let mut findings = Vec::new();
    rule_rq1(map, &mut findings);
    rule_rq2(map, &mut findings);
    rule_rq3(map, graph, &mut findings);
    rule_rq4(map, graph, &mut findings);
    rule_rq5(map, &mut findings);
    rule_w01(map, &mut findings);
    rule_w02(map, &mut findings);
    rule_w03(map, &mut findings);
    findings
}

/// V-RQ1: every regular-motion-space lanelet is referenced by exactly one
/// behavior space.
fn rule_rq1(map: &SceneryMap, findings: &mut Vec<Finding>) {
    for lane in map.lanes() {
        if !lane.kind.is_regular_motion_space() {
            continue;
        }
        let covering = map.covering_spaces(lane.id);
        match covering.len() {
            0 => findings.push(Finding::new(
                "V-RQ1",
                Severity::Error,
                "uncovered_lanelet",
                vec![ElementRef::relation(lane.id.0)],
                format!("lanelet {} is not covered by any behavior space", lane.id),
            )),
            1 => {}
            _ => {
                let mut subjects = vec![ElementRef::relation(lane.id.0)];
                subjects.extend(covering.iter().map(|s| ElementRef::relation(s.0)));
                findings.push(Finding::new(
                    "V-RQ1",
                    Severity::Error,
                    "duplicated_coverage",
                    subjects,
                    format!(
                        "lanelet {} is covered by {} behavior spaces",
                        lane.id,
                        covering.len()
                    ),
                ));
            }
        }
    }
}

/// V-RQ2: behavioral attribute structure. Extraction already checks every
/// model invariant and records violations as defects; this rule reports them.
fn rule_rq2(map: &SceneryMap, findings: &mut Vec<Finding>) {
    let mut defects: Vec<_> = map.defects().to_vec();
    defects.sort();
    for defect in defects {
        findings.push(Finding {
            rule: "V-RQ2",
            severity: Severity::Error,
            subjects: defect.subjects.iter().map(|s| s.to_string()).collect(),
            message: format!("{}: {}", defect.code, defect.message),
            code: defect.code,
        });
    }
}

/// V-RQ3: the graph mirrors the map's lanelet topology. Vertices must match
/// the directional behaviors present; longitudinal edges must match the
/// geometric successor relation, both ways.
fn rule_rq3(map: &SceneryMap, graph: &BehaviorGraph, findings: &mut Vec<Finding>) {
    let (expected_vertices, expected_longitudinal, _) = graph::compute_topology(map);
    let actual_vertices: BTreeSet<VertexId> = graph.vertices().collect();

    for vertex in expected_vertices.keys() {
        if !actual_vertices.contains(vertex) {
            findings.push(Finding::new(
                "V-RQ3",
                Severity::Error,
                "missing_vertex",
                vec![ElementRef::relation(vertex.space.0)],
                format!("behavior {vertex} exists in the map but has no graph vertex"),
            ));
        }
    }
    for vertex in &actual_vertices {
        if !expected_vertices.contains_key(vertex) {
            findings.push(Finding::new(
                "V-RQ3",
                Severity::Error,
                "phantom_vertex",
                vec![ElementRef::relation(vertex.space.0)],
                format!("graph vertex {vertex} has no directional behavior in the map"),
            ));
        }
    }

    // Edge comparison is restricted to vertices present on both sides, so a
    // vertex discrepancy is reported once, not once per incident edge.
    let comparable: BTreeSet<VertexId> = expected_vertices
        .keys()
        .filter(|v| actual_vertices.contains(v))
        .copied()
        .collect();
    let mut expected_edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for (from, successors) in &expected_longitudinal {
        for to in successors {
            if comparable.contains(from) && comparable.contains(to) {
                expected_edges.insert((*from, *to));
            }
        }
    }
    let actual_edges: BTreeSet<(VertexId, VertexId)> = graph
        .longitudinal_edges()
        .into_iter()
        .filter(|(from, to)| comparable.contains(from) && comparable.contains(to))
        .collect();

    for (from, to) in expected_edges.difference(&actual_edges) {
        findings.push(Finding::new(
            "V-RQ3",
            Severity::Error,
            "missing_longitudinal_edge",
            vec![
                ElementRef::relation(from.space.0),
                ElementRef::relation(to.space.0),
            ],
            format!("lanelet succession {from} -> {to} has no longitudinal edge"),
        ));
    }
    for (from, to) in actual_edges.difference(&expected_edges) {
        findings.push(Finding::new(
            "V-RQ3",
            Severity::Error,
            "phantom_longitudinal_edge",
            vec![
                ElementRef::relation(from.space.0),
                ElementRef::relation(to.space.0),
            ],
            format!("longitudinal edge {from} -> {to} has no witnessing lanelet succession"),
        ));
    }
}

/// V-RQ4: demand-content consistency. Reports fingerprint equivalence
/// classes (informational) and warns when laterally adjacent spaces disagree
/// on the shared boundary's crossing demands.
fn rule_rq4(map: &SceneryMap, graph: &BehaviorGraph, findings: &mut Vec<Finding>) {
    let mut classes: BTreeMap<String, Vec<SpaceId>> = BTreeMap::new();
    for space in map.spaces() {
        classes
            .entry(behavior_space_fingerprint(space).to_string())
            .or_default()
            .push(space.id);
    }
    let mut class_list: Vec<(Vec<SpaceId>, String)> = classes
        .into_iter()
        .filter(|(_, members)| members.len() >= 2)
        .map(|(fingerprint, members)| (members, fingerprint))
        .collect();
    class_list.sort();
    for (members, fingerprint) in class_list {
        let subjects = members.iter().map(|s| ElementRef::relation(s.0)).collect();
        findings.push(Finding::new(
            "V-RQ4",
            Severity::Info,
            "equivalent_demands",
            subjects,
            format!(
                "{} behavior spaces impose identical behavioral demands (fingerprint {})",
                members.len(),
                &fingerprint[..12]
            ),
        ));
    }

    let mut reported: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for vertex in graph.vertices() {
        let Ok(neighbors) = graph.lateral_neighbors(vertex) else {
            continue;
        };
        for (side, neighbor) in [
            (BoundarySide::Left, neighbors.left),
            (BoundarySide::Right, neighbors.right),
        ] {
            let Some(neighbor) = neighbor else { continue };
            let Ok(reciprocal) = graph.lateral_neighbors(neighbor) else {
                continue;
            };
            let neighbor_side = if reciprocal.left == Some(vertex) {
                BoundarySide::Left
            } else if reciprocal.right == Some(vertex) {
                BoundarySide::Right
            } else {
                continue;
            };
            let pair = if vertex < neighbor {
                (vertex, neighbor)
            } else {
                (neighbor, vertex)
            };
            if !reported.insert(pair) {
                continue;
            }
            let own = graph.behavior(vertex).map(|b| &b.boundary(side).demands);
            let other = graph
                .behavior(neighbor)
                .map(|b| &b.boundary(neighbor_side).demands);
            if let (Some(own), Some(other)) = (own, other) {
                if own != other {
                    findings.push(Finding::new(
                        "V-RQ4",
                        Severity::Warning,
                        "asymmetric_lateral_demand",
                        vec![
                            ElementRef::relation(pair.0.space.0),
                            ElementRef::relation(pair.1.space.0),
                        ],
                        format!(
                            "spaces {} and {} disagree on the crossing demands of their shared lateral boundary",
                            pair.0, pair.1
                        ),
                    ));
                }
            }
        }
    }
}

/// V-RQ5: coverage report. Universality cannot be proven; this reports the
/// annotated fraction and counts unparseable constructs as falsification
/// evidence.
fn rule_rq5(map: &SceneryMap, findings: &mut Vec<Finding>) {
    let regular: Vec<_> = map
        .lanes()
        .filter(|l| l.kind.is_regular_motion_space())
        .collect();
    if regular.is_empty() {
        return;
    }
    let annotated = regular
        .iter()
        .filter(|l| {
            map.covering_spaces(l.id)
                .iter()
                .any(|s| map.space(*s).is_some())
        })
        .count();
    let defects = map.defects().len();
    let mut message = format!(
        "{annotated} of {} regular-motion-space lanelets carry a complete behavior space ({:.1}%)",
        regular.len(),
        100.0 * annotated as f64 / regular.len() as f64
    );
    if defects > 0 {
        message.push_str(&format!("; {defects} constructs failed to parse"));
    }
    findings.push(Finding::new(
        "V-RQ5",
        Severity::Info,
        "coverage",
        Vec::new(),
        message,
    ));
}

/// V-W01: structural diagnostics from loading, e.g. dangling references in
/// non-BSSD content.
fn rule_w01(map: &SceneryMap, findings: &mut Vec<Finding>) {
    let mut diagnostics: Vec<_> = map.structural_diagnostics().to_vec();
    diagnostics.sort();
    for diagnostic in diagnostics {
        findings.push(Finding {
            rule: "V-W01",
            severity: Severity::Warning,
            subjects: diagnostic.subjects.iter().map(|s| s.to_string()).collect(),
            message: format!("{}: {}", diagnostic.code, diagnostic.message),
            code: diagnostic.code,
        });
    }
}

/// V-W02: a behavior space spanning lanelets of different kinds is suspicious
/// but not forbidden.
fn rule_w02(map: &SceneryMap, findings: &mut Vec<Finding>) {
    for space in map.spaces() {
        let kinds: BTreeSet<_> = space
            .lanes
            .iter()
            .filter_map(|l| map.lane(*l).map(|lane| lane.kind.clone()))
            .collect();
        if kinds.len() > 1 {
            findings.push(Finding::new(
                "V-W02",
                Severity::Warning,
                "mixed_kind_space",
                vec![ElementRef::relation(space.id.0)],
                format!(
                    "behavior space {} spans lanelets of {} different kinds",
                    space.id,
                    kinds.len()
                ),
            ));
        }
    }
}

/// V-W03: lanelet chains that cannot be walked head to tail.
fn rule_w03(map: &SceneryMap, findings: &mut Vec<Finding>) {
    for (space_id, ends) in graph::resolve_space_ends(map) {
        if ends.broken_chain {
            findings.push(Finding::new(
                "V-W03",
                Severity::Warning,
                "broken_chain",
                vec![ElementRef::relation(space_id.0)],
                format!("behavior space {space_id} has a lanelet chain with non-adjacent members"),
            ));
        }
    }
}

/// Renders findings as a JSON array with exactly the fields rule, severity,
/// subjects and message.
pub fn findings_to_json(findings: &[Finding]) -> String {
    serde_json::to_string_pretty(findings).expect("findings serialize")
}

/// For each direction of travel, checks that lateral mutuality holds:
/// `lateral_left(v) = w` implies `lateral_right(w) = v` when both vertices
/// travel the same orientation. Used by tests.
pub fn check_lateral_mutuality(graph: &BehaviorGraph) -> Vec<(VertexId, VertexId)> {
    let mut violations = Vec::new();
    for vertex in graph.vertices() {
        let neighbors = graph.lateral_neighbors(vertex).unwrap();
        if let Some(left) = neighbors.left {
            if left.direction == vertex.direction {
                let reciprocal = graph.lateral_neighbors(left).unwrap();
                if reciprocal.right != Some(vertex) {
                    violations.push((vertex, left));
                }
            }
        }
        if let Some(right) = neighbors.right {
            if right.direction == vertex.direction {
                let reciprocal = graph.lateral_neighbors(right).unwrap();
                if reciprocal.left != Some(vertex) {
                    violations.push((vertex, right));
                }
            }
        }
    }
    violations
}
