//! Validator behavior on clean maps, seeded defects and tampered graphs.

use bssd::graph::{build_graph, VertexId};
use bssd::osm::OsmDocument;
use bssd::validator::{error_count, findings_to_json, validate, Finding};
use bssd::{SceneryMap, Severity, SpaceId};

mod common;
use common::{load_fixture, SPACE_A};

fn validate_doc(doc: OsmDocument) -> Vec<Finding> {
    let (map, _) = SceneryMap::from_doc(doc);
    let graph = build_graph(&map);
    validate(&map, &graph)
}

fn errors(findings: &[Finding]) -> Vec<&Finding> {
    findings
        .iter()
        .filter(|f| f.severity == Severity::Error)
        .collect()
}

#[test]
fn fixtures_validate_clean() {
    for name in ["exampleA.osm", "exampleB.osm"] {
        let map = load_fixture(name);
        let graph = build_graph(&map);
        let findings = validate(&map, &graph);
        assert_eq!(error_count(&findings), 0, "{name}: {findings:#?}");
        assert!(
            findings.iter().all(|f| f.severity != Severity::Warning),
            "{name} should be warning-free: {findings:#?}"
        );
    }
}

#[test]
fn empty_map_yields_zero_findings() {
    let findings = validate_doc(OsmDocument::new());
    assert_eq!(findings, vec![]);
}

#[test]
fn findings_are_deterministic_and_json_stable() {
    let map = load_fixture("exampleA.osm");
    let graph = build_graph(&map);
    let first = validate(&map, &graph);
    let second = validate(&map, &graph);
    assert_eq!(first, second);
    assert_eq!(findings_to_json(&first), findings_to_json(&second));

    let json: serde_json::Value = serde_json::from_str(&findings_to_json(&first)).unwrap();
    for finding in json.as_array().unwrap() {
        let object = finding.as_object().unwrap();
        let mut keys: Vec<&str> = object.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["message", "rule", "severity", "subjects"]);
    }
}

#[test]
fn deleting_a_reservation_member_is_one_rq2_error() {
    // The spec's canonical seeded defect: a behavior relation that lost its
    // reservation member yields exactly one V-RQ2 error naming the relation.
    let map = load_fixture("exampleA.osm");
    let mut doc = map.doc().clone();
    doc.relations
        .get_mut(&1107)
        .unwrap()
        .members
        .retain(|m| m.role != "reservation");
    let findings = validate_doc(doc);
    let errors = errors(&findings);
    assert_eq!(errors.len(), 1, "{findings:#?}");
    assert_eq!(errors[0].rule, "V-RQ2");
    assert_eq!(errors[0].code, "missing_reservation");
    assert!(errors[0].subjects.contains(&"relation/1107".to_string()));
}

#[test]
fn uncovered_and_duplicated_coverage_are_rq1_errors() {
    let map = load_fixture("exampleA.osm");
    let mut doc = map.doc().clone();
    doc.relations.remove(&1007);
    let findings = validate_doc(doc);
    let error_findings = errors(&findings);
    assert_eq!(error_findings.len(), 1);
    assert_eq!(
        (error_findings[0].rule, error_findings[0].code),
        ("V-RQ1", "uncovered_lanelet")
    );

    let mut doc = map.doc().clone();
    let mut duplicate = doc.relations[&1007].clone();
    duplicate.id = 9001;
    doc.insert_relation(duplicate).unwrap();
    let findings = validate_doc(doc);
    let error_findings = errors(&findings);
    assert_eq!(error_findings.len(), 1, "{findings:#?}");
    assert_eq!(
        (error_findings[0].rule, error_findings[0].code),
        ("V-RQ1", "duplicated_coverage")
    );
}

#[test]
fn tampered_graphs_are_rq3_errors() {
    let map = load_fixture("exampleA.osm");
    let clean = build_graph(&map);

    let mut graph = clean.clone();
    graph.remove_longitudinal_edge(VertexId::along(SpaceId(1005)), VertexId::along(SPACE_A));
    let findings = validate(&map, &graph);
    let error_findings = errors(&findings);
    assert_eq!(error_findings.len(), 1, "{findings:#?}");
    assert_eq!(
        (error_findings[0].rule, error_findings[0].code),
        ("V-RQ3", "missing_longitudinal_edge")
    );

    let mut graph = clean.clone();
    graph.insert_longitudinal_edge(
        VertexId::along(SpaceId(1001)),
        VertexId::along(SpaceId(1008)),
    );
    let findings = validate(&map, &graph);
    let error_findings = errors(&findings);
    assert_eq!(error_findings.len(), 1);
    assert_eq!(
        (error_findings[0].rule, error_findings[0].code),
        ("V-RQ3", "phantom_longitudinal_edge")
    );

    let mut graph = clean.clone();
    graph.remove_vertex(VertexId::along(SPACE_A));
    let findings = validate(&map, &graph);
    let error_findings = errors(&findings);
    assert_eq!(error_findings.len(), 1, "{findings:#?}");
    assert_eq!(
        (error_findings[0].rule, error_findings[0].code),
        ("V-RQ3", "missing_vertex")
    );
}

#[test]
fn equivalent_demands_are_reported_informationally() {
    let map = load_fixture("exampleA.osm");
    let graph = build_graph(&map);
    let findings = validate(&map, &graph);
    let class = findings
        .iter()
        .find(|f| f.code == "equivalent_demands")
        .expect("spaces 1008 and 1010 share demand content");
    assert_eq!(class.severity, Severity::Info);
    assert!(class.subjects.contains(&"relation/1008".to_string()));
    assert!(class.subjects.contains(&"relation/1010".to_string()));
}

#[test]
fn asymmetric_lateral_demands_warn() {
    let map = load_fixture("exampleA.osm");
    let mut doc = map.doc().clone();
    // Make the crossing section's left boundary disagree with its neighbor's
    // view of the shared line.
    doc.relations
        .get_mut(&1220)
        .unwrap()
        .tags
        .insert("crossing".to_string(), "allowed".to_string());
    let findings = validate_doc(doc);
    assert_eq!(error_count(&findings), 0);
    let warning = findings
        .iter()
        .find(|f| f.code == "asymmetric_lateral_demand")
        .expect("changed demand must be flagged");
    assert_eq!(warning.rule, "V-RQ4");
    assert_eq!(warning.severity, Severity::Warning);
}

#[test]
fn coverage_report_counts_annotated_lanelets() {
    let map = load_fixture("exampleB.osm");
    let graph = build_graph(&map);
    let findings = validate(&map, &graph);
    let coverage = findings
        .iter()
        .find(|f| f.code == "coverage")
        .expect("maps with lanes report coverage");
    assert_eq!(coverage.rule, "V-RQ5");
    assert_eq!(coverage.severity, Severity::Info);
    assert!(coverage.message.contains("12 of 12"));
    assert!(coverage.message.contains("100.0%"));
}

#[test]
fn dangling_non_bssd_refs_warn_but_do_not_fail() {
    let map = load_fixture("exampleA.osm");
    let mut doc = map.doc().clone();
    doc.relations
        .get_mut(&601)
        .unwrap()
        .members
        .first_mut()
        .unwrap()
        .ref_id = 9999;
    let findings = validate_doc(doc);
    assert_eq!(error_count(&findings), 0, "{findings:#?}");
    let warning = findings
        .iter()
        .find(|f| f.code == "dangling_ref")
        .expect("dangling outer ring must be reported");
    assert_eq!(warning.rule, "V-W01");
}
