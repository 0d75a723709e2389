//! Shared helpers for the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use bssd::osm::read_document;
use bssd::{load_map, SceneryMap, SpaceId};

pub const SPACE_A: SpaceId = SpaceId(1007);
pub const SPACE_B: SpaceId = SpaceId(3008);

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> SceneryMap {
    let bytes = std::fs::read(fixture_path(name)).unwrap();
    let (map, diagnostics) = load_map(&bytes).unwrap();
    assert!(
        diagnostics.is_empty(),
        "fixture {name} must load clean: {diagnostics:#?}"
    );
    map
}

/// Both example sceneries merged into one map (their ids are disjoint).
pub fn merged_examples() -> SceneryMap {
    let mut doc = read_document(&std::fs::read(fixture_path("exampleA.osm")).unwrap()).unwrap();
    let other = read_document(&std::fs::read(fixture_path("exampleB.osm")).unwrap()).unwrap();
    doc.merge(other).unwrap();
    let (map, diagnostics) = SceneryMap::from_doc(doc);
    assert!(diagnostics.is_empty(), "{diagnostics:#?}");
    map
}
