//! Canonical OSM XML writer.
//!
//! Elements are emitted in ascending id order with sorted tags, so writing the
//! same document twice yields byte-identical output. Coordinates use the
//! shortest round-trip `f64` formatting.

use quick_xml::events::{BytesDecl, BytesEnd, BytesStart, Event};
use quick_xml::Writer;

use super::{OsmDocument, OsmNode, OsmRelation, OsmWay};

/// Serializes a document to OSM XML (UTF-8).
pub fn write_document(doc: &OsmDocument) -> Vec<u8> {
    let mut writer = Writer::new_with_indent(Vec::new(), b' ', 2);
    writer
        .write_event(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None)))
        .expect("writing to memory cannot fail");

    let mut osm = BytesStart::new("osm");
    osm.push_attribute(("version", "0.6"));
    osm.push_attribute(("generator", "bssd"));
    writer.write_event(Event::Start(osm)).unwrap();

    for node in doc.nodes.values() {
        write_node(&mut writer, node);
    }
    for way in doc.ways.values() {
        write_way(&mut writer, way);
    }
    for relation in doc.relations.values() {
        write_relation(&mut writer, relation);
    }

    writer
        .write_event(Event::End(BytesEnd::new("osm")))
        .unwrap();
    let mut bytes = writer.into_inner();
    bytes.push(b'\n');
    bytes
}

fn write_node(writer: &mut Writer<Vec<u8>>, node: &OsmNode) {
    let mut start = BytesStart::new("node");
    start.push_attribute(("id", node.id.to_string().as_str()));
    start.push_attribute(("visible", "true"));
    start.push_attribute(("version", "1"));
    start.push_attribute(("lat", node.lat.to_string().as_str()));
    start.push_attribute(("lon", node.lon.to_string().as_str()));
    write_with_tags(writer, start, "node", &node.tags, false, |_| {});
}

fn write_way(writer: &mut Writer<Vec<u8>>, way: &OsmWay) {
    let mut start = BytesStart::new("way");
    start.push_attribute(("id", way.id.to_string().as_str()));
    start.push_attribute(("visible", "true"));
    start.push_attribute(("version", "1"));
    write_with_tags(
        writer,
        start,
        "way",
        &way.tags,
        !way.node_refs.is_empty(),
        |writer| {
            for node_ref in &way.node_refs {
                let mut nd = BytesStart::new("nd");
                nd.push_attribute(("ref", node_ref.to_string().as_str()));
                writer.write_event(Event::Empty(nd)).unwrap();
            }
        },
    );
}

fn write_relation(writer: &mut Writer<Vec<u8>>, relation: &OsmRelation) {
    let mut start = BytesStart::new("relation");
    start.push_attribute(("id", relation.id.to_string().as_str()));
    start.push_attribute(("visible", "true"));
    start.push_attribute(("version", "1"));
    write_with_tags(
        writer,
        start,
        "relation",
        &relation.tags,
        !relation.members.is_empty(),
        |writer| {
            for member in &relation.members {
                let mut elem = BytesStart::new("member");
                elem.push_attribute(("type", member.kind.token()));
                elem.push_attribute(("ref", member.ref_id.to_string().as_str()));
                elem.push_attribute(("role", member.role.as_str()));
                writer.write_event(Event::Empty(elem)).unwrap();
            }
        },
    );
}

fn write_with_tags(
    writer: &mut Writer<Vec<u8>>,
    start: BytesStart,
    name: &str,
    tags: &super::Tags,
    has_children: bool,
    children: impl FnOnce(&mut Writer<Vec<u8>>),
) {
    if tags.is_empty() && !has_children {
        writer.write_event(Event::Empty(start)).unwrap();
        return;
    }
    writer.write_event(Event::Start(start)).unwrap();
    children(writer);
    for (key, value) in tags {
        let mut tag = BytesStart::new("tag");
        tag.push_attribute(("k", key.as_str()));
        tag.push_attribute(("v", value.as_str()));
        writer.write_event(Event::Empty(tag)).unwrap();
    }
    writer.write_event(Event::End(BytesEnd::new(name))).unwrap();
}
