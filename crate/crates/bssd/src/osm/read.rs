//! OSM XML reader.

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{ElementKind, OsmDocument, OsmError, OsmMember, OsmNode, OsmRelation, OsmWay, Tags};

enum Current {
    None,
    Node(OsmNode),
    Way(OsmWay),
    Relation(OsmRelation),
}

/// Parses OSM XML into a document. Unknown XML elements and attributes are
/// ignored; unknown tags and relation types are kept verbatim.
pub fn read_document(bytes: &[u8]) -> Result<OsmDocument, OsmError> {
    let mut reader = Reader::from_reader(bytes);
    reader.config_mut().trim_text(true);

    let mut doc = OsmDocument::new();
    let mut current = Current::None;

    loop {
        let position = reader.buffer_position();
        let event = reader.read_event().map_err(|e| OsmError::MalformedXml {
            position: reader.buffer_position(),
            message: e.to_string(),
        })?;
        match event {
            Event::Start(start) => {
                handle_element(&mut current, &start, position)?;
            }
            Event::Empty(start) => {
                handle_element(&mut current, &start, position)?;
                close_element(&mut doc, &mut current, start.name().as_ref())?;
            }
            Event::End(end) => {
                close_element(&mut doc, &mut current, end.name().as_ref())?;
            }
            Event::Eof => break,
            _ => {}
        }
    }
    Ok(doc)
}

fn handle_element(
    current: &mut Current,
    start: &BytesStart,
    position: u64,
) -> Result<(), OsmError> {
    match start.name().as_ref() {
        b"node" => {
            let id = required_i64(start, "id", ElementKind::Node, position)?;
            let lat = required_f64(start, "lat", ElementKind::Node, position)?;
            let lon = required_f64(start, "lon", ElementKind::Node, position)?;
            *current = Current::Node(OsmNode {
                id,
                lat,
                lon,
                tags: Tags::new(),
            });
        }
        b"way" => {
            let id = required_i64(start, "id", ElementKind::Way, position)?;
            *current = Current::Way(OsmWay {
                id,
                node_refs: Vec::new(),
                tags: Tags::new(),
            });
        }
        b"relation" => {
            let id = required_i64(start, "id", ElementKind::Relation, position)?;
            *current = Current::Relation(OsmRelation {
                id,
                members: Vec::new(),
                tags: Tags::new(),
            });
        }
        b"tag" => {
            let key = attribute(start, "k").unwrap_or_default();
            let value = attribute(start, "v").unwrap_or_default();
            match current {
                Current::Node(node) => {
                    node.tags.insert(key, value);
                }
                Current::Way(way) => {
                    way.tags.insert(key, value);
                }
                Current::Relation(relation) => {
                    relation.tags.insert(key, value);
                }
                Current::None => {}
            }
        }
        b"nd" => {
            if let Current::Way(way) = current {
                let ref_id = required_i64(start, "ref", ElementKind::Way, position)?;
                way.node_refs.push(ref_id);
            }
        }
        b"member" => {
            if let Current::Relation(relation) = current {
                let kind = match attribute(start, "type").as_deref() {
                    Some("node") => ElementKind::Node,
                    Some("way") => ElementKind::Way,
                    Some("relation") => ElementKind::Relation,
                    other => {
                        return Err(OsmError::InvalidElement {
                            kind: ElementKind::Relation,
                            position,
                            message: format!(
                                "member of relation {} has unsupported type {:?}",
                                relation.id, other
                            ),
                        })
                    }
                };
                let ref_id = required_i64(start, "ref", ElementKind::Relation, position)?;
                let role = attribute(start, "role").unwrap_or_default();
                relation.members.push(OsmMember { kind, ref_id, role });
            }
        }
        _ => {}
    }
    Ok(())
}

fn close_element(
    doc: &mut OsmDocument,
    current: &mut Current,
    name: &[u8],
) -> Result<(), OsmError> {
    match name {
        b"node" => {
            if let Current::Node(node) = std::mem::replace(current, Current::None) {
                doc.insert_node(node)?;
            }
        }
        b"way" => {
            if let Current::Way(way) = std::mem::replace(current, Current::None) {
                doc.insert_way(way)?;
            }
        }
        b"relation" => {
            if let Current::Relation(relation) = std::mem::replace(current, Current::None) {
                doc.insert_relation(relation)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn attribute(start: &BytesStart, name: &str) -> Option<String> {
    start
        .try_get_attribute(name)
        .ok()
        .flatten()
        .and_then(|a| a.unescape_value().ok().map(|v| v.into_owned()))
}

fn required_i64(
    start: &BytesStart,
    name: &str,
    kind: ElementKind,
    position: u64,
) -> Result<i64, OsmError> {
    let raw = attribute(start, name).ok_or_else(|| OsmError::InvalidElement {
        kind,
        position,
        message: format!("missing attribute `{name}`"),
    })?;
    raw.parse().map_err(|_| OsmError::InvalidElement {
        kind,
        position,
        message: format!("attribute `{name}` is not an integer: `{raw}`"),
    })
}

fn required_f64(
    start: &BytesStart,
    name: &str,
    kind: ElementKind,
    position: u64,
) -> Result<f64, OsmError> {
    let raw = attribute(start, name).ok_or_else(|| OsmError::InvalidElement {
        kind,
        position,
        message: format!("missing attribute `{name}`"),
    })?;
    raw.parse().map_err(|_| OsmError::InvalidElement {
        kind,
        position,
        message: format!("attribute `{name}` is not a number: `{raw}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_three_element_kinds() {
        let xml = r#"<?xml version='1.0' encoding='UTF-8'?>
<osm version='0.6' generator='test'>
  <node id='1' lat='50.0' lon='8.0'/>
  <node id='2' lat='50.001' lon='8.0'>
    <tag k='type' v='poi'/>
  </node>
  <way id='10' visible='true'>
    <nd ref='1'/>
    <nd ref='2'/>
    <tag k='type' v='stop_line'/>
  </way>
  <relation id='20'>
    <member type='way' ref='10' role='left'/>
    <member type='node' ref='1' role=''/>
    <tag k='type' v='lanelet'/>
  </relation>
</osm>"#;
        let doc = read_document(xml.as_bytes()).unwrap();
        assert_eq!(doc.nodes.len(), 2);
        assert_eq!(doc.ways[&10].node_refs, vec![1, 2]);
        assert_eq!(doc.ways[&10].tags["type"], "stop_line");
        let relation = &doc.relations[&20];
        assert_eq!(relation.members.len(), 2);
        assert_eq!(relation.members[0].role, "left");
        assert_eq!(relation.tag("type"), Some("lanelet"));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let xml = r#"<osm>
  <node id='1' lat='50.0' lon='8.0'/>
  <node id='1' lat='50.1' lon='8.1'/>
</osm>"#;
        assert!(matches!(
            read_document(xml.as_bytes()),
            Err(OsmError::DuplicateId { id: 1, .. })
        ));
    }

    #[test]
    fn malformed_xml_is_rejected() {
        let xml = "<osm><node id='1' lat='50.0' lon='8.0'></osm>";
        assert!(read_document(xml.as_bytes()).is_err());
    }

    #[test]
    fn missing_coordinates_are_rejected() {
        let xml = "<osm><node id='1' lat='50.0'/></osm>";
        assert!(matches!(
            read_document(xml.as_bytes()),
            Err(OsmError::InvalidElement { .. })
        ));
    }
}
