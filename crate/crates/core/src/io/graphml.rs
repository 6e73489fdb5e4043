use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use quick_xml::escape::{escape, resolve_predefined_entity};
use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::io::write_file;
use crate::projection::{CoEdge, CoPreferenceGraph};

const HEADER: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">
"#;

/// Writes `graph` as GraphML 1.0. With a partition, every node carries its
/// community label. Items without a display name use their id as the name.
pub fn write_graphml_to<W: Write>(
    w: &mut W,
    graph: &CoPreferenceGraph,
    partition: Option<&Partition>,
) -> std::io::Result<()> {
    w.write_all(HEADER.as_bytes())?;
    writeln!(
        w,
        r#"  <key id="name" for="node" attr.name="name" attr.type="string"/>"#
    )?;
    if partition.is_some() {
        writeln!(
            w,
            r#"  <key id="community" for="node" attr.name="community" attr.type="int"/>"#
        )?;
    }
    writeln!(
        w,
        r#"  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>"#
    )?;
    writeln!(
        w,
        r#"  <key id="raw_count" for="edge" attr.name="raw_count" attr.type="int"/>"#
    )?;
    writeln!(w, r#"  <graph id="G" edgedefault="undirected">"#)?;
    let items = graph.items();
    for (i, id) in items.iter().enumerate() {
        let name = graph.name(i).unwrap_or(id);
        writeln!(w, r#"    <node id="{}">"#, escape(id.as_str()))?;
        writeln!(w, r#"      <data key="name">{}</data>"#, escape(name))?;
        if let Some(p) = partition {
            writeln!(w, r#"      <data key="community">{}</data>"#, p.label(i))?;
        }
        writeln!(w, "    </node>")?;
    }
    for (k, e) in graph.edges().iter().enumerate() {
        writeln!(
            w,
            r#"    <edge id="e{k}" source="{}" target="{}">"#,
            escape(items[e.a].as_str()),
            escape(items[e.b].as_str())
        )?;
        // `{}` on f64 prints the shortest string that parses back exactly.
        writeln!(w, r#"      <data key="weight">{}</data>"#, e.weight)?;
        writeln!(w, r#"      <data key="raw_count">{}</data>"#, e.count)?;
        writeln!(w, "    </edge>")?;
    }
    writeln!(w, "  </graph>")?;
    writeln!(w, "</graphml>")
}

pub fn to_graphml_string(graph: &CoPreferenceGraph, partition: Option<&Partition>) -> String {
    let mut buf = Vec::new();
    write_graphml_to(&mut buf, graph, partition).expect("writing to memory");
    String::from_utf8(buf).expect("GraphML output is UTF-8")
}

fn check_partition(graph: &CoPreferenceGraph, partition: &Partition) -> Result<()> {
    if partition.len() != graph.item_count() {
        return Err(Error::PartitionMismatch {
            expected: graph.item_count(),
            found: partition.len(),
        });
    }
    Ok(())
}

/// Network with community labels.
pub fn write_graphml(
    graph: &CoPreferenceGraph,
    partition: &Partition,
    path: impl AsRef<Path>,
) -> Result<()> {
    check_partition(graph, partition)?;
    write_file(path.as_ref(), |w| {
        write_graphml_to(w, graph, Some(partition))
    })
}

/// Network alone, before any community detection.
pub fn write_network_graphml(graph: &CoPreferenceGraph, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), |w| write_graphml_to(w, graph, None))
}

/// A parsed GraphML network and, when every node carries one, its
/// community assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphmlDocument {
    pub graph: CoPreferenceGraph,
    pub partition: Option<Partition>,
}

pub fn read_graphml(path: impl AsRef<Path>) -> Result<GraphmlDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graphml(&text, &path.display().to_string())
}

#[derive(Default)]
struct PendingNode {
    id: String,
    name: Option<String>,
    community: Option<usize>,
}

#[derive(Default)]
struct PendingEdge {
    source: String,
    target: String,
    weight: Option<f64>,
    count: Option<u32>,
}

/// Parses GraphML with `name`/`community` node data and `weight`/`raw_count`
/// edge data. Keys are matched by their `attr.name`, so files from other
/// tools work as long as they use those attribute names. A missing weight
/// defaults to 1 and a missing raw count to 0; a name equal to the node id
/// is read as "no name".
pub fn parse_graphml(text: &str, source: &str) -> Result<GraphmlDocument> {
    let fail = |message: String| Error::Parse {
        path: source.to_string(),
        message,
    };
    let attr = |e: &BytesStart, key: &str| -> Result<Option<String>> {
        for a in e.attributes() {
            let a = a.map_err(|err| fail(err.to_string()))?;
            if a.key.as_ref() == key {
                let v = a
                    .normalized_value(XmlVersion::Implicit1_0)
                    .map_err(|err| fail(err.to_string()))?;
                return Ok(Some(v.into_owned()));
            }
        }
        Ok(None)
    };

    let mut reader = Reader::from_str(text);
    let mut key_names: HashMap<String, String> = HashMap::new();
    let mut nodes: Vec<PendingNode> = Vec::new();
    let mut edges: Vec<PendingEdge> = Vec::new();
    // element that owns the <data> children currently being read
    let mut owner: Option<&'static str> = None;
    let mut data_key: Option<String> = None;
    let mut data_text = String::new();
    let mut saw_graph = false;

    loop {
        let event = reader
            .read_event()
            .map_err(|e| fail(format!("at byte {}: {e}", reader.buffer_position())))?;
        let (start, empty) = match &event {
            Event::Start(e) => (Some(e), false),
            Event::Empty(e) => (Some(e), true),
            _ => (None, false),
        };
        if let Some(e) = start {
            match e.local_name().as_ref() {
                "key" => {
                    if let (Some(id), Some(name)) = (attr(e, "id")?, attr(e, "attr.name")?) {
                        key_names.insert(id, name);
                    }
                }
                "graph" => {
                    saw_graph = true;
                    if attr(e, "edgedefault")?.as_deref() == Some("directed") {
                        return Err(fail("directed graphs are not supported".into()));
                    }
                }
                "node" => {
                    let id = attr(e, "id")?.ok_or_else(|| fail("node without id".into()))?;
                    nodes.push(PendingNode {
                        id,
                        ..Default::default()
                    });
                    owner = (!empty).then_some("node");
                }
                "edge" => {
                    let from =
                        attr(e, "source")?.ok_or_else(|| fail("edge without source".into()))?;
                    let to =
                        attr(e, "target")?.ok_or_else(|| fail("edge without target".into()))?;
                    edges.push(PendingEdge {
                        source: from,
                        target: to,
                        ..Default::default()
                    });
                    owner = (!empty).then_some("edge");
                }
                "data" if !empty => {
                    data_key = attr(e, "key")?;
                    data_text.clear();
                }
                _ => {}
            }
            continue;
        }
        match event {
            Event::Text(t) if data_key.is_some() => data_text.push_str(&t.xml10_content()),
            Event::CData(t) if data_key.is_some() => data_text.push_str(&t),
            Event::GeneralRef(r) if data_key.is_some() => {
                if let Some(c) = r.resolve_char_ref().map_err(|e| fail(e.to_string()))? {
                    data_text.push(c);
                } else {
                    let resolved = resolve_predefined_entity(&r)
                        .ok_or_else(|| fail(format!("unknown entity &{};", &*r)))?;
                    data_text.push_str(resolved);
                }
            }
            Event::End(e) => match e.local_name().as_ref() {
                "data" => {
                    let key = data_key.take().unwrap_or_default();
                    let name = key_names.get(&key).cloned().unwrap_or(key);
                    let value = data_text.trim();
                    let bad = |what: &str| fail(format!("invalid {what} value {value:?}"));
                    match (owner, name.as_str()) {
                        (Some("node"), "name") => {
                            nodes.last_mut().expect("open node").name = Some(data_text.clone());
                        }
                        (Some("node"), "community") => {
                            nodes.last_mut().expect("open node").community =
                                Some(value.parse().map_err(|_| bad("community"))?);
                        }
                        (Some("edge"), "weight") => {
                            edges.last_mut().expect("open edge").weight =
                                Some(value.parse().map_err(|_| bad("weight"))?);
                        }
                        (Some("edge"), "raw_count") => {
                            edges.last_mut().expect("open edge").count =
                                Some(value.parse().map_err(|_| bad("raw_count"))?);
                        }
                        _ => {}
                    }
                }
                "node" | "edge" => owner = None,
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    if !saw_graph {
        return Err(fail("no <graph> element".into()));
    }

    let mut index = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if index.insert(n.id.clone(), i).is_some() {
            return Err(Error::DuplicateNode(n.id.clone()));
        }
    }
    let lookup = |id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| Error::NodeNotFound(id.to_string()))
    };
    let mut co_edges = Vec::with_capacity(edges.len());
    for e in &edges {
        co_edges.push(CoEdge {
            a: lookup(&e.source)?,
            b: lookup(&e.target)?,
            count: e.count.unwrap_or(0),
            weight: e.weight.unwrap_or(1.0),
        });
    }
    let labelled = nodes.iter().filter(|n| n.community.is_some()).count();
    let partition = if labelled == 0 {
        None
    } else if labelled < nodes.len() {
        let gap = nodes
            .iter()
            .find(|n| n.community.is_none())
            .expect("unlabelled node");
        return Err(Error::PartialPartition(gap.id.clone()));
    } else {
        Some(Partition::new(
            nodes.iter().map(|n| n.community.unwrap_or(0)).collect(),
        ))
    };
    let names = nodes
        .iter()
        .map(|n| n.name.clone().filter(|name| *name != n.id))
        .collect();
    let items = nodes.into_iter().map(|n| n.id).collect();
    Ok(GraphmlDocument {
        graph: CoPreferenceGraph::from_parts(items, names, co_edges)?,
        partition,
    })
}
