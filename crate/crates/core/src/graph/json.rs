use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::ColoredGraph;
use crate::error::{Error, Result};

/// Largest vertex or color count accepted from JSON.
pub const MAX_JSON_VERTICES: usize = 1 << 16;

/// `{"vertices":[ids],"edges":{"1":[[u,v],…],…}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<u64>,
    #[serde(default)]
    pub edges: BTreeMap<String, Vec<[u64; 2]>>,
}

/// Vertices get ids `1..=n`; every color up to `k` gets a key.
pub fn graph_to_json(g: &ColoredGraph) -> GraphJson {
    let vertices = (1..=g.num_vertices() as u64).collect();
    let edges = (1..=g.k())
        .map(|c| {
            (
                c.to_string(),
                g.edges(c)
                    .map(|(u, v)| [u as u64 + 1, v as u64 + 1])
                    .collect(),
            )
        })
        .collect();
    GraphJson { vertices, edges }
}

/// Parses the JSON form; vertex ids are mapped to `0..n` in listed order.
pub fn graph_from_json(text: &str) -> Result<ColoredGraph> {
    let raw: GraphJson =
        serde_json::from_str(text).map_err(|e| Error::GraphFormat(e.to_string()))?;
    if raw.vertices.len() > MAX_JSON_VERTICES {
        return Err(Error::GraphFormat(format!(
            "more than {MAX_JSON_VERTICES} vertices"
        )));
    }
    let mut index = HashMap::new();
    for (i, &id) in raw.vertices.iter().enumerate() {
        if index.insert(id, i).is_some() {
            return Err(Error::GraphFormat(format!("duplicate vertex id {id}")));
        }
    }
    let mut g = ColoredGraph::new(raw.vertices.len(), 0);
    for (key, list) in &raw.edges {
        let color: usize = key
            .parse()
            .ok()
            .filter(|&c| (1..=MAX_JSON_VERTICES).contains(&c))
            .ok_or_else(|| Error::GraphFormat(format!("bad color key {key:?}")))?;
        g.ensure_colors(color);
        for &[u, v] in list {
            let lookup = |id: u64| {
                index
                    .get(&id)
                    .copied()
                    .ok_or_else(|| Error::GraphFormat(format!("unknown vertex {id}")))
            };
            g.add_edge(color, lookup(u)?, lookup(v)?)?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_of_word;
    use crate::word::Word;

    #[test]
    fn round_trip() {
        let g = graph_of_word(&"g1 g2^-1 g3".parse::<Word>().unwrap());
        let text = serde_json::to_string(&graph_to_json(&g)).unwrap();
        assert_eq!(graph_from_json(&text).unwrap(), g);
    }

    #[test]
    fn arbitrary_ids() {
        let g = graph_from_json(r#"{"vertices":[10,20],"edges":{"2":[[20,10]]}}"#).unwrap();
        assert_eq!(g.k(), 2);
        assert!(g.has_edge(2, 1, 0));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            r#"{"vertices":[1,1]}"#,
            r#"{"vertices":[1],"edges":{"0":[]}}"#,
            r#"{"vertices":[1],"edges":{"x":[]}}"#,
            r#"{"vertices":[1],"edges":{"1":[[1,2]]}}"#,
            r#"{"vertices":[1],"extra":0}"#,
            r#"[]"#,
        ] {
            assert!(graph_from_json(bad).is_err(), "{bad}");
        }
    }
}
