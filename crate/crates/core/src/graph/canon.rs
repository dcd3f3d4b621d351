//! Canonical labeling by color refinement plus individualization search.
//!
//! Each weakly connected component is labeled independently; the leaf with
//! the lexicographically least sorted edge list wins. Components are then
//! sorted, so isolated pieces never multiply the search.

use std::fmt;

use sha2::{Digest, Sha256};

use super::ColoredGraph;

/// Equal iff the graphs are isomorphic as oriented edge-colored graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
    /// Canonical vertex count and `(color, u, v)` edges.
    pub vertices: usize,
    pub edges: Vec<(usize, usize, usize)>,
}

impl CanonicalForm {
    /// SHA-256 of the canonical bytes, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digest())
    }
}

type Edge = (usize, usize, usize);

/// `(color, points backwards, neighbor class)`.
type Signature = (usize, Vec<(usize, bool, usize)>);

struct Adjacency {
    out: Vec<Vec<(usize, usize)>>,
    inn: Vec<Vec<(usize, usize)>>,
    edges: Vec<Edge>,
}

pub fn canonical_form(g: &ColoredGraph) -> CanonicalForm {
    let mut parts: Vec<(usize, Vec<Edge>)> = g
        .components()
        .iter()
        .map(|comp| {
            let sub = g.induced(comp);
            (comp.len(), canonical_component(&sub))
        })
        .collect();
    parts.sort();

    let mut bytes = Vec::new();
    let mut edges = Vec::new();
    let mut offset = 0;
    push_u32(&mut bytes, parts.len());
    for (n, es) in &parts {
        push_u32(&mut bytes, *n);
        push_u32(&mut bytes, es.len());
        for &(c, u, v) in es {
            push_u32(&mut bytes, c);
            push_u32(&mut bytes, u);
            push_u32(&mut bytes, v);
            edges.push((c, u + offset, v + offset));
        }
        offset += n;
    }
    CanonicalForm {
        bytes,
        vertices: offset,
        edges,
    }
}

fn push_u32(bytes: &mut Vec<u8>, x: usize) {
    bytes.extend_from_slice(&(x as u32).to_le_bytes());
}

fn canonical_component(g: &ColoredGraph) -> Vec<Edge> {
    let n = g.num_vertices();
    let mut adj = Adjacency {
        out: vec![Vec::new(); n],
        inn: vec![Vec::new(); n],
        edges: Vec::new(),
    };
    for (c, u, v) in g.all_edges() {
        adj.out[u].push((c, v));
        adj.inn[v].push((c, u));
        adj.edges.push((c, u, v));
    }
    let mut best = None;
    search(vec![0; n], &adj, &mut best);
    best.unwrap_or_default()
}

fn search(mut colors: Vec<usize>, adj: &Adjacency, best: &mut Option<Vec<Edge>>) {
    let classes = refine(&mut colors, adj);
    let n = colors.len();
    if classes == n {
        let mut leaf: Vec<Edge> = adj
            .edges
            .iter()
            .map(|&(c, u, v)| (c, colors[u], colors[v]))
            .collect();
        leaf.sort_unstable();
        if best.as_ref().is_none_or(|b| leaf < *b) {
            *best = Some(leaf);
        }
        return;
    }
    let mut size = vec![0usize; classes];
    for &c in &colors {
        size[c] += 1;
    }
    let target = (0..classes)
        .find(|&c| size[c] > 1)
        .expect("some class is not a singleton");
    for v in (0..n).filter(|&v| colors[v] == target) {
        let next: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(x, &c)| 2 * c + usize::from(c == target && x != v))
            .collect();
        search(next, adj, best);
    }
}

/// Refines to the coarsest equitable coloring; returns the class count.
fn refine(colors: &mut Vec<usize>, adj: &Adjacency) -> usize {
    let mut count = distinct(colors);
    loop {
        let sigs: Vec<Signature> = (0..colors.len())
            .map(|v| {
                let mut s: Vec<(usize, bool, usize)> = adj.out[v]
                    .iter()
                    .map(|&(c, x)| (c, false, colors[x]))
                    .chain(adj.inn[v].iter().map(|&(c, x)| (c, true, colors[x])))
                    .collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let mut keys = sigs.clone();
        keys.sort();
        keys.dedup();
        *colors = sigs
            .iter()
            .map(|s| keys.binary_search(s).expect("present"))
            .collect();
        if keys.len() == count {
            return count;
        }
        count = keys.len();
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}
