//! Oriented edge-colored graphs with color set `1..=k`.
//!
//! Vertices are `0..n`. For the graph of a pair `(σ, w)` the vertex `(m, l)`
//! (both 0-based) has index `m·|w| + l`; the JSON form shifts ids by one.

mod canon;
mod extend;
mod json;
mod partition;

use std::collections::{BTreeSet, HashMap};

use num_rational::Rational64;
use serde::Serialize;

pub use canon::{canonical_form, CanonicalForm};
pub use extend::random_extension;
pub use json::{graph_from_json, graph_to_json, GraphJson};
pub use partition::VertexPartition;

use crate::error::{Error, Result};
use crate::model::{AllowedLengths, Degree, Degrees, ModelConfig};
use crate::perm::Permutation;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    n: usize,
    edges: Vec<BTreeSet<(usize, usize)>>,
}

impl ColoredGraph {
    pub fn new(n: usize, k: usize) -> Self {
        ColoredGraph {
            n,
            edges: vec![BTreeSet::new(); k],
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Number of colors.
    pub fn k(&self) -> usize {
        self.edges.len()
    }

    pub fn ensure_colors(&mut self, k: usize) {
        if self.edges.len() < k {
            self.edges.resize(k, BTreeSet::new());
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Adds a `color`-edge `u → v`; returns false if it was already present.
    pub fn add_edge(&mut self, color: usize, u: usize, v: usize) -> Result<bool> {
        if color == 0 {
            return Err(Error::GraphFormat("colors start at 1".into()));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::GraphFormat(format!(
                "edge {u}->{v} leaves the vertex set"
            )));
        }
        self.ensure_colors(color);
        Ok(self.edges[color - 1].insert((u, v)))
    }

    /// Edges of 1-based `color`.
    pub fn edges(&self, color: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges
            .get(color.wrapping_sub(1))
            .into_iter()
            .flatten()
            .copied()
    }

    /// All edges as `(color, u, v)`.
    pub fn all_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(c, set)| set.iter().map(move |&(u, v)| (c + 1, u, v)))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(BTreeSet::len).sum()
    }

    pub fn has_edge(&self, color: usize, u: usize, v: usize) -> bool {
        self.edges
            .get(color.wrapping_sub(1))
            .is_some_and(|s| s.contains(&(u, v)))
    }

    /// `G[r]`: same vertices, only the edges of color `r`.
    pub fn color_restriction(&self, color: usize) -> ColoredGraph {
        let mut g = ColoredGraph::new(self.n, self.k());
        if let Some(set) = self.edges.get(color.wrapping_sub(1)) {
            g.edges[color - 1] = set.clone();
        }
        g
    }

    /// Subgraph induced on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> ColoredGraph {
        let mut index = HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            index.insert(v, i);
        }
        let mut g = ColoredGraph::new(vertices.len(), self.k());
        for (c, u, v) in self.all_edges() {
            if let (Some(&a), Some(&b)) = (index.get(&u), index.get(&v)) {
                g.edges[c - 1].insert((a, b));
            }
        }
        g
    }

    /// Weakly connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for (_, u, v) in self.all_edges() {
            uf.union(u, v);
        }
        let labels: Vec<usize> = (0..self.n).map(|v| uf.find(v)).collect();
        VertexPartition::from_labels(&labels).blocks()
    }
}

/// `G(w)`: a single vertex for the empty word, otherwise one cycle of
/// `|w|` vertices read along the word.
pub fn graph_of_word(w: &Word) -> ColoredGraph {
    if w.is_empty() {
        return ColoredGraph::new(1, 0);
    }
    graph_of_pair(&Permutation::identity(1), w).expect("nonempty word")
}

/// `G(σ, w)` on `[p] × [|w|]`.
pub fn graph_of_pair(sigma: &Permutation, w: &Word) -> Result<ColoredGraph> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (p, len) = (sigma.len(), w.len());
    let inv = sigma.inverse();
    let mut g = ColoredGraph::new(p * len, w.max_generator());
    for m in 0..p {
        for (l, letter) in w.letters().iter().enumerate() {
            let here = m * len + l;
            let next = if l + 1 < len {
                here + 1
            } else {
                inv.apply(m) * len
            };
            let (a, b) = if letter.inverse {
                (next, here)
            } else {
                (here, next)
            };
            g.edges[letter.generator - 1].insert((a, b));
        }
    }
    Ok(g)
}

/// `G/Δ`; parallel same-color edges collapse.
pub fn quotient(g: &ColoredGraph, delta: &VertexPartition) -> Result<ColoredGraph> {
    if delta.len() != g.n {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} vertices, graph has {}",
            delta.len(),
            g.n
        )));
    }
    let mut q = ColoredGraph::new(delta.num_blocks(), g.k());
    for (c, u, v) in g.all_edges() {
        q.edges[c - 1].insert((delta.block_of(u), delta.block_of(v)));
    }
    Ok(q)
}

/// Per color, the edge relation is a partial injection.
pub fn is_admissible(g: &ColoredGraph) -> bool {
    g.edges.iter().all(|set| {
        let mut out = vec![false; g.n];
        let mut inn = vec![false; g.n];
        set.iter().all(|&(u, v)| {
            !std::mem::replace(&mut out[u], true) && !std::mem::replace(&mut inn[v], true)
        })
    })
}

/// The finest partition whose quotient is admissible.
pub fn minimal_admissible_partition(g: &ColoredGraph) -> VertexPartition {
    let mut uf = UnionFind::new(g.n);
    loop {
        let mut changed = false;
        for set in &g.edges {
            let mut by_begin: HashMap<usize, usize> = HashMap::new();
            let mut by_end: HashMap<usize, usize> = HashMap::new();
            for &(u, v) in set {
                let (ru, rv) = (uf.find(u), uf.find(v));
                if let Some(&x) = by_begin.get(&ru) {
                    changed |= uf.union(x, rv);
                } else {
                    by_begin.insert(ru, rv);
                }
                if let Some(&y) = by_end.get(&rv) {
                    changed |= uf.union(y, ru);
                } else {
                    by_end.insert(rv, ru);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let labels: Vec<usize> = (0..g.n).map(|v| uf.find(v)).collect();
    VertexPartition::from_labels(&labels)
}

/// `Adm(G)`.
pub fn adm(g: &ColoredGraph) -> ColoredGraph {
    quotient(g, &minimal_admissible_partition(g)).expect("partition of the same vertex set")
}

/// Maximal directed paths and directed cycles of one color.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ColorDecomposition {
    /// Vertex sequences; a path of length `l` has `l + 1` vertices.
    pub paths: Vec<Vec<usize>>,
    /// Vertex sequences; a cycle of length `l` has `l` vertices.
    pub cycles: Vec<Vec<usize>>,
}

impl ColorDecomposition {
    pub fn path_lengths(&self) -> impl Iterator<Item = u64> + '_ {
        self.paths.iter().map(|p| p.len() as u64 - 1)
    }

    pub fn cycle_lengths(&self) -> impl Iterator<Item = u64> + '_ {
        self.cycles.iter().map(|c| c.len() as u64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MonochromeDecomposition {
    /// Indexed by color − 1.
    pub colors: Vec<ColorDecomposition>,
}

impl MonochromeDecomposition {
    pub fn color(&self, color: usize) -> &ColorDecomposition {
        &self.colors[color - 1]
    }
}

pub fn monochrome_decomposition(g: &ColoredGraph) -> Result<MonochromeDecomposition> {
    if !is_admissible(g) {
        return Err(Error::NotAdmissible);
    }
    let colors = g
        .edges
        .iter()
        .map(|set| {
            let mut next = vec![None; g.n];
            let mut has_pred = vec![false; g.n];
            for &(u, v) in set {
                next[u] = Some(v);
                has_pred[v] = true;
            }
            let mut seen = vec![false; g.n];
            let mut dec = ColorDecomposition::default();
            for start in 0..g.n {
                if has_pred[start] || next[start].is_none() {
                    continue;
                }
                let mut path = vec![start];
                seen[start] = true;
                let mut x = start;
                while let Some(y) = next[x] {
                    path.push(y);
                    seen[y] = true;
                    x = y;
                }
                dec.paths.push(path);
            }
            for start in 0..g.n {
                if seen[start] || next[start].is_none() {
                    continue;
                }
                let mut cycle = vec![start];
                seen[start] = true;
                let mut x = next[start].expect("checked");
                while x != start {
                    cycle.push(x);
                    seen[x] = true;
                    x = next[x].expect("every vertex on a cycle has a successor");
                }
                dec.cycles.push(cycle);
            }
            dec
        })
        .collect();
    Ok(MonochromeDecomposition { colors })
}

/// Which monochrome paths an `(A)`-admissible graph may contain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PathRule {
    /// Paths of color `i` must be shorter than `d_i`.
    #[default]
    BelowDegree,
    /// No constraint on paths.
    Unrestricted,
}

/// Admissible, cycles of color `i` have length in `A_i`, paths shorter than `d_i`.
pub fn is_a_admissible(g: &ColoredGraph, cfg: &ModelConfig) -> bool {
    is_a_admissible_with(g, cfg, PathRule::BelowDegree)
}

pub fn is_a_admissible_with(g: &ColoredGraph, cfg: &ModelConfig, rule: PathRule) -> bool {
    let Ok(dec) = monochrome_decomposition(g) else {
        return false;
    };
    dec.colors.iter().enumerate().all(|(c, col)| {
        let allowed = allowed_or_all(cfg, c + 1);
        let d = allowed.degree();
        col.cycle_lengths().all(|l| allowed.contains(l))
            && (rule == PathRule::Unrestricted || col.path_lengths().all(|l| d.is_above(l)))
    })
}

fn allowed_or_all(cfg: &ModelConfig, color: usize) -> AllowedLengths {
    if color <= cfg.k() {
        cfg.allowed(color).clone()
    } else {
        AllowedLengths::All
    }
}

/// Admissible, cycles of color `i` have length exactly `d_i`, paths shorter than `d_i`.
pub fn is_strongly_admissible(g: &ColoredGraph, degrees: &Degrees) -> bool {
    let Ok(dec) = monochrome_decomposition(g) else {
        return false;
    };
    dec.colors.iter().enumerate().all(|(c, col)| {
        let d = degrees.of(c + 1);
        col.cycle_lengths().all(|l| d == Degree::Finite(l))
            && col.path_lengths().all(|l| d.is_above(l))
    })
}

/// `χ(G) = |V| − |E| + Σ_r Σ_cycles length/d_r`, with `length/∞ = 0`.
pub fn neagu_characteristic(g: &ColoredGraph, degrees: &Degrees) -> Result<Rational64> {
    let dec = monochrome_decomposition(g)?;
    let mut chi = Rational64::from_integer(g.n as i64 - g.num_edges() as i64);
    for (c, col) in dec.colors.iter().enumerate() {
        for l in col.cycle_lengths() {
            chi += degrees.of(c + 1).ratio(l);
        }
    }
    Ok(chi)
}

/// One connected piece of `G(σ, w)` per cycle of `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaComponent {
    /// The cycle of `σ` (0-based points) whose copies of `G(w)` form the piece.
    pub cycle: Vec<usize>,
    pub graph: ColoredGraph,
}

/// Splits `G(σ, w)` along the cycles of `σ`; the piece for a cycle of
/// length `d` is isomorphic to `G(w^d)`.
pub fn decompose_by_sigma_cycles(sigma: &Permutation, w: &Word) -> Result<Vec<SigmaComponent>> {
    let g = graph_of_pair(sigma, w)?;
    let len = w.len();
    Ok(sigma
        .cycles()
        .into_iter()
        .map(|cycle| {
            let vertices: Vec<usize> = cycle
                .iter()
                .flat_map(|&m| (0..len).map(move |l| m * len + l))
                .collect();
            SigmaComponent {
                graph: g.induced(&vertices),
                cycle,
            }
        })
        .collect())
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if two distinct classes were joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}
