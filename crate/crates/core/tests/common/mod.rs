//! Brute-force reference implementations shared by the integration tests.
//!
//! Nothing here calls into the search, sampler or oracle code it checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::Rational64;
use permword::graph::ColoredGraph;
use permword::model::{AllowedLengths, Degree, ModelConfig};

/// Every set partition of `0..n` as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let top = if prefix.is_empty() { 0 } else { max + 1 };
        for b in 0..=top {
            prefix.push(b);
            go(prefix, max.max(b), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

pub fn num_blocks(labels: &[usize]) -> usize {
    labels.iter().copied().max().map_or(0, |m| m + 1)
}

/// Colored edge sets of `G/Δ`, indexed by color − 1.
pub fn quotient_edges(g: &ColoredGraph, labels: &[usize]) -> Vec<BTreeSet<(usize, usize)>> {
    let mut out = vec![BTreeSet::new(); g.k()];
    for (c, u, v) in g.all_edges() {
        out[c - 1].insert((labels[u], labels[v]));
    }
    out
}

pub fn admissible(edges: &[BTreeSet<(usize, usize)>]) -> bool {
    edges.iter().all(|set| {
        let begins: BTreeSet<usize> = set.iter().map(|e| e.0).collect();
        let ends: BTreeSet<usize> = set.iter().map(|e| e.1).collect();
        begins.len() == set.len() && ends.len() == set.len()
    })
}

/// `(cycle lengths, path lengths in edges)` of one admissible color class.
pub fn walk(set: &BTreeSet<(usize, usize)>, n: usize) -> (Vec<u64>, Vec<u64>) {
    let mut next = vec![None; n];
    let mut has_pred = vec![false; n];
    for &(u, v) in set {
        next[u] = Some(v);
        has_pred[v] = true;
    }
    let mut seen = vec![false; n];
    let mut paths = Vec::new();
    for s in 0..n {
        if has_pred[s] || next[s].is_none() {
            continue;
        }
        let (mut x, mut len) = (s, 0);
        seen[s] = true;
        while let Some(y) = next[x] {
            seen[y] = true;
            x = y;
            len += 1;
        }
        paths.push(len);
    }
    let mut cycles = Vec::new();
    for s in 0..n {
        if seen[s] || next[s].is_none() {
            continue;
        }
        let (mut x, mut len) = (s, 0);
        loop {
            seen[x] = true;
            len += 1;
            x = next[x].unwrap();
            if x == s {
                break;
            }
        }
        cycles.push(len);
    }
    (cycles, paths)
}

fn sup(a: &AllowedLengths) -> Option<u64> {
    match a {
        AllowedLengths::Finite(set) => set.iter().copied().max(),
        _ => None,
    }
}

/// Admissible, cycles of color `i` in `A_i`, paths of color `i` shorter than `sup A_i`.
pub fn a_admissible(edges: &[BTreeSet<(usize, usize)>], n: usize, cfg: &ModelConfig) -> bool {
    admissible(edges)
        && edges.iter().enumerate().all(|(c, set)| {
            let a = cfg.allowed(c + 1);
            let (cycles, paths) = walk(set, n);
            cycles.iter().all(|&l| a.contains(l))
                && sup(a).is_none_or(|d| paths.iter().all(|&l| l < d))
        })
}

pub fn chi(edges: &[BTreeSet<(usize, usize)>], n: usize, cfg: &ModelConfig) -> Rational64 {
    let mut x =
        Rational64::from_integer(n as i64 - edges.iter().map(|s| s.len() as i64).sum::<i64>());
    for (c, set) in edges.iter().enumerate() {
        if let Some(d) = sup(cfg.allowed(c + 1)) {
            for l in walk(set, n).0 {
                x += Rational64::new(l as i64, d as i64);
            }
        }
    }
    x
}

/// `C(σ, w, A)` by filtering all set partitions; `anchors` must land in distinct blocks.
pub fn brute_c(g: &ColoredGraph, anchors: &[usize], cfg: &ModelConfig) -> BTreeSet<Vec<usize>> {
    set_partitions(g.num_vertices())
        .into_iter()
        .filter(|lab| {
            let hit: BTreeSet<usize> = anchors.iter().map(|&a| lab[a]).collect();
            hit.len() == anchors.len()
                && a_admissible(&quotient_edges(g, lab), num_blocks(lab), cfg)
        })
        .collect()
}

/// `Δ₁` refines `Δ₂`.
pub fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    (0..fine.len()).all(|u| (0..fine.len()).all(|v| fine[u] != fine[v] || coarse[u] == coarse[v]))
}

/// The admissible partition refining every other admissible partition.
pub fn brute_minimal_admissible(g: &ColoredGraph) -> Vec<usize> {
    let all: Vec<Vec<usize>> = set_partitions(g.num_vertices())
        .into_iter()
        .filter(|lab| admissible(&quotient_edges(g, lab)))
        .collect();
    let finest = all
        .iter()
        .max_by_key(|lab| num_blocks(lab))
        .expect("the one-block partition is admissible");
    assert!(
        all.iter().all(|lab| refines(finest, lab)),
        "no unique minimal admissible partition"
    );
    finest.clone()
}

/// All of `S_n` as image vectors, by swapping.
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            go(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(0, &mut (0..n).collect(), &mut out);
    out
}

pub fn cycle_lengths_of(images: &[usize]) -> Vec<u64> {
    let mut seen = vec![false; images.len()];
    let mut out = Vec::new();
    for s in 0..images.len() {
        if seen[s] {
            continue;
        }
        let (mut x, mut len) = (s, 0);
        while !seen[x] {
            seen[x] = true;
            x = images[x];
            len += 1;
        }
        out.push(len);
    }
    out
}

/// `S_n(A)` as image vectors.
pub fn brute_restricted(n: usize, a: &AllowedLengths) -> Vec<Vec<usize>> {
    all_perms(n)
        .into_iter()
        .filter(|p| cycle_lengths_of(p).iter().all(|&l| a.contains(l)))
        .collect()
}

pub fn degree_of(a: &AllowedLengths) -> Degree {
    sup(a).map_or(Degree::Infinite, Degree::Finite)
}
