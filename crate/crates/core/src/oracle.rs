//! Brute-force ground truth over `S_n(A_1) × ⋯ × S_n(A_k)` at small `n`.
//!
//! Everything here is exact rational arithmetic and plain enumeration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{graph_of_pair, is_admissible, quotient, ColoredGraph};
use crate::model::{AllowedLengths, ModelConfig};
use crate::perm::{CycleCounts, Permutation};
use crate::search::{for_each_c, SearchOptions};
use crate::word::Word;

/// Largest `n` whose symmetric group is listed outright.
pub const MAX_ORACLE_N: usize = 10;

/// Default bound on the size of the product space enumerated.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Every element of `S_n(A)`, by filtering `S_n`.
pub fn restricted_permutations(n: usize, allowed: &AllowedLengths) -> Result<Vec<Permutation>> {
    if n > MAX_ORACLE_N {
        return Err(Error::Budget(format!(
            "n = {n} exceeds the oracle limit {MAX_ORACLE_N}"
        )));
    }
    Ok(Permutation::all(n)
        .filter(|p| {
            p.cycle_lengths()
                .iter()
                .all(|&l| allowed.contains(l as u64))
        })
        .collect())
}

struct Factors {
    lists: Vec<Vec<Permutation>>,
    inverses: Vec<Vec<Permutation>>,
}

impl Factors {
    fn new(w: &Word, n: usize, cfg: &ModelConfig, budget: u64) -> Result<Self> {
        if w.max_generator() > cfg.k() {
            return Err(Error::ArityMismatch {
                expected: w.max_generator(),
                found: cfg.k(),
            });
        }
        let lists = cfg
            .all_allowed()
            .iter()
            .map(|a| restricted_permutations(n, a))
            .collect::<Result<Vec<_>>>()?;
        for (i, list) in lists.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::Infeasible {
                    n,
                    allowed: cfg.allowed(i + 1).to_string(),
                });
            }
        }
        let size = lists
            .iter()
            .try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64));
        match size {
            Some(s) if s <= budget => {}
            _ => {
                return Err(Error::Budget(format!(
                    "product space exceeds {budget} tuples"
                )))
            }
        }
        let inverses = lists
            .iter()
            .map(|l| l.iter().map(Permutation::inverse).collect())
            .collect();
        Ok(Factors { lists, inverses })
    }

    fn total(&self) -> BigInt {
        self.lists.iter().map(|l| BigInt::from(l.len())).product()
    }

    /// Calls `f` with every index tuple.
    fn for_each(&self, mut f: impl FnMut(&[usize])) {
        let mut idx = vec![0; self.lists.len()];
        loop {
            f(&idx);
            let mut i = 0;
            loop {
                if i == idx.len() {
                    return;
                }
                idx[i] += 1;
                if idx[i] < self.lists[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    fn image(&self, w: &Word, idx: &[usize], mut x: usize) -> usize {
        for l in w.letters().iter().rev() {
            let g = l.generator - 1;
            x = if l.inverse {
                self.inverses[g][idx[g]].apply(x)
            } else {
                self.lists[g][idx[g]].apply(x)
            };
        }
        x
    }
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `P(σ_n(m) = σ(m) for every m ∈ [p])`.
pub fn exact_event_probability(
    sigma: &Permutation,
    w: &Word,
    n: usize,
    cfg: &ModelConfig,
) -> Result<BigRational> {
    if sigma.len() > n {
        return Err(Error::InvalidParameter(format!(
            "σ acts on {} points but n = {n}",
            sigma.len()
        )));
    }
    let factors = Factors::new(w, n, cfg, DEFAULT_BUDGET)?;
    let mut hits = 0u64;
    factors.for_each(|idx| {
        if (0..sigma.len()).all(|m| factors.image(w, idx, m) == sigma.apply(m)) {
            hits += 1;
        }
    });
    Ok(ratio(BigInt::from(hits), factors.total()))
}

/// Exact law of `(N_1, …, N_q)(σ_n)`.
pub fn exact_joint_law(
    w: &Word,
    n: usize,
    cfg: &ModelConfig,
    q: usize,
) -> Result<BTreeMap<CycleCounts, BigRational>> {
    let factors = Factors::new(w, n, cfg, DEFAULT_BUDGET)?;
    let mut counts: BTreeMap<CycleCounts, u64> = BTreeMap::new();
    factors.for_each(|idx| {
        let images: Vec<usize> = (0..n).map(|x| factors.image(w, idx, x)).collect();
        let p = Permutation::from_images(images).expect("a word in permutations is a permutation");
        *counts.entry(p.cycle_counts(q)).or_default() += 1;
    });
    let total = factors.total();
    Ok(counts
        .into_iter()
        .map(|(k, c)| (k, ratio(BigInt::from(c), total.clone())))
        .collect())
}

fn single_color(f: &ColoredGraph) -> Result<Option<usize>> {
    let used: Vec<usize> = (1..=f.k())
        .filter(|&c| f.edges(c).next().is_some())
        .collect();
    match used.as_slice() {
        [] => Ok(None),
        [c] => Ok(Some(*c)),
        _ => Err(Error::InvalidParameter("graph is not monochromatic".into())),
    }
}

/// Number of `s` in `perms` with `s(γ(v)) = γ(u)` for every edge `u → v`.
fn realizations(
    f: &ColoredGraph,
    color: Option<usize>,
    placement: &[usize],
    perms: &[Permutation],
) -> usize {
    let edges: Vec<(usize, usize)> = color.map(|c| f.edges(c).collect()).unwrap_or_default();
    perms
        .iter()
        .filter(|s| {
            edges
                .iter()
                .all(|&(u, v)| s.apply(placement[v]) == placement[u])
        })
        .count()
}

fn p_n_from_list(f: &ColoredGraph, n: usize, perms: &[Permutation]) -> Result<BigRational> {
    if !is_admissible(f) {
        return Err(Error::NotAdmissible);
    }
    let color = single_color(f)?;
    let m = f.num_vertices();
    if m > n {
        return Ok(BigRational::zero());
    }
    let forward: Vec<usize> = (0..m).collect();
    let backward: Vec<usize> = (0..m).map(|v| n - 1 - v).collect();
    let count = realizations(f, color, &forward, perms);
    assert_eq!(
        count,
        realizations(f, color, &backward, perms),
        "realization count depends on the placement"
    );
    Ok(ratio(BigInt::from(count), BigInt::from(perms.len())))
}

/// Probability that a uniform `s ∈ S_n(A)` realizes a fixed placement of
/// the partial injection drawn by the monochromatic graph `F`.
pub fn p_n_a(f: &ColoredGraph, n: usize, allowed: &AllowedLengths) -> Result<BigRational> {
    let perms = restricted_permutations(n, allowed)?;
    if perms.is_empty() {
        return Err(Error::Infeasible {
            n,
            allowed: allowed.to_string(),
        });
    }
    p_n_from_list(f, n, &perms)
}

/// Both sides of the exact partition-sum identity for `P(σ_n extends σ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    #[serde(serialize_with = "crate::oracle::ser_ratio")]
    pub lhs: BigRational,
    #[serde(serialize_with = "crate::oracle::ser_ratio")]
    pub rhs: BigRational,
    pub equal: bool,
    /// `|C|`.
    pub partitions: u64,
}

pub(crate) fn ser_ratio<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

/// `p/q`, with `q` always present.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `(n − p)(n − p − 1)⋯` with `count` factors.
fn falling(top: usize, count: usize) -> BigInt {
    if count > top {
        return BigInt::zero();
    }
    (0..count).map(|j| BigInt::from(top - j)).product()
}

/// `LHS = P(σ_n(m) = σ(m) ∀m ≤ p)` by enumeration;
/// `RHS = Σ_{Δ ∈ C} (n−p)_{|Δ|−p} ∏_r p_n^{(A_r)}((G(σ,w)/Δ)[r])`.
pub fn verify_partition_identity(
    sigma: &Permutation,
    w: &Word,
    n: usize,
    cfg: &ModelConfig,
) -> Result<IdentityReport> {
    let lhs = exact_event_probability(sigma, w, n, cfg)?;
    let lists = cfg
        .all_allowed()
        .iter()
        .map(|a| restricted_permutations(n, a))
        .collect::<Result<Vec<_>>>()?;
    let g = graph_of_pair(sigma, w)?;
    let p = sigma.len();
    let mut rhs = BigRational::zero();
    let mut partitions = 0u64;
    let mut failure = None;
    for_each_c(sigma, w, cfg, SearchOptions::default(), |delta, _| {
        partitions += 1;
        if failure.is_some() {
            return;
        }
        let blocks = delta.num_blocks();
        let weight = falling(n - p, blocks - p);
        if weight.is_zero() {
            return;
        }
        let q = quotient(&g, delta).expect("partition of G's vertices");
        let mut term = BigRational::from_integer(weight);
        for (r, perms) in lists.iter().enumerate() {
            match p_n_from_list(&q.color_restriction(r + 1), n, perms) {
                Ok(x) => term *= x,
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
        rhs += term;
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(IdentityReport {
        equal: lhs == rhs,
        lhs,
        rhs,
        partitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_of_word;
    use crate::sampler::count_restricted;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn cfg(sets: &[&str]) -> ModelConfig {
        ModelConfig::parse(sets).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn event_examples() {
        let id1 = Permutation::identity(1);
        assert_eq!(
            exact_event_probability(&id1, &w("g1"), 3, &cfg(&["{1,2}"])).unwrap(),
            q(1, 2)
        );
        assert_eq!(
            exact_event_probability(&id1, &w("g1 g1"), 2, &cfg(&["{2}"])).unwrap(),
            q(1, 1)
        );
        assert_eq!(
            exact_event_probability(&id1, &w("g1 g2"), 2, &cfg(&["{2}", "{2}"])).unwrap(),
            q(1, 1)
        );
    }

    #[test]
    fn joint_law_examples() {
        let law = exact_joint_law(&w("g1"), 3, &cfg(&["all"]), 3).unwrap();
        assert_eq!(law[&CycleCounts(vec![3, 0, 0])], q(1, 6));
        assert_eq!(law[&CycleCounts(vec![1, 1, 0])], q(1, 2));
        assert_eq!(law[&CycleCounts(vec![0, 0, 1])], q(1, 3));
        let law = exact_joint_law(&w("g1 g2"), 4, &cfg(&["{2}", "{2}"]), 4).unwrap();
        assert!(law.keys().all(|c| c.as_slice().iter().all(|x| x % 2 == 0)));
        let law = exact_joint_law(&w("g1 g1^-1"), 4, &cfg(&["all"]), 2).unwrap();
        assert_eq!(law.len(), 1);
        assert_eq!(law[&CycleCounts(vec![4, 0])], q(1, 1));
    }

    #[test]
    fn p_n_examples() {
        let edge = graph_of_word(&w("g1"));
        // single vertex with a loop: G(g1) is a 1-cycle; use a 2-vertex path instead
        let mut path = ColoredGraph::new(2, 1);
        path.add_edge(1, 0, 1).unwrap();
        for n in 2..=6 {
            assert_eq!(
                p_n_a(&path, n, &"all".parse().unwrap()).unwrap(),
                q(1, n as i64)
            );
        }
        let a: AllowedLengths = "{1,3}".parse().unwrap();
        let cycle = graph_of_word(&w("g1^3"));
        let expect = BigRational::new(
            count_restricted(3, &a).into(),
            count_restricted(6, &a).into(),
        );
        assert_eq!(p_n_a(&cycle, 6, &a).unwrap(), expect);
        assert_eq!(
            p_n_a(&edge, 4, &a).unwrap(),
            BigRational::new(
                count_restricted(3, &a).into(),
                count_restricted(4, &a).into()
            )
        );
        let mut long = ColoredGraph::new(4, 1);
        for i in 0..3 {
            long.add_edge(1, i, i + 1).unwrap();
        }
        assert!(p_n_a(&long, 6, &"{2,3}".parse().unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn identity_examples() {
        let id1 = Permutation::identity(1);
        let r = verify_partition_identity(&id1, &w("g1 g2"), 4, &cfg(&["{1,2}", "{1,2}"])).unwrap();
        assert!(r.equal, "{} vs {}", r.lhs, r.rhs);
        assert_eq!(r.lhs, q(7, 25));
        let r = verify_partition_identity(&id1, &w("g1"), 3, &cfg(&["{1,2}"])).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (q(1, 2), q(1, 2)));
        let t: Permutation = "(1 2)".parse().unwrap();
        assert!(
            verify_partition_identity(&t, &w("g1 g2"), 4, &cfg(&["{1,2}", "{1,2}"]))
                .unwrap()
                .equal
        );
    }

    #[test]
    fn falling_factorial() {
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(falling(3, 0), BigInt::from(1));
        assert_eq!(falling(2, 3), BigInt::from(0));
    }
}
