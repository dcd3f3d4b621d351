//! The partition set `C(σ, w, A_1, …, A_k)`, its χ-spectrum, closed-form
//! counts for two involutions, and the limit-law dispatch.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{graph_of_pair, PathRule, VertexPartition};
use crate::model::{AllowedLengths, Degree, ModelConfig};
use crate::perm::Permutation;
use crate::word::{quotient_order, OrderKind, Word};

/// Default bound on `p·|w|` for enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub vertex_cap: usize,
    pub path_rule: PathRule,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            vertex_cap: DEFAULT_VERTEX_CAP,
            path_rule: PathRule::BelowDegree,
        }
    }
}

const NONE: usize = usize::MAX;

struct Search<'a, F> {
    n: usize,
    /// Edges `(color index, u, v)` whose later endpoint is the key vertex.
    completes: Vec<Vec<(usize, usize, usize)>>,
    is_anchor: Vec<bool>,
    allowed: &'a [AllowedLengths],
    degrees: Vec<Degree>,
    rule: PathRule,
    block_of: Vec<usize>,
    blocks: usize,
    block_anchor: Vec<bool>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    undo: Vec<(usize, usize, usize)>,
    edges: i64,
    cycle_sum: Rational64,
    visit: F,
}

impl<F: FnMut(&VertexPartition, Rational64)> Search<'_, F> {
    fn dfs(&mut self, v: usize) {
        if v == self.n {
            let chi = Rational64::from_integer(self.blocks as i64 - self.edges) + self.cycle_sum;
            let partition = VertexPartition::from_labels(&self.block_of);
            (self.visit)(&partition, chi);
            return;
        }
        let anchor = self.is_anchor[v];
        for b in 0..=self.blocks {
            let fresh = b == self.blocks;
            if anchor && !fresh && self.block_anchor[b] {
                continue;
            }
            let had_anchor = self.block_anchor[b];
            self.block_of[v] = b;
            self.block_anchor[b] |= anchor;
            if fresh {
                self.blocks += 1;
            }
            let (mark, edges, cycle_sum) = (self.undo.len(), self.edges, self.cycle_sum);
            let mut ok = true;
            for i in 0..self.completes[v].len() {
                let (c, x, y) = self.completes[v][i];
                if !self.add_edge(c, self.block_of[x], self.block_of[y]) {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.dfs(v + 1);
            }
            while self.undo.len() > mark {
                let (c, from, to) = self.undo.pop().expect("nonempty");
                self.out[c][from] = NONE;
                self.inn[c][to] = NONE;
            }
            self.edges = edges;
            self.cycle_sum = cycle_sum;
            self.block_anchor[b] = had_anchor;
            if fresh {
                self.blocks -= 1;
            }
        }
        self.block_of[v] = NONE;
    }

    /// Adds a block edge; false when the quotient can no longer be in `C`.
    fn add_edge(&mut self, c: usize, from: usize, to: usize) -> bool {
        if self.out[c][from] == to {
            return true;
        }
        if self.out[c][from] != NONE || self.inn[c][to] != NONE {
            return false;
        }
        self.out[c][from] = to;
        self.inn[c][to] = from;
        self.undo.push((c, from, to));
        self.edges += 1;

        let mut x = to;
        let mut len = 1u64;
        while x != from {
            match self.out[c][x] {
                NONE => break,
                y => {
                    x = y;
                    len += 1;
                }
            }
        }
        if x == from {
            // blocks never merge later, so a closed cycle is final
            if !self.allowed[c].contains(len) {
                return false;
            }
            self.cycle_sum += self.degrees[c].ratio(len);
            return true;
        }
        let mut y = from;
        while self.inn[c][y] != NONE {
            y = self.inn[c][y];
            len += 1;
        }
        self.rule == PathRule::Unrestricted || self.degrees[c].is_above(len)
    }
}

fn check_inputs(sigma: &Permutation, w: &Word, cfg: &ModelConfig) -> Result<()> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced);
    }
    if sigma.is_empty() {
        return Err(Error::InvalidParameter(
            "σ must act on at least one point".into(),
        ));
    }
    if w.max_generator() > cfg.k() {
        return Err(Error::ArityMismatch {
            expected: w.max_generator(),
            found: cfg.k(),
        });
    }
    Ok(())
}

/// Calls `visit(Δ, χ(G(σ,w)/Δ))` for every `Δ ∈ C(σ, w, A)`, each exactly once.
///
/// Partitions are built as restricted growth strings over the vertices in
/// index order. An edge is placed once both endpoints have blocks, and a
/// branch is cut as soon as the quotient is inadmissible, closes a cycle of
/// a disallowed length, or carries a path of length `≥ d_i`; none of these
/// can be undone by assigning later vertices.
pub fn for_each_c<F>(
    sigma: &Permutation,
    w: &Word,
    cfg: &ModelConfig,
    opts: SearchOptions,
    visit: F,
) -> Result<()>
where
    F: FnMut(&VertexPartition, Rational64),
{
    check_inputs(sigma, w, cfg)?;
    let n = sigma.len() * w.len();
    if n > opts.vertex_cap {
        return Err(Error::TooManyVertices {
            vertices: n,
            cap: opts.vertex_cap,
        });
    }
    let g = graph_of_pair(sigma, w)?;
    let k = cfg.k();
    let mut completes = vec![Vec::new(); n];
    for (c, u, v) in g.all_edges() {
        completes[u.max(v)].push((c - 1, u, v));
    }
    let mut search = Search {
        n,
        completes,
        is_anchor: (0..n).map(|v| v % w.len() == 0).collect(),
        allowed: cfg.all_allowed(),
        degrees: cfg
            .all_allowed()
            .iter()
            .map(AllowedLengths::degree)
            .collect(),
        rule: opts.path_rule,
        block_of: vec![NONE; n],
        blocks: 0,
        block_anchor: vec![false; n + 1],
        out: vec![vec![NONE; n]; k],
        inn: vec![vec![NONE; n]; k],
        undo: Vec::new(),
        edges: 0,
        cycle_sum: Rational64::zero(),
        visit,
    };
    search.dfs(0);
    Ok(())
}

pub fn enumerate_c(
    sigma: &Permutation,
    w: &Word,
    cfg: &ModelConfig,
) -> Result<Vec<VertexPartition>> {
    let mut out = Vec::new();
    for_each_c(sigma, w, cfg, SearchOptions::default(), |d, _| {
        out.push(d.clone())
    })?;
    Ok(out)
}

/// Histogram of χ over `C`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChiSpectrum {
    pub counts: BTreeMap<Rational64, u64>,
}

impl ChiSpectrum {
    /// `|C|`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, chi: Rational64) -> u64 {
        self.counts.get(&chi).copied().unwrap_or(0)
    }

    /// `(χ_max, multiplicity)`, or `None` when `C` is empty.
    pub fn leading(&self) -> Option<(Rational64, u64)> {
        self.counts.iter().next_back().map(|(&c, &m)| (c, m))
    }
}

impl Serialize for ChiSpectrum {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_map(self.counts.iter().rev().map(|(c, m)| (c.to_string(), m)))
    }
}

pub fn chi_spectrum(sigma: &Permutation, w: &Word, cfg: &ModelConfig) -> Result<ChiSpectrum> {
    chi_spectrum_with(sigma, w, cfg, SearchOptions::default())
}

pub fn chi_spectrum_with(
    sigma: &Permutation,
    w: &Word,
    cfg: &ModelConfig,
    opts: SearchOptions,
) -> Result<ChiSpectrum> {
    let mut spectrum = ChiSpectrum::default();
    for_each_c(sigma, w, cfg, opts, |_, chi| {
        *spectrum.counts.entry(chi).or_default() += 1
    })?;
    Ok(spectrum)
}

/// Largest χ over `C` and how many partitions attain it.
pub fn leading_term(
    sigma: &Permutation,
    w: &Word,
    cfg: &ModelConfig,
) -> Result<Option<(Rational64, u64)>> {
    Ok(chi_spectrum(sigma, w, cfg)?.leading())
}

/// The three two-involution models for `w = g_1 g_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InvolutionCase {
    /// `A_1 = A_2 = {1,2}`.
    BothOneTwo,
    /// `A_1 = A_2 = {2}`.
    BothTwo,
    /// `{A_1, A_2} = {{2}, {1,2}}`.
    Mixed,
}

impl InvolutionCase {
    pub fn from_sets(a1: &AllowedLengths, a2: &AllowedLengths) -> Option<Self> {
        let one_two = AllowedLengths::finite([1, 2]).expect("valid");
        let two = AllowedLengths::finite([2]).expect("valid");
        match (a1 == &one_two, a1 == &two, a2 == &one_two, a2 == &two) {
            (true, _, true, _) => Some(InvolutionCase::BothOneTwo),
            (_, true, _, true) => Some(InvolutionCase::BothTwo),
            (true, _, _, true) | (_, true, true, _) => Some(InvolutionCase::Mixed),
            _ => None,
        }
    }

    /// The model `(A_1, A_2)`; the mixed case uses `A_1 = {2}`.
    pub fn model(self) -> ModelConfig {
        let sets: [&str; 2] = match self {
            InvolutionCase::BothOneTwo => ["{1,2}", "{1,2}"],
            InvolutionCase::BothTwo => ["{2}", "{2}"],
            InvolutionCase::Mixed => ["{2}", "{1,2}"],
        };
        ModelConfig::parse(&sets).expect("valid")
    }

    /// Shift `b` in the factor `E[(√l X + b)^{N_l}]`.
    fn shift(self, l: u64) -> BigInt {
        BigInt::from(match self {
            InvolutionCase::BothOneTwo => l + 1,
            InvolutionCase::BothTwo => 1,
            InvolutionCase::Mixed if l % 2 == 1 => 1,
            InvolutionCase::Mixed => l / 2 + 1,
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            InvolutionCase::BothOneTwo => "i",
            InvolutionCase::BothTwo => "ii",
            InvolutionCase::Mixed => "iii",
        }
    }
}

/// `E[(√l X + b)^N]` for standard Gaussian `X`, as an exact integer.
pub fn gaussian_shift_moment(l: u64, b: &BigInt, n: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    let mut double_fact = BigInt::one(); // (j-1)!! for the current even j
    let mut l_pow = BigInt::one(); // l^{j/2}
    for j in 0..=n {
        if j > 0 {
            binom = binom * (n - j + 1) / j;
        }
        if j % 2 == 0 {
            if j > 0 {
                double_fact *= j - 1;
                l_pow *= l;
            }
            total += &binom * &l_pow * &double_fact * num_traits::pow(b.clone(), (n - j) as usize);
        }
    }
    total
}

/// `|C(σ, g_1 g_2, A_1, A_2)|` from the closed form.
pub fn involution_count(sigma: &Permutation, case: InvolutionCase) -> BigInt {
    let counts = sigma.full_cycle_counts();
    (1..=counts.q())
        .map(|l| {
            let l = l as u64;
            gaussian_shift_moment(l, &case.shift(l), counts.get(l as usize))
        })
        .product()
}

/// Which lengths the lower bound `liminf E[N_l] ≥ 1/l` covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LowerBound {
    AllLengths,
    /// Lengths `l` with `l·|α| ∈ A_i`.
    MultiplesIn {
        generator: usize,
        exponent: i64,
    },
}

impl LowerBound {
    pub fn covers(&self, l: u64, cfg: &ModelConfig) -> bool {
        match *self {
            LowerBound::AllLengths => true,
            LowerBound::MultiplesIn {
                generator,
                exponent,
            } => cfg.allowed(generator).contains(l * exponent.unsigned_abs()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LimitKind {
    /// `(N_1, …, N_q) → Poisson(1) ⊗ Poisson(1/2) ⊗ ⋯ ⊗ Poisson(1/q)`.
    PoissonProduct,
    InvolutionCase(InvolutionCase),
    /// `N_d/n → 1/d` and `N_l/n → 0` for `l ≠ d`.
    DegenerateOrder(u64),
    LowerBoundOnly(LowerBound),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    AllInfinitePrimitive,
    ProductOfGenerators,
    TwoInvolutions,
    FiniteOrder,
    ExpectationLowerBound,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::AllInfinitePrimitive => "all allowed sets infinite, primitive word of length > 1",
            Rule::ProductOfGenerators => "w = g1 ... gk, not two involutions",
            Rule::TwoInvolutions => "w = g1 g2 with both allowed sets inside {1,2}",
            Rule::FiniteOrder => "w has finite order in the quotient group",
            Rule::ExpectationLowerBound => "infinite order; only a lower bound on E[N_l]",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LimitPrediction {
    pub kind: LimitKind,
    pub rule: Rule,
}

impl fmt::Display for LimitPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LimitKind::PoissonProduct => f.write_str("PoissonProduct"),
            LimitKind::InvolutionCase(c) => write!(f, "InvolutionCase({})", c.label()),
            LimitKind::DegenerateOrder(d) => write!(f, "DegenerateOrder({d})"),
            LimitKind::LowerBoundOnly(LowerBound::AllLengths) => {
                f.write_str("LowerBoundOnly(all l)")
            }
            LimitKind::LowerBoundOnly(LowerBound::MultiplesIn {
                generator,
                exponent,
            }) => {
                write!(
                    f,
                    "LowerBoundOnly(l with l*{} in A_{generator})",
                    exponent.unsigned_abs()
                )
            }
        }
    }
}

/// The limit law of `(N_1, …, N_q)(σ_n)`, first matching rule wins.
pub fn predict_limit(w: &Word, cfg: &ModelConfig) -> Result<LimitPrediction> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced);
    }
    if w.max_generator() > cfg.k() {
        return Err(Error::ArityMismatch {
            expected: w.max_generator(),
            found: cfg.k(),
        });
    }
    let pick = |kind, rule| Ok(LimitPrediction { kind, rule });
    let all_infinite = cfg.all_allowed().iter().all(AllowedLengths::is_infinite);
    if all_infinite && w.len() > 1 && w.is_primitive()? {
        return pick(LimitKind::PoissonProduct, Rule::AllInfinitePrimitive);
    }
    let m = w.len();
    if m >= 2 && *w == Word::product_of_generators(m) {
        let involutions =
            m == 2 && cfg.allowed(1).within_involutions() && cfg.allowed(2).within_involutions();
        if !involutions {
            return pick(LimitKind::PoissonProduct, Rule::ProductOfGenerators);
        }
        if let Some(case) = InvolutionCase::from_sets(cfg.allowed(1), cfg.allowed(2)) {
            return pick(LimitKind::InvolutionCase(case), Rule::TwoInvolutions);
        }
    }
    let order = quotient_order(w, &cfg.degrees());
    match (order.kind, order.conjugate_power) {
        (OrderKind::Identity, _) => pick(LimitKind::DegenerateOrder(1), Rule::FiniteOrder),
        (OrderKind::Finite(d), _) => pick(LimitKind::DegenerateOrder(d), Rule::FiniteOrder),
        (OrderKind::Infinite, Some((generator, exponent))) => pick(
            LimitKind::LowerBoundOnly(LowerBound::MultiplesIn {
                generator,
                exponent,
            }),
            Rule::ExpectationLowerBound,
        ),
        (OrderKind::Infinite, None) => pick(
            LimitKind::LowerBoundOnly(LowerBound::AllLengths),
            Rule::ExpectationLowerBound,
        ),
    }
}
