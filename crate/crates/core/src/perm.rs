//! Permutations of `[n]`.
//!
//! Internally a permutation is stored as its 0-based image vector. Every
//! textual form is 1-based: one-line arrays `[σ(1),…,σ(n)]` and cycle
//! notation `(1 2 3)(4 5)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, …, n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {} outside [0, {n})",
                    x
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "image {} repeated",
                    x + 1
                )));
            }
        }
        Ok(Permutation { map })
    }

    /// Builds a permutation from a 1-based one-line array.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let map = images
            .iter()
            .map(|&x| {
                x.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation("one-line entries start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(map)
    }

    /// Builds a permutation of `[n]` from disjoint 0-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} outside [{n}]",
                        x + 1
                    )));
                }
                if std::mem::replace(&mut used[x], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} in two cycles",
                        x + 1
                    )));
                }
                map[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { map })
    }

    /// Size `n` of the underlying set.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Image of the 0-based point `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    /// 1-based one-line array.
    pub fn one_line(&self) -> Vec<usize> {
        self.map.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { map: inv }
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Permutation {
            map: other.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exponent: i64) -> Self {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc = Self::identity(self.len());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = sq.compose(&acc).expect("same size");
            }
            sq = sq.compose(&sq).expect("same size");
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles, fixed points included, each starting at its smallest
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.map[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.map[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Lengths of all cycles, in the order of [`Permutation::cycles`].
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.map[x];
            }
            out.push(len);
        }
        out
    }

    /// `(N_1, …, N_q)`: the number of cycles of each length up to `q`.
    pub fn cycle_counts(&self, q: usize) -> CycleCounts {
        let mut counts = vec![0u64; q];
        for len in self.cycle_lengths() {
            if len <= q {
                counts[len - 1] += 1;
            }
        }
        CycleCounts(counts)
    }

    /// `N_l` for every `l` in `1..=n`.
    pub fn full_cycle_counts(&self) -> CycleCounts {
        self.cycle_counts(self.len().max(1))
    }

    /// Cycle notation including fixed points, e.g. `(1 3)(2)`.
    pub fn to_cycle_notation(&self) -> String {
        let mut s = String::new();
        for cycle in self.cycles() {
            s.push('(');
            let parts: Vec<String> = cycle.iter().map(|x| (x + 1).to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        s
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)` or `(1)`.
    ///
    /// The degree is the largest point mentioned; unmentioned points below it
    /// are fixed. Entries may be separated by spaces or commas.
    pub fn parse_cycles(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut i = 0;
        let mut max_point = 0usize;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b'(' => {
                    if current.is_some() {
                        return Err(syntax(i, "nested '('"));
                    }
                    current = Some(Vec::new());
                    i += 1;
                }
                b')' => {
                    let cycle = current.take().ok_or_else(|| syntax(i, "unmatched ')'"))?;
                    if cycle.is_empty() {
                        return Err(syntax(i, "empty cycle"));
                    }
                    cycles.push(cycle);
                    i += 1;
                }
                b',' | b' ' | b'\t' | b'\n' | b'\r' => i += 1,
                b'0'..=b'9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let value: usize = text[start..i]
                        .parse()
                        .map_err(|_| syntax(start, "number too large"))?;
                    if value == 0 {
                        return Err(syntax(start, "points start at 1"));
                    }
                    if value > MAX_PARSED_DEGREE {
                        return Err(syntax(start, "point exceeds the supported degree"));
                    }
                    let cycle = current
                        .as_mut()
                        .ok_or_else(|| syntax(start, "number outside a cycle"))?;
                    cycle.push(value - 1);
                    max_point = max_point.max(value);
                }
                _ => return Err(syntax(i, "unexpected character")),
            }
        }
        if current.is_some() {
            return Err(syntax(bytes.len(), "unterminated cycle"));
        }
        if cycles.is_empty() {
            return Err(syntax(0, "no cycles"));
        }
        Self::from_cycles(max_point, &cycles)
    }

    /// Parses a one-line array such as `[2,1,3]`.
    pub fn parse_one_line(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| syntax(0, "one-line form must be bracketed"))?;
        if inner.trim().is_empty() {
            return Ok(Self::identity(0));
        }
        let mut images = Vec::new();
        for part in inner.split(',') {
            let v: usize = part
                .trim()
                .parse()
                .map_err(|_| syntax(0, "expected a positive integer"))?;
            if v > MAX_PARSED_DEGREE {
                return Err(syntax(0, "entry exceeds the supported degree"));
            }
            images.push(v);
        }
        Self::from_one_line(&images)
    }

    /// Iterates over all `n!` permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((0..n).collect()),
        }
    }
}

const MAX_PARSED_DEGREE: usize = 1 << 20;

fn syntax(position: usize, message: &str) -> Error {
    Error::Syntax {
        position,
        message: message.to_string(),
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts cycle notation or a bracketed one-line array.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('[') {
            Self::parse_one_line(s)
        } else {
            Self::parse_cycles(s)
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_notation())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_one_line(&images).map_err(serde::de::Error::custom)
    }
}

/// Lexicographic enumeration of a symmetric group.
pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // standard next-permutation step
        let n = succ.len();
        let mut i = n.saturating_sub(1);
        while i > 0 && succ[i - 1] >= succ[i] {
            i -= 1;
        }
        if n > 1 && i > 0 {
            let mut j = n - 1;
            while succ[j] <= succ[i - 1] {
                j -= 1;
            }
            succ.swap(i - 1, j);
            succ[i..].reverse();
            self.next = Some(succ);
        }
        Some(Permutation { map: current })
    }
}

/// The cycle-count vector `(N_1, …, N_q)` of a permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleCounts(pub Vec<u64>);

impl CycleCounts {
    /// `N_l` for 1-based `l`; zero beyond the tracked range.
    pub fn get(&self, l: usize) -> u64 {
        if l == 0 {
            return 0;
        }
        self.0.get(l - 1).copied().unwrap_or(0)
    }

    pub fn q(&self) -> usize {
        self.0.len()
    }

    /// `Σ l·N_l` over the tracked lengths.
    pub fn weighted_total(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) * c)
            .sum()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p: Permutation = "(1 2 3)(4 5)".parse().unwrap();
        assert_eq!(p.one_line(), vec![2, 3, 1, 5, 4]);
        assert_eq!(p.to_cycle_notation(), "(1 2 3)(4 5)");
        let q: Permutation = "(1)".parse().unwrap();
        assert!(q.is_identity());
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn one_line_parse() {
        let p: Permutation = "[2, 1, 3]".parse().unwrap();
        assert_eq!(p.to_cycle_notation(), "(1 2)(3)");
        assert!("[1,1]".parse::<Permutation>().is_err());
        assert!("[0]".parse::<Permutation>().is_err());
    }

    #[test]
    fn malformed_cycles_rejected() {
        for bad in [
            "", "(", "()", "(1 2", "1 2", "((1))", "(1 1)", "(0)", "(a)", "(1)(1)",
        ] {
            assert!(Permutation::parse_cycles(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn compose_applies_right_first() {
        let a: Permutation = "(1 2)(3)".parse().unwrap();
        let b: Permutation = "(1)(2 3)".parse().unwrap();
        // a∘b sends 2 -> 3 -> 3 and 3 -> 2 -> 1
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.one_line(), vec![2, 3, 1]);
    }

    #[test]
    fn cycle_counts_examples() {
        assert_eq!(Permutation::identity(5).cycle_counts(2).0, vec![5, 0]);
        let p: Permutation = "(1 2 3)(4 5)".parse().unwrap();
        assert_eq!(p.cycle_counts(3).0, vec![0, 1, 1]);
        assert_eq!(p.full_cycle_counts().weighted_total(), 5);
    }

    #[test]
    fn enumerates_symmetric_group() {
        assert_eq!(Permutation::all(0).count(), 1);
        assert_eq!(Permutation::all(4).count(), 24);
        let mut all: Vec<_> = Permutation::all(4).collect();
        all.dedup();
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn power_and_inverse() {
        let p: Permutation = "(1 2 3 4)".parse().unwrap();
        assert!(p.pow(4).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.pow(2).to_cycle_notation(), "(1 3)(2 4)");
    }
}
