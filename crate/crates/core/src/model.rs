//! Allowed cycle-length sets and the model configuration `(A_1, …, A_k)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use crate::error::{Error, Result};

/// `d = sup A`: a finite integer `≥ 2` or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    Finite(u64),
    Infinite,
}

impl Degree {
    pub fn finite(self) -> Option<u64> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }

    /// `length / d` with `length / ∞ = 0`.
    pub fn ratio(self, length: u64) -> Rational64 {
        match self {
            Degree::Finite(d) => Rational64::new(length as i64, d as i64),
            Degree::Infinite => Rational64::from_integer(0),
        }
    }

    /// `length < d`.
    pub fn is_above(self, length: u64) -> bool {
        match self {
            Degree::Finite(d) => length < d,
            Degree::Infinite => true,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Degree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "all" | "∞" | "infinity" => Ok(Degree::Infinite),
            t => {
                let d: u64 = t
                    .parse()
                    .map_err(|_| Error::InvalidModel(format!("bad degree {t:?}")))?;
                if d < 2 {
                    return Err(Error::InvalidModel(format!(
                        "degree {d} must be at least 2"
                    )));
                }
                Ok(Degree::Finite(d))
            }
        }
    }
}

/// Degrees `(d_1, …, d_k)` of the quotient `F_k/[g_1^{d_1}, …, g_k^{d_k}]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Degrees(Vec<Degree>);

impl Degrees {
    pub fn new(degrees: Vec<Degree>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidModel(
                "at least one generator is required".into(),
            ));
        }
        if let Some(d) = degrees.iter().find_map(|d| d.finite().filter(|&d| d < 2)) {
            return Err(Error::InvalidModel(format!(
                "degree {d} must be at least 2"
            )));
        }
        Ok(Degrees(degrees))
    }

    /// The free group on `k` generators: every degree infinite.
    pub fn free(k: usize) -> Self {
        Degrees(vec![Degree::Infinite; k.max(1)])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Degree of 1-based generator `i`; generators beyond `k` are free.
    pub fn of(&self, generator: usize) -> Degree {
        self.0
            .get(generator.wrapping_sub(1))
            .copied()
            .unwrap_or(Degree::Infinite)
    }

    pub fn as_slice(&self) -> &[Degree] {
        &self.0
    }
}

impl fmt::Display for Degrees {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Degree::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Degrees {
    type Err = Error;

    /// Comma-separated list, e.g. `4,5,inf`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        Degrees::new(
            inner
                .split(',')
                .map(str::parse)
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

/// A set `A` of allowed cycle lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AllowedLengths {
    /// A finite set of positive integers.
    Finite(BTreeSet<u64>),
    /// All positive integers except a finite set.
    Cofinite(BTreeSet<u64>),
    All,
}

impl AllowedLengths {
    pub fn finite<I: IntoIterator<Item = u64>>(lengths: I) -> Result<Self> {
        let set: BTreeSet<u64> = lengths.into_iter().collect();
        let a = AllowedLengths::Finite(set);
        a.validate()?;
        Ok(a)
    }

    pub fn cofinite<I: IntoIterator<Item = u64>>(excluded: I) -> Result<Self> {
        let set: BTreeSet<u64> = excluded.into_iter().collect();
        let a = if set.is_empty() {
            AllowedLengths::All
        } else {
            AllowedLengths::Cofinite(set)
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        match self {
            AllowedLengths::Finite(set) => {
                if set.is_empty() {
                    return Err(Error::InvalidModel("allowed set is empty".into()));
                }
                if set.contains(&0) {
                    return Err(Error::InvalidModel("cycle lengths are positive".into()));
                }
                if set.len() == 1 && set.contains(&1) {
                    return Err(Error::InvalidModel("allowed set {1} is excluded".into()));
                }
                Ok(())
            }
            AllowedLengths::Cofinite(excluded) => {
                if excluded.contains(&0) {
                    return Err(Error::InvalidModel("cycle lengths are positive".into()));
                }
                Ok(())
            }
            AllowedLengths::All => Ok(()),
        }
    }

    pub fn contains(&self, length: u64) -> bool {
        match self {
            AllowedLengths::Finite(set) => set.contains(&length),
            AllowedLengths::Cofinite(excluded) => length >= 1 && !excluded.contains(&length),
            AllowedLengths::All => length >= 1,
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, AllowedLengths::Finite(_))
    }

    /// `sup A`.
    pub fn degree(&self) -> Degree {
        match self {
            AllowedLengths::Finite(set) => {
                Degree::Finite(*set.iter().next_back().expect("nonempty"))
            }
            _ => Degree::Infinite,
        }
    }

    /// Allowed lengths in `1..=n`, ascending.
    pub fn lengths_up_to(&self, n: usize) -> Vec<usize> {
        match self {
            AllowedLengths::Finite(set) => set
                .iter()
                .map(|&l| l as usize)
                .take_while(|&l| l <= n)
                .collect(),
            _ => (1..=n).filter(|&l| self.contains(l as u64)).collect(),
        }
    }

    /// True when `A ⊆ {1, 2}`.
    pub fn within_involutions(&self) -> bool {
        match self {
            AllowedLengths::Finite(set) => set.iter().all(|&l| l <= 2),
            _ => false,
        }
    }
}

impl fmt::Display for AllowedLengths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(set: &BTreeSet<u64>) -> String {
            set.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        }
        match self {
            AllowedLengths::Finite(set) => write!(f, "{{{}}}", list(set)),
            AllowedLengths::Cofinite(excluded) => write!(f, "all-{{{}}}", list(excluded)),
            AllowedLengths::All => f.write_str("all"),
        }
    }
}

impl FromStr for AllowedLengths {
    type Err = Error;

    /// Grammar: `all` | `{1,2,5}` | `all-{1,3}`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "all" {
            return Ok(AllowedLengths::All);
        }
        if let Some(rest) = t.strip_prefix("all") {
            let rest = rest.trim_start();
            let set = rest
                .strip_prefix('-')
                .ok_or_else(|| Error::InvalidModel(format!("expected '-' after 'all' in {t:?}")))?;
            return AllowedLengths::cofinite(parse_set(set.trim())?);
        }
        AllowedLengths::finite(parse_set(t)?)
    }
}

fn parse_set(t: &str) -> Result<BTreeSet<u64>> {
    let inner = t
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .ok_or_else(|| Error::InvalidModel(format!("expected a braced set, got {t:?}")))?;
    if inner.trim().is_empty() {
        return Ok(BTreeSet::new());
    }
    inner
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidModel(format!("bad cycle length {:?}", x.trim())))
        })
        .collect()
}

/// The model: one allowed-length set per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelConfig {
    allowed: Vec<AllowedLengths>,
}

impl ModelConfig {
    pub fn new(allowed: Vec<AllowedLengths>) -> Result<Self> {
        if allowed.is_empty() {
            return Err(Error::InvalidModel(
                "at least one generator is required".into(),
            ));
        }
        for a in &allowed {
            a.validate()?;
        }
        Ok(ModelConfig { allowed })
    }

    /// Parses one allowed-length set per generator.
    pub fn parse<S: AsRef<str>>(sets: &[S]) -> Result<Self> {
        Self::new(
            sets.iter()
                .map(|s| s.as_ref().parse())
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// `k` copies of `A = ℕ*`: uniform permutations.
    pub fn uniform(k: usize) -> Self {
        ModelConfig {
            allowed: vec![AllowedLengths::All; k.max(1)],
        }
    }

    pub fn k(&self) -> usize {
        self.allowed.len()
    }

    /// `A_i` for 1-based generator `i`.
    pub fn allowed(&self, generator: usize) -> &AllowedLengths {
        &self.allowed[generator - 1]
    }

    pub fn all_allowed(&self) -> &[AllowedLengths] {
        &self.allowed
    }

    pub fn degrees(&self) -> Degrees {
        Degrees(self.allowed.iter().map(AllowedLengths::degree).collect())
    }
}

impl fmt::Display for ModelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.allowed.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        assert_eq!(
            "all".parse::<AllowedLengths>().unwrap(),
            AllowedLengths::All
        );
        let a: AllowedLengths = "{1, 2,5}".parse().unwrap();
        assert_eq!(a.to_string(), "{1,2,5}");
        assert_eq!(a.degree(), Degree::Finite(5));
        let c: AllowedLengths = "all-{1,3}".parse().unwrap();
        assert!(!c.contains(3) && c.contains(2) && c.contains(1000));
        assert_eq!(c.degree(), Degree::Infinite);
        assert_eq!(c.to_string(), "all-{1,3}");
        assert_eq!(
            "all-{}".parse::<AllowedLengths>().unwrap(),
            AllowedLengths::All
        );
    }

    #[test]
    fn rejects_invalid_sets() {
        for bad in [
            "{1}", "{}", "{0,2}", "{a}", "1,2", "all-", "all+{1}", "{2", "",
        ] {
            assert!(bad.parse::<AllowedLengths>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn degrees_parse() {
        let d: Degrees = "4,5,inf".parse().unwrap();
        assert_eq!(d.of(1), Degree::Finite(4));
        assert_eq!(d.of(3), Degree::Infinite);
        assert!("1,2".parse::<Degrees>().is_err());
    }

    #[test]
    fn ratio_uses_zero_for_infinity() {
        assert_eq!(Degree::Infinite.ratio(7), Rational64::from_integer(0));
        assert_eq!(Degree::Finite(4).ratio(3), Rational64::new(3, 4));
    }
}
