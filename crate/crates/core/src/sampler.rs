//! Counting and exactly uniform sampling of permutations whose cycle
//! lengths all lie in a set `A`.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{AllowedLengths, ModelConfig};
use crate::perm::Permutation;
use crate::word::Word;

/// `T_A(0..=n_max)` with `T_A(m) = |S_m(A)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    values: Vec<BigUint>,
}

impl CountTable {
    /// `T(m) = Σ_{l ∈ A, l ≤ m} (m−1)(m−2)⋯(m−l+1) · T(m−l)`, `T(0) = 1`.
    pub fn new(allowed: &AllowedLengths, n_max: usize) -> Self {
        let mut values: Vec<BigUint> = Vec::with_capacity(n_max + 1);
        values.push(BigUint::one());
        for m in 1..=n_max {
            let t = match allowed {
                AllowedLengths::All => &values[m - 1] * m,
                _ => {
                    let top = allowed.degree().finite().map_or(m, |d| (d as usize).min(m));
                    let mut sum = BigUint::zero();
                    let mut falling = BigUint::one();
                    for l in 1..=top {
                        if l > 1 {
                            falling *= m - l + 1;
                        }
                        if allowed.contains(l as u64) {
                            sum += &falling * &values[m - l];
                        }
                    }
                    sum
                }
            };
            values.push(t);
        }
        CountTable { values }
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, m: usize) -> &BigUint {
        &self.values[m]
    }
}

/// `|S_n(A)|`.
pub fn count_restricted(n: usize, allowed: &AllowedLengths) -> BigUint {
    CountTable::new(allowed, n).get(n).clone()
}

/// `S_n(A) ≠ ∅`, by a boolean version of the counting recurrence.
pub fn is_feasible(n: usize, allowed: &AllowedLengths) -> bool {
    feasibility(n, allowed)[n]
}

fn feasibility(n_max: usize, allowed: &AllowedLengths) -> Vec<bool> {
    let lengths = allowed.lengths_up_to(n_max);
    let mut ok = vec![false; n_max + 1];
    ok[0] = true;
    for m in 1..=n_max {
        ok[m] = lengths.iter().take_while(|&&l| l <= m).any(|&l| ok[m - l]);
    }
    ok
}

/// Smallest `m ≥ n`, `m ≤ n + window`, at which every `S_m(A_i)` is nonempty.
pub fn next_feasible_size(cfg: &ModelConfig, n: usize, window: usize) -> Result<usize> {
    let tables: Vec<Vec<bool>> = cfg
        .all_allowed()
        .iter()
        .map(|a| feasibility(n + window, a))
        .collect();
    (n.max(1)..=n + window)
        .find(|&m| tables.iter().all(|t| t[m]))
        .ok_or(Error::NoFeasibleSize {
            from: n,
            to: n + window,
        })
}

#[derive(Clone, Debug)]
enum Plan {
    /// `A` is everything: Fisher–Yates.
    Shuffle,
    /// Cofinite `A` with a large acceptance rate: shuffle until every cycle fits.
    Reject,
    /// Cycle by cycle; `steps[r]` lists `(l, cumulative weight)` for `r` points left.
    Exact { steps: Vec<Vec<(usize, BigUint)>> },
}

/// Uniform sampler on `S_n(A)` for one fixed `n`.
#[derive(Clone, Debug)]
pub struct RestrictedSampler {
    n: usize,
    allowed: AllowedLengths,
    table: CountTable,
    plan: Plan,
}

/// Rejection is used when at least this fraction of `S_n` lies in `S_n(A)`.
const MIN_ACCEPTANCE: f64 = 1e-3;

impl RestrictedSampler {
    pub fn new(n: usize, allowed: &AllowedLengths) -> Result<Self> {
        let table = CountTable::new(allowed, n);
        if table.get(n).is_zero() {
            return Err(Error::Infeasible {
                n,
                allowed: allowed.to_string(),
            });
        }
        let plan = match allowed {
            AllowedLengths::All => Plan::Shuffle,
            AllowedLengths::Cofinite(_) if acceptance(&table, n) >= MIN_ACCEPTANCE => Plan::Reject,
            _ => Plan::Exact {
                steps: exact_steps(&table, allowed, n),
            },
        };
        Ok(RestrictedSampler {
            n,
            allowed: allowed.clone(),
            table,
            plan,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        match &self.plan {
            Plan::Shuffle => shuffled(self.n, rng),
            Plan::Reject => loop {
                let p = shuffled(self.n, rng);
                if p.cycle_lengths()
                    .iter()
                    .all(|&l| self.allowed.contains(l as u64))
                {
                    return p;
                }
            },
            Plan::Exact { steps } => self.sample_exact(steps, rng),
        }
    }

    fn sample_exact<R: Rng + ?Sized>(
        &self,
        steps: &[Vec<(usize, BigUint)>],
        rng: &mut R,
    ) -> Permutation {
        let mut images = vec![0; self.n];
        let mut pool: Vec<usize> = (0..self.n).collect();
        // The anchor of each new cycle is any fixed unplaced point; the last
        // one in the pool is as good as the smallest.
        while let Some(anchor) = pool.pop() {
            let r = pool.len() + 1;
            let candidates = &steps[r];
            let l = if candidates.len() == 1 {
                candidates[0].0
            } else {
                let u = rng.gen_biguint_below(self.table.get(r));
                candidates
                    .iter()
                    .find(|(_, cum)| u < *cum)
                    .expect("u < T(r)")
                    .0
            };
            let mut prev = anchor;
            for _ in 1..l {
                let x = pool.swap_remove(rng.gen_range(0..pool.len()));
                images[prev] = x;
                prev = x;
            }
            images[prev] = anchor;
        }
        Permutation::from_images(images).expect("cycles cover every point once")
    }
}

fn shuffled<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("a shuffle is a bijection")
}

fn acceptance(table: &CountTable, n: usize) -> f64 {
    let factorial: BigUint = (1..=n).map(BigUint::from).product();
    let scale = factorial.bits().saturating_sub(60);
    let num = (table.get(n) >> scale).to_f64().unwrap_or(0.0);
    let den = (factorial >> scale).to_f64().unwrap_or(f64::INFINITY);
    num / den
}

fn exact_steps(
    table: &CountTable,
    allowed: &AllowedLengths,
    n: usize,
) -> Vec<Vec<(usize, BigUint)>> {
    let mut steps = vec![Vec::new(); n + 1];
    for (r, step) in steps.iter_mut().enumerate().skip(1) {
        if table.get(r).is_zero() {
            continue;
        }
        let mut cum = BigUint::zero();
        let mut falling = BigUint::one();
        for l in 1..=r {
            if l > 1 {
                falling *= r - l + 1;
            }
            if allowed.contains(l as u64) && !table.get(r - l).is_zero() {
                cum += &falling * table.get(r - l);
                step.push((l, cum.clone()));
            }
            if allowed.degree().finite().is_some_and(|d| l as u64 >= d) {
                break;
            }
        }
    }
    steps
}

/// One uniform draw from `S_n(A)`.
pub fn sample_restricted<R: Rng + ?Sized>(
    n: usize,
    allowed: &AllowedLengths,
    rng: &mut R,
) -> Result<Permutation> {
    Ok(RestrictedSampler::new(n, allowed)?.sample(rng))
}

/// Independent uniform samplers for every coordinate of a model at one `n`.
#[derive(Clone, Debug)]
pub struct ModelSampler {
    samplers: Vec<RestrictedSampler>,
}

impl ModelSampler {
    pub fn new(cfg: &ModelConfig, n: usize) -> Result<Self> {
        let samplers = cfg
            .all_allowed()
            .iter()
            .map(|a| RestrictedSampler::new(n, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModelSampler { samplers })
    }

    pub fn n(&self) -> usize {
        self.samplers[0].n
    }

    /// `(s_1(n), …, s_k(n))`.
    pub fn sample_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Permutation> {
        self.samplers.iter().map(|s| s.sample(rng)).collect()
    }

    /// `σ_n = w(s_1(n), …, s_k(n))`.
    pub fn sample_sigma<R: Rng + ?Sized>(&self, w: &Word, rng: &mut R) -> Result<Permutation> {
        w.evaluate(&self.sample_all(rng))
    }
}

/// One draw of `σ_n`.
pub fn sample_sigma_n<R: Rng + ?Sized>(
    w: &Word,
    n: usize,
    cfg: &ModelConfig,
    rng: &mut R,
) -> Result<Permutation> {
    ModelSampler::new(cfg, n)?.sample_sigma(w, rng)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn a(s: &str) -> AllowedLengths {
        s.parse().unwrap()
    }

    fn brute_count(n: usize, allowed: &AllowedLengths) -> usize {
        Permutation::all(n)
            .filter(|p| {
                p.cycle_lengths()
                    .iter()
                    .all(|&l| allowed.contains(l as u64))
            })
            .count()
    }

    #[test]
    fn counts_match_brute_force() {
        for set in [
            "all",
            "{1,2}",
            "{2}",
            "{1,3}",
            "{3,4}",
            "all-{1}",
            "all-{2,3}",
        ] {
            let allowed = a(set);
            let table = CountTable::new(&allowed, 7);
            for n in 0..=7 {
                assert_eq!(
                    table.get(n),
                    &BigUint::from(brute_count(n, &allowed)),
                    "{set} n={n}"
                );
                assert_eq!(is_feasible(n, &allowed), brute_count(n, &allowed) > 0);
            }
        }
    }

    #[test]
    fn count_examples() {
        let t = CountTable::new(&a("{1,2}"), 4);
        let got: Vec<u64> = (1..=4).map(|m| t.get(m).to_u64().unwrap()).collect();
        assert_eq!(got, vec![1, 2, 4, 10]);
        assert_eq!(count_restricted(4, &a("{2}")), BigUint::from(3u8));
        assert!(count_restricted(5, &a("{2}")).is_zero());
        assert_eq!(count_restricted(6, &a("all")), BigUint::from(720u32));
        assert!(!is_feasible(3, &a("{2}")) && is_feasible(4, &a("{2}")));
        assert!(!is_feasible(5, &a("{3,4}")) && is_feasible(7, &a("{3,4}")));
    }

    #[test]
    fn next_feasible() {
        let cfg = ModelConfig::parse(&["{2}", "{3}"]).unwrap();
        assert_eq!(next_feasible_size(&cfg, 7, 10).unwrap(), 12);
        assert!(next_feasible_size(&cfg, 7, 2).is_err());
    }

    #[test]
    fn samples_have_allowed_cycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for set in [
            "{2}",
            "{1,2}",
            "{3,4}",
            "all-{1}",
            "all-{1,2,3,4,5,6}",
            "{5}",
        ] {
            let allowed = a(set);
            let n = (20..40).find(|&n| is_feasible(n, &allowed)).unwrap();
            let s = RestrictedSampler::new(n, &allowed).unwrap();
            for _ in 0..50 {
                let p = s.sample(&mut rng);
                assert!(
                    p.cycle_lengths()
                        .iter()
                        .all(|&l| allowed.contains(l as u64)),
                    "{set}"
                );
            }
        }
    }

    #[test]
    fn transposition_is_forced() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10 {
            let p = sample_restricted(2, &a("{2}"), &mut rng).unwrap();
            assert_eq!(p.to_cycle_notation(), "(1 2)");
        }
        assert!(matches!(
            sample_restricted(3, &a("{2}"), &mut rng),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn sigma_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cfg = ModelConfig::parse(&["{2}"]).unwrap();
        let w: Word = "g1 g1".parse().unwrap();
        for _ in 0..10 {
            assert!(sample_sigma_n(&w, 10, &cfg, &mut rng)
                .unwrap()
                .is_identity());
        }
        let cfg2 = ModelConfig::parse(&["{2}", "{2}"]).unwrap();
        let w2: Word = "g1 g2".parse().unwrap();
        let sampler = ModelSampler::new(&cfg2, 30).unwrap();
        for _ in 0..50 {
            let c = sampler
                .sample_sigma(&w2, &mut rng)
                .unwrap()
                .full_cycle_counts();
            assert!(c.as_slice().iter().all(|&x| x % 2 == 0));
        }
    }

    #[test]
    fn reproducible() {
        let cfg = ModelConfig::parse(&["{1,2}", "all"]).unwrap();
        let w: Word = "g1 g2".parse().unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = ModelSampler::new(&cfg, 25).unwrap();
            (0..5)
                .map(|_| s.sample_sigma(&w, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(4), draw(4));
    }
}
