//! Simulation of `σ_n`, theoretical limit laws and the statistics that
//! compare them.
//!
//! Samples are split into replicas of [`REPLICA_SIZE`]. Replica `r` draws
//! from ChaCha8 seeded with the experiment seed on stream `r`, so results do
//! not depend on how rayon schedules the replicas.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::perm::CycleCounts;
use crate::sampler::ModelSampler;
use crate::search::{InvolutionCase, LimitKind, LimitPrediction};
use crate::word::Word;

pub const REPLICA_SIZE: usize = 1000;

/// Theoretical pmfs may drop at most this much tail mass.
pub const TAIL_MASS: f64 = 1e-10;

/// Where Poisson pmfs are actually cut, so totals stay within 1e-12 of one.
const CUTOFF: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub word: Word,
    pub model: ModelConfig,
    pub n: usize,
    pub samples: usize,
    pub q: usize,
    pub seed: u64,
}

/// Joint counts of `(N_1, …, N_q)` over the samples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EmpiricalLaw {
    pub n: usize,
    pub q: usize,
    pub samples: u64,
    pub joint: BTreeMap<CycleCounts, u64>,
    /// `Σ_l l·N_l = n` held for every sample (over all lengths, not just `≤ q`).
    pub conserved: bool,
}

impl EmpiricalLaw {
    fn empty(n: usize, q: usize) -> Self {
        EmpiricalLaw {
            n,
            q,
            samples: 0,
            joint: BTreeMap::new(),
            conserved: true,
        }
    }

    fn record(&mut self, lengths: &[usize]) {
        let mut counts = vec![0u64; self.q];
        for &l in lengths {
            if l <= self.q {
                counts[l - 1] += 1;
            }
        }
        self.conserved &= lengths.iter().sum::<usize>() == self.n;
        *self.joint.entry(CycleCounts(counts)).or_default() += 1;
        self.samples += 1;
    }

    /// Counts add, so merging is associative and commutative.
    pub fn merge(mut self, other: EmpiricalLaw) -> EmpiricalLaw {
        for (k, c) in other.joint {
            *self.joint.entry(k).or_default() += c;
        }
        self.samples += other.samples;
        self.conserved &= other.conserved;
        self
    }

    /// Counts of the values of `N_l`.
    pub fn marginal(&self, l: usize) -> BTreeMap<u64, u64> {
        let mut m = BTreeMap::new();
        for (k, &c) in &self.joint {
            *m.entry(k.get(l)).or_default() += c;
        }
        m
    }

    pub fn mean(&self, l: usize) -> f64 {
        self.moments(l).0
    }

    /// Unbiased sample variance of `N_l`.
    pub fn variance(&self, l: usize) -> f64 {
        self.moments(l).1
    }

    fn moments(&self, l: usize) -> (f64, f64) {
        let n = self.samples as f64;
        if n == 0.0 {
            return (f64::NAN, f64::NAN);
        }
        let marginal = self.marginal(l);
        let mean = marginal
            .iter()
            .map(|(&v, &c)| v as f64 * c as f64)
            .sum::<f64>()
            / n;
        let ss = marginal
            .iter()
            .map(|(&v, &c)| (v as f64 - mean).powi(2) * c as f64)
            .sum::<f64>();
        let var = if self.samples > 1 {
            ss / (n - 1.0)
        } else {
            0.0
        };
        (mean, var)
    }

    /// Every sample had `N_l` even for all `l ≤ up_to`.
    pub fn all_even(&self, up_to: usize) -> bool {
        self.joint
            .keys()
            .all(|k| (1..=up_to).all(|l| k.get(l) % 2 == 0))
    }

    /// Empirical law of `N_l / 2`; `None` if some `N_l` is odd.
    pub fn halved_marginal(&self, l: usize) -> Option<BTreeMap<u64, u64>> {
        let m = self.marginal(l);
        m.keys()
            .all(|v| v % 2 == 0)
            .then(|| m.into_iter().map(|(v, c)| (v / 2, c)).collect())
    }
}

pub fn run(config: &ExperimentConfig) -> Result<EmpiricalLaw> {
    if config.samples == 0 || config.q == 0 {
        return Err(Error::InvalidParameter(
            "samples and q must be positive".into(),
        ));
    }
    if config.word.max_generator() > config.model.k() {
        return Err(Error::ArityMismatch {
            expected: config.word.max_generator(),
            found: config.model.k(),
        });
    }
    let sampler = ModelSampler::new(&config.model, config.n)?;
    let replicas = config.samples.div_ceil(REPLICA_SIZE);
    let parts: Vec<Result<EmpiricalLaw>> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let size = REPLICA_SIZE.min(config.samples - r * REPLICA_SIZE);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(r as u64);
            let mut law = EmpiricalLaw::empty(config.n, config.q);
            for _ in 0..size {
                let sigma = sampler.sample_sigma(&config.word, &mut rng)?;
                law.record(&sigma.cycle_lengths());
            }
            Ok(law)
        })
        .collect();
    parts
        .into_iter()
        .try_fold(EmpiricalLaw::empty(config.n, config.q), |acc, p| {
            Ok(acc.merge(p?))
        })
}

/// A pmf on `0, 1, 2, …`; `probs[r] = P(X = r)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pmf {
    pub probs: Vec<f64>,
}

impl Pmf {
    pub fn point(r: usize) -> Self {
        let mut probs = vec![0.0; r + 1];
        probs[r] = 1.0;
        Pmf { probs }
    }

    pub fn get(&self, r: u64) -> f64 {
        self.probs.get(r as usize).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(r, p)| r as f64 * p)
            .sum()
    }

    /// Law of `X + Y` for independent `X`, `Y`.
    pub fn convolve(&self, other: &Pmf) -> Pmf {
        let mut probs = vec![0.0; self.probs.len() + other.probs.len() - 1];
        for (i, a) in self.probs.iter().enumerate() {
            for (j, b) in other.probs.iter().enumerate() {
                probs[i + j] += a * b;
            }
        }
        Pmf { probs }
    }

    /// Law of `2X`.
    pub fn doubled(&self) -> Pmf {
        let mut probs = vec![0.0; 2 * self.probs.len() - 1];
        for (i, p) in self.probs.iter().enumerate() {
            probs[2 * i] = *p;
        }
        Pmf { probs }
    }
}

/// Poisson(λ), truncated far inside [`TAIL_MASS`].
pub fn poisson(lambda: f64) -> Pmf {
    let mut probs = Vec::new();
    let mut p = (-lambda).exp();
    let mut cum = 0.0;
    let mut r = 0.0;
    loop {
        probs.push(p);
        cum += p;
        r += 1.0;
        if 1.0 - cum < CUTOFF && r > lambda {
            break;
        }
        p *= lambda / r;
    }
    Pmf { probs }
}

/// `ν_{a,b}`: the law of `P_{a/b} + 2 P_{1/(2b²)}`.
pub fn nu_pmf(a: f64, b: f64) -> Result<Pmf> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ν needs a, b > 0, got ({a}, {b})"
        )));
    }
    Ok(poisson(a / b).convolve(&poisson(1.0 / (2.0 * b * b)).doubled()))
}

/// `ν_{a,b}(r) = e^{−(1+2ab)/(2b²)} E[(X+a)^r] / (r! b^r)` with `X` standard
/// Gaussian, for `r ≤ r_max`; the moments use `E[X^{2i}] = (2i−1)!!`.
pub fn nu_pmf_series(a: f64, b: f64, r_max: usize) -> Result<Vec<f64>> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ν needs a, b > 0, got ({a}, {b})"
        )));
    }
    let prefactor = (-(1.0 + 2.0 * a * b) / (2.0 * b * b)).exp();
    Ok((0..=r_max)
        .map(|r| {
            // E[(X+a)^r]/r! = Σ_i a^{r−2i}/(r−2i)! · (2i−1)!!/(2i)!, and (2i−1)!!/(2i)! = 1/(2^i i!)
            let sum: f64 = (0..=r / 2)
                .map(|i| {
                    let j = r - 2 * i;
                    a.powi(j as i32) / factorial(j) / (2f64.powi(i as i32) * factorial(i))
                })
                .sum();
            prefactor * sum / b.powi(r as i32)
        })
        .collect())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

/// Independent marginals of `N_1, …, N_q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoreticalLaw {
    pub marginals: Vec<Pmf>,
}

impl TheoreticalLaw {
    pub fn q(&self) -> usize {
        self.marginals.len()
    }

    /// Marginal of 1-based `l`.
    pub fn marginal(&self, l: usize) -> &Pmf {
        &self.marginals[l - 1]
    }

    /// Product pmf at a joint value.
    pub fn joint(&self, counts: &CycleCounts) -> f64 {
        self.marginals
            .iter()
            .enumerate()
            .map(|(i, m)| m.get(counts.get(i + 1)))
            .product()
    }
}

/// `Poisson(1) ⊗ Poisson(1/2) ⊗ ⋯ ⊗ Poisson(1/q)`.
pub fn poisson_product_pmf(q: usize) -> TheoreticalLaw {
    TheoreticalLaw {
        marginals: (1..=q).map(|l| poisson(1.0 / l as f64)).collect(),
    }
}

/// Per-`l` limits for the product of two random involutions.
pub fn involution_theoretical_law(case: InvolutionCase, q: usize) -> TheoreticalLaw {
    let marginals = (1..=q)
        .map(|l| {
            let lf = l as f64;
            let pairs = poisson(1.0 / (2.0 * lf)).doubled();
            match case {
                InvolutionCase::BothOneTwo => nu_pmf(lf.sqrt(), lf.sqrt()).expect("positive"),
                InvolutionCase::BothTwo => pairs,
                InvolutionCase::Mixed if l % 2 == 1 => pairs,
                InvolutionCase::Mixed => nu_pmf(lf.sqrt() / 2.0, lf.sqrt()).expect("positive"),
            }
        })
        .collect();
    TheoreticalLaw { marginals }
}

/// The full limit law when the prediction provides one.
pub fn theoretical_law(prediction: &LimitPrediction, q: usize) -> Option<TheoreticalLaw> {
    match prediction.kind {
        LimitKind::PoissonProduct => Some(poisson_product_pmf(q)),
        LimitKind::InvolutionCase(c) => Some(involution_theoretical_law(c, q)),
        _ => None,
    }
}

/// `½ Σ_r |emp(r) − theo(r)|` over the union of both supports.
pub fn tv_distance(counts: &BTreeMap<u64, u64>, theo: &Pmf) -> f64 {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return f64::NAN;
    }
    let emp = |r: u64| counts.get(&r).copied().unwrap_or(0) as f64 / total as f64;
    let top = counts
        .keys()
        .next_back()
        .copied()
        .unwrap_or(0)
        .max(theo.probs.len() as u64);
    0.5 * (0..=top).map(|r| (emp(r) - theo.get(r)).abs()).sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Sample mean of `N_l` with its standard error.
pub fn mean_check(emp: &EmpiricalLaw, l: usize) -> MeanEstimate {
    MeanEstimate {
        estimate: emp.mean(l),
        std_error: (emp.variance(l) / emp.samples as f64).sqrt(),
    }
}

/// Sample mean of `N_l / n` with its standard error.
pub fn fraction_check(emp: &EmpiricalLaw, l: usize) -> MeanEstimate {
    let m = mean_check(emp, l);
    let n = emp.n as f64;
    MeanEstimate {
        estimate: m.estimate / n,
        std_error: m.std_error / n,
    }
}

/// Upper-tail p-value of Pearson's χ² statistic against `expected` probabilities.
pub fn chi_square_p_value(observed: &[u64], expected: &[f64]) -> Result<f64> {
    if observed.len() != expected.len() || observed.len() < 2 {
        return Err(Error::InvalidParameter(
            "χ² needs matching vectors of at least two cells".into(),
        ));
    }
    let total: u64 = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dist = ChiSquared::new((observed.len() - 1) as f64)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(1.0 - dist.cdf(stat))
}
