//! Cycle statistics of random permutations built from words.
//!
//! A word `w` in `g_1^{±1}, …, g_k^{±1}` is evaluated on independent uniform
//! permutations `s_i ∈ S_n(A_i)` whose cycle lengths lie in prescribed sets
//! `A_i`. The crate provides the word algebra in the free product of cyclic
//! groups, the edge-colored graphs and partition sums that govern the
//! asymptotics of `σ_n = w(s_1, …, s_k)`, exact small-`n` oracles, an exactly
//! uniform restricted sampler and a Monte Carlo harness.
//!
//! ```
//! use permword::{predict_limit, ModelConfig, Word};
//!
//! let w: Word = "g1 g2".parse().unwrap();
//! let cfg = ModelConfig::parse(&["{2}", "{2}"]).unwrap();
//! assert_eq!(predict_limit(&w, &cfg).unwrap().to_string(), "InvolutionCase(ii)");
//! ```

pub mod error;
pub mod graph;
pub mod model;
pub mod montecarlo;
pub mod oracle;
pub mod perm;
pub mod sampler;
pub mod search;
pub mod word;

pub use error::{Error, Result};
pub use graph::{ColoredGraph, VertexPartition};
pub use model::{AllowedLengths, Degree, Degrees, ModelConfig};
pub use perm::{CycleCounts, Permutation};
pub use search::{predict_limit, LimitKind, LimitPrediction};
pub use word::{parse_word, Letter, Word};
