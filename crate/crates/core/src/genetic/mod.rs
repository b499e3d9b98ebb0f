//! Genetic search over label-block bit strings.
//!
//! Each point's cluster label occupies a `⌈log₂ k⌉`-bit block, so a genome of
//! `n·⌈log₂ k⌉` bits decodes to a full hard assignment (out-of-range codes wrap
//! modulo `k`). Fitness is the weighted k-means objective J, minimized.

mod chromosome;
mod engine;
mod operators;

pub use chromosome::{bits_per_label, chromosome_length, decode, encode, Chromosome};
pub use engine::{evaluate_population, run_ga, GaConfig, GaResult, GenerationRecord};
pub use operators::{mutate, one_point_crossover, tournament_select, CutPoints, MutationMode};
