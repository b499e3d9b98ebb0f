use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chromosome::{bits_per_label, chromosome_length, decode_into, Chromosome};
use super::operators::{draw_cut, mutate_in_place, tournament_select, CutPoints, MutationMode};
use crate::clustering::{evaluate, Assignment, Scratch};
use crate::colour_cube::ColourPoint;
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub mutation_mode: MutationMode,
    pub cut_points: CutPoints,
    pub tournament_size: usize,
    pub elite_count: usize,
    pub seed: u64,
    pub k: usize,
    /// Only affects fitness evaluation; results do not depend on it.
    pub execution: Execution,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 50,
            generations: 10_000,
            crossover_rate: 0.95,
            mutation_rate: 0.85,
            mutation_mode: MutationMode::Chromosome,
            cut_points: CutPoints::Bit,
            tournament_size: 2,
            elite_count: 1,
            seed: 0,
            k: 6,
            execution: Execution::default(),
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::config("population_size", "must be at least 1"));
        }
        if self.generations == 0 {
            return Err(Error::config("generations", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::config("crossover_rate", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::config("mutation_rate", "must lie in [0, 1]"));
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return Err(Error::config(
                "tournament_size",
                format!("must lie in 1..={}", self.population_size),
            ));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::config(
                "elite_count",
                format!("must be below the population size {}", self.population_size),
            ));
        }
        if self.k == 0 {
            return Err(Error::config("k", "cluster count must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_so_far_j: f64,
    pub gen_best_j: f64,
    pub gen_mean_j: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaResult {
    pub best_assignment: Assignment,
    pub best_chromosome: Chromosome,
    pub best_j: f64,
    /// One record per generation, starting with the random initial population.
    pub trace: Vec<GenerationRecord>,
    pub evaluations: u64,
}

/// J of every decoded chromosome, in population order.
pub fn evaluate_population(
    points: &[ColourPoint],
    k: usize,
    population: &[Chromosome],
    exec: Execution,
) -> Vec<f64> {
    exec.map(population, |c| fitness(points, k, c))
}

fn fitness(points: &[ColourPoint], k: usize, c: &Chromosome) -> f64 {
    let mut labels = vec![0u32; points.len()];
    decode_into(c, k, &mut labels);
    evaluate(points, &labels, k, &mut Scratch::default(), None)
}

/// Runs the generational GA.
///
/// Each generation keeps the `elite_count` best individuals unchanged and fills
/// the rest with offspring: two tournament winners are crossed over with
/// probability `crossover_rate`, then each child is mutated. All random draws
/// happen serially from one seeded ChaCha8 stream before the (possibly
/// parallel) fitness evaluation, so the result depends only on the inputs.
pub fn run_ga(points: &[ColourPoint], cfg: &GaConfig) -> Result<GaResult> {
    cfg.validate()?;
    if points.is_empty() {
        return Err(Error::invalid("no points to cluster"));
    }
    let k = cfg.k;
    let len = chromosome_length(points.len(), k);
    let label_bits = bits_per_label(k);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut population: Vec<Chromosome> = (0..cfg.population_size)
        .map(|_| Chromosome::random(len, &mut rng))
        .collect();
    let mut fitnesses = evaluate_population(points, k, &population, cfg.execution);
    let mut evaluations = population.len() as u64;

    let mut trace = Vec::with_capacity(cfg.generations + 1);
    let (mut best_j, mut best) = {
        let i = argmin(&fitnesses);
        (fitnesses[i], population[i].clone())
    };
    trace.push(record(0, best_j, &fitnesses));

    let mut order: Vec<usize> = Vec::with_capacity(cfg.population_size);
    for generation in 1..=cfg.generations {
        order.clear();
        order.extend(0..population.len());
        order.sort_by(|&a, &b| fitnesses[a].total_cmp(&fitnesses[b]).then(a.cmp(&b)));

        let mut next: Vec<Chromosome> = Vec::with_capacity(cfg.population_size);
        let mut next_fit: Vec<f64> = Vec::with_capacity(cfg.population_size);
        for &i in &order[..cfg.elite_count] {
            next.push(population[i].clone());
            next_fit.push(fitnesses[i]);
        }

        let mut offspring = Vec::with_capacity(cfg.population_size - cfg.elite_count);
        while next.len() + offspring.len() < cfg.population_size {
            let a = tournament_select(&fitnesses, cfg.tournament_size, &mut rng);
            let b = tournament_select(&fitnesses, cfg.tournament_size, &mut rng);
            let mut c1 = population[a].clone();
            let mut c2 = population[b].clone();
            if rng.random::<f64>() < cfg.crossover_rate {
                if let Some(cut) = draw_cut(len, label_bits, cfg.cut_points, &mut rng) {
                    c1.splice_suffix(&population[b], cut);
                    c2.splice_suffix(&population[a], cut);
                }
            }
            mutate_in_place(&mut c1, cfg.mutation_rate, cfg.mutation_mode, &mut rng);
            offspring.push(c1);
            if next.len() + offspring.len() < cfg.population_size {
                mutate_in_place(&mut c2, cfg.mutation_rate, cfg.mutation_mode, &mut rng);
                offspring.push(c2);
            }
        }

        let offspring_fit = evaluate_population(points, k, &offspring, cfg.execution);
        evaluations += offspring.len() as u64;
        next.extend(offspring);
        next_fit.extend(offspring_fit);
        population = next;
        fitnesses = next_fit;

        let i = argmin(&fitnesses);
        if fitnesses[i] < best_j {
            best_j = fitnesses[i];
            best = population[i].clone();
        }
        trace.push(record(generation, best_j, &fitnesses));
    }

    let mut labels = vec![0u32; points.len()];
    decode_into(&best, k, &mut labels);
    Ok(GaResult {
        best_assignment: Assignment::new_unchecked(labels, k),
        best_chromosome: best,
        best_j,
        trace,
        evaluations,
    })
}

/// First index of the minimum.
fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

fn record(generation: usize, best_so_far_j: f64, fitnesses: &[f64]) -> GenerationRecord {
    GenerationRecord {
        generation,
        best_so_far_j,
        gen_best_j: fitnesses.iter().copied().fold(f64::INFINITY, f64::min),
        gen_mean_j: fitnesses.iter().sum::<f64>() / fitnesses.len() as f64,
    }
}
