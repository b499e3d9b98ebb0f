use rand::Rng;

use super::chromosome::Chromosome;
use crate::error::{Error, Result};

/// How the mutation rate is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MutationMode {
    /// With probability `rate`, flip exactly one uniformly chosen bit.
    #[default]
    Chromosome,
    /// Flip each bit independently with probability `rate`.
    Bit,
}

/// Where crossover cuts may fall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutPoints {
    /// Any position `1..L`.
    #[default]
    Bit,
    /// Only between label blocks.
    Label,
}

/// Swaps the suffixes of two parents at `cut`.
pub fn one_point_crossover(
    p1: &Chromosome,
    p2: &Chromosome,
    cut: usize,
) -> Result<(Chromosome, Chromosome)> {
    if p1.len() != p2.len() {
        return Err(Error::invalid(format!(
            "parents differ in length ({} vs {})",
            p1.len(),
            p2.len()
        )));
    }
    if cut == 0 || cut >= p1.len() {
        return Err(Error::invalid(format!(
            "cut {cut} outside 1..{} for length {}",
            p1.len(),
            p1.len()
        )));
    }
    let mut c1 = p1.clone();
    let mut c2 = p2.clone();
    c1.splice_suffix(p2, cut);
    c2.splice_suffix(p1, cut);
    Ok((c1, c2))
}

/// Draws a cut position, or `None` when the genome cannot be cut.
pub(crate) fn draw_cut(
    len: usize,
    label_bits: usize,
    mode: CutPoints,
    rng: &mut impl Rng,
) -> Option<usize> {
    match mode {
        CutPoints::Bit => (len >= 2).then(|| rng.random_range(1..len)),
        CutPoints::Label => {
            let blocks = len.checked_div(label_bits).unwrap_or(0);
            (blocks >= 2).then(|| rng.random_range(1..blocks) * label_bits)
        }
    }
}

pub fn mutate(c: &Chromosome, rate: f64, mode: MutationMode, rng: &mut impl Rng) -> Chromosome {
    let mut out = c.clone();
    mutate_in_place(&mut out, rate, mode, rng);
    out
}

pub(crate) fn mutate_in_place(
    c: &mut Chromosome,
    rate: f64,
    mode: MutationMode,
    rng: &mut impl Rng,
) {
    match mode {
        MutationMode::Chromosome => {
            if rng.random::<f64>() < rate && !c.is_empty() {
                let i = rng.random_range(0..c.len());
                c.flip(i);
            }
        }
        MutationMode::Bit => {
            for i in 0..c.len() {
                if rng.random::<f64>() < rate {
                    c.flip(i);
                }
            }
        }
    }
}

/// Index of the lowest-J individual among `size` uniform draws with replacement.
/// Ties go to the lowest index among the tied draws.
pub fn tournament_select(fitnesses: &[f64], size: usize, rng: &mut impl Rng) -> usize {
    assert!(!fitnesses.is_empty(), "empty population");
    let mut best = rng.random_range(0..fitnesses.len());
    for _ in 1..size.max(1) {
        let cand = rng.random_range(0..fitnesses.len());
        let (fc, fb) = (fitnesses[cand], fitnesses[best]);
        if fc < fb || (fc == fb && cand < best) {
            best = cand;
        }
    }
    best
}
