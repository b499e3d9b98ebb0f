use super::{evaluate, objective_j, Assignment, ObjectiveReport, Scratch};
use crate::colour_cube::ColourPoint;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Default cap on enumerated label vectors.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

const CHUNKS: u64 = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub assignment: Assignment,
    pub report: ObjectiveReport,
    pub enumerated: u64,
}

/// Exhaustive minimum of J over all `kⁿ` label vectors.
///
/// Ties resolve to the lexicographically smallest label vector.
pub fn brute_force_optimum(points: &[ColourPoint], k: usize) -> Result<BruteForceResult> {
    brute_force_optimum_with(points, k, DEFAULT_BUDGET, Execution::default())
}

pub fn brute_force_optimum_with(
    points: &[ColourPoint],
    k: usize,
    budget: u64,
    exec: Execution,
) -> Result<BruteForceResult> {
    if k == 0 {
        return Err(Error::config("k", "cluster count must be at least 1"));
    }
    if points.is_empty() {
        return Err(Error::invalid("no points to cluster"));
    }
    let n = points.len();
    let total = u32::try_from(n)
        .ok()
        .and_then(|n| (k as u64).checked_pow(n))
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::BudgetExceeded {
            required: format!("{k}^{n}"),
            budget,
        })?;

    // Label vectors in lexicographic order are the base-k numerals 0..total
    // with label 0 as the most significant digit.
    let chunk_len = total.div_ceil(CHUNKS.min(total));
    let chunks = total.div_ceil(chunk_len) as usize;
    let bests = exec.map_range(chunks, |c| {
        let start = c as u64 * chunk_len;
        let end = (start + chunk_len).min(total);
        best_in_range(points, k, start, end)
    });

    let (_, labels) = bests
        .into_iter()
        .reduce(|best, cand| if cand.0 < best.0 { cand } else { best })
        .expect("at least one chunk");
    let assignment = Assignment::new_unchecked(labels, k);
    let report = objective_j(points, &assignment)?;
    Ok(BruteForceResult {
        assignment,
        report,
        enumerated: total,
    })
}

fn best_in_range(points: &[ColourPoint], k: usize, start: u64, end: u64) -> (f64, Vec<u32>) {
    let n = points.len();
    let mut labels = vec![0u32; n];
    let mut rest = start;
    for l in labels.iter_mut().rev() {
        *l = (rest % k as u64) as u32;
        rest /= k as u64;
    }

    let mut scratch = Scratch::default();
    let mut best_j = f64::INFINITY;
    let mut best = labels.clone();
    for _ in start..end {
        let j = evaluate(points, &labels, k, &mut scratch, None);
        if j < best_j {
            best_j = j;
            best.copy_from_slice(&labels);
        }
        for l in labels.iter_mut().rev() {
            *l += 1;
            if (*l as usize) < k {
                break;
            }
            *l = 0;
        }
    }
    (best_j, best)
}
