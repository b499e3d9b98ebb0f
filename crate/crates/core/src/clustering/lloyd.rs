use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    evaluate, objective_j, squared_distance, weighted_centroids, Assignment, ClusterModel,
    ObjectiveReport, Scratch,
};
use crate::colour_cube::ColourPoint;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LloydResult {
    pub assignment: Assignment,
    pub model: ClusterModel,
    pub report: ObjectiveReport,
    /// Assignment steps performed.
    pub iterations: usize,
    /// J after each assignment step.
    pub j_history: Vec<f64>,
}

/// Classical alternating k-means on weighted points.
///
/// Centroids start at `k` distinct points drawn without replacement with
/// probability proportional to frequency. Each iteration assigns every point to
/// its nearest centroid (ties go to the lowest cluster index) and then moves
/// each non-empty centroid to its members' weighted mean; an emptied cluster
/// keeps its previous position. Stops when labels no longer change or after
/// `max_iter` assignment steps.
pub fn lloyd(points: &[ColourPoint], k: usize, seed: u64, max_iter: usize) -> Result<LloydResult> {
    if k == 0 {
        return Err(Error::config("k", "cluster count must be at least 1"));
    }
    if max_iter == 0 {
        return Err(Error::config("max_iter", "must be at least 1"));
    }
    if k > points.len() {
        return Err(Error::invalid(format!(
            "k = {k} exceeds the number of points ({})",
            points.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<[f64; 3]> = sample_by_frequency(points, k, &mut rng)
        .into_iter()
        .map(|i| points[i].coord)
        .collect();

    let mut labels = vec![u32::MAX; points.len()];
    let mut next = vec![0u32; points.len()];
    let mut scratch = Scratch::default();
    let mut j_history = Vec::new();
    let mut iterations = 0;

    while iterations < max_iter {
        for (label, p) in next.iter_mut().zip(points) {
            *label = nearest(&centroids, &p.coord);
        }
        iterations += 1;
        if next == labels {
            break;
        }
        std::mem::swap(&mut labels, &mut next);

        j_history.push(evaluate(points, &labels, k, &mut scratch, None));
        for (c, (s, &w)) in centroids
            .iter_mut()
            .zip(scratch.means.iter().zip(&scratch.weights))
        {
            if w > 0.0 {
                *c = *s;
            }
        }
    }

    let assignment = Assignment::new_unchecked(labels, k);
    let model = weighted_centroids(points, &assignment)?;
    let report = objective_j(points, &assignment)?;
    Ok(LloydResult {
        assignment,
        model,
        report,
        iterations,
        j_history,
    })
}

fn nearest(centroids: &[[f64; 3]], x: &[f64; 3]) -> u32 {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        let d = squared_distance(x, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best as u32
}

/// `k` distinct indices, each draw proportional to frequency among the remaining points.
fn sample_by_frequency(points: &[ColourPoint], k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut total: u64 = points.iter().map(|p| p.freq).sum();
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        let mut target = rng.random_range(0..total);
        let pos = remaining
            .iter()
            .position(|&i| {
                let f = points[i].freq;
                if target < f {
                    true
                } else {
                    target -= f;
                    false
                }
            })
            .expect("target below remaining total weight");
        let idx = remaining.remove(pos);
        total -= points[idx].freq;
        chosen.push(idx);
    }
    chosen
}
