//! The frequency-weighted k-means objective and the two baselines that share it.
//!
//! For points `X_j` with weights `f_j` and a hard assignment to `k` clusters,
//! `J = Σ_j f_j ‖X_j − C_{label(j)}‖²` where each centroid `C_i` is the
//! frequency-weighted mean of its members. Empty clusters have no centroid and
//! contribute nothing. With all `f_j = 1` this is the plain k-means objective.

mod brute;
mod lloyd;

pub use brute::{brute_force_optimum, brute_force_optimum_with, BruteForceResult, DEFAULT_BUDGET};
pub use lloyd::{lloyd, LloydResult};

use crate::colour_cube::ColourPoint;
use crate::error::{Error, Result};

/// Hard cluster membership, one label per point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    labels: Vec<u32>,
    k: usize,
}

impl Assignment {
    pub fn new(labels: Vec<u32>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("k", "cluster count must be at least 1"));
        }
        if let Some(bad) = labels.iter().find(|&&l| l as usize >= k) {
            return Err(Error::invalid(format!("label {bad} is not below k = {k}")));
        }
        Ok(Self { labels, k })
    }

    pub(crate) fn new_unchecked(labels: Vec<u32>, k: usize) -> Self {
        debug_assert!(labels.iter().all(|&l| (l as usize) < k));
        Self { labels, k }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn into_labels(self) -> Vec<u32> {
        self.labels
    }
}

/// Centroids and total member frequency per cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub centroids: Vec<Option<[f64; 3]>>,
    pub weights: Vec<u64>,
}

impl ClusterModel {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveReport {
    pub j: f64,
    pub per_cluster: Vec<f64>,
}

/// Reusable buffers for repeated objective evaluation.
#[derive(Debug, Clone, Default)]
pub(crate) struct Scratch {
    origins: Vec<[f64; 3]>,
    means: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl Scratch {
    fn reset(&mut self, k: usize) {
        self.origins.clear();
        self.origins.resize(k, [0.0; 3]);
        self.means.clear();
        self.means.resize(k, [0.0; 3]);
        self.weights.clear();
        self.weights.resize(k, 0.0);
    }

    /// Weighted mean of each cluster, left in `means`.
    ///
    /// Offsets are accumulated relative to each cluster's first member, so a
    /// cluster of coincident points gets exactly their coordinate.
    fn centroids(&mut self, points: &[ColourPoint], labels: &[u32], k: usize) {
        self.reset(k);
        for (p, &l) in points.iter().zip(labels) {
            let l = l as usize;
            let w = p.freq as f64;
            if self.weights[l] == 0.0 {
                self.origins[l] = p.coord;
            }
            let (o, s) = (&self.origins[l], &mut self.means[l]);
            for d in 0..3 {
                s[d] += w * (p.coord[d] - o[d]);
            }
            self.weights[l] += w;
        }
        for ((s, o), &w) in self.means.iter_mut().zip(&self.origins).zip(&self.weights) {
            if w > 0.0 {
                for d in 0..3 {
                    s[d] = o[d] + s[d] / w;
                }
            }
        }
    }
}

pub(crate) fn squared_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dr = a[0] - b[0];
    let dg = a[1] - b[1];
    let db = a[2] - b[2];
    dr * dr + dg * dg + db * db
}

/// The single implementation of J. Lengths and labels must already be valid.
///
/// The total is accumulated in point order so relabelling clusters yields a
/// bit-identical value.
pub(crate) fn evaluate(
    points: &[ColourPoint],
    labels: &[u32],
    k: usize,
    scratch: &mut Scratch,
    mut per_cluster: Option<&mut [f64]>,
) -> f64 {
    scratch.centroids(points, labels, k);
    let mut j = 0.0;
    for (p, &l) in points.iter().zip(labels) {
        let term = p.freq as f64 * squared_distance(&p.coord, &scratch.means[l as usize]);
        j += term;
        if let Some(pc) = per_cluster.as_deref_mut() {
            pc[l as usize] += term;
        }
    }
    j
}

fn check_lengths(points: &[ColourPoint], a: &Assignment) -> Result<()> {
    if points.len() != a.len() {
        return Err(Error::invalid(format!(
            "assignment has {} labels for {} points",
            a.len(),
            points.len()
        )));
    }
    Ok(())
}

pub fn weighted_centroids(points: &[ColourPoint], a: &Assignment) -> Result<ClusterModel> {
    check_lengths(points, a)?;
    let mut scratch = Scratch::default();
    scratch.centroids(points, &a.labels, a.k);

    let mut weights = vec![0u64; a.k];
    for (p, &l) in points.iter().zip(&a.labels) {
        weights[l as usize] += p.freq;
    }
    let centroids = scratch
        .means
        .iter()
        .zip(&weights)
        .map(|(&c, &w)| (w > 0).then_some(c))
        .collect();
    Ok(ClusterModel { centroids, weights })
}

/// Evaluates J for `a`, with the per-cluster breakdown.
pub fn objective_j(points: &[ColourPoint], a: &Assignment) -> Result<ObjectiveReport> {
    check_lengths(points, a)?;
    let mut per_cluster = vec![0.0; a.k];
    let j = evaluate(
        points,
        &a.labels,
        a.k,
        &mut Scratch::default(),
        Some(&mut per_cluster),
    );
    Ok(ObjectiveReport { j, per_cluster })
}
